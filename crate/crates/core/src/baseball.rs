//! Pitch logs and the trash-can bang code.
//!
//! Code B: no bang before a fastball-family pitch, one or more bangs before
//! anything else. A pitch log records, per pitch, its type and the number of
//! bangs heard; bang counts are reduced to presence/absence for matching.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Read;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evidence::{
    log10_lr, summarize, CodedModel, MatchSummary, RandomModel, Signal, SignalObservation,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PitchRecord {
    pub game_id: String,
    pub date: NaiveDate,
    pub opponent: String,
    pub inning: u32,
    /// Order of the pitch within its game.
    pub pitch_seq: u32,
    pub pitch_type: String,
    pub bangs: u32,
}

/// What to do with a malformed or unclassifiable row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowPolicy {
    #[default]
    Fail,
    SkipWithWarning,
}

/// Records plus the warnings produced while reading or classifying them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PitchLog {
    pub records: Vec<PitchRecord>,
    pub warnings: Vec<String>,
}

const PITCH_COLUMNS: [&str; 7] = [
    "game_id",
    "date",
    "opponent",
    "inning",
    "pitch_seq",
    "pitch_type",
    "bangs",
];

/// Read a pitch CSV with header
/// `game_id,date,opponent,inning,pitch_seq,pitch_type,bangs`.
///
/// Header problems are always fatal. Row problems (bad dates, negative or
/// non-integer counts, wrong field count, a repeated `(game_id, pitch_seq)`)
/// fail the read under [`RowPolicy::Fail`] and are dropped with a
/// line-numbered warning under [`RowPolicy::SkipWithWarning`].
pub fn parse_pitch_csv<R: Read>(input: R, policy: RowPolicy) -> Result<PitchLog> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);

    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(1, format!("cannot read header: {e}")))?
        .clone();
    let mut index = [usize::MAX; 7];
    for (pos, name) in headers.iter().enumerate() {
        let Some(slot) = PITCH_COLUMNS.iter().position(|c| *c == name) else {
            return Err(Error::parse(1, format!("unknown column {name:?}")));
        };
        if index[slot] != usize::MAX {
            return Err(Error::parse(1, format!("duplicate column {name:?}")));
        }
        index[slot] = pos;
    }
    if let Some((name, _)) = PITCH_COLUMNS.iter().zip(index).find(|(_, i)| *i == usize::MAX) {
        return Err(Error::parse(1, format!("missing column {name:?}")));
    }

    let mut log = PitchLog::default();
    let mut seen: HashSet<(String, u32)> = HashSet::new();
    for row in rdr.records() {
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                return Err(Error::parse(line, e.to_string()));
            }
        };
        let line = row.position().map_or(0, |p| p.line());
        if row.iter().all(str::is_empty) {
            continue;
        }
        let parsed = parse_pitch_row(&row, &index, headers.len()).and_then(|rec| {
            if seen.insert((rec.game_id.clone(), rec.pitch_seq)) {
                Ok(rec)
            } else {
                Err(format!(
                    "duplicate pitch_seq {} in game {:?}",
                    rec.pitch_seq, rec.game_id
                ))
            }
        });
        match (parsed, policy) {
            (Ok(rec), _) => log.records.push(rec),
            (Err(msg), RowPolicy::Fail) => return Err(Error::parse(line, msg)),
            (Err(msg), RowPolicy::SkipWithWarning) => {
                log.warnings.push(format!("line {line}: skipped: {msg}"))
            }
        }
    }
    Ok(log)
}

fn parse_pitch_row(
    row: &csv::StringRecord,
    index: &[usize; 7],
    width: usize,
) -> std::result::Result<PitchRecord, String> {
    if row.len() != width {
        return Err(format!("expected {width} fields, found {}", row.len()));
    }
    let field = |slot: usize| row.get(index[slot]).unwrap_or_default();
    let positive = |slot: usize| -> std::result::Result<u32, String> {
        let raw = field(slot);
        match raw.parse::<u32>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(format!(
                "{} must be a positive integer, got {raw:?}",
                PITCH_COLUMNS[slot]
            )),
        }
    };

    let game_id = field(0);
    if game_id.is_empty() {
        return Err("empty game_id".into());
    }
    let date: NaiveDate = field(1)
        .parse()
        .map_err(|_| format!("malformed date {:?}, expected YYYY-MM-DD", field(1)))?;
    let bangs_raw = field(6);
    let bangs = match bangs_raw.parse::<i64>() {
        Ok(b) if b < 0 => return Err(format!("bangs must be >= 0, got {b}")),
        Ok(b) => u32::try_from(b).map_err(|_| format!("bang count {b} out of range"))?,
        Err(_) => return Err(format!("bangs must be an integer, got {bangs_raw:?}")),
    };
    let pitch_type = field(5);
    if pitch_type.is_empty() {
        return Err("empty pitch_type".into());
    }

    Ok(PitchRecord {
        game_id: game_id.to_string(),
        date,
        opponent: field(2).to_string(),
        inning: positive(3)?,
        pitch_seq: positive(4)?,
        pitch_type: pitch_type.to_string(),
        bangs,
    })
}

/// Partition of pitch-type tokens into fastballs and off-speed pitches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PitchTaxonomy {
    fastball: BTreeSet<String>,
    offspeed: BTreeSet<String>,
}

impl Default for PitchTaxonomy {
    /// Standard MLB pitch-type tokens.
    fn default() -> Self {
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        Self {
            // four-seam, two-seam, cutter, sinker, split-finger
            fastball: set(&["FF", "FT", "FC", "SI", "FS"]),
            offspeed: set(&["CH", "CU", "SL", "KC", "KN", "EP", "FO", "SC"]),
        }
    }
}

impl PitchTaxonomy {
    pub fn new<I, J, S, T>(fastball: I, offspeed: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let fastball: BTreeSet<String> = fastball.into_iter().map(Into::into).collect();
        let offspeed: BTreeSet<String> = offspeed.into_iter().map(Into::into).collect();
        if let Some(both) = fastball.intersection(&offspeed).next() {
            return Err(Error::domain(format!(
                "pitch type {both:?} is listed as both fastball and offspeed"
            )));
        }
        Ok(Self { fastball, offspeed })
    }

    /// Read a two-column `pitch_type,class` CSV, class one of `fastball`/`offspeed`.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let headers = rdr.headers().map_err(|e| Error::parse(1, e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["pitch_type", "class"] {
            return Err(Error::parse(1, "taxonomy header must be `pitch_type,class`"));
        }
        let mut fastball = Vec::new();
        let mut offspeed = Vec::new();
        for row in rdr.records() {
            let row = row.map_err(|e| Error::parse(e.position().map_or(0, |p| p.line()), e.to_string()))?;
            let line = row.position().map_or(0, |p| p.line());
            if row.iter().all(str::is_empty) {
                continue;
            }
            let token = row.get(0).unwrap_or_default();
            if token.is_empty() {
                return Err(Error::parse(line, "empty pitch_type"));
            }
            match row.get(1).unwrap_or_default() {
                "fastball" => fastball.push(token.to_string()),
                "offspeed" => offspeed.push(token.to_string()),
                other => {
                    return Err(Error::parse(
                        line,
                        format!("class must be fastball or offspeed, got {other:?}"),
                    ))
                }
            }
        }
        Self::new(fastball, offspeed).map_err(|e| Error::parse(0, e.to_string()))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.fastball.contains(token) || self.offspeed.contains(token)
    }

    pub fn fastball_types(&self) -> impl Iterator<Item = &str> {
        self.fastball.iter().map(String::as_str)
    }

    pub fn offspeed_types(&self) -> impl Iterator<Item = &str> {
        self.offspeed.iter().map(String::as_str)
    }
}

/// Code B's prediction: 0 (no bang) for fastballs, 1 (bang) otherwise.
pub fn code_b_expected(pitch_type: &str, taxonomy: &PitchTaxonomy) -> Result<Signal> {
    if taxonomy.fastball.contains(pitch_type) {
        Ok(Signal::Zero)
    } else if taxonomy.offspeed.contains(pitch_type) {
        Ok(Signal::One)
    } else {
        Err(Error::domain(format!("unknown pitch type {pitch_type:?}")))
    }
}

/// One or more bangs is signal 1.
pub fn binarize_bangs(bangs: u32) -> Signal {
    Signal::from(bangs >= 1)
}

/// Code B observations for a run of pitches.
///
/// Pitches of unknown type fail the call under [`RowPolicy::Fail`]; under
/// [`RowPolicy::SkipWithWarning`] they are left out and reported.
pub fn code_b_observations(
    records: &[PitchRecord],
    taxonomy: &PitchTaxonomy,
    unknown: RowPolicy,
) -> Result<(Vec<SignalObservation>, Vec<String>)> {
    let mut obs = Vec::with_capacity(records.len());
    let mut warnings = Vec::new();
    for (index, rec) in records.iter().enumerate() {
        match code_b_expected(&rec.pitch_type, taxonomy) {
            Ok(expected) => obs.push(SignalObservation::new(Some(expected), binarize_bangs(rec.bangs))),
            Err(e) => match unknown {
                RowPolicy::Fail => {
                    return Err(Error::Record {
                        index,
                        source: Box::new(e),
                    })
                }
                RowPolicy::SkipWithWarning => warnings.push(format!(
                    "game {} pitch {}: skipped unknown pitch type {:?}",
                    rec.game_id, rec.pitch_seq, rec.pitch_type
                )),
            },
        }
    }
    Ok((obs, warnings))
}

/// Baseline bang frequency over a date window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BangRate {
    /// Banged pitches / pitches, over the whole window.
    pub per_pitch_rate: f64,
    /// Highest per-game banged fraction.
    pub per_game_max_rate: f64,
    pub games: usize,
    pub pitches: usize,
}

/// Bang rate for pitches dated within `[from, to]`, both inclusive.
pub fn estimate_bang_rate(records: &[PitchRecord], from: NaiveDate, to: NaiveDate) -> Result<BangRate> {
    if from > to {
        return Err(Error::domain(format!("empty date range {from} .. {to}")));
    }
    // game_id -> (pitches, banged)
    let mut per_game: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for rec in records.iter().filter(|r| r.date >= from && r.date <= to) {
        let entry = per_game.entry(rec.game_id.as_str()).or_default();
        entry.0 += 1;
        entry.1 += usize::from(binarize_bangs(rec.bangs).as_u8());
    }
    let pitches: usize = per_game.values().map(|(p, _)| p).sum();
    if pitches == 0 {
        return Err(Error::domain(format!(
            "no pitches recorded between {from} and {to}"
        )));
    }
    let banged: usize = per_game.values().map(|(_, b)| b).sum();
    let per_game_max_rate = per_game
        .values()
        .map(|&(p, b)| b as f64 / p as f64)
        .fold(0.0, f64::max);

    Ok(BangRate {
        per_pitch_rate: banged as f64 / pitches as f64,
        per_game_max_rate,
        games: per_game.len(),
        pitches,
    })
}

/// All pitches of one game, in pitch order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameGroup {
    pub game_id: String,
    pub date: NaiveDate,
    pub opponent: String,
    pub records: Vec<PitchRecord>,
}

/// Group records by `game_id`; groups come back in `game_id` order.
pub fn group_by_game(records: &[PitchRecord]) -> Vec<GameGroup> {
    let mut map: BTreeMap<&str, Vec<PitchRecord>> = BTreeMap::new();
    for r in records {
        map.entry(r.game_id.as_str()).or_default().push(r.clone());
    }
    map.into_iter()
        .map(|(id, mut recs)| {
            recs.sort_by_key(|r| r.pitch_seq);
            GameGroup {
                game_id: id.to_string(),
                date: recs[0].date,
                opponent: recs[0].opponent.clone(),
                records: recs,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameEvidence {
    pub game_id: String,
    pub date: NaiveDate,
    pub opponent: String,
    pub summary: MatchSummary,
    pub log10_lr: f64,
}

pub const PER_GAME_ASSUMPTION: &str =
    "combined figure sums per-game log10 LRs: games are independent and each has its own q";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerGameEvidence {
    pub games: Vec<GameEvidence>,
    pub combined_log10_lr: f64,
    pub assumption: String,
    pub warnings: Vec<String>,
}

/// Likelihood ratio of each game on its own, and their log-sum.
///
/// A game without applicable pitches contributes exactly 0.
pub fn per_game_evidence(
    records: &[PitchRecord],
    taxonomy: &PitchTaxonomy,
    unknown: RowPolicy,
    coded: &CodedModel,
    random: &RandomModel,
) -> Result<PerGameEvidence> {
    let groups = group_by_game(records);
    let evaluated: Vec<(GameEvidence, Vec<String>)> = groups
        .par_iter()
        .map(|g| {
            let (obs, warnings) = code_b_observations(&g.records, taxonomy, unknown)?;
            let summary = summarize(&obs);
            let lr = if summary.n == 0 {
                0.0
            } else {
                log10_lr(&summary, coded, random)?
            };
            Ok((
                GameEvidence {
                    game_id: g.game_id.clone(),
                    date: g.date,
                    opponent: g.opponent.clone(),
                    summary,
                    log10_lr: lr,
                },
                warnings,
            ))
        })
        .collect::<Result<_>>()?;

    let mut games = Vec::with_capacity(evaluated.len());
    let mut warnings = Vec::new();
    for (g, w) in evaluated {
        games.push(g);
        warnings.extend(w);
    }
    let combined_log10_lr = games.iter().map(|g| g.log10_lr).sum();
    Ok(PerGameEvidence {
        games,
        combined_log10_lr,
        assumption: PER_GAME_ASSUMPTION.to_string(),
        warnings,
    })
}
