//! Bridge hands, opening leads and horizontal/vertical lead codes.
//!
//! A hand is written in dot notation, suits in the order
//! spades.hearts.diamonds.clubs, ranks `AKQJT98765432`, an empty group
//! meaning a void: `AQ3.K52.9762.T84`. A card is a suit letter followed by
//! a rank: `S2`, `DT`, `HA`.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::evidence::{Signal, SignalObservation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Suit {
    Spades,
    Hearts,
    Diamonds,
    Clubs,
}

impl Suit {
    /// In dot-notation order.
    pub const ALL: [Suit; 4] = [Suit::Spades, Suit::Hearts, Suit::Diamonds, Suit::Clubs];

    fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Suit::Spades => 'S',
            Suit::Hearts => 'H',
            Suit::Diamonds => 'D',
            Suit::Clubs => 'C',
        }
    }

    pub fn from_letter(c: char) -> Option<Suit> {
        match c {
            'S' => Some(Suit::Spades),
            'H' => Some(Suit::Hearts),
            'D' => Some(Suit::Diamonds),
            'C' => Some(Suit::Clubs),
            _ => None,
        }
    }
}

/// Card rank, ordered deuce to ace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rank {
    Two,
    Three,
    Four,
    Five,
    Six,
    Seven,
    Eight,
    Nine,
    Ten,
    Jack,
    Queen,
    King,
    Ace,
}

impl Rank {
    /// Descending, the order ranks are written within a suit group.
    pub const DESCENDING: [Rank; 13] = [
        Rank::Ace,
        Rank::King,
        Rank::Queen,
        Rank::Jack,
        Rank::Ten,
        Rank::Nine,
        Rank::Eight,
        Rank::Seven,
        Rank::Six,
        Rank::Five,
        Rank::Four,
        Rank::Three,
        Rank::Two,
    ];

    /// The top honors: ace, king, queen.
    pub const TOP_HONORS: [Rank; 3] = [Rank::Ace, Rank::King, Rank::Queen];

    fn bit(self) -> u16 {
        1 << (self as u16)
    }

    pub fn symbol(self) -> char {
        match self {
            Rank::Two => '2',
            Rank::Three => '3',
            Rank::Four => '4',
            Rank::Five => '5',
            Rank::Six => '6',
            Rank::Seven => '7',
            Rank::Eight => '8',
            Rank::Nine => '9',
            Rank::Ten => 'T',
            Rank::Jack => 'J',
            Rank::Queen => 'Q',
            Rank::King => 'K',
            Rank::Ace => 'A',
        }
    }

    pub fn from_symbol(c: char) -> Option<Rank> {
        Rank::DESCENDING.into_iter().find(|r| r.symbol() == c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Card {
    pub suit: Suit,
    pub rank: Rank,
}

impl Card {
    pub fn new(suit: Suit, rank: Rank) -> Self {
        Self { suit, rank }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.suit.letter(), self.rank.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error("expected 4 dot-separated suit groups, found {0}")]
    GroupCount(usize),
    #[error("invalid rank character {ch:?} in {suit:?} group {group:?}")]
    InvalidRank { suit: Suit, group: String, ch: char },
    #[error("duplicate card {0}")]
    Duplicate(Card),
    #[error("a hand holds 13 cards, {0:?} has {1}")]
    CardCount(String, usize),
    #[error("invalid card {0:?}: expected suit letter (S, H, D, C) followed by rank")]
    InvalidCard(String),
    #[error("invalid orientation {0:?}: expected H or V")]
    InvalidOrientation(String),
}

impl FromStr for Card {
    type Err = NotationError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut chars = s.chars();
        let (Some(sc), Some(rc), None) = (chars.next(), chars.next(), chars.next()) else {
            return Err(NotationError::InvalidCard(s.to_string()));
        };
        match (Suit::from_letter(sc), Rank::from_symbol(rc)) {
            (Some(suit), Some(rank)) => Ok(Card { suit, rank }),
            _ => Err(NotationError::InvalidCard(s.to_string())),
        }
    }
}

/// Thirteen distinct cards, stored as one rank bitmask per suit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hand {
    suits: [u16; 4],
}

impl Hand {
    pub fn from_cards(cards: &[Card]) -> std::result::Result<Self, NotationError> {
        let mut suits = [0u16; 4];
        for c in cards {
            let slot = &mut suits[c.suit.index()];
            if *slot & c.rank.bit() != 0 {
                return Err(NotationError::Duplicate(*c));
            }
            *slot |= c.rank.bit();
        }
        if cards.len() != 13 {
            let text = Hand { suits }.to_string();
            return Err(NotationError::CardCount(text, cards.len()));
        }
        Ok(Hand { suits })
    }

    pub fn contains(&self, card: Card) -> bool {
        self.suits[card.suit.index()] & card.rank.bit() != 0
    }

    pub fn suit_length(&self, suit: Suit) -> u32 {
        self.suits[suit.index()].count_ones()
    }

    pub fn has(&self, suit: Suit, rank: Rank) -> bool {
        self.contains(Card::new(suit, rank))
    }

    /// Cards of one suit, highest first.
    pub fn holding(&self, suit: Suit) -> impl Iterator<Item = Rank> + '_ {
        Rank::DESCENDING.into_iter().filter(move |r| self.has(suit, *r))
    }

    pub fn cards(&self) -> impl Iterator<Item = Card> + '_ {
        Suit::ALL
            .into_iter()
            .flat_map(move |s| self.holding(s).map(move |r| Card::new(s, r)))
    }
}

/// Parse dot notation into a hand.
pub fn parse_hand(text: &str) -> std::result::Result<Hand, NotationError> {
    let groups: Vec<&str> = text.split('.').collect();
    if groups.len() != 4 {
        return Err(NotationError::GroupCount(groups.len()));
    }
    let mut cards = Vec::with_capacity(13);
    for (suit, group) in Suit::ALL.into_iter().zip(&groups) {
        for ch in group.chars() {
            let rank = Rank::from_symbol(ch).ok_or_else(|| NotationError::InvalidRank {
                suit,
                group: group.to_string(),
                ch,
            })?;
            let card = Card::new(suit, rank);
            if cards.contains(&card) {
                return Err(NotationError::Duplicate(card));
            }
            cards.push(card);
        }
    }
    if cards.len() != 13 {
        return Err(NotationError::CardCount(text.to_string(), cards.len()));
    }
    Hand::from_cards(&cards)
}

impl FromStr for Hand {
    type Err = NotationError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_hand(s)
    }
}

/// Canonical dot notation, ranks descending.
impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, suit) in Suit::ALL.into_iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            for r in self.holding(suit) {
                write!(f, "{}", r.symbol())?;
            }
        }
        Ok(())
    }
}

/// Physical orientation of the led card.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    H,
    V,
}

impl Orientation {
    /// Horizontal is signal 1.
    pub fn signal(self) -> Signal {
        match self {
            Orientation::H => Signal::One,
            Orientation::V => Signal::Zero,
        }
    }
}

impl FromStr for Orientation {
    type Err = NotationError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "H" => Ok(Orientation::H),
            "V" => Ok(Orientation::V),
            other => Err(NotationError::InvalidOrientation(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeLeadRecord {
    pub board_no: u32,
    pub hand: Hand,
    pub lead: Card,
    pub orientation: Orientation,
}

impl BridgeLeadRecord {
    pub fn new(board_no: u32, hand: Hand, lead: Card, orientation: Orientation) -> Result<Self> {
        if board_no == 0 {
            return Err(Error::domain("board numbers start at 1"));
        }
        check_lead(&hand, lead)?;
        Ok(Self {
            board_no,
            hand,
            lead,
            orientation,
        })
    }
}

fn check_lead(hand: &Hand, lead: Card) -> Result<()> {
    if hand.contains(lead) {
        Ok(())
    } else {
        Err(Error::domain(format!("lead {lead} is not in hand {hand}")))
    }
}

/// Code C: a horizontal lead denies a top honor (A, K, Q) in the lead
/// suit, a vertical lead shows one. Singleton leads carry no signal.
pub fn code_c_expected(hand: &Hand, lead: Card) -> Result<Option<Signal>> {
    check_lead(hand, lead)?;
    if hand.suit_length(lead.suit) == 1 {
        return Ok(None);
    }
    let top_honor = Rank::TOP_HONORS.iter().any(|&r| hand.has(lead.suit, r));
    Ok(Some(Signal::from(!top_honor)))
}

/// Horizontal shows the deuce of clubs, vertical denies it.
pub fn code_deuce_clubs_expected(hand: &Hand, lead: Card) -> Result<Signal> {
    check_lead(hand, lead)?;
    Ok(Signal::from(hand.has(Suit::Clubs, Rank::Two)))
}

/// A board-number dependent code, read clause by clause:
///
/// * even board, horizontal: ace in the lead suit together with at least one
///   queen in some other suit. The vertical clause ("denies the ace unless
///   the leader has no queens") covers exactly the complement, so the
///   prediction is 1 iff both conditions hold.
/// * odd board, horizontal: king or jack in the lead suit, not both.
///   Vertical: both or neither.
pub fn code_board_parity_expected(board_no: u32, hand: &Hand, lead: Card) -> Result<Signal> {
    check_lead(hand, lead)?;
    let suit = lead.suit;
    let bit = if board_no.is_multiple_of(2) {
        let ace = hand.has(suit, Rank::Ace);
        let queen_elsewhere = Suit::ALL
            .into_iter()
            .filter(|&s| s != suit)
            .any(|s| hand.has(s, Rank::Queen));
        ace && queen_elsewhere
    } else {
        hand.has(suit, Rank::King) ^ hand.has(suit, Rank::Jack)
    };
    Ok(Signal::from(bit))
}

/// The lead codes known to the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HvCode {
    C,
    DeuceOfClubs,
    BoardParity,
}

impl HvCode {
    pub fn expected(&self, record: &BridgeLeadRecord) -> Result<Option<Signal>> {
        match self {
            HvCode::C => code_c_expected(&record.hand, record.lead),
            HvCode::DeuceOfClubs => code_deuce_clubs_expected(&record.hand, record.lead).map(Some),
            HvCode::BoardParity => {
                code_board_parity_expected(record.board_no, &record.hand, record.lead).map(Some)
            }
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            HvCode::C => "c",
            HvCode::DeuceOfClubs => "deuce-of-clubs",
            HvCode::BoardParity => "board-parity",
        }
    }
}

impl FromStr for HvCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c" => Ok(HvCode::C),
            "deuce-of-clubs" => Ok(HvCode::DeuceOfClubs),
            "board-parity" => Ok(HvCode::BoardParity),
            other => Err(Error::domain(format!(
                "unknown code {other:?}; expected c, deuce-of-clubs or board-parity"
            ))),
        }
    }
}

impl fmt::Display for HvCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Apply a code to every record, in order.
pub fn evaluate_code(code: HvCode, records: &[BridgeLeadRecord]) -> Result<Vec<SignalObservation>> {
    records
        .iter()
        .enumerate()
        .map(|(index, rec)| {
            let expected = code.expected(rec).map_err(|e| Error::Record {
                index,
                source: Box::new(e),
            })?;
            Ok(SignalObservation::new(expected, rec.orientation.signal()))
        })
        .collect()
}

const LEAD_COLUMNS: [&str; 4] = ["board", "hand", "lead", "orientation"];

/// Read a lead CSV with header `board,hand,lead,orientation`.
///
/// Columns may appear in any order but no others are allowed. Blank lines
/// are skipped.
pub fn read_leads_csv<R: Read>(input: R) -> Result<Vec<BridgeLeadRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(input);

    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(1, format!("cannot read header: {e}")))?
        .clone();
    let mut index = [usize::MAX; 4];
    for (pos, name) in headers.iter().enumerate() {
        let Some(slot) = LEAD_COLUMNS.iter().position(|c| *c == name) else {
            return Err(Error::parse(1, format!("unknown column {name:?}")));
        };
        if index[slot] != usize::MAX {
            return Err(Error::parse(1, format!("duplicate column {name:?}")));
        }
        index[slot] = pos;
    }
    if let Some(missing) = LEAD_COLUMNS.iter().zip(index).find(|(_, i)| *i == usize::MAX) {
        return Err(Error::parse(1, format!("missing column {:?}", missing.0)));
    }

    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::parse(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.iter().all(str::is_empty) {
            continue;
        }
        let field = |slot: usize| row.get(index[slot]).unwrap_or_default();

        let board_no: u32 = field(0)
            .parse()
            .ok()
            .filter(|b| *b > 0)
            .ok_or_else(|| Error::parse(line, format!("invalid board number {:?}", field(0))))?;
        let hand = parse_hand(field(1)).map_err(|e| Error::parse(line, e.to_string()))?;
        let lead: Card = field(2)
            .parse()
            .map_err(|e: NotationError| Error::parse(line, e.to_string()))?;
        let orientation: Orientation = field(3)
            .parse()
            .map_err(|e: NotationError| Error::parse(line, e.to_string()))?;
        let record = BridgeLeadRecord::new(board_no, hand, lead, orientation)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        out.push(record);
    }
    Ok(out)
}
