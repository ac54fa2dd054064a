//! Ground-truth chess rules: position representation, FEN round-tripping,
//! legal move generation, position legality validation, seeded random walks
//! and game-phase classification.
//!
//! Everything in this module is an immutable value type; all operations are
//! pure functions and safe to call from concurrent workers.

mod fen;
mod movegen;
mod random;
mod validate;

pub use fen::FenError;
pub use random::{random_legal_position, RandomWalkError, WALK_RETRY_BUDGET};
pub use validate::{validate_position, ValidationReport, Violation, ViolationCategory};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A board square, file `a`..`h` mapped to 1..=8 and rank 1..=8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    file: u8,
    rank: u8,
}

impl Square {
    /// Both coordinates must lie in 1..=8.
    pub fn new(file: u8, rank: u8) -> Square {
        assert!(
            (1..=8).contains(&file) && (1..=8).contains(&rank),
            "square coordinates out of range: file {file}, rank {rank}"
        );
        Square { file, rank }
    }

    pub fn try_new(file: u8, rank: u8) -> Option<Square> {
        if (1..=8).contains(&file) && (1..=8).contains(&rank) {
            Some(Square { file, rank })
        } else {
            None
        }
    }

    pub const fn file(self) -> u8 {
        self.file
    }

    pub const fn rank(self) -> u8 {
        self.rank
    }

    pub(crate) const fn index(self) -> usize {
        ((self.rank - 1) * 8 + (self.file - 1)) as usize
    }

    pub(crate) fn from_index(index: usize) -> Square {
        debug_assert!(index < 64);
        Square {
            file: (index % 8) as u8 + 1,
            rank: (index / 8) as u8 + 1,
        }
    }

    /// Offset by (file delta, rank delta); `None` when it leaves the board.
    pub fn offset(self, df: i8, dr: i8) -> Option<Square> {
        let file = self.file as i8 + df;
        let rank = self.rank as i8 + dr;
        if (1..=8).contains(&file) && (1..=8).contains(&rank) {
            Some(Square {
                file: file as u8,
                rank: rank as u8,
            })
        } else {
            None
        }
    }

    /// Parse algebraic coordinates such as `e4`.
    pub fn parse(text: &str) -> Option<Square> {
        let bytes = text.as_bytes();
        if bytes.len() != 2 {
            return None;
        }
        let file = bytes[0].wrapping_sub(b'a') + 1;
        let rank = bytes[1].wrapping_sub(b'0');
        Square::try_new(file, rank)
    }

    pub fn all() -> impl Iterator<Item = Square> {
        (0..64).map(Square::from_index)
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            (b'a' + self.file - 1) as char,
            (b'0' + self.rank) as char
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub const fn opposite(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::White => write!(f, "white"),
            Color::Black => write!(f, "black"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    Pawn,
    Knight,
    Bishop,
    Rook,
    Queen,
    King,
}

impl PieceKind {
    pub const ALL: [PieceKind; 6] = [
        PieceKind::Pawn,
        PieceKind::Knight,
        PieceKind::Bishop,
        PieceKind::Rook,
        PieceKind::Queen,
        PieceKind::King,
    ];

    /// Lowercase letter used in FEN and coordinate-notation promotions.
    pub const fn letter(self) -> char {
        match self {
            PieceKind::Pawn => 'p',
            PieceKind::Knight => 'n',
            PieceKind::Bishop => 'b',
            PieceKind::Rook => 'r',
            PieceKind::Queen => 'q',
            PieceKind::King => 'k',
        }
    }

    pub fn from_letter(c: char) -> Option<PieceKind> {
        Some(match c.to_ascii_lowercase() {
            'p' => PieceKind::Pawn,
            'n' => PieceKind::Knight,
            'b' => PieceKind::Bishop,
            'r' => PieceKind::Rook,
            'q' => PieceKind::Queen,
            'k' => PieceKind::King,
            _ => return None,
        })
    }

    pub const fn name(self) -> &'static str {
        match self {
            PieceKind::Pawn => "pawn",
            PieceKind::Knight => "knight",
            PieceKind::Bishop => "bishop",
            PieceKind::Rook => "rook",
            PieceKind::Queen => "queen",
            PieceKind::King => "king",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Piece {
    pub kind: PieceKind,
    pub color: Color,
}

impl Piece {
    pub const fn new(color: Color, kind: PieceKind) -> Piece {
        Piece { kind, color }
    }

    /// FEN letter: uppercase for white, lowercase for black.
    pub fn fen_char(self) -> char {
        match self.color {
            Color::White => self.kind.letter().to_ascii_uppercase(),
            Color::Black => self.kind.letter(),
        }
    }

    pub fn from_fen_char(c: char) -> Option<Piece> {
        let kind = PieceKind::from_letter(c)?;
        let color = if c.is_ascii_uppercase() {
            Color::White
        } else {
            Color::Black
        };
        Some(Piece { kind, color })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CastlingRights {
    pub white_kingside: bool,
    pub white_queenside: bool,
    pub black_kingside: bool,
    pub black_queenside: bool,
}

impl CastlingRights {
    pub const fn none() -> CastlingRights {
        CastlingRights {
            white_kingside: false,
            white_queenside: false,
            black_kingside: false,
            black_queenside: false,
        }
    }

    pub const fn all() -> CastlingRights {
        CastlingRights {
            white_kingside: true,
            white_queenside: true,
            black_kingside: true,
            black_queenside: true,
        }
    }

    pub const fn any(self) -> bool {
        self.white_kingside || self.white_queenside || self.black_kingside || self.black_queenside
    }

    /// FEN castling field: subset of `KQkq`, or `-` when empty.
    pub fn fen_field(self) -> String {
        let mut s = String::new();
        if self.white_kingside {
            s.push('K');
        }
        if self.white_queenside {
            s.push('Q');
        }
        if self.black_kingside {
            s.push('k');
        }
        if self.black_queenside {
            s.push('q');
        }
        if s.is_empty() {
            s.push('-');
        }
        s
    }
}

/// A chess move in from/to coordinate form with bookkeeping flags.
///
/// Flags are derived by move generation; [`Position::apply_move`] matches
/// moves on `(from, to, promotion)` and executes the generator's canonical
/// form, so hand-built flags never corrupt the game state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub from: Square,
    pub to: Square,
    pub promotion: Option<PieceKind>,
    pub flags: MoveFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MoveFlags {
    pub capture: bool,
    pub castle_kingside: bool,
    pub castle_queenside: bool,
    pub en_passant_capture: bool,
}

impl Move {
    /// Coordinate notation used for UCI interchange, e.g. `e2e4`, `e7e8q`.
    pub fn uci(&self) -> String {
        match self.promotion {
            Some(kind) => format!("{}{}{}", self.from, self.to, kind.letter()),
            None => format!("{}{}", self.from, self.to),
        }
    }

    /// Parse bare coordinate text into (from, to, promotion) with empty flags.
    pub fn parse_uci(text: &str) -> Option<Move> {
        if text.len() != 4 && text.len() != 5 {
            return None;
        }
        let from = Square::parse(&text[0..2])?;
        let to = Square::parse(&text[2..4])?;
        let promotion = match text.len() {
            5 => {
                let kind = PieceKind::from_letter(text.chars().nth(4)?)?;
                if matches!(kind, PieceKind::Pawn | PieceKind::King) {
                    return None;
                }
                Some(kind)
            }
            _ => None,
        };
        Some(Move {
            from,
            to,
            promotion,
            flags: MoveFlags::default(),
        })
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.uci())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GamePhase {
    Opening,
    Middlegame,
    Endgame,
}

impl fmt::Display for GamePhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GamePhase::Opening => write!(f, "opening"),
            GamePhase::Middlegame => write!(f, "middlegame"),
            GamePhase::Endgame => write!(f, "endgame"),
        }
    }
}

#[derive(Debug, Error)]
pub enum MoveError {
    #[error("position is not legal: {0}")]
    IllegalPosition(String),
    #[error("illegal move {mv}: {rule}")]
    IllegalMove { mv: String, rule: String },
}

/// A full game state: piece placement, side to move, castling rights,
/// en-passant target and the two move clocks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Position {
    pub(crate) board: [Option<Piece>; 64],
    pub(crate) side_to_move: Color,
    pub(crate) castling: CastlingRights,
    pub(crate) en_passant: Option<Square>,
    pub(crate) halfmove_clock: u32,
    pub(crate) fullmove_number: u32,
}

pub const START_FEN: &str = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

impl Position {
    /// Empty board, white to move, no rights, no en passant.
    pub fn empty() -> Position {
        Position {
            board: [None; 64],
            side_to_move: Color::White,
            castling: CastlingRights::none(),
            en_passant: None,
            halfmove_clock: 0,
            fullmove_number: 1,
        }
    }

    /// The standard starting position.
    pub fn start() -> Position {
        Position::parse_fen(START_FEN).expect("start FEN is well formed")
    }

    pub fn piece_at(&self, sq: Square) -> Option<Piece> {
        self.board[sq.index()]
    }

    pub fn set_piece(&mut self, sq: Square, piece: Option<Piece>) {
        self.board[sq.index()] = piece;
    }

    pub const fn side_to_move(&self) -> Color {
        self.side_to_move
    }

    pub fn set_side_to_move(&mut self, color: Color) {
        self.side_to_move = color;
    }

    pub const fn castling(&self) -> CastlingRights {
        self.castling
    }

    pub fn set_castling(&mut self, rights: CastlingRights) {
        self.castling = rights;
    }

    pub const fn en_passant(&self) -> Option<Square> {
        self.en_passant
    }

    pub fn set_en_passant(&mut self, sq: Option<Square>) {
        self.en_passant = sq;
    }

    pub const fn halfmove_clock(&self) -> u32 {
        self.halfmove_clock
    }

    pub fn set_halfmove_clock(&mut self, clock: u32) {
        self.halfmove_clock = clock;
    }

    pub const fn fullmove_number(&self) -> u32 {
        self.fullmove_number
    }

    pub fn set_fullmove_number(&mut self, n: u32) {
        self.fullmove_number = n.max(1);
    }

    /// All occupied squares with their pieces, in square order (a1..h8).
    pub fn pieces(&self) -> impl Iterator<Item = (Square, Piece)> + '_ {
        self.board
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|piece| (Square::from_index(i), piece)))
    }

    pub fn piece_count(&self) -> usize {
        self.board.iter().filter(|p| p.is_some()).count()
    }

    pub fn count_of(&self, color: Color, kind: PieceKind) -> usize {
        self.board
            .iter()
            .flatten()
            .filter(|p| p.color == color && p.kind == kind)
            .count()
    }

    pub fn king_square(&self, color: Color) -> Option<Square> {
        self.pieces()
            .find(|(_, p)| p.color == color && p.kind == PieceKind::King)
            .map(|(sq, _)| sq)
    }

    pub fn has_pawns(&self) -> bool {
        self.board
            .iter()
            .flatten()
            .any(|p| p.kind == PieceKind::Pawn)
    }

    /// True when `color`'s king is attacked by the other side.
    pub fn in_check(&self, color: Color) -> bool {
        match self.king_square(color) {
            Some(sq) => self.is_attacked(sq, color.opposite()),
            None => false,
        }
    }

    /// Deterministic bucketing by total piece count: >= 26 opening,
    /// 13..=25 middlegame, <= 12 endgame.
    pub fn phase(&self) -> GamePhase {
        match self.piece_count() {
            n if n >= 26 => GamePhase::Opening,
            n if n >= 13 => GamePhase::Middlegame,
            _ => GamePhase::Endgame,
        }
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Position({})", self.to_fen())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_fen())
    }
}

/// Free-function aliases matching the operation names used around the crate.
pub fn classify_phase(position: &Position) -> GamePhase {
    position.phase()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roundtrip() {
        for sq in Square::all() {
            let text = sq.to_string();
            assert_eq!(Square::parse(&text), Some(sq));
            assert_eq!(Square::from_index(sq.index()), sq);
        }
        assert_eq!(Square::parse("i3"), None);
        assert_eq!(Square::parse("a9"), None);
        assert_eq!(Square::parse("e"), None);
    }

    #[test]
    fn square_coordinates() {
        let e4 = Square::parse("e4").unwrap();
        assert_eq!(e4.file(), 5);
        assert_eq!(e4.rank(), 4);
        assert_eq!(Square::new(1, 1).to_string(), "a1");
        assert_eq!(Square::new(8, 8).to_string(), "h8");
    }

    #[test]
    fn move_uci_roundtrip() {
        let m = Move::parse_uci("e2e4").unwrap();
        assert_eq!(m.from, Square::parse("e2").unwrap());
        assert_eq!(m.to, Square::parse("e4").unwrap());
        assert_eq!(m.promotion, None);
        assert_eq!(m.uci(), "e2e4");

        let promo = Move::parse_uci("e7e8q").unwrap();
        assert_eq!(promo.promotion, Some(PieceKind::Queen));
        assert_eq!(promo.uci(), "e7e8q");

        assert!(Move::parse_uci("e7e8k").is_none());
        assert!(Move::parse_uci("e2").is_none());
    }

    #[test]
    fn phase_buckets() {
        assert_eq!(Position::start().phase(), GamePhase::Opening);
        let endgame = Position::parse_fen("k7/8/8/8/8/8/8/KR6 w - - 0 1").unwrap();
        assert_eq!(endgame.phase(), GamePhase::Endgame);
        // 18 pieces: middlegame.
        let mid =
            Position::parse_fen("rnbqkbnr/pppp4/8/8/8/8/PPPP4/RNBQKBNR w KQkq - 0 1").unwrap();
        assert_eq!(mid.piece_count(), 24);
        assert_eq!(mid.phase(), GamePhase::Middlegame);
    }
}
