//! FEN parsing and serialization.
//!
//! The grammar is the classic six-field form: piece placement rank by rank
//! (rank 8 first, `/`-separated, digits for runs of empty squares), side to
//! move, castling rights, en-passant target, halfmove clock, fullmove number.

use thiserror::Error;

use super::{CastlingRights, Color, Piece, Position, Square};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FenError {
    #[error("expected 6 whitespace-separated fields, found {0}")]
    FieldCount(usize),
    #[error("field 1 (piece placement): {0}")]
    Placement(String),
    #[error("field 2 (side to move): invalid token {0:?}")]
    SideToMove(String),
    #[error("field 3 (castling rights): invalid token {0:?}")]
    Castling(String),
    #[error("field 4 (en passant target): invalid token {0:?}")]
    EnPassant(String),
    #[error("field 5 (halfmove clock): invalid token {0:?}")]
    HalfmoveClock(String),
    #[error("field 6 (fullmove number): invalid token {0:?}")]
    FullmoveNumber(String),
}

impl Position {
    /// Parse a six-field FEN string. Only syntax is checked here; use
    /// [`validate_position`](super::validate_position) for legality.
    pub fn parse_fen(text: &str) -> Result<Position, FenError> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(FenError::FieldCount(fields.len()));
        }

        let mut position = Position::empty();

        let ranks: Vec<&str> = fields[0].split('/').collect();
        if ranks.len() != 8 {
            return Err(FenError::Placement(format!(
                "expected 8 ranks, found {}",
                ranks.len()
            )));
        }
        for (i, rank_text) in ranks.iter().enumerate() {
            let rank = 8 - i as u8;
            let mut file = 1u8;
            for c in rank_text.chars() {
                if let Some(skip) = c.to_digit(10) {
                    if skip == 0 || skip > 8 {
                        return Err(FenError::Placement(format!(
                            "invalid empty-square count {c:?} on rank {rank}"
                        )));
                    }
                    file += skip as u8;
                } else {
                    let piece = Piece::from_fen_char(c).ok_or_else(|| {
                        FenError::Placement(format!("invalid piece letter {c:?} on rank {rank}"))
                    })?;
                    if file > 8 {
                        return Err(FenError::Placement(format!(
                            "rank {rank} holds more than 8 squares"
                        )));
                    }
                    position.set_piece(Square::new(file, rank), Some(piece));
                    file += 1;
                }
            }
            if file != 9 {
                return Err(FenError::Placement(format!(
                    "rank {rank} describes {} squares, expected 8",
                    file - 1
                )));
            }
        }

        position.side_to_move = match fields[1] {
            "w" => Color::White,
            "b" => Color::Black,
            other => return Err(FenError::SideToMove(other.to_string())),
        };

        position.castling = parse_castling(fields[2])?;

        position.en_passant = match fields[3] {
            "-" => None,
            text => Some(
                Square::parse(text).ok_or_else(|| FenError::EnPassant(text.to_string()))?,
            ),
        };

        position.halfmove_clock = fields[4]
            .parse()
            .map_err(|_| FenError::HalfmoveClock(fields[4].to_string()))?;
        position.fullmove_number = fields[5]
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| FenError::FullmoveNumber(fields[5].to_string()))?;

        Ok(position)
    }

    /// Canonical FEN for this position; `parse_fen(to_fen(p))` is identity.
    pub fn to_fen(&self) -> String {
        let mut out = String::with_capacity(64);
        for rank in (1..=8).rev() {
            let mut empty = 0;
            for file in 1..=8 {
                match self.piece_at(Square::new(file, rank)) {
                    Some(piece) => {
                        if empty > 0 {
                            out.push((b'0' + empty) as char);
                            empty = 0;
                        }
                        out.push(piece.fen_char());
                    }
                    None => empty += 1,
                }
            }
            if empty > 0 {
                out.push((b'0' + empty) as char);
            }
            if rank > 1 {
                out.push('/');
            }
        }
        out.push(' ');
        out.push(match self.side_to_move {
            Color::White => 'w',
            Color::Black => 'b',
        });
        out.push(' ');
        out.push_str(&self.castling.fen_field());
        out.push(' ');
        match self.en_passant {
            Some(sq) => out.push_str(&sq.to_string()),
            None => out.push('-'),
        }
        out.push_str(&format!(" {} {}", self.halfmove_clock, self.fullmove_number));
        out
    }

    /// The piece-placement field alone (first FEN field).
    pub fn placement_field(&self) -> String {
        self.to_fen()
            .split_whitespace()
            .next()
            .expect("FEN has fields")
            .to_string()
    }
}

fn parse_castling(field: &str) -> Result<CastlingRights, FenError> {
    if field == "-" {
        return Ok(CastlingRights::none());
    }
    let mut rights = CastlingRights::none();
    if field.is_empty() || field.len() > 4 {
        return Err(FenError::Castling(field.to_string()));
    }
    for c in field.chars() {
        let flag = match c {
            'K' => &mut rights.white_kingside,
            'Q' => &mut rights.white_queenside,
            'k' => &mut rights.black_kingside,
            'q' => &mut rights.black_queenside,
            _ => return Err(FenError::Castling(field.to_string())),
        };
        if *flag {
            return Err(FenError::Castling(field.to_string()));
        }
        *flag = true;
    }
    Ok(rights)
}

#[cfg(test)]
mod tests {
    use super::super::{PieceKind, START_FEN};
    use super::*;

    #[test]
    fn parses_start_position() {
        let pos = Position::parse_fen(START_FEN).unwrap();
        assert_eq!(pos.side_to_move(), Color::White);
        assert_eq!(pos.castling(), CastlingRights::all());
        assert_eq!(pos.en_passant(), None);
        assert_eq!(pos.halfmove_clock(), 0);
        assert_eq!(pos.fullmove_number(), 1);
        assert_eq!(pos.piece_count(), 32);
        let e1 = Square::parse("e1").unwrap();
        assert_eq!(
            pos.piece_at(e1),
            Some(Piece::new(Color::White, PieceKind::King))
        );
        assert_eq!(pos.to_fen(), START_FEN);
    }

    #[test]
    fn empty_board_parses() {
        let pos = Position::parse_fen("8/8/8/8/8/8/8/8 w - - 0 1").unwrap();
        assert_eq!(pos.piece_count(), 0);
        assert_eq!(pos.to_fen(), "8/8/8/8/8/8/8/8 w - - 0 1");
    }

    #[test]
    fn rejects_wrong_rank_count() {
        let err = Position::parse_fen("rnbqkbnr/pppppppp/8/8 w KQkq - 0 1").unwrap_err();
        assert!(matches!(err, FenError::Placement(_)));
        assert!(err.to_string().contains("field 1"));
    }

    #[test]
    fn rejects_malformed_fields() {
        assert_eq!(
            Position::parse_fen("8/8/8/8/8/8/8/8 w - -").unwrap_err(),
            FenError::FieldCount(5)
        );
        assert!(matches!(
            Position::parse_fen("8/8/8/8/8/8/8/x7 w - - 0 1").unwrap_err(),
            FenError::Placement(_)
        ));
        assert!(matches!(
            Position::parse_fen("8/8/8/8/8/8/8/8 x - - 0 1").unwrap_err(),
            FenError::SideToMove(_)
        ));
        assert!(matches!(
            Position::parse_fen("8/8/8/8/8/8/8/8 w KX - 0 1").unwrap_err(),
            FenError::Castling(_)
        ));
        assert!(matches!(
            Position::parse_fen("8/8/8/8/8/8/8/8 w - e9 0 1").unwrap_err(),
            FenError::EnPassant(_)
        ));
        assert!(matches!(
            Position::parse_fen("8/8/8/8/8/8/8/8 w - - x 1").unwrap_err(),
            FenError::HalfmoveClock(_)
        ));
        assert!(matches!(
            Position::parse_fen("8/8/8/8/8/8/8/8 w - - 0 0").unwrap_err(),
            FenError::FullmoveNumber(_)
        ));
        assert!(matches!(
            Position::parse_fen("ppppppppp/8/8/8/8/8/8/8 w - - 0 1").unwrap_err(),
            FenError::Placement(_)
        ));
    }

    #[test]
    fn rejects_duplicate_castling_letters() {
        assert!(matches!(
            Position::parse_fen("8/8/8/8/8/8/8/8 w KK - 0 1").unwrap_err(),
            FenError::Castling(_)
        ));
    }

    #[test]
    fn empty_fields_serialize_as_dash() {
        let pos = Position::parse_fen("k7/8/8/8/8/8/8/K7 b - - 12 34").unwrap();
        let fen = pos.to_fen();
        assert!(fen.contains(" - - "));
        assert_eq!(fen, "k7/8/8/8/8/8/8/K7 b - - 12 34");
    }
}
