//! Legal move generation, move application and perft.
//!
//! The board is a plain 8x8 mailbox; legality is decided by making each
//! pseudo-legal move on a copy and rejecting those that leave the mover's
//! king attacked. Simple and easy to audit against the FIDE rules.

use super::{
    Color, Move, MoveError, MoveFlags, Piece, PieceKind, Position, Square,
};

const KNIGHT_DELTAS: [(i8, i8); 8] = [
    (-2, -1),
    (-2, 1),
    (-1, -2),
    (-1, 2),
    (1, -2),
    (1, 2),
    (2, -1),
    (2, 1),
];
const KING_DELTAS: [(i8, i8); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];
const ROOK_DIRS: [(i8, i8); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const BISHOP_DIRS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

impl Position {
    /// True when `sq` is attacked by any piece of `by`.
    pub fn is_attacked(&self, sq: Square, by: Color) -> bool {
        // Pawns: a white pawn on (f-1, r-1)/(f+1, r-1) attacks (f, r).
        let pawn_rank_delta: i8 = match by {
            Color::White => -1,
            Color::Black => 1,
        };
        for df in [-1i8, 1] {
            if let Some(from) = sq.offset(df, pawn_rank_delta) {
                if self.piece_at(from) == Some(Piece::new(by, PieceKind::Pawn)) {
                    return true;
                }
            }
        }
        for (df, dr) in KNIGHT_DELTAS {
            if let Some(from) = sq.offset(df, dr) {
                if self.piece_at(from) == Some(Piece::new(by, PieceKind::Knight)) {
                    return true;
                }
            }
        }
        for (df, dr) in KING_DELTAS {
            if let Some(from) = sq.offset(df, dr) {
                if self.piece_at(from) == Some(Piece::new(by, PieceKind::King)) {
                    return true;
                }
            }
        }
        for (dirs, diagonal) in [(ROOK_DIRS, false), (BISHOP_DIRS, true)] {
            for (df, dr) in dirs {
                let mut cur = sq;
                while let Some(next) = cur.offset(df, dr) {
                    cur = next;
                    match self.piece_at(cur) {
                        None => continue,
                        Some(p) => {
                            if p.color == by
                                && (p.kind == PieceKind::Queen
                                    || p.kind
                                        == if diagonal {
                                            PieceKind::Bishop
                                        } else {
                                            PieceKind::Rook
                                        })
                            {
                                return true;
                            }
                            break;
                        }
                    }
                }
            }
        }
        false
    }

    /// Exactly the FIDE-legal moves for the side to move, castling,
    /// promotion and en passant included. Errors on an illegal position.
    pub fn legal_moves(&self) -> Result<Vec<Move>, MoveError> {
        let report = super::validate_position(self);
        if !report.legal {
            return Err(MoveError::IllegalPosition(report.summary()));
        }
        Ok(self.legal_moves_unchecked())
    }

    /// Legal move list without re-validating the position. Callers must
    /// hold a position reachable from a validated one.
    pub(crate) fn legal_moves_unchecked(&self) -> Vec<Move> {
        let us = self.side_to_move;
        let mut moves = Vec::with_capacity(48);
        self.pseudo_legal_moves(&mut moves);
        moves.retain(|m| {
            let next = self.apply_unchecked(m);
            !next.in_check(us)
        });
        moves
    }

    fn pseudo_legal_moves(&self, moves: &mut Vec<Move>) {
        let us = self.side_to_move;
        for (from, piece) in self.pieces().filter(|(_, p)| p.color == us) {
            match piece.kind {
                PieceKind::Pawn => self.pawn_moves(from, moves),
                PieceKind::Knight => self.leaper_moves(from, &KNIGHT_DELTAS, moves),
                PieceKind::King => self.leaper_moves(from, &KING_DELTAS, moves),
                PieceKind::Bishop => self.slider_moves(from, &BISHOP_DIRS, moves),
                PieceKind::Rook => self.slider_moves(from, &ROOK_DIRS, moves),
                PieceKind::Queen => {
                    self.slider_moves(from, &ROOK_DIRS, moves);
                    self.slider_moves(from, &BISHOP_DIRS, moves);
                }
            }
        }
        self.castling_moves(moves);
    }

    fn push_pawn_move(from: Square, to: Square, capture: bool, ep: bool, moves: &mut Vec<Move>) {
        let flags = MoveFlags {
            capture,
            en_passant_capture: ep,
            ..MoveFlags::default()
        };
        if to.rank() == 1 || to.rank() == 8 {
            for kind in [
                PieceKind::Queen,
                PieceKind::Rook,
                PieceKind::Bishop,
                PieceKind::Knight,
            ] {
                moves.push(Move {
                    from,
                    to,
                    promotion: Some(kind),
                    flags,
                });
            }
        } else {
            moves.push(Move {
                from,
                to,
                promotion: None,
                flags,
            });
        }
    }

    fn pawn_moves(&self, from: Square, moves: &mut Vec<Move>) {
        let us = self.side_to_move;
        let dir: i8 = match us {
            Color::White => 1,
            Color::Black => -1,
        };
        let start_rank = match us {
            Color::White => 2,
            Color::Black => 7,
        };
        if let Some(one) = from.offset(0, dir) {
            if self.piece_at(one).is_none() {
                Self::push_pawn_move(from, one, false, false, moves);
                if from.rank() == start_rank {
                    let two = from.offset(0, 2 * dir).expect("double push stays on board");
                    if self.piece_at(two).is_none() {
                        Self::push_pawn_move(from, two, false, false, moves);
                    }
                }
            }
        }
        for df in [-1i8, 1] {
            if let Some(to) = from.offset(df, dir) {
                match self.piece_at(to) {
                    Some(p) if p.color != us => {
                        Self::push_pawn_move(from, to, true, false, moves);
                    }
                    None if Some(to) == self.en_passant => {
                        Self::push_pawn_move(from, to, true, true, moves);
                    }
                    _ => {}
                }
            }
        }
    }

    fn leaper_moves(&self, from: Square, deltas: &[(i8, i8)], moves: &mut Vec<Move>) {
        let us = self.side_to_move;
        for &(df, dr) in deltas {
            if let Some(to) = from.offset(df, dr) {
                match self.piece_at(to) {
                    None => moves.push(Move {
                        from,
                        to,
                        promotion: None,
                        flags: MoveFlags::default(),
                    }),
                    Some(p) if p.color != us => moves.push(Move {
                        from,
                        to,
                        promotion: None,
                        flags: MoveFlags {
                            capture: true,
                            ..MoveFlags::default()
                        },
                    }),
                    Some(_) => {}
                }
            }
        }
    }

    fn slider_moves(&self, from: Square, dirs: &[(i8, i8)], moves: &mut Vec<Move>) {
        let us = self.side_to_move;
        for &(df, dr) in dirs {
            let mut cur = from;
            while let Some(to) = cur.offset(df, dr) {
                cur = to;
                match self.piece_at(to) {
                    None => moves.push(Move {
                        from,
                        to,
                        promotion: None,
                        flags: MoveFlags::default(),
                    }),
                    Some(p) => {
                        if p.color != us {
                            moves.push(Move {
                                from,
                                to,
                                promotion: None,
                                flags: MoveFlags {
                                    capture: true,
                                    ..MoveFlags::default()
                                },
                            });
                        }
                        break;
                    }
                }
            }
        }
    }

    fn castling_moves(&self, moves: &mut Vec<Move>) {
        let us = self.side_to_move;
        let home_rank = match us {
            Color::White => 1,
            Color::Black => 8,
        };
        let king_from = Square::new(5, home_rank);
        if self.piece_at(king_from) != Some(Piece::new(us, PieceKind::King)) {
            return;
        }
        if self.in_check(us) {
            return;
        }
        let them = us.opposite();
        let (kingside, queenside) = match us {
            Color::White => (self.castling.white_kingside, self.castling.white_queenside),
            Color::Black => (self.castling.black_kingside, self.castling.black_queenside),
        };
        if kingside
            && self.piece_at(Square::new(8, home_rank)) == Some(Piece::new(us, PieceKind::Rook))
            && self.piece_at(Square::new(6, home_rank)).is_none()
            && self.piece_at(Square::new(7, home_rank)).is_none()
            && !self.is_attacked(Square::new(6, home_rank), them)
            && !self.is_attacked(Square::new(7, home_rank), them)
        {
            moves.push(Move {
                from: king_from,
                to: Square::new(7, home_rank),
                promotion: None,
                flags: MoveFlags {
                    castle_kingside: true,
                    ..MoveFlags::default()
                },
            });
        }
        if queenside
            && self.piece_at(Square::new(1, home_rank)) == Some(Piece::new(us, PieceKind::Rook))
            && self.piece_at(Square::new(2, home_rank)).is_none()
            && self.piece_at(Square::new(3, home_rank)).is_none()
            && self.piece_at(Square::new(4, home_rank)).is_none()
            && !self.is_attacked(Square::new(4, home_rank), them)
            && !self.is_attacked(Square::new(3, home_rank), them)
        {
            moves.push(Move {
                from: king_from,
                to: Square::new(3, home_rank),
                promotion: None,
                flags: MoveFlags {
                    castle_queenside: true,
                    ..MoveFlags::default()
                },
            });
        }
    }

    /// Apply a legal move, returning the resulting position. The move is
    /// matched against the legal move list on `(from, to, promotion)`; the
    /// generator's canonical flags are the ones executed.
    pub fn apply_move(&self, mv: &Move) -> Result<Position, MoveError> {
        let legal = self.legal_moves()?;
        let canonical = legal
            .iter()
            .find(|m| m.from == mv.from && m.to == mv.to && m.promotion == mv.promotion)
            .ok_or_else(|| {
                let rule = self.explain_illegal(mv);
                MoveError::IllegalMove {
                    mv: mv.uci(),
                    rule,
                }
            })?;
        Ok(self.apply_unchecked(canonical))
    }

    fn explain_illegal(&self, mv: &Move) -> String {
        match self.piece_at(mv.from) {
            None => format!("no piece on {}", mv.from),
            Some(p) if p.color != self.side_to_move => {
                format!("piece on {} belongs to the side not to move", mv.from)
            }
            Some(p) => {
                if self
                    .piece_at(mv.to)
                    .is_some_and(|t| t.color == self.side_to_move)
                {
                    return format!("destination {} holds a friendly piece", mv.to);
                }
                if p.kind == PieceKind::Pawn
                    && (mv.to.rank() == 1 || mv.to.rank() == 8)
                    && mv.promotion.is_none()
                {
                    return "pawn reaching the back rank must promote".to_string();
                }
                let mut pseudo = Vec::new();
                self.pseudo_legal_moves(&mut pseudo);
                if pseudo
                    .iter()
                    .any(|m| m.from == mv.from && m.to == mv.to && m.promotion == mv.promotion)
                {
                    "move would leave own king in check".to_string()
                } else {
                    format!("{} does not move that way", p.kind.name())
                }
            }
        }
    }

    /// Move execution without legality checks; `mv` must come from the
    /// generator for this position.
    pub(crate) fn apply_unchecked(&self, mv: &Move) -> Position {
        let mut next = self.clone();
        let us = self.side_to_move;
        let piece = self.piece_at(mv.from).expect("moving piece exists");

        next.set_piece(mv.from, None);
        if mv.flags.en_passant_capture {
            let victim = Square::new(
                mv.to.file(),
                match us {
                    Color::White => mv.to.rank() - 1,
                    Color::Black => mv.to.rank() + 1,
                },
            );
            next.set_piece(victim, None);
        }
        let placed = match mv.promotion {
            Some(kind) => Piece::new(us, kind),
            None => piece,
        };
        next.set_piece(mv.to, Some(placed));

        if mv.flags.castle_kingside {
            let rank = mv.from.rank();
            next.set_piece(Square::new(8, rank), None);
            next.set_piece(Square::new(6, rank), Some(Piece::new(us, PieceKind::Rook)));
        } else if mv.flags.castle_queenside {
            let rank = mv.from.rank();
            next.set_piece(Square::new(1, rank), None);
            next.set_piece(Square::new(4, rank), Some(Piece::new(us, PieceKind::Rook)));
        }

        // Castling rights: clear on king moves, rook moves off home squares,
        // and captures landing on rook home squares.
        let mut rights = next.castling;
        if piece.kind == PieceKind::King {
            match us {
                Color::White => {
                    rights.white_kingside = false;
                    rights.white_queenside = false;
                }
                Color::Black => {
                    rights.black_kingside = false;
                    rights.black_queenside = false;
                }
            }
        }
        let touches = |file, rank| {
            let sq = Square::new(file, rank);
            mv.from == sq || mv.to == sq
        };
        if touches(8, 1) {
            rights.white_kingside = false;
        }
        if touches(1, 1) {
            rights.white_queenside = false;
        }
        if touches(8, 8) {
            rights.black_kingside = false;
        }
        if touches(1, 8) {
            rights.black_queenside = false;
        }
        next.castling = rights;

        next.en_passant = if piece.kind == PieceKind::Pawn
            && (mv.from.rank() as i8 - mv.to.rank() as i8).abs() == 2
        {
            Some(Square::new(
                mv.from.file(),
                (mv.from.rank() + mv.to.rank()) / 2,
            ))
        } else {
            None
        };

        if piece.kind == PieceKind::Pawn || mv.flags.capture {
            next.halfmove_clock = 0;
        } else {
            next.halfmove_clock = self.halfmove_clock + 1;
        }
        if us == Color::Black {
            next.fullmove_number = self.fullmove_number + 1;
        }
        next.side_to_move = us.opposite();
        next
    }

    /// Leaf-node count of the legal move tree at exactly `depth`.
    pub fn perft(&self, depth: u32) -> Result<u64, MoveError> {
        let report = super::validate_position(self);
        if !report.legal {
            return Err(MoveError::IllegalPosition(report.summary()));
        }
        Ok(self.perft_unchecked(depth))
    }

    fn perft_unchecked(&self, depth: u32) -> u64 {
        if depth == 0 {
            return 1;
        }
        let moves = self.legal_moves_unchecked();
        if depth == 1 {
            return moves.len() as u64;
        }
        moves
            .iter()
            .map(|m| self.apply_unchecked(m).perft_unchecked(depth - 1))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::super::START_FEN;
    use super::*;

    fn pos(fen: &str) -> Position {
        Position::parse_fen(fen).unwrap()
    }

    #[test]
    fn start_position_has_twenty_moves() {
        assert_eq!(Position::start().legal_moves().unwrap().len(), 20);
    }

    #[test]
    fn checkmate_has_no_moves() {
        let mated = pos("k7/8/1QK5/8/8/8/8/8 b - - 0 1");
        assert_eq!(mated.legal_moves().unwrap().len(), 0);
        assert!(mated.in_check(Color::Black));
    }

    #[test]
    fn stalemate_has_no_moves_and_no_check() {
        let stale = pos("k7/8/1Q6/8/8/8/8/K7 b - - 0 1");
        assert_eq!(stale.legal_moves().unwrap().len(), 0);
        assert!(!stale.in_check(Color::Black));
    }

    #[test]
    fn double_push_sets_en_passant_square() {
        let start = Position::start();
        let mv = Move::parse_uci("e2e4").unwrap();
        let next = start.apply_move(&mv).unwrap();
        assert_eq!(
            next.to_fen(),
            "rnbqkbnr/pppppppp/8/8/4P3/8/PPPPPPPP/RNBQKBNR b KQkq e3 0 1"
        );
    }

    #[test]
    fn quiet_move_increments_halfmove_clock() {
        let start = Position::start();
        let next = start.apply_move(&Move::parse_uci("g1f3").unwrap()).unwrap();
        assert_eq!(next.halfmove_clock(), 1);
        assert_eq!(next.fullmove_number(), 1);
        let after_black = next.apply_move(&Move::parse_uci("b8c6").unwrap()).unwrap();
        assert_eq!(after_black.halfmove_clock(), 2);
        assert_eq!(after_black.fullmove_number(), 2);
    }

    #[test]
    fn white_kingside_castle_clears_only_white_rights() {
        let p = pos("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 0 1");
        let castled = p.apply_move(&Move::parse_uci("e1g1").unwrap()).unwrap();
        assert_eq!(castled.to_fen(), "r3k2r/8/8/8/8/8/8/R4RK1 b kq - 1 1");
    }

    #[test]
    fn en_passant_capture_removes_the_pushed_pawn() {
        let p = pos("k7/8/8/8/4pP2/8/8/K7 b - f3 0 1");
        let captured = p.apply_move(&Move::parse_uci("e4f3").unwrap()).unwrap();
        assert_eq!(captured.to_fen(), "k7/8/8/8/8/5p2/8/K7 w - - 0 2");
    }

    #[test]
    fn promotion_requires_kind_and_places_piece() {
        let p = pos("k7/4P3/8/8/8/8/8/K7 w - - 0 1");
        let err = p.apply_move(&Move::parse_uci("e7e8").unwrap()).unwrap_err();
        assert!(err.to_string().contains("promote"));
        let promoted = p.apply_move(&Move::parse_uci("e7e8q").unwrap()).unwrap();
        assert_eq!(promoted.to_fen(), "4Q3/8/8/8/8/8/8/K7 b - - 0 1");

        // k on a8 would be adjacent to the new queen; keep it apart above.
        let knight = p.apply_move(&Move::parse_uci("e7e8n").unwrap()).unwrap();
        assert_eq!(knight.to_fen(), "4N3/8/8/8/8/8/8/K7 b - - 0 1");
    }

    #[test]
    fn illegal_moves_name_the_rule() {
        let start = Position::start();
        let err = start
            .apply_move(&Move::parse_uci("e3e4").unwrap())
            .unwrap_err();
        assert!(err.to_string().contains("no piece"));
        let err = start
            .apply_move(&Move::parse_uci("e7e5").unwrap())
            .unwrap_err();
        assert!(err.to_string().contains("side not to move"));
        let pinned = pos("k7/8/8/8/8/4r3/4B3/4K3 w - - 0 1");
        let err = pinned
            .apply_move(&Move::parse_uci("e2d3").unwrap())
            .unwrap_err();
        assert!(err.to_string().contains("own king in check"));
    }

    #[test]
    fn legal_moves_rejects_illegal_position() {
        let no_king = pos("8/8/8/8/8/8/8/K7 w - - 0 1");
        assert!(no_king.legal_moves().is_err());
    }

    #[test]
    fn perft_start_known_values() {
        let start = Position::start();
        assert_eq!(start.perft(0).unwrap(), 1);
        assert_eq!(start.perft(1).unwrap(), 20);
        assert_eq!(start.perft(2).unwrap(), 400);
        assert_eq!(start.perft(3).unwrap(), 8902);
        assert_eq!(start.perft(4).unwrap(), 197_281);
    }

    #[test]
    fn perft_kiwipete() {
        let p = pos("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1");
        assert_eq!(p.perft(1).unwrap(), 48);
        assert_eq!(p.perft(2).unwrap(), 2039);
        assert_eq!(p.perft(3).unwrap(), 97_862);
    }

    #[test]
    fn perft_en_passant_pins() {
        let p = pos("8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1");
        assert_eq!(p.perft(1).unwrap(), 14);
        assert_eq!(p.perft(2).unwrap(), 191);
        assert_eq!(p.perft(3).unwrap(), 2812);
        assert_eq!(p.perft(4).unwrap(), 43_238);
    }

    #[test]
    fn perft_promotion_heavy() {
        let p = pos("r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1");
        assert_eq!(p.perft(1).unwrap(), 6);
        assert_eq!(p.perft(2).unwrap(), 264);
        assert_eq!(p.perft(3).unwrap(), 9467);
    }

    #[test]
    fn perft_position_five() {
        let p = pos("rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8");
        assert_eq!(p.perft(1).unwrap(), 44);
        assert_eq!(p.perft(2).unwrap(), 1486);
        assert_eq!(p.perft(3).unwrap(), 62_379);
    }

    #[test]
    fn start_fen_is_canonical() {
        assert_eq!(Position::start().to_fen(), START_FEN);
    }
}
