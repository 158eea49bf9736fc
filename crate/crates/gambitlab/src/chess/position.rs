//! Position representation, move generation, and terminal-state detection.

use super::{Color, EndReason, GameStatus, Move, Piece, Square};
use thiserror::Error;

#[derive(Debug, Error)]
#[error("illegal move {mv} in position {fen}")]
pub struct IllegalMove {
    pub mv: Move,
    pub fen: String,
}

const KNIGHT_DELTAS: [(i8, i8); 8] = [
    (1, 2),
    (2, 1),
    (2, -1),
    (1, -2),
    (-1, -2),
    (-2, -1),
    (-2, 1),
    (-1, 2),
];
const KING_DELTAS: [(i8, i8); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];
const ROOK_DIRS: [(i8, i8); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const BISHOP_DIRS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Castling rights as four flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct CastlingRights(u8);

impl CastlingRights {
    pub const WHITE_KINGSIDE: u8 = 1;
    pub const WHITE_QUEENSIDE: u8 = 2;
    pub const BLACK_KINGSIDE: u8 = 4;
    pub const BLACK_QUEENSIDE: u8 = 8;

    pub fn all() -> Self {
        CastlingRights(0b1111)
    }

    pub fn none() -> Self {
        CastlingRights(0)
    }

    pub fn has(self, flag: u8) -> bool {
        self.0 & flag != 0
    }

    pub fn clear(&mut self, flags: u8) {
        self.0 &= !flags;
    }

    pub fn set(&mut self, flag: u8) {
        self.0 |= flag;
    }

    fn bits(self) -> u8 {
        self.0
    }
}

pub(crate) type Board = [Option<(Color, Piece)>; 64];

/// A full game state: piece placement, side to move, castling rights,
/// en-passant target, move clocks, and the repetition history of position
/// keys since the last irreversible move.
///
/// Positions are immutable values; [`Position::apply`] returns a new one.
#[derive(Debug, Clone, PartialEq)]
pub struct Position {
    pub(crate) board: Board,
    pub(crate) side_to_move: Color,
    pub(crate) castling: CastlingRights,
    pub(crate) ep_target: Option<Square>,
    pub(crate) halfmove_clock: u32,
    pub(crate) fullmove_number: u32,
    /// Keys of positions reachable by repetition, most recent last. The
    /// final entry is always the current position's key.
    pub(crate) history: Vec<u64>,
}

impl Position {
    /// The standard starting position.
    pub fn initial() -> Position {
        let mut board: Board = [None; 64];
        let back = [
            Piece::Rook,
            Piece::Knight,
            Piece::Bishop,
            Piece::Queen,
            Piece::King,
            Piece::Bishop,
            Piece::Knight,
            Piece::Rook,
        ];
        for (file, &piece) in back.iter().enumerate() {
            board[Square::new(file as u8, 0).index()] = Some((Color::White, piece));
            board[Square::new(file as u8, 1).index()] = Some((Color::White, Piece::Pawn));
            board[Square::new(file as u8, 6).index()] = Some((Color::Black, Piece::Pawn));
            board[Square::new(file as u8, 7).index()] = Some((Color::Black, piece));
        }
        let mut pos = Position {
            board,
            side_to_move: Color::White,
            castling: CastlingRights::all(),
            ep_target: None,
            halfmove_clock: 0,
            fullmove_number: 1,
            history: Vec::new(),
        };
        pos.history.push(pos.key());
        pos
    }

    pub fn side_to_move(&self) -> Color {
        self.side_to_move
    }

    pub fn halfmove_clock(&self) -> u32 {
        self.halfmove_clock
    }

    pub fn fullmove_number(&self) -> u32 {
        self.fullmove_number
    }

    pub fn en_passant_target(&self) -> Option<Square> {
        self.ep_target
    }

    pub fn piece_at(&self, sq: Square) -> Option<(Color, Piece)> {
        self.board[sq.index()]
    }

    pub(crate) fn king_square(&self, color: Color) -> Square {
        for i in 0..64 {
            if self.board[i as usize] == Some((color, Piece::King)) {
                return Square::from_index(i);
            }
        }
        unreachable!("position without a {color} king");
    }

    /// Is `sq` attacked by any piece of `by`?
    pub(crate) fn square_attacked(&self, sq: Square, by: Color) -> bool {
        board_square_attacked(&self.board, sq, by)
    }

    /// Is the side to move in check?
    pub fn in_check(&self) -> bool {
        self.square_attacked(self.king_square(self.side_to_move), self.side_to_move.opponent())
    }

    /// Every legal move in this position. Empty exactly when the game has
    /// ended by checkmate or stalemate.
    pub fn legal_moves(&self) -> Vec<Move> {
        let us = self.side_to_move;
        let mut moves = Vec::with_capacity(48);
        self.pseudo_moves(&mut moves);
        moves.retain(|mv| {
            let board = make_on_board(&self.board, us, mv, self.ep_target);
            let king = find_king(&board, us);
            !board_square_attacked(&board, king, us.opponent())
        });
        self.castling_moves(&mut moves);
        moves
    }

    fn pseudo_moves(&self, moves: &mut Vec<Move>) {
        let us = self.side_to_move;
        for index in 0..64u8 {
            let from = Square::from_index(index);
            let Some((color, piece)) = self.board[from.index()] else {
                continue;
            };
            if color != us {
                continue;
            }
            match piece {
                Piece::Pawn => self.pawn_moves(from, moves),
                Piece::Knight => self.jump_moves(from, &KNIGHT_DELTAS, moves),
                Piece::King => self.jump_moves(from, &KING_DELTAS, moves),
                Piece::Bishop => self.slide_moves(from, &BISHOP_DIRS, moves),
                Piece::Rook => self.slide_moves(from, &ROOK_DIRS, moves),
                Piece::Queen => {
                    self.slide_moves(from, &BISHOP_DIRS, moves);
                    self.slide_moves(from, &ROOK_DIRS, moves);
                }
            }
        }
    }

    fn pawn_moves(&self, from: Square, moves: &mut Vec<Move>) {
        let us = self.side_to_move;
        let dir: i8 = if us == Color::White { 1 } else { -1 };
        let start_rank = if us == Color::White { 1 } else { 6 };
        let last_rank = if us == Color::White { 7 } else { 0 };

        let push = |mv: Move, moves: &mut Vec<Move>| {
            if mv.to.rank() == last_rank {
                for promo in [Piece::Queen, Piece::Rook, Piece::Bishop, Piece::Knight] {
                    moves.push(Move::promoting(mv.from, mv.to, promo));
                }
            } else {
                moves.push(mv);
            }
        };

        if let Some(to) = from.offset(0, dir) {
            if self.board[to.index()].is_none() {
                push(Move::new(from, to), moves);
                if from.rank() == start_rank {
                    let two = from.offset(0, 2 * dir).expect("double push on board");
                    if self.board[two.index()].is_none() {
                        moves.push(Move::new(from, two));
                    }
                }
            }
        }
        for df in [-1i8, 1] {
            let Some(to) = from.offset(df, dir) else {
                continue;
            };
            match self.board[to.index()] {
                Some((color, _)) if color != us => push(Move::new(from, to), moves),
                None if self.ep_target == Some(to) => moves.push(Move::new(from, to)),
                _ => {}
            }
        }
    }

    fn jump_moves(&self, from: Square, deltas: &[(i8, i8)], moves: &mut Vec<Move>) {
        for &(df, dr) in deltas {
            if let Some(to) = from.offset(df, dr) {
                match self.board[to.index()] {
                    Some((color, _)) if color == self.side_to_move => {}
                    _ => moves.push(Move::new(from, to)),
                }
            }
        }
    }

    fn slide_moves(&self, from: Square, dirs: &[(i8, i8)], moves: &mut Vec<Move>) {
        for &(df, dr) in dirs {
            let mut to = from;
            while let Some(next) = to.offset(df, dr) {
                to = next;
                match self.board[to.index()] {
                    None => moves.push(Move::new(from, to)),
                    Some((color, _)) => {
                        if color != self.side_to_move {
                            moves.push(Move::new(from, to));
                        }
                        break;
                    }
                }
            }
        }
    }

    fn castling_moves(&self, moves: &mut Vec<Move>) {
        let us = self.side_to_move;
        let them = us.opponent();
        let rank = if us == Color::White { 0 } else { 7 };
        let king_from = Square::new(4, rank);
        if self.board[king_from.index()] != Some((us, Piece::King))
            || self.square_attacked(king_from, them)
        {
            return;
        }
        let (kingside, queenside) = match us {
            Color::White => (
                CastlingRights::WHITE_KINGSIDE,
                CastlingRights::WHITE_QUEENSIDE,
            ),
            Color::Black => (
                CastlingRights::BLACK_KINGSIDE,
                CastlingRights::BLACK_QUEENSIDE,
            ),
        };
        if self.castling.has(kingside)
            && self.board[Square::new(7, rank).index()] == Some((us, Piece::Rook))
            && [5u8, 6].iter().all(|&f| {
                let sq = Square::new(f, rank);
                self.board[sq.index()].is_none() && !self.square_attacked(sq, them)
            })
        {
            moves.push(Move::new(king_from, Square::new(6, rank)));
        }
        if self.castling.has(queenside)
            && self.board[Square::new(0, rank).index()] == Some((us, Piece::Rook))
            && [1u8, 2, 3]
                .iter()
                .all(|&f| self.board[Square::new(f, rank).index()].is_none())
            && [2u8, 3]
                .iter()
                .all(|&f| !self.square_attacked(Square::new(f, rank), them))
        {
            moves.push(Move::new(king_from, Square::new(2, rank)));
        }
    }

    /// Applies a legal move and returns the successor position.
    pub fn apply(&self, mv: &Move) -> Result<Position, IllegalMove> {
        if !self.legal_moves().contains(mv) {
            return Err(IllegalMove {
                mv: *mv,
                fen: self.to_fen(),
            });
        }
        Ok(self.apply_unchecked(mv))
    }

    /// Applies a move without re-checking legality. The move must come from
    /// this position's `legal_moves`; anything else corrupts the game state.
    /// Exists for search loops and replayers that already hold legal moves.
    pub fn apply_unchecked(&self, mv: &Move) -> Position {
        let us = self.side_to_move;
        let (_, piece) = self.board[mv.from.index()].expect("move from an occupied square");
        let is_ep_capture =
            piece == Piece::Pawn && self.ep_target == Some(mv.to) && mv.from.file() != mv.to.file();
        let is_capture = self.board[mv.to.index()].is_some() || is_ep_capture;

        let board = make_on_board(&self.board, us, mv, self.ep_target);

        let mut castling = self.castling;
        match us {
            Color::White => {
                if piece == Piece::King {
                    castling.clear(CastlingRights::WHITE_KINGSIDE | CastlingRights::WHITE_QUEENSIDE);
                }
                if mv.from == Square::new(7, 0) {
                    castling.clear(CastlingRights::WHITE_KINGSIDE);
                }
                if mv.from == Square::new(0, 0) {
                    castling.clear(CastlingRights::WHITE_QUEENSIDE);
                }
            }
            Color::Black => {
                if piece == Piece::King {
                    castling.clear(CastlingRights::BLACK_KINGSIDE | CastlingRights::BLACK_QUEENSIDE);
                }
                if mv.from == Square::new(7, 7) {
                    castling.clear(CastlingRights::BLACK_KINGSIDE);
                }
                if mv.from == Square::new(0, 7) {
                    castling.clear(CastlingRights::BLACK_QUEENSIDE);
                }
            }
        }
        // a capture landing on a rook's home corner voids that right
        match mv.to {
            sq if sq == Square::new(7, 0) => castling.clear(CastlingRights::WHITE_KINGSIDE),
            sq if sq == Square::new(0, 0) => castling.clear(CastlingRights::WHITE_QUEENSIDE),
            sq if sq == Square::new(7, 7) => castling.clear(CastlingRights::BLACK_KINGSIDE),
            sq if sq == Square::new(0, 7) => castling.clear(CastlingRights::BLACK_QUEENSIDE),
            _ => {}
        }

        let ep_target = if piece == Piece::Pawn && mv.from.rank().abs_diff(mv.to.rank()) == 2 {
            Some(Square::new(mv.from.file(), (mv.from.rank() + mv.to.rank()) / 2))
        } else {
            None
        };

        let irreversible = piece == Piece::Pawn || is_capture;
        let mut next = Position {
            board,
            side_to_move: us.opponent(),
            castling,
            ep_target,
            halfmove_clock: if irreversible {
                0
            } else {
                self.halfmove_clock + 1
            },
            fullmove_number: if us == Color::Black {
                self.fullmove_number + 1
            } else {
                self.fullmove_number
            },
            history: if irreversible {
                Vec::new()
            } else {
                self.history.clone()
            },
        };
        let key = next.key();
        next.history.push(key);
        next
    }

    /// Terminal-state detection.
    ///
    /// Checkmate and stalemate come from legal-move emptiness; draws are
    /// applied automatically at 100 plies without progress, on the third
    /// occurrence of a position key, or with insufficient mating material.
    pub fn status(&self) -> GameStatus {
        if self.legal_moves().is_empty() {
            return if self.in_check() {
                GameStatus::win_for(self.side_to_move.opponent(), EndReason::Checkmate)
            } else {
                GameStatus::Draw(EndReason::Stalemate)
            };
        }
        if self.halfmove_clock >= 100 {
            return GameStatus::Draw(EndReason::FiftyMove);
        }
        let current = *self.history.last().expect("history holds the current key");
        if self.history.iter().filter(|&&k| k == current).count() >= 3 {
            return GameStatus::Draw(EndReason::ThreefoldRepetition);
        }
        if self.insufficient_material() {
            return GameStatus::Draw(EndReason::InsufficientMaterial);
        }
        GameStatus::Ongoing
    }

    fn insufficient_material(&self) -> bool {
        let mut minors: Vec<(Color, Piece, Square)> = Vec::new();
        for i in 0..64u8 {
            let sq = Square::from_index(i);
            match self.board[sq.index()] {
                None | Some((_, Piece::King)) => {}
                Some((c, p @ (Piece::Bishop | Piece::Knight))) => minors.push((c, p, sq)),
                Some(_) => return false, // pawn, rook, or queen can mate
            }
        }
        match minors.as_slice() {
            [] => true,
            [_] => true, // lone bishop or knight
            [(c1, Piece::Bishop, s1), (c2, Piece::Bishop, s2)] if c1 != c2 => {
                // same-coloured bishops cannot interact
                (s1.file() + s1.rank()) % 2 == (s2.file() + s2.rank()) % 2
            }
            _ => false,
        }
    }

    /// Position key over placement, side to move, castling rights, and
    /// en-passant capture availability — the state that matters for
    /// repetition claims. FNV-1a over a canonical encoding.
    pub(crate) fn key(&self) -> u64 {
        const OFFSET: u64 = 0xcbf29ce484222325;
        const PRIME: u64 = 0x100000001b3;
        let mut hash = OFFSET;
        let mut eat = |byte: u8| {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(PRIME);
        };
        for i in 0..64 {
            let code = match self.board[i] {
                None => 0u8,
                Some((color, piece)) => {
                    1 + piece as u8 + if color == Color::Black { 6 } else { 0 }
                }
            };
            eat(code);
        }
        eat(if self.side_to_move == Color::White { 0 } else { 1 });
        eat(self.castling.bits());
        eat(match self.ep_capturable() {
            Some(sq) => sq.index() as u8,
            None => 0xff,
        });
        hash
    }

    /// The en-passant target, but only when a pawn of the side to move can
    /// actually complete the capture legally.
    fn ep_capturable(&self) -> Option<Square> {
        let target = self.ep_target?;
        let us = self.side_to_move;
        let dir: i8 = if us == Color::White { 1 } else { -1 };
        for df in [-1i8, 1] {
            let Some(from) = target.offset(df, -dir) else {
                continue;
            };
            if self.board[from.index()] != Some((us, Piece::Pawn)) {
                continue;
            }
            let mv = Move::new(from, target);
            let board = make_on_board(&self.board, us, &mv, self.ep_target);
            let king = find_king(&board, us);
            if !board_square_attacked(&board, king, us.opponent()) {
                return Some(target);
            }
        }
        None
    }
}

fn find_king(board: &Board, color: Color) -> Square {
    for i in 0..64u8 {
        if board[usize::from(i)] == Some((color, Piece::King)) {
            return Square::from_index(i);
        }
    }
    unreachable!("board without a {color} king");
}

fn board_square_attacked(board: &Board, sq: Square, by: Color) -> bool {
    // pawns strike one rank toward their direction of travel
    let pawn_dr: i8 = if by == Color::White { -1 } else { 1 };
    for df in [-1i8, 1] {
        if let Some(from) = sq.offset(df, pawn_dr) {
            if board[from.index()] == Some((by, Piece::Pawn)) {
                return true;
            }
        }
    }
    for &(df, dr) in &KNIGHT_DELTAS {
        if let Some(from) = sq.offset(df, dr) {
            if board[from.index()] == Some((by, Piece::Knight)) {
                return true;
            }
        }
    }
    for &(df, dr) in &KING_DELTAS {
        if let Some(from) = sq.offset(df, dr) {
            if board[from.index()] == Some((by, Piece::King)) {
                return true;
            }
        }
    }
    for &(df, dr) in &ROOK_DIRS {
        let mut to = sq;
        while let Some(next) = to.offset(df, dr) {
            to = next;
            match board[to.index()] {
                None => continue,
                Some((color, piece)) => {
                    if color == by && matches!(piece, Piece::Rook | Piece::Queen) {
                        return true;
                    }
                    break;
                }
            }
        }
    }
    for &(df, dr) in &BISHOP_DIRS {
        let mut to = sq;
        while let Some(next) = to.offset(df, dr) {
            to = next;
            match board[to.index()] {
                None => continue,
                Some((color, piece)) => {
                    if color == by && matches!(piece, Piece::Bishop | Piece::Queen) {
                        return true;
                    }
                    break;
                }
            }
        }
    }
    false
}

/// Applies the move to a board copy: handles en-passant removal, promotion,
/// and the rook leg of castling. Clock and right bookkeeping stay with the
/// caller.
fn make_on_board(board: &Board, us: Color, mv: &Move, ep_target: Option<Square>) -> Board {
    let mut board = *board;
    let (color, piece) = board[mv.from.index()].expect("move from an occupied square");
    debug_assert_eq!(color, us);

    if piece == Piece::Pawn && ep_target == Some(mv.to) && mv.from.file() != mv.to.file() {
        let captured = Square::new(mv.to.file(), mv.from.rank());
        board[captured.index()] = None;
    }
    if piece == Piece::King && mv.from.file().abs_diff(mv.to.file()) == 2 {
        let rank = mv.from.rank();
        let (rook_from, rook_to) = if mv.to.file() == 6 {
            (Square::new(7, rank), Square::new(5, rank))
        } else {
            (Square::new(0, rank), Square::new(3, rank))
        };
        board[rook_to.index()] = board[rook_from.index()].take();
    }
    board[mv.to.index()] = match mv.promotion {
        Some(promo) => Some((us, promo)),
        None => Some((us, piece)),
    };
    board[mv.from.index()] = None;
    board
}

/// Counts the leaf nodes of the legal move tree to the given depth — the
/// standard correctness oracle for move generation.
pub fn perft(pos: &Position, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    let moves = pos.legal_moves();
    if depth == 1 {
        return moves.len() as u64;
    }
    moves
        .iter()
        .map(|mv| perft(&pos.apply_unchecked(mv), depth - 1))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chess::parse_move;

    fn play(pos: &Position, texts: &[&str]) -> Position {
        let mut pos = pos.clone();
        for text in texts {
            let mv = parse_move(&pos, text).unwrap();
            pos = pos.apply(&mv).unwrap();
        }
        pos
    }

    #[test]
    fn initial_position_basics() {
        let pos = Position::initial();
        let pieces = (0..64)
            .filter(|&i| pos.board[i as usize].is_some())
            .count();
        assert_eq!(pieces, 32);
        assert_eq!(pos.side_to_move(), Color::White);
        assert_eq!(pos.legal_moves().len(), 20);
        assert_eq!(pos.status(), GameStatus::Ongoing);
    }

    #[test]
    fn perft_from_initial() {
        let pos = Position::initial();
        assert_eq!(perft(&pos, 1), 20);
        assert_eq!(perft(&pos, 2), 400);
        assert_eq!(perft(&pos, 3), 8_902);
        assert_eq!(perft(&pos, 4), 197_281);
    }

    // published perft values for positions that stress castling, pins,
    // promotions, and en passant
    #[test]
    fn perft_kiwipete() {
        let pos = Position::from_fen(
            "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
        )
        .unwrap();
        assert_eq!(perft(&pos, 1), 48);
        assert_eq!(perft(&pos, 2), 2_039);
        assert_eq!(perft(&pos, 3), 97_862);
    }

    #[test]
    fn perft_endgame_pins() {
        let pos = Position::from_fen("8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1").unwrap();
        assert_eq!(perft(&pos, 1), 14);
        assert_eq!(perft(&pos, 2), 191);
        assert_eq!(perft(&pos, 3), 2_812);
        assert_eq!(perft(&pos, 4), 43_238);
    }

    #[test]
    fn perft_promotion_heavy() {
        let pos = Position::from_fen(
            "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
        )
        .unwrap();
        assert_eq!(perft(&pos, 1), 6);
        assert_eq!(perft(&pos, 2), 264);
        assert_eq!(perft(&pos, 3), 9_467);
        assert_eq!(perft(&pos, 4), 422_333);
    }

    #[test]
    fn perft_buggy_position() {
        let pos = Position::from_fen("rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8")
            .unwrap();
        assert_eq!(perft(&pos, 1), 44);
        assert_eq!(perft(&pos, 2), 1_486);
        assert_eq!(perft(&pos, 3), 62_379);
    }

    #[test]
    fn double_push_sets_en_passant() {
        let pos = play(&Position::initial(), &["e2e4"]);
        assert_eq!(pos.side_to_move(), Color::Black);
        assert_eq!(pos.en_passant_target(), Some(Square::parse("e3").unwrap()));
    }

    #[test]
    fn clock_resets_on_pawn_moves_and_captures() {
        let pos = play(&Position::initial(), &["Nf3", "Nf6"]);
        assert_eq!(pos.halfmove_clock(), 2);
        let pos = play(&pos, &["e4"]);
        assert_eq!(pos.halfmove_clock(), 0);
        let pos = play(&pos, &["Nxe4"]);
        assert_eq!(pos.halfmove_clock(), 0);
    }

    #[test]
    fn fools_mate() {
        let pos = play(&Position::initial(), &["f2f3", "e7e5", "g2g4", "d8h4"]);
        assert!(pos.legal_moves().is_empty());
        assert_eq!(pos.status(), GameStatus::BlackWins(EndReason::Checkmate));
    }

    #[test]
    fn stalemate_is_a_draw() {
        let pos = Position::from_fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1").unwrap();
        assert!(pos.legal_moves().is_empty());
        assert!(!pos.in_check());
        assert_eq!(pos.status(), GameStatus::Draw(EndReason::Stalemate));
    }

    #[test]
    fn fifty_move_rule_fires_at_100_plies() {
        let pos = Position::from_fen("4k3/8/8/8/8/8/4K3/4R3 w - - 99 80").unwrap();
        let pos = play(&pos, &["Kd2"]); // one more quiet move
        assert_eq!(pos.halfmove_clock(), 100);
        assert_eq!(pos.status(), GameStatus::Draw(EndReason::FiftyMove));
    }

    #[test]
    fn threefold_by_knight_shuffle() {
        let shuffle = ["Nf3", "Nf6", "Ng1", "Ng8"];
        let mut pos = Position::initial();
        let mut seq = Vec::new();
        seq.extend_from_slice(&shuffle);
        seq.extend_from_slice(&shuffle);
        for (i, text) in seq.iter().enumerate() {
            assert_eq!(pos.status(), GameStatus::Ongoing, "ply {i}");
            let mv = parse_move(&pos, text).unwrap();
            pos = pos.apply(&mv).unwrap();
        }
        // the starting position has now occurred three times
        assert_eq!(pos.status(), GameStatus::Draw(EndReason::ThreefoldRepetition));
    }

    #[test]
    fn insufficient_material_cases() {
        let draw = |fen: &str| {
            assert_eq!(
                Position::from_fen(fen).unwrap().status(),
                GameStatus::Draw(EndReason::InsufficientMaterial),
                "{fen}"
            );
        };
        draw("8/8/4k3/8/8/3K4/8/8 w - - 0 1"); // K vs K
        draw("8/8/4k3/8/8/3KB3/8/8 w - - 0 1"); // K+B vs K
        draw("8/8/4k3/8/8/3KN3/8/8 w - - 0 1"); // K+N vs K
        draw("8/4b3/4k3/8/8/3KB3/8/8 w - - 0 1"); // both bishops on dark squares

        let ongoing = |fen: &str| {
            assert_eq!(
                Position::from_fen(fen).unwrap().status(),
                GameStatus::Ongoing,
                "{fen}"
            );
        };
        ongoing("8/3b4/4k3/8/8/3KB3/8/8 w - - 0 1"); // opposite-colour bishops
        ongoing("8/8/4k3/8/8/3KP3/8/8 w - - 0 1"); // a pawn can promote
        ongoing("8/8/4k3/8/8/2NKN3/8/8 w - - 0 1"); // two knights
    }

    #[test]
    fn illegal_moves_are_reported() {
        let pos = Position::initial();
        let mv = Move::parse_coordinate("e1e2").unwrap();
        let err = pos.apply(&mv).unwrap_err();
        assert!(err.to_string().contains("e1e2"));
    }

    #[test]
    fn en_passant_capture_works() {
        let pos = play(&Position::initial(), &["e4", "Nf6", "e5", "d5"]);
        let mv = parse_move(&pos, "exd6").unwrap();
        let next = pos.apply(&mv).unwrap();
        // the d5 pawn is gone
        assert_eq!(next.piece_at(Square::parse("d5").unwrap()), None);
        assert_eq!(
            next.piece_at(Square::parse("d6").unwrap()),
            Some((Color::White, Piece::Pawn))
        );
    }

    #[test]
    fn castling_moves_rook_and_clears_rights() {
        let pos = play(
            &Position::initial(),
            &["e4", "e5", "Nf3", "Nc6", "Bc4", "Bc5"],
        );
        let castled = play(&pos, &["O-O"]);
        assert_eq!(
            castled.piece_at(Square::parse("g1").unwrap()),
            Some((Color::White, Piece::King))
        );
        assert_eq!(
            castled.piece_at(Square::parse("f1").unwrap()),
            Some((Color::White, Piece::Rook))
        );
        assert!(!castled.castling.has(CastlingRights::WHITE_KINGSIDE));
        assert!(!castled.castling.has(CastlingRights::WHITE_QUEENSIDE));
        assert!(castled.castling.has(CastlingRights::BLACK_KINGSIDE));
    }

    #[test]
    fn status_is_a_pure_function() {
        let pos = play(&Position::initial(), &["e4", "e5", "Nf3"]);
        assert_eq!(pos.status(), pos.status());
    }

    #[test]
    fn random_playouts_never_leave_the_mover_in_check() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let mut pos = Position::initial();
            for _ in 0..60 {
                let moves = pos.legal_moves();
                if moves.is_empty() || pos.status().is_terminal() {
                    break;
                }
                let mv = moves[rng.random_range(0..moves.len())];
                let mover = pos.side_to_move();
                pos = pos.apply(&mv).unwrap();
                assert!(!pos.square_attacked(pos.king_square(mover), mover.opponent()));
            }
        }
    }
}
