//! The N×N board, move rules and win detection.

use std::fmt;

use thiserror::Error;

pub const DEFAULT_SIZE: usize = 12;

/// Unit steps for the four line directions: east, south, south-east,
/// north-east.
pub const DIRECTIONS: [(i64, i64); 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Piece {
    Cross,
    Circle,
}

impl Piece {
    pub fn opponent(self) -> Piece {
        match self {
            Piece::Cross => Piece::Circle,
            Piece::Circle => Piece::Cross,
        }
    }

    /// Symbol used in commands and knowledge-base facts.
    pub fn name(self) -> &'static str {
        match self {
            Piece::Cross => "cross",
            Piece::Circle => "circle",
        }
    }

    pub fn from_name(s: &str) -> Option<Piece> {
        match s {
            "cross" => Some(Piece::Cross),
            "circle" => Some(Piece::Circle),
            _ => None,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Piece::Cross => 'x',
            Piece::Circle => 'o',
        }
    }
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub x: usize,
    pub y: usize,
}

impl Square {
    pub fn new(x: usize, y: usize) -> Self {
        Square { x, y }
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("occupied")]
    Occupied,
    #[error("out of turn")]
    OutOfTurn,
    #[error("out of bounds")]
    OutOfBounds,
    #[error("game over")]
    GameOver,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BoardError {
    #[error("board size must be positive")]
    ZeroSize,
    #[error("fixture line {0} has the wrong length")]
    RaggedFixture(usize),
    #[error("unexpected character `{0}` in fixture")]
    BadCell(char),
    #[error("piece counts are not reachable (cross {cross}, circle {circle})")]
    Unbalanced { cross: usize, circle: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Board {
    size: usize,
    cells: Vec<Option<Piece>>,
    turn: Piece,
    winner: Option<Piece>,
    stones: usize,
}

impl Board {
    pub fn new(size: usize) -> Result<Board, BoardError> {
        if size == 0 {
            return Err(BoardError::ZeroSize);
        }
        Ok(Board {
            size,
            cells: vec![None; size * size],
            turn: Piece::Cross,
            winner: None,
            stones: 0,
        })
    }

    /// Parse N lines of N characters from `.`, `x`, `o`. Cross moves first,
    /// so the side to move follows from the piece counts.
    pub fn from_fixture(text: &str) -> Result<Board, BoardError> {
        let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let mut board = Board::new(rows.len())?;
        let mut counts = [0usize; 2];
        for (y, row) in rows.iter().enumerate() {
            if row.chars().count() != board.size {
                return Err(BoardError::RaggedFixture(y + 1));
            }
            for (x, c) in row.chars().enumerate() {
                let cell = match c {
                    '.' => None,
                    'x' => Some(Piece::Cross),
                    'o' => Some(Piece::Circle),
                    other => return Err(BoardError::BadCell(other)),
                };
                if let Some(p) = cell {
                    counts[p as usize] += 1;
                }
                board.cells[y * board.size + x] = cell;
            }
        }
        let (cross, circle) = (counts[0], counts[1]);
        if cross != circle && cross != circle + 1 {
            return Err(BoardError::Unbalanced { cross, circle });
        }
        board.stones = cross + circle;
        board.turn = if cross == circle { Piece::Cross } else { Piece::Circle };
        board.winner = [Piece::Cross, Piece::Circle].into_iter().find(|&p| board.wins(p));
        Ok(board)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn turn(&self) -> Piece {
        self.turn
    }

    pub fn stones(&self) -> usize {
        self.stones
    }

    pub fn in_bounds(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.size && (y as usize) < self.size
    }

    pub fn get(&self, x: usize, y: usize) -> Option<Piece> {
        self.cells[y * self.size + x]
    }

    /// Like `get`, for signed coordinates; off-board squares read as empty.
    pub fn at(&self, x: i64, y: i64) -> Option<Piece> {
        if self.in_bounds(x, y) {
            self.get(x as usize, y as usize)
        } else {
            None
        }
    }

    pub fn is_empty_at(&self, x: usize, y: usize) -> bool {
        self.get(x, y).is_none()
    }

    pub fn play(&mut self, piece: Piece, x: usize, y: usize) -> Result<(), MoveError> {
        if self.is_over() {
            return Err(MoveError::GameOver);
        }
        if x >= self.size || y >= self.size {
            return Err(MoveError::OutOfBounds);
        }
        if self.get(x, y).is_some() {
            return Err(MoveError::Occupied);
        }
        if piece != self.turn {
            return Err(MoveError::OutOfTurn);
        }
        self.cells[y * self.size + x] = Some(piece);
        self.stones += 1;
        self.turn = piece.opponent();
        if self.five_through(piece, x as i64, y as i64) {
            self.winner = Some(piece);
        }
        Ok(())
    }

    /// Longest run of `piece` through (x, y) along `dir`, counting (x, y)
    /// itself as `piece`.
    pub fn run_through(&self, piece: Piece, x: i64, y: i64, (dx, dy): (i64, i64)) -> usize {
        let count = |sx: i64, sy: i64| {
            let mut n = 0;
            let (mut cx, mut cy) = (x + sx, y + sy);
            while self.at(cx, cy) == Some(piece) {
                n += 1;
                cx += sx;
                cy += sy;
            }
            n
        };
        1 + count(dx, dy) + count(-dx, -dy)
    }

    fn five_through(&self, piece: Piece, x: i64, y: i64) -> bool {
        DIRECTIONS.iter().any(|&d| self.run_through(piece, x, y, d) >= 5)
    }

    /// Five or more in a row anywhere on the board.
    pub fn wins(&self, piece: Piece) -> bool {
        (0..self.size).any(|y| {
            (0..self.size).any(|x| self.get(x, y) == Some(piece) && self.five_through(piece, x as i64, y as i64))
        })
    }

    pub fn cross_win(&self) -> bool {
        self.wins(Piece::Cross)
    }

    pub fn circle_win(&self) -> bool {
        self.wins(Piece::Circle)
    }

    pub fn winner(&self) -> Option<Piece> {
        self.winner
    }

    pub fn is_full(&self) -> bool {
        self.stones == self.size * self.size
    }

    pub fn is_over(&self) -> bool {
        self.winner.is_some() || self.is_full()
    }

    /// Empty squares in row-major order.
    pub fn empty_squares(&self) -> Vec<Square> {
        (0..self.size)
            .flat_map(|y| (0..self.size).map(move |x| Square::new(x, y)))
            .filter(|s| self.is_empty_at(s.x, s.y))
            .collect()
    }

    pub fn squares(&self) -> impl Iterator<Item = (Square, Option<Piece>)> + '_ {
        (0..self.size).flat_map(move |y| (0..self.size).map(move |x| (Square::new(x, y), self.get(x, y))))
    }

    pub fn to_fixture(&self) -> String {
        let mut s = String::with_capacity(self.size * (self.size + 1));
        for y in 0..self.size {
            for x in 0..self.size {
                s.push(self.get(x, y).map_or('.', Piece::glyph));
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_fixture())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_move_flips_turn() {
        let mut b = Board::new(8).unwrap();
        b.play(Piece::Cross, 0, 0).unwrap();
        assert_eq!(b.get(0, 0), Some(Piece::Cross));
        assert_eq!(b.turn(), Piece::Circle);
    }

    #[test]
    fn move_errors() {
        let mut b = Board::new(8).unwrap();
        assert_eq!(b.play(Piece::Circle, 1, 1), Err(MoveError::OutOfTurn));
        b.play(Piece::Cross, 0, 0).unwrap();
        assert_eq!(b.play(Piece::Circle, 0, 0), Err(MoveError::Occupied));
        assert_eq!(b.play(Piece::Circle, 8, 0), Err(MoveError::OutOfBounds));
        assert_eq!(b.get(0, 0), Some(Piece::Cross));
        assert_eq!(MoveError::Occupied.to_string(), "occupied");
        assert_eq!(MoveError::OutOfTurn.to_string(), "out of turn");
    }

    #[test]
    fn zero_size_rejected() {
        assert_eq!(Board::new(0), Err(BoardError::ZeroSize));
    }

    #[test]
    fn empty_board_has_no_winner() {
        let b = Board::new(8).unwrap();
        assert!(!b.cross_win() && !b.circle_win());
        assert_eq!(b.empty_squares().len(), 64);
        assert_eq!(b.empty_squares()[1], Square::new(1, 0));
    }

    #[test]
    fn horizontal_five() {
        let b = Board::from_fixture(
            "xxxxx...\n\
             oooo....\n\
             ........\n\
             ........\n\
             ........\n\
             ........\n\
             ........\n\
             ........",
        )
        .unwrap();
        assert!(b.cross_win());
        assert!(!b.circle_win());
        assert_eq!(b.winner(), Some(Piece::Cross));
        assert!(b.is_over());
    }

    #[test]
    fn winning_diagonal_on_twelve_board() {
        // the cross diagonal from (3,2) to (7,6), with circles scattered
        let fixture = "\
            ............\n\
            ......o.....\n\
            ...x..o.....\n\
            ....x.o.....\n\
            .....x..o...\n\
            ......x.....\n\
            .......x....\n\
            .....o......\n\
            ............\n\
            ............\n\
            ............\n\
            ............";
        let b = Board::from_fixture(fixture).unwrap();
        assert_eq!(b.size(), DEFAULT_SIZE);
        assert!(b.cross_win());
        assert!(!b.circle_win());
    }

    #[test]
    fn anti_diagonal_and_vertical() {
        let mut b = Board::new(8).unwrap();
        let crosses = [(4, 0), (3, 1), (2, 2), (1, 3), (0, 4)];
        let circles = [(7, 0), (7, 1), (7, 2), (7, 3)];
        for i in 0..5 {
            b.play(Piece::Cross, crosses[i].0, crosses[i].1).unwrap();
            if i < 4 {
                b.play(Piece::Circle, circles[i].0, circles[i].1).unwrap();
            }
        }
        assert_eq!(b.winner(), Some(Piece::Cross));
        assert_eq!(b.play(Piece::Circle, 7, 4), Err(MoveError::GameOver));
    }

    #[test]
    fn overline_counts() {
        let b = Board::from_fixture(
            "xxx.xx..\n\
             oooooo..\n\
             ........\n\
             ........\n\
             x.......\n\
             ........\n\
             ........\n\
             ........",
        )
        .unwrap();
        assert!(b.circle_win());
    }

    #[test]
    fn fixture_round_trip_and_turn() {
        let text = "x..\n.o.\n..x\n";
        let b = Board::from_fixture(text).unwrap();
        assert_eq!(b.to_fixture(), text);
        assert_eq!(b.turn(), Piece::Circle);
        assert!(matches!(
            Board::from_fixture("xx.\n...\n..."),
            Err(BoardError::Unbalanced { .. })
        ));
        assert!(matches!(
            Board::from_fixture("x.\n..."),
            Err(BoardError::RaggedFixture(_))
        ));
    }

    #[test]
    fn full_board() {
        let b = Board::from_fixture("xo\nox").unwrap();
        assert!(b.is_full() && b.is_over());
        assert!(b.empty_squares().is_empty());
        assert_eq!(b.winner(), None);
    }
}
