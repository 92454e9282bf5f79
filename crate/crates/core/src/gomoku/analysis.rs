//! Board analysis, both imperative (scanners) and declarative (the facts
//! and rules a knowledge base needs to answer `winningMove(X,Y)`).

use crate::logic::builder::{clause, pred};
use crate::logic::{not, Clause, Expr, Literal, Term};

use super::board::{Board, Piece, Square, DIRECTIONS};

/// Empty squares where `piece` would complete five (or more) in a row,
/// row-major.
pub fn winning_squares(board: &Board, piece: Piece) -> Vec<Square> {
    board
        .empty_squares()
        .into_iter()
        .filter(|s| completes_five(board, piece, *s))
        .collect()
}

pub fn completes_five(board: &Board, piece: Piece, sq: Square) -> bool {
    board.is_empty_at(sq.x, sq.y)
        && DIRECTIONS
            .iter()
            .any(|&d| board.run_through(piece, sq.x as i64, sq.y as i64, d) >= 5)
}

/// Most pieces of `piece` found inside any single 3×3 window.
pub fn max_window(board: &Board, piece: Piece) -> usize {
    let n = board.size();
    let w = n.min(3);
    (0..=n - w)
        .flat_map(|y0| (0..=n - w).map(move |x0| (x0, y0)))
        .map(|(x0, y0)| {
            (y0..y0 + w)
                .flat_map(|y| (x0..x0 + w).map(move |x| (x, y)))
                .filter(|&(x, y)| board.get(x, y) == Some(piece))
                .count()
        })
        .max()
        .unwrap_or(0)
}

/// At least `k` pieces of `piece` inside some 3×3 window.
pub fn has_nucleus(board: &Board, piece: Piece, k: usize) -> bool {
    max_window(board, piece) >= k
}

/// Two or more distinct squares that would each win for `piece`: the
/// opponent can block only one of them.
pub fn has_double_threat(board: &Board, piece: Piece) -> bool {
    winning_squares(board, piece).len() >= 2
}

/// Pieces of `piece` in the 3×3 neighbourhood of `sq`.
pub fn neighbours(board: &Board, piece: Piece, sq: Square) -> usize {
    let (x, y) = (sq.x as i64, sq.y as i64);
    (-1..=1)
        .flat_map(|dy| (-1..=1).map(move |dx| (dx, dy)))
        .filter(|&(dx, dy)| (dx, dy) != (0, 0) && board.at(x + dx, y + dy) == Some(piece))
        .count()
}

/// How much placing `piece` on `sq` extends its own lines, with a smaller
/// weight for lines of the opponent it would cut.
pub fn line_score(board: &Board, piece: Piece, sq: Square) -> u64 {
    let (x, y) = (sq.x as i64, sq.y as i64);
    DIRECTIONS
        .iter()
        .map(|&d| {
            let own = board.run_through(piece, x, y, d) as u64 - 1;
            let opp = board.run_through(piece.opponent(), x, y, d) as u64 - 1;
            own * own * 4 + opp * opp
        })
        .sum()
}

// Neighbour predicates. Each names the square a stone is seen from and
// the square holding the stone, which is one step away.
//
//   eastNeighbor(P,A,B,Y)            B = A+1, (B,Y) holds P
//   westNeighbor(P,A,B,Y)            B = A-1
//   southNeighbor(P,X,A,B)           B = A+1, (X,B) holds P
//   northNeighbor(P,X,A,B)           B = A-1
//   southEastNeighbor(P,X1,Y1,X2,Y2) (X2,Y2) = (X1+1,Y1+1)
//   northWestNeighbor                (X1-1,Y1-1)
//   northEastNeighbor                (X1+1,Y1-1)
//   southWestNeighbor                (X1-1,Y1+1)
//
// plus occupied(X,Y) for every non-empty square.

struct Family {
    forward: &'static str,
    backward: &'static str,
    step: (i64, i64),
}

const FAMILIES: [Family; 4] = [
    Family {
        forward: "eastNeighbor",
        backward: "westNeighbor",
        step: (1, 0),
    },
    Family {
        forward: "southNeighbor",
        backward: "northNeighbor",
        step: (0, 1),
    },
    Family {
        forward: "southEastNeighbor",
        backward: "northWestNeighbor",
        step: (1, 1),
    },
    Family {
        forward: "northEastNeighbor",
        backward: "southWestNeighbor",
        step: (1, -1),
    },
];

fn neighbour_fact(name: &str, piece: Piece, from: (i64, i64), to: (i64, i64)) -> Term {
    let p = Term::sym(piece.name());
    let args = match name {
        "eastNeighbor" | "westNeighbor" => vec![p, Term::Int(from.0), Term::Int(to.0), Term::Int(from.1)],
        "southNeighbor" | "northNeighbor" => vec![p, Term::Int(from.0), Term::Int(from.1), Term::Int(to.1)],
        _ => vec![
            p,
            Term::Int(from.0),
            Term::Int(from.1),
            Term::Int(to.0),
            Term::Int(to.1),
        ],
    };
    Term::app(name, args)
}

/// Ground facts describing `board`.
pub fn board_facts(board: &Board) -> Vec<Term> {
    let mut facts = Vec::new();
    for (sq, cell) in board.squares() {
        if cell.is_some() {
            facts.push(Term::app(
                "occupied",
                vec![Term::Int(sq.x as i64), Term::Int(sq.y as i64)],
            ));
        }
    }
    for fam in &FAMILIES {
        for (name, (dx, dy)) in [(fam.forward, fam.step), (fam.backward, (-fam.step.0, -fam.step.1))] {
            for (sq, _) in board.squares() {
                let from = (sq.x as i64, sq.y as i64);
                let to = (from.0 + dx, from.1 + dy);
                if let Some(p) = board.at(to.0, to.1) {
                    facts.push(neighbour_fact(name, p, from, to));
                }
            }
        }
    }
    facts
}

/// One call to a neighbour predicate in a rule body, seen from square
/// `from` (a pair of variable names) to `to`.
fn step_literal(name: &str, piece: Piece, from: (&str, &str), to: (&str, &str)) -> Literal {
    let p = Term::sym(piece.name());
    let v = Term::var;
    let args = match name {
        "eastNeighbor" | "westNeighbor" => vec![p, v(from.0), v(to.0), v(from.1)],
        "southNeighbor" | "northNeighbor" => vec![p, v(from.0), v(from.1), v(to.1)],
        _ => vec![p, v(from.0), v(from.1), v(to.0), v(to.1)],
    };
    Literal::Pos(Term::app(name, args))
}

/// The rule for four crosses in a row east of an empty square, written out
/// by hand.
pub fn east_rule() -> Clause {
    clause(pred("winningMove", ["X", "Y"]))
        .imp_by(pred("eastNeighbor", ["cross", "A", "B", "Y"]))
        .and(pred("eastNeighbor", ["cross", "B", "C", "Y"]))
        .and(pred("eastNeighbor", ["cross", "C", "D", "Y"]))
        .and(pred("eastNeighbor", ["cross", "D", "E", "Y"]))
        .and(not(pred("occupied", ["A", "Y"])))
        .and("X is A")
        .build()
        .expect("well-formed rule")
}

/// Rules defining `head(X,Y)`: (X,Y) is empty and placing `piece` there
/// completes five. One rule per direction and per position of the empty
/// square inside the five-window.
pub fn winning_move_rules(head: &str, piece: Piece) -> Vec<Clause> {
    let mut rules = Vec::new();
    for (d, fam) in FAMILIES.iter().enumerate() {
        for k in 0..5 {
            let forward = 4 - k;
            // coordinates of the empty square
            let empty: (String, String) = match d {
                0 => ("A".into(), "Y".into()),
                1 => ("X".into(), "A".into()),
                _ => ("A1".into(), "A2".into()),
            };
            let square = |prefix: &str, i: usize| -> (String, String) {
                match d {
                    0 => (format!("{prefix}{i}"), "Y".into()),
                    1 => ("X".into(), format!("{prefix}{i}")),
                    _ => (format!("{prefix}{i}x"), format!("{prefix}{i}y")),
                }
            };
            let mut body = Vec::new();
            let mut prev = empty.clone();
            for i in 1..=forward {
                let next = square("F", i);
                body.push(step_literal(fam.forward, piece, (&prev.0, &prev.1), (&next.0, &next.1)));
                prev = next;
            }
            let mut prev = empty.clone();
            for i in 1..=k {
                let next = square("B", i);
                body.push(step_literal(
                    fam.backward,
                    piece,
                    (&prev.0, &prev.1),
                    (&next.0, &next.1),
                ));
                prev = next;
            }
            body.push(not(Term::app(
                "occupied",
                vec![Term::var(&empty.0), Term::var(&empty.1)],
            )));
            match d {
                0 => body.push(Literal::is("X", Expr::var("A"))),
                1 => body.push(Literal::is("Y", Expr::var("A"))),
                _ => {
                    body.push(Literal::is("X", Expr::var("A1")));
                    body.push(Literal::is("Y", Expr::var("A2")));
                }
            }
            rules.push(Clause::rule(pred(head, ["X", "Y"]), body));
        }
    }
    rules
}
