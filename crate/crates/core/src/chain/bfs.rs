use std::collections::{HashMap, VecDeque};

use super::{apply_move, Chain, ChainBuilder, Move};
use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};

/// Shortest walk from `v` to `w` in the move graph over a small 𝔽_p.
///
/// Full moves are enumerated once per nonzero square scalar other than 1.
/// Intended as an oracle: requires `p ≤ 13`, `n ≤ 3` and `max_depth ≤ 6`.
pub fn bfs_min_chain(field: &PrimeField, v: &[Fp], w: &[Fp], max_depth: usize) -> Result<Chain<Fp>> {
    let p = field.modulus();
    if p > 13 || v.len() > 3 || max_depth > 6 || v.len() != w.len() {
        return Err(Error::InvalidInput("bfs limited to p <= 13, n <= 3, depth <= 6".into()));
    }
    let n = v.len();
    let mut scalars: Vec<(u64, Fp)> = Vec::new();
    for c in 1..p {
        let sq = field.mul(c, c);
        if sq != 1 && !scalars.iter().any(|(s, _)| *s == sq) {
            scalars.push((sq, Fp::new(c)));
        }
    }
    let mut moves = Vec::new();
    for i in 0..n {
        for (_, c) in &scalars {
            moves.push(Move::Full { i, c: *c });
        }
        for j in i + 1..n {
            moves.push(Move::Dashed { i, j });
        }
    }

    let mut parent: HashMap<Vec<Fp>, Option<(Vec<Fp>, usize)>> = HashMap::new();
    parent.insert(v.to_vec(), None);
    let mut queue = VecDeque::from([(v.to_vec(), 0usize)]);
    while let Some((u, depth)) = queue.pop_front() {
        if u == w {
            let mut path = Vec::new();
            let mut cur = u;
            while let Some(Some((prev, m))) = parent.get(&cur) {
                path.push(*m);
                cur = prev.clone();
            }
            let mut b = ChainBuilder::new(field, v)?;
            for m in path.into_iter().rev() {
                b.push(moves[m].clone())?;
            }
            return Ok(b.finish());
        }
        if depth == max_depth {
            continue;
        }
        for (idx, mv) in moves.iter().enumerate() {
            let Ok(next) = apply_move(field, &u, mv) else {
                continue;
            };
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((u.clone(), idx)));
                queue.push_back((next, depth + 1));
            }
        }
    }
    Err(Error::NotFound(max_depth))
}
