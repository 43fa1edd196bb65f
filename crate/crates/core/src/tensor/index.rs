//! Index bookkeeping for Λ², S², Λ⁴ and S⁴ of an `m`-dimensional space.

/// Number of strictly increasing pairs `(i, j)`, `i < j`.
pub fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Lexicographic position of `(i, j)` with `i < j` in the Λ² basis.
pub fn pair_index(i: usize, j: usize, m: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

/// All pairs `i < j` in basis order.
pub fn pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(pair_count(m));
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j));
        }
    }
    out
}

/// Number of pairs `i ≤ j` (dimension of S²).
pub fn sym_pair_count(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Lexicographic position of `(i, j)` with `i ≤ j` in the S² basis.
pub fn sym_pair_index(i: usize, j: usize, m: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * m - i + 1) / 2 + (j - i)
}

pub fn sym_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(sym_pair_count(m));
    for i in 0..m {
        for j in i..m {
            out.push((i, j));
        }
    }
    out
}

/// Strictly increasing quadruples, the Λ⁴ basis.
pub fn quads(m: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

/// Weakly increasing quadruples, the multi-indices of S⁴.
pub fn sym_quads(m: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i..m {
            for k in j..m {
                for l in k..m {
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

/// Number of distinct orderings of a sorted multi-index: 4! / ∏ counts!.
pub fn multiplicity(q: &[usize; 4]) -> f64 {
    let mut fact = 1usize;
    let mut run = 1usize;
    for w in 1..4 {
        if q[w] == q[w - 1] {
            run += 1;
            fact *= run;
        } else {
            run = 1;
        }
    }
    (24 / fact) as f64
}

/// Sign and Λ² index of the ordered pair `(i, j)`; `None` when `i == j`.
pub fn signed_pair(i: usize, j: usize, m: usize) -> Option<(f64, usize)> {
    use std::cmp::Ordering::*;
    match i.cmp(&j) {
        Less => Some((1.0, pair_index(i, j, m))),
        Greater => Some((-1.0, pair_index(j, i, m))),
        Equal => None,
    }
}

/// Sort four distinct indices, returning the permutation sign; `None` on repeats.
pub fn sort4_signed(mut q: [usize; 4]) -> Option<(f64, [usize; 4])> {
    let mut sign = 1.0;
    for a in 0..4 {
        for b in 0..3 - a {
            if q[b] > q[b + 1] {
                q.swap(b, b + 1);
                sign = -sign;
            } else if q[b] == q[b + 1] {
                return None;
            }
        }
    }
    if q[0] == q[1] || q[1] == q[2] || q[2] == q[3] {
        return None;
    }
    Some((sign, q))
}
