//! Orders of Sp(4, F_q) and of the reduction of Γ'_{p²}, by closed form and by
//! enumeration.
//!
//! A 4×4 matrix with columns `c₁..c₄` is symplectic iff `ω(c_a, c_b) = J_ab`
//! for all `a < b`, where `ω(x, y) = ᵗx·J·y`. The pruned enumerator picks
//! columns one at a time and only extends partial matrices that already
//! satisfy every constraint among the chosen columns.

use super::GroupError;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `|Sp(4, F_q)| = q⁴(q² − 1)(q⁴ − 1)`.
pub fn sp4_order_mod(q: u64) -> Result<u128, GroupError> {
    if !is_prime(q) {
        return Err(GroupError::NotPrime(q));
    }
    let q = u128::from(q);
    let q2 = q * q;
    Ok(q2 * q2 * (q2 - 1) * (q2 * q2 - 1))
}

/// `|SL(2, F_q)| = q(q² − 1)`.
pub fn sl2_order_mod(q: u64) -> Result<u128, GroupError> {
    if !is_prime(q) {
        return Err(GroupError::NotPrime(q));
    }
    let q = u128::from(q);
    Ok(q * (q * q - 1))
}

/// Index of Γ'_{p²} in Sp(4, Z).
///
/// Γ'_{p²} contains Γ(p), and its image mod `p` is the stabiliser of the
/// splitting `⟨e₁, e₃⟩ ⊕ ⟨e₂, e₄⟩` into hyperbolic planes, i.e.
/// SL(2, F_p) × SL(2, F_p).
pub fn prime_pattern_index(p: u64) -> Result<u128, GroupError> {
    let sl2 = sl2_order_mod(p)?;
    Ok(sp4_order_mod(p)? / (sl2 * sl2))
}

/// `J_ab` for the standard form, as a residue mod `q`.
fn j_entry(a: usize, b: usize, q: u32) -> u32 {
    match (a, b) {
        (0, 2) | (1, 3) => 1,
        (2, 0) | (3, 1) => q - 1,
        _ => 0,
    }
}

/// `ᵗx·J·y mod q`, with `J·y = (y₃, y₄, −y₁, −y₂)`.
fn omega(x: &[u32; 4], y: &[u32; 4], q: u32) -> u32 {
    let q = u64::from(q);
    let [x1, x2, x3, x4] = x.map(u64::from);
    let [y1, y2, y3, y4] = y.map(u64::from);
    let pos = (x1 * y3 + x2 * y4) % q;
    let neg = (x3 * y1 + x4 * y2) % q;
    ((pos + q - neg) % q) as u32
}

/// Checks all `q¹⁶` matrices over F₂ one by one. Returns the number that
/// preserve `J`.
pub fn sp4_f2_exhaustive() -> u64 {
    let q = 2;
    let mut count = 0;
    for bits in 0u32..(1 << 16) {
        let cols: [[u32; 4]; 4] =
            std::array::from_fn(|c| std::array::from_fn(|r| (bits >> (4 * c + r)) & 1));
        let ok = (0..4).all(|a| (0..4).all(|b| omega(&cols[a], &cols[b], q) == j_entry(a, b, q)));
        if ok {
            count += 1;
        }
    }
    count
}

/// Enumerates Sp(4, F_q) column by column, calling `visit` with the columns of
/// every element. Returns the number of elements.
pub fn enumerate_sp4(q: u64, mut visit: impl FnMut(&[[u32; 4]; 4])) -> Result<u64, GroupError> {
    if !is_prime(q) {
        return Err(GroupError::NotPrime(q));
    }
    if q > 7 {
        return Err(GroupError::EnumerationTooLarge(q));
    }
    let q = q as u32;
    let vectors: Vec<[u32; 4]> = (0..q.pow(4))
        .map(|k| std::array::from_fn(|r| (k / q.pow(r as u32)) % q))
        .collect();
    let mut cols = [[0u32; 4]; 4];
    let mut count = 0u64;
    extend(&vectors, q, 0, &mut cols, &mut count, &mut visit);
    Ok(count)
}

fn extend(
    vectors: &[[u32; 4]],
    q: u32,
    depth: usize,
    cols: &mut [[u32; 4]; 4],
    count: &mut u64,
    visit: &mut impl FnMut(&[[u32; 4]; 4]),
) {
    if depth == 4 {
        *count += 1;
        visit(cols);
        return;
    }
    for v in vectors {
        if (0..depth).all(|a| omega(&cols[a], v, q) == j_entry(a, depth, q)) {
            cols[depth] = *v;
            extend(vectors, q, depth + 1, cols, count, visit);
        }
    }
}

/// Counts elements of Sp(4, F_p) whose checkerboard slots vanish, i.e. the
/// image of Γ'_{p²} mod `p`.
pub fn prime_pattern_count_mod(p: u64) -> Result<u64, GroupError> {
    let mut hits = 0u64;
    enumerate_sp4(p, |cols| {
        // cols[c][r] is entry (r, c)
        let ok = (0..4).all(|r| (0..4).all(|c| (r + c) % 2 == 0 || cols[c][r] == 0));
        if ok {
            hits += 1;
        }
    })?;
    Ok(hits)
}
