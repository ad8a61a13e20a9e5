//! Sp(4, Q), the paramodular group Γ_t and its integral conjugate Γ'_{p²}.
//!
//! Convention: the symplectic form is `J = [[0, I], [-I, 0]]` in 2×2 blocks and
//! `M` is symplectic iff `ᵗM·J·M = J`. With this choice `(A B; C D)` acts on the
//! Siegel upper half-plane by `Z ↦ (AZ + B)(CZ + D)⁻¹`, translations
//! `(I B; 0 I)` with symmetric `B` are symplectic, and a diagonal matrix
//! `diag(a, b, c, d)` is symplectic iff `ac = bd = 1`.

pub mod finite;
pub mod siegel;

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_arith::{int, parse_rational, rat, ArithError, Rational};

pub use finite::{is_prime, sp4_order_mod};
pub use siegel::{act, is_in_h2, ActionError, SiegelPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("enumeration over F_{0} is too large (q <= 7 supported)")]
    EnumerationTooLarge(u64),
    #[error("block {0:?} must be symmetric")]
    NotSymmetric(Box<[[Rational; 2]; 2]>),
    #[error("block {0:?} is singular")]
    Singular(Box<[[Rational; 2]; 2]>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Dense 4×4 matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix4 {
    entries: [[Rational; 4]; 4],
}

impl Matrix4 {
    pub fn from_rows(entries: [[Rational; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn from_i64(rows: [[i64; 4]; 4]) -> Self {
        Self::from_rows(rows.map(|r| r.map(int)))
    }

    pub fn zero() -> Self {
        Self::from_rows(std::array::from_fn(|_| {
            std::array::from_fn(|_| Rational::zero())
        }))
    }

    pub fn identity() -> Self {
        Self::diagonal([int(1), int(1), int(1), int(1)])
    }

    pub fn diagonal(d: [Rational; 4]) -> Self {
        let mut m = Self::zero();
        for (k, v) in d.into_iter().enumerate() {
            m.entries[k][k] = v;
        }
        m
    }

    /// Assembles `(A B; C D)` from 2×2 blocks.
    pub fn from_blocks(
        a: &[[Rational; 2]; 2],
        b: &[[Rational; 2]; 2],
        c: &[[Rational; 2]; 2],
        d: &[[Rational; 2]; 2],
    ) -> Self {
        let mut m = Self::zero();
        for r in 0..2 {
            for s in 0..2 {
                m.entries[r][s] = a[r][s].clone();
                m.entries[r][s + 2] = b[r][s].clone();
                m.entries[r + 2][s] = c[r][s].clone();
                m.entries[r + 2][s + 2] = d[r][s].clone();
            }
        }
        m
    }

    /// The block `(row_block, col_block)`, each index 0 or 1.
    pub fn block(&self, row_block: usize, col_block: usize) -> [[Rational; 2]; 2] {
        std::array::from_fn(|r| {
            std::array::from_fn(|s| self.entries[2 * row_block + r][2 * col_block + s].clone())
        })
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[[Rational; 4]; 4] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_rows(std::array::from_fn(|r| {
            std::array::from_fn(|s| self.entries[s][r].clone())
        }))
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_integer())
    }

    /// Parses four lines of four whitespace-separated rationals (`a/b` or
    /// integers). Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut rows: Vec<[Rational; 4]> = Vec::with_capacity(4);
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(GroupError::Parse {
                    line,
                    message: format!("expected 4 entries, found {}", fields.len()),
                });
            }
            if rows.len() == 4 {
                return Err(GroupError::Parse {
                    line,
                    message: "more than 4 rows".into(),
                });
            }
            let mut row: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
            for (slot, field) in row.iter_mut().zip(fields) {
                *slot = parse_rational(field).map_err(|e| GroupError::Parse {
                    line,
                    message: e.to_string(),
                })?;
            }
            rows.push(row);
        }
        let found = rows.len();
        let entries: [[Rational; 4]; 4] = rows.try_into().map_err(|_| GroupError::Parse {
            line: text.lines().count(),
            message: format!("expected 4 rows, found {found}"),
        })?;
        Ok(Self::from_rows(entries))
    }
}

impl Mul for &Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: &Matrix4) -> Matrix4 {
        Matrix4::from_rows(std::array::from_fn(|r| {
            std::array::from_fn(|s| {
                (0..4).fold(Rational::zero(), |acc, k| {
                    acc + &self.entries[r][k] * &rhs.entries[k][s]
                })
            })
        }))
    }
}

impl fmt::Display for Matrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// The symplectic form `[[0, I], [-I, 0]]`.
pub fn standard_j() -> Matrix4 {
    Matrix4::from_i64([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
}

pub fn is_symplectic(m: &Matrix4) -> bool {
    let j = standard_j();
    &(&m.transpose() * &j) * m == j
}

/// An element of Sp(4, Q).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymplecticMatrix(Matrix4);

impl TryFrom<Matrix4> for SymplecticMatrix {
    type Error = GroupError;

    fn try_from(m: Matrix4) -> Result<Self, GroupError> {
        if is_symplectic(&m) {
            Ok(Self(m))
        } else {
            Err(GroupError::NotSymplectic)
        }
    }
}

fn is_symmetric(b: &[[Rational; 2]; 2]) -> bool {
    b[0][1] == b[1][0]
}

fn zero2() -> [[Rational; 2]; 2] {
    std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()))
}

fn identity2() -> [[Rational; 2]; 2] {
    [[int(1), int(0)], [int(0), int(1)]]
}

impl SymplecticMatrix {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn j() -> Self {
        Self(standard_j())
    }

    pub fn minus_identity() -> Self {
        Self(Matrix4::diagonal([int(-1), int(-1), int(-1), int(-1)]))
    }

    /// `(I B; 0 I)` for symmetric `B`.
    pub fn translation(b: [[Rational; 2]; 2]) -> Result<Self, GroupError> {
        if !is_symmetric(&b) {
            return Err(GroupError::NotSymmetric(Box::new(b)));
        }
        Ok(Self(Matrix4::from_blocks(
            &identity2(),
            &b,
            &zero2(),
            &identity2(),
        )))
    }

    /// `(I 0; C I)` for symmetric `C`.
    pub fn lower_translation(c: [[Rational; 2]; 2]) -> Result<Self, GroupError> {
        if !is_symmetric(&c) {
            return Err(GroupError::NotSymmetric(Box::new(c)));
        }
        Ok(Self(Matrix4::from_blocks(
            &identity2(),
            &zero2(),
            &c,
            &identity2(),
        )))
    }

    /// `(U 0; 0 ᵗU⁻¹)` for invertible `U`.
    pub fn torus(u: [[Rational; 2]; 2]) -> Result<Self, GroupError> {
        let det = &u[0][0] * &u[1][1] - &u[0][1] * &u[1][0];
        if det.is_zero() {
            return Err(GroupError::Singular(Box::new(u)));
        }
        let inv_t = [
            [&u[1][1] / &det, -&u[1][0] / &det],
            [-&u[0][1] / &det, &u[0][0] / &det],
        ];
        Ok(Self(Matrix4::from_blocks(&u, &zero2(), &zero2(), &inv_t)))
    }

    pub fn as_matrix(&self) -> &Matrix4 {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix4 {
        self.0
    }

    /// `M⁻¹ = -J·ᵗM·J`.
    pub fn inverse(&self) -> Self {
        let j = standard_j();
        let inv = &(&j * &self.0.transpose()) * &j;
        Self(Matrix4::from_rows(inv.entries.map(|r| r.map(|x| -x))))
    }

    /// `self · m · self⁻¹`.
    pub fn conjugate(&self, m: &SymplecticMatrix) -> SymplecticMatrix {
        &(self * m) * &self.inverse()
    }

    pub fn block(&self, row_block: usize, col_block: usize) -> [[Rational; 2]; 2] {
        self.0.block(row_block, col_block)
    }
}

impl Mul for &SymplecticMatrix {
    type Output = SymplecticMatrix;
    fn mul(self, rhs: &SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix(&self.0 * &rhs.0)
    }
}

impl fmt::Display for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    /// `Z`
    Integer,
    /// `tZ`
    Multiple,
    /// `(1/t)Z`
    Fraction,
}

const PARAMODULAR_PATTERN: [[Slot; 4]; 4] = {
    use Slot::*;
    [
        [Integer, Integer, Integer, Multiple],
        [Multiple, Integer, Multiple, Multiple],
        [Integer, Integer, Integer, Multiple],
        [Integer, Fraction, Integer, Integer],
    ]
};

fn in_slot(x: &Rational, slot: Slot, t: &Rational) -> bool {
    match slot {
        Slot::Integer => x.is_integer(),
        Slot::Multiple => (x / t).is_integer(),
        Slot::Fraction => (x * t).is_integer(),
    }
}

/// Membership in the paramodular group Γ_t.
///
/// Panics if `t == 0`.
pub fn in_paramodular(m: &SymplecticMatrix, t: u64) -> bool {
    assert!(t >= 1, "paramodular level must be positive");
    let t = Rational::from_integer(BigInt::from(t));
    m.0.entries
        .iter()
        .zip(PARAMODULAR_PATTERN.iter())
        .all(|(row, slots)| {
            row.iter()
                .zip(slots.iter())
                .all(|(x, &slot)| in_slot(x, slot, &t))
        })
}

/// Slots of Γ'_{p²} that must be divisible by `p`: the checkerboard
/// `(r + s)` odd.
fn prime_pattern_marked(r: usize, s: usize) -> bool {
    (r + s) % 2 == 1
}

/// Membership in Γ'_{p²} ⊂ Sp(4, Z): integral, with the eight checkerboard
/// slots divisible by `p`.
pub fn in_prime_pattern(m: &SymplecticMatrix, p: u64) -> bool {
    let p = Rational::from_integer(BigInt::from(p));
    m.0.entries.iter().enumerate().all(|(r, row)| {
        row.iter()
            .enumerate()
            .all(|(s, x)| x.is_integer() && (!prime_pattern_marked(r, s) || (x / &p).is_integer()))
    })
}

/// Membership in the principal congruence subgroup Γ(l).
///
/// Panics if `l == 0`.
pub fn in_principal_congruence(m: &SymplecticMatrix, l: u64) -> bool {
    assert!(l >= 1, "congruence level must be positive");
    let l = BigInt::from(l);
    m.0.entries.iter().enumerate().all(|(r, row)| {
        row.iter().enumerate().all(|(s, x)| {
            if !x.is_integer() {
                return false;
            }
            let delta = if r == s {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            ((x.to_integer() - delta) % &l).is_zero()
        })
    })
}

/// `R = diag(1, 1/p, 1, p)`, which satisfies `R·Γ_{p²}·R⁻¹ = Γ'_{p²}`.
///
/// Conjugation by a diagonal matrix scales entry `(r, s)` by `R_r / R_s`, so
/// the `p²Z` slots of Γ_{p²} land in `pZ` or `Z` and the `(1/p²)Z` slot in
/// `Z`, matching the checkerboard pattern in both directions.
pub fn conjugator(p: u64) -> Result<SymplecticMatrix, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    let p = i64::try_from(p).map_err(|_| GroupError::NotPrime(p))?;
    let r = Matrix4::diagonal([int(1), rat(1, p), int(1), int(p)]);
    SymplecticMatrix::try_from(r)
}

/// Elements of Γ_t built from integer parameters, each landing in the
/// pattern for every choice of parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamodularGenerator {
    /// `(I B; 0 I)` with `B = [[b11, t·b12], [t·b12, t·b22]]`.
    Upper {
        b11: i64,
        b12: i64,
        b22: i64,
    },
    /// `(I 0; C I)` with `C = [[c11, c12], [c12, c22/t]]`.
    Lower {
        c11: i64,
        c12: i64,
        c22: i64,
    },
    /// `(U 0; 0 ᵗU⁻¹)` with `U = [[1, b], [t·c, 1 + t·b·c]]`, determinant 1.
    Torus {
        b: i64,
        c: i64,
    },
    /// `diag(1, −1, 1, −1)`.
    Reflection,
    MinusIdentity,
}

impl ParamodularGenerator {
    pub fn build(&self, t: u64) -> SymplecticMatrix {
        assert!(t >= 1, "paramodular level must be positive");
        let t = i64::try_from(t).expect("level fits in i64");
        let built = match *self {
            ParamodularGenerator::Upper { b11, b12, b22 } => SymplecticMatrix::translation([
                [int(b11), int(t * b12)],
                [int(t * b12), int(t * b22)],
            ]),
            ParamodularGenerator::Lower { c11, c12, c22 } => {
                SymplecticMatrix::lower_translation([[int(c11), int(c12)], [int(c12), rat(c22, t)]])
            }
            ParamodularGenerator::Torus { b, c } => {
                SymplecticMatrix::torus([[int(1), int(b)], [int(t * c), int(1 + t * b * c)]])
            }
            ParamodularGenerator::Reflection => {
                SymplecticMatrix::torus([[int(1), int(0)], [int(0), int(-1)]])
            }
            ParamodularGenerator::MinusIdentity => Ok(SymplecticMatrix::minus_identity()),
        };
        built.expect("generator parameters give a symplectic matrix")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(b: [[i64; 2]; 2]) -> [[Rational; 2]; 2] {
        b.map(|r| r.map(int))
    }

    #[test]
    fn symplectic_examples() {
        assert!(is_symplectic(&Matrix4::identity()));
        assert!(is_symplectic(&standard_j()));
        assert!(!is_symplectic(&Matrix4::diagonal([
            int(2),
            int(1),
            int(1),
            int(1)
        ])));
    }

    #[test]
    fn inverse_is_two_sided() {
        let g = &SymplecticMatrix::translation(sym([[1, 2], [2, 5]])).unwrap()
            * &SymplecticMatrix::lower_translation(sym([[3, -1], [-1, 0]])).unwrap();
        assert_eq!(&g * &g.inverse(), SymplecticMatrix::identity());
        assert_eq!(&g.inverse() * &g, SymplecticMatrix::identity());
    }

    #[test]
    fn paramodular_examples() {
        assert!(in_paramodular(&SymplecticMatrix::identity(), 1));
        assert!(in_paramodular(&SymplecticMatrix::identity(), 25));
        let b = SymplecticMatrix::translation(sym([[1, 0], [0, 0]])).unwrap();
        assert!(in_paramodular(&b, 4));
        let b = SymplecticMatrix::translation(sym([[0, 1], [1, 0]])).unwrap();
        assert!(!in_paramodular(&b, 2));
        // (4,2) slot allows denominators dividing t.
        let c =
            SymplecticMatrix::lower_translation([[int(0), int(0)], [int(0), rat(1, 9)]]).unwrap();
        assert!(in_paramodular(&c, 9));
        assert!(!in_paramodular(&c, 3));
    }

    #[test]
    fn translations_reject_asymmetric_blocks() {
        assert!(SymplecticMatrix::translation(sym([[0, 1], [0, 0]])).is_err());
        assert!(SymplecticMatrix::torus(sym([[1, 2], [2, 4]])).is_err());
    }

    #[test]
    fn prime_pattern_examples() {
        assert!(in_prime_pattern(&SymplecticMatrix::identity(), 5));
        // (1,4) entry of an upper translation is a marked slot.
        let good = SymplecticMatrix::translation(sym([[4, 5], [5, 0]])).unwrap();
        assert!(in_prime_pattern(&good, 5));
        let bad = SymplecticMatrix::translation(sym([[0, 1], [1, 0]])).unwrap();
        assert!(!in_prime_pattern(&bad, 5));
        // Non-integral elements are never in Γ'.
        let half = SymplecticMatrix::translation([[rat(1, 2), int(0)], [int(0), int(0)]]).unwrap();
        assert!(!in_prime_pattern(&half, 3));
    }

    #[test]
    fn principal_congruence_examples() {
        assert!(in_principal_congruence(&SymplecticMatrix::identity(), 6));
        let g = SymplecticMatrix::translation(sym([[6, -12], [-12, 18]])).unwrap();
        assert!(in_principal_congruence(&g, 6));
        assert!(!in_principal_congruence(&g, 12));
        assert!(!in_principal_congruence(&SymplecticMatrix::j(), 2));
        assert!(in_principal_congruence(
            &SymplecticMatrix::minus_identity(),
            2
        ));
    }

    #[test]
    fn conjugator_examples() {
        let r = conjugator(2).unwrap();
        assert_eq!(
            r.as_matrix(),
            &Matrix4::diagonal([int(1), rat(1, 2), int(1), int(2)])
        );
        let m = SymplecticMatrix::translation(sym([[1, 0], [0, 0]])).unwrap();
        assert!(in_paramodular(&m, 4));
        assert!(in_prime_pattern(&r.conjugate(&m), 2));
        let r3 = conjugator(3).unwrap();
        assert_eq!(
            r3.conjugate(&SymplecticMatrix::identity()),
            SymplecticMatrix::identity()
        );
        assert_eq!(conjugator(4), Err(GroupError::NotPrime(4)));
    }

    #[test]
    fn parse_matrix_text() {
        let text = "# J\n0 0 1 0\n0 0 0 1\n-1 0 0 0\n0 -1 0 0\n";
        assert_eq!(Matrix4::parse(text).unwrap(), standard_j());
        let text = "1 0 0 0\n0 1 0 0\n0 0 1 0\n0 1/4 0 1\n";
        assert_eq!(*Matrix4::parse(text).unwrap().get(3, 1), rat(1, 4));
        assert!(matches!(
            Matrix4::parse("1 0 0\n"),
            Err(GroupError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Matrix4::parse("1 0 0 0\n0 1 0 0\n0 0 x 0\n0 0 0 1\n"),
            Err(GroupError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Matrix4::parse("1 0 0 0\n"),
            Err(GroupError::Parse { .. })
        ));
    }
}
