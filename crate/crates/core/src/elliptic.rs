//! Translation parts, the `c`-invariant splitting `V = V(c) + R`, projection
//! to the finite quotient, and the 2x2 matrices attached to braids that
//! stabilize a projected factorization.
//!
//! Every element of the elliptic Weyl group is `[[w, 0], [D, I]]` over
//! `(alpha_1..alpha_n, a, b)`. The 2x2 matrices reported here are in row
//! form: row `i` holds the image of the `i`-th radical generator in the basis
//! `(a, b)`, i.e. the transpose of the radical block acting on columns. In
//! this form `a_t(w1 w2) = a_t(w2) a_t(w1)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::{apply_braid_word, BraidWord};
use crate::lattice::LatticeVector;
use crate::linalg::{lattice_points_in_box, solve_integer, IMat, QMat};
use crate::rootsys::{coxeter_transformation, EllipticRootSystem, EllipticType, FiniteRootSystem};
use crate::weyl::{reflection_matrix, Ambient, LatticeAutomorphism, ReflectionTuple};

/// 2x2 integer matrix `[[p, q], [r, s]]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat2Z(pub [[i64; 2]; 2]);

impl Mat2Z {
    pub const IDENTITY: Mat2Z = Mat2Z([[1, 0], [0, 1]]);

    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Mat2Z {
        Mat2Z([[p, q], [r, s]])
    }

    pub fn det(&self) -> i64 {
        let [[p, q], [r, s]] = self.0;
        p * s - q * r
    }

    pub fn mul(&self, o: &Mat2Z) -> Mat2Z {
        let [[p, q], [r, s]] = self.0;
        let [[p2, q2], [r2, s2]] = o.0;
        let f = |x: i64, y: i64, u: i64, v: i64| {
            x.checked_mul(y)
                .and_then(|a| u.checked_mul(v).and_then(|b| a.checked_add(b)))
                .expect("2x2 overflow")
        };
        Mat2Z([
            [f(p, p2, q, r2), f(p, q2, q, s2)],
            [f(r, p2, s, r2), f(r, q2, s, s2)],
        ])
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mat2Z {
        assert_eq!(self.det(), 1, "inverse needs det 1");
        let [[p, q], [r, s]] = self.0;
        Mat2Z([[s, -q], [-r, p]])
    }

    pub fn neg(&self) -> Mat2Z {
        let [[p, q], [r, s]] = self.0;
        Mat2Z([[-p, -q], [-r, -s]])
    }

    pub fn transpose(&self) -> Mat2Z {
        let [[p, q], [r, s]] = self.0;
        Mat2Z([[p, r], [q, s]])
    }

    pub fn pow(&self, k: i64) -> Mat2Z {
        let base = if k < 0 { self.inverse() } else { *self };
        (0..k.unsigned_abs()).fold(Mat2Z::IDENTITY, |acc, _| acc.mul(&base))
    }
}

impl fmt::Debug for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `det(m) = 1` and `m = I mod ell`.
pub fn gamma_membership(m: &Mat2Z, ell: i64) -> bool {
    let [[p, q], [r, s]] = m.0;
    m.det() == 1
        && (p - 1).rem_euclid(ell) == 0
        && (s - 1).rem_euclid(ell) == 0
        && q.rem_euclid(ell) == 0
        && r.rem_euclid(ell) == 0
}

/// `w(v) = v - mu_a(v) a - mu_b(v) b`; forms are coefficient vectors on the
/// finite coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationPart {
    pub mu_a: Vec<i64>,
    pub mu_b: Vec<i64>,
}

impl TranslationPart {
    pub fn add(&self, o: &TranslationPart) -> TranslationPart {
        let s = |x: &[i64], y: &[i64]| x.iter().zip(y).map(|(a, b)| a + b).collect();
        TranslationPart {
            mu_a: s(&self.mu_a, &o.mu_a),
            mu_b: s(&self.mu_b, &o.mu_b),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mu_a.iter().chain(&self.mu_b).all(|&x| x == 0)
    }
}

/// Extracts the translation forms of an element acting trivially on `V/R`.
pub fn translation_part(w: &LatticeAutomorphism, n: usize) -> Result<TranslationPart> {
    let m = &w.matrix;
    if m.rows() != n + 2 {
        return Err(Error::Dimension {
            expected: n + 2,
            got: m.rows(),
        });
    }
    for i in 0..n {
        for j in 0..n + 2 {
            if m.get(i, j) != i64::from(i == j) {
                return Err(Error::NotTranslation);
            }
        }
    }
    for i in n..n + 2 {
        for j in n..n + 2 {
            if m.get(i, j) != i64::from(i == j) {
                return Err(Error::NotTranslation);
            }
        }
    }
    Ok(TranslationPart {
        mu_a: (0..n).map(|j| -m.get(n, j)).collect(),
        mu_b: (0..n).map(|j| -m.get(n + 1, j)).collect(),
    })
}

/// Rational vectors printed as `[p/q, ..]`.
pub fn rational_strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

#[derive(Clone, Debug)]
pub struct InvariantSplitting {
    pub ell: u32,
    /// `[[I, 0], [c_a; c_b, I]]`. `M c M^-1 = diag(w, I)`, so `V(c)` is
    /// spanned by `M^-1(alpha_i) = alpha_i - c_a(alpha_i) a - c_b(alpha_i) b`.
    pub m: QMat,
    /// Linear forms on the simple-root coordinates.
    pub c_a: Vec<BigRational>,
    pub c_b: Vec<BigRational>,
    /// The same forms in the Bourbaki orthonormal-type basis.
    pub c_a_bourbaki: Vec<BigRational>,
    pub c_b_bourbaki: Vec<BigRational>,
    pub d_a: Vec<i64>,
    pub d_b: Vec<i64>,
    /// `M c M^-1` is `diag(w, I)`.
    pub block_diagonal: bool,
}

#[derive(Serialize)]
struct SplittingJson {
    ell: u32,
    c_a: Vec<String>,
    c_b: Vec<String>,
    c_a_bourbaki: Vec<String>,
    c_b_bourbaki: Vec<String>,
    d_a: Vec<i64>,
    d_b: Vec<i64>,
    block_diagonal: bool,
}

impl InvariantSplitting {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SplittingJson {
            ell: self.ell,
            c_a: rational_strings(&self.c_a),
            c_b: rational_strings(&self.c_b),
            c_a_bourbaki: rational_strings(&self.c_a_bourbaki),
            c_b_bourbaki: rational_strings(&self.c_b_bourbaki),
            d_a: self.d_a.clone(),
            d_b: self.d_b.clone(),
            block_diagonal: self.block_diagonal,
        })
        .expect("serializable")
    }

    /// Radical coordinates `(x + c_a(v_f), y + c_b(v_f))` of `v = v_f + x a + y b`.
    pub fn radical_component(&self, v: &[i64]) -> [BigRational; 2] {
        let n = self.c_a.len();
        let eval = |c: &[BigRational]| -> BigRational {
            c.iter()
                .zip(&v[..n])
                .map(|(q, &x)| q * BigInt::from(x))
                .fold(BigRational::zero(), |s, t| s + t)
        };
        [
            BigRational::from_integer(v[n].into()) + eval(&self.c_a),
            BigRational::from_integer(v[n + 1].into()) + eval(&self.c_b),
        ]
    }
}

/// Doubled coordinates of the simple roots in the Bourbaki basis
/// (`e_i`, or `e_1..e_5, f_6` / `e_1..e_6, f_7` for the embedded E6, E7);
/// column `j` is `alpha_{j+1}`.
fn bourbaki_coordinates(tag: EllipticType) -> Vec<Vec<i64>> {
    let e_rows = |n: usize| -> Vec<Vec<i64>> {
        let mut rows = vec![vec![0i64; n]; n];
        // alpha_1 = 1/2(e1 + e8 - e2 - .. - e7); alpha_2 = e1 + e2;
        // alpha_k = e_{k-1} - e_{k-2} for k >= 3
        rows[0][0] = 1;
        for r in rows.iter_mut().take(n - 1).skip(1) {
            r[0] = -1;
        }
        rows[0][1] = 2;
        rows[1][1] = 2;
        for k in 3..=n {
            rows[k - 3][k - 1] = -2;
            rows[k - 2][k - 1] = 2;
        }
        rows[n - 1][0] = match n {
            6 => 3,
            7 => 2,
            _ => 1,
        };
        rows
    };
    match tag {
        EllipticType::D4 => vec![
            vec![2, 0, 0, 0],
            vec![-2, 2, 0, 0],
            vec![0, -2, 2, 2],
            vec![0, 0, -2, 2],
        ],
        EllipticType::E6 => e_rows(6),
        EllipticType::E7 => e_rows(7),
        EllipticType::E8 => e_rows(8),
    }
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

pub fn invariant_splitting(sys: &EllipticRootSystem) -> Result<InvariantSplitting> {
    let n = sys.rank();
    let c = coxeter_transformation(sys).matrix;
    let ell = sys.ell;
    let w = c.leading_block(n);
    let d_a: Vec<i64> = (0..n).map(|j| c.get(n, j)).collect();
    let d_b: Vec<i64> = (0..n).map(|j| c.get(n + 1, j)).collect();
    let wq = w.to_rational();
    let form = |d: &[i64]| -> Vec<BigRational> {
        // c_x = -1/ell sum_{i<ell} (i+1) d^t w^i
        let mut acc = vec![BigRational::zero(); n];
        let mut cur: Vec<BigRational> = d.iter().map(|&x| q(x)).collect();
        for i in 0..ell as i64 {
            for j in 0..n {
                acc[j] += &cur[j] * q(i + 1);
            }
            cur = (0..n)
                .map(|j| (0..n).fold(BigRational::zero(), |s, k| s + &cur[k] * wq.get(k, j)))
                .collect();
        }
        acc.into_iter().map(|x| -x / q(ell as i64)).collect()
    };
    let c_a = form(&d_a);
    let c_b = form(&d_b);
    let mut m = QMat::identity(n + 2);
    for j in 0..n {
        m.set(n, j, c_a[j].clone());
        m.set(n + 1, j, c_b[j].clone());
    }
    let minv = m
        .inverse()
        .ok_or_else(|| Error::Splitting("M singular".into()))?;
    let conj = m.mul(&c.to_rational()).mul(&minv);
    let mut expect = QMat::identity(n + 2);
    for i in 0..n {
        for j in 0..n {
            expect.set(i, j, wq.get(i, j).clone());
        }
    }
    let block_diagonal = conj == expect;
    if !block_diagonal {
        return Err(Error::Splitting("M c M^-1 is not block diagonal".into()));
    }
    let coords = bourbaki_coordinates(sys.tag);
    let mut x = QMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            x.set(i, j, BigRational::new(coords[i][j].into(), 2.into()));
        }
    }
    let xinv = x
        .inverse()
        .ok_or_else(|| Error::Splitting("Bourbaki basis singular".into()))?;
    let to_b = |c: &[BigRational]| -> Vec<BigRational> {
        (0..n)
            .map(|j| (0..n).fold(BigRational::zero(), |s, k| s + &c[k] * xinv.get(k, j)))
            .collect()
    };
    Ok(InvariantSplitting {
        ell,
        c_a_bourbaki: to_b(&c_a),
        c_b_bourbaki: to_b(&c_b),
        m,
        c_a,
        c_b,
        d_a,
        d_b,
        block_diagonal,
    })
}

/// Entrywise image in the finite quotient, re-canonicalized.
pub fn project_tuple(t: &ReflectionTuple, finite: &Arc<Ambient>) -> ReflectionTuple {
    let n = finite.dim();
    ReflectionTuple {
        entries: t
            .entries
            .iter()
            .map(|r| r.truncate(n).canonical())
            .collect(),
        ambient: finite.clone(),
    }
}

/// The automorphism carrying one fiber element to another, with its radical
/// restriction.
#[derive(Clone, Debug)]
pub struct Transporter {
    pub phi: IMat,
    pub matrix: Mat2Z,
}

/// Row form of the radical block of `phi`.
pub fn radical_row_matrix(phi: &IMat, n: usize) -> Mat2Z {
    Mat2Z([
        [phi.get(n, n), phi.get(n + 1, n)],
        [phi.get(n, n + 1), phi.get(n + 1, n + 1)],
    ])
}

/// The unique `phi` with `phi(beta_i) = beta'_i` (signs matched on the finite
/// parts) that fixes `V(c)`, checked to be integral, form-preserving and to
/// commute with `c`.
pub fn fiber_transporter(
    sys: &EllipticRootSystem,
    c: &LatticeAutomorphism,
    t1: &ReflectionTuple,
    t2: &ReflectionTuple,
) -> Result<Transporter> {
    let n = sys.rank();
    let dim = n + 2;
    if t1.len() != dim || t2.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: t1.len().min(t2.len()),
        });
    }
    let mut cols1 = Vec::with_capacity(dim);
    let mut cols2 = Vec::with_capacity(dim);
    for (x, y) in t1.entries.iter().zip(&t2.entries) {
        let (fx, fy) = (x.truncate(n), y.truncate(n));
        let y = if fx == fy {
            y.clone()
        } else if fx == fy.neg() {
            y.neg()
        } else {
            return Err(Error::DifferentFibers);
        };
        cols1.push(x.0.clone());
        cols2.push(y.0);
    }
    let b1 = IMat::from_cols(&cols1).to_rational();
    let b2 = IMat::from_cols(&cols2).to_rational();
    let inv = b1.inverse().ok_or(Error::NotIntegral)?;
    let phi = b2.mul(&inv).to_integer().ok_or(Error::NotIntegral)?;
    let g = sys.gram.matrix();
    if phi.transpose().mul(g).mul(&phi) != *g {
        return Err(Error::NotOrthogonal);
    }
    for i in 0..n {
        for j in 0..dim {
            if phi.get(i, j) != i64::from(i == j) {
                return Err(Error::NotCentralizing);
            }
        }
    }
    if phi.mul(&c.matrix) != c.matrix.mul(&phi) {
        return Err(Error::NotCentralizing);
    }
    let matrix = radical_row_matrix(&phi, n);
    Ok(Transporter { phi, matrix })
}

/// Transporter from `t` to its image under `w`; `w` must fix `pi(t)`.
pub fn braid_matrix(
    sys: &EllipticRootSystem,
    c: &LatticeAutomorphism,
    t: &ReflectionTuple,
    w: &BraidWord,
) -> Result<Mat2Z> {
    let image = apply_braid_word(t, w)?;
    let n = sys.rank();
    let stable = t
        .entries
        .iter()
        .zip(&image.entries)
        .all(|(x, y)| x.truncate(n).canonical() == y.truncate(n).canonical());
    if !stable {
        return Err(Error::NotStabilizing);
    }
    Ok(fiber_transporter(sys, c, t, &image)?.matrix)
}

/// The automorphism that is the identity on `V(c)` and acts on `R` by the
/// row-form matrix `gamma`; integral exactly when `gamma` lies in `Gamma(ell)`.
pub fn gamma_lift(split: &InvariantSplitting, gamma: &Mat2Z) -> Result<IMat> {
    let n = split.c_a.len();
    let col = gamma.transpose();
    let mut phi = QMat::identity(n + 2);
    // phi(v) = v + (col - I) r(v), r(v) = (x + c_a(v_f), y + c_b(v_f))
    let g = [
        [col.0[0][0] - 1, col.0[0][1]],
        [col.0[1][0], col.0[1][1] - 1],
    ];
    for i in 0..2 {
        for j in 0..n {
            let v = q(g[i][0]) * &split.c_a[j] + q(g[i][1]) * &split.c_b[j];
            phi.set(n + i, j, v);
        }
        for k in 0..2 {
            phi.set(n + i, n + k, q(i64::from(i == k) + g[i][k]));
        }
    }
    phi.to_integer().ok_or(Error::NotIntegral)
}

/// Applies `phi` entrywise, re-canonicalizing.
pub fn act_on_tuple(phi: &IMat, t: &ReflectionTuple) -> ReflectionTuple {
    ReflectionTuple {
        entries: t
            .entries
            .iter()
            .map(|r| LatticeVector(phi.mul_vec(&r.0)).canonical())
            .collect(),
        ambient: t.ambient.clone(),
    }
}

/// Roots of a factorization of `c` in E6 that is not generating, listed
/// `beta_1..beta_8`, together with the order in which they multiply to `c`.
pub fn non_generating_example(
    sys: &EllipticRootSystem,
) -> Result<(Vec<LatticeVector>, Vec<usize>)> {
    if sys.tag != EllipticType::E6 {
        return Err(Error::UnsupportedType(sys.tag.to_string()));
    }
    let n = sys.rank();
    let al = |i: usize| LatticeVector::unit(n + 2, i - 1);
    let (a, b) = (&sys.a, &sys.b);
    let high = sys.finite_part.highest_root.extend(0, 0);
    let betas = vec![
        al(1).sub(b),
        al(2).add(&b.scale(2)),
        al(3).add(&b.scale(2)),
        al(4).sub(&b.scale(3)),
        al(5).add(&b.scale(2)),
        al(6).sub(b),
        high.sub(a).add(b),
        al(4).add(b),
    ];
    Ok((betas, vec![0, 1, 2, 4, 5, 6, 3, 7]))
}

/// Radical offsets `(x_i)` such that lifting the finite roots (in product
/// order) by `x_i` along radical row `row` reproduces that row of `c`, with
/// every offset in `[-k, k]`. The condition is linear: lifting root `i`
/// contributes `-x_i (G beta_i)^T s_{i+1} .. s_m` to the row.
pub fn lift_offsets(
    fin: &FiniteRootSystem,
    roots: &[&[i64]],
    c: &IMat,
    row: usize,
    k: i64,
) -> Vec<Vec<i64>> {
    let n = fin.rank();
    let m = roots.len();
    let mut a = IMat::zeros(n, m);
    let mut suffix = IMat::identity(n);
    for i in (0..m).rev() {
        let u = suffix.vec_mul(&fin.gram.mul_vec(roots[i]));
        for j in 0..n {
            a.set(j, i, -u[j]);
        }
        suffix = reflection_matrix(&fin.gram, &roots[i].to_vec().into()).mul(&suffix);
    }
    let target: Vec<i64> = (0..n).map(|j| c.get(row, j)).collect();
    match solve_integer(&a, &target) {
        Some((p, ker)) => lattice_points_in_box(&p, &ker, k),
        None => Vec::new(),
    }
}

/// Whether every entry of a rational vector is an integer and fits in i64.
pub fn as_integers(v: &[BigRational]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                x.to_integer().to_i64()
            } else {
                None
            }
        })
        .collect()
}

/// Largest denominator in a rational vector.
pub fn max_denominator(v: &[BigRational]) -> BigInt {
    v.iter()
        .map(|x| x.denom().abs())
        .max()
        .unwrap_or_else(BigInt::one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_elliptic;
    use crate::weyl::{product, reflection_matrix};

    #[test]
    fn membership_examples() {
        assert!(gamma_membership(&Mat2Z::IDENTITY, 5));
        assert!(gamma_membership(&Mat2Z::new(1, 2, 0, 1), 2));
        assert!(!gamma_membership(&Mat2Z::new(1, 2, 0, 1), 3));
        assert!(!gamma_membership(&Mat2Z::new(-1, 0, 0, -1), 3));
        assert!(gamma_membership(&Mat2Z::new(-1, 0, 0, -1), 2));
    }

    #[test]
    fn translation_of_double_reflection() {
        let sys = build_elliptic(EllipticType::D4).unwrap();
        let g = sys.gram.matrix();
        let alpha = LatticeVector::unit(6, 1);
        let shifted = alpha.add(&sys.a);
        let w = LatticeAutomorphism::new(
            reflection_matrix(g, &alpha).mul(&reflection_matrix(g, &shifted)),
        );
        let tp = translation_part(&w, 4).unwrap();
        assert_eq!(tp.mu_a, sys.finite_part.gram.row(1));
        assert!(tp.mu_b.iter().all(|&x| x == 0));
        assert!(translation_part(&LatticeAutomorphism::identity(6), 4)
            .unwrap()
            .is_zero());
        let s = LatticeAutomorphism::new(reflection_matrix(g, &alpha));
        assert_eq!(translation_part(&s, 4), Err(Error::NotTranslation));
    }

    #[test]
    fn d4_splitting_is_block_diagonal() {
        let sys = build_elliptic(EllipticType::D4).unwrap();
        let sp = invariant_splitting(&sys).unwrap();
        assert!(sp.block_diagonal);
        let half = |p: i64| BigRational::new(p.into(), 2.into());
        assert_eq!(sp.c_a_bourbaki, vec![half(0), half(-1), half(1), half(0)]);
        assert_eq!(sp.c_b_bourbaki, vec![half(1), half(1), half(0), half(0)]);
    }

    #[test]
    fn identity_transporter_and_lift() {
        let sys = build_elliptic(EllipticType::D4).unwrap();
        let c = coxeter_transformation(&sys);
        let amb = Ambient::elliptic(&sys);
        let t = ReflectionTuple::new(amb, sys.canonical_roots()).unwrap();
        assert_eq!(product(&t), c);
        let tr = fiber_transporter(&sys, &c, &t, &t).unwrap();
        assert_eq!(tr.matrix, Mat2Z::IDENTITY);
        let sp = invariant_splitting(&sys).unwrap();
        let gamma = Mat2Z::new(1, 2, 0, 1);
        let phi = gamma_lift(&sp, &gamma).unwrap();
        let moved = act_on_tuple(&phi, &t);
        assert_eq!(
            fiber_transporter(&sys, &c, &t, &moved).unwrap().matrix,
            gamma
        );
        assert!(gamma_lift(&sp, &Mat2Z::new(1, 1, 0, 1)).is_err());
    }
}
