//! Finite root systems by reflection closure, and the tubular elliptic root
//! systems `X^(1,1)` built on top of them.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagram::{gram_from_diagram, Diagram, GramForm};
use crate::error::{Error, Result};
use crate::lattice::{hnf_span, LatticeVector};
use crate::linalg::{dot, IMat};
use crate::weyl::{reflection_matrix, LatticeAutomorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FiniteType {
    A(usize),
    D(usize),
    E(usize),
    /// Non-simply-laced; only used for the two-root-length example.
    F4,
}

impl FiniteType {
    pub fn rank(self) -> usize {
        match self {
            FiniteType::A(n) | FiniteType::D(n) | FiniteType::E(n) => n,
            FiniteType::F4 => 4,
        }
    }

    pub fn is_simply_laced(self) -> bool {
        !matches!(self, FiniteType::F4)
    }

    /// Root count known from the classification.
    pub fn expected_root_count(self) -> usize {
        match self {
            FiniteType::A(n) => n * (n + 1),
            FiniteType::D(n) => 2 * n * (n - 1),
            FiniteType::E(6) => 72,
            FiniteType::E(7) => 126,
            FiniteType::E(8) => 240,
            FiniteType::E(_) => 0,
            FiniteType::F4 => 48,
        }
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E(n) => write!(f, "E{n}"),
            FiniteType::F4 => write!(f, "F4"),
        }
    }
}

impl FromStr for FiniteType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedType(s.to_string());
        if s == "F4" {
            return Ok(FiniteType::F4);
        }
        let mut chars = s.chars();
        let family = chars.next().ok_or_else(bad)?;
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        match family {
            'A' if n >= 1 => Ok(FiniteType::A(n)),
            'D' if n >= 4 => Ok(FiniteType::D(n)),
            'E' if (6..=8).contains(&n) => Ok(FiniteType::E(n)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteRootSystem {
    pub type_tag: FiniteType,
    /// Gram matrix on the simple-root basis. For F4 the form is scaled so
    /// that it is integral: long roots have norm 4, short roots norm 2.
    pub gram: IMat,
    pub simple_roots: Vec<LatticeVector>,
    /// All roots, sorted lexicographically.
    pub all_roots: Vec<LatticeVector>,
    pub highest_root: LatticeVector,
    pub marks: Vec<i64>,
}

/// `x - 2(x|r)/(r|r) r`, valid for any crystallographic root.
pub fn reflect_with(gram: &IMat, root: &LatticeVector, x: &LatticeVector) -> LatticeVector {
    let gr = gram.mul_vec(&root.0);
    let norm = dot(&root.0, &gr);
    let num = 2 * dot(&x.0, &gr);
    assert!(norm > 0 && num % norm == 0, "not a crystallographic root");
    x.sub(&root.scale(num / norm))
}

impl FiniteRootSystem {
    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn norm(&self, v: &LatticeVector) -> i64 {
        dot(&v.0, &self.gram.mul_vec(&v.0))
    }

    pub fn bilinear(&self, x: &LatticeVector, y: &LatticeVector) -> i64 {
        dot(&x.0, &self.gram.mul_vec(&y.0))
    }

    pub fn reflect(&self, root: &LatticeVector, x: &LatticeVector) -> LatticeVector {
        reflect_with(&self.gram, root, x)
    }

    /// Gram form, for the simply-laced families.
    pub fn gram_form(&self) -> Option<GramForm> {
        GramForm::new(self.gram.clone()).ok()
    }

    /// Canonical representatives of the roots up to sign, sorted.
    pub fn positive_roots(&self) -> Vec<LatticeVector> {
        self.all_roots
            .iter()
            .filter(|r| r.is_canonical())
            .cloned()
            .collect()
    }

    pub fn contains_root(&self, v: &LatticeVector) -> bool {
        self.all_roots.binary_search(v).is_ok()
    }
}

fn f4_gram() -> IMat {
    IMat::from_rows(&[
        vec![4, -2, 0, 0],
        vec![-2, 4, -2, 0],
        vec![0, -2, 2, -1],
        vec![0, 0, -1, 2],
    ])
}

pub fn build_finite(tag: FiniteType) -> Result<FiniteRootSystem> {
    let gram = match tag {
        FiniteType::A(n) => gram_from_diagram(&Diagram::dynkin('A', n)?)?
            .matrix()
            .clone(),
        FiniteType::D(n) => gram_from_diagram(&Diagram::dynkin('D', n)?)?
            .matrix()
            .clone(),
        FiniteType::E(n) => gram_from_diagram(&Diagram::dynkin('E', n)?)?
            .matrix()
            .clone(),
        FiniteType::F4 => f4_gram(),
    };
    let n = tag.rank();
    let simple: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    // worklist saturation under the simple reflections
    let mut seen: HashSet<LatticeVector> = simple.iter().cloned().collect();
    let mut work: Vec<LatticeVector> = simple.clone();
    while let Some(v) = work.pop() {
        for s in &simple {
            let w = reflect_with(&gram, s, &v);
            if seen.insert(w.clone()) {
                work.push(w);
            }
        }
    }
    let all: BTreeSet<LatticeVector> = seen.into_iter().collect();
    let all_roots: Vec<LatticeVector> = all.into_iter().collect();
    let highest_root = all_roots
        .iter()
        .max_by_key(|r| (r.0.iter().sum::<i64>(), r.0.clone()))
        .cloned()
        .expect("non-empty root system");
    let marks = highest_root.0.clone();
    Ok(FiniteRootSystem {
        type_tag: tag,
        gram,
        simple_roots: simple,
        all_roots,
        highest_root,
        marks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EllipticType {
    D4,
    E6,
    E7,
    E8,
}

impl EllipticType {
    pub const ALL: [EllipticType; 4] = [
        EllipticType::D4,
        EllipticType::E6,
        EllipticType::E7,
        EllipticType::E8,
    ];

    pub fn finite(self) -> FiniteType {
        match self {
            EllipticType::D4 => FiniteType::D(4),
            EllipticType::E6 => FiniteType::E(6),
            EllipticType::E7 => FiniteType::E(7),
            EllipticType::E8 => FiniteType::E(8),
        }
    }

    /// Bourbaki index of the unique vertex with maximal mark.
    pub fn t_index(self) -> usize {
        match self {
            EllipticType::D4 => 2,
            _ => 4,
        }
    }

    /// Arm weights of the star-shaped generalized diagram.
    pub fn weights(self) -> &'static [usize] {
        match self {
            EllipticType::D4 => &[2, 2, 2, 2],
            EllipticType::E6 => &[3, 3, 3],
            EllipticType::E7 => &[4, 4, 2],
            EllipticType::E8 => &[6, 3, 2],
        }
    }

    pub fn diagram_name(self) -> &'static str {
        match self {
            EllipticType::D4 => "D4.1.1",
            EllipticType::E6 => "E6.1.1",
            EllipticType::E7 => "E7.1.1",
            EllipticType::E8 => "E8.1.1",
        }
    }
}

impl fmt::Display for EllipticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.diagram_name())
    }
}

impl FromStr for EllipticType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let core = s.trim_end_matches(".1.1").trim_end_matches("(1,1)");
        match core {
            "D4" => Ok(EllipticType::D4),
            "E6" => Ok(EllipticType::E6),
            "E7" => Ok(EllipticType::E7),
            "E8" => Ok(EllipticType::E8),
            _ => Err(Error::UnsupportedType(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EllipticRootSystem {
    pub tag: EllipticType,
    pub finite_part: FiniteRootSystem,
    /// Block diagonal: finite Cartan block, zero on the radical.
    pub gram: GramForm,
    pub a: LatticeVector,
    pub b: LatticeVector,
    /// Elliptic root basis, indexed `0` = alpha_0, `i` = alpha_i, `n+1` = alpha_t + a.
    pub basis_gamma: Vec<LatticeVector>,
    pub gamma_labels: Vec<String>,
    /// Bourbaki index of the max-mark vertex.
    pub t_index: usize,
    pub ell: u32,
}

impl EllipticRootSystem {
    pub fn rank(&self) -> usize {
        self.finite_part.rank()
    }

    pub fn dim(&self) -> usize {
        self.rank() + 2
    }

    pub fn bilinear(&self, x: &LatticeVector, y: &LatticeVector) -> i64 {
        self.gram
            .bilinear(x, y)
            .expect("vectors live in the ambient lattice")
    }

    pub fn reflect(&self, root: &LatticeVector, x: &LatticeVector) -> LatticeVector {
        self.gram.reflect(root, x).expect("roots have norm 2")
    }

    /// Lift of a finite vector with radical coordinates `(l, k)`.
    pub fn lift(&self, finite: &LatticeVector, l: i64, k: i64) -> LatticeVector {
        finite.extend(l, k)
    }

    pub fn is_root(&self, v: &LatticeVector) -> bool {
        v.dim() == self.dim() && self.bilinear(v, v) == 2
    }

    /// Indices into `basis_gamma` of the canonical word
    /// `s_1 .. (s_t omitted) .. s_n s_0 s_t s_t*`.
    pub fn canonical_word(&self) -> Vec<usize> {
        let n = self.rank();
        let mut w: Vec<usize> = (1..=n).filter(|&i| i != self.t_index).collect();
        w.push(0);
        w.push(self.t_index);
        w.push(n + 1);
        w
    }

    pub fn canonical_roots(&self) -> Vec<LatticeVector> {
        self.canonical_word()
            .into_iter()
            .map(|i| self.basis_gamma[i].canonical())
            .collect()
    }
}

pub fn build_elliptic(tag: EllipticType) -> Result<EllipticRootSystem> {
    let finite = build_finite(tag.finite())?;
    let n = finite.rank();
    let gram = GramForm::radical_extension(&finite.gram, 2)?;
    let a = LatticeVector::unit(n + 2, n);
    let b = LatticeVector::unit(n + 2, n + 1);
    let t = tag.t_index();
    let highest = finite.highest_root.extend(0, 0);
    let alpha0 = highest.neg().add(&b);
    let mut basis = vec![alpha0];
    let mut labels = vec!["0".to_string()];
    for i in 0..n {
        basis.push(LatticeVector::unit(n + 2, i));
        labels.push((i + 1).to_string());
    }
    basis.push(LatticeVector::unit(n + 2, t - 1).add(&a));
    labels.push(format!("{t}*"));
    let mut sys = EllipticRootSystem {
        tag,
        finite_part: finite,
        gram,
        a,
        b,
        basis_gamma: basis,
        gamma_labels: labels,
        t_index: t,
        ell: 0,
    };
    sys.ell = coxeter_transformation(&sys)
        .matrix
        .order(64)
        .ok_or_else(|| {
            Error::Splitting("Coxeter transformation has no small finite order".into())
        })?;
    Ok(sys)
}

/// All `beta + l a + k b` with `beta` a finite root and `|l|, |k| <= K`.
pub fn roots_window(sys: &EllipticRootSystem, k: i64) -> Vec<LatticeVector> {
    let mut out =
        Vec::with_capacity(sys.finite_part.all_roots.len() * ((2 * k + 1) as usize).pow(2));
    for beta in &sys.finite_part.all_roots {
        for l in -k..=k {
            for m in -k..=k {
                out.push(beta.extend(l, m));
            }
        }
    }
    out
}

/// Product of the basis reflections in the canonical order.
pub fn coxeter_transformation(sys: &EllipticRootSystem) -> LatticeAutomorphism {
    let g = sys.gram.matrix();
    let mut c = IMat::identity(sys.dim());
    for i in sys.canonical_word() {
        c = c.mul(&reflection_matrix(g, &sys.basis_gamma[i]));
    }
    LatticeAutomorphism::new(c)
}

/// True when `alpha_t` is not an integer combination of the highest root and
/// the other simple roots: the reason no length-`n` factorization of `c` exists.
pub fn mark_obstruction(sys: &EllipticRootSystem) -> bool {
    let fin = &sys.finite_part;
    let t = sys.t_index - 1;
    let mut gens = vec![fin.highest_root.clone()];
    gens.extend(
        fin.simple_roots
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != t)
            .map(|(_, r)| r.clone()),
    );
    !hnf_span(&gens).contains(&fin.simple_roots[t])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_tags() {
        assert_eq!("E6".parse::<FiniteType>().unwrap(), FiniteType::E(6));
        assert!("Q7".parse::<FiniteType>().is_err());
        assert_eq!("E6.1.1".parse::<EllipticType>().unwrap(), EllipticType::E6);
        assert_eq!("D4".parse::<EllipticType>().unwrap(), EllipticType::D4);
    }

    #[test]
    fn d4_marks_and_count() {
        let d4 = build_finite(FiniteType::D(4)).unwrap();
        assert_eq!(d4.all_roots.len(), 24);
        assert_eq!(d4.marks, vec![1, 2, 1, 1]);
    }

    #[test]
    fn e8_marks() {
        let e8 = build_finite(FiniteType::E(8)).unwrap();
        assert_eq!(e8.all_roots.len(), 240);
        assert_eq!(e8.marks, vec![2, 3, 4, 6, 5, 4, 3, 2]);
    }

    #[test]
    fn f4_highest_root() {
        let f4 = build_finite(FiniteType::F4).unwrap();
        assert_eq!(f4.all_roots.len(), 48);
        assert_eq!(f4.highest_root.0, vec![2, 3, 4, 2]);
        assert_eq!(f4.norm(&f4.highest_root), 4);
    }

    #[test]
    fn window_sizes() {
        let d4 = build_elliptic(EllipticType::D4).unwrap();
        assert_eq!(roots_window(&d4, 0).len(), 24);
        assert_eq!(roots_window(&d4, 1).len(), 216);
        assert!(roots_window(&d4, 1).iter().all(|r| d4.is_root(r)));
    }

    #[test]
    fn d4_basis_and_order() {
        let d4 = build_elliptic(EllipticType::D4).unwrap();
        assert_eq!(d4.ell, 2);
        assert_eq!(d4.basis_gamma[5].0, vec![0, 1, 0, 0, 1, 0]);
        assert_eq!(d4.gamma_labels[5], "2*");
        assert_eq!(d4.canonical_word(), vec![1, 3, 4, 0, 2, 5]);
    }

    #[test]
    fn obstruction_inverts_on_a_member() {
        let d4 = build_finite(FiniteType::D(4)).unwrap();
        let l = hnf_span(&d4.simple_roots);
        assert!(l.contains(&d4.simple_roots[0]));
    }
}
