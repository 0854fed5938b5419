//! Absolute order and interval posets: the exact finite `[1, c]` and the
//! windowed `[1, c]^gen` of a tubular elliptic Coxeter transformation.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::lift_offsets;
use crate::error::{Error, Result};
use crate::linalg::{det, det_small, rank, IMat};
use crate::rootsys::{coxeter_transformation, EllipticRootSystem, EllipticType, FiniteRootSystem};
use crate::weyl::{FiniteWeyl, LatticeAutomorphism, Refl};

/// Reflection length in a finite Weyl group: `rank(w - 1)`.
fn carter(m: &IMat) -> usize {
    rank(&m.sub(&IMat::identity(m.rows())))
}

/// `x <= y` in absolute order: `l(y) = l(x) + l(x^-1 y)`.
pub fn absolute_leq_finite(
    x: &LatticeAutomorphism,
    y: &LatticeAutomorphism,
    sys: &FiniteRootSystem,
) -> Result<bool> {
    let n = sys.rank();
    for m in [x, y] {
        if m.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                got: m.dim(),
            });
        }
    }
    let xi = x.inverse().ok_or(Error::NotOrthogonal)?;
    Ok(carter(&y.matrix) == carter(&x.matrix) + carter(&xi.compose(y).matrix))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalPoset {
    pub elements: Vec<LatticeAutomorphism>,
    /// Reflection length of each element.
    pub labels: Vec<usize>,
    /// `(i, j)`: element `j` covers element `i`.
    pub covers: Vec<(usize, usize)>,
    pub window: Option<i64>,
    pub exact: bool,
}

impl IntervalPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn level_counts(&self) -> Vec<usize> {
        let top = self.labels.iter().copied().max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for &l in &self.labels {
            out[l] += 1;
        }
        out
    }

    /// Every cover goes up exactly one level.
    pub fn covers_graded(&self) -> bool {
        self.covers
            .iter()
            .all(|&(i, j)| self.labels[j] == self.labels[i] + 1)
    }

    /// Number of maximal chains from the minimum, with the set of their lengths.
    pub fn maximal_chain_lengths(&self) -> HashSet<usize> {
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for &(i, j) in &self.covers {
            up[i].push(j);
        }
        let Some(bottom) = self.labels.iter().position(|&l| l == 0) else {
            return HashSet::new();
        };
        let mut memo: HashMap<usize, HashSet<usize>> = HashMap::new();
        fn go(
            v: usize,
            up: &[Vec<usize>],
            memo: &mut HashMap<usize, HashSet<usize>>,
        ) -> HashSet<usize> {
            if let Some(s) = memo.get(&v) {
                return s.clone();
            }
            let s: HashSet<usize> = if up[v].is_empty() {
                [0].into()
            } else {
                up[v]
                    .iter()
                    .flat_map(|&w| go(w, up, memo))
                    .map(|l| l + 1)
                    .collect()
            };
            memo.insert(v, s.clone());
            s
        }
        go(bottom, &up, &mut memo)
    }

    /// Sorts elements by (label, matrix) and rewrites covers to match.
    fn canonicalize(&mut self) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            (self.labels[a], &self.elements[a].matrix)
                .cmp(&(self.labels[b], &self.elements[b].matrix))
        });
        let mut pos = vec![0; self.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        self.elements = order.iter().map(|&i| self.elements[i].clone()).collect();
        self.labels = order.iter().map(|&i| self.labels[i]).collect();
        for c in &mut self.covers {
            *c = (pos[c.0], pos[c.1]);
        }
        self.covers.sort_unstable();
        self.covers.dedup();
    }
}

/// The exact interval `[1, c]` in a finite Weyl group.
pub fn interval_finite(c: &LatticeAutomorphism, group: &FiniteWeyl) -> Result<IntervalPoset> {
    let ci = group.element_index(&c.matrix).ok_or(Error::NotOrthogonal)?;
    let lc = group.length(ci);
    let members: Vec<u32> = (0..group.order() as u32)
        .filter(|&w| group.length(w) + group.length(group.mul(group.inv(w), ci)) == lc)
        .collect();
    let pos: HashMap<u32, usize> = members.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let mut covers = Vec::new();
    for (i, &u) in members.iter().enumerate() {
        for r in 0..group.num_reflections() as Refl {
            let w = group.mul(u, group.refl_elem(r));
            if let Some(&j) = pos.get(&w) {
                if group.length(w) == group.length(u) + 1 {
                    covers.push((i, j));
                }
            }
        }
    }
    let mut p = IntervalPoset {
        elements: members
            .iter()
            .map(|&w| LatticeAutomorphism::new(group.elements[w as usize].clone()))
            .collect(),
        labels: members.iter().map(|&w| group.length(w)).collect(),
        covers,
        window: None,
        exact: true,
    };
    p.canonicalize();
    Ok(p)
}

/// Windowed generating interval together with its certification record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EllipticInterval {
    pub type_tag: String,
    pub poset: IntervalPoset,
    /// Generating factorizations of `c` with every root in the window.
    pub factorizations: usize,
    /// Finite generating factorizations of the quotient that were lifted.
    pub finite_factorizations: usize,
    /// Elements per level whose length is certified by the finite-quotient
    /// bound and parity alone, without the complement argument.
    pub carter_certified: Vec<usize>,
    /// Elements whose length bounds did not meet; excluded from the poset.
    pub quarantined: Vec<LatticeAutomorphism>,
    pub truncated: bool,
}

/// Lower bound on reflection length from `rank(w - 1)` on the whole lattice
/// and on the finite quotient, raised to the parity of `det w`.
fn carter_lower_bound(m: &IMat, n: usize) -> usize {
    let lb = carter(m).max(carter(&m.leading_block(n)));
    let odd = det(m) < 0.into();
    if (lb % 2 == 1) == odd {
        lb
    } else {
        lb + 1
    }
}

/// Elements of one level bucketed by reflection and cover key.
type CoverIndex = HashMap<(Refl, (u32, Vec<i64>)), Vec<(usize, Compact)>>;

/// An element of the elliptic Weyl group as its finite image and its radical
/// rows: `[[w_f, 0], [r, 1]]` in the `(finite, a, b)` block layout.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Compact {
    fin: u32,
    r: [i64; 16],
}

impl Compact {
    /// `self * s_beta` for `beta = beta_f + x a + y b`, with `f = G beta_f`:
    /// the radical rows become `r - (r beta_f + delta) f^T`.
    fn times_reflection(
        &self,
        group: &FiniteWeyl,
        refl: Refl,
        beta: &[i64],
        f: &[i64],
        delta: [i64; 2],
    ) -> Compact {
        let n = beta.len();
        let mut out = Compact {
            fin: group.mul(self.fin, group.refl_elem(refl)),
            r: self.r,
        };
        for (row, d) in delta.into_iter().enumerate() {
            let row = &mut out.r[row * n..(row + 1) * n];
            let coef = row.iter().zip(beta).map(|(a, b)| a * b).sum::<i64>() + d;
            for (x, fj) in row.iter_mut().zip(f) {
                *x -= coef * fj;
            }
        }
        out
    }

    fn to_matrix(self, group: &FiniteWeyl, n: usize) -> IMat {
        let mut m = IMat::identity(n + 2);
        let wf = &group.elements[self.fin as usize];
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, wf.get(i, j));
            }
        }
        for row in 0..2 {
            for j in 0..n {
                m.set(n + row, j, self.r[row * n + j]);
            }
        }
        m
    }
}

/// `[1, c]^gen` restricted to factorizations with all roots in
/// `roots_window(K)`: every prefix product of every such generating
/// factorization, with covers from the divisibility test.
///
/// Factorizations are found by lifting the generating factorizations of the
/// finite quotient; the lifting condition is linear in the radical offsets.
pub fn interval_elliptic_gen(
    sys: &EllipticRootSystem,
    k: i64,
    cap: usize,
) -> Result<EllipticInterval> {
    if k < 1 {
        return Err(Error::Data(format!("window must be at least 1, got {k}")));
    }
    // the finite group is tabulated in full, which only D4 keeps small
    if sys.tag != EllipticType::D4 {
        return Err(Error::UnsupportedType(format!(
            "{} (windowed interval needs a tabulated finite group)",
            sys.tag
        )));
    }
    let n = sys.rank();
    let m = n + 2;
    let c = coxeter_transformation(sys).matrix;
    let group = FiniteWeyl::new(sys.finite_part.clone());
    let cbar = group
        .element_index(&c.leading_block(n))
        .ok_or(Error::NotOrthogonal)?;
    let finite = group.enumerate_fac(cbar, m, true, usize::MAX)?;
    let fin = &sys.finite_part;
    let forms: Vec<Vec<i64>> = group
        .reflections
        .iter()
        .map(|r| fin.gram.mul_vec(r.coords()))
        .collect();

    // prefix products streamed into per-thread maps: element -> (min, max) level
    type Levels = HashMap<Compact, (usize, usize)>;
    let one = Compact { fin: 0, r: [0; 16] };
    let found = AtomicUsize::new(0);
    let (count, seen) = finite
        .par_iter()
        .fold(
            || (0usize, Levels::new()),
            |(mut count, mut acc), t| {
                if found.load(Ordering::Relaxed) > cap {
                    return (count, acc);
                }
                let roots: Vec<&[i64]> = t
                    .iter()
                    .map(|&r| group.reflections[r as usize].coords())
                    .collect();
                let xs = lift_offsets(fin, &roots, &c, n, k);
                if xs.is_empty() {
                    return (count, acc);
                }
                let ys = lift_offsets(fin, &roots, &c, n + 1, k);
                for x in &xs {
                    for y in &ys {
                        let rows: Vec<Vec<i64>> = roots
                            .iter()
                            .zip(x.iter().zip(y))
                            .map(|(r, (&a, &b))| r.iter().copied().chain([a, b]).collect())
                            .collect();
                        if det_small(&rows).abs() != 1 {
                            continue;
                        }
                        if found.fetch_add(1, Ordering::Relaxed) >= cap {
                            return (count, acc);
                        }
                        count += 1;
                        let mut w = one;
                        for (i, &refl) in t.iter().enumerate() {
                            w = w.times_reflection(
                                &group,
                                refl,
                                roots[i],
                                &forms[refl as usize],
                                [x[i], y[i]],
                            );
                            let e = acc.entry(w).or_insert((i + 1, i + 1));
                            e.0 = e.0.min(i + 1);
                            e.1 = e.1.max(i + 1);
                        }
                    }
                }
                (count, acc)
            },
        )
        .reduce(
            || (0, Levels::new()),
            |(ca, a), (cb, b)| {
                let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
                for (w, (lo, hi)) in small {
                    let e = big.entry(w).or_insert((lo, hi));
                    e.0 = e.0.min(lo);
                    e.1 = e.1.max(hi);
                }
                (ca + cb, big)
            },
        );
    let truncated = found.load(Ordering::Relaxed) > cap;
    let mut seen = seen;
    seen.insert(one, (0, 0));

    // an element reached at two different levels would contradict l(c) = n + 2
    let mut compact = Vec::new();
    let mut labels = Vec::new();
    let mut quarantined = Vec::new();
    let mut carter_certified = vec![0; m + 1];
    let mut entries: Vec<(Compact, (usize, usize))> = seen.into_iter().collect();
    entries.sort_unstable();
    for (w, (lo, hi)) in entries {
        let mat = w.to_matrix(&group, n);
        if lo == hi {
            if carter_lower_bound(&mat, n) == lo {
                carter_certified[lo] += 1;
            }
            compact.push(w);
            labels.push(lo);
        } else {
            quarantined.push(LatticeAutomorphism::new(mat));
        }
    }
    let covers = covers_by_key(&compact, &labels, n, &group, &forms);
    let elements = compact
        .iter()
        .map(|w| LatticeAutomorphism::new(w.to_matrix(&group, n)))
        .collect();
    let mut poset = IntervalPoset {
        elements,
        labels,
        covers,
        window: Some(k),
        exact: false,
    };
    poset.canonicalize();
    Ok(EllipticInterval {
        type_tag: sys.tag.to_string(),
        poset,
        factorizations: count,
        finite_factorizations: finite.len(),
        carter_certified,
        quarantined,
        truncated,
    })
}

/// `w = u s_beta` with `beta = beta_f + delta` forces `u s_{beta_f}` to agree
/// with `w` on the finite part and, on each radical row, to differ from it
/// by a multiple of `f = G beta_f`. The key records exactly that data, with
/// radical rows reduced to their 2x2 minors against `f`.
fn cover_key(w: &Compact, f: &[i64]) -> (u32, Vec<i64>) {
    let n = f.len();
    let mut key = Vec::with_capacity(n * (n - 1));
    for row in 0..2 {
        let r = &w.r[row * n..(row + 1) * n];
        for i in 0..n {
            for j in i + 1..n {
                key.push(r[i] * f[j] - r[j] * f[i]);
            }
        }
    }
    (w.fin, key)
}

/// Row multiplier `d` with `diff = d f`, if integral.
fn multiple_of(diff: &[i64], f: &[i64]) -> Option<i64> {
    let p = f.iter().position(|&x| x != 0)?;
    (diff[p] % f[p] == 0)
        .then(|| diff[p] / f[p])
        .filter(|d| diff.iter().zip(f).all(|(a, b)| *a == d * b))
}

fn covers_by_key(
    elements: &[Compact],
    labels: &[usize],
    n: usize,
    group: &FiniteWeyl,
    forms: &[Vec<i64>],
) -> Vec<(usize, usize)> {
    let top = labels.iter().copied().max().unwrap_or(0);
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for (i, &l) in labels.iter().enumerate() {
        by_level[l].push(i);
    }
    (0..top)
        .into_par_iter()
        .flat_map_iter(|lvl| {
            let mut index: CoverIndex = HashMap::new();
            for &u in &by_level[lvl] {
                for (ri, f) in forms.iter().enumerate() {
                    let ri = ri as Refl;
                    let beta = group.reflections[ri as usize].coords();
                    let us = elements[u].times_reflection(group, ri, beta, f, [0, 0]);
                    index
                        .entry((ri, cover_key(&us, f)))
                        .or_default()
                        .push((u, us));
                }
            }
            let mut out = Vec::new();
            for &w in &by_level[lvl + 1] {
                for (ri, f) in forms.iter().enumerate() {
                    let Some(cands) = index.get(&(ri as Refl, cover_key(&elements[w], f))) else {
                        continue;
                    };
                    for (u, us) in cands {
                        // w = u s_beta_f - delta f^T on the radical rows, delta integral
                        let ok = (0..2).all(|row| {
                            let d: Vec<i64> = (0..n)
                                .map(|j| us.r[row * n + j] - elements[w].r[row * n + j])
                                .collect();
                            multiple_of(&d, f).is_some()
                        });
                        if ok {
                            out.push((*u, w));
                        }
                    }
                }
            }
            out
        })
        .collect()
}

/// Element counts per level at two windows, with the comparisons that can
/// stabilize: levels 0 and top outright, level 1 restricted to the smaller
/// window's reflections.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub windows: (i64, i64),
    pub counts: (Vec<usize>, Vec<usize>),
    pub level0_stable: bool,
    pub top_stable: bool,
    pub level1_stable: bool,
    pub prefix_closed: (bool, bool),
    pub graded: (bool, bool),
}

impl StabilizationReport {
    pub fn stable(&self) -> bool {
        self.level0_stable && self.top_stable && self.level1_stable
    }
}

/// Every non-minimal element covers something and every non-maximal one is
/// covered: each element sits on a chain from 1 to c.
pub fn prefix_closed(p: &IntervalPoset) -> bool {
    let top = p.labels.iter().copied().max().unwrap_or(0);
    let mut has_down = vec![false; p.len()];
    let mut has_up = vec![false; p.len()];
    for &(i, j) in &p.covers {
        has_up[i] = true;
        has_down[j] = true;
    }
    (0..p.len()).all(|i| (p.labels[i] == 0 || has_down[i]) && (p.labels[i] == top || has_up[i]))
}

pub fn stabilization(
    small: &EllipticInterval,
    large: &EllipticInterval,
    sys: &EllipticRootSystem,
) -> StabilizationReport {
    let (ks, kl) = (
        small.poset.window.unwrap_or(0),
        large.poset.window.unwrap_or(0),
    );
    fn level(p: &IntervalPoset, l: usize) -> Vec<&IMat> {
        let mut v: Vec<&IMat> = p
            .elements
            .iter()
            .zip(&p.labels)
            .filter(|(_, &x)| x == l)
            .map(|(e, _)| &e.matrix)
            .collect();
        v.sort();
        v
    }
    let top = sys.rank() + 2;
    let gram = sys.gram.matrix();
    let n = sys.rank();
    let in_small = |m: &&IMat| {
        LatticeAutomorphism::new((*m).clone())
            .as_reflection(gram)
            .is_some_and(|r| r.coords()[n].abs() <= ks && r.coords()[n + 1].abs() <= ks)
    };
    let l1_large: Vec<&IMat> = level(&large.poset, 1)
        .into_iter()
        .filter(in_small)
        .collect();
    StabilizationReport {
        windows: (ks, kl),
        counts: (small.poset.level_counts(), large.poset.level_counts()),
        level0_stable: level(&small.poset, 0) == level(&large.poset, 0),
        top_stable: level(&small.poset, top) == level(&large.poset, top),
        level1_stable: level(&small.poset, 1) == l1_large,
        prefix_closed: (prefix_closed(&small.poset), prefix_closed(&large.poset)),
        graded: (small.poset.covers_graded(), large.poset.covers_graded()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

pub fn export(p: &IntervalPoset, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Json => serde_json::to_vec_pretty(p).expect("poset serializes"),
        ExportFormat::Dot => {
            let mut s = String::from("digraph interval {\n  rankdir=BT;\n");
            let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (i, &l) in p.labels.iter().enumerate() {
                ranks.entry(l).or_default().push(i);
                let _ = writeln!(s, "  n{i} [label=\"{i}\", length={l}];");
            }
            for nodes in ranks.values() {
                let names: Vec<String> = nodes.iter().map(|i| format!("n{i}")).collect();
                let _ = writeln!(s, "  {{ rank=same; {} }}", names.join("; "));
            }
            for &(i, j) in &p.covers {
                let _ = writeln!(s, "  n{i} -> n{j};");
            }
            s.push_str("}\n");
            s.into_bytes()
        }
    }
}

pub fn import_json(bytes: &[u8]) -> Result<IntervalPoset> {
    serde_json::from_slice(bytes).map_err(|e| Error::Data(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_elliptic, build_finite, FiniteType};
    use crate::weyl::reflection_matrix;

    fn coxeter(group: &FiniteWeyl) -> LatticeAutomorphism {
        let n = group.sys.rank();
        let m = group
            .sys
            .simple_roots
            .iter()
            .fold(IMat::identity(n), |acc, r| {
                acc.mul(&reflection_matrix(&group.sys.gram, r))
            });
        LatticeAutomorphism::new(m)
    }

    #[test]
    fn finite_intervals_are_catalan() {
        for (t, size, covers) in [(FiniteType::A(2), 5, 6), (FiniteType::A(3), 14, 28)] {
            let g = FiniteWeyl::new(build_finite(t).unwrap());
            let p = interval_finite(&coxeter(&g), &g).unwrap();
            assert_eq!(p.len(), size);
            assert_eq!(p.covers.len(), covers);
            assert!(p.covers_graded());
            assert_eq!(p.maximal_chain_lengths(), [g.sys.rank()].into());
        }
    }

    #[test]
    fn identity_interval_is_a_point() {
        let g = FiniteWeyl::new(build_finite(FiniteType::A(3)).unwrap());
        let p = interval_finite(&LatticeAutomorphism::identity(3), &g).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.covers.is_empty());
    }

    #[test]
    fn leq_basics() {
        let sys = build_finite(FiniteType::A(2)).unwrap();
        let g = FiniteWeyl::new(sys.clone());
        let c = coxeter(&g);
        let one = LatticeAutomorphism::identity(2);
        assert!(absolute_leq_finite(&one, &c, &sys).unwrap());
        assert!(absolute_leq_finite(&c, &c, &sys).unwrap());
        for r in &g.reflections {
            let s = LatticeAutomorphism::new(reflection_matrix(&sys.gram, r));
            assert!(absolute_leq_finite(&s, &c, &sys).unwrap());
        }
    }

    #[test]
    fn dot_and_json_export() {
        let g = FiniteWeyl::new(build_finite(FiniteType::A(2)).unwrap());
        let p = interval_finite(&coxeter(&g), &g).unwrap();
        let dot = String::from_utf8(export(&p, ExportFormat::Dot)).unwrap();
        assert_eq!(dot.matches("->").count(), 6);
        assert_eq!(import_json(&export(&p, ExportFormat::Json)).unwrap(), p);
        let lone = IntervalPoset {
            elements: vec![LatticeAutomorphism::identity(2)],
            labels: vec![0],
            covers: vec![],
            window: None,
            exact: true,
        };
        let dot = String::from_utf8(export(&lone, ExportFormat::Dot)).unwrap();
        assert!(dot.contains("n0 [") && !dot.contains("->"));
        assert!("svg".parse::<ExportFormat>().is_err());
    }

    #[test]
    fn d4_window_one_contains_basis_reflections() {
        let sys = build_elliptic(EllipticType::D4).unwrap();
        let e = interval_elliptic_gen(&sys, 1, usize::MAX).unwrap();
        assert!(e.quarantined.is_empty());
        let counts = e.poset.level_counts();
        assert_eq!((counts[0], counts[6]), (1, 1));
        for g in &sys.basis_gamma {
            let s = LatticeAutomorphism::new(reflection_matrix(sys.gram.matrix(), g));
            assert!(e.poset.elements.contains(&s));
        }
        assert!(prefix_closed(&e.poset));
    }
}
