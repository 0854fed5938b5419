//! Weyl-group elements as integer matrices, reflection tuples, reflection
//! length, generation tests and factorization enumeration.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{hnf_span, Lattice, LatticeVector};
use crate::linalg::{dot, inverse_integer, rank, IMat};
use crate::rootsys::{reflect_with, EllipticRootSystem, FiniteRootSystem};

/// Integer matrix acting on column coordinate vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeAutomorphism {
    pub matrix: IMat,
}

impl LatticeAutomorphism {
    pub fn new(matrix: IMat) -> Self {
        LatticeAutomorphism { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        LatticeAutomorphism::new(IMat::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Composition `self * other` (apply `other` first).
    pub fn compose(&self, other: &LatticeAutomorphism) -> LatticeAutomorphism {
        LatticeAutomorphism::new(self.matrix.mul(&other.matrix))
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector(self.matrix.mul_vec(&v.0))
    }

    pub fn inverse(&self) -> Option<LatticeAutomorphism> {
        inverse_integer(&self.matrix).map(LatticeAutomorphism::new)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// `M^T G M = G`.
    pub fn preserves(&self, gram: &IMat) -> bool {
        self.matrix.transpose().mul(gram).mul(&self.matrix) == *gram
    }

    /// Recovers the root when the element is a reflection in the given form.
    pub fn as_reflection(&self, gram: &IMat) -> Option<LatticeVector> {
        let n = self.dim();
        let d = IMat::identity(n).sub(&self.matrix);
        let col = (0..n).find(|&j| (0..n).any(|i| d.get(i, j) != 0))?;
        let v = d.col(col);
        let g = v
            .iter()
            .fold(0i64, |acc, &x| num_integer::Integer::gcd(&acc, &x));
        let root = LatticeVector(v.iter().map(|x| x / g).collect()).canonical();
        let norm = dot(&root.0, &gram.mul_vec(&root.0));
        if norm <= 0 {
            return None;
        }
        (reflection_matrix(gram, &root) == self.matrix).then_some(root)
    }
}

/// Matrix of `x -> x - 2(x|r)/(r|r) r`.
pub fn reflection_matrix(gram: &IMat, root: &LatticeVector) -> IMat {
    let n = root.dim();
    let gr = gram.mul_vec(&root.0);
    let norm = dot(&root.0, &gr);
    assert!(norm > 0, "reflection needs a vector of positive norm");
    let mut m = IMat::identity(n);
    for i in 0..n {
        for j in 0..n {
            let num = 2 * root.0[i] * gr[j];
            assert!(num % norm == 0, "not a crystallographic root");
            m.set(i, j, m.get(i, j) - num / norm);
        }
    }
    m
}

/// The lattice and form a tuple of reflections lives in.
#[derive(Clone, Debug)]
pub struct Ambient {
    pub label: String,
    pub gram: IMat,
    /// Rank of the finite quotient (`dim` for finite systems, `dim - 2` elliptic).
    pub finite_rank: usize,
    pub root_lattice: Lattice,
}

impl Ambient {
    pub fn finite(sys: &FiniteRootSystem) -> Arc<Ambient> {
        Arc::new(Ambient {
            label: sys.type_tag.to_string(),
            gram: sys.gram.clone(),
            finite_rank: sys.rank(),
            root_lattice: hnf_span(&sys.simple_roots),
        })
    }

    pub fn elliptic(sys: &EllipticRootSystem) -> Arc<Ambient> {
        Arc::new(Ambient {
            label: sys.tag.to_string(),
            gram: sys.gram.matrix().clone(),
            finite_rank: sys.rank(),
            root_lattice: hnf_span(&sys.basis_gamma),
        })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn reflect(&self, root: &LatticeVector, x: &LatticeVector) -> LatticeVector {
        reflect_with(&self.gram, root, x)
    }

    pub fn norm(&self, v: &LatticeVector) -> i64 {
        dot(&v.0, &self.gram.mul_vec(&v.0))
    }
}

/// Ordered reflections, each stored by its canonical root.
#[derive(Clone, Debug)]
pub struct ReflectionTuple {
    pub entries: Vec<LatticeVector>,
    pub ambient: Arc<Ambient>,
}

impl PartialEq for ReflectionTuple {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for ReflectionTuple {}

impl ReflectionTuple {
    pub fn new(ambient: Arc<Ambient>, roots: Vec<LatticeVector>) -> Result<ReflectionTuple> {
        for r in &roots {
            if r.dim() != ambient.dim() {
                return Err(Error::Dimension {
                    expected: ambient.dim(),
                    got: r.dim(),
                });
            }
            if ambient.norm(r) <= 0 {
                return Err(Error::NotARoot(ambient.norm(r)));
            }
        }
        Ok(ReflectionTuple {
            entries: roots.iter().map(|r| r.canonical()).collect(),
            ambient,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Concatenated coordinates, used as an orbit key.
    pub fn key(&self) -> Vec<i64> {
        self.entries
            .iter()
            .flat_map(|r| r.0.iter().copied())
            .collect()
    }
}

/// Left-to-right product of the entries; the empty tuple gives the identity.
pub fn product(t: &ReflectionTuple) -> LatticeAutomorphism {
    let mut m = IMat::identity(t.ambient.dim());
    for r in &t.entries {
        m = m.mul(&reflection_matrix(&t.ambient.gram, r));
    }
    LatticeAutomorphism::new(m)
}

/// Carter's formula `rank(w - 1)`, valid in finite Weyl groups.
pub fn reflection_length_finite(w: &LatticeAutomorphism, sys: &FiniteRootSystem) -> Result<usize> {
    if w.dim() != sys.rank() {
        return Err(Error::Dimension {
            expected: sys.rank(),
            got: w.dim(),
        });
    }
    if !w.preserves(&sys.gram) {
        return Err(Error::NotOrthogonal);
    }
    Ok(rank(&w.matrix.sub(&IMat::identity(sys.rank()))))
}

/// Whether the roots of the entries span the whole root lattice.
pub fn is_generating(t: &ReflectionTuple) -> bool {
    if t.is_empty() {
        return t.ambient.root_lattice.rank() == 0;
    }
    hnf_span(&t.entries) == t.ambient.root_lattice
}

/// W-orbits on reflections (roots modulo sign), sorted by smallest member.
pub fn reflection_conjugacy_classes(sys: &FiniteRootSystem) -> Vec<Vec<LatticeVector>> {
    let mut unassigned: BTreeSet<LatticeVector> = sys.positive_roots().into_iter().collect();
    let mut classes = Vec::new();
    while let Some(start) = unassigned.iter().next().cloned() {
        let mut class = BTreeSet::new();
        let mut work = vec![start.clone()];
        class.insert(start);
        while let Some(v) = work.pop() {
            for s in &sys.simple_roots {
                let w = sys.reflect(s, &v).canonical();
                if class.insert(w.clone()) {
                    work.push(w);
                }
            }
        }
        for v in &class {
            unassigned.remove(v);
        }
        classes.push(class.into_iter().collect());
    }
    classes
}

/// A finite Weyl group enumerated in full, with multiplication and
/// reflection-conjugation tables so tuples can be handled as small indices.
pub struct FiniteWeyl {
    pub sys: FiniteRootSystem,
    /// Canonical (positive) roots, sorted; reflection `i` is `s_{reflections[i]}`.
    pub reflections: Vec<LatticeVector>,
    pub elements: Vec<IMat>,
    index: HashMap<IMat, u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    refl_elem: Vec<u32>,
    conj: Vec<u16>,
    class_of: Vec<usize>,
    carter: Vec<u8>,
}

/// Index of a reflection in a `FiniteWeyl`.
pub type Refl = u16;

impl FiniteWeyl {
    pub fn new(sys: FiniteRootSystem) -> FiniteWeyl {
        let n = sys.rank();
        let reflections = sys.positive_roots();
        let refl_mats: Vec<IMat> = reflections
            .iter()
            .map(|r| reflection_matrix(&sys.gram, r))
            .collect();
        let simple_mats: Vec<IMat> = sys
            .simple_roots
            .iter()
            .map(|r| reflection_matrix(&sys.gram, r))
            .collect();
        let mut elements = vec![IMat::identity(n)];
        let mut index: HashMap<IMat, u32> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut head = 0;
        while head < elements.len() {
            let e = elements[head].clone();
            head += 1;
            for s in &simple_mats {
                let p = e.mul(s);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elements.len() as u32);
                    elements.push(p);
                }
            }
        }
        let size = elements.len();
        let mul: Vec<u32> = (0..size)
            .into_par_iter()
            .flat_map_iter(|i| {
                let a = &elements[i];
                let index = &index;
                let elements = &elements;
                (0..size).map(move |j| index[&a.mul(&elements[j])])
            })
            .collect();
        let inv: Vec<u32> = (0..size)
            .map(|i| {
                (0..size as u32)
                    .find(|&j| mul[i * size + j as usize] == 0)
                    .expect("group")
            })
            .collect();
        let refl_elem: Vec<u32> = refl_mats.iter().map(|m| index[m]).collect();
        let rpos: HashMap<&LatticeVector, usize> = reflections
            .iter()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        let nr = reflections.len();
        let mut conj = vec![0u16; nr * nr];
        for i in 0..nr {
            for j in 0..nr {
                let r = sys.reflect(&reflections[i], &reflections[j]).canonical();
                conj[i * nr + j] = rpos[&r] as u16;
            }
        }
        let classes = reflection_conjugacy_classes(&sys);
        let mut class_of = vec![0; nr];
        for (c, members) in classes.iter().enumerate() {
            for r in members {
                class_of[rpos[r]] = c;
            }
        }
        let carter: Vec<u8> = elements
            .iter()
            .map(|e| rank(&e.sub(&IMat::identity(n))) as u8)
            .collect();
        FiniteWeyl {
            sys,
            reflections,
            elements,
            index,
            mul,
            inv,
            refl_elem,
            conj,
            class_of,
            carter,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn num_reflections(&self) -> usize {
        self.reflections.len()
    }

    pub fn element_index(&self, m: &IMat) -> Option<u32> {
        self.index.get(m).copied()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.elements.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    #[inline]
    pub fn refl_elem(&self, r: Refl) -> u32 {
        self.refl_elem[r as usize]
    }

    /// Reflection `s_i s_j s_i`.
    #[inline]
    pub fn conj(&self, i: Refl, j: Refl) -> Refl {
        self.conj[i as usize * self.reflections.len() + j as usize]
    }

    pub fn class_of(&self, r: Refl) -> usize {
        self.class_of[r as usize]
    }

    pub fn num_classes(&self) -> usize {
        self.class_of.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Reflection length by Carter's formula.
    pub fn length(&self, e: u32) -> usize {
        self.carter[e as usize] as usize
    }

    pub fn reflection_index(&self, root: &LatticeVector) -> Option<Refl> {
        self.reflections
            .binary_search(&root.canonical())
            .ok()
            .map(|i| i as Refl)
    }

    pub fn product(&self, t: &[Refl]) -> u32 {
        t.iter()
            .fold(0u32, |acc, &r| self.mul(acc, self.refl_elem(r)))
    }

    /// Whether the reflections generate the whole group.
    pub fn generates(&self, t: &[Refl]) -> bool {
        let gens: Vec<u32> = {
            let mut g: Vec<u32> = t.iter().map(|&r| self.refl_elem(r)).collect();
            g.sort_unstable();
            g.dedup();
            g
        };
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut stack = vec![0u32];
        let mut count = 1;
        while let Some(e) = stack.pop() {
            for &g in &gens {
                let p = self.mul(e, g);
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    count += 1;
                    stack.push(p);
                }
            }
        }
        count == self.order()
    }

    pub fn to_tuple(&self, ambient: &Arc<Ambient>, t: &[Refl]) -> ReflectionTuple {
        ReflectionTuple {
            entries: t
                .iter()
                .map(|&r| self.reflections[r as usize].clone())
                .collect(),
            ambient: ambient.clone(),
        }
    }

    pub fn from_tuple(&self, t: &ReflectionTuple) -> Option<Vec<Refl>> {
        t.entries.iter().map(|r| self.reflection_index(r)).collect()
    }

    /// Every `k`-tuple of reflections with its product, in lexicographic order.
    fn all_tuples(&self, k: usize) -> Vec<(Vec<Refl>, u32)> {
        let nr = self.num_reflections() as Refl;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(
            g: &FiniteWeyl,
            k: usize,
            nr: Refl,
            prod: u32,
            cur: &mut Vec<Refl>,
            out: &mut Vec<(Vec<Refl>, u32)>,
        ) {
            if cur.len() == k {
                out.push((cur.clone(), prod));
                return;
            }
            for r in 0..nr {
                cur.push(r);
                rec(g, k, nr, g.mul(prod, g.refl_elem(r)), cur, out);
                cur.pop();
            }
        }
        rec(self, k, nr, 0, &mut cur, &mut out);
        out
    }

    /// All `m`-tuples of reflections with product `w`, optionally only those
    /// generating the group; meet-in-the-middle split at `m/2`, output sorted.
    pub fn enumerate_fac(
        &self,
        w: u32,
        m: usize,
        require_generating: bool,
        cap: usize,
    ) -> Result<Vec<Vec<Refl>>> {
        let lw = self.length(w);
        if m < lw || !(m - lw).is_multiple_of(2) {
            return Ok(Vec::new());
        }
        let h = m / 2;
        let left = self.all_tuples(h);
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); self.order()];
        for (i, (_, p)) in left.iter().enumerate() {
            buckets[*p as usize].push(i);
        }
        let right = self.all_tuples(m - h);
        let gen_cache: std::sync::Mutex<HashMap<u128, bool>> = Default::default();
        let mask = |t: &[Refl]| t.iter().fold(0u128, |acc, &r| acc | (1u128 << r));
        let results: Vec<Vec<Refl>> = right
            .par_iter()
            .flat_map_iter(|(rt, q)| {
                let target = self.mul(w, self.inv(*q));
                let mut found = Vec::new();
                for &li in &buckets[target as usize] {
                    let mut t = left[li].0.clone();
                    t.extend_from_slice(rt);
                    if require_generating {
                        let key = if self.num_reflections() <= 128 {
                            Some(mask(&t))
                        } else {
                            None
                        };
                        let cached = key.and_then(|k| gen_cache.lock().unwrap().get(&k).copied());
                        let ok = cached.unwrap_or_else(|| {
                            let v = self.generates(&t);
                            if let Some(k) = key {
                                gen_cache.lock().unwrap().insert(k, v);
                            }
                            v
                        });
                        if !ok {
                            continue;
                        }
                    }
                    found.push(t);
                }
                found
            })
            .collect();
        if results.len() > cap {
            return Err(Error::CapExceeded {
                cap,
                partial: results.len(),
            });
        }
        let mut results = results;
        results.sort_unstable();
        Ok(results)
    }

    /// Elements with the given reflection length.
    pub fn elements_of_length(&self, l: usize) -> Vec<u32> {
        (0..self.order() as u32)
            .filter(|&e| self.length(e) == l)
            .collect()
    }
}

/// Root-level wrapper around [`FiniteWeyl::enumerate_fac`].
pub fn enumerate_fac(
    group: &FiniteWeyl,
    w: &LatticeAutomorphism,
    m: usize,
    require_generating: bool,
    cap: usize,
) -> Result<Vec<ReflectionTuple>> {
    let ambient = Ambient::finite(&group.sys);
    let Some(wi) = group.element_index(&w.matrix) else {
        return Err(Error::NotOrthogonal);
    };
    Ok(group
        .enumerate_fac(wi, m, require_generating, cap)?
        .into_iter()
        .map(|t| group.to_tuple(&ambient, &t))
        .collect())
}

/// Distinct reflections from a list of roots, as a set of canonical roots.
pub fn distinct_reflections(roots: &[LatticeVector]) -> HashSet<LatticeVector> {
    roots.iter().map(|r| r.canonical()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_finite, FiniteType};

    #[test]
    fn group_orders() {
        assert_eq!(
            FiniteWeyl::new(build_finite(FiniteType::A(2)).unwrap()).order(),
            6
        );
        assert_eq!(
            FiniteWeyl::new(build_finite(FiniteType::A(3)).unwrap()).order(),
            24
        );
        assert_eq!(
            FiniteWeyl::new(build_finite(FiniteType::D(4)).unwrap()).order(),
            192
        );
        assert_eq!(
            FiniteWeyl::new(build_finite(FiniteType::F4).unwrap()).order(),
            1152
        );
    }

    #[test]
    fn reflection_recovered_from_matrix() {
        let sys = build_finite(FiniteType::D(4)).unwrap();
        for r in sys.positive_roots() {
            let m = LatticeAutomorphism::new(reflection_matrix(&sys.gram, &r));
            assert_eq!(m.as_reflection(&sys.gram), Some(r));
        }
        assert_eq!(
            LatticeAutomorphism::identity(4).as_reflection(&sys.gram),
            None
        );
    }

    #[test]
    fn single_and_doubled_reflection() {
        let sys = build_finite(FiniteType::A(2)).unwrap();
        let amb = Ambient::finite(&sys);
        let r = LatticeVector(vec![1, 0]);
        let one = ReflectionTuple::new(amb.clone(), vec![r.clone()]).unwrap();
        let p = product(&one);
        assert!(p.compose(&p).is_identity());
        let two = ReflectionTuple::new(amb.clone(), vec![r.clone(), r]).unwrap();
        assert!(product(&two).is_identity());
        let empty = ReflectionTuple::new(amb, vec![]).unwrap();
        assert!(product(&empty).is_identity());
    }

    #[test]
    fn conjugacy_class_counts() {
        assert_eq!(
            reflection_conjugacy_classes(&build_finite(FiniteType::A(3)).unwrap()).len(),
            1
        );
        assert_eq!(
            reflection_conjugacy_classes(&build_finite(FiniteType::D(4)).unwrap()).len(),
            1
        );
        assert_eq!(
            reflection_conjugacy_classes(&build_finite(FiniteType::F4).unwrap()).len(),
            2
        );
    }

    #[test]
    fn repeated_root_not_generating() {
        let sys = build_finite(FiniteType::A(3)).unwrap();
        let amb = Ambient::finite(&sys);
        let r = LatticeVector(vec![1, 0, 0]);
        let t = ReflectionTuple::new(amb, vec![r; 5]).unwrap();
        assert!(!is_generating(&t));
    }
}
