//! Hurwitz moves on reflection tuples, braid words, orbit enumeration and
//! orbit classification.
//!
//! Move convention: `sigma_i` sends `(t_i, t_{i+1})` to
//! `(t_{i+1}, t_{i+1} t_i t_{i+1})` and its inverse sends the pair to
//! `(t_i t_{i+1} t_i, t_i)`. On roots the conjugate `s_y s_x s_y` is the
//! reflection in `s_y(x)`. Braid words are read left to right: the first
//! letter acts first.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::linalg::IMat;
use crate::rootsys::{build_finite, FiniteType};
use crate::weyl::{reflection_matrix, Ambient, FiniteWeyl, Refl, ReflectionTuple};

/// Signed generator indices; `i` is `sigma_i`, `-i` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BraidWord {
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(letters: Vec<i32>) -> BraidWord {
        BraidWord { letters }
    }

    /// Checks every letter is a generator of the braid group on `strands`.
    pub fn validate(&self, strands: usize) -> Result<()> {
        for &l in &self.letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::IndexOutOfRange {
                    index: l as i64,
                    len: strands,
                });
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord::new(self.letters.iter().rev().map(|l| -l).collect())
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &BraidWord) -> BraidWord {
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        BraidWord::new(v)
    }

    pub fn power(&self, k: usize) -> BraidWord {
        BraidWord::new(self.letters.repeat(k))
    }

    /// `tau^-1 rho tau` in action order: `tau` acts first.
    pub fn conjugate(rho: &BraidWord, tau: &BraidWord) -> BraidWord {
        tau.then(rho).then(&tau.inverse())
    }
}

fn conj_root(ambient: &Ambient, y: &LatticeVector, x: &LatticeVector) -> LatticeVector {
    ambient.reflect(y, x).canonical()
}

/// One Hurwitz move at 1-based position `i`.
pub fn hurwitz_move(t: &ReflectionTuple, i: usize, inverse: bool) -> Result<ReflectionTuple> {
    if i == 0 || i >= t.len() {
        return Err(Error::IndexOutOfRange {
            index: i as i64,
            len: t.len(),
        });
    }
    let mut e = t.entries.clone();
    move_in_place(&t.ambient, &mut e, i, inverse);
    Ok(ReflectionTuple {
        entries: e,
        ambient: t.ambient.clone(),
    })
}

fn move_in_place(ambient: &Ambient, e: &mut [LatticeVector], i: usize, inverse: bool) {
    let (x, y) = (e[i - 1].clone(), e[i].clone());
    if inverse {
        e[i - 1] = conj_root(ambient, &x, &y);
        e[i] = x;
    } else {
        e[i] = conj_root(ambient, &y, &x);
        e[i - 1] = y;
    }
}

pub fn apply_braid_word(t: &ReflectionTuple, w: &BraidWord) -> Result<ReflectionTuple> {
    w.validate(t.len())?;
    let mut e = t.entries.clone();
    for &l in &w.letters {
        move_in_place(&t.ambient, &mut e, l.unsigned_abs() as usize, l < 0);
    }
    Ok(ReflectionTuple {
        entries: e,
        ambient: t.ambient.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub orbit_size: usize,
    /// Lexicographically smallest tuple seen.
    pub representative: Vec<LatticeVector>,
    pub invariant_multiset: Vec<usize>,
    pub truncated: bool,
    /// BFS depth reached.
    pub radius: usize,
}

/// BFS closure under all moves, level-synchronous so the frontier can be
/// expanded in parallel. Stops once more than `cap` tuples are known.
pub fn hurwitz_orbit(
    t: &ReflectionTuple,
    cap: usize,
    classify: &(dyn Fn(&LatticeVector) -> Option<usize> + Sync),
) -> Result<OrbitReport> {
    let invariant = multiset_with(t, classify)?;
    let ambient = t.ambient.clone();
    let m = t.len();
    let mut seen: HashSet<Vec<LatticeVector>> = HashSet::new();
    seen.insert(t.entries.clone());
    let mut frontier = vec![t.entries.clone()];
    let mut radius = 0;
    let mut truncated = false;
    while !frontier.is_empty() {
        let next: Vec<Vec<LatticeVector>> = frontier
            .par_iter()
            .flat_map_iter(|e| {
                let ambient = &ambient;
                (1..m).flat_map(move |i| {
                    [false, true].into_iter().map(move |inv| {
                        let mut f = e.clone();
                        move_in_place(ambient, &mut f, i, inv);
                        f
                    })
                })
            })
            .collect();
        let mut fresh = Vec::new();
        for f in next {
            if !seen.contains(&f) {
                seen.insert(f.clone());
                fresh.push(f);
            }
        }
        if fresh.is_empty() {
            break;
        }
        radius += 1;
        frontier = fresh;
        if seen.len() > cap {
            truncated = true;
            break;
        }
    }
    let representative = seen.iter().min().cloned().unwrap_or_default();
    Ok(OrbitReport {
        orbit_size: seen.len(),
        representative,
        invariant_multiset: invariant,
        truncated,
        radius,
    })
}

fn multiset_with(
    t: &ReflectionTuple,
    classify: &dyn Fn(&LatticeVector) -> Option<usize>,
) -> Result<Vec<usize>> {
    let mut ids = Vec::with_capacity(t.len());
    for r in &t.entries {
        ids.push(classify(r).ok_or_else(|| Error::Unclassified(format!("{r:?}")))?);
    }
    ids.sort_unstable();
    Ok(ids)
}

/// Sorted class ids of the entries.
pub fn multiset_invariant(
    t: &ReflectionTuple,
    classes: &[Vec<LatticeVector>],
) -> Result<Vec<usize>> {
    let lookup: HashMap<&LatticeVector, usize> = classes
        .iter()
        .enumerate()
        .flat_map(|(c, m)| m.iter().map(move |r| (r, c)))
        .collect();
    multiset_with(t, &|r| lookup.get(&r.canonical()).copied())
}

// Indexed fast path over a fully enumerated finite group.

/// One move on reflection indices, 1-based position.
#[inline]
pub fn move_indexed(g: &FiniteWeyl, t: &mut [Refl], i: usize, inverse: bool) {
    let (x, y) = (t[i - 1], t[i]);
    if inverse {
        t[i - 1] = g.conj(x, y);
        t[i] = x;
    } else {
        t[i - 1] = y;
        t[i] = g.conj(y, x);
    }
}

pub fn apply_indexed(g: &FiniteWeyl, t: &[Refl], w: &BraidWord) -> Result<Vec<Refl>> {
    w.validate(t.len())?;
    let mut t = t.to_vec();
    for &l in &w.letters {
        move_indexed(g, &mut t, l.unsigned_abs() as usize, l < 0);
    }
    Ok(t)
}

/// Packs a tuple of at most 16 reflection indices below 256.
#[inline]
pub fn pack(t: &[Refl]) -> u128 {
    debug_assert!(t.len() <= 16);
    t.iter()
        .enumerate()
        .fold(0u128, |acc, (i, &r)| acc | ((r as u128) << (8 * i)))
}

pub fn unpack(k: u128, m: usize) -> Vec<Refl> {
    (0..m).map(|i| ((k >> (8 * i)) & 0xff) as Refl).collect()
}

/// Orbit of an indexed tuple; returns the members (sorted) and a truncation flag.
pub fn orbit_indexed(g: &FiniteWeyl, t: &[Refl], cap: usize) -> (Vec<Vec<Refl>>, bool) {
    assert!(t.len() <= 16 && g.num_reflections() <= 256);
    let m = t.len();
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(pack(t));
    let mut frontier = vec![t.to_vec()];
    let mut truncated = false;
    while let Some(cur) = frontier.pop() {
        for i in 1..m {
            for inv in [false, true] {
                let mut f = cur.clone();
                move_indexed(g, &mut f, i, inv);
                if seen.insert(pack(&f)) {
                    frontier.push(f);
                }
            }
        }
        if seen.len() > cap {
            truncated = true;
            break;
        }
    }
    let mut out: Vec<Vec<Refl>> = seen.into_iter().map(|k| unpack(k, m)).collect();
    out.sort_unstable();
    (out, truncated)
}

pub fn multiset_indexed(g: &FiniteWeyl, t: &[Refl]) -> Vec<usize> {
    let mut v: Vec<usize> = t.iter().map(|&r| g.class_of(r)).collect();
    v.sort_unstable();
    v
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// Hurwitz orbits on a set of tuples closed under the moves, by union-find
/// along the positive moves (each move permutes the set, so its orbits are
/// the connected components).
pub fn orbits_of_closed_set(g: &FiniteWeyl, tuples: &[Vec<Refl>]) -> Vec<Vec<usize>> {
    let index: HashMap<u128, u32> = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (pack(t), i as u32))
        .collect();
    let mut parent: Vec<u32> = (0..tuples.len() as u32).collect();
    for (i, t) in tuples.iter().enumerate() {
        for p in 1..t.len() {
            let mut f = t.clone();
            move_indexed(g, &mut f, p, false);
            let j = *index
                .get(&pack(&f))
                .expect("set is closed under Hurwitz moves");
            let (ri, rj) = (find(&mut parent, i as u32), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj) as usize] = ri.min(rj);
            }
        }
    }
    let mut comps: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for i in 0..tuples.len() {
        let r = find(&mut parent, i as u32);
        comps.entry(r).or_default().push(i);
    }
    comps.into_values().collect()
}

/// Orbits of the generating factorizations of `w` into `m` reflections.
pub fn classify_orbits(
    g: &FiniteWeyl,
    ambient: &Arc<Ambient>,
    w: u32,
    m: usize,
    cap: usize,
) -> Result<Vec<OrbitReport>> {
    let fac = g.enumerate_fac(w, m, true, cap)?;
    let comps = orbits_of_closed_set(g, &fac);
    Ok(comps
        .into_iter()
        .map(|c| {
            let rep = &fac[c[0]];
            OrbitReport {
                orbit_size: c.len(),
                representative: g.to_tuple(ambient, rep).entries,
                invariant_multiset: multiset_indexed(g, rep),
                truncated: false,
                radius: 0,
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepEntry {
    pub element: Vec<Vec<i64>>,
    pub fac_size: usize,
    pub orbits: usize,
    pub multisets: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransitivitySweep {
    pub group: String,
    pub rank: usize,
    pub elements_of_full_length: usize,
    pub eligible: usize,
    pub entries: Vec<SweepEntry>,
    /// Orbits in bijection with multisets for every eligible element.
    pub holds: bool,
}

/// For every `w` of reflection length equal to the rank with non-empty
/// generating `Fac_{T,rank+2}(w)`, compares orbit count with multiset count.
pub fn transitivity_sweep(g: &FiniteWeyl, cap: usize) -> Result<TransitivitySweep> {
    let n = g.sys.rank();
    let candidates = g.elements_of_length(n);
    let entries: Vec<Option<SweepEntry>> = candidates
        .iter()
        .map(|&w| {
            let fac = g.enumerate_fac(w, n + 2, true, cap)?;
            if fac.is_empty() {
                return Ok(None);
            }
            let comps = orbits_of_closed_set(g, &fac);
            let multisets: HashSet<Vec<usize>> =
                fac.iter().map(|t| multiset_indexed(g, t)).collect();
            // an orbit has one multiset; equal counts then give the bijection
            let consistent = comps.iter().all(|c| {
                let m0 = multiset_indexed(g, &fac[c[0]]);
                c.iter().all(|&i| multiset_indexed(g, &fac[i]) == m0)
            });
            let orbits = if consistent { comps.len() } else { usize::MAX };
            Ok(Some(SweepEntry {
                element: g.elements[w as usize].to_rows(),
                fac_size: fac.len(),
                orbits,
                multisets: multisets.len(),
            }))
        })
        .collect::<Result<_>>()?;
    let entries: Vec<SweepEntry> = entries.into_iter().flatten().collect();
    let holds = entries.iter().all(|e| e.orbits == e.multisets);
    Ok(TransitivitySweep {
        group: g.sys.type_tag.to_string(),
        rank: n,
        elements_of_full_length: candidates.len(),
        eligible: entries.len(),
        entries,
        holds,
    })
}

/// Whether `t` has the shape `(x1, x1, x2, x2, .., r_1 .. r_l)` with
/// `l = length(product)` and the tail reduced.
pub fn has_duplicate_shape(g: &FiniteWeyl, t: &[Refl]) -> bool {
    let l = g.length(g.product(t));
    let pairs = t.len().saturating_sub(l);
    if !pairs.is_multiple_of(2) {
        return false;
    }
    (0..pairs / 2).all(|k| t[2 * k] == t[2 * k + 1])
        && g.length(g.product(&t[pairs..])) == t.len() - pairs
}

/// Searches the Hurwitz orbit of `t` for the duplicate-pairs-then-reduced shape.
pub fn lr_duplicate_form(g: &FiniteWeyl, t: &[Refl], cap: usize) -> Result<Vec<Refl>> {
    let m = t.len();
    let mut seen: HashSet<u128> = HashSet::new();
    let mut frontier = std::collections::VecDeque::new();
    seen.insert(pack(t));
    frontier.push_back(t.to_vec());
    while let Some(cur) = frontier.pop_front() {
        if has_duplicate_shape(g, &cur) {
            return Ok(cur);
        }
        for i in 1..m {
            for inv in [false, true] {
                let mut f = cur.clone();
                move_indexed(g, &mut f, i, inv);
                if seen.insert(pack(&f)) {
                    frontier.push_back(f);
                }
            }
        }
        if seen.len() > cap {
            return Err(Error::ShapeNotFound { cap });
        }
    }
    // the whole orbit was searched: a genuine counterexample, not a cap issue
    Err(Error::ShapeNotFound { cap: seen.len() })
}

/// Braid taking `(t_1..t_n, u, u)` to `(t_1..t_n, u', u')` where `u'` is `u`
/// conjugated successively by `t_{j}` for each `j` in `positions` (1-based,
/// at most `n`). The trailing pair walks left unchanged to sit just right of
/// `t_j`, passes it while being conjugated, and walks back unchanged.
pub fn pair_conjugation_braid(n: usize, positions: &[usize]) -> BraidWord {
    let mut letters = Vec::new();
    for &j in positions {
        assert!(j >= 1 && j <= n);
        // pair at n+1, n+2; walk left while it is not adjacent to t_j
        for p in (j + 1..=n).rev() {
            letters.extend([p as i32, p as i32 + 1]);
        }
        letters.extend([-(j as i32), -(j as i32 + 1)]);
        // t_j now sits right of the pair; walk the pair back to the end
        for p in j..=n {
            letters.extend([-(p as i32 + 1), -(p as i32)]);
        }
    }
    BraidWord::new(letters)
}

/// The F4 configuration of two generating 6-factorizations of a Coxeter
/// element of an `A2 + A2` subsystem that differ in their class multisets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct F4Example {
    pub first: Vec<LatticeVector>,
    pub second: Vec<LatticeVector>,
    pub both_multiply_to_w: bool,
    pub first_generates: bool,
    pub second_generates: bool,
    pub first_multiset: Vec<usize>,
    pub second_multiset: Vec<usize>,
    /// `s_alpha s_alpha1 s_highest s_alpha4 s_alpha (alpha_1)`.
    pub identity_image: LatticeVector,
    pub identity_holds: bool,
}

pub fn f4_example() -> Result<F4Example> {
    let sys = build_finite(FiniteType::F4)?;
    let g = FiniteWeyl::new(sys.clone());
    let v = |x: &[i64]| LatticeVector(x.to_vec());
    let (a1, a2, a3, a4) = (
        v(&[1, 0, 0, 0]),
        v(&[0, 1, 0, 0]),
        v(&[0, 0, 1, 0]),
        v(&[0, 0, 0, 1]),
    );
    let high = sys.highest_root.clone();
    // e_3 = alpha_2 + alpha_3
    let alpha = a2.add(&a3);
    let first_roots = vec![
        high.clone(),
        a1.clone(),
        a3.clone(),
        a4.clone(),
        a2.clone(),
        a2.clone(),
    ];
    let second_roots = vec![
        high.clone(),
        a1.clone(),
        a3.clone(),
        a4.clone(),
        alpha.clone(),
        alpha.clone(),
    ];
    let idx = |rs: &[LatticeVector]| -> Result<Vec<Refl>> {
        rs.iter()
            .map(|r| {
                g.reflection_index(r)
                    .ok_or_else(|| Error::NotARoot(sys.norm(r)))
            })
            .collect()
    };
    let first = idx(&first_roots)?;
    let second = idx(&second_roots)?;
    let w = g.product(&first[..4]);
    let m = |r: &LatticeVector| reflection_matrix(&sys.gram, r);
    let img: IMat = m(&alpha)
        .mul(&m(&a1))
        .mul(&m(&high))
        .mul(&m(&a4))
        .mul(&m(&alpha));
    let identity_image = LatticeVector(img.mul_vec(&a1.0));
    Ok(F4Example {
        both_multiply_to_w: g.product(&first) == w && g.product(&second) == w,
        first_generates: g.generates(&first),
        second_generates: g.generates(&second),
        first_multiset: multiset_indexed(&g, &first),
        second_multiset: multiset_indexed(&g, &second),
        identity_holds: identity_image == a2,
        identity_image,
        first: first_roots,
        second: second_roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_finite;
    use crate::weyl::product;

    fn a2() -> (FiniteWeyl, Arc<Ambient>) {
        let sys = build_finite(FiniteType::A(2)).unwrap();
        let amb = Ambient::finite(&sys);
        (FiniteWeyl::new(sys), amb)
    }

    #[test]
    fn a2_move_matches_transposition_conjugation() {
        // (12) = alpha_1, (23) = alpha_2, (13) = alpha_1 + alpha_2
        let (_, amb) = a2();
        let t = ReflectionTuple::new(amb, vec![vec![1, 0].into(), vec![0, 1].into()]).unwrap();
        let s = hurwitz_move(&t, 1, false).unwrap();
        assert_eq!(
            s.entries,
            vec![LatticeVector(vec![0, 1]), LatticeVector(vec![1, 1])]
        );
        assert_eq!(hurwitz_move(&s, 1, true).unwrap(), t);
        assert!(hurwitz_move(&t, 2, false).is_err());
        assert!(hurwitz_move(&t, 0, false).is_err());
    }

    #[test]
    fn fixed_point_orbit() {
        let (_, amb) = a2();
        let t = ReflectionTuple::new(amb, vec![vec![1, 0].into(), vec![1, 0].into()]).unwrap();
        let r = hurwitz_orbit(&t, 100, &|_| Some(0)).unwrap();
        assert_eq!(r.orbit_size, 1);
        assert!(!r.truncated);
    }

    #[test]
    fn a2_reduced_orbit_is_everything() {
        let (g, amb) = a2();
        let t =
            ReflectionTuple::new(amb.clone(), vec![vec![1, 0].into(), vec![0, 1].into()]).unwrap();
        let r = hurwitz_orbit(&t, 100, &|_| Some(0)).unwrap();
        let c = g.element_index(&product(&t).matrix).unwrap();
        assert_eq!(r.orbit_size, 3);
        assert_eq!(g.enumerate_fac(c, 2, false, 100).unwrap().len(), 3);
    }

    #[test]
    fn pair_conjugation_braid_conjugates_trailing_pair() {
        let sys = build_finite(FiniteType::A(3)).unwrap();
        let g = FiniteWeyl::new(sys);
        let u: Refl = 0;
        let t: Vec<Refl> = vec![1, 3, 5, u, u];
        for positions in [vec![1], vec![3], vec![2, 1], vec![3, 3, 1]] {
            let out = apply_indexed(&g, &t, &pair_conjugation_braid(3, &positions)).unwrap();
            let mut expect = u;
            for &j in &positions {
                expect = g.conj(t[j - 1], expect);
            }
            assert_eq!(&out[..3], &t[..3]);
            assert_eq!(out[3], expect);
            assert_eq!(out[4], expect);
        }
    }

    #[test]
    fn f4_example_values() {
        let ex = f4_example().unwrap();
        assert!(ex.both_multiply_to_w);
        assert!(ex.first_generates && ex.second_generates);
        assert_ne!(ex.first_multiset, ex.second_multiset);
        assert!(ex.identity_holds);
    }

    #[test]
    fn braid_word_validation() {
        assert!(BraidWord::new(vec![1, -2]).validate(3).is_ok());
        assert!(BraidWord::new(vec![3]).validate(3).is_err());
        assert!(BraidWord::new(vec![0]).validate(3).is_err());
        assert_eq!(BraidWord::new(vec![1, -2]).inverse().letters, vec![2, -1]);
    }
}
