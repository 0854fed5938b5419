//! Generation test for the principal congruence subgroup of level 2.
//!
//! `Gamma(2) = {+-I} x F` with `F` free on `A = [[1,2],[0,1]]` and
//! `B = [[1,0],[2,1]]`. A candidate generating set is written in `A, B`
//! (Sanov reduction), the image subgroup of `F` is decided by Stallings
//! folding, and witness words for `A`, `B` and `-I` are produced by Nielsen
//! reduction so that the answer can be re-checked by plain multiplication.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::elliptic::{gamma_membership, Mat2Z};
use crate::error::{Error, Result};

/// Letters of `F`: `1 = A`, `2 = B`, negatives are inverses.
pub type FreeWord = Vec<i8>;

pub const GEN_A: Mat2Z = Mat2Z([[1, 2], [0, 1]]);
pub const GEN_B: Mat2Z = Mat2Z([[1, 0], [2, 1]]);
pub const MINUS_I: Mat2Z = Mat2Z([[-1, 0], [0, -1]]);

/// Word length cap for every rewriting step.
pub const DEPTH_CAP: usize = 10_000;

fn letter_matrix(l: i8) -> Mat2Z {
    match l {
        1 => GEN_A,
        -1 => GEN_A.inverse(),
        2 => GEN_B,
        -2 => GEN_B.inverse(),
        _ => unreachable!("free letter"),
    }
}

pub fn eval_free(w: &[i8]) -> Mat2Z {
    w.iter()
        .fold(Mat2Z::IDENTITY, |acc, &l| acc.mul(&letter_matrix(l)))
}

fn reduce(w: &mut FreeWord) {
    let mut out: FreeWord = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *w = out;
}

fn invert(w: &[i8]) -> FreeWord {
    w.iter().rev().map(|l| -l).collect()
}

/// `m = sign * word(A, B)` for `m` in `Gamma(2)`.
pub fn sanov_decompose(m: &Mat2Z) -> Result<(i64, FreeWord)> {
    if !gamma_membership(m, 2) {
        return Err(Error::NotInCongruence { ell: 2 });
    }
    // cur = m * suffix^-1 ; reduce the first row (p, q) until q = 0
    let mut cur = *m;
    let mut suffix: FreeWord = Vec::new();
    loop {
        let [[p, q], _] = cur.0;
        if q == 0 {
            break;
        }
        if p.abs() > q.abs() {
            // (p, q) B^k = (p + 2kq, q)
            let k = best_shift(p, q);
            cur = cur.mul(&GEN_B.pow(k));
            let l: i8 = if k > 0 { -2 } else { 2 };
            for _ in 0..k.abs() {
                suffix.insert(0, l);
            }
        } else {
            // (p, q) A^k = (p, q + 2kp)
            let k = best_shift(q, p);
            cur = cur.mul(&GEN_A.pow(k));
            let l: i8 = if k > 0 { -1 } else { 1 };
            for _ in 0..k.abs() {
                suffix.insert(0, l);
            }
        }
        if suffix.len() > DEPTH_CAP {
            return Err(Error::CapExceeded {
                cap: DEPTH_CAP,
                partial: suffix.len(),
            });
        }
    }
    // cur = sign * [[1, 0], [2j, 1]] = sign * B^j
    let sign = cur.0[0][0];
    let j = cur.0[1][0] * sign / 2;
    let mut word: FreeWord = vec![if j > 0 { 2 } else { -2 }; j.unsigned_abs() as usize];
    word.extend(suffix);
    reduce(&mut word);
    debug_assert_eq!(
        if sign == 1 {
            eval_free(&word)
        } else {
            eval_free(&word).neg()
        },
        *m
    );
    Ok((sign, word))
}

/// Integer `k` minimising `|x + 2 k y|`.
fn best_shift(x: i64, y: i64) -> i64 {
    let k0 = -(x / (2 * y));
    (k0 - 1..=k0 + 1)
        .min_by_key(|k| (x + 2 * k * y).abs())
        .expect("non-empty")
}

/// Stallings graph: vertices with labelled edges, folded.
struct Folding {
    // adjacency: (vertex, letter) -> vertex; letters +-1, +-2
    edges: BTreeMap<(usize, i8), usize>,
    parent: Vec<usize>,
}

impl Folding {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn fold(words: &[FreeWord]) -> Folding {
        let mut f = Folding {
            edges: BTreeMap::new(),
            parent: vec![0],
        };
        let mut raw: Vec<(usize, i8, usize)> = Vec::new();
        for w in words {
            if w.is_empty() {
                continue;
            }
            let mut v = 0;
            for (i, &l) in w.iter().enumerate() {
                let u = if i + 1 == w.len() {
                    0
                } else {
                    f.parent.push(f.parent.len());
                    f.parent.len() - 1
                };
                raw.push((v, l, u));
                v = u;
            }
        }
        let mut pending: Vec<(usize, i8, usize)> = raw
            .iter()
            .flat_map(|&(v, l, u)| [(v, l, u), (u, -l, v)])
            .collect();
        while let Some((v, l, u)) = pending.pop() {
            let (v, u) = (f.find(v), f.find(u));
            match f.edges.get(&(v, l)).copied() {
                None => {
                    f.edges.insert((v, l), u);
                }
                Some(x) => {
                    let x = f.find(x);
                    if x != u {
                        // merge u into x and re-insert edges touching u
                        let (keep, gone) = (x.min(u), x.max(u));
                        f.parent[gone] = keep;
                        let moved: Vec<((usize, i8), usize)> =
                            f.edges.iter().map(|(&k, &t)| (k, t)).collect();
                        f.edges.clear();
                        for ((a, l2), b) in moved {
                            pending.push((a, l2, b));
                        }
                    }
                }
            }
        }
        f
    }

    /// Whether the folded core is the rose on `A, B` at the base vertex.
    fn folds_to_rose(mut self) -> bool {
        let norm: BTreeSet<(usize, i8, usize)> = self
            .edges
            .clone()
            .into_iter()
            .map(|((v, l), u)| (self.find(v), l, self.find(u)))
            .collect();
        // prune hanging trees away from the base
        let mut edges = norm;
        loop {
            let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
            for &(v, _, _) in &edges {
                *degree.entry(v).or_default() += 1;
            }
            let leaves: BTreeSet<usize> = degree
                .iter()
                .filter(|&(&v, &d)| d == 1 && v != 0)
                .map(|(&v, _)| v)
                .collect();
            if leaves.is_empty() {
                break;
            }
            edges.retain(|&(v, _, u)| !leaves.contains(&v) && !leaves.contains(&u));
        }
        let root = 0;
        let vertices: BTreeSet<usize> = edges.iter().flat_map(|&(v, _, u)| [v, u]).collect();
        vertices.len() == 1
            && vertices.contains(&root)
            && [1i8, -1, 2, -2]
                .iter()
                .all(|&l| edges.contains(&(root, l, root)))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Gamma2Certificate {
    /// `Some(true)` generates, `Some(false)` proper subgroup, `None` undecided.
    pub generates: Option<bool>,
    /// Words in the inputs (1-based, negative = inverse) for `A`, `B`, `-I`.
    pub witness_a: Option<Vec<i32>>,
    pub witness_b: Option<Vec<i32>>,
    pub witness_minus_identity: Option<Vec<i32>>,
    /// The image in `F` is all of `F`.
    pub projective_image_full: bool,
    pub contains_minus_identity: bool,
    pub note: String,
}

/// A word in the input generators together with its free image.
#[derive(Clone, Debug)]
struct Tracked {
    free: FreeWord,
    word: Vec<i32>,
}

fn tracked_mul(x: &Tracked, y: &Tracked) -> Tracked {
    let mut free = x.free.clone();
    free.extend_from_slice(&y.free);
    reduce(&mut free);
    let mut word = x.word.clone();
    word.extend_from_slice(&y.word);
    Tracked { free, word }
}

fn tracked_inv(x: &Tracked) -> Tracked {
    Tracked {
        free: invert(&x.free),
        word: x.word.iter().rev().map(|l| -l).collect(),
    }
}

/// Length-reducing Nielsen moves until none applies. Returns the reduced set.
fn nielsen_reduce(mut set: Vec<Tracked>) -> Result<Vec<Tracked>> {
    loop {
        set.retain(|t| !t.free.is_empty());
        let mut improved = false;
        'outer: for i in 0..set.len() {
            for j in 0..set.len() {
                if i == j {
                    continue;
                }
                for inv in [false, true] {
                    let y = if inv {
                        tracked_inv(&set[j])
                    } else {
                        set[j].clone()
                    };
                    for left in [false, true] {
                        let cand = if left {
                            tracked_mul(&y, &set[i])
                        } else {
                            tracked_mul(&set[i], &y)
                        };
                        if cand.free.len() < set[i].free.len() {
                            if cand.word.len() > DEPTH_CAP {
                                return Err(Error::CapExceeded {
                                    cap: DEPTH_CAP,
                                    partial: cand.word.len(),
                                });
                            }
                            set[i] = cand;
                            improved = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        if !improved {
            return Ok(set);
        }
    }
}

fn eval_word(gens: &[Mat2Z], w: &[i32]) -> Mat2Z {
    w.iter().fold(Mat2Z::IDENTITY, |acc, &l| {
        let g = gens[l.unsigned_abs() as usize - 1];
        acc.mul(&if l > 0 { g } else { g.inverse() })
    })
}

fn exponent_sums(w: &[i8]) -> (i64, i64) {
    w.iter().fold((0, 0), |(a, b), &l| match l {
        1 => (a + 1, b),
        -1 => (a - 1, b),
        2 => (a, b + 1),
        _ => (a, b - 1),
    })
}

pub fn gamma2_generation_certificate(gens: &[Mat2Z]) -> Result<Gamma2Certificate> {
    let decomposed: Vec<(i64, FreeWord)> =
        gens.iter().map(sanov_decompose).collect::<Result<_>>()?;
    let words: Vec<FreeWord> = decomposed.iter().map(|(_, w)| w.clone()).collect();
    let full = Folding::fold(&words).folds_to_rose();
    // -I is in H iff no character chi: F -> {+-1} matches every sign
    let contains_minus = !(0..4).any(|mask| {
        let (p, q) = (mask & 1, (mask >> 1) & 1);
        decomposed.iter().all(|(s, w)| {
            let (ea, eb) = exponent_sums(w);
            let chi = (p * ea.rem_euclid(2) + q * eb.rem_euclid(2)) % 2;
            chi == i64::from(*s == -1)
        })
    });
    let mut cert = Gamma2Certificate {
        generates: None,
        witness_a: None,
        witness_b: None,
        witness_minus_identity: None,
        projective_image_full: full,
        contains_minus_identity: contains_minus,
        note: String::new(),
    };
    if !full {
        cert.generates = Some(false);
        cert.note = "image in the free quotient is a proper subgroup".into();
        return Ok(cert);
    }
    if !contains_minus {
        cert.generates = Some(false);
        cert.note = "subgroup is the graph of a sign character; -I is missing".into();
        return Ok(cert);
    }
    let start: Vec<Tracked> = words
        .iter()
        .enumerate()
        .map(|(i, w)| Tracked {
            free: w.clone(),
            word: vec![i as i32 + 1],
        })
        .collect();
    let reduced = nielsen_reduce(start)?;
    let find_letter = |l: i8| -> Option<Vec<i32>> {
        reduced.iter().find_map(|t| {
            if t.free == [l] {
                Some(t.word.clone())
            } else if t.free == [-l] {
                Some(tracked_inv(t).word)
            } else {
                None
            }
        })
    };
    let (Some(mut wa), Some(mut wb)) = (find_letter(1), find_letter(2)) else {
        cert.note = "Nielsen reduction stalled before reaching the free basis".into();
        return Ok(cert);
    };
    // -I witness: some generator differs in sign from its substituted free word
    let substitute = |w: &[i8], wa: &[i32], wb: &[i32]| -> Vec<i32> {
        let mut out = Vec::new();
        for &l in w {
            let piece: Vec<i32> = match l {
                1 => wa.to_vec(),
                -1 => wa.iter().rev().map(|x| -x).collect(),
                2 => wb.to_vec(),
                _ => wb.iter().rev().map(|x| -x).collect(),
            };
            out.extend(piece);
        }
        out
    };
    let mut minus: Option<Vec<i32>> = None;
    for (i, (_, w)) in decomposed.iter().enumerate() {
        let mut cand = vec![-(i as i32 + 1)];
        cand.extend(substitute(w, &wa, &wb));
        if eval_word(gens, &cand) == MINUS_I {
            minus = Some(cand);
            break;
        }
    }
    // words for A and B may carry a sign; fix with a -I witness
    if let Some(m) = &minus {
        if eval_word(gens, &wa) == GEN_A.neg() {
            wa.extend_from_slice(m);
        }
        if eval_word(gens, &wb) == GEN_B.neg() {
            wb.extend_from_slice(m);
        }
    }
    let ok = eval_word(gens, &wa) == GEN_A
        && eval_word(gens, &wb) == GEN_B
        && minus
            .as_ref()
            .is_some_and(|m| eval_word(gens, m) == MINUS_I);
    if ok {
        cert.generates = Some(true);
        cert.note = "witness words re-multiplied to A, B and -I".into();
    } else {
        cert.note = "witness words failed to re-multiply".into();
    }
    cert.witness_a = Some(wa);
    cert.witness_b = Some(wb);
    cert.witness_minus_identity = minus;
    Ok(cert)
}

/// Re-checks a certificate's witness words against the inputs.
pub fn verify_certificate(gens: &[Mat2Z], cert: &Gamma2Certificate) -> bool {
    match (
        &cert.witness_a,
        &cert.witness_b,
        &cert.witness_minus_identity,
    ) {
        (Some(a), Some(b), Some(m)) => {
            eval_word(gens, a) == GEN_A
                && eval_word(gens, b) == GEN_B
                && eval_word(gens, m) == MINUS_I
        }
        _ => false,
    }
}
