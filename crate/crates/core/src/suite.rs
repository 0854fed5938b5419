//! The acceptance criteria as runnable checks, shared by the `acceptance`
//! test binary and the CLI `verify` command.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{gram_from_diagram, Diagram};
use crate::elliptic::{
    act_on_tuple, fiber_transporter, gamma_lift, gamma_membership, invariant_splitting,
    lift_offsets, non_generating_example, project_tuple, translation_part, Mat2Z,
};
use crate::error::Result;
use crate::gamma2::{verify_certificate, GEN_A, GEN_B, MINUS_I};
use crate::hurwitz::{apply_braid_word, f4_example, hurwitz_move, transitivity_sweep, BraidWord};
use crate::lattice::{hnf_span, LatticeVector};
use crate::linalg::IMat;
use crate::poset::{interval_elliptic_gen, interval_finite, stabilization};
use crate::rootsys::{
    build_elliptic, build_finite, coxeter_transformation, mark_obstruction, roots_window,
    EllipticType, FiniteType,
};
use crate::tables::{verify_tables, Reproduction, TableData};
use crate::weyl::{
    is_generating, product, reflection_matrix, Ambient, FiniteWeyl, LatticeAutomorphism,
    ReflectionTuple,
};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const CRITERIA: usize = 12;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    /// One-line summary of what was measured.
    pub detail: String,
    /// Extra per-item lines (table rows, per-type values).
    pub report: Vec<String>,
    pub elapsed_ms: u128,
    pub budget_ms: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} ({} ms / {} ms) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_ms,
            self.budget_ms,
            self.detail
        )
    }
}

struct Outcome {
    passed: bool,
    detail: String,
    report: Vec<String>,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome {
        passed,
        detail,
        report: Vec::new(),
    }
}

const TITLES: [&str; CRITERIA] = [
    "root system construction",
    "elliptic signatures",
    "Coxeter transformation order",
    "reflection length of c",
    "Hurwitz transitivity sweep",
    "F4 non-transitive example",
    "invariant splitting table",
    "translation parts",
    "non-generating E6 factorization",
    "braid matrices and level-2 generation",
    "equivariance and transporter properties",
    "interval posets",
];

const BUDGET_MS: [u128; CRITERIA] = [
    1_000, 1_000, 1_000, 300_000, 1_800_000, 1_000, 1_000, 10_000, 1_000, 60_000, 60_000, 600_000,
];

pub fn title(id: usize) -> &'static str {
    TITLES[id - 1]
}

/// Runs one criterion (1-based). Exceeding the time budget is a failure.
pub fn run_criterion(id: usize, cfg: &SuiteConfig) -> CriterionResult {
    assert!((1..=CRITERIA).contains(&id), "criterion {id} out of range");
    let start = Instant::now();
    let res: Result<Outcome> = match id {
        1 => root_counts(),
        2 => signatures(),
        3 => coxeter_orders(),
        4 => length_of_c(),
        5 => orbit_sweep(),
        6 => f4_case(),
        7 => splitting_table(),
        8 => translations(cfg.seed),
        9 => non_generating(),
        10 => braid_matrices(),
        11 => equivariance(cfg.seed),
        _ => posets(),
    };
    let elapsed = start.elapsed();
    let budget = BUDGET_MS[id - 1];
    let mut o = res.unwrap_or_else(|e| outcome(false, format!("error: {e}")));
    if elapsed > Duration::from_millis(budget as u64) {
        o.passed = false;
        o.detail.push_str(" [over time budget]");
    }
    CriterionResult {
        id,
        title: TITLES[id - 1],
        passed: o.passed,
        detail: o.detail,
        report: o.report,
        elapsed_ms: elapsed.as_millis(),
        budget_ms: budget,
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|i| run_criterion(i, cfg)).collect()
}

fn root_counts() -> Result<Outcome> {
    let cases = [
        (FiniteType::A(2), 6),
        (FiniteType::A(3), 12),
        (FiniteType::D(4), 24),
        (FiniteType::E(6), 72),
        (FiniteType::E(7), 126),
        (FiniteType::E(8), 240),
    ];
    let mut ok = true;
    let mut got = Vec::new();
    for (t, want) in cases {
        let n = build_finite(t)?.all_roots.len();
        ok &= n == want;
        got.push(format!("{t}:{n}"));
    }
    Ok(outcome(ok, got.join(" ")))
}

fn signatures() -> Result<Outcome> {
    let mut ok = true;
    let mut got = Vec::new();
    for tag in EllipticType::ALL {
        let n = tag.finite().rank();
        let s = gram_from_diagram(&Diagram::named(tag.diagram_name())?)?.signature();
        let lattice = build_elliptic(tag)?.gram.signature();
        ok &= (s.positive, s.zero, s.negative) == (n, 2, 0) && s == lattice;
        got.push(format!("{tag}:({},{},{})", s.positive, s.zero, s.negative));
    }
    Ok(outcome(ok, got.join(" ")))
}

fn coxeter_orders() -> Result<Outcome> {
    let mut ok = true;
    let mut got = Vec::new();
    for (tag, want) in EllipticType::ALL.into_iter().zip([2u32, 3, 4, 6]) {
        let sys = build_elliptic(tag)?;
        let ord = coxeter_transformation(&sys).matrix.order(64);
        ok &= ord == Some(want) && sys.ell == want;
        got.push(format!(
            "{tag}:{}",
            ord.map_or("none".into(), |o| o.to_string())
        ));
    }
    Ok(outcome(ok, got.join(" ")))
}

/// Meet-in-the-middle over the window reflections: no factorization of
/// length 0, 2 or 4; odd lengths are excluded by `det c = 1`.
fn length_of_c() -> Result<Outcome> {
    let sys = build_elliptic(EllipticType::D4)?;
    let g = sys.gram.matrix();
    let c = coxeter_transformation(&sys).matrix;
    let roots: HashSet<_> = roots_window(&sys, 2)
        .into_iter()
        .map(|r| r.canonical())
        .collect();
    let refl: Vec<IMat> = roots.iter().map(|r| reflection_matrix(g, r)).collect();
    let refl_set: HashSet<&IMat> = refl.iter().collect();
    let none0 = !c.is_identity();
    let none2 = !refl.iter().any(|s| refl_set.contains(&c.mul(s)));
    let pairs: HashSet<IMat> = refl
        .iter()
        .flat_map(|x| refl.iter().map(move |y| x.mul(y)))
        .collect();
    // r1 r2 r3 r4 = c  iff  r1 r2 = c r4 r3
    let none4 = !refl.iter().any(|r4| {
        let cr4 = c.mul(r4);
        refl.iter().any(|r3| pairs.contains(&cr4.mul(r3)))
    });
    let canon = ReflectionTuple::new(Ambient::elliptic(&sys), sys.canonical_roots())?;
    let six = product(&canon).matrix == c && canon.entries.iter().all(|r| roots.contains(r));
    let even = crate::linalg::det(&c) == 1.into();
    let marks: Vec<bool> = EllipticType::ALL
        .iter()
        .map(|&t| build_elliptic(t).map(|s| mark_obstruction(&s)))
        .collect::<Result<_>>()?;
    let ok = none0 && none2 && none4 && six && even && marks.iter().all(|&m| m);
    Ok(outcome(
        ok,
        format!(
            "window K=2: {} reflections, no length 0/2/4: {}/{}/{}, canonical length 6: {six}, det 1: {even}; mark obstruction {marks:?}",
            refl.len(),
            none0,
            none2,
            none4
        ),
    ))
}

fn orbit_sweep() -> Result<Outcome> {
    let mut ok = true;
    let mut report = Vec::new();
    for t in [FiniteType::A(2), FiniteType::A(3), FiniteType::D(4)] {
        let g = FiniteWeyl::new(build_finite(t)?);
        let s = transitivity_sweep(&g, usize::MAX)?;
        let one_orbit = s.entries.iter().all(|e| e.orbits == 1 && e.multisets == 1);
        let tuples: usize = s.entries.iter().map(|e| e.fac_size).sum();
        ok &= s.holds && one_orbit && s.eligible > 0;
        report.push(format!(
            "{t}: {} elements of full length, {} eligible, {tuples} tuples, single orbit each: {one_orbit}",
            s.elements_of_full_length, s.eligible
        ));
    }
    Ok(Outcome {
        passed: ok,
        detail: "orbits match class multisets".into(),
        report,
    })
}

fn f4_case() -> Result<Outcome> {
    let e = f4_example()?;
    let ok = e.both_multiply_to_w
        && e.first_generates
        && e.second_generates
        && e.first_multiset != e.second_multiset
        && e.identity_holds;
    Ok(outcome(
        ok,
        format!(
            "products agree: {}, generate: {}/{}, multisets {:?} vs {:?}, identity image {:?}",
            e.both_multiply_to_w,
            e.first_generates,
            e.second_generates,
            e.first_multiset,
            e.second_multiset,
            e.identity_image
        ),
    ))
}

fn ratios(den: i64, nums: &[i64]) -> Vec<BigRational> {
    nums.iter()
        .map(|&x| BigRational::new(x.into(), den.into()))
        .collect()
}

/// A printed vector as a common denominator and numerators.
type Printed = (i64, &'static [i64]);

fn splitting_table() -> Result<Outcome> {
    let table: [(EllipticType, Printed, Printed); 4] = [
        (EllipticType::D4, (2, &[0, -1, 1, 0]), (2, &[1, 1, 0, 0])),
        (
            EllipticType::E6,
            (6, &[1, 3, -3, 1, -1, 1]),
            (3, &[0, 0, 1, 1, 1, 1]),
        ),
        (
            EllipticType::E7,
            (8, &[1, 3, -5, 1, -1, -3, 1]),
            (4, &[0, 0, 1, 1, 1, 1, 2]),
        ),
        (
            EllipticType::E8,
            (12, &[1, 5, -7, 3, 1, -1, -3, 5]),
            (6, &[0, 0, 1, 1, 1, 1, 1, 5]),
        ),
    ];
    let mut ok = true;
    let mut report = Vec::new();
    for (tag, (da, na), (db, nb)) in table {
        let sp = invariant_splitting(&build_elliptic(tag)?)?;
        let (ma, mb) = (
            sp.c_a_bourbaki == ratios(da, na),
            sp.c_b_bourbaki == ratios(db, nb),
        );
        ok &= ma && mb && sp.block_diagonal;
        report.push(format!(
            "{tag}: c_a {ma}, c_b {mb}, block diagonal {}",
            sp.block_diagonal
        ));
    }
    Ok(Outcome {
        passed: ok,
        detail: "8 vectors compared exactly".into(),
        report,
    })
}

fn translations(seed: u64) -> Result<Outcome> {
    let mut checked = 0;
    let mut bad = 0;
    let systems: Vec<_> = EllipticType::ALL
        .iter()
        .map(|&t| build_elliptic(t))
        .collect::<Result<_>>()?;
    for sys in &systems {
        let n = sys.rank();
        let g = sys.gram.matrix();
        for alpha in &sys.finite_part.all_roots {
            let a0 = alpha.extend(0, 0);
            let w = reflection_matrix(g, &a0).mul(&reflection_matrix(g, &a0.add(&sys.a)));
            let tp = translation_part(&LatticeAutomorphism::new(w), n)?;
            checked += 1;
            if tp.mu_a != sys.finite_part.gram.mul_vec(alpha.coords())
                || tp.mu_b.iter().any(|&x| x != 0)
            {
                bad += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut additive = 0;
    for _ in 0..100 {
        let sys = &systems[rng.gen_range(0..systems.len())];
        let n = sys.rank();
        let g = sys.gram.matrix();
        let random_translation = |rng: &mut ChaCha8Rng| {
            let roots = &sys.finite_part.all_roots;
            let alpha = roots[rng.gen_range(0..roots.len())].extend(0, 0);
            let shifted = sys.lift(
                &alpha.truncate(n),
                rng.gen_range(-3..=3),
                rng.gen_range(-3..=3),
            );
            LatticeAutomorphism::new(
                reflection_matrix(g, &alpha).mul(&reflection_matrix(g, &shifted)),
            )
        };
        let (u, v) = (random_translation(&mut rng), random_translation(&mut rng));
        let sum = translation_part(&u, n)?.add(&translation_part(&v, n)?);
        if translation_part(&u.compose(&v), n)? == sum {
            additive += 1;
        }
    }
    Ok(outcome(
        bad == 0 && additive == 100,
        format!(
            "{checked} double reflections, {bad} wrong; additivity {additive}/100 (seed {seed})"
        ),
    ))
}

fn non_generating() -> Result<Outcome> {
    let sys = build_elliptic(EllipticType::E6)?;
    let n = sys.rank();
    let c = coxeter_transformation(&sys);
    let (betas, order) = non_generating_example(&sys)?;
    let ordered: Vec<_> = order.iter().map(|&i| betas[i].clone()).collect();
    let t = ReflectionTuple::new(Ambient::elliptic(&sys), ordered.clone())?;
    let p = product(&t);
    let is_c = p == c;
    let finite_ok = p.matrix.leading_block(n) == c.matrix.leading_block(n);
    let span = hnf_span(&betas);
    let gen = is_generating(&t);
    // lifts of the same finite roots, same order, that do multiply to c
    let fin_roots: Vec<&[i64]> = ordered.iter().map(|b| &b.coords()[..n]).collect();
    let xs = lift_offsets(&sys.finite_part, &fin_roots, &c.matrix, n, 3);
    let ys = lift_offsets(&sys.finite_part, &fin_roots, &c.matrix, n + 1, 3);
    let printed: Vec<(i64, i64)> = ordered
        .iter()
        .map(|b| (b.coords()[n], b.coords()[n + 1]))
        .collect();
    let mut lifts = 0;
    let mut non_gen = 0;
    // (differing roots, offsets, generating)
    type Candidate = (usize, Vec<(i64, i64)>, bool);
    let mut nearest: Option<Candidate> = None;
    for x in &xs {
        for y in &ys {
            let roots: Vec<_> = fin_roots
                .iter()
                .zip(x.iter().zip(y))
                .map(|(r, (&a, &b))| LatticeVector(r.to_vec()).extend(a, b))
                .collect();
            let g = hnf_span(&roots).is_full();
            lifts += 1;
            non_gen += usize::from(!g);
            let offs: Vec<(i64, i64)> = x.iter().copied().zip(y.iter().copied()).collect();
            let dist = offs.iter().zip(&printed).filter(|(a, b)| a != b).count();
            if nearest.as_ref().is_none_or(|(d, _, _)| dist < *d) {
                nearest = Some((dist, offs, g));
            }
        }
    }
    let mut report = vec![format!(
        "offsets (a, b) as printed, in product order: {printed:?}; finite parts multiply to the finite quotient of c: {finite_ok}"
    )];
    report.push(format!("lifts of the same finite roots with product c and offsets in [-3, 3]: {lifts}, non-generating: {non_gen}"));
    if let Some((d, offs, g)) = nearest {
        report.push(format!(
            "nearest such lift differs in {d} of 8 roots: {offs:?}, generating: {g}"
        ));
    }
    Ok(Outcome {
        passed: is_c && !gen && !span.is_full(),
        detail: format!(
            "product is c: {is_c}, generating: {gen}, span rank {} index {}",
            span.rank(),
            span.index().map_or("infinite".into(), |i| i.to_string())
        ),
        report,
    })
}

fn braid_matrices() -> Result<Outcome> {
    let data = TableData::load()?;
    let mut report = Vec::new();
    let d4 = verify_tables(EllipticType::D4, &data)?;
    let mut d4_ok = d4.rows.len() == 3;
    for r in d4.rows.iter().chain(&d4.supplementary) {
        let primary = r.primary().cloned().unwrap_or(Reproduction::Unparsable);
        if !r.id.ends_with("witness") {
            d4_ok &= primary == Reproduction::Match;
        }
        report.push(format!(
            "{}: printed {:?}, {}",
            r.id,
            r.printed_matrix.0,
            describe(&primary)
        ));
    }
    let gens: Vec<Mat2Z> = d4.rows.iter().map(|r| r.printed_matrix).collect();
    let cert_ok = d4
        .certificate
        .as_ref()
        .is_some_and(|c| c.generates == Some(true) && verify_certificate(&gens, c));
    if let Some(c) = &d4.certificate {
        report.push(format!(
            "level-2 certificate on printed matrices: generates {:?}, A = {:?}, B = {:?}, -I = {:?}",
            c.generates, c.witness_a, c.witness_b, c.witness_minus_identity
        ));
    }
    let mut members = 0;
    let mut total = 0;
    for tag in [EllipticType::E6, EllipticType::E7, EllipticType::E8] {
        let rep = verify_tables(tag, &data)?;
        for r in &rep.rows {
            total += 1;
            members += usize::from(r.membership);
            let hit = r.attempts.iter().find(|a| a.outcome == Reproduction::Match);
            let repro = match hit {
                Some(a) => format!("reproduced ({:?} base, {:?} reading)", a.base, a.reading),
                None => format!(
                    "not reproduced ({})",
                    describe(r.primary().unwrap_or(&Reproduction::Unparsable))
                ),
            };
            report.push(format!(
                "{}: member of Gamma({}): {}, {repro}",
                r.id, rep.ell, r.membership
            ));
        }
    }
    let ok = d4_ok && cert_ok && members == total;
    Ok(Outcome {
        passed: ok,
        detail: format!("D4 rows reproduced: {d4_ok}, certificate: {cert_ok}, E-type membership {members}/{total}"),
        report,
    })
}

fn describe(r: &Reproduction) -> String {
    match r {
        Reproduction::Match => "match".into(),
        Reproduction::Mismatch { computed } => format!("computed {:?}", computed.0),
        Reproduction::NotStabilizing => "braid does not fix the projection".into(),
        Reproduction::Unparsable => "braid not parsable".into(),
        Reproduction::Failed { error } => format!("error: {error}"),
    }
}

/// Random elements of the level-2 congruence subgroup.
fn random_gamma2(rng: &mut ChaCha8Rng) -> Mat2Z {
    let gens = [GEN_A, GEN_B, GEN_A.inverse(), GEN_B.inverse(), MINUS_I];
    (0..rng.gen_range(1..=6)).fold(Mat2Z::IDENTITY, |acc, _| {
        acc.mul(&gens[rng.gen_range(0..gens.len())])
    })
}

fn equivariance(seed: u64) -> Result<Outcome> {
    let sys = build_elliptic(EllipticType::D4)?;
    let c = coxeter_transformation(&sys);
    let split = invariant_splitting(&sys)?;
    let amb = Ambient::elliptic(&sys);
    let fin = Ambient::finite(&sys.finite_part);
    let base = ReflectionTuple::new(amb, sys.canonical_roots())?;
    let m = base.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut pi_bad, mut commute_bad, mut transport_bad) = (0, 0, 0);
    for _ in 0..1000 {
        let word: Vec<i32> = (0..rng.gen_range(0..24))
            .map(|_| rng.gen_range(1..m as i32) * if rng.gen_bool(0.5) { 1 } else { -1 })
            .collect();
        let t = apply_braid_word(&base, &BraidWord::new(word))?;
        let i = rng.gen_range(1..m);
        let inv = rng.gen_bool(0.5);
        let moved = hurwitz_move(&t, i, inv)?;
        if project_tuple(&moved, &fin) != hurwitz_move(&project_tuple(&t, &fin), i, inv)? {
            pi_bad += 1;
        }
        let gamma = random_gamma2(&mut rng);
        let phi = gamma_lift(&split, &gamma)?;
        if act_on_tuple(&phi, &moved) != hurwitz_move(&act_on_tuple(&phi, &t), i, inv)? {
            commute_bad += 1;
        }
        let tr = fiber_transporter(&sys, &c, &t, &act_on_tuple(&phi, &t))?;
        if tr.matrix != gamma || tr.phi != phi || !gamma_membership(&tr.matrix, sys.ell as i64) {
            transport_bad += 1;
        }
    }
    Ok(outcome(
        pi_bad + commute_bad + transport_bad == 0,
        format!(
            "1000 triples (seed {seed}): projection violations {pi_bad}, commutation violations {commute_bad}, transporter violations {transport_bad}"
        ),
    ))
}

fn posets() -> Result<Outcome> {
    let mut report = Vec::new();
    let mut ok = true;
    for (t, catalan) in [(FiniteType::A(2), 5), (FiniteType::A(3), 14)] {
        let g = FiniteWeyl::new(build_finite(t)?);
        let n = g.sys.rank();
        let c = g.sys.simple_roots.iter().fold(IMat::identity(n), |acc, r| {
            acc.mul(&reflection_matrix(&g.sys.gram, r))
        });
        let p = interval_finite(&LatticeAutomorphism::new(c.clone()), &g)?;
        // independent count: prefixes of all reduced factorizations
        let ci = g.element_index(&c).expect("c is in the group");
        let mut prefixes: HashSet<u32> = HashSet::new();
        for f in g.enumerate_fac(ci, n, false, usize::MAX)? {
            for k in 0..=n {
                prefixes.insert(g.product(&f[..k]));
            }
        }
        let good = p.len() == catalan && prefixes.len() == catalan && p.covers_graded();
        ok &= good;
        report.push(format!(
            "{t}: interval {} elements, prefix brute force {}, expected {catalan}",
            p.len(),
            prefixes.len()
        ));
    }
    let sys = build_elliptic(EllipticType::D4)?;
    let small = interval_elliptic_gen(&sys, 2, usize::MAX)?;
    let large = interval_elliptic_gen(&sys, 3, usize::MAX)?;
    let st = stabilization(&small, &large, &sys);
    let clean = small.quarantined.is_empty()
        && large.quarantined.is_empty()
        && !small.truncated
        && !large.truncated;
    ok &= st.stable() && st.prefix_closed == (true, true) && st.graded == (true, true) && clean;
    report.push(format!(
        "D4.1.1 K=2: {} factorizations, levels {:?}; K=3: {} factorizations, levels {:?}",
        small.factorizations, st.counts.0, large.factorizations, st.counts.1
    ));
    report.push(format!(
        "stable at level 0 / 1 (restricted) / top: {} / {} / {}; prefix-closed {:?}; graded {:?}; quarantined {} / {}",
        st.level0_stable,
        st.level1_stable,
        st.top_stable,
        st.prefix_closed,
        st.graded,
        small.quarantined.len(),
        large.quarantined.len()
    ));
    Ok(Outcome {
        passed: ok,
        detail: "finite Catalan counts and windowed stabilization".into(),
        report,
    })
}
