use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use crate::elliptic::{
    braid_matrix, fiber_transporter, gamma_membership, translation_part, Mat2Z,
};
use crate::gamma2::{eval_free, sanov_decompose};
use crate::hurwitz::{apply_braid_word, hurwitz_move, BraidWord};
use crate::tables::{table_word, TableData};
use crate::weyl::reflection_matrix;
use crate::*;

struct D4 {
    sys: EllipticRootSystem,
    c: LatticeAutomorphism,
    ambient: Arc<Ambient>,
    window: Vec<LatticeVector>,
    base: ReflectionTuple,
    stabilizers: Vec<BraidWord>,
}

fn d4() -> &'static D4 {
    static CELL: OnceLock<D4> = OnceLock::new();
    CELL.get_or_init(|| {
        let sys = build_elliptic(EllipticType::D4).unwrap();
        let c = coxeter_transformation(&sys);
        let ambient = Ambient::elliptic(&sys);
        let window = roots_window(&sys, 2);
        let base = ReflectionTuple::new(ambient.clone(), sys.canonical_roots()).unwrap();
        let data = TableData::embedded();
        let stabilizers = data
            .rows_for(EllipticType::D4)
            .iter()
            .map(|r| {
                let tau = table_word(r.tau.as_ref().unwrap());
                match &r.rho {
                    Some(rho) => BraidWord::conjugate(&table_word(rho), &tau),
                    None => tau,
                }
            })
            .collect();
        D4 {
            sys,
            c,
            ambient,
            window,
            base,
            stabilizers,
        }
    })
}

fn root() -> impl Strategy<Value = LatticeVector> {
    (0..d4().window.len()).prop_map(|i| d4().window[i].clone())
}

fn tuple(len: usize) -> impl Strategy<Value = ReflectionTuple> {
    prop::collection::vec(root(), len)
        .prop_map(|rs| ReflectionTuple::new(d4().ambient.clone(), rs).unwrap())
}

fn mat2() -> impl Strategy<Value = Mat2Z> {
    (-20i64..20, -20i64..20, -20i64..20, -20i64..20).prop_map(|(p, q, r, s)| Mat2Z::new(p, q, r, s))
}

/// Random element of `Gamma(2)` as a word in the free generators.
fn gamma2_word() -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(prop_oneof![Just(1i8), Just(-1), Just(2), Just(-2)], 0..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_is_an_involutive_isometry(r in root(), x in prop::collection::vec(-5i64..5, 6)) {
        let s = &d4().sys;
        let x = LatticeVector(x);
        let y = s.reflect(&r, &x);
        prop_assert_eq!(s.reflect(&r, &y), x.clone());
        prop_assert_eq!(s.bilinear(&y, &y), s.bilinear(&x, &x));
        prop_assert_eq!(s.reflect(&r, &r), r.neg());
    }

    #[test]
    fn moves_preserve_the_product(t in tuple(6), i in 1usize..6, inv in any::<bool>()) {
        let u = hurwitz_move(&t, i, inv).unwrap();
        prop_assert_eq!(product(&u).matrix, product(&t).matrix);
        prop_assert_eq!(hurwitz_move(&u, i, !inv).unwrap(), t);
    }

    #[test]
    fn moves_satisfy_the_braid_relations(t in tuple(6), i in 1usize..4, j in 1usize..6) {
        let i = i as i32;
        let lhs = apply_braid_word(&t, &BraidWord::new(vec![i, i + 1, i])).unwrap();
        let rhs = apply_braid_word(&t, &BraidWord::new(vec![i + 1, i, i + 1])).unwrap();
        prop_assert_eq!(lhs, rhs);
        let j = j as i32;
        if (i - j).abs() >= 2 {
            let a = apply_braid_word(&t, &BraidWord::new(vec![i, j])).unwrap();
            let b = apply_braid_word(&t, &BraidWord::new(vec![j, i])).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn hnf_span_ignores_order_and_sign(vs in prop::collection::vec(prop::collection::vec(-6i64..6, 4), 1..7), seed in any::<u64>()) {
        let vs: Vec<LatticeVector> = vs.into_iter().map(LatticeVector).collect();
        let mut shuffled = vs.clone();
        let k = shuffled.len();
        shuffled.rotate_left((seed as usize) % k);
        shuffled[0] = shuffled[0].neg();
        prop_assert!(lattice_equal(&hnf_span(&vs), &hnf_span(&shuffled)));
        for v in &vs {
            prop_assert!(hnf_span(&vs).contains(v));
        }
    }

    #[test]
    fn translations_add(a in root(), b in root()) {
        // s_x s_{x + a} with x finite is a translation; parts add under composition
        let s = &d4().sys;
        let n = s.rank();
        let g = s.gram.matrix();
        let tr = |r: &LatticeVector| {
            let f = r.truncate(n).extend(0, 0);
            LatticeAutomorphism::new(reflection_matrix(g, &f).mul(&reflection_matrix(g, &f.add(&s.a))))
        };
        let (ta, tb) = (tr(&a), tr(&b));
        let pa = translation_part(&ta, n).unwrap();
        let pb = translation_part(&tb, n).unwrap();
        prop_assert_eq!(translation_part(&ta.compose(&tb), n).unwrap(), pa.add(&pb));
        prop_assert!(pa.mu_b.iter().all(|&x| x == 0));
    }

    #[test]
    fn mat2_arithmetic(x in mat2(), y in mat2(), k in 0i64..5) {
        prop_assert_eq!(x.mul(&y).det(), x.det() * y.det());
        prop_assert_eq!(x.mul(&y).transpose(), y.transpose().mul(&x.transpose()));
        prop_assert_eq!(x.pow(k + 1), x.pow(k).mul(&x));
        if x.det() == 1 {
            prop_assert_eq!(x.mul(&x.inverse()), Mat2Z::IDENTITY);
        }
    }

    #[test]
    fn gamma2_words_round_trip(w in gamma2_word(), neg in any::<bool>()) {
        let m = eval_free(&w);
        let m = if neg { m.neg() } else { m };
        prop_assert!(gamma_membership(&m, 2));
        let (sign, word) = sanov_decompose(&m).unwrap();
        let back = eval_free(&word);
        prop_assert_eq!(if sign < 0 { back.neg() } else { back }, m);
        prop_assert!(word.len() <= w.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn braid_matrix_is_multiplicative(picks in prop::collection::vec((0usize..3, any::<bool>()), 1..4)) {
        let d = d4();
        let mut word = BraidWord::new(Vec::new());
        let mut expected = Mat2Z::IDENTITY;
        for &(i, inv) in &picks {
            let w = if inv { d.stabilizers[i].inverse() } else { d.stabilizers[i].clone() };
            let m = braid_matrix(&d.sys, &d.c, &d.base, &w).unwrap();
            word = word.then(&w);
            expected = expected.mul(&m);
        }
        let got = braid_matrix(&d.sys, &d.c, &d.base, &word).unwrap();
        prop_assert_eq!(got, expected);
        prop_assert!(gamma_membership(&got, d.sys.ell as i64));
    }

    #[test]
    fn transporters_commute_with_moves(picks in 0usize..3, letters in prop::collection::vec(prop_oneof![1i32..6, -5i32..0], 0..6)) {
        // phi maps t to w(t); it must carry sigma(t) to sigma(w(t))
        let d = d4();
        let img = apply_braid_word(&d.base, &d.stabilizers[picks]).unwrap();
        let phi = fiber_transporter(&d.sys, &d.c, &d.base, &img).unwrap().phi;
        let sigma = BraidWord::new(letters);
        let a = apply_braid_word(&d.base, &sigma).unwrap();
        let b = apply_braid_word(&img, &sigma).unwrap();
        let moved = crate::elliptic::act_on_tuple(&phi, &a);
        let canon = |t: &ReflectionTuple| t.entries.iter().map(|r| r.canonical()).collect::<Vec<_>>();
        prop_assert_eq!(canon(&moved), canon(&b));
    }
}
