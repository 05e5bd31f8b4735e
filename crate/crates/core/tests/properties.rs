mod oracles;

use motivic_core::fpt::{
    check_torsion_powers, check_u_sequences, decompose, satisfies_pn, FptModule, Mat,
};
use motivic_core::graded::{chow_degree, AbGroupDesc, BigradedChart, Chow, Fd, TruncationMode, WeightFunction};
use oracles::jordan;
use proptest::prelude::*;

fn group_strategy() -> impl Strategy<Value = AbGroupDesc> {
    prop_oneof![
        Just(AbGroupDesc::zero()),
        (1u64..3).prop_map(AbGroupDesc::free),
        prop::sample::select(vec![2u64, 3, 4, 9, 27]).prop_map(AbGroupDesc::cyclic),
    ]
}

fn chart_strategy() -> impl Strategy<Value = BigradedChart> {
    prop::collection::vec(((-20i64..20), (-10i64..10), group_strategy()), 0..30).prop_map(|entries| {
        let mut c = BigradedChart::new("random", None);
        for (i, j, g) in entries {
            c.set(i, j, g);
        }
        c
    })
}

/// `0` selects the Chow weight, `d > 0` selects `f_d`.
fn weight(d: i64) -> Box<dyn WeightFunction> {
    if d == 0 {
        Box::new(Chow)
    } else {
        Box::new(Fd::new(d).unwrap())
    }
}

/// A module of given Jordan type in a random basis.
fn module_strategy(p: u64, max_dim: usize) -> impl Strategy<Value = FptModule> {
    prop::collection::vec(1u32..=6, 0..=6)
        .prop_map(move |sizes| {
            let mut dim = 0;
            let mut parts = Vec::new();
            for s in sizes {
                if dim + s as usize <= max_dim {
                    dim += s as usize;
                    parts.push((s, 1));
                }
            }
            parts
        })
        .prop_flat_map(move |parts| {
            let dim: usize = parts.iter().map(|&(s, _)| s as usize).sum();
            (Just(parts), prop::collection::vec(0..p, dim * dim))
        })
        .prop_filter_map("singular change of basis", move |(parts, entries)| {
            let base = FptModule::from_profile(p, &parts);
            let rows: Vec<Vec<u64>> = entries.chunks(base.dim.max(1)).map(|r| r.to_vec()).take(base.dim).collect();
            let g = Mat::from_rows(p, &rows, base.dim);
            base.conjugate(&g).ok()
        })
}

fn prime_and_module() -> impl Strategy<Value = FptModule> {
    prop_oneof![module_strategy(2, 12), module_strategy(3, 12), module_strategy(5, 8)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn truncation_is_idempotent_and_splits(c in chart_strategy(), d in 0i64..=10, s in -10i64..10) {
        let f = weight(d);
        let ge = c.truncate(f.as_ref(), s, TruncationMode::Ge).unwrap();
        prop_assert_eq!(&ge.truncate(f.as_ref(), s, TruncationMode::Ge).unwrap(), &ge);
        let lt = c.truncate(f.as_ref(), s, TruncationMode::Lt).unwrap();
        prop_assert!(ge.direct_sum(&lt).unwrap().same_groups(&c));
    }

    #[test]
    fn chow_degree_is_shift_invariant(i in -1000i64..1000, j in -1000i64..1000) {
        prop_assert_eq!(chow_degree(i + 2, j + 1), chow_degree(i, j));
    }

    #[test]
    fn weight_functions_are_subadditive(d in 1i64..=10, a in -50i64..=50, b in -50i64..=50) {
        let f = Fd::new(d).unwrap();
        prop_assert!(f.eval(a).unwrap() + f.eval(b).unwrap() >= f.eval(a + b).unwrap());
        prop_assert_eq!(f.eval(0).unwrap(), 0);
        prop_assert!(Chow.eval(a).unwrap() + Chow.eval(b).unwrap() >= Chow.eval(a + b).unwrap());
    }

    #[test]
    fn decomposition_matches_jordan_type(m in prime_and_module()) {
        let rows = m.t.to_rows();
        let expected = if m.dim == 0 { vec![] } else { jordan::jordan_type(&rows, m.p) };
        prop_assert_eq!(decompose(&m).unwrap().profile(), expected);
    }

    #[test]
    fn pn_passes_to_torsion_and_quotient(m in prime_and_module(), n in 0u32..5) {
        if satisfies_pn(&m, n).holds {
            let e = n as u64 + 1;
            let tors = m.submodule(&m.torsion(e).basis()).unwrap();
            prop_assert!(satisfies_pn(&tors, n).holds);
            let quot = m.quotient(&m.divisible_by(e)).module;
            prop_assert!(satisfies_pn(&quot, n).holds);
        }
    }

    #[test]
    fn torsion_power_characterizations_agree(m in prime_and_module()) {
        // The check itself fails when scan and profile disagree.
        let c = check_torsion_powers(&m).unwrap();
        prop_assert_eq!(c.holds, c.profile_holds);
    }

    #[test]
    fn u_sequences_imply_torsion_powers(m in prime_and_module()) {
        if check_u_sequences(&m).unwrap() {
            prop_assert!(check_torsion_powers(&m).unwrap().holds);
        }
    }
}
