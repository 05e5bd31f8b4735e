mod oracles;

use motivic_core::fpt::{decompose, satisfies_pn, FptModule, Mat};
use motivic_core::graded::{AbGroupDesc, Coefficients, ExtNat, Fd, WeightFunction};
use motivic_core::milnor::{milnor_k, witt_data, Catalog, FieldDescriptor, FieldVariant};
use motivic_core::stems::{mgl_homotopy, Window};
use oracles::gf::{prime_powers, Gf};
use oracles::{jordan, misc, steinberg, witt};

fn shape(g: &AbGroupDesc) -> witt::Shape {
    witt::Shape { free: g.free_rank.finite().unwrap(), torsion: g.torsion_list() }
}

#[test]
fn finite_field_milnor_k_matches_symbol_quotient() {
    for (p, k) in prime_powers(49) {
        let f = Gf::new(p, k);
        let o = steinberg::symbols(&f, &[2, 3, 5, 7]);
        let km = milnor_k(&FieldDescriptor::finite(f.q), 2).unwrap();
        assert_eq!(o.k1_cyclic_order, Some(f.q - 1));
        assert_eq!(km[&1], AbGroupDesc::cyclic(f.q - 1), "q={}", f.q);
        assert_eq!(o.k2_order, 1, "q={}", f.q);
        assert!(km[&2].is_zero());
        for (l, size) in o.k1_mod {
            let rank = km[&1].mod_p_rank(l).unwrap().finite().unwrap();
            assert_eq!(l.pow(rank as u32), size, "q={} l={l}", f.q);
            assert_eq!(rank == 1, (f.q - 1).is_multiple_of(l));
        }
    }
}

#[test]
fn witt_groups_match_form_enumeration() {
    for (p, k) in prime_powers(27).into_iter().filter(|&(p, _)| p != 2) {
        let f = Gf::new(p, k);
        let o = witt::finite_field(&f);
        let w = witt_data(&FieldDescriptor::finite(f.q)).unwrap();
        assert_eq!(shape(&w.gw), o.gw, "q={}", f.q);
        assert_eq!(shape(&w.w), o.w, "q={}", f.q);
        assert_eq!(shape(&w.i_power(1)), o.i1, "q={}", f.q);
        assert_eq!(shape(&w.i_power(2)), o.i2, "q={}", f.q);
    }
    let real = witt_data(&FieldDescriptor::real_closed()).unwrap();
    let o = witt::real_closed(8);
    assert_eq!((shape(&real.gw), shape(&real.w)), (o.gw, o.w));
    assert_eq!((shape(&real.i_power(1)), shape(&real.i_power(2))), (o.i1, o.i2));
    let closed = witt_data(&FieldDescriptor::complex_like()).unwrap();
    let o = witt::quadratically_closed();
    assert_eq!((shape(&closed.gw), shape(&closed.w), shape(&closed.i_power(1))), (o.gw, o.w, o.i1));
}

#[test]
fn catalog_finite_fields_match_enumeration() {
    for k in &Catalog::builtin().fields {
        if let FieldVariant::Finite { q } = k.variant {
            let (p, e) = prime_powers(q).into_iter().find(|&(p, e)| p.pow(e) == q).unwrap();
            let o = witt::finite_field(&Gf::new(p, e));
            assert_eq!(shape(&witt_data(k).unwrap().w), o.w, "{}", k.name);
        }
    }
}

fn module(m: &jordan::M, p: u64) -> FptModule {
    FptModule::new(Mat::from_rows(p, m, m.len())).unwrap()
}

#[test]
fn decompose_matches_jordan_type_up_to_dimension_three() {
    for p in [2u64, 3] {
        for n in 0..=3 {
            jordan::for_each_matrix(n, p, |m| {
                if !jordan::is_nilpotent(m, p) {
                    return;
                }
                let fm = module(m, p);
                assert_eq!(decompose(&fm).unwrap().profile(), jordan::jordan_type(m, p), "{m:?}");
            });
        }
    }
}

#[test]
fn property_pn_characterizes_free_modules() {
    for p in [2u64, 3] {
        for n in 1..=3 {
            jordan::for_each_matrix(n, p, |m| {
                if !jordan::is_nilpotent(m, p) {
                    return;
                }
                let fm = module(m, p);
                let ty = jordan::jordan_type(m, p);
                for e in 0..=n as u32 {
                    // Modules killed by t^{e+1}.
                    if ty.iter().any(|&(s, _)| s > e + 1) {
                        continue;
                    }
                    let free = ty.iter().all(|&(s, _)| s == e + 1);
                    assert_eq!(satisfies_pn(&fm, e).holds, free, "{m:?} e={e}");
                }
            });
        }
    }
}

#[test]
fn mgl_diagonal_counts_partitions() {
    let counts = misc::partition_counts(8);
    let c = mgl_homotopy(&FieldDescriptor::algebraically_closed(0), 5, &Window::new((0, 16), (0, 8))).unwrap();
    for (i, &n) in counts.iter().enumerate() {
        let g = c.get(2 * i as i64, i as i64);
        assert_eq!(g, AbGroupDesc::free_over(ExtNat::Finite(n), Coefficients::Complete(5)));
    }
}

#[test]
fn weight_function_matches_case_table() {
    for d in 1..=10 {
        let f = Fd::new(d).unwrap();
        for n in -60..=60 {
            assert_eq!(f.eval(n).unwrap(), misc::f_d(d, n));
        }
    }
}
