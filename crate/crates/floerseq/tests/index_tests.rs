//! Index calculus against hand-computed values.

mod common;

use common::preset;
use floerseq::index::{self, Period};
use num_rational::Ratio;

fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

#[test]
fn w_function_values() {
    // W(x) = 2⌊x⌋ + 1 off the integers, 2x on them.
    assert_eq!(index::w_eval(r(0, 1)), 0);
    assert_eq!(index::w_eval(r(1, 1)), 2);
    assert_eq!(index::w_eval(r(-3, 1)), -6);
    assert_eq!(index::w_eval(r(1, 2)), 1);
    assert_eq!(index::w_eval(r(-1, 2)), -1);
    assert_eq!(index::w_eval(r(7, 3)), 5);
    assert_eq!(index::w_eval(r(-7, 3)), -5);
}

#[test]
fn period_parsing_and_display() {
    let p: Period = "2/3".parse().unwrap();
    assert_eq!(p, Period::new(2, 3));
    assert_eq!(p.to_string(), "2/3");
    let n: Period = "4".parse().unwrap();
    assert_eq!(n, Period::integer(4));
    assert_eq!(n.to_string(), "4");
    // Reduction happens on construction.
    assert_eq!(Period::new(2, 6), Period::new(1, 3));
    assert!("0/0".parse::<Period>().is_err());
}

#[test]
fn maslov_indices() {
    let cases = [
        ("x_z3", 2),
        ("x_z6", 1),
        ("x_z3_nonstandard", 1),
        ("d5", 1),
        ("e8", 1),
        ("tcp1", 1),
        ("tcp3", 3),
        ("springer_sl3", 3),
        ("twisted_tcp2", 6),
        ("twisted_tcp3", 12),
        ("twisted_tcp4", 20),
        ("s22", 2),
        ("s32", 4),
        ("t_t2", 1),
        ("higgs_sl2_g2", 3),
        ("e8_affine", 1),
    ];
    for (name, mu) in cases {
        let spec = preset(name);
        assert_eq!(index::maslov_index(&spec).unwrap(), mu, "μ of {name}");
    }
}

#[test]
fn morse_bott_and_floer_indices() {
    let s22 = preset("s22");
    let min = s22.component("f_min").unwrap();
    let mpx = s22.component("f_mpx").unwrap();
    assert_eq!(index::morse_bott_index(min), 0);
    assert_eq!(index::morse_bott_index(mpx), 2);

    // Corollary 2.14(4): μ_λ = μ_α below the first critical time of the
    // component.
    assert_eq!(index::first_critical_time(mpx), Some(Period::new(1, 2)));
    assert_eq!(index::floer_index(mpx, Period::new(1, 3)), 2);
    // Corollary 2.14(5): μ_{N + ε} = μ_α − 2Nμ (here μ = 2).
    assert_eq!(
        index::floer_index(min, index::lambda_plus(&s22, Period::integer(1))),
        0 - 4
    );
}

#[test]
fn weight_one_floer_index_below_one_vanishes() {
    // Lemma 2.18(3): μ_{1⁻}(F_α) = 0 for weight-1 CSRs.
    for name in ["d5", "e7", "x_z6", "tcp2", "s22", "springer_sl3"] {
        let spec = preset(name);
        let just_below = index::lambda_minus(&spec, Period::integer(1));
        for c in &spec.components {
            assert_eq!(index::floer_index(c, just_below), 0, "{name}/{}", c.id);
        }
    }
}

#[test]
fn lambda_plus_minus_straddle_no_critical_time() {
    let spec = preset("x_z5");
    for t in index::critical_times(&spec, Period::integer(2)) {
        let lo = index::lambda_minus(&spec, t.period);
        let hi = index::lambda_plus(&spec, t.period);
        assert!(lo < t.period && t.period < hi);
        assert!(!index::is_critical_time(&spec, lo));
        assert!(!index::is_critical_time(&spec, hi));
    }
}

#[test]
fn critical_times_of_x_z3() {
    let spec = preset("x_z3");
    let times = index::critical_times(&spec, Period::integer(2));
    let periods: Vec<Period> = times.iter().map(|t| t.period).collect();
    assert_eq!(
        periods,
        vec![
            Period::new(1, 3),
            Period::new(2, 3),
            Period::integer(1),
            Period::new(4, 3),
            Period::new(5, 3),
            Period::integer(2),
        ]
    );
    // Both torsion lines slice every k/3 column.
    assert_eq!(times[0].families.len(), 2);
    assert_eq!(times[1].families.len(), 2);
    // Integer times carry no fractional family slices.
    assert!(times[2].families.is_empty());
}

#[test]
fn family_ranks() {
    let s22 = preset("s22");
    let kt = s22.family("k_t").unwrap();
    assert_eq!(index::family_rank(&s22, kt).unwrap(), 1);

    let higgs = preset("higgs_sl2_g2");
    let fam = higgs.families.iter().find(|f| f.m == 2).unwrap();
    assert_eq!(index::family_rank(&higgs, fam).unwrap(), 2);
}

#[test]
fn slice_gradings_hand_checked() {
    // Each value was computed from Eq. 64 by hand; bundle mode additionally
    // asserts both Corollary 6.2 cross-checks internally.
    let x_z3 = preset("x_z3");
    for fam in &x_z3.families {
        assert_eq!(index::slice_grading(&x_z3, fam, Period::new(1, 3)).unwrap(), 0);
        assert_eq!(index::slice_grading(&x_z3, fam, Period::new(2, 3)).unwrap(), -2);
    }

    let d6 = preset("d6");
    let z4 = d6.families.iter().find(|f| f.m == 4).unwrap();
    assert_eq!(index::slice_grading(&d6, z4, Period::new(1, 4)).unwrap(), 0);

    let s22 = preset("s22");
    let kt = s22.family("k_t").unwrap();
    assert_eq!(index::slice_grading(&s22, kt, Period::new(1, 2)).unwrap(), 0);

    // Twisted T*CP³: μ(B_{1/k}) = 2(k − n − 1) with n = 4.
    let tw = preset("twisted_tcp3");
    let z7 = tw.families.iter().find(|f| f.m == 7).unwrap();
    assert_eq!(index::slice_grading(&tw, z7, Period::new(1, 7)).unwrap(), 4);

    let higgs = preset("higgs_sl2_g2");
    let z2 = higgs.families.iter().find(|f| f.m == 2).unwrap();
    assert_eq!(index::slice_grading(&higgs, z2, Period::new(1, 2)).unwrap(), 0);
}

#[test]
fn slice_grading_periodicity() {
    // μ(B_{T+N}) = μ(B_T) − 2Nμ; periodicity_shift asserts the direct
    // evaluation agrees.
    let s32 = preset("s32");
    for fam in &s32.families {
        for k in 1..fam.m {
            if num_integer::gcd(k, fam.m) != 1 {
                continue;
            }
            let t = Period::new(k, fam.m);
            let base = index::slice_grading(&s32, fam, t).unwrap();
            let shifted = index::periodicity_shift(&s32, fam, t, 1).unwrap();
            assert_eq!(shifted, base - 2 * 4);
        }
    }
    assert_eq!(index::integer_slice_grading(&s32, 2).unwrap(), -16);
}

#[test]
fn corpus_is_compatibly_weighted() {
    for spec in floerseq::presets::all_presets() {
        assert!(index::compatibly_weighted(&spec), "{}", spec.name);
    }
}
