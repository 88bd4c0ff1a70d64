use ndim_core::engine::{evaluate_integral, single_denominator_moment, IntegralSpec, Range};
use ndim_core::oracles::{closed_form_oracle, quad_oracle};
use num_bigint::BigInt;
use num_rational::BigRational;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn grid() -> Vec<IntegralSpec> {
    let mut out = Vec::new();
    for rho in [q(4, 1), q(9, 1), q(25, 4)] {
        for j in 0..=3 {
            for l in -4..=0 {
                for m in -4..=0 {
                    if j + l + m <= -1 {
                        out.push(IntegralSpec::new(j, l, m, q(1, 1), rho.clone(), Range::Full));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn grid_is_large_enough() {
    assert!(grid().len() >= 60);
}

#[test]
fn representations_agree_exactly() {
    for s in grid() {
        let r = evaluate_integral(&s).unwrap_or_else(|e| panic!("{s:?}: {e}"));
        let c = r.crosscheck.expect("distinct masses");
        assert_eq!(c.unprimed, c.primed, "{s:?}");
    }
}

#[test]
fn matches_both_oracles() {
    for s in grid() {
        let r = evaluate_integral(&s).unwrap();
        assert_eq!(r.exact, closed_form_oracle(&s).unwrap(), "{s:?}");
        let quad = quad_oracle(&s, 1e-11).unwrap();
        assert!(((r.float_value - quad) / quad).abs() <= 1e-9, "{s:?}: {} vs {quad}", r.float_value);
    }
}

#[test]
fn final_values_are_real() {
    for s in grid() {
        let r = evaluate_integral(&s).unwrap();
        assert!(r.exact.terms().iter().all(|t| t.i_power() == 0), "{s:?}");
        assert!(r.terms.iter().all(|t| t.exact.i_power() == 0), "{s:?}");
    }
}

#[test]
fn one_zero_term_when_an_exponent_vanishes() {
    for s in grid().into_iter().filter(|s| s.l == 0 || s.m == 0) {
        let r = evaluate_integral(&s).unwrap();
        let c = r.crosscheck.as_ref().unwrap();
        assert_eq!(c.unprimed_terms.iter().filter(|t| t.vanished).count(), 1, "{s:?}");
        assert_eq!(c.primed_terms.iter().filter(|t| t.vanished).count(), 1, "{s:?}");
        let (n, mass) = if s.m == 0 { (s.l, &s.mass1) } else { (s.m, &s.mass2) };
        let single = single_denominator_moment(s.j, n, mass, s.range).unwrap();
        assert_eq!(r.exact, single.into(), "{s:?}");
    }
}

#[test]
fn half_range_is_half_of_full() {
    for s in grid().into_iter().step_by(7) {
        let full = evaluate_integral(&s).unwrap().exact;
        let half = evaluate_integral(&IntegralSpec { range: Range::Half, ..s.clone() }).unwrap().exact;
        assert_eq!(half.scale(&ndim_core::ExactConst::int(2)), full);
    }
}

#[test]
fn exchange_symmetry_and_scaling() {
    for s in grid().into_iter().step_by(5) {
        let a = evaluate_integral(&s).unwrap().exact;
        assert_eq!(evaluate_integral(&s.swapped()).unwrap().exact, a);
        assert_eq!(closed_form_oracle(&s.swapped()).unwrap(), a);
        // scaling both masses by 4 multiplies by 4^(j+l+m+1/2) = 2^(2(j+l+m)+1)
        let scaled = IntegralSpec { mass1: &s.mass1 * q(4, 1), mass2: &s.mass2 * q(4, 1), ..s.clone() };
        let power = 2 * (s.j + s.l + s.m) + 1;
        let factor = ndim_core::ExactConst::rational(ndim_core::exact::rational_powi(&q(2, 1), power));
        assert_eq!(evaluate_integral(&scaled).unwrap().exact, a.scale(&factor));
    }
}

#[test]
fn non_square_ratios() {
    for (n, d) in [(2, 1), (3, 2), (7, 3)] {
        for (j, l, m) in [(0, -1, -1), (1, -2, -1), (2, -1, -3)] {
            let s = IntegralSpec::new(j, l, m, q(1, 1), q(n, d), Range::Full);
            let r = evaluate_integral(&s).unwrap();
            assert_eq!(r.exact, closed_form_oracle(&s).unwrap(), "{s:?}");
            let quad = quad_oracle(&s, 1e-11).unwrap();
            assert!(((r.float_value - quad) / quad).abs() <= 1e-9);
        }
    }
}
