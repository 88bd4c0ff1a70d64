//! End-to-end acceptance run: one line per criterion, then a single assert.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ndim_cli::{format_exact, format_sum, run, RunOptions};
use ndim_core::engine::{build_constraints, enumerate_solutions, evaluate_integral, single_denominator_moment, Index};
use ndim_core::exact::{pochhammer, ExactConst, HalfInt, Marked};
use ndim_core::hypergeom::{direct_series, gauss_collapse, terminating_sum, Hyp2F1};
use ndim_core::oracles::{closed_form_oracle, quad_oracle};
use ndim_core::{IntegralSpec, Range};
use num_traits::ToPrimitive;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

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

fn golden_values() -> Outcome {
    let cases = [
        ((0, -1, 0, Range::Half), "1/2*pi"),
        ((0, -1, 0, Range::Full), "1*pi"),
        ((0, -2, 0, Range::Full), "1/2*pi"),
        ((0, -3, 0, Range::Full), "3/8*pi"),
        ((1, -1, -1, Range::Full), "1/3*pi"),
        ((1, -1, -1, Range::Half), "1/6*pi"),
        ((0, -1, -1, Range::Half), "1/12*pi"),
        ((0, -1, -2, Range::Half), "5/288*pi"),
    ];
    for ((j, l, m, range), want) in cases {
        let rec = run(&IntegralSpec::unit_four(j, l, m, range), &RunOptions::default()).map_err(|e| e.to_string())?;
        if rec.exact != want {
            return Err(format!("({j},{l},{m},{range}): got {} want {want}", rec.exact));
        }
    }
    Ok(format!("{} values", cases.len()))
}

fn basis_terms() -> Outcome {
    let spec = IntegralSpec::unit_four(1, -1, -1, Range::Full);
    let rec = run(&spec, &RunOptions { breakdown: true, ..RunOptions::default() }).map_err(|e| e.to_string())?;
    let got: BTreeSet<String> = rec.terms.unwrap_or_default().into_iter().map(|t| t.exact).collect();
    let want: BTreeSet<String> = ["-1/3*pi", "2/3*pi"].iter().map(|s| s.to_string()).collect();
    if got == want {
        Ok("{-1/3*pi, 2/3*pi}".into())
    } else {
        Err(format!("breakdown {got:?}"))
    }
}

fn representation_equivalence(specs: &[IntegralSpec]) -> Outcome {
    for s in specs {
        let r = evaluate_integral(s).map_err(|e| format!("{s:?}: {e}"))?;
        let c = r.crosscheck.ok_or("missing crosscheck")?;
        if c.unprimed != c.primed {
            return Err(format!("{s:?}: {:?} vs {:?}", c.unprimed, c.primed));
        }
    }
    Ok(format!("{} specs", specs.len()))
}

fn oracle_equivalence(specs: &[IntegralSpec]) -> Outcome {
    let mut worst = 0.0f64;
    for s in specs {
        let r = evaluate_integral(s).map_err(|e| e.to_string())?;
        let closed = closed_form_oracle(s).map_err(|e| e.to_string())?;
        if closed != r.exact {
            return Err(format!("{s:?}: closed form differs"));
        }
        let quad = quad_oracle(s, 1e-11).map_err(|e| e.to_string())?;
        let rel = ((r.float_value - quad) / quad).abs();
        worst = worst.max(rel);
        if rel > 1e-9 {
            return Err(format!("{s:?}: quad relative delta {rel:e}"));
        }
    }
    Ok(format!("{} specs, worst quad delta {worst:.1e}", specs.len()))
}

fn singularity_census() -> Outcome {
    let (sys, _) = build_constraints();
    let (solutions, singular) = enumerate_solutions(&sys);
    let singular: Vec<Index> = singular.iter().map(|s| s.free).collect();
    if singular != vec![Index::A] {
        return Err(format!("singular choices {singular:?}"));
    }
    // reference blocks, unordered
    let blocks: [(Index, &[&str]); 4] = [
        (Index::R, &["a=j", "b=l-r", "c=-j-l-1/2+r", "s=j+l+m+1/2-r"]),
        (Index::S, &["a=j", "b=-j-m-1/2+s", "c=m-s", "r=j+l+m+1/2-s"]),
        (Index::B, &["a=j", "r=l-b", "s=j+m+1/2+b", "c=-j-1/2-b"]),
        (Index::C, &["a=j", "r=j+l+1/2+c", "s=m-c", "b=-j-1/2-c"]),
    ];
    for (free, block) in blocks {
        let sol = solutions.iter().find(|s| s.free == free).ok_or(format!("no solution for {free}"))?;
        let got: BTreeSet<String> = sol.describe().into_iter().collect();
        let want: BTreeSet<String> = block.iter().map(|s| s.to_string()).collect();
        if got != want {
            return Err(format!("free {free}: {got:?} vs {want:?}"));
        }
    }
    Ok("free a singular; r, s, b, c blocks match".into())
}

fn phase_invariant(specs: &[IntegralSpec]) -> Outcome {
    for s in specs {
        let r = evaluate_integral(s).map_err(|e| e.to_string())?;
        if r.exact.terms().iter().any(|t| t.i_power() != 0) {
            return Err(format!("{s:?}: imaginary part survives"));
        }
    }
    Ok(format!("{} specs", specs.len()))
}

fn reflection_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let a = HalfInt::from_twice(2 * rng.gen_range(-30..=30) + 1);
        let k = rng.gen_range(1..=6i64);
        let lhs = match (pochhammer(a, HalfInt::int(-k)), pochhammer(HalfInt::ONE - a, HalfInt::int(k))) {
            (Marked::Value(x), Marked::Value(y)) => x * y,
            other => return Err(format!("a={a}, k={k}: {other:?}")),
        };
        let want = ExactConst::int(if k % 2 == 0 { 1 } else { -1 });
        if lhs != want {
            return Err(format!("a={a}, k={k}: {lhs:?}"));
        }
    }
    Ok("500 cases".into())
}

fn random_z(rng: &mut ChaCha8Rng) -> BigRational {
    let den = rng.gen_range(2..=12i64);
    let num = rng.gen_range(-(den - 1)..=(den - 1));
    q(num, den)
}

fn random_c(rng: &mut ChaCha8Rng) -> HalfInt {
    loop {
        let c = HalfInt::from_twice(rng.gen_range(-15..=15));
        if !c.is_non_positive_integer() {
            return c;
        }
    }
}

fn strategy_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(1.0);
    let mut terminating = 0;
    while terminating < 50 {
        let a = HalfInt::int(-rng.gen_range(0..=8i64));
        let b = HalfInt::from_twice(rng.gen_range(-15..=15));
        let c = random_c(&mut rng);
        let Ok(h) = Hyp2F1::new(a, b, c, random_z(&mut rng)) else { continue };
        let Ok(exact) = terminating_sum(&h) else { continue };
        let exact = exact.to_f64().ok_or("overflow")?;
        let (series, _) = direct_series(&h, 1e-15).map_err(|e| format!("{h}: {e}"))?;
        if !close(exact, series) {
            return Err(format!("{h}: terminating {exact} vs series {series}"));
        }
        if let Ok(v) = gauss_collapse(&h) {
            if !close(v.to_f64().ok_or("non-real")?, series) {
                return Err(format!("{h}: collapse differs"));
            }
        }
        terminating += 1;
    }
    let mut collapse = 0;
    while collapse < 50 {
        let a = HalfInt::from_twice(rng.gen_range(-15..=15));
        let c = random_c(&mut rng);
        let Ok(h) = Hyp2F1::new(a, c, c, random_z(&mut rng)) else { continue };
        let Ok(v) = gauss_collapse(&h) else { continue };
        let (series, _) = direct_series(&h, 1e-15).map_err(|e| format!("{h}: {e}"))?;
        let v = v.to_f64().ok_or("non-real")?;
        if !close(v, series) {
            return Err(format!("{h}: collapse {v} vs series {series}"));
        }
        collapse += 1;
    }
    Ok("50 terminating + 50 collapse sets".into())
}

fn degenerate_terms(specs: &[IntegralSpec]) -> Outcome {
    let mut n = 0;
    for s in specs.iter().filter(|s| s.l == 0 || s.m == 0) {
        let r = evaluate_integral(s).map_err(|e| e.to_string())?;
        let c = r.crosscheck.as_ref().ok_or("missing crosscheck")?;
        let zeros = |ts: &[ndim_core::engine::TermValue]| ts.iter().filter(|t| t.vanished).count();
        if zeros(&c.unprimed_terms) != 1 || zeros(&c.primed_terms) != 1 {
            return Err(format!("{s:?}: zero-term counts differ from one"));
        }
        let (exp, mass) = if s.m == 0 { (s.l, &s.mass1) } else { (s.m, &s.mass2) };
        let single = single_denominator_moment(s.j, exp, mass, s.range).map_err(|e| e.to_string())?;
        if r.exact != single.into() {
            return Err(format!("{s:?}: differs from single-denominator value"));
        }
        n += 1;
    }
    Ok(format!("{n} specs"))
}

fn batch_determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let masses = ["1", "4", "9", "25/4", "2", "1/3"];
    let mut file = tempfile::NamedTempFile::new().map_err(|e| e.to_string())?;
    for i in 0..200 {
        let line = if i % 50 == 17 {
            "{\"j\": 1, \"l\": 2}".to_string()
        } else {
            let j = rng.gen_range(0..=3);
            let l = rng.gen_range(-4..=0);
            let m = rng.gen_range(-4..=0);
            let m1 = masses[rng.gen_range(0..masses.len())];
            let m2 = masses[rng.gen_range(0..masses.len())];
            let range = if rng.gen_bool(0.5) { "full" } else { "half" };
            format!("{{\"j\":{j},\"l\":{l},\"m\":{m},\"mass1\":\"{m1}\",\"mass2\":\"{m2}\",\"range\":\"{range}\"}}")
        };
        writeln!(file, "{line}").map_err(|e| e.to_string())?;
    }
    let path = file.path().to_str().ok_or("temp path")?.to_string();
    let exe = env!("CARGO_BIN_EXE_ndim");
    let go = |jobs: &str| {
        Command::new(exe)
            .args(["batch", "--input", &path, "--jobs", jobs, "--breakdown", "--crosscheck"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (par, seq) = (go("8")?, go("1")?);
    let lines = seq.stdout.iter().filter(|&&b| b == b'\n').count();
    if lines != 200 {
        return Err(format!("{lines} output lines"));
    }
    if par.stdout != seq.stdout {
        return Err("parallel output differs from sequential".into());
    }
    if par.status.code() != seq.status.code() {
        return Err("exit codes differ".into());
    }
    Ok("200 records byte-identical".into())
}

#[test]
fn acceptance() {
    let specs = grid();
    let criteria: Vec<Criterion> = vec![
        ("golden values", Box::new(golden_values)),
        ("basis-term correspondence", Box::new(basis_terms)),
        ("representation equivalence", Box::new(|| representation_equivalence(&specs))),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&specs))),
        ("singularity census", Box::new(singularity_census)),
        ("phase invariant", Box::new(|| phase_invariant(&specs))),
        ("Pochhammer reflection", Box::new(reflection_property)),
        ("hypergeometric strategy consistency", Box::new(strategy_consistency)),
        ("degenerate terms", Box::new(|| degenerate_terms(&specs))),
        ("batch determinism", Box::new(batch_determinism)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(note) => println!("[PASS] {}. {name}: {note}", i + 1),
            Err(why) => {
                println!("[FAIL] {}. {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    // keep the formatter exercised on the grid too
    for s in specs.iter().step_by(11) {
        let r = evaluate_integral(s).unwrap();
        assert!(format_sum(&r.exact).is_ok());
        assert!(r.terms.iter().all(|t| format_exact(&t.exact).is_ok()));
    }
}
