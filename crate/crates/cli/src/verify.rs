//! Built-in oracle suite: every fast counting path is compared against an
//! independent slow computation, and the generic local factors against
//! their closed forms.

use std::time::Instant;

use frobsf::frobenius::{ap, ap_series};
use frobsf::gl2::{
    count_cf, count_cf_twisted, generic_density, gl2_order, oracle, trace_det_fiber, DetCharacter,
    PrimePower,
};
use frobsf::integers::{kronecker, primes_up_to};
use frobsf::serre::{psi, ratio_cef, serre_data, Curve};
use frobsf::{BiPoly, Rational};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn builtins() -> [BiPoly; 2] {
    [BiPoly::koblitz(), BiPoly::frobdisc()]
}

fn closed_forms() -> Check {
    let mut checked = 0;
    for l in [2i64, 3, 5, 7, 11, 13] {
        let got = generic_density(&BiPoly::frobdisc(), l as u64)
            .map_err(fail)?
            .ratio();
        let expected = if l == 2 {
            q(2, 3)
        } else {
            q(l * l + l - 1, l * l * (l * l - 1))
        };
        ensure(got == expected, || format!("x^2-4*y at {l}: {got}"))?;
        let got = generic_density(&BiPoly::koblitz(), l as u64)
            .map_err(fail)?
            .ratio();
        let expected = q(l * l * l - l - 1, l * l * (l * l - 1) * (l - 1));
        ensure(got == expected, || format!("y+1-x at {l}: {got}"))?;
        checked += 2;
    }
    Ok(format!("{checked} local factors"))
}

fn fiber_sizes() -> Check {
    let mut checked = 0;
    for p in [3u64, 5, 7, 11, 13] {
        let fiber = trace_det_fiber(PrimePower::new(p, 1)).map_err(fail)?;
        for (t, d, m) in fiber.iter() {
            let roots = 1 + kronecker(t as i64 * t as i64 - 4 * d as i64, p as i64) as i64;
            let expected = (p * p) as i64 + p as i64 * (roots - 1);
            ensure(m as i64 == expected, || format!("p={p} T={t} D={d}: {m}"))?;
            checked += 1;
        }
    }
    for modulus in [4u64, 8, 9, 16, 25, 27, 49] {
        let fiber =
            trace_det_fiber(PrimePower::from_modulus(modulus).map_err(fail)?).map_err(fail)?;
        let order = gl2_order(modulus).map_err(fail)?;
        ensure(frobsf::Natural::from(fiber.total()) == order, || {
            format!("fibers mod {modulus} do not sum to |GL2|")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} fibers and totals"))
}

fn counts_vs_enumeration() -> Check {
    let mut checked = 0;
    for f in builtins() {
        for m in 2..=12u64 {
            let fast = count_cf(&f, m).map_err(fail)?;
            let slow = oracle::enumerate_oracle(&f, m, None).map_err(fail)?;
            ensure(fast == frobsf::Natural::from(slow), || {
                format!("f={f} m={m}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} moduli"))
}

fn twisted_vs_enumeration() -> Check {
    let mut checked = 0;
    for f in builtins() {
        for p in [3u64, 5] {
            let qq = PrimePower::new(p, 2);
            let chi = DetCharacter::Legendre(p);
            let fast = count_cf_twisted(&f, qq, chi).map_err(fail)?;
            let slow = oracle::enumerate_weighted(&f, qq.q, qq.q, |g| chi.eval(g.det(qq.q)) as i64)
                .map_err(fail)?;
            ensure(fast == slow as i128, || format!("f={f} q={}", qq.q))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} character-weighted counts"))
}

fn psi_kernel_index() -> Check {
    let mut checked = 0;
    for (a, b) in [(-1, 0), (1, 0), (0, 1), (-2, 0), (2, 0)] {
        let sd = serre_data(&Curve::new(a, b).map_err(fail)?).map_err(fail)?;
        let (mut kernel, mut total) = (0u64, 0u64);
        let mut bad = None;
        oracle::for_each_invertible(sd.m_e, |g| {
            total += 1;
            match psi(g, &sd) {
                Ok(1) => kernel += 1,
                Ok(_) => {}
                Err(e) => bad = Some(e),
            }
        })
        .map_err(fail)?;
        if let Some(e) = bad {
            return Err(e.to_string());
        }
        ensure(2 * kernel == total, || {
            format!("({a}, {b}): kernel {kernel} of {total}")
        })?;
        checked += 1;
    }
    Ok(format!("index 2 at level M_E for {checked} curves"))
}

/// Share of `ker psi` at `level` meeting `f(tr, det) = 0 mod n^2`.
fn kernel_ratio(curve: &Curve, f: &BiPoly, n: u64, level: u64) -> Result<Rational, String> {
    let sd = serre_data(curve).map_err(fail)?;
    let (mut hits, mut size) = (0i64, 0i64);
    oracle::for_each_invertible(level, |g| {
        if psi(&g.reduce(sd.m_e), &sd) == Ok(1) {
            size += 1;
            if f.eval_mod(g.trace(level), g.det(level), n * n) == 0 {
                hits += 1;
            }
        }
    })
    .map_err(fail)?;
    Ok(q(hits, size))
}

fn curve_ratios_vs_enumeration() -> Check {
    // (curve, n, level) with level divisible by n^2 and M_E
    let cases = [
        ((-1, 0), 2, 4),
        ((1, 0), 2, 4),
        ((0, 1), 2, 12),
        ((0, 1), 3, 18),
        ((-2, 0), 2, 8),
        ((-3, 0), 6, 36),
    ];
    let mut checked = 0;
    for ((a, b), n, level) in cases {
        let curve = Curve::new(a, b).map_err(fail)?;
        for f in builtins() {
            let fast = ratio_cef(&curve, &f, n).map_err(fail)?.ratio();
            let slow = kernel_ratio(&curve, &f, n, level)?;
            ensure(fast == slow, || {
                format!("({a}, {b}) n={n} f={f}: {fast} vs {slow}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} levels"))
}

fn naive_ap(a: i64, b: i64, p: u64) -> i64 {
    let p = p as i64;
    let mut points = 1;
    for x in 0..p {
        let rhs = (x * x % p * x + a * x + b).rem_euclid(p);
        points += (0..p).filter(|y| y * y % p == rhs).count() as i64;
    }
    p + 1 - points
}

fn traces_vs_point_counting() -> Check {
    let mut checked = 0;
    for (a, b) in [(-1, 0), (0, 1), (1, 1), (-1, 2), (7, -3)] {
        let curve = Curve::new(a, b).map_err(fail)?;
        for p in primes_up_to(200).map_err(fail)? {
            if curve.is_good_prime(p) {
                let fast = ap(&curve, p).map_err(fail)?;
                ensure(fast == naive_ap(a, b, p), || format!("({a}, {b}) p={p}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} traces"))
}

fn hasse_bound() -> Check {
    let series = ap_series(&Curve::new(1, 1).map_err(fail)?, 100_000).map_err(fail)?;
    let bad = series.hasse_violations();
    ensure(bad.is_empty(), || format!("violations: {bad:?}"))?;
    Ok(format!("{} primes up to 10^5", series.entries.len()))
}

/// Runs every check, writing one line per check; returns whether all passed.
pub fn run(out: &mut impl std::io::Write) -> std::io::Result<bool> {
    let checks: [(&str, fn() -> Check); 8] = [
        ("generic local factors vs closed forms", closed_forms),
        ("trace/det fiber sizes", fiber_sizes),
        ("C_f(m) vs enumeration", counts_vs_enumeration),
        (
            "character-twisted counts vs enumeration",
            twisted_vs_enumeration,
        ),
        ("Serre character kernel index", psi_kernel_index),
        (
            "curve densities vs kernel enumeration",
            curve_ratios_vs_enumeration,
        ),
        ("a_p vs point counting", traces_vs_point_counting),
        ("Hasse bound", hasse_bound),
    ];
    let mut passed = 0;
    for (name, check) in checks {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let (status, detail) = match &outcome {
            Ok(detail) => ("PASS", detail),
            Err(detail) => ("FAIL", detail),
        };
        writeln!(out, "{status} {name} [{secs:.2} s] {detail}")?;
        passed += outcome.is_ok() as usize;
    }
    writeln!(out, "{passed}/{} checks passed", checks.len())?;
    Ok(passed == checks.len())
}
