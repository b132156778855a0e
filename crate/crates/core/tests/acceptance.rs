//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line for
//! each and exits nonzero if any failed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bce_core::analysis::{fourier_certificate, mercat_check};
use bce_core::numberfield::parse_polynomial;
use bce_core::smoothedentropy::{
    c_constant, gaussian_entropy, gaussian_entropy_by_quadrature, mixture_entropy, phi, PhiSearch,
    SmoothedQuery, DEFAULT_QUAD_TOL,
};
use bce_core::walk::{
    brute_force_oracle, growth_sequences, is_free_up_to, level_at, shannon_entropy, DEFAULT_BUDGET,
};
use bce_core::{AlgebraicContext, Error, StepDistribution};
use num_complex::Complex64;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ctx(coeffs: &[i64]) -> AlgebraicContext {
    AlgebraicContext::new(parse_polynomial(coeffs).unwrap()).unwrap()
}

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn cconst_reproduction() -> Outcome {
    let start = Instant::now();
    let cert = c_constant(&StepDistribution::fair_coin(), 64, &PhiSearch::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(
        cert.c_lower >= 0.44 && elapsed <= Duration::from_secs(300),
        format!("c_lower = {:.6} with 64 cells in {:.1?}", cert.c_lower, elapsed),
    )
}

fn mercat_example() -> Outcome {
    let start = Instant::now();
    let c = ctx(&[1, 1, 1, -1, 1, 1, 1]);
    let m = mercat_check(&c, 8, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mahler = c.mahler();
    check(
        mahler.lo > 1.0
            && mahler.hi < 2.0
            && c.k_on_circle() == 2
            && m.verdict
            && (m.supp_size as f64) < m.mahler_pow.lo
            && elapsed <= Duration::from_secs(1),
        format!(
            "M in [{:.12}, {:.12}], k = {}, |Supp(8)| = {} < M^8 >= {:.6}, {:.1?}",
            mahler.lo,
            mahler.hi,
            c.k_on_circle(),
            m.supp_size,
            m.mahler_pow.lo,
            elapsed
        ),
    )
}

fn dyadic_exactness() -> Outcome {
    let c = ctx(&[-1, 2]);
    let nu = StepDistribution::fair_coin();
    let report = growth_sequences(c.poly(), &nu, 20, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let rows_ok = report.rows.len() == 20
        && report
            .rows
            .iter()
            .all(|r| r.supp_size == 1 << r.n && r.h_bits == r.n as f64);
    let free = is_free_up_to(&c, &nu, 20, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    check(
        rows_ok && free.free && free.free_through == 20,
        format!(
            "|Supp(n)| = 2^n and H(n) = n for n <= 20: {rows_ok}; free through {}",
            free.free_through
        ),
    )
}

fn golden_oracle() -> Outcome {
    let c = ctx(&[-1, 1, 1]);
    let nu = StepDistribution::fair_coin();
    let lam = (5f64.sqrt() - 1.0) / 2.0;
    for n in 1..=12 {
        let level = level_at(c.poly(), &nu, n, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let oracle = brute_force_oracle(Complex64::new(lam, 0.0), &nu, n, 1e-9).map_err(|e| e.to_string())?;
        if oracle.count() != level.support_size() {
            return Err(format!("n = {n}: {} exact atoms vs {} clusters", level.support_size(), oracle.count()));
        }
        let mut exact: Vec<(f64, f64)> = level
            .masses()
            .iter()
            .map(|(x, m)| {
                let v = x.eval(Complex64::new(lam, 0.0)).re;
                (v, num_traits::ToPrimitive::to_f64(m).unwrap())
            })
            .collect();
        exact.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut clusters: Vec<(f64, f64)> = oracle.clusters.iter().map(|k| (k.center.re, k.mass)).collect();
        clusters.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (e, k) in exact.iter().zip(&clusters) {
            if (e.0 - k.0).abs() > 1e-9 || (e.1 - k.1).abs() > 1e-12 {
                return Err(format!("n = {n}: atom {e:?} vs cluster {k:?}"));
            }
        }
    }
    let h3 = shannon_entropy(&level_at(c.poly(), &nu, 3, DEFAULT_BUDGET).unwrap());
    let report = growth_sequences(c.poly(), &nu, 16, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let doubling_ok = (1..=8).all(|n| {
        let (a, b) = (report.row(n).unwrap(), report.row(2 * n).unwrap());
        b.h_over_n <= a.h_over_n + 1e-12 && b.log2_supp_over_n <= a.log2_supp_over_n + 1e-12
    });
    check(
        h3 == 2.75 && doubling_ok,
        format!("oracle agrees for n <= 12, H(3) = {h3}, doubling monotone through 16: {doubling_ok}"),
    )
}

fn sandwich() -> Outcome {
    let corpus: [(&str, &[i64]); 12] = [
        ("2x - 1", &[-1, 2]),
        ("x^2 + x - 1", &[-1, 1, 1]),
        ("x^2 - x - 1", &[-1, -1, 1]),
        ("x^2 - 2x - 1", &[-1, -2, 1]),
        ("x^2 + 2x - 2", &[-2, 2, 1]),
        ("3x - 1", &[-1, 3]),
        ("x^3 - x - 1", &[-1, -1, 0, 1]),
        ("x^3 - x^2 - 1", &[-1, 0, -1, 1]),
        ("x^3 + x^2 - 1", &[-1, 0, 1, 1]),
        ("100x - 99", &[-99, 100]),
        ("Lehmer", &[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]),
        ("Mercat", &[1, 1, 1, -1, 1, 1, 1]),
    ];
    let nu = StepDistribution::fair_coin();
    let mut worst = f64::INFINITY;
    for (name, coeffs) in corpus {
        let c = ctx(coeffs);
        let report = growth_sequences(c.poly(), &nu, 16, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let lower = 0.44 * c.mahler().hi.log2().min(1.0);
        let upper = report.row(16).ok_or("truncated")?.h_over_n;
        if lower > upper + 1e-9 {
            return Err(format!("{name}: 0.44 min(1, log2 M) = {lower} > H(16)/16 = {upper}"));
        }
        worst = worst.min(upper - lower);
    }
    Ok(format!("12 polynomials, smallest margin H(16)/16 - 0.44 min(1, log2 M) = {worst:.6}"))
}

fn quadrature_ground_truth() -> Outcome {
    let mut worst = 0.0f64;
    for s in [0.5, 1.0, 3.0] {
        let h = gaussian_entropy_by_quadrature(s, DEFAULT_QUAD_TOL).map_err(|e| e.to_string())?;
        worst = worst.max((h.value - gaussian_entropy(s)).abs());
    }
    let q = SmoothedQuery::new(StepDistribution::fair_coin(), 50.0, 1.0).unwrap();
    let h = mixture_entropy(&q, DEFAULT_QUAD_TOL).map_err(|e| e.to_string())?;
    let limit = (h.value - gaussian_entropy(1.0) - 1.0).abs();
    check(
        worst <= 1e-9 && limit <= 1e-6,
        format!("Gaussian error {worst:.2e}, t = 50 limit error {limit:.2e}"),
    )
}

fn phi_properties() -> Outcome {
    let nu = StepDistribution::fair_coin();
    let search = PhiSearch::default();
    let est = |a: f64| phi(&nu, a, &search).map(|c| c.upper_hint).map_err(|e| e.to_string());
    let near_one = est(1.0 + 1e-3)?;
    let grid: Vec<f64> = (0..16).map(|i| 1.1 + 2.9 * i as f64 / 15.0).collect();
    let values = grid.iter().map(|&a| est(a)).collect::<Result<Vec<_>, _>>()?;
    let monotone = values.windows(2).all(|w| w[1] >= w[0] - 4.0 * search.quad_tol);
    let mut doubling = true;
    for a in [1.2, 1.41, 1.5] {
        doubling &= est(a * a)? <= 2.0 * est(a)? + 1e-6;
    }
    check(
        near_one <= 0.01 && monotone && doubling,
        format!("Phi(1.001) = {near_one:.3e}, monotone on [1.1, 4]: {monotone}, Phi(a^2) <= 2 Phi(a): {doubling}"),
    )
}

fn singularity() -> Outcome {
    let golden = fourier_certificate(&ctx(&[-1, 1, 1]), 200).map_err(|e| e.to_string())?;
    let mercat = fourier_certificate(&ctx(&[1, 1, 1, -1, 1, 1, 1]), 200);
    check(
        golden.certified_c > 0.0 && mercat == Err(Error::CircleRootPresent),
        format!(
            "golden certified_c = {:.6e} at N = {}; Mercat: {:?}",
            golden.certified_c,
            golden.n,
            mercat.err()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("constant reproduction", cconst_reproduction),
        ("Mercat example", mercat_example),
        ("dyadic exactness", dyadic_exactness),
        ("golden oracle equivalence", golden_oracle),
        ("entropy sandwich", sandwich),
        ("quadrature ground truth", quadrature_ground_truth),
        ("Phi properties", phi_properties),
        ("singularity certificate", singularity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(msg) => println!("PASS {}. {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}. {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
