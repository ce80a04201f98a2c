//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Each check is timed against its budget.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::oracle::{oracle_feasible, random_instance};
use contextuality::bbmodel::{
    bb_meas_noncontextuality_property, bb_prep_contextuality_demo, bb_simulate, BBPreparation,
};
use contextuality::cli;
use contextuality::figure::bloch_figure_svg;
use contextuality::kraus::{pad_with_zeros, random_unitary, remix_kraus};
use contextuality::nogo::{
    gleason_named, od_unsharp_contradiction, pointwise_feasibility, transf_nogo, trivial_povm_forced_indicator,
    Certificate, Conclusion, Verdict,
};
use contextuality::ontomodel::{outcome_determinism_from_prep_nc, Distribution, IndicatorSet, OdStep, OntModel};
use contextuality::operational::{projection_channel, pvm, sigma, MIXED_DECOMPOSITIONS};
use contextuality::qmath::{choi_deviation, CMatrix};
use contextuality::rational::{ratio, Coeff};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let mut argv = vec!["contextuality"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut errs);
    String::from_utf8(out).map(|s| (code, s)).map_err(err)
}

fn orthogonality() -> Check {
    let mut worst = 0.0f64;
    for (p, q) in [("a", "A"), ("b", "B"), ("c", "C")] {
        let (x, y) = (sigma(p).unwrap(), sigma(q).unwrap());
        worst = worst.max((x.matrix() * y.matrix()).max_abs());
    }
    ensure(worst <= 1e-12, format!("max |σσ′| entry {worst:e}"))?;
    Ok(format!("max product entry {worst:.1e}"))
}

fn decompositions() -> Check {
    let half = CMatrix::identity(2).scale_real(0.5);
    let mut worst = 0.0f64;
    for (name, parts) in MIXED_DECOMPOSITIONS {
        let sum = parts.iter().fold(CMatrix::zeros(2), |acc, &(n, d, s)| {
            &acc + &sigma(s).unwrap().matrix().scale_real(n as f64 / d as f64)
        });
        let dev = sum.max_abs_diff(&half);
        ensure(dev <= 1e-12, format!("{name} deviates by {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("5 mixtures, max deviation {worst:.1e}"))
}

fn prep_certificate() -> Check {
    let (code, doc) = run_cli(&["nogo", "prep"])?;
    ensure(code == cli::EXIT_OK, format!("exit code {code}"))?;
    let cert: Certificate = serde_json::from_str(&doc).map_err(err)?;
    ensure(cert.verdict == Verdict::Infeasible, "verdict is not Infeasible")?;
    ensure(cert.cases.len() == 8, format!("{} case rows", cert.cases.len()))?;
    ensure(
        cert.cases.iter().all(|r| r.conclusion == Conclusion::AllZero),
        "a row does not force the all-zero solution",
    )?;
    let reduction = "½c = ⅓c ⇒ c = 0";
    ensure(
        cert.cases.iter().any(|r| r.derivation.iter().any(|l| l == reduction)),
        format!("no row derives `{reduction}`"),
    )?;
    Ok("8 rows, all-zero in each".into())
}

fn meas_certificate() -> Check {
    let (code, doc) = run_cli(&["nogo", "meas"])?;
    ensure(code == cli::EXIT_OK, format!("exit code {code}"))?;
    let cert: Certificate = serde_json::from_str(&doc).map_err(err)?;
    ensure(cert.verdict == Verdict::Infeasible, "verdict is not Infeasible")?;
    ensure(cert.cases.len() == 8, format!("{} assignments", cert.cases.len()))?;
    let q = |n, d| Coeff(ratio(n, d));
    let allowed = [
        vec![q(0, 1), q(1, 1)],
        vec![q(1, 1), q(0, 1)],
        vec![q(2, 3), q(1, 3)],
        vec![q(1, 3), q(2, 3)],
    ];
    let half = vec![q(1, 2), q(1, 2)];
    for row in &cert.cases {
        let Conclusion::Mixed { values } = &row.conclusion else {
            return Err("row without mixed values".into());
        };
        ensure(allowed.contains(values), format!("unexpected values {values:?}"))?;
        ensure(*values != half, "a row reproduces (½, ½)")?;
    }
    let forced = trivial_povm_forced_indicator().map_err(err)?;
    ensure(
        forced.by_independence == half && forced.by_symmetry == half,
        "forced representation is not (½, ½) by both derivations",
    )?;
    Ok("8 assignments, none equal (½, ½); forced (½, ½) twice".into())
}

fn transf_certificate() -> Check {
    let cert = transf_nogo().map_err(err)?;
    ensure(cert.verdict == Verdict::Infeasible, "verdict is not Infeasible")?;
    let choi: Vec<_> = cert.premise_checks.iter().filter(|c| c.name.contains("Choi")).collect();
    ensure(choi.len() == 5, format!("{} Choi checks", choi.len()))?;
    let grid: Vec<_> = cert
        .premise_checks
        .iter()
        .filter(|c| c.name.contains("36 z–x states"))
        .collect();
    ensure(grid.len() == 3, format!("{} orthogonality grids", grid.len()))?;
    let worst = choi.iter().chain(&grid).map(|c| c.max_deviation).fold(0.0, f64::max);
    ensure(worst <= 1e-12, format!("premise deviation {worst:e}"))?;
    Ok(format!("K1–K5 and 3 grids within {worst:.1e}, system Infeasible"))
}

fn gleason() -> Check {
    let r = gleason_named("a", "b", 1e-12).map_err(err)?;
    ensure(
        (r.chi_p_prime - 0.25).abs() <= 1e-12,
        format!("χ_P′ = {}", r.chi_p_prime),
    )?;
    ensure(
        r.chi_p_prime > 0.0 && r.chi_p_prime < 1.0 && r.contradiction,
        "not fractional",
    )?;
    Ok(format!("χ_P′ = {}", r.chi_p_prime))
}

fn od_unsharp() -> Check {
    let r = od_unsharp_contradiction().map_err(err)?;
    ensure(
        r.forced_indicator == vec![Coeff(ratio(1, 2)); 2],
        "forced indicator is not (½, ½)",
    )?;
    ensure(!r.outcome_deterministic && r.contradiction, "idempotence did not fail")?;
    Ok("(½, ½) is not idempotent".into())
}

fn od_derivation() -> Check {
    let mut two = OntModel::new(2).map_err(err)?;
    two.add_preparation("a", Distribution::point_mass(2, 0)).map_err(err)?;
    two.add_preparation("A", Distribution::point_mass(2, 1)).map_err(err)?;
    two.add_preparation("I/2", Distribution::new(vec![0.5, 0.5], 1e-12).map_err(err)?)
        .map_err(err)?;
    two.add_measurement("M_a", IndicatorSet::deterministic(2, &[0, 1]).map_err(err)?)
        .map_err(err)?;
    let good = outcome_determinism_from_prep_nc(&two, "M_a", &["a", "A"], "I/2", 2, 1e-12).map_err(err)?;
    ensure(
        good.steps.len() == 4 && good.passed(),
        format!("two-point model: {:?}", good.first_failure),
    )?;

    // Rays a, A, b, B with I/2 prepared as ½b + ½B: the mixture of the
    // a-preparations does not match, and M_a is fractional on b and B.
    let mut bb = OntModel::new(4).map_err(err)?;
    bb.add_preparation("a", Distribution::point_mass(4, 0)).map_err(err)?;
    bb.add_preparation("A", Distribution::point_mass(4, 1)).map_err(err)?;
    bb.add_preparation("I/2", Distribution::new(vec![0.0, 0.0, 0.5, 0.5], 1e-12).map_err(err)?)
        .map_err(err)?;
    bb.add_measurement(
        "M_a",
        IndicatorSet::new(vec![vec![1.0, 0.0, 0.25, 0.75], vec![0.0, 1.0, 0.75, 0.25]], 1e-12).map_err(err)?,
    )
    .map_err(err)?;
    let bad = outcome_determinism_from_prep_nc(&bb, "M_a", &["a", "A"], "I/2", 2, 1e-12).map_err(err)?;
    ensure(
        bad.first_failure == Some(OdStep::SupportsCoverSpace),
        format!("fractional model first failure {:?}", bad.first_failure),
    )?;
    Ok("two-point model passes; fractional model fails at SupportsCoverSpace".into())
}

fn bb_model() -> Check {
    let n = 100_000;
    for (prep, povm) in [("a", "a"), ("1/2*a + 1/2*A", "b"), ("b", "a")] {
        let p = BBPreparation::parse(prep).map_err(err)?;
        let r = bb_simulate(&p, &pvm(povm).unwrap(), n, 2024).map_err(err)?;
        ensure(
            r.within_bounds,
            format!("{prep} on M_{povm}: {:?} vs {:?}", r.frequencies, r.born),
        )?;
    }
    let demo = bb_prep_contextuality_demo().map_err(err)?;
    ensure(
        demo.prep_equivalent && demo.support_overlap == 0 && demo.preparation_contextual,
        "demo supports are not disjoint",
    )?;
    let mnc = bb_meas_noncontextuality_property(100, 2024).map_err(err)?;
    ensure(
        mnc.max_deviation <= 1e-12,
        format!("indicator gap {:e}", mnc.max_deviation),
    )?;
    Ok(format!(
        "3 configs within 4σ, disjoint demo, gap {:.1e}",
        mnc.max_deviation
    ))
}

fn oracle_agreement() -> Check {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let total = 240;
    let mut infeasible = 0;
    for i in 0..total {
        let inst = random_instance(&mut rng);
        let got = pointwise_feasibility(&inst.to_system()).map_err(err)?.verdict;
        let want = oracle_feasible(&inst);
        ensure(
            (got == Verdict::Feasible) == want,
            format!("instance {i} disagrees: certifier {got:?}, oracle feasible {want}"),
        )?;
        infeasible += usize::from(!want);
    }
    Ok(format!("{total} systems agree ({infeasible} infeasible)"))
}

fn kraus_remix() -> Check {
    let t = projection_channel();
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = rng.random_range(2..=6);
        let u = random_unitary(m, &mut rng);
        let x = remix_kraus(&pad_with_zeros(&t, m).map_err(err)?, &u).map_err(err)?;
        let dev = choi_deviation(&x, &t).map_err(err)?;
        ensure(dev <= 1e-10, format!("Choi deviation {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("100 remixes, max Choi deviation {worst:.1e}"))
}

fn figure() -> Check {
    let svg = bloch_figure_svg().map_err(err)?;
    let doc = roxmltree::Document::parse(&svg).map_err(err)?;
    let count = |tag: &str, class: &str| {
        doc.descendants()
            .filter(|n| n.tag_name().name() == tag && n.attribute("class") == Some(class))
            .count()
    };
    let got = (
        count("circle", "state"),
        count("line", "decomposition"),
        count("polygon", "decomposition"),
        count("circle", "center"),
    );
    ensure(got == (6, 3, 2, 1), format!("counts {got:?}"))?;
    Ok("6 states, 3 segments, 2 triangles, 1 center".into())
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let criteria: [(&str, Duration, fn() -> Check); 12] = [
        ("orthogonal pairs", ms(1), orthogonality),
        ("decompositions of I/2", ms(1), decompositions),
        ("preparation no-go", ms(1000), prep_certificate),
        ("measurement no-go", ms(1000), meas_certificate),
        ("transformation no-go", ms(5000), transf_certificate),
        ("fractional forced indicator", ms(1), gleason),
        ("unsharp outcome determinism", ms(1), od_unsharp),
        ("outcome determinism derivation", ms(10), od_derivation),
        ("ray-valued model", ms(10_000), bb_model),
        ("oracle agreement", ms(60_000), oracle_agreement),
        ("Kraus remixing", ms(5000), kraus_remix),
        ("Bloch figure", ms(100), figure),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let line = match result {
            Ok(detail) if elapsed <= *budget => format!("PASS {detail} in {elapsed:.2?}"),
            Ok(detail) => format!("FAIL {detail} but took {elapsed:.2?} (budget {budget:?})"),
            Err(why) => format!("FAIL {why}"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("criterion {:>2} ({name}): {line}", i + 1);
    }
    if failed == 0 {
        println!("all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
