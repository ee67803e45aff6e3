//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
//! status if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use metric_affine::classify::projective::verify_projective_theorem;
use metric_affine::classify::quadric::{quadric_duality_check, QuadricStatus};
use metric_affine::classify::tables::{reproduce_table, TableCase};
use metric_affine::classify::{verify_main_prop, verify_theorem};
use metric_affine::groups::{reflection_generation_status, ExceptionalShape};
use metric_affine::homog::{drop, lift, roundtrip_checks, verify_reflections};
use metric_affine::quadform::enumerate_forms;
use metric_affine::transvect::verify_lemmas;
use metric_affine::{Budget, FieldSpec, Mat, QForm, Report, Result};

fn gf(p: u8) -> FieldSpec {
    FieldSpec::Prime(p)
}

fn tables() -> Result<Report> {
    let mut r = Report::new("tables");
    let cases = [
        (TableCase::T1, gf(2)),
        (TableCase::T1, FieldSpec::Gf4),
        (TableCase::T2, gf(2)),
        (TableCase::T3, gf(3)),
        (TableCase::T4, gf(2)),
    ];
    for (case, field) in cases {
        let t = reproduce_table(case.dim(), field, Budget::default())?;
        r.check(t.expected_match, || format!("{case:?} over {field}: blocks differ from the fixture"));
        r.merge(t.report);
        if !t.errata.is_empty() {
            r.note(format!("{case:?}: {} printed entries corrected", t.errata.len()));
        }
    }
    Ok(r)
}

fn main_prop() -> Result<Report> {
    let mut r = Report::new("motion groups of lifted forms");
    for (field, n) in [(gf(2), 1), (gf(2), 2), (gf(2), 3), (gf(3), 1), (gf(3), 2), (gf(5), 1)] {
        r.merge(verify_main_prop(field, n, Budget::default())?);
    }
    Ok(r)
}

fn theorem() -> Result<Report> {
    let mut r = Report::new("dyad solutions are lift multiples");
    for (field, n) in [(FieldSpec::Gf4, 1), (gf(5), 1), (gf(3), 2)] {
        r.merge(verify_theorem(field, n, Budget::default())?);
    }
    Ok(r)
}

/// Runs the direction/annihilator/scaled checks once and splits the failures
/// between the cardinality criterion and the membership criterion.
fn lemmas() -> Result<(Report, Report)> {
    let mut sizes = Report::new("transvection group orders");
    let mut membership = Report::new("transvection membership");
    let mut runs = Vec::new();
    for field in [gf(2), gf(3)] {
        for n in 1..=3 {
            runs.push(verify_lemmas(field, n)?);
        }
    }
    for n in 1..=2 {
        runs.push(verify_lemmas(gf(5), n)?);
    }
    for run in runs {
        sizes.checked += run.checked;
        membership.checked += run.checked;
        for f in run.failures {
            if f.starts_with("direction sizes") {
                sizes.failures.push(f);
            } else {
                membership.failures.push(f);
            }
        }
    }
    Ok((sizes, membership))
}

fn roundtrips() -> Result<Report> {
    let mut r = Report::new("lift/drop round trips");
    for field in [gf(2), gf(3)] {
        for n in 0..=3 {
            r.merge(roundtrip_checks(field, n)?);
        }
    }
    let q = FieldSpec::Rational;
    for diag in [vec![1i64, 2, -3], vec![5, -1], vec![7], vec![-2, 3, 4, 11]] {
        let n = diag.len();
        let w = Mat::diag(q, &diag.iter().map(|&d| q.from_int(d)).collect::<Vec<_>>());
        let form = QForm::from_matrix(&w)?;
        let up = lift(&form)?;
        let expected = QForm::from_matrix(&Mat::block_diag(&Mat::zeros(q, 1, 1), &w.invert()?)?)?;
        r.check(up.scale(&q.from_int(4)) == expected, || format!("4*lift({form}) != diag(0, W^-1)"));
        r.check(drop(&up)? == form, || format!("rational round trip fails for {form}"));
        r.check(up.dim() == n + 1, || "lift has the wrong dimension".into());
    }
    let mixed = QForm::from_matrix(&Mat::from_entries(
        q,
        2,
        2,
        vec![q.from_int(1), q.parse_scalar("3/2")?, q.zero(), q.from_int(-2)],
    )?)?;
    r.check(drop(&lift(&mixed)?)? == mixed, || format!("rational round trip fails for {mixed}"));
    Ok(r)
}

fn reflections() -> Result<Report> {
    let mut r = Report::new("reflections");
    for n in 1..=2 {
        r.merge(verify_reflections(gf(3), n)?);
    }
    let mut exceptional = 0;
    for n in 0..=4 {
        for form in enumerate_forms(gf(2), n)? {
            let s = reflection_generation_status(&form, Budget::default())?;
            if s.shape.is_some() {
                exceptional += 1;
            }
            r.check(s.agrees(), || format!("{form}: generates = {}, shape = {:?}", s.generates, s.shape));
        }
    }
    let x1x2 = QForm::from_ints(gf(2), 3, &[0, 1, 0, 0, 0, 0])?;
    let s = reflection_generation_status(&x1x2, Budget::default())?;
    r.check(s.shape == Some(ExceptionalShape::HyperbolicPlane) && s.closure_order < s.weak_order, || {
        format!("x1*x2 in dim 3: closure {} of {}", s.closure_order, s.weak_order)
    });
    r.note(format!("{exceptional} exceptional forms over GF(2), dims 0-4"));
    Ok(r)
}

fn projective() -> Result<Report> {
    let mut r = Report::new("projective groups");
    for field in [gf(2), gf(3)] {
        for n in 0..=2 {
            r.merge(verify_projective_theorem(field, n, Budget::default())?);
        }
    }
    Ok(r)
}

fn quadrics() -> Result<Report> {
    let mut r = Report::new("quadric duality");
    let mut verified = 0;
    for field in [gf(3), gf(5)] {
        for n in 2..=3 {
            for form in enumerate_forms(field, n)?.filter(QForm::is_nondegenerate) {
                let q = quadric_duality_check(&form)?;
                match q.status {
                    QuadricStatus::Verified => verified += 1,
                    QuadricStatus::EmptyQuadric => {}
                    QuadricStatus::Skipped(why) => r.check(false, || format!("{form} skipped: {why}")),
                }
                r.checked += q.report.checked;
                r.failures.extend(q.report.failures);
            }
        }
    }
    r.note(format!("{verified} non-empty quadrics"));
    Ok(r)
}

fn run(label: &str, limit: Duration, body: impl FnOnce() -> Result<Report>) -> bool {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    match outcome {
        Ok(report) => {
            let ok = report.passed();
            let status = if ok { "PASS" } else { "FAIL" };
            let slow = if elapsed > limit { format!(" (over the {}s target)", limit.as_secs()) } else { String::new() };
            println!(
                "{status} {label}: {} checks, {} failures, {:.2}s{slow}",
                report.checked,
                report.failures.len(),
                elapsed.as_secs_f64()
            );
            for n in report.notes.iter().take(12) {
                println!("    note: {n}");
            }
            for f in report.failures.iter().take(10) {
                println!("    failure: {f}");
            }
            ok
        }
        Err(e) => {
            println!("FAIL {label}: error: {e}");
            false
        }
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut ok = true;
    ok &= run("1 table reproduction", secs(10), tables);
    ok &= run("2 motion group of a lift", secs(60), main_prop);
    ok &= run("3 solutions are lift multiples", secs(120), theorem);
    let lemma_start = Instant::now();
    let split = lemmas();
    let lemma_time = lemma_start.elapsed();
    match split {
        Ok((sizes, membership)) => {
            ok &= run("4 transvection group orders", secs(30) + lemma_time, || Ok(sizes));
            ok &= run("5 transvection membership", secs(30), || Ok(membership));
            println!("    note: criteria 4 and 5 share one sweep of {:.2}s", lemma_time.as_secs_f64());
        }
        Err(e) => {
            println!("FAIL 4 transvection group orders: error: {e}");
            println!("FAIL 5 transvection membership: error: {e}");
            ok = false;
        }
    }
    ok &= run("6 lift/drop round trips", secs(60), roundtrips);
    ok &= run("7 reflections", secs(120), reflections);
    ok &= run("8 projective groups", secs(60), projective);
    ok &= run("9 quadric duality", secs(10), quadrics);
    if ok {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
