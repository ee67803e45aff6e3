//! The absolute quadric `ℱ` of a form on `V`, the cone `ℱ↑` of its lift on
//! `F×V*`, and the check that `ℱ↑` consists of the annihilators of the
//! hyperplanes of `P(F×V)` through tangent spaces of `ℱ`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::field::FieldSpec;
use crate::homog::{lift, HomogModel};
use crate::matrix::{all_vectors, is_zero_vector, Mat, Vector};
use crate::quadform::QForm;
use crate::report::Report;
use crate::transvect::render_vector;

/// Canonical representative of the projective point `F·v`: the first
/// non-zero coordinate is scaled to 1.
pub fn normalize_point(v: &[crate::field::Scalar]) -> Option<Vector> {
    let lead = v.iter().find(|c| !c.is_zero())?;
    let inv = lead.inv().ok()?;
    Some(v.iter().map(|c| &inv * c).collect())
}

/// All projective points of `P(Fⁿ)`, in enumeration order.
pub fn projective_points(field: FieldSpec, n: usize) -> Result<Vec<Vector>> {
    Ok(all_vectors(field, n)?
        .into_iter()
        .filter(|v| !is_zero_vector(v) && normalize_point(v).as_deref() == Some(v.as_slice()))
        .collect())
}

/// The points `F·x` with `x ≠ o` and `Q(x) = 0`.
pub fn quadric_points(q: &QForm) -> Result<Vec<Vector>> {
    let mut out = Vec::new();
    for p in projective_points(q.field(), q.dim())? {
        if q.eval(&p)?.is_zero() {
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadricStatus {
    Verified,
    EmptyQuadric,
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadricReport {
    pub status: QuadricStatus,
    pub quadric: Vec<String>,
    pub cone: Vec<String>,
    pub report: Report,
}

/// Compares `ℱ↑ \ {F(1,o*)}` with the set of annihilators `F(a0, a*)` of
/// hyperplanes `a0·x0 + a*(x) = 0` of `P(F×V)` that contain the tangent space
/// `{0} × x^⊥` of `ℱ` at some point `F(0,x)`, the vertex removed on both sides.
pub fn quadric_duality_check(q: &QForm) -> Result<QuadricReport> {
    let (field, n) = (q.field(), q.dim());
    let mut report = Report::new(format!("quadric duality for {q} over {field}"));
    let skipped = |reason: &str, report: Report| QuadricReport {
        status: QuadricStatus::Skipped(reason.to_string()),
        quadric: Vec::new(),
        cone: Vec::new(),
        report,
    };
    if !field.enumerable() {
        return Ok(skipped("field is not enumerable", report));
    }
    if field.characteristic() == 2 {
        return Ok(skipped("characteristic 2 is not covered", report));
    }
    if n < 2 {
        return Ok(skipped("needs dim V >= 2", report));
    }
    let polar = q.polar();
    if !polar.is_nondegenerate() {
        return Ok(skipped("polar form is degenerate", report));
    }
    let quadric = quadric_points(q)?;
    if quadric.is_empty() {
        report.note("the quadric has no points");
        return Ok(QuadricReport {
            status: QuadricStatus::EmptyQuadric,
            quadric: Vec::new(),
            cone: Vec::new(),
            report,
        });
    }
    let up = lift(q)?;
    let vertex = HomogModel::new(field, n).vertex();
    let dual_points = projective_points(field, n + 1)?;

    let mut cone = BTreeSet::new();
    for p in &dual_points {
        if *p != vertex && up.eval(p)?.is_zero() {
            cone.insert(p.clone());
        }
    }

    let mut annihilators = BTreeSet::new();
    for x in &quadric {
        // tangent space {y : B(x, y) = 0}, embedded as {0} × x^⊥
        let row = Mat::from_entries(field, 1, n, polar.b.mul_vec(x)?)?;
        let tangent = row.kernel_basis();
        report.check(tangent.len() + 1 == n, || format!("tangent space at {} has wrong dimension", render_vector(x)));
        for h in &dual_points {
            let contains = tangent.iter().all(|y| crate::matrix::pairing(&h[1..], y).is_zero());
            if contains && *h != vertex {
                annihilators.insert(h.clone());
            }
        }
    }
    report.check(cone == annihilators, || {
        let only_cone: Vec<String> = cone.difference(&annihilators).map(|v| render_vector(v)).collect();
        let only_ann: Vec<String> = annihilators.difference(&cone).map(|v| render_vector(v)).collect();
        format!("cone-only points [{}], annihilator-only points [{}]", only_cone.join(" "), only_ann.join(" "))
    });
    report.note(format!("{} quadric points, {} cone points besides the vertex", quadric.len(), cone.len()));
    Ok(QuadricReport {
        status: QuadricStatus::Verified,
        quadric: quadric.iter().map(|v| render_vector(v)).collect(),
        cone: cone.iter().map(|v| render_vector(v)).collect(),
        report,
    })
}
