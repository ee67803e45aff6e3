//! Exhaustive searches for pairs `(Q, Q̃)` of a form on `V` and a form on
//! `F×V*` whose groups match under `β`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::groups::{weak_orthogonal_group, Budget, GroupSet};
use crate::homog::{lift, motion_group_beta};
use crate::quadform::{enumerate_forms, QForm};
use crate::report::Report;

pub mod projective;
pub mod quadric;
pub mod tables;

/// Which affine group is compared with `O′(F×V*, Q̃)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `AO(V,Q)^β = O′(F×V*, Q̃)`
    Motion,
    /// `AO′(V,Q)^β = O′(F×V*, Q̃)`
    WeakMotion,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::Motion, Mode::WeakMotion];

    fn weak(self) -> bool {
        self == Mode::WeakMotion
    }
}

fn check_dims(q: &QForm, qt: &QForm) -> Result<()> {
    crate::matrix::same_field(q.field(), qt.field())?;
    if qt.dim() != q.dim() + 1 {
        return Err(Error::DimensionMismatch { expected: q.dim() + 1, got: qt.dim() });
    }
    Ok(())
}

pub fn dyad_satisfies(q: &QForm, qt: &QForm, mode: Mode, budget: Budget) -> Result<bool> {
    check_dims(q, qt)?;
    let motions = motion_group_beta(q, mode.weak(), budget)?;
    Ok(motions == weak_orthogonal_group(qt, budget)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DyadReport {
    pub q: String,
    pub qt: String,
    pub satisfies_motion: bool,
    pub satisfies_weak: bool,
    /// `c` with `Q̃ = c·Q↑`, when `Q↑` exists and `Q̃` is a multiple of it.
    pub is_lift_of: Option<String>,
}

pub fn dyad_report(q: &QForm, qt: &QForm, budget: Budget) -> Result<DyadReport> {
    check_dims(q, qt)?;
    let weak_qt = weak_orthogonal_group(qt, budget)?;
    let satisfies_motion = motion_group_beta(q, false, budget)? == weak_qt;
    let satisfies_weak = motion_group_beta(q, true, budget)? == weak_qt;
    let is_lift_of = match lift(q) {
        Ok(up) => qt.proportional(&up)?.map(|c| c.to_string()),
        Err(Error::DegeneratePolarForm { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(DyadReport {
        q: q.render(crate::quadform::Vars::X),
        qt: qt.render(crate::quadform::Vars::A),
        satisfies_motion,
        satisfies_weak,
        is_lift_of,
    })
}

/// Every form on `F×V*` (dim `n+1`), grouped by its weak orthogonal group,
/// so that all `Q̃` solving a dyad for a given `Q` are found with one lookup.
pub struct DyadIndex {
    field: FieldSpec,
    n: usize,
    budget: Budget,
    by_group: HashMap<GroupSet, Vec<QForm>>,
}

impl DyadIndex {
    pub fn build(field: FieldSpec, n: usize, budget: Budget) -> Result<Self> {
        budget.check_matrices(field, n + 1)?;
        let forms: Vec<QForm> = enumerate_forms(field, n + 1)?.collect();
        let groups: Vec<GroupSet> =
            forms.par_iter().map(|qt| weak_orthogonal_group(qt, budget)).collect::<Result<_>>()?;
        let mut by_group: HashMap<GroupSet, Vec<QForm>> = HashMap::new();
        for (qt, g) in forms.into_iter().zip(groups) {
            by_group.entry(g).or_default().push(qt);
        }
        Ok(DyadIndex { field, n, budget, by_group })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// All forms `Q̃` with `O′(F×V*, Q̃) = g`, in enumeration order.
    pub fn with_weak_group(&self, g: &GroupSet) -> &[QForm] {
        self.by_group.get(g).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn groups(&self) -> impl Iterator<Item = (&GroupSet, &Vec<QForm>)> {
        self.by_group.iter()
    }

    pub fn solutions(&self, q: &QForm, mode: Mode) -> Result<Vec<QForm>> {
        if q.field() != self.field || q.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: q.dim() });
        }
        let motions = motion_group_beta(q, mode.weak(), self.budget)?;
        Ok(self.with_weak_group(&motions).to_vec())
    }
}

/// All `Q̃` with `dyad_satisfies(Q, Q̃, mode)`, in enumeration order.
pub fn solve_for_qtilde(q: &QForm, mode: Mode, budget: Budget) -> Result<Vec<QForm>> {
    DyadIndex::build(q.field(), q.dim(), budget)?.solutions(q, mode)
}

/// Whether `(dim V, F)` avoids the exceptional cases where `Q̃` need not be a
/// multiple of `Q↑`: `dim 0` in characteristic 2, `dim 1` with `|F| ≤ 3`,
/// `dim 2` with `|F| = 2`.
pub fn theorem_applies(field: FieldSpec, n: usize) -> bool {
    let q = field.order().unwrap_or(usize::MAX);
    !matches!((n, field.characteristic(), q), (0, 2, _) | (1, _, 2..=3) | (2, _, 2))
}

/// `{c·Q↑ : c ∈ F^×}` sorted, or empty when `Q↑` does not exist.
pub fn lift_multiples(q: &QForm) -> Result<Vec<QForm>> {
    let up = match lift(q) {
        Ok(up) => up,
        Err(Error::DegeneratePolarForm { .. }) => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mut out: Vec<QForm> = q.field().units()?.iter().map(|c| up.scale(c)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// For every non-degenerate `Q` on `Fⁿ` and every `c ∈ F^×`, checks
/// `AO(V,Q)^β = O′(F×V*, c·Q↑)`.
pub fn verify_main_prop(field: FieldSpec, n: usize, budget: Budget) -> Result<Report> {
    budget.check_matrices(field, n + 1)?;
    let forms: Vec<QForm> = enumerate_forms(field, n)?.filter(QForm::is_nondegenerate).collect();
    let units: Vec<Scalar> = field.units()?;
    let parts: Vec<Result<Report>> = forms
        .par_iter()
        .map(|q| {
            let mut r = Report::default();
            let motions = motion_group_beta(q, false, budget)?;
            let up = lift(q)?;
            for c in &units {
                let qt = up.scale(c);
                let ok = motions == weak_orthogonal_group(&qt, budget)?;
                r.check(ok, || {
                    format!("AO^beta != O'(c*Q^): Q = {q}, c = {c}, Qt = {}", qt.render(crate::quadform::Vars::A))
                });
            }
            Ok(r)
        })
        .collect();
    let mut report = Report::new(format!("motion group vs lifted form over {field}, dim {n}"));
    for p in parts {
        report.merge(p?);
    }
    report.note(format!("{} non-degenerate forms x {} scalars", forms.len(), units.len()));
    Ok(report)
}

/// Solves both dyad equations for every `Q` on `Fⁿ` by exhaustive search over
/// all forms on `F×V*`; outside the exceptional cases every solution must be
/// `c·Q↑` with `Q` non-degenerate, and every `c·Q↑` must be a solution.
pub fn verify_theorem(field: FieldSpec, n: usize, budget: Budget) -> Result<Report> {
    let index = DyadIndex::build(field, n, budget)?;
    let forms: Vec<QForm> = enumerate_forms(field, n)?.collect();
    let applies = theorem_applies(field, n);
    let parts: Vec<Result<(Report, usize)>> = forms
        .par_iter()
        .map(|q| {
            let mut r = Report::default();
            let expected = lift_multiples(q)?;
            let mut found = 0;
            for mode in Mode::BOTH {
                let mut sols = index.solutions(q, mode)?;
                sols.sort();
                found += sols.len();
                if applies {
                    r.check(sols.is_empty() || q.is_nondegenerate(), || {
                        format!("{mode:?}: Q = {q} is degenerate but has {} solutions", sols.len())
                    });
                    r.check(sols == expected, || {
                        let got: Vec<String> = sols.iter().map(|s| s.render(crate::quadform::Vars::A)).collect();
                        format!("{mode:?}: Q = {q}: solutions [{}] are not the multiples of Q^", got.join(", "))
                    });
                }
            }
            Ok((r, found))
        })
        .collect();
    let mut report = Report::new(format!("dyad solutions over {field}, dim {n}"));
    let mut total = 0;
    for p in parts {
        let (r, found) = p?;
        report.merge(r);
        total += found;
    }
    let candidates = enumerate_forms(field, n + 1)?.len();
    report.note(format!("{} forms Q x {candidates} candidates Qt, {total} solutions over both modes", forms.len()));
    if !applies {
        report.note(format!("dim {n} over {field} is an exceptional case; solutions are listed, not constrained"));
    }
    Ok(report)
}
