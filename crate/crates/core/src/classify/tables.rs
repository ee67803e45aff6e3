//! The four small cases `(dim V, F)` in which solutions of the dyad equations
//! are not all multiples of a lift: the complete solution sets, arranged as
//! blocks and rows, compared with embedded reference tables.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::formfile::parse_poly;
use crate::groups::{enumerate_gl, orthogonal_group, weak_orthogonal_group, Budget, GroupSet};
use crate::homog::{drop, lift};
use crate::matrix::Vector;
use crate::quadform::{enumerate_forms, QForm, Vars};
use crate::report::Report;

use super::{DyadIndex, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableCase {
    /// `dim V = 0`, characteristic 2
    T1,
    /// `dim V = 1`, `|F| = 2`
    T2,
    /// `dim V = 1`, `|F| = 3`
    T3,
    /// `dim V = 2`, `|F| = 2`
    T4,
}

impl TableCase {
    pub const ALL: [TableCase; 4] = [TableCase::T1, TableCase::T2, TableCase::T3, TableCase::T4];

    pub fn dim(self) -> usize {
        match self {
            TableCase::T1 => 0,
            TableCase::T2 | TableCase::T3 => 1,
            TableCase::T4 => 2,
        }
    }

    pub fn default_field(self) -> FieldSpec {
        match self {
            TableCase::T3 => FieldSpec::Prime(3),
            _ => FieldSpec::Prime(2),
        }
    }

    pub fn for_dim_field(dim: usize, field: FieldSpec) -> Result<Self> {
        match (dim, field) {
            (0, FieldSpec::Prime(2) | FieldSpec::Gf4) => Ok(TableCase::T1),
            (1, FieldSpec::Prime(2)) => Ok(TableCase::T2),
            (1, FieldSpec::Prime(3)) => Ok(TableCase::T3),
            (2, FieldSpec::Prime(2)) => Ok(TableCase::T4),
            _ => Err(Error::UnsupportedTable { dim, field }),
        }
    }
}

impl std::str::FromStr for TableCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(TableCase::T1),
            "t2" => Ok(TableCase::T2),
            "t3" => Ok(TableCase::T3),
            "t4" => Ok(TableCase::T4),
            _ => Err(Error::Parse(format!("unknown table `{s}` (expected t1, t2, t3 or t4)"))),
        }
    }
}

/// One row of a table: a form on `V`, a form on `F×V*`, or both.
type Row = (Option<QForm>, Option<QForm>);

/// A reference table: blocks of rows in printed order.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub blocks: Vec<Vec<Row>>,
    /// Left-hand entries whose weak motion group is a proper subgroup of the
    /// motion group.
    pub proper_weak: Vec<QForm>,
    /// Corrections applied to the printed table.
    pub errata: Vec<Erratum>,
}

/// Swap of the right-hand entries of two printed rows, as `(block, row)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Erratum {
    pub first: (usize, usize),
    pub second: (usize, usize),
}

fn printed_rows(case: TableCase) -> Vec<Vec<(Option<&'static str>, Option<&'static str>)>> {
    match case {
        TableCase::T1 => vec![vec![(Some("0"), Some("0"))]],
        TableCase::T2 => vec![vec![(None, Some("a0^2+a0*a1")), (Some("0"), None), (Some("x1^2"), None)]],
        TableCase::T3 => vec![vec![(Some("x1^2"), Some("a1^2")), (Some("-x1^2"), Some("-a1^2")), (Some("0"), None)]],
        TableCase::T4 => vec![
            vec![(Some("x1^2+x1*x2+x2^2"), Some("a1^2+a1*a2+a2^2")), (Some("0"), None)],
            vec![(Some("x1*x2"), Some("a1*a2")), (Some("x1^2+x2^2"), None)],
            vec![(Some("x1^2+x1*x2"), Some("a1^2+a1*a2")), (Some("x2^2"), None)],
            vec![(Some("x1*x2+x2^2"), Some("a1*a2+a2^2")), (Some("x1^2"), None)],
        ],
    }
}

/// The table exactly as printed, before errata.
pub fn printed_fixture(case: TableCase, field: FieldSpec) -> Result<Fixture> {
    TableCase::for_dim_field(case.dim(), field).and_then(|c| {
        if c == case {
            Ok(())
        } else {
            Err(Error::UnsupportedTable { dim: case.dim(), field })
        }
    })?;
    let n = case.dim();
    let parse_row = |(q, qt): (Option<&str>, Option<&str>)| -> Result<Row> {
        Ok((
            q.map(|s| parse_poly(field, n, Vars::X, s)).transpose()?,
            qt.map(|s| parse_poly(field, n + 1, Vars::A, s)).transpose()?,
        ))
    };
    let mut blocks: Vec<Vec<Row>> = printed_rows(case)
        .into_iter()
        .map(|b| b.into_iter().map(parse_row).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    if case == TableCase::T1 {
        // second row: every non-zero w00·a0²
        for c in field.units()? {
            blocks[0].push((None, Some(QForm::new(field, 1, vec![c])?)));
        }
    }
    let proper = match case {
        TableCase::T1 | TableCase::T2 => vec![],
        TableCase::T3 => vec!["0"],
        TableCase::T4 => vec!["0", "x1^2+x2^2", "x2^2", "x1^2"],
    };
    let proper_weak = proper.into_iter().map(|s| parse_poly(field, n, Vars::X, s)).collect::<Result<_>>()?;
    let errata = match case {
        // The right-hand entries of the fifth and seventh row are interchanged:
        // (x1²+x1x2)↑ = a1a2+a2² and (x1x2+x2²)↑ = a1²+a1a2.
        TableCase::T4 => vec![Erratum { first: (2, 0), second: (3, 0) }],
        _ => vec![],
    };
    Ok(Fixture { blocks, proper_weak, errata })
}

impl Fixture {
    /// The table with all errata applied.
    pub fn corrected(&self) -> Fixture {
        let mut out = self.clone();
        for e in &self.errata {
            let a = out.blocks[e.first.0][e.first.1].1.take();
            let b = out.blocks[e.second.0][e.second.1].1.take();
            out.blocks[e.first.0][e.first.1].1 = b;
            out.blocks[e.second.0][e.second.1].1 = a;
        }
        out.errata.clear();
        out
    }
}

fn canonical(blocks: &[Vec<Row>]) -> BTreeSet<BTreeSet<Row>> {
    blocks.iter().map(|b| b.iter().cloned().collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub q: Option<String>,
    pub qt: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub case: TableCase,
    pub dim: usize,
    pub field: String,
    /// Computed blocks, arranged in the printed order when they match.
    pub blocks: Vec<Vec<TableRow>>,
    /// Rows with both entries, `(Q, Q↑)`.
    pub row_pairs: Vec<(String, String)>,
    /// Computed table equals the corrected reference table.
    pub expected_match: bool,
    /// Printed rows that had to be corrected, as `(block, row, printed, computed)`.
    pub errata: Vec<(usize, usize, String, String)>,
    pub report: Report,
}

fn row_strings((q, qt): &Row) -> TableRow {
    TableRow { q: q.as_ref().map(|f| f.render(Vars::X)), qt: qt.as_ref().map(|f| f.render(Vars::A)) }
}

/// All dyads `(Q, Q̃)` for `(dim, field)`, with the modes they satisfy.
fn all_dyads(field: FieldSpec, n: usize, budget: Budget) -> Result<Vec<(QForm, QForm, bool, bool)>> {
    let index = DyadIndex::build(field, n, budget)?;
    let mut out = Vec::new();
    for q in enumerate_forms(field, n)? {
        let motion = index.solutions(&q, Mode::Motion)?;
        let weak = index.solutions(&q, Mode::WeakMotion)?;
        let all: BTreeSet<&QForm> = motion.iter().chain(&weak).collect();
        for qt in all {
            out.push((q.clone(), qt.clone(), motion.contains(qt), weak.contains(qt)));
        }
    }
    Ok(out)
}

/// Connected components of the bipartite dyad graph, each as (lefts, rights).
fn components(dyads: &[(QForm, QForm, bool, bool)]) -> Vec<(Vec<QForm>, Vec<QForm>)> {
    let mut comps: Vec<(BTreeSet<QForm>, BTreeSet<QForm>)> = Vec::new();
    for (q, qt, _, _) in dyads {
        let hits: Vec<usize> =
            (0..comps.len()).filter(|&k| comps[k].0.contains(q) || comps[k].1.contains(qt)).collect();
        let mut merged = (BTreeSet::from([q.clone()]), BTreeSet::from([qt.clone()]));
        for &k in hits.iter().rev() {
            let (l, r) = comps.remove(k);
            merged.0.extend(l);
            merged.1.extend(r);
        }
        comps.push(merged);
    }
    let mut out: Vec<(Vec<QForm>, Vec<QForm>)> =
        comps.into_iter().map(|(l, r)| (l.into_iter().collect(), r.into_iter().collect())).collect();
    out.sort();
    out
}

/// `Q↑` for `Q = w11 x1² + x1x2 + w22 x2²` in characteristic 2, read off the
/// coordinate formula `W↑ = diag(0, [[w22, 1], [0, w11]])` instead of the
/// general inverse construction.
pub fn char2_plane_lift(q: &QForm) -> Option<QForm> {
    let w = q.matrix();
    if q.field().characteristic() != 2 || q.dim() != 2 || !w.get(0, 1).is_one() {
        return None;
    }
    let f = q.field();
    QForm::new(f, 3, vec![f.zero(), f.zero(), f.zero(), w.get(1, 1).clone(), f.one(), w.get(0, 0).clone()]).ok()
}

fn stabilizer(field: FieldSpec, v: &Vector, budget: Budget) -> Result<GroupSet> {
    let gl = enumerate_gl(field, v.len(), budget)?;
    let kept: Vec<_> = gl.matrices().into_iter().filter(|m| m.mul_vec(v).expect("shape") == *v).collect();
    GroupSet::from_matrices(field, v.len(), kept)
}

pub fn reproduce_table(dim: usize, field: FieldSpec, budget: Budget) -> Result<TableReport> {
    let case = TableCase::for_dim_field(dim, field)?;
    let printed = printed_fixture(case, field)?;
    let fixture = printed.corrected();
    let mut report = Report::new(format!("table {case:?} (dim {dim}, {field})"));

    let dyads = all_dyads(field, dim, budget)?;
    let dyad_set: BTreeSet<(QForm, QForm)> = dyads.iter().map(|(q, qt, _, _)| (q.clone(), qt.clone())).collect();
    for (q, qt, motion, _) in &dyads {
        report.check(*motion, || format!("dyad ({q}, {}) satisfies only the weak equation", qt.render(Vars::A)));
    }

    let mut blocks: Vec<Vec<Row>> = Vec::new();
    let mut row_pairs = Vec::new();
    for (lefts, rights) in components(&dyads) {
        for q in &lefts {
            for qt in &rights {
                report.check(dyad_set.contains(&(q.clone(), qt.clone())), || {
                    format!("block is not complete: ({q}, {}) is not a dyad", qt.render(Vars::A))
                });
            }
        }
        let o_groups: BTreeSet<Vec<Vec<u8>>> =
            lefts.iter().map(|q| orthogonal_group(q, budget).map(|g| g.encoded().to_vec())).collect::<Result<_>>()?;
        report
            .check(o_groups.len() == 1, || format!("block with left entries {lefts:?} has several orthogonal groups"));
        let w_groups: BTreeSet<Vec<Vec<u8>>> = rights
            .iter()
            .map(|qt| weak_orthogonal_group(qt, budget).map(|g| g.encoded().to_vec()))
            .collect::<Result<_>>()?;
        report.check(w_groups.len() == 1, || "block right entries have several weak orthogonal groups".to_string());

        let mut rows: Vec<Row> = Vec::new();
        let mut paired: BTreeSet<QForm> = BTreeSet::new();
        for q in &lefts {
            match lift(q) {
                Ok(up) => {
                    let present = rights.contains(&up);
                    report.check(present, || format!("lift of {q} is missing from its block"));
                    if present {
                        report.check(drop(&up).as_ref() == Ok(q), || format!("drop of the lift of {q} differs"));
                        paired.insert(up.clone());
                        row_pairs.push((q.render(Vars::X), up.render(Vars::A)));
                        rows.push((Some(q.clone()), Some(up)));
                    } else {
                        rows.push((Some(q.clone()), None));
                    }
                }
                Err(Error::DegeneratePolarForm { .. }) => rows.push((Some(q.clone()), None)),
                Err(e) => return Err(e),
            }
        }
        for qt in rights.iter().filter(|qt| !paired.contains(qt)) {
            let blank_ok = match drop(qt) {
                Err(Error::NotDroppable { .. }) => true,
                Ok(down) => !lefts.contains(&down),
                Err(e) => return Err(e),
            };
            report.check(blank_ok, || format!("{} has a partner but sits in a half-blank row", qt.render(Vars::A)));
            rows.push((None, Some(qt.clone())));
        }
        blocks.push(rows);
    }

    // AO′ ⊊ AO exactly for the listed left-hand entries.
    for q in blocks.iter().flatten().filter_map(|(q, _)| q.as_ref()) {
        let proper = weak_orthogonal_group(q, budget)?.len() < orthogonal_group(q, budget)?.len();
        let listed = fixture.proper_weak.contains(q);
        report.check(proper == listed, || format!("Q = {q}: weak motion group proper = {proper}, listed = {listed}"));
    }

    if case == TableCase::T4 {
        // non-first blocks: O(Q) is the stabiliser of e1+e2, e1, e2
        let f = field;
        let vectors = [vec![f.one(), f.one()], vec![f.one(), f.zero()], vec![f.zero(), f.one()]];
        for (block, v) in fixture.blocks.iter().skip(1).zip(&vectors) {
            let stab = stabilizer(f, v, budget)?;
            for q in block.iter().filter_map(|(q, _)| q.as_ref()) {
                report.check(orthogonal_group(q, budget)? == stab, || {
                    format!("O({q}) is not the stabiliser of {}", crate::transvect::render_vector(v))
                });
            }
        }
    }

    let computed = canonical(&blocks);
    let expected_match = computed == canonical(&fixture.blocks);
    report.check(expected_match, || "computed table differs from the reference table".to_string());

    // Every printed correction must be forced by the coordinate formula, and
    // the printed table must differ from the computation exactly there.
    let mut errata = Vec::new();
    for e in &printed.errata {
        for pos in [e.first, e.second] {
            let (q, printed_qt) = &printed.blocks[pos.0][pos.1];
            let q = q.as_ref().expect("erratum rows have a left entry");
            let derived = char2_plane_lift(q);
            let corrected = &fixture.blocks[pos.0][pos.1].1;
            report.check(derived.is_some() && derived == *corrected && derived != *printed_qt, || {
                format!("erratum at block {} row {} is not confirmed by the coordinate formula", pos.0 + 1, pos.1 + 1)
            });
            errata.push((
                pos.0 + 1,
                pos.1 + 1,
                printed_qt.as_ref().map(|f| f.render(Vars::A)).unwrap_or_default(),
                corrected.as_ref().map(|f| f.render(Vars::A)).unwrap_or_default(),
            ));
        }
    }
    if case == TableCase::T4 {
        for (q, qt) in fixture.blocks.iter().flatten() {
            if let (Some(q), Some(qt)) = (q, qt) {
                report
                    .check(char2_plane_lift(q).as_ref() == Some(qt), || format!("coordinate formula disagrees on {q}"));
            }
        }
    }
    let printed_matches = canonical(&printed.blocks) == computed;
    report.check(printed_matches == printed.errata.is_empty(), || {
        "printed table and computation differ beyond the listed errata".to_string()
    });

    let arranged = if expected_match { fixture.blocks.clone() } else { blocks };
    Ok(TableReport {
        case,
        dim,
        field: field.to_string(),
        blocks: arranged.iter().map(|b| b.iter().map(row_strings).collect()).collect(),
        row_pairs,
        expected_match,
        errata,
        report,
    })
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.expected_match && self.report.passed()
    }

    /// Two-column rendering with one rule between blocks.
    pub fn render(&self) -> String {
        let head_l = format!("Q on V (dim {})", self.dim);
        let head_r = format!("Qt on F x V* (dim {})", self.dim + 1);
        let cells: Vec<(String, String)> = self
            .blocks
            .iter()
            .flatten()
            .map(|r| (r.q.clone().unwrap_or_default(), r.qt.clone().unwrap_or_default()))
            .collect();
        let wl = cells.iter().map(|c| c.0.len()).chain([head_l.len()]).max().unwrap_or(0);
        let wr = cells.iter().map(|c| c.1.len()).chain([head_r.len()]).max().unwrap_or(0);
        let rule = format!("+{}+{}+\n", "-".repeat(wl + 2), "-".repeat(wr + 2));
        let mut out = String::new();
        out.push_str(&rule);
        out.push_str(&format!("| {head_l:wl$} | {head_r:wr$} |\n"));
        out.push_str(&rule.replace('-', "="));
        for block in &self.blocks {
            for r in block {
                let l = r.q.clone().unwrap_or_default();
                let rr = r.qt.clone().unwrap_or_default();
                out.push_str(&format!("| {l:wl$} | {rr:wr$} |\n"));
            }
            out.push_str(&rule);
        }
        out
    }
}
