//! `eval` and `search`.

use std::f64::consts::TAU;

use tfu_core::ctp::{self, build_state_vector, cos2, proposition_projector, Direction};
use tfu_core::inequality::{
    search_violation, wde_classical, wde_quantum_from_specs, wde_tfu_sets, AngleGrid, SearchConfig, WdeTriple,
};
use tfu_core::logic::{derive_value, detect_nexus, PropositionId};
use tfu_core::measure::{complement_check, noncommutativity_gap, tfu_conditional};
use tfu_core::quantum::{born, commutator_norm, product_asymmetry, projector_from_spec, sequential_conditional};

use crate::error::{classify, CliError};
use crate::problem::{self, Payload, ProblemFile};
use crate::report::{round12, Check, Report};
use crate::Options;

/// Largest number of grid points a search may evaluate.
pub const MAX_SEARCH_POINTS: usize = 1_000_000;

fn start(command: &str, file: &ProblemFile, opts: &Options) -> Report {
    let mut report = Report::new(command, opts.tolerance);
    report.mode = Some(file.payload.mode().into());
    report.input = serde_json::to_value(file).expect("problem files serialize");
    report
}

/// Accumulates one identity over many instances.
struct Tally {
    name: &'static str,
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, failure: None }
    }

    fn record(&mut self, lhs: f64, rhs: f64, tolerance: f64, what: impl FnOnce() -> String) {
        self.cases += 1;
        if self.failure.is_none() && (lhs - rhs).abs() > tolerance {
            self.failure = Some(format!("{}: {lhs} vs {rhs}", what()));
        }
    }

    fn finish(self, report: &mut Report) {
        if self.cases > 0 {
            report.check(Check {
                name: self.name.into(),
                passed: self.failure.is_none(),
                cases: self.cases,
                counterexample: self.failure,
            });
        }
    }
}

pub fn eval(file: &ProblemFile, opts: &Options) -> Result<Report, CliError> {
    let mut report = start("eval", file, opts);
    let tol = opts.tolerance;
    match &file.payload {
        Payload::TfuTable(t) => eval_table(t, &mut report)?,
        Payload::Classical(c) => eval_classical(c, tol, &mut report)?,
        Payload::TfuMeasure(m) => eval_measure(m, tol, &mut report)?,
        Payload::Quantum(q) => eval_quantum(q, tol, &mut report)?,
        Payload::Wde(w) => {
            report.ordering = Some(opts.ordering.to_string());
            eval_wde(w, opts, &mut report)?
        }
    }
    Ok(report)
}

fn eval_table(t: &problem::TablePayload, report: &mut Report) -> Result<(), CliError> {
    let table = t.table()?;
    let names = &t.propositions;
    for (k, name) in names.iter().enumerate() {
        let v = derive_value(PropositionId(k), &table).map_err(|e| classify(name, "values", e))?;
        report.text(format!("value({name})"), v.to_string());
    }
    let nexus = detect_nexus(&table).map_err(|e| classify("nexus", "values", e))?;
    let listed: Vec<String> = nexus.iter().map(|i| i.label_with(names)).collect();
    report.text("nexus", if listed.is_empty() { "none".to_string() } else { listed.join(", ") });
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let label = format!("{}∧{}", names[i], names[j]);
            let v = table
                .resolve_conjunction(PropositionId(i), PropositionId(j))
                .map_err(|e| classify(&label, "values", e))?;
            report.text(label, v.to_string());
        }
    }
    for (i, f) in t.formulas()?.iter().enumerate() {
        let v = table.evaluate(f).map_err(|e| classify(&t.formulas[i], &format!("formulas[{i}]"), e))?;
        report.text(f.label_with(names), v.to_string());
    }
    Ok(())
}

fn eval_classical(c: &problem::ClassicalPayload, tol: f64, report: &mut Report) -> Result<(), CliError> {
    let d = c.distribution()?;
    let formulas = c.formulas()?;
    let pairs = c.pairs()?;
    let names = &c.propositions;
    let n = d.propositions();
    let s = build_state_vector(&d);
    let invalid = |e| classify("probabilities", "probabilities", e);
    let props =
        (0..n).map(|k| proposition_projector(PropositionId(k), n)).collect::<Result<Vec<_>, _>>().map_err(invalid)?;
    let prob = |p: &ctp::DiagonalProjector| ctp::probability(p, &s).map_err(invalid);

    let mut complement = Tally::new("complement");
    let mut product = Tally::new("product rule");
    let mut cosines = Tally::new("cos² identities");

    let mut marginal = Vec::with_capacity(n);
    for (k, name) in names.iter().enumerate() {
        let p = prob(&props[k])?;
        let not_p = prob(&ctp::negation_op(&props[k]))?;
        report.number(format!("|{name}|"), p);
        report.number(format!("|¬{name}|"), not_p);
        complement.record(p + not_p, 1.0, tol, || name.clone());
        marginal.push(p);
    }
    for i in 0..n {
        for j in i + 1..n {
            let and = ctp::and_op(&props[i], &props[j]).map_err(invalid)?;
            let or = ctp::or_op(&props[i], &props[j]).map_err(invalid)?;
            report.number(format!("|{}∧{}|", names[i], names[j]), prob(&and)?);
            report.number(format!("|{}∨{}|", names[i], names[j]), prob(&or)?);
        }
    }
    for (f, src) in formulas.iter().zip(&c.formulas) {
        let op = ctp::projector_for(f, n).map_err(|e| classify(src, "formulas", e))?;
        report.number(format!("|{}|", f.label_with(names)), prob(&op)?);
    }
    for &(q, p) in &pairs {
        let label = format!("|{}|_{}", names[q], names[p]);
        let cond = ctp::conditional(&props[q], &props[p], &s).map_err(|e| classify(&label, "pairs", e))?;
        report.number(&label, cond);
        let joint = prob(&ctp::and_op(&props[p], &props[q]).map_err(invalid)?)?;
        product.record(marginal[p] * cond, joint, tol, || label.clone());
    }

    let direction = |op: &ctp::DiagonalProjector| Direction::projected(op, &s).ok();
    for (k, name) in names.iter().enumerate() {
        if let Some(dir) = direction(&props[k]) {
            let label = format!("⟨{name}|S⟩²");
            let v = cos2(&dir, &s.as_direction()).map_err(invalid)?;
            report.number(&label, v);
            cosines.record(v, marginal[k], tol, || label);
        }
    }
    for &(q, p) in &pairs {
        let (Some(dir_p), Some(dir_q)) = (direction(&props[p]), direction(&props[q])) else { continue };
        let (Ok(q_p), Ok(p_q)) =
            (ctp::conditional(&props[q], &props[p], &s), ctp::conditional(&props[p], &props[q], &s))
        else {
            continue;
        };
        let both = ctp::and_op(&props[p], &props[q]).map_err(invalid)?;
        if let Some(dir_pq) = direction(&both) {
            let label = format!("⟨{}|{}∧{}⟩²", names[p], names[p], names[q]);
            let v = cos2(&dir_p, &dir_pq).map_err(invalid)?;
            report.number(&label, v);
            cosines.record(v, q_p, tol, || label);
        }
        let label = format!("⟨{}|{}⟩²", names[p], names[q]);
        let v = cos2(&dir_p, &dir_q).map_err(invalid)?;
        report.number(&label, v);
        cosines.record(v, q_p * p_q, tol, || label);
    }
    complement.finish(report);
    product.finish(report);
    cosines.finish(report);
    Ok(())
}

fn eval_measure(m: &problem::MeasurePayload, tol: f64, report: &mut Report) -> Result<(), CliError> {
    let assignment = m.assignment()?;
    let pairs = m.pairs()?;
    let names = &m.propositions;
    let mut complement = Tally::new("complement");
    for (k, name) in names.iter().enumerate() {
        let (p, not_p) =
            complement_check(PropositionId(k), &assignment).map_err(|e| classify(&format!("[{name}]"), "cells", e))?;
        report.number(format!("[{name}]"), p);
        report.number(format!("[¬{name}]"), not_p);
        complement.record(p + not_p, 1.0, tol, || name.clone());
    }
    for &(q, p) in &pairs {
        let label = format!("[{}]_{}", names[q], names[p]);
        let v = tfu_conditional(PropositionId(q), PropositionId(p), &assignment)
            .map_err(|e| classify(&label, "cells", e))?;
        report.number(label, v);
    }
    for &(q, p) in &pairs {
        let label = format!("gap({},{})", names[p], names[q]);
        let v = noncommutativity_gap(PropositionId(p), PropositionId(q), &assignment)
            .map_err(|e| classify(&label, "cells", e))?;
        report.number(label, v);
    }
    complement.finish(report);
    Ok(())
}

fn eval_quantum(q: &problem::QuantumPayload, tol: f64, report: &mut Report) -> Result<(), CliError> {
    let s = problem::state("state", &q.state)?;
    let names = q.names()?;
    let pairs = q.pairs()?;
    let projectors = q
        .projectors
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let field = format!("projectors[{i}]");
            projector_from_spec(&entry.spec(&field)?, s.dim()).map_err(|e| classify(&names[i], &field, e))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    for (p, name) in projectors.iter().zip(&names) {
        let v = born(p, &s).map_err(|e| classify(name, "state", e))?;
        report.number(format!("⟨{name}|S⟩²"), v);
    }
    let mut identity = Tally::new("ordered-product identity");
    for &(qi, pi) in &pairs {
        let label = format!("[{}]_{}", names[qi], names[pi]);
        let v =
            sequential_conditional(&projectors[qi], &projectors[pi], &s).map_err(|e| classify(&label, "pairs", e))?;
        report.number(label, v);
    }
    for &(qi, pi) in &pairs {
        let (p, qq) = (&projectors[pi], &projectors[qi]);
        let label = format!("gap({},{})", names[pi], names[qi]);
        let v = product_asymmetry(p, qq, &s).map_err(|e| classify(&label, "pairs", e))?;
        report.number(&label, v);
        let qps = qq
            .apply(&p.apply(s.amplitudes()).map_err(|e| classify(&label, "pairs", e))?)
            .map_err(|e| classify(&label, "pairs", e))?
            .norm_squared();
        let pqs = p
            .apply(&qq.apply(s.amplitudes()).map_err(|e| classify(&label, "pairs", e))?)
            .map_err(|e| classify(&label, "pairs", e))?
            .norm_squared();
        identity.record(v, qps - pqs, tol, || label);
        let norm = commutator_norm(p, qq).map_err(|e| classify("commutator", "pairs", e))?;
        report.number(format!("‖[{},{}]‖", names[pi], names[qi]), norm);
    }
    identity.finish(report);
    Ok(())
}

fn triple(report: &mut Report, prefix: &str, t: &WdeTriple, holds: bool) {
    report.number(format!("{prefix}.ab"), t.ab);
    report.number(format!("{prefix}.b̄c"), t.not_b_c);
    report.number(format!("{prefix}.ac"), t.ac);
    report.number(format!("{prefix}.violation"), t.violation());
    report.text(format!("{prefix}.inequality"), if holds { "holds" } else { "violated" });
}

fn eval_wde(w: &problem::WdePayload, opts: &Options, report: &mut Report) -> Result<(), CliError> {
    let tol = opts.tolerance;
    if w.classical.is_none() && w.population.is_none() && w.quantum.is_none() {
        let hint = if w.search.is_some() { "only a search section; run `tfu search`" } else { "no sections" };
        return Err(CliError::validation("mode", format!("wde problem has {hint}")));
    }
    if let Some(c) = &w.classical {
        let d = ctp::ClassicalDistribution::new(3, c.probabilities.clone())
            .map_err(|e| CliError::validation("classical.probabilities", e))?;
        let out = wde_classical(&d).map_err(|e| classify("classical", "classical.probabilities", e))?;
        triple(report, "classical", &out.triple, out.triple.holds(tol));
    }
    if let Some(entries) = &w.population {
        let pop = problem::population(entries)?;
        let out = wde_tfu_sets(&pop);
        triple(report, "population", &out.triple, out.triple.holds(tol * pop.total_weight().max(1.0)));
    }
    if let Some(q) = &w.quantum {
        let s = problem::state("quantum.state", &q.state)?;
        let specs = [q.a.spec("quantum.a")?, q.b.spec("quantum.b")?, q.c.spec("quantum.c")?];
        let out = wde_quantum_from_specs(&specs, &s, opts.ordering).map_err(|e| classify("quantum", "quantum", e))?;
        triple(report, "quantum", &out.triple, out.triple.holds(tol));
    }
    Ok(())
}

pub fn search(file: &ProblemFile, opts: &Options) -> Result<Report, CliError> {
    let Payload::Wde(w) = &file.payload else {
        return Err(CliError::validation("mode", format!("search needs a wde problem, got {}", file.payload.mode())));
    };
    let Some(spec) = &w.search else {
        return Err(CliError::validation("search", "wde problem has no search section"));
    };
    let mut report = start("search", file, opts);
    report.ordering = Some(opts.ordering.to_string());
    let s = problem::state("search.state", &spec.state)?;
    let step = opts.grid_step.unwrap_or(spec.step);
    let step_field = if opts.grid_step.is_some() { "--grid-step" } else { "search.step" };
    let thetas = AngleGrid::range(spec.start, spec.stop, step).map_err(|e| classify("grid", step_field, e))?;
    let phis = if opts.full_phase {
        AngleGrid::range(0.0, TAU - 0.5 * step, step).map_err(|e| classify("grid", step_field, e))?
    } else {
        AngleGrid::new(spec.phis.clone().unwrap_or_else(|| vec![0.0]))
            .map_err(|e| classify("grid", "search.phis", e))?
    };
    let points = thetas.values().len().checked_pow(3).zip(phis.values().len().checked_pow(3));
    match points.and_then(|(a, b)| a.checked_mul(b)) {
        Some(total) if total <= MAX_SEARCH_POINTS => {}
        _ => return Err(CliError::validation(step_field, format!("grid exceeds {MAX_SEARCH_POINTS} points"))),
    }
    let config = SearchConfig { thetas, phis, factors: spec.factors, ordering: opts.ordering };
    let witness = search_violation(&config, &s).map_err(|e| classify("search", "search.factors", e))?;
    match witness {
        None => {
            report.text("witness", "none");
            report.witness = Some(serde_json::Value::String("none".into()));
        }
        Some(w) => {
            report.number("witness.magnitude", w.magnitude);
            triple(&mut report, "triple", &w.triple, false);
            let r = |xs: &[f64]| xs.iter().map(|x| round12(*x)).collect::<Vec<_>>();
            report.witness = Some(serde_json::json!({
                "factors": config.factors,
                "theta": r(&w.angles[..3]),
                "phi": r(&w.angles[3..]),
                "magnitude": round12(w.magnitude),
                "ordering": w.ordering.to_string(),
            }));
        }
    }
    Ok(report)
}
