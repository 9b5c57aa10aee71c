//! Seeded invariant suites behind `tfu check`.
//!
//! Every suite draws from its own ChaCha stream derived from the seed, so
//! adding or reordering suites leaves the others unchanged. A failing random
//! case is shrunk before it is reported.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tfu_core::ctp::{
    self, and_op, build_state_vector, conditional, cos2, negation_op, or_op, projector_for, ClassicalDistribution,
    DiagonalProjector, Direction,
};
use tfu_core::inequality::{search_violation, singlet, wde_classical, wde_quantum_from_specs, AngleGrid, SearchConfig};
use tfu_core::logic::{
    conjoin, derive_value, negate, CompleteState, CompleteStateTable, Conjunction, Formula, PropositionId, TfuValue,
};
use tfu_core::measure::{
    cell_label, noncommutativity_gap, tfu_conditional, tfu_from_augmented, tfu_probability, DecidabilityAugmentedSpace,
    TfuMeasureAssignment,
};
use tfu_core::quantum::{
    born, product_asymmetry, projector_from_spec, sequential_conditional, ComplexStateVector, HermitianProjector,
    ProjectorSpec,
};

use crate::report::Check;

/// Perturbation added to a checked quantity under fault injection.
pub const FAULT: f64 = 1e-3;

/// Singlet violation `0.25 − sin²(π/8)` at `θ = (0, π/4, π/2)`.
pub const SINGLET_VIOLATION: f64 = 0.103_553_390_593_273_8;

pub const SINGLET_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    pub tolerance: f64,
    pub fault: Option<String>,
}

impl SuiteConfig {
    pub fn new(seed: u64, cases: usize, tolerance: f64) -> Self {
        SuiteConfig { seed, cases, tolerance, fault: None }
    }

    fn fault(&self, name: &str) -> f64 {
        if self.fault.as_deref() == Some(name) {
            FAULT
        } else {
            0.0
        }
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

type Suite = fn(&SuiteConfig) -> Check;

/// Check names, in report order.
pub const SUITES: &[(&str, Suite)] = &[
    ("truth tables", truth_tables),
    ("rules I/II", rules),
    ("ctp identities n=1", |c| ctp_suite(c, 1)),
    ("ctp identities n=2", |c| ctp_suite(c, 2)),
    ("ctp identities n=3", |c| ctp_suite(c, 3)),
    ("ctp identities n=4", |c| ctp_suite(c, 4)),
    ("measure summation", measure_summation),
    ("measure complement", measure_complement),
    ("measure scale invariance", measure_scale),
    ("measure undecidable inertness", measure_inertness),
    ("augmented identity", augmented_identity),
    ("gap exhibit", gap_exhibit),
    ("asymmetry exhibit", asymmetry_exhibit),
    ("classical wde", classical_wde),
    ("singlet violation", singlet_violation),
    ("commuting sector", commuting_sector),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(name, _)| *name)
}

pub fn run(name: &str, config: &SuiteConfig) -> Option<Check> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, suite)| suite(config))
}

pub fn run_all(config: &SuiteConfig) -> Vec<Check> {
    SUITES.iter().map(|(_, suite)| suite(config)).collect()
}

fn outcome(name: &str, cases: usize, failure: Option<String>) -> Check {
    Check { name: name.into(), passed: failure.is_none(), cases, counterexample: failure }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn complexity(x: f64) -> u8 {
    if x == 0.0 {
        0
    } else if x == x.round() {
        1
    } else if x * 10.0 == (x * 10.0).round() {
        2
    } else {
        3
    }
}

/// Greedy shrink of a weight vector: zero entries, then round them, keeping
/// each simplification while the case still fails.
fn shrink(mut w: Vec<f64>, fails: impl Fn(&[f64]) -> bool) -> Vec<f64> {
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..w.len() {
            let candidates = [0.0, w[i].round().max(1.0), (w[i] * 10.0).round() / 10.0];
            for candidate in candidates {
                if complexity(candidate) >= complexity(w[i]) {
                    continue;
                }
                let mut trial = w.clone();
                trial[i] = candidate;
                if fails(&trial) {
                    w = trial;
                    changed = true;
                    break;
                }
            }
        }
    }
    w
}

fn weights(rng: &mut ChaCha8Rng, len: usize, max: f64) -> Vec<f64> {
    (0..len).map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>() * max }).collect()
}

fn truth_tables(cfg: &SuiteConfig) -> Check {
    const NAME: &str = "truth tables";
    use TfuValue::{ManifestlyFalse as F, ManifestlyTrue as T, Undecidable as U};
    let mut negation = [(T, F), (F, T), (U, U)];
    let det = Conjunction::Determinate;
    let mut conjunction = [
        ((T, T), det(T)),
        ((T, F), det(F)),
        ((T, U), det(U)),
        ((F, T), det(F)),
        ((F, F), det(F)),
        ((F, U), det(F)),
        ((U, T), det(U)),
        ((U, F), det(F)),
        ((U, U), Conjunction::Ambiguous),
    ];
    if cfg.fault(NAME) != 0.0 {
        negation[2].1 = T;
        conjunction[8].1 = det(U);
    }
    let mut failure = None;
    for (a, expected) in negation {
        if negate(a) != expected && failure.is_none() {
            failure = Some(format!("¬{a} = {} expected {expected}", negate(a)));
        }
    }
    for ((a, b), expected) in conjunction {
        if conjoin(a, b) != expected && failure.is_none() {
            failure = Some(format!("{a}∧{b} = {:?} expected {expected:?}", conjoin(a, b)));
        }
    }
    outcome(NAME, 12, failure)
}

/// Rules I/II read off the bit pattern: `p` is affirmative in state `i` iff
/// bit `n − 1 − p` of `i` is clear.
fn rules_oracle(values: &[TfuValue], n: usize, p: usize) -> TfuValue {
    let open = || (0..values.len()).filter(|&i| values[i] != TfuValue::ManifestlyFalse);
    let affirmative = |i: usize| (i >> (n - 1 - p)) & 1 == 0;
    let some_affirmative = open().any(affirmative);
    let some_negative = open().any(|i| !affirmative(i));
    match (some_affirmative, some_negative) {
        (true, false) => TfuValue::ManifestlyTrue,
        (false, true) => TfuValue::ManifestlyFalse,
        _ => TfuValue::Undecidable,
    }
}

fn rules(cfg: &SuiteConfig) -> Check {
    const NAME: &str = "rules I/II";
    let flip = cfg.fault(NAME) != 0.0;
    let mut cases = 0;
    let mut failure = None;
    for n in 1..=3usize {
        let size = 1usize << n;
        for mut code in 0..3usize.pow(size as u32) {
            let values: Vec<TfuValue> = (0..size)
                .map(|_| {
                    let v = TfuValue::ALL[code % 3];
                    code /= 3;
                    v
                })
                .collect();
            let Ok(table) = CompleteStateTable::new(n, values.clone()) else { continue };
            for p in 0..n {
                cases += 1;
                let got = derive_value(PropositionId(p), &table).map(|v| if flip { negate(v) } else { v });
                let expected = rules_oracle(&values, n, p);
                if got.as_ref() != Ok(&expected) && failure.is_none() {
                    let symbols: String = values.iter().map(|v| v.symbol()).collect();
                    failure = Some(format!("table {symbols}, p{p}: got {got:?}, expected {expected}"));
                }
            }
        }
    }
    outcome(NAME, cases, failure)
}

fn random_formula(rng: &mut ChaCha8Rng, n: usize, depth: u32) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        return if rng.random_bool(0.1) {
            Formula::Const(rng.random_bool(0.5))
        } else {
            Formula::var(PropositionId(rng.random_range(0..n)))
        };
    }
    match rng.random_range(0..3) {
        0 => Formula::not(random_formula(rng, n, depth - 1)),
        1 => Formula::and(random_formula(rng, n, depth - 1), random_formula(rng, n, depth - 1)),
        _ => Formula::or(random_formula(rng, n, depth - 1), random_formula(rng, n, depth - 1)),
    }
}

fn summation(probs: &[f64], n: usize, f: &Formula) -> f64 {
    (0..probs.len()).filter(|&i| f.holds_in(CompleteState::new(n, i))).map(|i| probs[i]).sum()
}

/// All CTP identities for one distribution and two formulas.
fn ctp_case(n: usize, w: &[f64], f: &Formula, g: &Formula, tol: f64, fault: f64) -> Result<(), String> {
    let Ok(d) = ClassicalDistribution::from_weights(n, w) else { return Ok(()) };
    let s = build_state_vector(&d);
    let err = |e: ctp::CtpError| e.to_string();
    let p = projector_for(f, n).map_err(err)?;
    let q = projector_for(g, n).map_err(err)?;
    let prob = |op: &DiagonalProjector| ctp::probability(op, &s).map_err(err);
    let pf = prob(&p)? + fault;
    let pg = prob(&q)?;
    let pq = and_op(&p, &q).map_err(err)?;
    let p_not_q = and_op(&p, &negation_op(&q)).map_err(err)?;
    let ppq = prob(&pq)?;
    let probs = d.probabilities();
    let fail = |what: &str, a: f64, b: f64| if close(a, b, tol) { Ok(()) } else { Err(format!("{what}: {a} vs {b}")) };

    fail("|f| oracle", pf, summation(probs, n, f))?;
    fail("|g| oracle", pg, summation(probs, n, g))?;
    fail("|f∧g| oracle", ppq, summation(probs, n, &Formula::and(f.clone(), g.clone())))?;
    fail("|f∨g| oracle", prob(&or_op(&p, &q).map_err(err)?)?, summation(probs, n, &Formula::or(f.clone(), g.clone())))?;
    fail("marginalization", pf, ppq + prob(&p_not_q)?)?;
    fail("complement", prob(&negation_op(&p))?, 1.0 - pf)?;
    let g_f = conditional(&q, &p, &s).ok();
    let f_g = conditional(&p, &q, &s).ok();
    if let Some(g_f) = g_f {
        fail("product", pf * g_f, ppq)?;
    }
    if let (Some(g_f), Some(f_g)) = (g_f, f_g) {
        fail("symmetry", pf * g_f, pg * f_g)?;
    }
    let dir_p = Direction::projected(&p, &s).ok();
    let dir_q = Direction::projected(&q, &s).ok();
    let dir_pq = Direction::projected(&pq, &s).ok();
    if let Some(dp) = &dir_p {
        fail("⟨P|S⟩²", cos2(dp, &s.as_direction()).map_err(err)?, pf)?;
        if let (Some(dpq), Some(g_f)) = (&dir_pq, g_f) {
            fail("⟨P|PQ⟩²", cos2(dp, dpq).map_err(err)?, g_f)?;
        }
        if let (Some(dq), Some(g_f), Some(f_g)) = (&dir_q, g_f, f_g) {
            fail("⟨P|Q⟩²", cos2(dp, dq).map_err(err)?, g_f * f_g)?;
        }
    }
    Ok(())
}

fn ctp_suite(cfg: &SuiteConfig, n: usize) -> Check {
    let name = format!("ctp identities n={n}");
    let fault = cfg.fault(&name);
    let mut rng = cfg.rng(100 + n as u64);
    let mut failure = None;
    for _ in 0..cfg.cases {
        let w = weights(&mut rng, 1 << n, 1.0);
        let f = random_formula(&mut rng, n, 3);
        let g = random_formula(&mut rng, n, 3);
        if failure.is_none() && ctp_case(n, &w, &f, &g, cfg.tolerance, fault).is_err() {
            let small = shrink(w, |w| ctp_case(n, w, &f, &g, cfg.tolerance, fault).is_err());
            let why = ctp_case(n, &small, &f, &g, cfg.tolerance, fault).unwrap_err();
            failure = Some(format!("weights {small:?}, f = {f:?}, g = {g:?}: {why}"));
        }
    }
    outcome(&name, cfg.cases, failure)
}

fn random_assignment(rng: &mut ChaCha8Rng) -> (usize, Vec<f64>) {
    let n = rng.random_range(1..=3usize);
    (n, weights(rng, 3usize.pow(n as u32), 10.0))
}

/// Runs `case` on random assignments; the first failure is shrunk and reported.
fn measure_suite(
    cfg: &SuiteConfig,
    name: &str,
    stream: u64,
    case: impl Fn(&TfuMeasureAssignment, &mut ChaCha8Rng, f64) -> Result<(), String>,
) -> Check {
    let fault = cfg.fault(name);
    let mut rng = cfg.rng(stream);
    let mut failure = None;
    for _ in 0..cfg.cases {
        let (n, cells) = random_assignment(&mut rng);
        let case_rng = ChaCha8Rng::seed_from_u64(rng.random());
        let check = |cells: &[f64]| match TfuMeasureAssignment::new(n, cells.to_vec()) {
            Ok(m) => case(&m, &mut case_rng.clone(), fault),
            Err(_) => Ok(()),
        };
        if failure.is_none() && check(&cells).is_err() {
            let small = shrink(cells, |c| check(c).is_err());
            let why = check(&small).unwrap_err();
            let labelled: Vec<String> = small
                .iter()
                .enumerate()
                .filter(|(_, m)| **m != 0.0)
                .map(|(i, m)| format!("{}={m}", cell_label(n, i)))
                .collect();
            failure = Some(format!("cells {{{}}}: {why}", labelled.join(", ")));
        }
    }
    outcome(name, cfg.cases, failure)
}

fn measure_summation(cfg: &SuiteConfig) -> Check {
    measure_suite(cfg, "measure summation", 200, |m, _, fault| {
        let n = m.propositions();
        let labels: Vec<String> = (0..m.cells().len()).map(|i| cell_label(n, i)).collect();
        let mass = |keep: &dyn Fn(&[u8]) -> bool| {
            labels.iter().zip(m.cells()).filter(|(l, _)| keep(l.as_bytes())).map(|(_, v)| v).sum::<f64>()
        };
        for p in 0..n {
            let (t, f) = (mass(&|l| l[p] == b'T'), mass(&|l| l[p] == b'F'));
            if let Ok(v) = tfu_probability(PropositionId(p), m) {
                let expected = t / (t + f);
                if !close(v + fault, expected, cfg.tolerance) {
                    return Err(format!("[p{p}] = {} vs {expected}", v + fault));
                }
            }
            for q in 0..n {
                let tt = mass(&|l| l[p] == b'T' && l[q] == b'T');
                let tf = mass(&|l| l[p] == b'T' && l[q] == b'F');
                if let Ok(v) = tfu_conditional(PropositionId(q), PropositionId(p), m) {
                    if !close(v, tt / (tt + tf), cfg.tolerance) {
                        return Err(format!("[p{q}]_p{p} = {v} vs {}", tt / (tt + tf)));
                    }
                }
            }
        }
        Ok(())
    })
}

fn measure_complement(cfg: &SuiteConfig) -> Check {
    measure_suite(cfg, "measure complement", 201, |m, _, fault| {
        for p in 0..m.propositions() {
            let p = PropositionId(p);
            let Ok(direct) = tfu_probability(p, m) else { continue };
            let negated =
                tfu_probability(p, &m.with_negated(p).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            if !close(direct + negated + fault, 1.0, cfg.tolerance) {
                return Err(format!("[{p}] + [¬{p}] = {}", direct + negated + fault));
            }
        }
        Ok(())
    })
}

fn measure_scale(cfg: &SuiteConfig) -> Check {
    measure_suite(cfg, "measure scale invariance", 202, |m, rng, fault| {
        let factor = 10f64.powf(rng.random_range(-3.0..3.0));
        let scaled = m.scaled(factor).map_err(|e| e.to_string())?;
        let n = m.propositions();
        for p in 0..n {
            let p = PropositionId(p);
            if let (Ok(a), Ok(b)) = (tfu_probability(p, m), tfu_probability(p, &scaled)) {
                if !close(a, b + fault, cfg.tolerance) {
                    return Err(format!("factor {factor}: [{p}] {a} vs {}", b + fault));
                }
            }
            for q in 0..n {
                let q = PropositionId(q);
                if let (Ok(a), Ok(b)) = (tfu_conditional(q, p, m), tfu_conditional(q, p, &scaled)) {
                    if !close(a, b, cfg.tolerance) {
                        return Err(format!("factor {factor}: [{q}]_{p} {a} vs {b}"));
                    }
                }
            }
        }
        Ok(())
    })
}

fn measure_inertness(cfg: &SuiteConfig) -> Check {
    measure_suite(cfg, "measure undecidable inertness", 203, |m, rng, fault| {
        let p = PropositionId(rng.random_range(0..m.propositions()));
        let Ok(before) = tfu_probability(p, m) else { return Ok(()) };
        let mut cells = m.cells().to_vec();
        for (i, c) in cells.iter_mut().enumerate() {
            if m.value_in(i, p) == TfuValue::Undecidable {
                *c += rng.random::<f64>() * 50.0;
            }
        }
        let changed = TfuMeasureAssignment::new(m.propositions(), cells).map_err(|e| e.to_string())?;
        let after = tfu_probability(p, &changed).map_err(|e| e.to_string())? + fault;
        if close(before, after, cfg.tolerance) {
            Ok(())
        } else {
            Err(format!("[{p}] moved from {before} to {after}"))
        }
    })
}

fn augmented_case(n: usize, w: &[f64], tol: f64, fault: f64) -> Result<(), String> {
    let Ok(d) = ClassicalDistribution::from_weights(2 * n, w) else { return Ok(()) };
    let space = DecidabilityAugmentedSpace::new(d.clone()).map_err(|e| e.to_string())?;
    let m = tfu_from_augmented(&space);
    let s = build_state_vector(&d);
    for p in 0..n {
        let p = PropositionId(p);
        let prop = ctp::proposition_projector(p, 2 * n).map_err(|e| e.to_string())?;
        let decidable = ctp::proposition_projector(space.decidability_of(p), 2 * n).map_err(|e| e.to_string())?;
        if let (Ok(t), Ok(c)) = (tfu_probability(p, &m), conditional(&prop, &decidable, &s)) {
            if !close(t + fault, c, tol) {
                return Err(format!("[{p}] = {} vs |{p}|_{p}̄ = {c}", t + fault));
            }
        }
    }
    Ok(())
}

fn augmented_identity(cfg: &SuiteConfig) -> Check {
    const NAME: &str = "augmented identity";
    let fault = cfg.fault(NAME);
    let mut rng = cfg.rng(204);
    let mut failure = None;
    for _ in 0..cfg.cases {
        let n = rng.random_range(1..=3usize);
        let w = weights(&mut rng, 1 << (2 * n), 1.0);
        if failure.is_none() && augmented_case(n, &w, cfg.tolerance, fault).is_err() {
            let small = shrink(w, |w| augmented_case(n, w, cfg.tolerance, fault).is_err());
            let why = augmented_case(n, &small, cfg.tolerance, fault).unwrap_err();
            failure = Some(format!("n={n}, augmented weights {small:?}: {why}"));
        }
    }
    outcome(NAME, cfg.cases, failure)
}

fn gap_exhibit(cfg: &SuiteConfig) -> Check {
    const NAME: &str = "gap exhibit";
    let m = TfuMeasureAssignment::from_labels(2, [("TT", 1.0), ("TF", 1.0), ("UT", 2.0)]).expect("valid exhibit");
    let failure = match noncommutativity_gap(PropositionId(0), PropositionId(1), &m) {
        Ok(gap) if close(gap + cfg.fault(NAME), -0.25, cfg.tolerance) => None,
        Ok(gap) => Some(format!("TT=1, TF=1, UT=2: gap {} expected -0.25", gap + cfg.fault(NAME))),
        Err(e) => Some(e.to_string()),
    };
    outcome(NAME, 1, failure)
}

fn asymmetry_exhibit(cfg: &SuiteConfig) -> Check {
    const NAME: &str = "asymmetry exhibit";
    let s = ComplexStateVector::basis(2, 0).expect("qubit basis state");
    let p = projector_from_spec(&ProjectorSpec::qubit(0, FRAC_PI_2, 0.0), 2).expect("valid direction");
    let q = HermitianProjector::from_diagonal(&DiagonalProjector::from_mask(vec![true, false]).expect("valid mask"));
    let failure = match product_asymmetry(&p, &q, &s) {
        Ok(v) if close(v + cfg.fault(NAME), -0.25, cfg.tolerance) => None,
        Ok(v) => Some(format!("s=(1,0), P at θ=π/2, Q=diag(1,0): {} expected -0.25", v + cfg.fault(NAME))),
        Err(e) => Some(e.to_string()),
    };
    outcome(NAME, 1, failure)
}

fn classical_wde(cfg: &SuiteConfig) -> Check {
    const NAME: &str = "classical wde";
    let fault = cfg.fault(NAME);
    let mut rng = cfg.rng(300);
    let case = |w: &[f64]| -> Result<(), String> {
        let Ok(d) = ClassicalDistribution::from_weights(3, w) else { return Ok(()) };
        let mut t = wde_classical(&d).map_err(|e| e.to_string())?.triple;
        if fault != 0.0 {
            t.ab -= 1.0;
        }
        if t.holds(cfg.tolerance) {
            Ok(())
        } else {
            Err(format!("ab={} b̄c={} ac={}", t.ab, t.not_b_c, t.ac))
        }
    };
    let mut failure = None;
    for _ in 0..cfg.cases {
        let w = weights(&mut rng, 8, 1.0);
        if failure.is_none() && case(&w).is_err() {
            let small = shrink(w, |w| case(w).is_err());
            failure = Some(format!("weights {small:?}: {}", case(&small).unwrap_err()));
        }
    }
    outcome(NAME, cfg.cases, failure)
}

fn singlet_violation(cfg: &SuiteConfig) -> Check {
    const NAME: &str = "singlet violation";
    let s = singlet();
    let angles = [0.0, FRAC_PI_4, FRAC_PI_2];
    let specs = [
        ProjectorSpec::qubit(0, angles[0], 0.0),
        ProjectorSpec::qubit(1, angles[1], 0.0),
        ProjectorSpec::qubit(1, angles[2], 0.0),
    ];
    let run = || -> Result<Option<String>, String> {
        let t = wde_quantum_from_specs(&specs, &s, Default::default()).map_err(|e| e.to_string())?.triple;
        let v = t.violation() + cfg.fault(NAME);
        if !close(v, SINGLET_VIOLATION, SINGLET_TOLERANCE) {
            return Ok(Some(format!("violation {v} expected {SINGLET_VIOLATION}")));
        }
        let grid = AngleGrid::range(0.0, FRAC_PI_2, FRAC_PI_4).map_err(|e| e.to_string())?;
        let witness = search_violation(&SearchConfig::planar(grid), &s).map_err(|e| e.to_string())?;
        Ok(match witness {
            Some(w) if w.angles[..3] == angles && close(w.magnitude, SINGLET_VIOLATION, SINGLET_TOLERANCE) => None,
            Some(w) => Some(format!("search returned θ={:?} magnitude {}", &w.angles[..3], w.magnitude)),
            None => Some("search found no violation".into()),
        })
    };
    outcome(NAME, 2, run().unwrap_or_else(Some))
}

fn commuting_case(n: usize, w: &[f64], masks: &[bool], tol: f64, fault: f64) -> Result<(), String> {
    let dim = 1 << n;
    let Ok(d) = ClassicalDistribution::from_weights(n, w) else { return Ok(()) };
    let real = build_state_vector(&d);
    let s = ComplexStateVector::from_real(&real);
    let pd = DiagonalProjector::from_mask(masks[..dim].to_vec()).map_err(|e| e.to_string())?;
    let qd = DiagonalProjector::from_mask(masks[dim..2 * dim].to_vec()).map_err(|e| e.to_string())?;
    let (p, q) = (HermitianProjector::from_diagonal(&pd), HermitianProjector::from_diagonal(&qd));
    for (h, c) in [(&p, &pd), (&q, &qd)] {
        let quantum = born(h, &s).map_err(|e| e.to_string())? + fault;
        let classical = ctp::probability(c, &real).map_err(|e| e.to_string())?;
        if !close(quantum, classical, tol) {
            return Err(format!("Born {quantum} vs {classical}"));
        }
    }
    for ((a, ad), (b, bd)) in [((&q, &qd), (&p, &pd)), ((&p, &pd), (&q, &qd))] {
        match (sequential_conditional(a, b, &s), conditional(ad, bd, &real)) {
            (Ok(x), Ok(y)) if close(x, y, tol) => {}
            (Err(_), Err(_)) => {}
            (x, y) => return Err(format!("conditional {x:?} vs {y:?}")),
        }
    }
    Ok(())
}

fn commuting_sector(cfg: &SuiteConfig) -> Check {
    const NAME: &str = "commuting sector";
    let fault = cfg.fault(NAME);
    let mut rng = cfg.rng(400);
    let mut failure = None;
    for _ in 0..cfg.cases {
        let n = rng.random_range(1..=3usize);
        let w = weights(&mut rng, 1 << n, 1.0);
        let masks: Vec<bool> = (0..2 << n).map(|_| rng.random_bool(0.5)).collect();
        if failure.is_none() && commuting_case(n, &w, &masks, cfg.tolerance, fault).is_err() {
            let small = shrink(w, |w| commuting_case(n, w, &masks, cfg.tolerance, fault).is_err());
            let why = commuting_case(n, &small, &masks, cfg.tolerance, fault).unwrap_err();
            let bits: String = masks.iter().map(|b| if *b { '1' } else { '0' }).collect();
            failure = Some(format!("weights {small:?}, masks {bits}: {why}"));
        }
    }
    outcome(NAME, cfg.cases, failure)
}
