//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Each criterion is checked at its stated tolerance and time limit.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tfu_cli::checks::{self, SuiteConfig};
use tfu_cli::{Format, ProblemFile, Report};
use tfu_core::ctp::{ClassicalDistribution, DiagonalProjector};
use tfu_core::inequality::{search_violation, singlet, wde_classical, wde_quantum_from_specs, AngleGrid, SearchConfig};
use tfu_core::logic::{conjoin, derive_value, negate, CompleteStateTable, Conjunction, PropositionId, TfuValue};
use tfu_core::measure::{noncommutativity_gap, TfuMeasureAssignment};
use tfu_core::quantum::{
    product_asymmetry, projector_from_spec, ComplexStateVector, HermitianProjector, ProjectorSpec,
};

type Verdict = Result<String, String>;

fn criterion(id: u32, title: &str, limit: Duration, body: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let verdict = body();
    let elapsed = start.elapsed();
    let (ok, detail) = match verdict {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
        Err(d) => (false, d),
    };
    println!("{} {id}. {title}: {detail} [{elapsed:.2?} / {limit:?}]", if ok { "PASS" } else { "FAIL" });
    ok
}

fn suites(names: &[&str], cases: usize, tolerance: f64) -> Verdict {
    let cfg = SuiteConfig::new(0, cases, tolerance);
    let mut lines = Vec::new();
    for name in names {
        let check = checks::run(name, &cfg).ok_or_else(|| format!("no suite {name}"))?;
        if !check.passed {
            return Err(format!("{name}: {}", check.counterexample.unwrap_or_default()));
        }
        lines.push(format!("{name} ({})", check.cases));
    }
    Ok(lines.join(", "))
}

fn truth_tables() -> Verdict {
    use TfuValue::{ManifestlyFalse as F, ManifestlyTrue as T, Undecidable as U};
    let d = Conjunction::Determinate;
    // rows q, columns p
    let expected = [[d(T), d(F), d(U)], [d(F), d(F), d(F)], [d(U), d(F), Conjunction::Ambiguous]];
    let order = [T, F, U];
    for (qi, q) in order.iter().enumerate() {
        for (pi, p) in order.iter().enumerate() {
            if conjoin(*p, *q) != expected[qi][pi] {
                return Err(format!("{p}∧{q} = {:?}", conjoin(*p, *q)));
            }
        }
    }
    if [negate(T), negate(F), negate(U)] != [F, T, U] {
        return Err("negation table".into());
    }
    Ok("9 conjunction cells and 3 negation cells exact".into())
}

/// `p` affirmative in state `i` iff bit `n − 1 − p` is clear.
fn rules_exhaustive() -> Verdict {
    let mut checked = 0usize;
    for n in 1..=3usize {
        let size = 1usize << n;
        let mut valid = 0usize;
        for code in 0..3usize.pow(size as u32) {
            let values: Vec<TfuValue> = (0..size).map(|k| TfuValue::ALL[(code / 3usize.pow(k as u32)) % 3]).collect();
            let Ok(table) = CompleteStateTable::new(n, values.clone()) else { continue };
            valid += 1;
            for p in 0..n {
                let v = derive_value(PropositionId(p), &table).map_err(|e| e.to_string())?;
                let affirmative = |i: usize| (i >> (n - 1 - p)) & 1 == 0;
                let all_f = |want: bool| {
                    (0..size).filter(|&i| affirmative(i) == want).all(|i| values[i] == TfuValue::ManifestlyFalse)
                };
                // rule I and rule II, both directions
                if (v == TfuValue::ManifestlyFalse) != all_f(true) || (v == TfuValue::ManifestlyTrue) != all_f(false) {
                    return Err(format!("n={n} table {values:?} p{p} -> {v}"));
                }
                checked += 1;
            }
        }
        let at_most_one_true = 2usize.pow(size as u32) + size * 2usize.pow(size as u32 - 1);
        if valid != at_most_one_true - 1 {
            return Err(format!("n={n}: {valid} valid tables"));
        }
    }
    Ok(format!("{checked} (table, proposition) pairs"))
}

/// Brute-force `[p][q]_p − [q][p]_q` from labelled cells.
fn gap_oracle(cells: &[(&str, f64)]) -> f64 {
    let mass =
        |keep: &dyn Fn(&[u8]) -> bool| cells.iter().filter(|(l, _)| keep(l.as_bytes())).map(|(_, m)| m).sum::<f64>();
    let prob = |k: usize| mass(&|l| l[k] == b'T') / (mass(&|l| l[k] == b'T') + mass(&|l| l[k] == b'F'));
    let cond = |q: usize, p: usize| {
        let tt = mass(&|l| l[p] == b'T' && l[q] == b'T');
        tt / (tt + mass(&|l| l[p] == b'T' && l[q] == b'F'))
    };
    prob(0) * cond(1, 0) - prob(1) * cond(0, 1)
}

type M2 = [[f64; 2]; 2];

fn mat_vec(m: &M2, v: [f64; 2]) -> [f64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0] * v[0] + v[1] * v[1]
}

fn exhibits() -> Verdict {
    let cells = [("TT", 1.0), ("TF", 1.0), ("UT", 2.0)];
    let m = TfuMeasureAssignment::from_labels(2, cells).map_err(|e| e.to_string())?;
    let gap = noncommutativity_gap(PropositionId(0), PropositionId(1), &m).map_err(|e| e.to_string())?;
    let oracle = gap_oracle(&cells);
    if (gap + 0.25).abs() > 1e-12 || (gap - oracle).abs() > 1e-12 {
        return Err(format!("gap {gap}, oracle {oracle}"));
    }

    let s = ComplexStateVector::basis(2, 0).map_err(|e| e.to_string())?;
    let p = projector_from_spec(&ProjectorSpec::qubit(0, FRAC_PI_2, 0.0), 2).map_err(|e| e.to_string())?;
    let q =
        HermitianProjector::from_diagonal(&DiagonalProjector::from_mask(vec![true, false]).map_err(|e| e.to_string())?);
    let asym = product_asymmetry(&p, &q, &s).map_err(|e| e.to_string())?;
    // explicit 2×2: P = |+⟩⟨+|, Q = diag(1, 0), s = (1, 0)
    let pm: M2 = [[0.5, 0.5], [0.5, 0.5]];
    let qm: M2 = [[1.0, 0.0], [0.0, 0.0]];
    let sv = [1.0, 0.0];
    let brute = norm2(mat_vec(&qm, mat_vec(&pm, sv))) - norm2(mat_vec(&pm, mat_vec(&qm, sv)));
    if (asym + 0.25).abs() > 1e-12 || (asym - brute).abs() > 1e-12 {
        return Err(format!("asymmetry {asym}, brute force {brute}"));
    }
    Ok(format!("gap {gap}, asymmetry {asym}"))
}

fn classical_wde() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut cases = 0;
    while cases < 10_000 {
        let w: Vec<f64> = (0..8).map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>() }).collect();
        let Ok(d) = ClassicalDistribution::from_weights(3, &w) else { continue };
        let t = wde_classical(&d).map_err(|e| e.to_string())?.triple;
        // summation: A = p0 affirmative ⇔ bit 2 clear, B bit 1, C bit 0
        let p = d.probabilities();
        let sum = |f: &dyn Fn(bool, bool, bool) -> bool| {
            (0..8).filter(|&i| f(i & 4 == 0, i & 2 == 0, i & 1 == 0)).map(|i| p[i]).sum::<f64>()
        };
        let (ab, nbc, ac) = (sum(&|a, b, _| a && b), sum(&|_, b, c| !b && c), sum(&|a, _, c| a && c));
        if (t.ab - ab).abs() > 1e-12 || (t.not_b_c - nbc).abs() > 1e-12 || (t.ac - ac).abs() > 1e-12 {
            return Err(format!("triple {t:?} vs summation ({ab}, {nbc}, {ac})"));
        }
        if !t.holds(1e-12) {
            return Err(format!("violation at weights {w:?}"));
        }
        cases += 1;
    }
    Ok(format!("{cases} distributions, 0 violations"))
}

type M4 = [[f64; 4]; 4];

fn qubit(theta: f64) -> M2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [[c * c, c * s], [s * c, s * s]]
}

fn kron(a: M2, b: M2) -> M4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i / 2][j / 2] * b[i % 2][j % 2]))
}

fn apply4(m: &M4, v: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| (0..4).map(|j| m[i][j] * v[j]).sum())
}

fn singlet_born() -> f64 {
    const I: M2 = [[1.0, 0.0], [0.0, 1.0]];
    let s = [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0];
    let a = kron(qubit(0.0), I);
    let b = kron(I, qubit(FRAC_PI_4));
    let c = kron(I, qubit(FRAC_PI_2));
    let not_b: M4 = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 } - b[i][j]));
    let seq = |x: &M4, y: &M4| apply4(y, apply4(x, s)).iter().map(|v| v * v).sum::<f64>();
    let sym = |x: &M4, y: &M4| 0.5 * (seq(x, y) + seq(y, x));
    sym(&a, &c) - sym(&a, &b) - sym(&not_b, &c)
}

fn singlet_violation() -> Verdict {
    let expected = 0.25 - (PI / 8.0).sin().powi(2);
    let born = singlet_born();
    if (born - expected).abs() > 1e-12 {
        return Err(format!("explicit 4×4 evaluation gives {born}, expected {expected}"));
    }
    let angles = [0.0, FRAC_PI_4, FRAC_PI_2];
    let specs = [
        ProjectorSpec::qubit(0, angles[0], 0.0),
        ProjectorSpec::qubit(1, angles[1], 0.0),
        ProjectorSpec::qubit(1, angles[2], 0.0),
    ];
    let s = singlet();
    let v = wde_quantum_from_specs(&specs, &s, Default::default()).map_err(|e| e.to_string())?.triple.violation();
    if (v - born).abs() > 1e-9 {
        return Err(format!("engine {v} vs explicit {born}"));
    }
    let grid = AngleGrid::range(0.0, FRAC_PI_2, FRAC_PI_4).map_err(|e| e.to_string())?;
    let config = SearchConfig::planar(grid);
    let first = search_violation(&config, &s).map_err(|e| e.to_string())?.ok_or("no witness")?;
    for _ in 0..5 {
        let again = search_violation(&config, &s).map_err(|e| e.to_string())?.ok_or("no witness")?;
        if again != first || again.magnitude.to_bits() != first.magnitude.to_bits() {
            return Err("search is not deterministic".into());
        }
    }
    if first.angles[..3] != angles || (first.magnitude - expected).abs() > 1e-9 {
        return Err(format!("witness θ={:?} magnitude {}", &first.angles[..3], first.magnitude));
    }
    Ok(format!("violation {v:.13}, witness θ=(0, π/4, π/2)"))
}

fn cli_determinism() -> Verdict {
    let run = || Command::new(env!("CARGO_BIN_EXE_tfu")).args(["check", "--seed", "0"]).output();
    let first = run().map_err(|e| e.to_string())?;
    let second = run().map_err(|e| e.to_string())?;
    if first.status.code() != Some(0) {
        return Err(format!("check exited {:?}", first.status.code()));
    }
    if first.stdout != second.stdout {
        return Err("check reports differ".into());
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut fixtures = 0;
    for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let file = ProblemFile::load(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if ProblemFile::from_toml(&file.to_toml()).map_err(|e| e.to_string())? != file {
            return Err(format!("{} does not round-trip", path.display()));
        }
        let command = if path.to_string_lossy().contains("search") { "search" } else { "eval" };
        let out = Command::new(env!("CARGO_BIN_EXE_tfu"))
            .args([command, path.to_str().unwrap()])
            .output()
            .map_err(|e| e.to_string())?;
        let report: Report = serde_json::from_slice(&out.stdout).map_err(|e| format!("{}: {e}", path.display()))?;
        if report.render(Format::Structured).as_bytes() != out.stdout {
            return Err(format!("report for {} does not round-trip", path.display()));
        }
        fixtures += 1;
    }
    Ok(format!("check seed 0 byte-identical ({} bytes), {fixtures} fixtures round-trip", first.stdout.len()))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "TFU truth tables", Duration::from_millis(1), truth_tables),
        criterion(2, "rules I/II exhaustive, n ≤ 3", secs(10), rules_exhaustive),
        criterion(3, "CTP identity suite, 10^4 per n, 1e-12", secs(30), || {
            suites(
                &["ctp identities n=1", "ctp identities n=2", "ctp identities n=3", "ctp identities n=4"],
                10_000,
                1e-12,
            )
        }),
        criterion(4, "TFU measure suite, 10^4, 1e-12", secs(30), || {
            suites(
                &[
                    "measure summation",
                    "measure complement",
                    "measure scale invariance",
                    "measure undecidable inertness",
                    "augmented identity",
                ],
                10_000,
                1e-12,
            )
        }),
        criterion(5, "non-commutativity exhibits, 1e-12", secs(1), exhibits),
        criterion(6, "classical Wigner-d'Espagnat, 10^4, 1e-12", secs(5), classical_wde),
        criterion(7, "singlet violation, 1e-9", secs(10), singlet_violation),
        criterion(8, "commuting-sector equivalence, 10^3, 1e-12", secs(10), || {
            suites(&["commuting sector"], 1_000, 1e-12)
        }),
        criterion(9, "CLI determinism and fixture round-trip", secs(10), cli_determinism),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
