//! Runs validated jobs against the library.

use std::io::Write;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use davkit::bounds::{
    self, chi, diam, ground_bounds, group_davenport, hypercube_bounds, interval_davenport, product_bounds, BoundReport,
    Provenance,
};
use davkit::constructions::{
    group_box_atom_capped, group_box_weights, hypercube_atom_capped, hypercube_profile, interval_max_atom,
    power_subsequence_check_capped, two_element_atom, Certificate, DEFAULT_CHECK_CAP,
};
use davkit::inverse::{classify_interval_max, classify_symmetric_max, classify_symmetric_submax, verify_inverse};
use davkit::reorder::{
    containment_check, greedy_box_reorder_seeded, nyctalopic_extend, prefix_sums_distinct, refine_holds,
};
use davkit::search::{atoms_of_length, davenport, max_atoms, Progress, SearchConfig};
use davkit::zerosum::{find_proper_zero_subsum, DEFAULT_NAIVE_CAP};
use davkit::{AnySequence, Element, GroundSet, Sequence};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::job::{BoundsQuery, ConstructQuery, Job, ReorderMethod};

#[derive(Clone, Debug)]
pub struct ExecOptions {
    pub threads: Option<usize>,
    /// Cap on ground-set enumeration and naive subsequence scans.
    pub guard: Option<u128>,
    /// Stream search progress to standard error.
    pub progress: bool,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions {
            threads: None,
            guard: None,
            progress: true,
        }
    }
}

/// Everything a command produces, before rendering.
#[derive(Clone, Debug)]
pub struct Report {
    pub result: Value,
    pub provenance: Vec<String>,
    pub exact: bool,
    pub stats: Value,
    /// Atom list for CSV output.
    pub table: Option<Vec<AnySequence>>,
    /// Set when a verification ran but found a discrepancy.
    pub failure: Option<String>,
}

impl Report {
    fn new(result: Value, provenance: Vec<String>, exact: bool) -> Self {
        Report {
            result,
            provenance,
            exact,
            stats: json!({}),
            table: None,
            failure: None,
        }
    }
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn tags(provenance: &[Provenance]) -> Vec<String> {
    provenance
        .iter()
        .map(|p| to_value(p).as_str().expect("provenance tags are strings").to_string())
        .collect()
}

const SEARCH_TAG: &str = "exhaustive-search";

/// Prints a progress line to standard error at most once a second, starting
/// after the first second.
fn progress_printer() -> davkit::search::ProgressFn {
    let start = Instant::now();
    let last = Mutex::new(start);
    Arc::new(move |p: &Progress| {
        let now = Instant::now();
        let mut last = last.lock().expect("progress lock");
        if now.duration_since(start) < Duration::from_secs(1) || now.duration_since(*last) < Duration::from_secs(1) {
            return;
        }
        *last = now;
        let _ = writeln!(
            std::io::stderr(),
            "davkit: {}/{} branches, best length {}",
            p.branches_done,
            p.branches_total,
            p.best
        );
    })
}

fn search_config(opts: &ExecOptions, cap: Option<u64>, max_nodes: Option<u64>) -> SearchConfig {
    let mut c = SearchConfig {
        cap,
        threads: opts.threads,
        node_limit: max_nodes,
        ..SearchConfig::default()
    };
    if let Some(g) = opts.guard {
        c.enumeration_cap = g;
    }
    if opts.progress {
        c.progress = Some(progress_printer());
    }
    c
}

fn bounds_for(ground: &GroundSet) -> davkit::Result<BoundReport> {
    match ground {
        GroundSet::GroupProduct { group, base } => product_bounds(group, base),
        _ => ground_bounds(ground),
    }
}

fn bound_json(b: &BoundReport) -> Value {
    json!({"lower": b.lower, "upper": b.upper, "exact": b.exact, "provenance": tags(&b.provenance)})
}

fn sequences(list: &[AnySequence]) -> Value {
    to_value(list)
}

pub fn execute(job: &Job, opts: &ExecOptions) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = match job {
        Job::Davenport { ground, cap, max_nodes } => run_davenport(ground, search_config(opts, *cap, *max_nodes))?,
        Job::Atoms {
            ground,
            length,
            max_nodes,
        } => run_atoms(ground, *length, search_config(opts, None, *max_nodes))?,
        Job::CheckMinimal { ground, sequence } => run_check_minimal(ground.as_ref(), sequence)?,
        Job::Reorder {
            ground,
            sequence,
            seed,
            method,
        } => run_reorder(ground.as_ref(), sequence, seed.as_ref(), *method)?,
        Job::Bounds(q) => run_bounds(q)?,
        Job::Construct(q) => run_construct(q, opts)?,
        Job::Classify { m, big_m, sequence } => run_classify(*m, *big_m, sequence)?,
        Job::Verify { m_values } => run_verify(m_values, search_config(opts, None, None))?,
        Job::HuntChiGap {
            radius,
            max_size,
            max_nodes,
        } => {
            let mut cfg = search_config(opts, None, *max_nodes);
            cfg.progress = None;
            run_hunt(*radius, *max_size, &cfg)?
        }
    };
    let elapsed = start.elapsed().as_millis() as u64;
    match report.stats.as_object_mut() {
        Some(obj) => {
            obj.insert("elapsed_ms".into(), json!(elapsed));
        }
        None => report.stats = json!({ "elapsed_ms": elapsed }),
    }
    Ok(report)
}

fn run_davenport(ground: &GroundSet, cfg: SearchConfig) -> Result<Report, CliError> {
    let r = davenport(ground, &cfg)?;
    let b = bounds_for(ground)?;
    if r.exact && !b.admits(r.lower) {
        return Err(CliError::consistency(format!(
            "search value {} for {ground} is outside the proven range [{}, {}]",
            r.lower, b.lower, b.upper
        )));
    }
    let mut provenance = tags(&b.provenance);
    provenance.push(SEARCH_TAG.into());
    // an interrupted search still leaves the proven bounds
    let lower = r.lower.max(b.lower);
    let upper = r.upper.min(b.upper);
    let exact = r.exact || lower == upper;
    let result = json!({
        "ground": ground.to_string(),
        "value": if exact { json!(lower) } else { Value::Null },
        "lower": lower,
        "upper": upper,
        "witness": r.witness,
        "depth": r.depth,
        "search": {"lower": r.lower, "upper": r.upper, "exact": r.exact},
        "bounds": bound_json(&b),
    });
    let mut report = Report::new(result, provenance, exact);
    report.stats = to_value(&r.stats);
    Ok(report)
}

fn run_atoms(ground: &GroundSet, length: Option<u64>, cfg: SearchConfig) -> Result<Report, CliError> {
    let (atoms, length) = match length {
        Some(len) => (atoms_of_length(ground, len, &cfg)?, json!(len)),
        None => {
            let atoms = max_atoms(ground, &cfg)?;
            let len = atoms.first().map_or(0, AnySequence::len);
            (atoms, json!(len))
        }
    };
    let result = json!({
        "ground": ground.to_string(),
        "length": length,
        "count": atoms.len(),
        "atoms": sequences(&atoms),
    });
    let mut report = Report::new(result, vec![SEARCH_TAG.into()], true);
    report.table = Some(atoms);
    Ok(report)
}

fn membership(ground: Option<&GroundSet>, s: &AnySequence) -> Result<Value, CliError> {
    let Some(g) = ground else { return Ok(Value::Null) };
    let inside = match s {
        AnySequence::Lattice(s) => {
            if g.group().is_some() {
                return Err(CliError::usage(format!("{g} is a group product; write terms as (g|x)")));
            }
            s.iter().all(|(x, _)| x.dim() == g.dim() && g.contains(x))
        }
        AnySequence::Mixed(s) => s.iter().all(|(x, _)| g.contains_mixed(x)),
    };
    Ok(json!(inside))
}

fn run_check_minimal(ground: Option<&GroundSet>, s: &AnySequence) -> Result<Report, CliError> {
    let in_ground = membership(ground, s)?;
    let (sum, witness) = match s {
        AnySequence::Lattice(s) => (to_value(s.sum()), find_proper_zero_subsum(s)?.map(|w| to_value(&w.sub))),
        AnySequence::Mixed(s) => (to_value(s.sum()), find_proper_zero_subsum(s)?.map(|w| to_value(&w.sub))),
    };
    let zero_sum = s.is_zero_sum();
    let result = json!({
        "sequence": s,
        "in_ground": in_ground,
        "sum": sum,
        "zero_sum": zero_sum,
        "minimal": zero_sum && witness.is_none(),
        "proper_zero_subsum": witness,
    });
    Ok(Report::new(result, vec![], true))
}

fn seed_positions(s: &Sequence<Element>, seed: Option<&Element>) -> Result<Vec<usize>, CliError> {
    let Some(e) = seed else { return Ok(vec![]) };
    s.flatten()
        .iter()
        .position(|x| x == e)
        .map(|p| vec![p])
        .ok_or_else(|| CliError::usage(format!("seed element {e} does not occur in {s}")))
}

fn run_reorder(
    ground: Option<&GroundSet>,
    s: &Sequence<Element>,
    seed: Option<&Element>,
    method: ReorderMethod,
) -> Result<Report, CliError> {
    let seed = seed_positions(s, seed)?;
    match method {
        ReorderMethod::Nyctalopic => {
            let seed = if seed.is_empty() { vec![0] } else { seed };
            let ord = nyctalopic_extend(s, &seed)?;
            let terms: Vec<i64> = s.flatten().iter().map(|e| e.coords()[0]).collect();
            let (lo, hi) = match ground.map(|g| (g, g.scalars())) {
                Some((_, Some(xs))) => (*xs.first().expect("nonempty"), *xs.last().expect("nonempty")),
                Some((g, None)) => return Err(CliError::usage(format!("{g} is not a set of integers"))),
                None => (
                    *terms.iter().min().expect("nonempty"),
                    *terms.iter().max().expect("nonempty"),
                ),
            };
            let containment = containment_check(s, &ord, lo, hi)?;
            let distinct = prefix_sums_distinct(&ord);
            let refine = refine_holds(s, &ord)?;
            if !distinct || !refine {
                return Err(CliError::consistency(format!(
                    "nyctalopic ordering of {s} breaks distinctness or the x_1 + x_3 exclusion"
                )));
            }
            let result = json!({
                "sequence": s,
                "method": "nyctalopic",
                "order": ord.elements(s),
                "perm": ord.perm,
                "prefix_sums": ord.prefix_sums,
                "range": [lo, hi],
                "containment": containment,
                "prefix_sums_distinct": distinct,
                "refine_holds": refine,
            });
            Ok(Report::new(result, vec![], true))
        }
        ReorderMethod::Greedy => {
            let r = greedy_box_reorder_seeded(s, &seed)?;
            let result = json!({
                "sequence": s,
                "method": "greedy",
                "order": r.ordering.elements(s),
                "perm": r.ordering.perm,
                "prefix_sums": r.ordering.prefix_sums,
                "prefix_sums_distinct": prefix_sums_distinct(&r.ordering),
                "lo": r.lo,
                "hi": r.hi,
                "max_sup": r.max_sup,
                "ratio": r.ratio,
                "steinitz_constant": r.steinitz_constant,
            });
            Ok(Report::new(result, vec![], true))
        }
    }
}

fn run_bounds(q: &BoundsQuery) -> Result<Report, CliError> {
    let (input, b, mut extra) = match q {
        BoundsQuery::Ground(g) => {
            let b = bounds_for(g)?;
            let mut extra = serde_json::Map::new();
            if let Some(xs) = g.scalars() {
                if xs.iter().any(|&x| x < 0) && xs.iter().any(|&x| x > 0) {
                    extra.insert("chi".into(), json!(chi(&xs)?));
                    extra.insert("diam".into(), json!(diam(&xs)?));
                }
            }
            (json!({"ground": g.to_string()}), b, extra)
        }
        BoundsQuery::Interval { m, big_m } => (
            json!({"m": m, "M": big_m}),
            interval_davenport(*m, *big_m)?,
            Default::default(),
        ),
        BoundsQuery::Hypercube { m, d } => {
            let mut extra = serde_json::Map::new();
            let ms = vec![*m; *d as usize];
            extra.insert("box_upper".into(), json!(bounds::box_upper(&ms)?));
            if *d == 2 {
                extra.insert("square_upper".into(), json!(bounds::square_upper(*m, *m)?));
            }
            (json!({"m": m, "d": d}), hypercube_bounds(*m, *d)?, extra)
        }
        BoundsQuery::Group(g) => (json!({"group": g.to_string()}), group_davenport(g)?, Default::default()),
    };
    let mut result = serde_json::Map::new();
    result.insert("input".into(), input);
    result.insert("lower".into(), json!(b.lower));
    result.insert("upper".into(), json!(b.upper));
    result.append(&mut extra);
    Ok(Report::new(Value::Object(result), tags(&b.provenance), b.exact))
}

fn certificate_name(c: Certificate) -> String {
    to_value(c).as_str().expect("certificate is a string").to_string()
}

fn run_construct(q: &ConstructQuery, opts: &ExecOptions) -> Result<Report, CliError> {
    let tag = |p: Provenance| tags(&[p]);
    let report = match *q {
        ConstructQuery::TwoElement { x, y } => {
            let c = two_element_atom(x, y)?;
            let checked = c.certificate == Certificate::MachineChecked;
            let result =
                json!({"kind": "two-element", "sequence": c.sequence, "certificate": certificate_name(c.certificate)});
            Report::new(result, tag(Provenance::ChiLower), checked)
        }
        ConstructQuery::IntervalMax { m, big_m } => {
            let c = interval_max_atom(m, big_m)?;
            let checked = c.certificate == Certificate::MachineChecked;
            let result =
                json!({"kind": "interval-max", "sequence": c.sequence, "certificate": certificate_name(c.certificate)});
            Report::new(result, tag(Provenance::CoprimeInterval), checked)
        }
        ConstructQuery::Hypercube { m, d, cap } => {
            let c = hypercube_atom_capped(m, d, cap.unwrap_or(DEFAULT_CHECK_CAP))?;
            let checked = c.certificate == Certificate::MachineChecked;
            let result = json!({
                "kind": "hypercube",
                "m": m,
                "d": d,
                "length": c.sequence.len(),
                "sequence": c.sequence,
                "certificate": certificate_name(c.certificate),
            });
            Report::new(result, tag(Provenance::HypercubeConstruction), checked)
        }
        ConstructQuery::GroupBox { n, m, d, cap } => {
            let c = group_box_atom_capped(n, m, d, cap.unwrap_or(DEFAULT_CHECK_CAP))?;
            let checked = c.certificate == Certificate::MachineChecked;
            let result = json!({
                "kind": "group-box",
                "n": n,
                "m": m,
                "d": d,
                "length": c.sequence.len(),
                "sequence": c.sequence,
                "certificate": certificate_name(c.certificate),
            });
            Report::new(result, tag(Provenance::GroupBoxConstruction), checked)
        }
        ConstructQuery::PowerCheck { m, d, u } => {
            let r = power_subsequence_check_capped(m, d, u, opts.guard.unwrap_or(DEFAULT_NAIVE_CAP))?;
            let mut report = Report::new(to_value(&r), tag(Provenance::HypercubeConstruction), true);
            if !r.passed {
                report.failure = Some(format!("ss_{d}^{u} has zero-sum subsequences other than its powers"));
            }
            report
        }
        ConstructQuery::Profile { m, d } => {
            let p = hypercube_profile(m, d)?;
            let result = json!({"kind": "profile", "m": m, "d": d, "length": p.len(), "profile": p});
            Report::new(result, tag(Provenance::HypercubeConstruction), true)
        }
        ConstructQuery::Weights { m, d } => {
            let (p, w) = group_box_weights(m, d)?;
            let result = json!({"kind": "weights", "m": m, "d": d, "profile": p, "weights": w});
            Report::new(result, tag(Provenance::GroupBoxConstruction), true)
        }
    };
    Ok(report)
}

fn run_classify(m: i64, big_m: Option<i64>, s: &Sequence<Element>) -> Result<Report, CliError> {
    let len = s.len() as i64;
    let upper = big_m.unwrap_or(m);
    let (kind, verdict) = if len == m + upper {
        ("interval-max", classify_interval_max(m, upper, s)?)
    } else if upper == m && len == 2 * m - 1 {
        ("symmetric-max", classify_symmetric_max(m, s)?)
    } else if upper == m && len == 2 * m - 2 {
        ("symmetric-submax", classify_symmetric_submax(m, s)?)
    } else {
        let lengths = if upper == m {
            format!("{}, {} or {}", 2 * m, 2 * m - 1, 2 * m - 2)
        } else {
            format!("{}", m + upper)
        };
        return Err(CliError::usage(format!(
            "classify over [-{m},{upper}] covers sequences of length {lengths}, got {len}"
        )));
    };
    let result = json!({
        "sequence": s,
        "ground": format!("[{},{}]", -m, upper),
        "kind": kind,
        "matches": verdict.matches,
        "case": verdict.case,
    });
    Ok(Report::new(result, vec![], true))
}

fn run_verify(m_values: &[i64], cfg: SearchConfig) -> Result<Report, CliError> {
    let r = verify_inverse(m_values, &cfg)?;
    let failure = (!r.passed).then(|| {
        let bad: Vec<String> = r
            .discrepancies()
            .map(|c| format!("{} length {}", c.ground, c.length))
            .collect();
        format!("inverse templates disagree with enumeration: {}", bad.join("; "))
    });
    let mut report = Report::new(to_value(&r), vec![SEARCH_TAG.into()], true);
    report.failure = failure;
    Ok(report)
}

/// Explicit subsets of `[-r, r] \ {0}` with both signs and at most
/// `max_size` elements, in increasing bitmask order.
fn mixed_sign_subsets(radius: i64, max_size: usize) -> Vec<Vec<i64>> {
    let pool: Vec<i64> = (-radius..=radius).filter(|&x| x != 0).collect();
    (1u64..1 << pool.len())
        .filter(|mask| mask.count_ones() as usize <= max_size)
        .map(|mask| {
            (0..pool.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pool[i])
                .collect::<Vec<i64>>()
        })
        .filter(|x| x.iter().any(|&v| v < 0) && x.iter().any(|&v| v > 0))
        .collect()
}

fn run_hunt(radius: i64, max_size: usize, cfg: &SearchConfig) -> Result<Report, CliError> {
    let sets = mixed_sign_subsets(radius, max_size);
    let mut gaps = Vec::new();
    let mut inexact = Vec::new();
    for x in &sets {
        let r = davenport(&GroundSet::explicit_scalars(x.clone())?, cfg)?;
        let lower = chi(x)?;
        if !r.exact {
            inexact.push(json!({"set": x, "chi": lower, "lower": r.lower, "upper": r.upper}));
        } else if lower < r.lower {
            gaps.push(json!({"set": x, "chi": lower, "davenport": r.lower, "witness": r.witness}));
        }
    }
    let result = json!({
        "radius": radius,
        "max_size": max_size,
        "sets_checked": sets.len(),
        "gaps": gaps,
        "inexact": inexact,
    });
    let exact = inexact.is_empty();
    Ok(Report::new(result, vec!["chi-lower".into(), SEARCH_TAG.into()], exact))
}
