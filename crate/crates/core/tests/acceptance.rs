//! Acceptance suite: one PASS/FAIL line per criterion, with wall-clock
//! budgets. Runs without the libtest harness so every line is printed.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{mixed_signs, oracle_family};
use davkit::arith::gcd;
use davkit::bounds::{chi, diam, hypercube_bounds};
use davkit::constructions::{group_box_atom, hypercube_atom, power_subsequence_check, Certificate};
use davkit::inverse::{symmetric_max_templates, symmetric_submax_templates};
use davkit::reorder::{containment_check, is_nyctalopic, nyctalopic_extend, prefix_sums_distinct, refine_holds};
use davkit::search::{atoms_of_length, davenport, max_atoms, SearchConfig};
use davkit::zerosum::{atoms_brute, is_minimal};
use davkit::{AnySequence, Element, GroundSet, GroupSpec, Sequence};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn delta(m: i64) -> u64 {
    u64::from(m == 1)
}

fn intervals() -> Outcome {
    let mut count = 0;
    for m in 1..12i64 {
        for big in 1..=(12 - m) {
            let g = GroundSet::interval(-m, big).map_err(err)?;
            let r = davenport(&g, &cfg()).map_err(err)?;
            ensure(r.exact, || {
                format!("[-{m},{big}] not exact: [{}, {}]", r.lower, r.upper)
            })?;
            if gcd(m, big) == 1 {
                ensure(r.lower == (m + big) as u64, || {
                    format!("[-{m},{big}] gave {}, want {}", r.lower, m + big)
                })?;
            }
            if m == big {
                let want = if m == 1 { 2 } else { 2 * m as u64 - 1 };
                ensure(r.lower == want, || format!("[-{m},{m}] gave {}, want {want}", r.lower))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} intervals exact"))
}

fn unit_square() -> Outcome {
    let g = GroundSet::parse("[-1,1]^2").map_err(err)?;
    let r = davenport(&g, &cfg()).map_err(err)?;
    ensure(r.exact && r.lower == 4, || format!("got [{}, {}]", r.lower, r.upper))?;
    let w = r.witness.ok_or("no witness")?;
    ensure(w.len() == 4, || format!("witness {w} has length {}", w.len()))?;
    ensure(
        is_minimal(w.as_lattice().ok_or("not a lattice witness")?).map_err(err)?,
        || format!("{w} not minimal"),
    )?;
    Ok(format!("D = 4, witness {w}"))
}

fn as_set(atoms: Vec<AnySequence>) -> BTreeSet<AnySequence> {
    atoms.into_iter().collect()
}

fn template_set(templates: Vec<(davkit::inverse::CaseTag, Sequence<Element>)>) -> BTreeSet<AnySequence> {
    templates.into_iter().map(|(_, s)| AnySequence::from(s)).collect()
}

fn inverse_enumeration() -> Outcome {
    for m in 2..=5i64 {
        let g = GroundSet::interval(-m, m).map_err(err)?;
        let found = as_set(atoms_of_length(&g, (2 * m - 1) as u64, &cfg()).map_err(err)?);
        let want = template_set(symmetric_max_templates(m).map_err(err)?);
        ensure(found == want, || {
            format!("length {} over [-{m},{m}]: {found:?}", 2 * m - 1)
        })?;
    }
    for m in 3..=5i64 {
        let g = GroundSet::interval(-m, m).map_err(err)?;
        let found = as_set(atoms_of_length(&g, (2 * m - 2) as u64, &cfg()).map_err(err)?);
        let want = template_set(symmetric_submax_templates(m).map_err(err)?);
        let count = if m % 2 == 1 { 4 } else { 2 };
        ensure(found == want && found.len() == count, || {
            format!("length {} over [-{m},{m}]: {found:?}", 2 * m - 2)
        })?;
    }
    Ok("templates match for m = 2..5 and 3..5".into())
}

fn constructions() -> Outcome {
    let cubes = (1..=6)
        .map(|d| (1i64, d))
        .chain((1..=3).map(|d| (2, d)))
        .chain((1..=2).map(|d| (3, d)));
    let mut checked = 0;
    for (m, d) in cubes {
        let c = hypercube_atom(m, d).map_err(err)?;
        let want = (2 * m as u64 - 1 + delta(m)).pow(d);
        ensure(c.certificate == Certificate::MachineChecked, || {
            format!("hypercube ({m},{d}) not machine-checked")
        })?;
        ensure(c.sequence.len() == want, || {
            format!("hypercube ({m},{d}) length {}", c.sequence.len())
        })?;
        checked += 1;
    }
    for (n, m, d) in [(2u64, 1i64, 1u32), (2, 2, 1), (3, 1, 1), (3, 2, 1), (2, 2, 2)] {
        let c = group_box_atom(n, m, d).map_err(err)?;
        let want = n * (2 * m as u64 - 1 + delta(m)).pow(d);
        ensure(c.certificate == Certificate::MachineChecked, || {
            format!("group box ({n},{m},{d}) not machine-checked")
        })?;
        ensure(c.sequence.len() == want, || {
            format!("group box ({n},{m},{d}) length {}", c.sequence.len())
        })?;
        checked += 1;
    }
    Ok(format!("{checked} constructions machine-checked"))
}

fn group_products() -> Outcome {
    let mut values = Vec::new();
    for (n, m) in [(2u64, 1i64), (2, 2), (3, 1), (3, 2)] {
        let g = GroundSet::product(
            GroupSpec::cyclic(n).map_err(err)?,
            GroundSet::interval(-m, m).map_err(err)?,
        )
        .map_err(err)?;
        let r = davenport(&g, &cfg()).map_err(err)?;
        let want = n * (2 * m as u64 - 1 + delta(m));
        ensure(r.exact && r.lower == want, || {
            format!("{g}: [{}, {}], want {want}", r.lower, r.upper)
        })?;
        values.push(format!("{g}={want}"));
    }
    Ok(values.join(" "))
}

/// Values and maximum-length atom sets against brute force.
fn oracle_on(family: &[Vec<i64>]) -> Result<(), String> {
    for x in family {
        let g = GroundSet::explicit_scalars(x.clone()).map_err(err)?;
        let r = davenport(&g, &cfg()).map_err(err)?;
        ensure(r.exact, || format!("{x:?} not exact"))?;
        let alphabet: Vec<Element> = x.iter().map(|&v| Element::scalar(v)).collect();
        let cap = if mixed_signs(x) { diam(x).map_err(err)? } else { 1 };
        let brute = atoms_brute(&alphabet, cap as usize).map_err(err)?;
        let value = brute.iter().map(Sequence::len).max().unwrap_or(0);
        ensure(r.lower == value, || format!("{x:?}: search {}, brute {value}", r.lower))?;
        let searched = as_set(max_atoms(&g, &cfg()).map_err(err)?);
        let brute_max: BTreeSet<AnySequence> = brute
            .into_iter()
            .filter(|a| a.len() == value)
            .map(AnySequence::from)
            .collect();
        ensure(searched == brute_max, || format!("{x:?}: maximal atoms differ"))?;
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    let small = oracle_family(3, 4);
    let wide = oracle_family(5, 4);
    oracle_on(&small)?;
    oracle_on(&wide)?;
    Ok(format!(
        "{} subsets of [-3,3]\\{{0}} and {} of [-5,5]\\{{0}}",
        small.len(),
        wide.len()
    ))
}

fn reorderings() -> Outcome {
    let mut atoms = 0;
    let mut orderings = 0;
    for m in 1..10i64 {
        for big in 1..=(10 - m) {
            let g = GroundSet::interval(-m, big).map_err(err)?;
            let top = davenport(&g, &cfg()).map_err(err)?.lower;
            // the only length-1 atom is 0, which has no ordering to speak of
            for len in 2..=top {
                for a in atoms_of_length(&g, len, &cfg()).map_err(err)? {
                    let s = a.as_lattice().ok_or("not a lattice atom")?;
                    atoms += 1;
                    for p in 0..s.len() as usize {
                        let ord = nyctalopic_extend(s, &[p]).map_err(|e| format!("{s} seed {p}: {e}"))?;
                        ensure(is_nyctalopic(s, &ord.perm, ord.len()).map_err(err)?, || {
                            format!("{s} seed {p}")
                        })?;
                        ensure(prefix_sums_distinct(&ord), || {
                            format!("{s} seed {p}: repeated prefix sum")
                        })?;
                        containment_check(s, &ord, -m, big).map_err(|e| format!("{s} seed {p}: {e}"))?;
                        ensure(refine_holds(s, &ord).map_err(err)?, || {
                            format!("{s} seed {p}: refine fails")
                        })?;
                        orderings += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{orderings} orderings of {atoms} atoms, zero violations"))
}

fn sandwich() -> Outcome {
    let mut mixed = 0;
    for x in oracle_family(3, 4).into_iter().chain(oracle_family(5, 4)) {
        let value = |xs: &[i64]| -> Result<u64, String> {
            let r = davenport(&GroundSet::explicit_scalars(xs.to_vec()).map_err(err)?, &cfg()).map_err(err)?;
            ensure(r.exact, || format!("{xs:?} not exact"))?;
            Ok(r.lower)
        };
        let d = value(&x)?;
        if mixed_signs(&x) {
            let (lo, hi) = (chi(&x).map_err(err)?, diam(&x).map_err(err)?);
            ensure(lo <= d && d <= hi, || format!("{x:?}: {lo} <= {d} <= {hi} fails"))?;
            mixed += 1;
        } else {
            ensure(d == 0, || format!("{x:?}: one-sided set has D = {d}"))?;
            let mut with_zero = x.clone();
            with_zero.push(0);
            let d0 = value(&with_zero)?;
            ensure(d0 == 1, || format!("{with_zero:?}: D = {d0}"))?;
        }
    }
    Ok(format!(
        "{mixed} mixed-sign sets sandwiched, one-sided sets give 0 and 1"
    ))
}

fn hypercubes() -> Outcome {
    for m in 1..=4i64 {
        for d in 1..=4u32 {
            let b = hypercube_bounds(m as u64, d).map_err(err)?;
            ensure(b.lower <= b.upper, || {
                format!("m={m} d={d}: [{}, {}]", b.lower, b.upper)
            })?;
        }
    }
    for (m, d) in [(2i64, 2u32), (3, 2), (2, 3)] {
        let b = hypercube_bounds(m as u64, d).map_err(err)?;
        let c = hypercube_atom(m, d).map_err(err)?;
        ensure(c.sequence.len() == b.lower, || {
            format!("m={m} d={d}: witness length {} vs lower {}", c.sequence.len(), b.lower)
        })?;
        ensure(is_minimal(&c.sequence).map_err(err)?, || {
            format!("m={m} d={d}: witness not minimal")
        })?;
    }
    for (m, d, top) in [(2i64, 1u32, 3u64), (3, 1, 2), (2, 2, 2)] {
        for u in 1..=top {
            let r = power_subsequence_check(m, d, u).map_err(err)?;
            ensure(r.passed, || {
                format!("(m,d,u)=({m},{d},{u}): lengths {:?}", r.found_lengths)
            })?;
        }
    }
    Ok("bounds bracket, witnesses minimal, power subsequences are powers".into())
}

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "interval exactness", 30, intervals),
        (2, "unit square", 10, unit_square),
        (3, "inverse enumeration", 60, inverse_enumeration),
        (4, "construction certification", 120, constructions),
        (5, "cyclic group times interval", 300, group_products),
        (6, "oracle equivalence", 60, oracle_equivalence),
        (7, "reordering properties", 60, reorderings),
        (8, "bound sandwich", 60, sandwich),
        (9, "hypercube brackets", 60, hypercubes),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(budget) => Err(format!(
                "{detail}, but took {:.1}s over the {budget}s budget",
                elapsed.as_secs_f64()
            )),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail} [{:.2}s]", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}): {why} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
