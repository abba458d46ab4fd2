//! Exact Davenport constants by orderly enumeration of atoms.
//!
//! Multisets are grown in nondecreasing alphabet order, so each is visited
//! once. Every visited partial multiset is zero-sum free; the set of its
//! nonempty subsums is carried along. Appending `x` then does one of three
//! things:
//!
//! * the total becomes zero: the result is an atom (a proper zero-sum part
//!   would leave a zero-sum complement inside the zero-sum free prefix), so
//!   it is recorded and not extended;
//! * `-x` is a subsum: a proper zero-sum part appears, and every extension
//!   keeps it, so the branch dies;
//! * otherwise the prefix stays zero-sum free and the subsum set becomes
//!   `R | (R + x) | {x}`.
//!
//! A branch is also cut when some lattice coordinate of the running sum can
//! no longer be cancelled by the remaining slots and letters.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{box_upper, group_davenport};
use crate::element::{Element, MixedElement, Symbol};
use crate::error::{Error, Result};
use crate::ground::{Alphabet, GroundSet, DEFAULT_ENUMERATION_CAP};
use crate::group::GroupSpec;
use crate::sequence::{AnySequence, Sequence};

/// Dense subsum tables larger than this many bits fall back to hashing.
const DENSE_BIT_LIMIT: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Progress {
    pub branches_done: usize,
    pub branches_total: usize,
    /// Longest atom among the branches finished so far.
    pub best: u64,
}

pub type ProgressFn = Arc<dyn Fn(&Progress) + Send + Sync>;

#[derive(Clone)]
pub struct SearchConfig {
    /// Lowers the search depth below [`length_bound`].
    pub cap: Option<u64>,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Node budget per first-element branch. Exhausting it makes the result
    /// inexact but keeps it deterministic.
    pub node_limit: Option<u64>,
    pub enumeration_cap: u128,
    pub progress: Option<ProgressFn>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cap: None,
            threads: None,
            node_limit: None,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            progress: None,
        }
    }
}

impl fmt::Debug for SearchConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchConfig")
            .field("cap", &self.cap)
            .field("threads", &self.threads)
            .field("node_limit", &self.node_limit)
            .field("enumeration_cap", &self.enumeration_cap)
            .field("progress", &self.progress.is_some())
            .finish()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
    pub elapsed_ms: u64,
    /// False when a node limit cut the search short.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DavenportResult {
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    /// An atom of length `lower`.
    pub witness: Option<AnySequence>,
    /// Maximal atom length explored.
    pub depth: u64,
    pub stats: SearchStats,
}

/// Proven upper bound on `D(ground)` used as the default search depth.
///
/// One-dimensional sets with both signs give `diam`; one-signed sets give 0,
/// or 1 when 0 is present. In dimension at least 2 the Steinitz box product
/// over the enclosing symmetric box is used, after dropping axes on which
/// every point is 0. Products multiply the group bound with the base bound.
pub fn length_bound(ground: &GroundSet) -> Result<u64> {
    if let GroundSet::GroupProduct { group, base } = ground {
        let dg = group_davenport(group)?.upper;
        return dg.checked_mul(length_bound(base)?).ok_or(Error::Overflow);
    }
    if let Some(values) = ground.scalars() {
        return Ok(one_dim_length_bound(&values));
    }
    let mut axes = Vec::new();
    let mut widths = Vec::new();
    for (axis, (lo, hi)) in ground.lattice_bounds().into_iter().enumerate() {
        let m = lo.unsigned_abs().max(hi.unsigned_abs());
        if m > 0 {
            axes.push(axis);
            widths.push(m);
        }
    }
    match axes.len() {
        0 => Ok(1),
        1 => {
            let values: Vec<i64> = ground.lattice_points().iter().map(|e| e.coords()[axes[0]]).collect();
            Ok(one_dim_length_bound(&values))
        }
        _ => box_upper(&widths),
    }
}

fn one_dim_length_bound(values: &[i64]) -> u64 {
    let lo = values.iter().copied().min().unwrap_or(0);
    let hi = values.iter().copied().max().unwrap_or(0);
    if lo < 0 && hi > 0 {
        hi.abs_diff(lo)
    } else {
        u64::from(values.contains(&0))
    }
}

/// `D(ground)`, exact when the search finishes at the full length bound.
pub fn davenport(ground: &GroundSet, config: &SearchConfig) -> Result<DavenportResult> {
    let start = Instant::now();
    let bound = length_bound(ground)?;
    let depth = config.cap.map_or(bound, |c| c.min(bound));
    let alphabet = ground.enumerate_capped(config.enumeration_cap)?;
    let engine = Engine::build(ground.group(), &alphabet, depth)?;
    let outcome = engine.run(Mode::Longest, config)?;
    let best = outcome.best.len() as u64;
    let witness = if outcome.best.is_empty() {
        None
    } else {
        Some(materialize(&alphabet, &outcome.best)?)
    };
    let exact = best == bound || (outcome.complete && depth == bound);
    Ok(DavenportResult {
        lower: best,
        upper: if exact { best } else { bound },
        exact,
        witness,
        depth,
        stats: SearchStats {
            nodes: outcome.nodes,
            prunes: outcome.prunes,
            elapsed_ms: start.elapsed().as_millis() as u64,
            complete: outcome.complete,
        },
    })
}

/// Every atom of length exactly `len`, sorted. Fails when a node limit
/// interrupts the enumeration.
pub fn atoms_of_length(ground: &GroundSet, len: u64, config: &SearchConfig) -> Result<Vec<AnySequence>> {
    if len == 0 {
        return Err(Error::InvalidArgument("atom length must be at least 1".into()));
    }
    let alphabet = ground.enumerate_capped(config.enumeration_cap)?;
    let engine = Engine::build(ground.group(), &alphabet, len)?;
    let outcome = engine.run(Mode::Collect, config)?;
    if !outcome.complete {
        return Err(Error::InvalidArgument(format!(
            "node limit reached before all atoms of length {len} were listed"
        )));
    }
    let mut out = outcome
        .atoms
        .iter()
        .map(|picks| materialize(&alphabet, picks))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// All atoms of maximal length. Needs an exact [`davenport`] result.
pub fn max_atoms(ground: &GroundSet, config: &SearchConfig) -> Result<Vec<AnySequence>> {
    let d = davenport(ground, config)?;
    if !d.exact {
        return Err(Error::InvalidArgument(format!(
            "Davenport constant not determined: bounds [{}, {}]",
            d.lower, d.upper
        )));
    }
    if d.lower == 0 {
        return Ok(Vec::new());
    }
    atoms_of_length(ground, d.lower, config)
}

fn materialize(alphabet: &Alphabet, picks: &[usize]) -> Result<AnySequence> {
    Ok(match alphabet {
        Alphabet::Lattice(xs) => AnySequence::Lattice(Sequence::from_elements(picks.iter().map(|&i| xs[i].clone()))?),
        Alphabet::Mixed(xs) => AnySequence::Mixed(Sequence::from_elements(picks.iter().map(|&i| xs[i].clone()))?),
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Track one longest atom.
    Longest,
    /// Collect every atom of length exactly `depth`.
    Collect,
}

/// A letter split into its group index and lattice coordinates.
struct Letter {
    g: usize,
    v: Vec<i64>,
    is_zero: bool,
}

/// Finite abelian group with elements numbered and an addition table.
struct GroupTable {
    order: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
}

impl GroupTable {
    fn trivial() -> Self {
        GroupTable {
            order: 1,
            add: vec![0],
            neg: vec![0],
        }
    }

    fn build(group: &GroupSpec) -> Result<(Self, HashMap<Vec<u64>, usize>)> {
        let elements: Vec<Vec<u64>> = group
            .elements()
            .into_iter()
            .map(|g| g.iter().map(|r| r.value()).collect())
            .collect();
        let index: HashMap<Vec<u64>, usize> = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let moduli = group.factors();
        let order = elements.len();
        let mut add = vec![0; order * order];
        let mut neg = vec![0; order];
        for (i, a) in elements.iter().enumerate() {
            let minus: Vec<u64> = a.iter().zip(moduli).map(|(&x, &n)| (n - x) % n).collect();
            neg[i] = index[&minus];
            for (j, b) in elements.iter().enumerate() {
                let sum: Vec<u64> = a.iter().zip(b).zip(moduli).map(|((&x, &y), &n)| (x + y) % n).collect();
                add[i * order + j] = index[&sum];
            }
        }
        Ok((GroupTable { order, add, neg }, index))
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }
}

/// Bit layout for subsums: one block per group element, each block a
/// mixed-radix index over the lattice box that can hold subsums of at most
/// `depth` letters.
struct DenseLayout {
    lo: Vec<i64>,
    hi: Vec<i64>,
    strides: Vec<i64>,
    block_words: usize,
    words: usize,
}

impl DenseLayout {
    fn lin(&self, v: &[i64]) -> Option<usize> {
        let mut idx = 0i64;
        for (c, &x) in v.iter().enumerate() {
            if x < self.lo[c] || x > self.hi[c] {
                return None;
            }
            idx += (x - self.lo[c]) * self.strides[c];
        }
        Some(idx as usize)
    }

    fn bit(&self, g: usize, v: &[i64]) -> Option<usize> {
        self.lin(v).map(|l| g * self.block_words * 64 + l)
    }
}

/// Precomputed bit data for one letter.
struct DenseLetter {
    own: usize,
    neg: Option<usize>,
    shift: isize,
}

enum Subsums {
    Dense {
        layout: DenseLayout,
        letters: Vec<DenseLetter>,
    },
    Hashed,
}

struct Engine {
    letters: Vec<Letter>,
    group: GroupTable,
    dim: usize,
    depth: usize,
    /// Per-coordinate minimum and maximum over letters `i..`.
    suffix_min: Vec<Vec<i64>>,
    suffix_max: Vec<Vec<i64>>,
    subsums: Subsums,
}

impl Engine {
    fn build(group: Option<&GroupSpec>, alphabet: &Alphabet, depth: u64) -> Result<Self> {
        let depth = usize::try_from(depth).map_err(|_| Error::Overflow)?;
        let (table, letters) = match alphabet {
            Alphabet::Lattice(xs) => (
                GroupTable::trivial(),
                xs.iter().map(|x| letter_of(0, x)).collect::<Vec<_>>(),
            ),
            Alphabet::Mixed(xs) => {
                let group = group.ok_or_else(|| Error::InvalidGround("mixed alphabet without a group".into()))?;
                let (table, index) = GroupTable::build(group)?;
                let letters = xs
                    .iter()
                    .map(|x| letter_of_mixed(&index, x))
                    .collect::<Result<Vec<_>>>()?;
                (table, letters)
            }
        };
        let dim = letters.first().map_or(1, |l| l.v.len());
        let n = letters.len();
        let mut suffix_min = vec![vec![i64::MAX; dim]; n + 1];
        let mut suffix_max = vec![vec![i64::MIN; dim]; n + 1];
        for i in (0..n).rev() {
            for c in 0..dim {
                suffix_min[i][c] = suffix_min[i + 1][c].min(letters[i].v[c]);
                suffix_max[i][c] = suffix_max[i + 1][c].max(letters[i].v[c]);
            }
        }
        let mut engine = Engine {
            letters,
            group: table,
            dim,
            depth,
            suffix_min,
            suffix_max,
            subsums: Subsums::Hashed,
        };
        engine.subsums = engine.plan_subsums()?;
        Ok(engine)
    }

    fn plan_subsums(&self) -> Result<Subsums> {
        if self.letters.is_empty() {
            return Ok(Subsums::Hashed);
        }
        let depth = self.depth.max(1) as i64;
        let mut lo = Vec::with_capacity(self.dim);
        let mut hi = Vec::with_capacity(self.dim);
        let mut cells: u128 = 1;
        for c in 0..self.dim {
            let a = self.suffix_min[0][c].min(0);
            let b = self.suffix_max[0][c].max(0);
            let (Some(l), Some(h)) = (depth.checked_mul(a), depth.checked_mul(b)) else {
                return Ok(Subsums::Hashed);
            };
            lo.push(l);
            hi.push(h);
            cells = cells.saturating_mul((h - l + 1) as u128);
        }
        let block_words = cells.div_ceil(64);
        if block_words.saturating_mul(64).saturating_mul(self.group.order as u128) > DENSE_BIT_LIMIT {
            return Ok(Subsums::Hashed);
        }
        let mut strides = vec![1i64; self.dim];
        for c in (0..self.dim.saturating_sub(1)).rev() {
            strides[c] = strides[c + 1] * (hi[c + 1] - lo[c + 1] + 1);
        }
        let block_words = block_words as usize;
        let layout = DenseLayout {
            lo,
            hi,
            strides,
            block_words,
            words: block_words * self.group.order,
        };
        let letters = self
            .letters
            .iter()
            .map(|x| {
                let minus: Vec<i64> = x.v.iter().map(|c| -c).collect();
                DenseLetter {
                    own: layout.bit(x.g, &x.v).expect("letters lie in the subsum box"),
                    neg: layout.bit(self.group.neg[x.g], &minus),
                    shift: x.v.iter().zip(&layout.strides).map(|(c, s)| c * s).sum::<i64>() as isize,
                }
            })
            .collect();
        Ok(Subsums::Dense { layout, letters })
    }

    fn run(&self, mode: Mode, config: &SearchConfig) -> Result<Outcome> {
        let branches = self.letters.len();
        if self.depth == 0 || branches == 0 {
            return Ok(Outcome {
                complete: true,
                ..Outcome::default()
            });
        }
        let done = AtomicUsize::new(0);
        let best_so_far = Mutex::new(0u64);
        // lowest branch that found an atom of full depth; later ones cannot win
        let full_branch = AtomicUsize::new(usize::MAX);
        let work = |i: usize| -> BranchOutcome {
            let out = if mode == Mode::Longest && full_branch.load(AtomicOrdering::Relaxed) < i {
                BranchOutcome::default()
            } else {
                let mut walker = Walker::new(self, mode, config.node_limit, &full_branch, i);
                walker.visit(0, i);
                walker.finish()
            };
            if mode == Mode::Longest && out.best.len() == self.depth {
                full_branch.fetch_min(i, AtomicOrdering::Relaxed);
            }
            let finished = done.fetch_add(1, AtomicOrdering::Relaxed) + 1;
            if let Some(report) = &config.progress {
                let mut best = best_so_far.lock().expect("progress lock");
                *best = (*best).max(out.best.len() as u64);
                report(&Progress {
                    branches_done: finished,
                    branches_total: branches,
                    best: *best,
                });
            }
            out
        };
        let results: Vec<BranchOutcome> = match config.threads {
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t.max(1))
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
                pool.install(|| (0..branches).into_par_iter().map(work).collect())
            }
            None => (0..branches).into_par_iter().map(work).collect(),
        };

        let mut outcome = Outcome {
            complete: true,
            ..Outcome::default()
        };
        let cutoff = full_branch.load(AtomicOrdering::Relaxed);
        for (i, r) in results.into_iter().enumerate() {
            outcome.nodes += r.nodes;
            outcome.prunes += r.prunes;
            // branches past a full-depth winner may stop early without harm
            if !r.complete && !(mode == Mode::Longest && i > cutoff) {
                outcome.complete = false;
            }
            if r.best.len() > outcome.best.len() {
                outcome.best = r.best;
            }
            outcome.atoms.extend(r.atoms);
        }
        Ok(outcome)
    }
}

fn letter_of(g: usize, x: &Element) -> Letter {
    Letter {
        g,
        v: x.coords().to_vec(),
        is_zero: g == 0 && x.is_zero(),
    }
}

fn letter_of_mixed(index: &HashMap<Vec<u64>, usize>, x: &MixedElement) -> Result<Letter> {
    let g = *index
        .get(&x.residues())
        .ok_or_else(|| Error::InvalidGround(format!("{x} is not in the group")))?;
    Ok(letter_of(g, x.lattice_part()))
}

#[derive(Default)]
struct Outcome {
    best: Vec<usize>,
    atoms: Vec<Vec<usize>>,
    nodes: u64,
    prunes: u64,
    complete: bool,
}

#[derive(Default)]
struct BranchOutcome {
    best: Vec<usize>,
    atoms: Vec<Vec<usize>>,
    nodes: u64,
    prunes: u64,
    complete: bool,
}

/// Depth-first state for one first-element branch.
struct Walker<'a> {
    engine: &'a Engine,
    mode: Mode,
    node_limit: Option<u64>,
    full_branch: &'a AtomicUsize,
    branch: usize,
    picks: Vec<usize>,
    /// Running lattice sums per level, flattened `dim` at a time.
    sums: Vec<i64>,
    groups: Vec<usize>,
    dense: Vec<u64>,
    hashed: Vec<HashSet<(usize, Vec<i64>)>>,
    best: Vec<usize>,
    atoms: Vec<Vec<usize>>,
    nodes: u64,
    prunes: u64,
    aborted: bool,
    stop: bool,
}

impl<'a> Walker<'a> {
    fn new(
        engine: &'a Engine,
        mode: Mode,
        node_limit: Option<u64>,
        full_branch: &'a AtomicUsize,
        branch: usize,
    ) -> Self {
        let levels = engine.depth + 1;
        let dense = match &engine.subsums {
            Subsums::Dense { layout, .. } => vec![0; layout.words * levels],
            Subsums::Hashed => Vec::new(),
        };
        let hashed = match &engine.subsums {
            Subsums::Dense { .. } => Vec::new(),
            Subsums::Hashed => vec![HashSet::new(); levels],
        };
        Walker {
            engine,
            mode,
            node_limit,
            full_branch,
            branch,
            picks: Vec::with_capacity(engine.depth),
            sums: vec![0; engine.dim * levels],
            groups: vec![0; levels],
            dense,
            hashed,
            best: Vec::new(),
            atoms: Vec::new(),
            nodes: 0,
            prunes: 0,
            aborted: false,
            stop: false,
        }
    }

    fn finish(self) -> BranchOutcome {
        BranchOutcome {
            best: self.best,
            atoms: self.atoms,
            nodes: self.nodes,
            prunes: self.prunes,
            complete: !self.aborted,
        }
    }

    /// Tries letter `i` on top of the `level` letters already picked.
    fn visit(&mut self, level: usize, i: usize) {
        let e = self.engine;
        self.nodes += 1;
        if self.node_limit.is_some_and(|lim| self.nodes > lim) {
            self.aborted = true;
            self.stop = true;
            return;
        }
        let x = &e.letters[i];
        let dim = e.dim;
        let new_len = level + 1;
        let g_sum = e.group.add(self.groups[level], x.g);
        let base = level * dim;
        let closes = g_sum == 0 && (0..dim).all(|c| self.sums[base + c] + x.v[c] == 0);
        if closes {
            self.picks.push(i);
            self.record();
            self.picks.pop();
            return;
        }
        if x.is_zero || self.has_negation(level, i) {
            self.prunes += 1;
            return;
        }
        if new_len >= e.depth {
            return;
        }
        let r = (e.depth - new_len) as i64;
        for c in 0..dim {
            let target = -(self.sums[base + c] + x.v[c]);
            let a = e.suffix_min[i][c];
            let b = e.suffix_max[i][c];
            let (lo, hi) = match self.mode {
                Mode::Longest => (a.min(r * a), b.max(r * b)),
                Mode::Collect => (r * a, r * b),
            };
            if target < lo || target > hi {
                self.prunes += 1;
                return;
            }
        }
        for c in 0..dim {
            self.sums[base + dim + c] = self.sums[base + c] + x.v[c];
        }
        self.groups[new_len] = g_sum;
        self.extend_subsums(level, i);
        self.picks.push(i);
        for j in i..e.letters.len() {
            self.visit(new_len, j);
            if self.stop {
                break;
            }
        }
        self.picks.pop();
    }

    fn record(&mut self) {
        match self.mode {
            Mode::Longest => {
                if self.picks.len() > self.best.len() {
                    self.best = self.picks.clone();
                    if self.best.len() == self.engine.depth {
                        self.stop = true;
                        self.full_branch.fetch_min(self.branch, AtomicOrdering::Relaxed);
                    }
                }
                if !self.stop && self.full_branch.load(AtomicOrdering::Relaxed) < self.branch {
                    self.stop = true;
                }
            }
            Mode::Collect => {
                if self.picks.len() == self.engine.depth {
                    self.atoms.push(self.picks.clone());
                }
            }
        }
    }

    fn has_negation(&self, level: usize, i: usize) -> bool {
        match &self.engine.subsums {
            Subsums::Dense { layout, letters } => letters[i].neg.is_some_and(|bit| {
                let w = level * layout.words + bit / 64;
                self.dense[w] >> (bit % 64) & 1 == 1
            }),
            Subsums::Hashed => {
                let x = &self.engine.letters[i];
                let minus: Vec<i64> = x.v.iter().map(|c| -c).collect();
                self.hashed[level].contains(&(self.engine.group.neg[x.g], minus))
            }
        }
    }

    /// Level `level + 1` subsums: `R | (R + x) | {x}`.
    fn extend_subsums(&mut self, level: usize, i: usize) {
        let e = self.engine;
        let x = &e.letters[i];
        match &e.subsums {
            Subsums::Dense { layout, letters } => {
                let w = layout.words;
                let bw = layout.block_words;
                let (old, rest) = self.dense.split_at_mut((level + 1) * w);
                let old = &old[level * w..];
                let new = &mut rest[..w];
                new.copy_from_slice(old);
                let dl = &letters[i];
                for g in 0..e.group.order {
                    let h = e.group.add(g, x.g);
                    or_shifted(&old[g * bw..(g + 1) * bw], &mut new[h * bw..(h + 1) * bw], dl.shift);
                }
                new[dl.own / 64] |= 1 << (dl.own % 64);
            }
            Subsums::Hashed => {
                let (old, rest) = self.hashed.split_at_mut(level + 1);
                let old = &old[level];
                let new = &mut rest[0];
                new.clear();
                new.extend(old.iter().cloned());
                for (g, v) in old {
                    let moved: Vec<i64> = v.iter().zip(&x.v).map(|(a, b)| a + b).collect();
                    new.insert((e.group.add(*g, x.g), moved));
                }
                new.insert((x.g, x.v.clone()));
            }
        }
    }
}

/// `dst |= src << shift` on little-endian word arrays of equal length
/// (negative `shift` moves bits down). Bits leaving the range are dropped.
fn or_shifted(src: &[u64], dst: &mut [u64], shift: isize) {
    let n = src.len() as isize;
    let ws = shift.div_euclid(64);
    let bs = shift.rem_euclid(64) as u32;
    for j in 0..n {
        // dst word j takes bits from src words j - ws (low part) and j - ws - 1
        let s = j - ws;
        let mut word = 0u64;
        if (0..n).contains(&s) {
            word |= src[s as usize] << bs;
        }
        if bs > 0 && (0..n).contains(&(s - 1)) {
            word |= src[(s - 1) as usize] >> (64 - bs);
        }
        dst[j as usize] |= word;
    }
}
