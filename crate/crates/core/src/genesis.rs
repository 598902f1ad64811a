//! Standard generating systems: level bases compatible with every stratum.
//!
//! Level 1 gets a basis adapted to the tower `S^1_n ⊆ … ⊆ S^1_1`. Level
//! `k + 1` is built from level `k`: pick an anchor `h0 ∈ B_k ∩ S^k_n`, take a
//! tower-adapted basis of all depth-`(k+1)` predecessors of `h0`, and add one
//! lift `g_h ∈ C^{k+1}_{j(h)}` with `g_h ~> h` for every other
//! `h ∈ B_k ∩ S^k_{k+1}`, where `j(h)` is the deepest level below `h`.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aos::{extend_basis, is_dependent, rank};
use crate::error::{Error, Result};
use crate::order::StratumKind;
use crate::report::PropertyReport;
use crate::space::{CharId, CharSpace};

/// How choice points are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Least candidates in id order.
    Deterministic,
    /// Uniform choices from a ChaCha stream.
    Seeded(u64),
}

/// Where a basis element came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Added when extending the level-1 basis to `S^1_j`.
    LevelOneTower { j: usize },
    /// Predecessor of the anchor, added when extending to `S^{k+1}_j`.
    PredecessorBlock { anchor: CharId, j: usize },
    /// The lift of `h ∈ B_k`, chosen in `C^{k+1}_j`.
    Lift { h: CharId, j: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSystem {
    /// Entry `k-1` lists `B_k` in insertion order.
    pub levels: Vec<Vec<(CharId, Provenance)>>,
}

impl GeneratingSystem {
    pub fn basis(&self, k: usize) -> Vec<CharId> {
        self.levels[k - 1].iter().map(|p| p.0).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub(crate) struct Chooser {
    rng: Option<ChaCha8Rng>,
}

impl Chooser {
    pub(crate) fn new(policy: Policy) -> Self {
        Self {
            rng: match policy {
                Policy::Deterministic => None,
                Policy::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
            },
        }
    }

    /// Candidates in the order they should be tried.
    pub(crate) fn order(&mut self, mut candidates: Vec<CharId>) -> Vec<CharId> {
        match &mut self.rng {
            None => candidates.sort(),
            Some(rng) => candidates.shuffle(rng),
        }
        candidates
    }

    pub(crate) fn pick(&mut self, candidates: &[CharId]) -> Option<CharId> {
        match &mut self.rng {
            None => candidates.iter().min().copied(),
            Some(_) if candidates.is_empty() => None,
            Some(rng) => Some(candidates[rng.gen_range(0..candidates.len())]),
        }
    }
}

/// Extends `start` through the sets of `tower`, in order; each new element is
/// tagged with the index of the set that introduced it.
pub(crate) fn tower_basis(
    x: &CharSpace,
    chooser: &mut Chooser,
    start: &[CharId],
    tower: &[(usize, Vec<CharId>)],
) -> Vec<(CharId, usize)> {
    let mut basis: Vec<CharId> = start.to_vec();
    let mut out = Vec::new();
    for (j, set) in tower {
        let grown = extend_basis(x, &basis, &chooser.order(set.clone())).expect("same level");
        for &g in &grown[basis.len()..] {
            out.push((g, *j));
        }
        basis = grown;
    }
    out
}

/// The choice-of-basis step: for `G = S^{k+1}_p`, a basis `b` of `S^k_p`
/// containing `h1`, a basis `c` of the predecessors of `h1` in `G` and lifts
/// `(h, g)` with `g ~> h` for the other members of `b`, returns `c` plus the
/// lifts after certifying it is a basis of `G`.
pub fn choose_basis(
    x: &CharSpace,
    g_set: &[CharId],
    b: &[CharId],
    h1: CharId,
    c: &[CharId],
    lifts: &[(CharId, CharId)],
) -> Result<Vec<CharId>> {
    let counts: BTreeSet<usize> = b
        .iter()
        .map(|&h| g_set.iter().filter(|&&g| x.specializes(g, h)).count())
        .collect();
    if counts.len() > 1 {
        return Err(Error::Hypothesis(format!("predecessor counts differ across the basis: {counts:?}")));
    }
    if !b.contains(&h1) || c.iter().any(|&g| !x.specializes(g, h1) || !g_set.contains(&g)) {
        return Err(Error::Hypothesis("block is not made of predecessors of the anchor".into()));
    }
    let lifted: BTreeSet<CharId> = lifts.iter().map(|l| l.0).collect();
    let expected: BTreeSet<CharId> = b.iter().copied().filter(|&h| h != h1).collect();
    if lifted != expected || lifts.iter().any(|&(h, g)| !x.specializes(g, h) || !g_set.contains(&g)) {
        return Err(Error::Hypothesis("lifts do not match the other basis elements".into()));
    }
    let mut out = c.to_vec();
    out.extend(lifts.iter().map(|l| l.1));
    if is_dependent(x, &out)? {
        return Err(Error::Hypothesis("block and lifts are dependent".into()));
    }
    let full = rank(x, g_set)?;
    if out.len() != full || c.len() + b.len() - 1 != full {
        return Err(Error::Hypothesis(format!("{} elements for a set of rank {full}", out.len())));
    }
    Ok(out)
}

pub fn standard_generating_system(x: &CharSpace, policy: Policy) -> GeneratingSystem {
    let n = x.length();
    let mut chooser = Chooser::new(policy);
    let mut levels = Vec::with_capacity(n);

    let tower: Vec<(usize, Vec<CharId>)> = (1..=n).rev().map(|j| (j, x.stratum(StratumKind::S, 1, j).unwrap())).collect();
    levels.push(
        tower_basis(x, &mut chooser, &[], &tower)
            .into_iter()
            .map(|(g, j)| (g, Provenance::LevelOneTower { j }))
            .collect::<Vec<_>>(),
    );

    for k in 1..n {
        let bk: Vec<CharId> = levels[k - 1].iter().map(|p: &(CharId, Provenance)| p.0).collect();
        let anchors: Vec<CharId> = bk.iter().copied().filter(|&h| x.max_below(h) == n).collect();
        let h0 = chooser.pick(&anchors).expect("deepest level lies below some basis element");
        let block = predecessor_tower(x, &mut chooser, h0, k + 1, &[]);
        let mut next: Vec<(CharId, Provenance)> = block
            .into_iter()
            .map(|(g, j)| (g, Provenance::PredecessorBlock { anchor: h0, j }))
            .collect();
        for &h in &bk {
            if h == h0 || x.max_below(h) < k + 1 {
                continue;
            }
            let j = x.max_below(h);
            let g = chooser.pick(&lift_candidates(x, h, k + 1, j)).expect("lift exists");
            next.push((g, Provenance::Lift { h, j }));
        }
        levels.push(next);
    }
    let sgs = GeneratingSystem { levels };
    debug_assert!(certify(x, &sgs).is_ok());
    sgs
}

/// Tower-adapted basis of the depth-`d` predecessors of `h`, extending `start`
/// through `{g ∈ S^d_j : g ~> h}` for `j = n, …, d`.
pub(crate) fn predecessor_tower(
    x: &CharSpace,
    chooser: &mut Chooser,
    h: CharId,
    d: usize,
    start: &[CharId],
) -> Vec<(CharId, usize)> {
    let preds: Vec<CharId> = x.predecessors(h).into_iter().filter(|&g| x.depth(g) == d).collect();
    let tower: Vec<(usize, Vec<CharId>)> = (d..=x.length())
        .rev()
        .map(|j| (j, preds.iter().copied().filter(|&g| x.max_below(g) >= j).collect()))
        .collect();
    tower_basis(x, chooser, start, &tower)
}

/// Depth-`d` members of `C^d_j` specializing to `h`.
pub(crate) fn lift_candidates(x: &CharSpace, h: CharId, d: usize, j: usize) -> Vec<CharId> {
    x.predecessors(h)
        .into_iter()
        .filter(|&g| x.depth(g) == d && x.max_below(g) == j)
        .collect()
}

/// Runs [`choose_basis`] on every stratum the construction touches.
fn certify(x: &CharSpace, sgs: &GeneratingSystem) -> Result<()> {
    let n = x.length();
    for k in 1..n {
        let bk = sgs.basis(k);
        let next = &sgs.levels[k];
        let h0 = match next.iter().find_map(|p| match p.1 {
            Provenance::PredecessorBlock { anchor, .. } => Some(anchor),
            _ => None,
        }) {
            Some(h) => h,
            None => return Err(Error::Hypothesis(format!("no anchor block at depth {}", k + 1))),
        };
        for p in k + 1..=n {
            let g_set = x.stratum(StratumKind::S, k + 1, p)?;
            let b: Vec<CharId> = bk.iter().copied().filter(|&h| x.max_below(h) >= p).collect();
            let c: Vec<CharId> = next
                .iter()
                .filter(|e| matches!(e.1, Provenance::PredecessorBlock { .. }) && x.max_below(e.0) >= p)
                .map(|e| e.0)
                .collect();
            let lifts: Vec<(CharId, CharId)> = next
                .iter()
                .filter_map(|e| match e.1 {
                    Provenance::Lift { h, j } if j >= p => Some((h, e.0)),
                    _ => None,
                })
                .collect();
            choose_basis(x, &g_set, &b, h0, &c, &lifts)?;
        }
    }
    Ok(())
}

/// Checks that each `B_k` is a basis of `L_k`, that `B_k ∩ S^k_j` is a basis
/// of `S^k_j` for all `k <= j`, that successors of basis elements are basis
/// elements, and that every nonempty `C^k_j` meets `B_k`.
pub fn verify_sgs(x: &CharSpace, sgs: &GeneratingSystem) -> PropertyReport {
    let mut report = PropertyReport::new();
    let n = x.length();
    report.check(sgs.levels.len() == n, || format!("{} levels for a space of length {n}", sgs.levels.len()));
    if sgs.levels.len() != n {
        return report;
    }
    for k in 1..=n {
        let bk = sgs.basis(k);
        if bk.iter().any(|&g| x.depth(g) != k) {
            report.check(false, || format!("B_{k} has members outside L_{k}"));
            continue;
        }
        let full = rank(x, x.level(k)).unwrap();
        report.check(!is_dependent(x, &bk).unwrap() && bk.len() == full, || {
            format!("B_{k} is not a basis of L_{k} ({} elements, rank {full})", bk.len())
        });
        for j in k..=n {
            let s = x.stratum(StratumKind::S, k, j).unwrap();
            let inside: Vec<CharId> = bk.iter().copied().filter(|g| s.contains(g)).collect();
            let want = rank(x, &s).unwrap();
            report.check(!is_dependent(x, &inside).unwrap() && inside.len() == want, || {
                format!("B_{k} ∩ S^{k}_{j} is not a basis of S^{k}_{j} ({} elements, rank {want})", inside.len())
            });
            let c = x.stratum(StratumKind::C, k, j).unwrap();
            if !c.is_empty() {
                report.check(bk.iter().any(|g| c.contains(g)), || format!("B_{k} misses C^{k}_{j}"));
            }
        }
        for m in k..=n {
            for g in sgs.basis(m) {
                let s = x.successor(g, k).unwrap();
                report.check(bk.contains(&s), || format!("successor of {g} at depth {k} is not in B_{k}"));
            }
        }
    }
    report
}
