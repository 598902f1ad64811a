//! GF(2) matroid structure on the levels of a character space, level maps
//! between depths, involutions `h ↦ h g1 g2` and predecessor fans.
//!
//! Characters of one level are functionals `λ` with `λ(minus) = 1`, an affine
//! hyperplane. A set is dependent when one member is an odd product of others,
//! i.e. when the functionals are affinely dependent.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gf2::{EchelonBasis, Gf2Vec};
use crate::order::StratumKind;
use crate::report::PropertyReport;
use crate::space::{CharId, CharSpace};

fn common_depth(x: &CharSpace, set: &[CharId]) -> Result<Option<usize>> {
    let mut depths = set.iter().map(|&g| x.depth(g));
    let Some(d) = depths.next() else { return Ok(None) };
    if depths.any(|e| e != d) {
        return Err(Error::Usage("characters from different levels".into()));
    }
    Ok(Some(d))
}

fn distinct(set: &[CharId]) -> Vec<CharId> {
    set.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Whether some member of `set` is an odd product of other members.
///
/// The set is translated by its lexicographically least functional, turning
/// affine dependence into linear dependence of the remaining differences.
pub fn is_dependent(x: &CharSpace, set: &[CharId]) -> Result<bool> {
    let Some(d) = common_depth(x, set)? else { return Ok(false) };
    let mut fs: Vec<Gf2Vec> = distinct(set).into_iter().map(|g| x.functional(g)).collect();
    fs.sort();
    let base = fs[0];
    let mut basis = EchelonBasis::new(x.chain().dim(d));
    Ok(!fs[1..].iter().all(|f| basis.insert(*f + base)))
}

/// Rank of a same-level set: the size of any basis of its closure.
pub fn rank(x: &CharSpace, set: &[CharId]) -> Result<usize> {
    let Some(d) = common_depth(x, set)? else { return Ok(0) };
    let mut basis = EchelonBasis::new(x.chain().dim(d));
    Ok(set.iter().filter(|&&g| basis.insert(x.functional(g))).count())
}

/// All odd products of members, in id order.
pub fn closure(x: &CharSpace, set: &[CharId]) -> Result<Vec<CharId>> {
    let Some(d) = common_depth(x, set)? else { return Ok(Vec::new()) };
    let set = distinct(set);
    let base = x.functional(set[0]);
    let mut basis = EchelonBasis::new(x.chain().dim(d));
    let gens: Vec<Gf2Vec> = set[1..]
        .iter()
        .map(|&g| x.functional(g) + base)
        .filter(|f| basis.insert(*f))
        .collect();
    let mut out = Vec::with_capacity(1 << gens.len());
    for mask in 0u64..1 << gens.len() {
        let mut f = base;
        for (i, g) in gens.iter().enumerate() {
            if mask >> i & 1 == 1 {
                f += *g;
            }
        }
        out.push(x.id_of(&crate::chain::ChainCharacter { depth: d, functional: f }).expect("closure stays in the level"));
    }
    out.sort();
    Ok(out)
}

/// Extends the independent set `indep` to a basis of `closure(indep ∪ target)`
/// by scanning `target` in the given order.
pub fn extend_basis(x: &CharSpace, indep: &[CharId], target: &[CharId]) -> Result<Vec<CharId>> {
    let all: Vec<CharId> = indep.iter().chain(target).copied().collect();
    let Some(d) = common_depth(x, &all)? else { return Ok(Vec::new()) };
    let mut basis = EchelonBasis::new(x.chain().dim(d));
    let mut out = Vec::new();
    for &g in indep {
        if !basis.insert(x.functional(g)) {
            return Err(Error::Precondition("starting set is dependent".into()));
        }
        out.push(g);
    }
    for &g in target {
        if basis.insert(x.functional(g)) {
            out.push(g);
        }
    }
    Ok(out)
}

/// `κ`: every character of depth `e` paired with its depth-`d` successor.
pub fn kappa(x: &CharSpace, d: usize, e: usize) -> Result<Vec<(CharId, CharId)>> {
    if d == 0 || d > e || e > x.length() {
        return Err(Error::Usage(format!("kappa({d},{e}) needs 1 <= d <= e <= {}", x.length())));
    }
    x.level(e).iter().map(|&g| Ok((g, x.successor(g, d)?))).collect()
}

/// The map `h ↦ h g1 g2` on the level of depth `depth`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvolutionHandle {
    pub g1: CharId,
    pub g2: CharId,
    pub depth: usize,
}

impl InvolutionHandle {
    pub fn new(x: &CharSpace, g1: CharId, g2: CharId, depth: usize) -> Result<Self> {
        if depth == 0 || x.depth(g1) < depth || x.depth(g2) < depth {
            return Err(Error::Precondition(format!(
                "handle at depth {depth} needs factors at least that deep (got {} and {})",
                x.depth(g1),
                x.depth(g2)
            )));
        }
        Ok(Self { g1, g2, depth })
    }

    /// The same factors acting on another level.
    pub fn at(&self, x: &CharSpace, depth: usize) -> Result<Self> {
        Self::new(x, self.g1, self.g2, depth)
    }

    /// Deepest level the handle can act on.
    pub fn max_depth(&self, x: &CharSpace) -> usize {
        x.depth(self.g1).min(x.depth(self.g2))
    }
}

pub fn involution(x: &CharSpace, handle: &InvolutionHandle, h: CharId) -> Result<CharId> {
    if x.depth(h) != handle.depth {
        return Err(Error::Precondition(format!(
            "{h} has depth {}, handle acts on depth {}",
            x.depth(h),
            handle.depth
        )));
    }
    Ok(x.triple_product(h, handle.g1, handle.g2))
}

/// Checks every stated property of an involution handle, exhaustively.
pub fn verify_involution(x: &CharSpace, handle: &InvolutionHandle) -> PropertyReport {
    let mut report = PropertyReport::new();
    let d = handle.depth;
    let top = handle.max_depth(x);
    let level = x.level(d);
    let phi = |h: CharId| involution(x, handle, h).expect("level member");

    // (a) bijective level map preserving triple products
    let image: BTreeSet<CharId> = level.iter().map(|&h| phi(h)).collect();
    report.check(image.len() == level.len() && image.iter().all(|&h| x.depth(h) == d), || {
        format!("{handle:?}: not a permutation of level {d}")
    });
    for (i, &a) in level.iter().enumerate() {
        for (j, &b) in level.iter().enumerate().skip(i) {
            for &c in &level[j..] {
                let lhs = phi(x.triple_product(a, b, c));
                let rhs = x.triple_product(phi(a), phi(b), phi(c));
                report.check(lhs == rhs, || format!("{handle:?}: triple product of {a},{b},{c} not preserved"));
            }
        }
    }
    // (b)
    for &h in level {
        report.check(phi(phi(h)) == h, || format!("{handle:?}: not an involution at {h}"));
    }
    // (c)
    let s1 = x.successor(handle.g1, d).unwrap();
    let s2 = x.successor(handle.g2, d).unwrap();
    report.check(phi(s1) == s2, || format!("{handle:?}: successor of g1 not sent to successor of g2"));
    // (d)
    for &h in level {
        if x.specializes(handle.g1, h) && x.specializes(handle.g2, h) {
            report.check(phi(h) == h, || format!("{handle:?}: common specialization {h} moved"));
        }
    }
    // (e) across levels d <= d' <= top
    for d2 in d..=top {
        let upper = handle.at(x, d2).unwrap();
        for &h1 in x.level(d2) {
            let h2 = x.successor(h1, d).unwrap();
            let a = involution(x, &upper, h1).unwrap();
            let b = phi(h2);
            report.check(x.specializes(a, b), || {
                format!("{handle:?}: image of {h1} at depth {d2} does not specialize to image of {h2}")
            });
        }
    }
    // strata are permuted; C^d_top can be broken (a leaf swapped with a
    // non-leaf), so C is only checked strictly above the factors' depth
    for j in d..=top {
        for kind in [StratumKind::S, StratumKind::C] {
            if kind == StratumKind::C && j == top {
                continue;
            }
            let s: BTreeSet<CharId> = x.stratum(kind, d, j).unwrap().into_iter().collect();
            let moved: BTreeSet<CharId> = s.iter().map(|&h| phi(h)).collect();
            report.check(s == moved, || format!("{handle:?}: {kind}^{d}_{j} not permuted"));
        }
    }
    // replacing the factors by shallower successors changes nothing
    for d2 in d..=top {
        let g1 = x.successor(handle.g1, d2).unwrap();
        let g2 = x.successor(handle.g2, d2).unwrap();
        let moved = InvolutionHandle::new(x, g1, g2, d).unwrap();
        for &h in level {
            report.check(involution(x, &moved, h).unwrap() == phi(h), || {
                format!("{handle:?}: factors lifted to depth {d2} act differently on {h}")
            });
        }
    }
    report
}

/// `P_h`: every character specializing to `h`.
pub fn predecessor_fan(x: &CharSpace, h: CharId) -> Vec<CharId> {
    x.predecessors(h)
}

/// Embeds `P_{h1}` into `P_{h2}` for `h1 ∈ C^k_j`, `h2 ∈ S^k_j`, using the
/// least depth-`j` predecessors `u1 ~> h1`, `u2 ~> h2` and `g ↦ g u1 u2`.
/// Pairs are returned in id order of the source.
pub fn embed_predecessors(x: &CharSpace, h1: CharId, h2: CharId, j: usize) -> Result<Vec<(CharId, CharId)>> {
    let k = x.depth(h1);
    if x.depth(h2) != k {
        return Err(Error::Hypothesis(format!("{h1} and {h2} lie on different levels")));
    }
    if j < k || x.max_below(h1) != j {
        return Err(Error::Hypothesis(format!("{h1} is not in C^{k}_{j}")));
    }
    if x.max_below(h2) < j {
        return Err(Error::Hypothesis(format!("{h2} is not in S^{k}_{j}")));
    }
    let least_at = |h: CharId| *x.predecessors(h).iter().find(|&&g| x.depth(g) == j).unwrap();
    let (u1, u2) = (least_at(h1), least_at(h2));
    Ok(predecessor_fan(x, h1)
        .into_iter()
        .map(|g| (g, x.triple_product(g, u1, u2)))
        .collect())
}
