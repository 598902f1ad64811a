//! Necessary conditions for a forest to be the specialization order of a
//! finite fan, and a bounded search for a chain realizing it.
//!
//! Passing [`check_forest`] does not prove a forest is realizable;
//! [`synthesize_chain`] decides it within explicit bounds.

use std::collections::BTreeSet;
use std::fmt;

use crate::chain::{FanChain, Level};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vec};
use crate::iso::{forest_canonical, ForestCode};
use crate::order::{Forest, PredKind, StratumKind};
use crate::space::CharSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// Nonempty strata have power-of-two size.
    Rc1,
    /// Predecessor counts are constant on strata.
    Rc2,
    /// Components meeting a level agree on its size and on strata sizes.
    Rc3,
    /// Shallower components are truncations of deeper ones.
    Rc4,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Rc1 => "RC1",
            Rule::Rc2 => "RC2",
            Rule::Rc3 => "RC3",
            Rule::Rc4 => "RC4",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated: {}", self.rule, self.message)
    }
}

fn violation(rule: Rule, message: String) -> Violation {
    Violation { rule, message }
}

/// Every violated necessary condition. Components are named `K1, K2, …` in
/// order of their root ids.
pub fn check_forest(f: &Forest) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = f.length();

    for k in 1..=n {
        for j in k..=n {
            let c = f.stratum(StratumKind::S, k, j).unwrap().len();
            if c > 0 && !c.is_power_of_two() {
                out.push(violation(Rule::Rc1, format!("card(S^{k}_{j})={c} not a power of 2")));
            }
        }
    }

    for k in 1..=n {
        for j in k..=n {
            for (kind, pred) in [(StratumKind::S, PredKind::B), (StratumKind::C, PredKind::A)] {
                let stratum = f.stratum(kind, k, j).unwrap();
                for j1 in k..=j {
                    for j2 in k..=j1 {
                        let counts: BTreeSet<usize> = stratum
                            .iter()
                            .map(|&h| f.pred_set(h, j1, j2, pred).unwrap().len())
                            .collect();
                        if counts.len() > 1 {
                            out.push(violation(
                                Rule::Rc2,
                                format!("card({pred}^{{{j1},{j2}}}(h)) takes values {counts:?} on {kind}^{k}_{j}"),
                            ));
                        }
                    }
                }
            }
        }
    }

    let comps = f.components();
    let lowest: Vec<usize> = comps.iter().map(|c| f.component_lowest_level(c)).collect();
    for a in 0..comps.len() {
        for b in a + 1..comps.len() {
            let (ka, kb) = (a + 1, b + 1);
            for d in 1..=lowest[a].min(lowest[b]) {
                let la = comps[a].iter().filter(|&&i| f.depth(i) == d).count();
                let lb = comps[b].iter().filter(|&&i| f.depth(i) == d).count();
                if la != lb {
                    out.push(violation(Rule::Rc3, format!("card(L_{d}(K{ka}))={la} vs card(L_{d}(K{kb}))={lb}")));
                }
            }
            for j in 1..=lowest[a].min(lowest[b]) {
                for k in 1..j {
                    let sa = f.stratum_within(StratumKind::S, k, j, comps[a].iter().copied()).len();
                    let sb = f.stratum_within(StratumKind::S, k, j, comps[b].iter().copied()).len();
                    if sa != sb {
                        out.push(violation(Rule::Rc3, format!("card(S^{k}_{j}(K{ka}))={sa} vs card(S^{k}_{j}(K{kb}))={sb}")));
                    }
                }
            }
            let (short, long) = if lowest[a] <= lowest[b] { (a, b) } else { (b, a) };
            let depth = lowest[short];
            let small = f.restrict(&comps[short]).unwrap();
            let big = f.restrict(&comps[long]).unwrap().truncate(depth);
            if forest_canonical(&small) != forest_canonical(&big) {
                out.push(violation(
                    Rule::Rc4,
                    format!(
                        "K{} is not order-isomorphic to K{} truncated to depth {depth}",
                        short + 1,
                        long + 1
                    ),
                ));
            }
        }
    }
    out
}

/// Limits for [`synthesize_chain`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthesisBounds {
    pub max_dim: usize,
    pub max_levels: usize,
    /// Transition matrices examined before giving up.
    pub max_candidates: u64,
}

impl Default for SynthesisBounds {
    fn default() -> Self {
        Self {
            max_dim: 4,
            max_levels: 4,
            max_candidates: 1 << 20,
        }
    }
}

/// Searches chains whose specialization order is isomorphic to `f`.
///
/// Level dimensions are forced by level sizes. Every chain is isomorphic to
/// one whose `-1` vectors are all the first unit vector, so only transitions
/// with first column `e_1` are tried; partial chains are pruned by comparing
/// truncated forests. The first witness in search order is returned.
pub fn synthesize_chain(f: &Forest, bounds: SynthesisBounds) -> Result<Option<FanChain>> {
    let n = f.length();
    if n == 0 {
        return Ok(None);
    }
    let mut dims = Vec::with_capacity(n);
    for level in f.levels() {
        if !level.len().is_power_of_two() {
            return Ok(None);
        }
        dims.push(1 + level.len().trailing_zeros() as usize);
    }
    if n > bounds.max_levels || dims.iter().any(|&k| k > bounds.max_dim) {
        return Err(Error::Resource(format!(
            "forest needs {n} levels of dimensions {dims:?}, bounds are {} levels of dimension {}",
            bounds.max_levels, bounds.max_dim
        )));
    }
    let targets: Vec<ForestCode> = (1..=n).map(|d| forest_canonical(&f.truncate(d))).collect();
    let levels: Vec<Level> = dims
        .iter()
        .map(|&dim| Level {
            dim,
            minus: Gf2Vec::unit(dim, 0),
        })
        .collect();
    let mut budget = bounds.max_candidates;
    let mut taus = Vec::with_capacity(n - 1);
    if extend(&levels, &targets, &mut taus, &mut budget)? {
        Ok(Some(FanChain::new(levels, taus)?))
    } else {
        Ok(None)
    }
}

fn extend(levels: &[Level], targets: &[ForestCode], taus: &mut Vec<Gf2Matrix>, budget: &mut u64) -> Result<bool> {
    let d = taus.len() + 1;
    let chain = FanChain::new(levels[..d].to_vec(), taus.clone())?;
    if forest_canonical(CharSpace::new(chain)?.forest()) != targets[d - 1] {
        return Ok(false);
    }
    if d == levels.len() {
        return Ok(true);
    }
    let (rows, cols) = (levels[d].dim, levels[d - 1].dim);
    let free = rows * (cols - 1);
    for bits in 0u64..1 << free {
        if *budget == 0 {
            return Err(Error::Resource("synthesis candidate budget exhausted".into()));
        }
        *budget -= 1;
        let mut columns = vec![Gf2Vec::unit(rows, 0)];
        for c in 1..cols {
            columns.push(Gf2Vec::from_bits(rows, bits >> ((c - 1) * rows)));
        }
        taus.push(Gf2Matrix::from_columns(rows, &columns));
        if extend(levels, targets, taus, budget)? {
            return Ok(true);
        }
        taus.pop();
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cherry_is_realized() {
        let f = Forest::new(vec![1, 2, 2], vec![None, Some(0), Some(0)]).unwrap();
        assert!(check_forest(&f).is_empty());
        let c = synthesize_chain(&f, SynthesisBounds::default()).unwrap().unwrap();
        let x = CharSpace::new(c).unwrap();
        assert_eq!(forest_canonical(x.forest()), forest_canonical(&f));
    }

    #[test]
    fn two_isolated_roots() {
        let f = Forest::new(vec![1, 1], vec![None, None]).unwrap();
        let c = synthesize_chain(&f, SynthesisBounds::default()).unwrap().unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.dim(1), 2);
    }

    #[test]
    fn three_roots_are_not_realizable() {
        let f = Forest::new(vec![1, 1, 1], vec![None, None, None]).unwrap();
        assert_eq!(synthesize_chain(&f, SynthesisBounds::default()).unwrap(), None);
        assert!(check_forest(&f).iter().any(|v| v.rule == Rule::Rc1));
    }

    #[test]
    fn bounds_are_enforced() {
        let f = Forest::new(vec![1; 64], vec![None; 64]).unwrap();
        assert!(matches!(synthesize_chain(&f, SynthesisBounds::default()), Err(Error::Resource(_))));
    }

    #[test]
    fn unequal_components() {
        // K1: root with two children; K2: root with one child
        let f = Forest::new(vec![1, 2, 2, 1, 2], vec![None, Some(0), Some(0), None, Some(3)]).unwrap();
        let rules: Vec<Rule> = check_forest(&f).into_iter().map(|v| v.rule).collect();
        assert!(rules.contains(&Rule::Rc3));
        assert!(rules.contains(&Rule::Rc4));
    }
}
