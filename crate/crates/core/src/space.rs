//! The character space of a chain fan with its specialization order.

use std::collections::HashMap;
use std::fmt;

use crate::chain::{chain_characters, ChainCharacter, Element, FanChain};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vec};
use crate::order::{Forest, PredKind, StratumKind};
use crate::sign::Sign3;
use crate::ternary::Character;

/// Index of a character in a [`CharSpace`]; ids follow (depth, functional)
/// order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharId(pub usize);

impl fmt::Display for CharId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct CharSpace {
    chain: FanChain,
    trans: Vec<Vec<Option<Gf2Matrix>>>,
    chars: Vec<ChainCharacter>,
    index: HashMap<ChainCharacter, CharId>,
    levels: Vec<Vec<CharId>>,
    forest: Forest,
}

impl CharSpace {
    pub fn new(chain: FanChain) -> Result<Self> {
        let report = chain.validate();
        if let Some(v) = report.violations().first() {
            return Err(Error::Structural(format!("invalid chain: {v}")));
        }
        let trans = chain.transition_table();
        let chars = chain_characters(&chain);
        let index: HashMap<_, _> = chars.iter().enumerate().map(|(i, c)| (*c, CharId(i))).collect();
        let mut levels = vec![Vec::new(); chain.len()];
        for (i, c) in chars.iter().enumerate() {
            levels[c.depth - 1].push(CharId(i));
        }
        let depth = chars.iter().map(|c| c.depth).collect();
        let parent = chars
            .iter()
            .map(|c| {
                (c.depth > 1).then(|| {
                    let up = ChainCharacter {
                        depth: c.depth - 1,
                        functional: chain.tau(c.depth - 1).pull_back(&c.functional),
                    };
                    index[&up].0
                })
            })
            .collect();
        let forest = Forest::new(depth, parent)?;
        Ok(Self {
            chain,
            trans,
            chars,
            index,
            levels,
            forest,
        })
    }

    pub fn chain(&self) -> &FanChain {
        &self.chain
    }

    /// Number of characters.
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = CharId> + '_ {
        (0..self.chars.len()).map(CharId)
    }

    pub fn character(&self, id: CharId) -> &ChainCharacter {
        &self.chars[id.0]
    }

    pub fn functional(&self, id: CharId) -> Gf2Vec {
        self.chars[id.0].functional
    }

    pub fn id_of(&self, c: &ChainCharacter) -> Option<CharId> {
        self.index.get(c).copied()
    }

    pub fn depth(&self, id: CharId) -> usize {
        self.chars[id.0].depth
    }

    /// Number of levels.
    pub fn length(&self) -> usize {
        self.chain.len()
    }

    /// `L_d` in id order.
    pub fn level(&self, d: usize) -> &[CharId] {
        &self.levels[d - 1]
    }

    pub fn levels(&self) -> &[Vec<CharId>] {
        &self.levels
    }

    /// The specialization root-system; node `i` is `CharId(i)`.
    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    /// `T(d, e)` for `d <= e`.
    pub fn transition(&self, d: usize, e: usize) -> &Gf2Matrix {
        self.trans[d - 1][e - 1].as_ref().expect("transition needs d <= e")
    }

    /// `λ ∘ T(d, depth)`, the functional of the depth-`d` successor.
    pub fn pull_back(&self, id: CharId, d: usize) -> Gf2Vec {
        self.transition(d, self.depth(id)).pull_back(&self.functional(id))
    }

    /// The unique depth-`d` character `h` with `g ~> h`.
    pub fn successor(&self, g: CharId, d: usize) -> Result<CharId> {
        let depth = self.depth(g);
        if d == 0 || d > depth {
            return Err(Error::NoSuccessor { depth, target: d });
        }
        let c = ChainCharacter {
            depth: d,
            functional: self.pull_back(g, d),
        };
        Ok(self.index[&c])
    }

    /// `g ~> h`, decided in chain coordinates.
    pub fn specializes(&self, g: CharId, h: CharId) -> bool {
        let d = self.depth(h);
        d <= self.depth(g) && self.pull_back(g, d) == self.functional(h)
    }

    /// A character `f` with `g ~> f ~> h` at depth `d`.
    pub fn interpolate(&self, g: CharId, h: CharId, d: usize) -> Result<CharId> {
        if !self.specializes(g, h) {
            return Err(Error::Precondition(format!("{g} does not specialize to {h}")));
        }
        if d < self.depth(h) || d > self.depth(g) {
            return Err(Error::Precondition(format!(
                "depth {d} outside [{}, {}]",
                self.depth(h),
                self.depth(g)
            )));
        }
        let f = self.successor(g, d)?;
        assert!(self.specializes(g, f) && self.specializes(f, h));
        Ok(f)
    }

    /// Pointwise product of an odd number of characters: it lives at the
    /// smallest depth among the factors.
    pub fn odd_product(&self, factors: &[CharId]) -> Result<CharId> {
        if factors.len().is_multiple_of(2) {
            return Err(Error::Usage(format!("odd number of factors required, got {}", factors.len())));
        }
        let d = factors.iter().map(|&g| self.depth(g)).min().unwrap();
        let mut functional = Gf2Vec::zeros(self.chain.dim(d));
        for &g in factors {
            functional += self.pull_back(g, d);
        }
        Ok(self.index[&ChainCharacter { depth: d, functional }])
    }

    pub fn triple_product(&self, a: CharId, b: CharId, c: CharId) -> CharId {
        self.odd_product(&[a, b, c]).expect("three factors")
    }

    /// Value of a character at an element of the fan.
    pub fn value(&self, id: CharId, x: &Element) -> Sign3 {
        let c = &self.chars[id.0];
        match x {
            Element::Zero => Sign3::Zero,
            Element::Slice { depth, vec } if *depth <= c.depth => {
                Sign3::from_parity(c.functional.dot(&self.transition(*depth, c.depth).apply(vec)))
            }
            Element::Slice { .. } => Sign3::Zero,
        }
    }

    /// Table form of a character over `elements`.
    pub fn table_character(&self, id: CharId, elements: &[Element]) -> Character {
        Character::new(elements.iter().map(|x| self.value(id, x)).collect())
    }

    pub fn stratum(&self, kind: StratumKind, k: usize, j: usize) -> Result<Vec<CharId>> {
        Ok(self.forest.stratum(kind, k, j)?.into_iter().map(CharId).collect())
    }

    pub fn pred_set(&self, h: CharId, j1: usize, j2: usize, kind: PredKind) -> Result<Vec<CharId>> {
        Ok(self.forest.pred_set(h.0, j1, j2, kind)?.into_iter().map(CharId).collect())
    }

    /// Deepest depth among `h` and its predecessors.
    pub fn max_below(&self, h: CharId) -> usize {
        self.forest.max_below(h.0)
    }

    /// All `g` with `g ~> h`, including `h`.
    pub fn predecessors(&self, h: CharId) -> Vec<CharId> {
        self.forest.predecessors(h.0).into_iter().map(CharId).collect()
    }

    pub fn components(&self) -> Vec<Vec<CharId>> {
        self.forest
            .components()
            .into_iter()
            .map(|c| c.into_iter().map(CharId).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Level;

    fn v(s: &str) -> Gf2Vec {
        s.parse().unwrap()
    }

    fn e1() -> CharSpace {
        CharSpace::new(
            FanChain::new(
                vec![Level { dim: 1, minus: v("1") }, Level { dim: 2, minus: v("10") }],
                vec![Gf2Matrix::from_rows(1, vec![v("1"), v("0")]).unwrap()],
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn e1_order() {
        let x = e1();
        let (r, c1, c2) = (CharId(0), CharId(1), CharId(2));
        assert_eq!(x.level(1), &[r]);
        assert_eq!(x.level(2), &[c1, c2]);
        assert_eq!(x.successor(c1, 1).unwrap(), r);
        assert_eq!(x.successor(c1, 2).unwrap(), c1);
        assert!(x.successor(r, 2).is_err());
        assert!(x.specializes(c1, r) && !x.specializes(c1, c2));
        assert_eq!(x.triple_product(c1, c2, r), r);
        assert_eq!(x.interpolate(c1, r, 2).unwrap(), c1);
        assert_eq!(x.interpolate(c1, r, 1).unwrap(), r);
        assert_eq!(x.forest().children(0), &[1, 2]);
        assert_eq!(x.stratum(StratumKind::S, 1, 2).unwrap(), vec![r]);
        assert_eq!(x.pred_set(r, 2, 2, PredKind::B).unwrap(), vec![c1, c2]);
        assert_eq!(x.components().len(), 1);
    }

    #[test]
    fn rejects_invalid_chain() {
        let c = FanChain::single(2, v("00")).unwrap();
        assert!(matches!(CharSpace::new(c), Err(Error::Structural(_))));
    }
}
