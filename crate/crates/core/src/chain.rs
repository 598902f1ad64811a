//! Finite fans as chains of GF(2) spaces with marked `-1` vectors and
//! `-1`-preserving transitions, plus conversion to and from tables.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vec, MAX_DIM};
use crate::sign::Sign3;
use crate::ternary::{enumerate_characters, fan_criterion, Character, TernaryTable, ValidationReport};

/// Largest table [`chain_to_table`] will materialize.
pub const TABLE_LIMIT: usize = 1 << 12;

/// One depth of a chain: a GF(2) space of dimension `dim` with the class of
/// `-1` marked.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    pub dim: usize,
    pub minus: Gf2Vec,
}

/// Depths run `1..=n`; `transitions[d-1]` maps depth `d` into depth `d+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FanChain {
    levels: Vec<Level>,
    transitions: Vec<Gf2Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainViolation {
    MinusIsZero { depth: usize },
    /// `tau_d(minus_d) != minus_{d+1}`.
    TransitionMovesMinus { depth: usize },
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainViolation::MinusIsZero { depth } => write!(f, "minus vector is zero at depth {depth}"),
            ChainViolation::TransitionMovesMinus { depth } => {
                write!(f, "transition at depth {depth} does not map minus to minus")
            }
        }
    }
}

impl FanChain {
    /// Checks shapes only; see [`FanChain::validate`] for the invariants.
    pub fn new(levels: Vec<Level>, transitions: Vec<Gf2Matrix>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Structural("chain needs at least one level".into()));
        }
        if transitions.len() + 1 != levels.len() {
            return Err(Error::Structural(format!(
                "{} levels need {} transitions, got {}",
                levels.len(),
                levels.len() - 1,
                transitions.len()
            )));
        }
        for (i, l) in levels.iter().enumerate() {
            if l.dim == 0 || l.dim > MAX_DIM {
                return Err(Error::Structural(format!("depth {}: dimension {} out of range 1..={MAX_DIM}", i + 1, l.dim)));
            }
            if l.minus.len() != l.dim {
                return Err(Error::Structural(format!(
                    "depth {}: minus has length {}, expected {}",
                    i + 1,
                    l.minus.len(),
                    l.dim
                )));
            }
        }
        for (i, t) in transitions.iter().enumerate() {
            if t.ncols() != levels[i].dim || t.nrows() != levels[i + 1].dim {
                return Err(Error::Structural(format!(
                    "transition at depth {}: shape {}x{}, expected {}x{}",
                    i + 1,
                    t.nrows(),
                    t.ncols(),
                    levels[i + 1].dim,
                    levels[i].dim
                )));
            }
        }
        Ok(Self { levels, transitions })
    }

    /// Single-level chain.
    pub fn single(dim: usize, minus: Gf2Vec) -> Result<Self> {
        Self::new(vec![Level { dim, minus }], vec![])
    }

    pub fn validate(&self) -> ValidationReport<ChainViolation> {
        let mut out = Vec::new();
        for (i, l) in self.levels.iter().enumerate() {
            if l.minus.is_zero() {
                out.push(ChainViolation::MinusIsZero { depth: i + 1 });
            }
        }
        for (i, t) in self.transitions.iter().enumerate() {
            if t.apply(&self.levels[i].minus) != self.levels[i + 1].minus {
                out.push(ChainViolation::TransitionMovesMinus { depth: i + 1 });
            }
        }
        ValidationReport(out)
    }

    /// Number of levels.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn transitions(&self) -> &[Gf2Matrix] {
        &self.transitions
    }

    pub fn dim(&self, depth: usize) -> usize {
        self.levels[depth - 1].dim
    }

    pub fn minus(&self, depth: usize) -> Gf2Vec {
        self.levels[depth - 1].minus
    }

    /// `tau_d`, from depth `d` to depth `d + 1`.
    pub fn tau(&self, depth: usize) -> &Gf2Matrix {
        &self.transitions[depth - 1]
    }

    /// Composite `tau_{e-1} ∘ … ∘ tau_d`, the identity when `d = e`.
    pub fn transition(&self, d: usize, e: usize) -> Result<Gf2Matrix> {
        if d == 0 || d > e || e > self.len() {
            return Err(Error::Usage(format!(
                "transition({d},{e}) needs 1 <= d <= e <= {}",
                self.len()
            )));
        }
        let mut m = Gf2Matrix::identity(self.dim(d));
        for step in d..e {
            m = self.tau(step).compose(&m);
        }
        Ok(m)
    }

    /// All transition composites, indexed `[d-1][e-1]` for `d <= e`.
    pub fn transition_table(&self) -> Vec<Vec<Option<Gf2Matrix>>> {
        let n = self.len();
        let mut out = vec![vec![None; n]; n];
        for d in 1..=n {
            let mut m = Gf2Matrix::identity(self.dim(d));
            out[d - 1][d - 1] = Some(m.clone());
            for e in d + 1..=n {
                m = self.tau(e - 1).compose(&m);
                out[d - 1][e - 1] = Some(m.clone());
            }
        }
        out
    }

    /// `(card F, card X_F)`; asserts `card F = 2 card X_F + 1`.
    pub fn cardinalities(&self) -> (u128, u128) {
        let card_f: u128 = 1 + self.levels.iter().map(|l| 1u128 << l.dim).sum::<u128>();
        let card_x: u128 = self.levels.iter().map(|l| 1u128 << (l.dim - 1)).sum();
        assert_eq!(card_f, 2 * card_x + 1, "cardinality identity fails");
        (card_f, card_x)
    }

    /// Elements in canonical order: `0`, `1`, `-1`, the rest of slice 1 in
    /// lexicographic order, then slices `2..=n`.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = vec![Element::Zero];
        let one = Gf2Vec::zeros(self.dim(1));
        let minus = self.minus(1);
        out.push(Element::Slice { depth: 1, vec: one });
        out.push(Element::Slice { depth: 1, vec: minus });
        for v in Gf2Vec::all(self.dim(1)) {
            if v != one && v != minus {
                out.push(Element::Slice { depth: 1, vec: v });
            }
        }
        for d in 2..=self.len() {
            out.extend(Gf2Vec::all(self.dim(d)).map(|vec| Element::Slice { depth: d, vec }));
        }
        out
    }

    /// Product in the chain model: `(d,v)(e,w) = (e, T(d,e) v + w)` for `d <= e`.
    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        self.multiply_with(&self.transition_table(), x, y)
    }

    fn multiply_with(&self, trans: &[Vec<Option<Gf2Matrix>>], x: &Element, y: &Element) -> Element {
        match (x, y) {
            (Element::Zero, _) | (_, Element::Zero) => Element::Zero,
            (Element::Slice { depth: d, vec: v }, Element::Slice { depth: e, vec: w }) => {
                let (d, v, e, w) = if d <= e { (*d, v, *e, w) } else { (*e, w, *d, v) };
                let moved = trans[d - 1][e - 1].as_ref().unwrap().apply(v);
                Element::Slice { depth: e, vec: moved + *w }
            }
        }
    }
}

/// A random valid chain: `1..=max_levels` levels of dimension
/// `1..=max_dim`, nonzero minus vectors and transitions uniform among those
/// preserving minus.
pub fn random_chain<R: Rng + ?Sized>(rng: &mut R, max_levels: usize, max_dim: usize) -> FanChain {
    assert!(max_levels >= 1 && (1..=MAX_DIM).contains(&max_dim));
    let n = rng.gen_range(1..=max_levels);
    let levels: Vec<Level> = (0..n)
        .map(|_| {
            let dim = rng.gen_range(1..=max_dim);
            let minus = loop {
                let v = Gf2Vec::from_bits(dim, rng.gen());
                if !v.is_zero() {
                    break v;
                }
            };
            Level { dim, minus }
        })
        .collect();
    let transitions = (0..n - 1)
        .map(|d| {
            let (from, to) = (&levels[d], &levels[d + 1]);
            let mut cols: Vec<Gf2Vec> = (0..from.dim).map(|_| Gf2Vec::from_bits(to.dim, rng.gen())).collect();
            // solve for one column so that minus_d lands on minus_{d+1}
            let pivot = (0..from.dim).find(|&i| from.minus.get(i)).unwrap();
            let mut fixed = to.minus;
            for (i, c) in cols.iter().enumerate() {
                if i != pivot && from.minus.get(i) {
                    fixed += *c;
                }
            }
            cols[pivot] = fixed;
            Gf2Matrix::from_columns(to.dim, &cols)
        })
        .collect();
    FanChain::new(levels, transitions).expect("shapes agree")
}

/// An element of the fan modelled by a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Zero,
    Slice { depth: usize, vec: Gf2Vec },
}

impl Element {
    pub fn depth(&self) -> Option<usize> {
        match self {
            Element::Zero => None,
            Element::Slice { depth, .. } => Some(*depth),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Zero => write!(f, "0"),
            Element::Slice { depth, vec } => write!(f, "{depth}:{vec}"),
        }
    }
}

/// A character in chain coordinates: a functional on the depth-`d` space
/// taking the value 1 on `minus_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainCharacter {
    pub depth: usize,
    pub functional: Gf2Vec,
}

impl ChainCharacter {
    /// Value at an element: `(-1)^{λ(T(e,d) v)}` on slices `e <= d`, else 0.
    pub fn value(&self, c: &FanChain, x: &Element) -> Sign3 {
        match x {
            Element::Zero => Sign3::Zero,
            Element::Slice { depth, vec } if *depth <= self.depth => {
                let moved = c.transition(*depth, self.depth).unwrap().apply(vec);
                Sign3::from_parity(self.functional.dot(&moved))
            }
            Element::Slice { .. } => Sign3::Zero,
        }
    }

    /// The value vector over `elements`.
    pub fn to_character(&self, c: &FanChain, elements: &[Element]) -> Character {
        Character::new(elements.iter().map(|x| self.value(c, x)).collect())
    }
}

impl fmt::Display for ChainCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}:{}", self.depth, self.functional)
    }
}

/// Every character, sorted by depth then functional.
pub fn chain_characters(c: &FanChain) -> Vec<ChainCharacter> {
    let mut out = Vec::new();
    for d in 1..=c.len() {
        let minus = c.minus(d);
        out.extend(
            Gf2Vec::all(c.dim(d))
                .filter(|l| l.dot(&minus))
                .map(|functional| ChainCharacter { depth: d, functional }),
        );
    }
    out
}

/// Table of the fan modelled by `c`, elements in [`FanChain::elements`] order.
pub fn chain_to_table(c: &FanChain) -> Result<TernaryTable> {
    let (card, _) = c.cardinalities();
    if card > TABLE_LIMIT as u128 {
        return Err(Error::Resource(format!("table would have {card} elements (limit {TABLE_LIMIT})")));
    }
    let elements = c.elements();
    let index: HashMap<Element, usize> = elements.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let trans = c.transition_table();
    let mul = elements
        .iter()
        .map(|x| elements.iter().map(|y| index[&c.multiply_with(&trans, x, y)]).collect())
        .collect();
    TernaryTable::new(mul, 1, 0, 2)
}

/// A chain recovered from a table, with the chain element of each table
/// index.
#[derive(Clone, Debug)]
pub struct ChainModel {
    pub chain: FanChain,
    pub element_of: Vec<Element>,
}

impl ChainModel {
    /// Table index of every chain element, in [`FanChain::elements`] order,
    /// i.e. the map `chain_to_table(chain) -> t`.
    pub fn table_index_map(&self) -> Vec<usize> {
        let pos: HashMap<Element, usize> = self.element_of.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        self.chain.elements().iter().map(|e| pos[e]).collect()
    }
}

/// Recovers the chain of a fan table.
///
/// The ideals are the zero-sets of characters ordered by inclusion. Each slice
/// `I_{d-1} \ I_d` is a group of exponent 2 under the table product whose
/// identity is the square of any member; it gets coordinates from a greedy
/// basis in index order. The transition sends `a` to `a · e_{d+1}`.
pub fn table_to_chain(t: &TernaryTable, cap: usize) -> Result<ChainModel> {
    let chars = enumerate_characters(t, cap)?;
    fan_criterion(t, &chars).map_err(|w| Error::NotAFan(w.to_string()))?;

    let mut ideals: Vec<_> = chars.iter().map(|c| c.zero_set()).collect();
    ideals.sort_by_key(|z| std::cmp::Reverse(z.len()));
    ideals.dedup();
    let n = ideals.len();
    if ideals[n - 1].len() != 1 || !ideals[n - 1].contains(t.zero()) {
        return Err(Error::NotAFan("no character has zero-set {0}".into()));
    }

    let mut element_of = vec![Element::Zero; t.size()];
    let mut levels = Vec::with_capacity(n);
    let mut coords: Vec<HashMap<usize, Gf2Vec>> = Vec::with_capacity(n);
    let mut idents = Vec::with_capacity(n);
    for d in 0..n {
        let slice: Vec<usize> = (0..t.size())
            .filter(|&x| !ideals[d].contains(x) && (d == 0 || ideals[d - 1].contains(x)))
            .collect();
        let ident = t.mul(slice[0], slice[0]);
        let mut span: HashMap<usize, u64> = HashMap::from([(ident, 0u64)]);
        let mut basis = 0usize;
        for &x in &slice {
            if span.contains_key(&x) {
                continue;
            }
            if basis >= MAX_DIM {
                return Err(Error::Resource(format!("slice at depth {} too large", d + 1)));
            }
            let extended: Vec<(usize, u64)> = span.iter().map(|(&y, &bits)| (t.mul(x, y), bits | (1 << basis))).collect();
            for (z, bits) in extended {
                if span.insert(z, bits).is_some() {
                    return Err(Error::NotAFan(format!("slice at depth {} is not a group of exponent 2", d + 1)));
                }
            }
            basis += 1;
        }
        if span.len() != slice.len() {
            return Err(Error::NotAFan(format!("slice at depth {} is not closed", d + 1)));
        }
        let c: HashMap<usize, Gf2Vec> = span.into_iter().map(|(x, b)| (x, Gf2Vec::from_bits(basis, b))).collect();
        let minus = *c
            .get(&t.mul(t.minus_one(), ident))
            .ok_or_else(|| Error::NotAFan(format!("-1 does not act on slice {}", d + 1)))?;
        for (&x, v) in &c {
            element_of[x] = Element::Slice { depth: d + 1, vec: *v };
        }
        levels.push(Level { dim: basis, minus });
        coords.push(c);
        idents.push(ident);
    }

    let mut transitions = Vec::with_capacity(n.saturating_sub(1));
    for d in 0..n.saturating_sub(1) {
        let inverse: HashMap<Gf2Vec, usize> = coords[d].iter().map(|(&x, v)| (*v, x)).collect();
        let columns: Vec<Gf2Vec> = (0..levels[d].dim)
            .map(|i| {
                let x = inverse[&Gf2Vec::unit(levels[d].dim, i)];
                coords[d + 1]
                    .get(&t.mul(x, idents[d + 1]))
                    .copied()
                    .ok_or_else(|| Error::NotAFan(format!("transition from depth {} leaves the slice", d + 1)))
            })
            .collect::<Result<_>>()?;
        transitions.push(Gf2Matrix::from_columns(levels[d + 1].dim, &columns));
    }

    let chain = FanChain::new(levels, transitions)?;
    let model = ChainModel { chain, element_of };
    let rebuilt = chain_to_table(&model.chain)?;
    if !is_table_isomorphism(&rebuilt, t, &model.table_index_map()) {
        return Err(Error::NotAFan("chain model does not reproduce the table".into()));
    }
    Ok(model)
}

/// Whether `map` (indices of `a` to indices of `b`) is an isomorphism of
/// ternary semigroups.
pub fn is_table_isomorphism(a: &TernaryTable, b: &TernaryTable, map: &[usize]) -> bool {
    if a.size() != b.size() || map.len() != a.size() {
        return false;
    }
    let mut seen = vec![false; b.size()];
    for &y in map {
        if y >= b.size() || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    map[a.one()] == b.one()
        && map[a.zero()] == b.zero()
        && map[a.minus_one()] == b.minus_one()
        && (0..a.size()).all(|x| (0..a.size()).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])))
}
