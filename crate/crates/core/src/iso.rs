//! Morphisms between character spaces, canonical codes for forests, and the
//! constructive isomorphism between fans with isomorphic specialization
//! orders.

use std::collections::BTreeMap;
use std::fmt;

use crate::aos::is_dependent;
use crate::chain::ChainCharacter;
use crate::error::{Error, Result};
use crate::genesis::{
    lift_candidates, predecessor_tower, standard_generating_system, tower_basis, Chooser, Policy, Provenance,
};
use crate::gf2::{EchelonBasis, Gf2Vec};
use crate::order::{Forest, StratumKind};
use crate::space::{CharId, CharSpace};

/// Default bound on the size of character spaces searched exhaustively.
pub const BRUTE_FORCE_CAP: usize = 10;

/// Canonical code of a rooted forest: equal codes iff order-isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ForestCode(pub String);

impl fmt::Display for ForestCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Code of every node: its children's codes sorted and wrapped in brackets.
pub fn node_codes(f: &Forest) -> Vec<String> {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(f.depth(i)));
    let mut codes = vec![String::new(); f.len()];
    for i in order {
        let mut kids: Vec<&str> = f.children(i).iter().map(|&c| codes[c].as_str()).collect();
        kids.sort_unstable();
        codes[i] = format!("({})", kids.concat());
    }
    codes
}

pub fn forest_canonical(f: &Forest) -> ForestCode {
    let codes = node_codes(f);
    let mut roots: Vec<&str> = f.roots().iter().map(|&r| codes[r].as_str()).collect();
    roots.sort_unstable();
    ForestCode(roots.concat())
}

pub fn forests_isomorphic(a: &Forest, b: &Forest) -> bool {
    forest_canonical(a) == forest_canonical(b)
}

/// Which morphism conditions a map between character spaces satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphismCertificate {
    /// Triple products of characters on a common level are preserved.
    pub level_triples: bool,
    /// `g ~> h` implies `m(g) ~> m(h)`.
    pub monotone: bool,
    /// Triple products of arbitrary characters are preserved.
    pub global_triples: bool,
    pub depth_preserving: bool,
    pub bijective: bool,
}

impl MorphismCertificate {
    pub fn holds(&self) -> bool {
        self.level_triples && self.monotone
    }

    /// Whether the level-wise criterion agrees with the global one.
    pub fn criteria_agree(&self) -> bool {
        self.holds() == self.global_triples
    }
}

/// Checks a total map `map[g] = m(g)` from `x1` to `x2`.
pub fn is_ars_morphism(x1: &CharSpace, x2: &CharSpace, map: &[CharId]) -> Result<MorphismCertificate> {
    if map.len() != x1.len() || map.iter().any(|g| g.0 >= x2.len()) {
        return Err(Error::Usage("map is not total from the first space into the second".into()));
    }
    let m = |g: CharId| map[g.0];
    let ids: Vec<CharId> = x1.ids().collect();
    let mut level_triples = true;
    let mut global_triples = true;
    for (i, &a) in ids.iter().enumerate() {
        for (j, &b) in ids.iter().enumerate().skip(i) {
            for &c in &ids[j..] {
                let ok = m(x1.triple_product(a, b, c)) == x2.triple_product(m(a), m(b), m(c));
                if !ok {
                    global_triples = false;
                    if x1.depth(a) == x1.depth(b) && x1.depth(b) == x1.depth(c) {
                        level_triples = false;
                    }
                }
            }
        }
    }
    let monotone = ids
        .iter()
        .all(|&g| ids.iter().all(|&h| !x1.specializes(g, h) || x2.specializes(m(g), m(h))));
    let depth_preserving = ids.iter().all(|&g| x1.depth(g) == x2.depth(m(g)));
    let mut seen = vec![false; x2.len()];
    let injective = map.iter().all(|g| !std::mem::replace(&mut seen[g.0], true));
    Ok(MorphismCertificate {
        level_triples,
        monotone,
        global_triples,
        depth_preserving,
        bijective: injective && x1.len() == x2.len(),
    })
}

/// Inverse of a bijection given as a vector.
pub fn invert(map: &[CharId]) -> Vec<CharId> {
    let mut inv = vec![CharId(usize::MAX); map.len()];
    for (i, g) in map.iter().enumerate() {
        inv[g.0] = CharId(i);
    }
    inv
}

/// Constructs an isomorphism `x1 -> x2` from a standard generating system of
/// `x1`, mirrored level by level in `x2` and extended linearly.
pub fn build_isomorphism(x1: &CharSpace, x2: &CharSpace, policy: Policy) -> Result<Vec<CharId>> {
    let (c1, c2) = (forest_canonical(x1.forest()), forest_canonical(x2.forest()));
    if c1 != c2 {
        return Err(Error::OrderMismatch {
            left: c1.0,
            right: c2.0,
        });
    }
    let n = x1.length();
    let sgs = standard_generating_system(x1, policy);
    let mut chooser = Chooser::new(match policy {
        Policy::Deterministic => Policy::Deterministic,
        Policy::Seeded(s) => Policy::Seeded(s.wrapping_add(0x9e37_79b9_7f4a_7c15)),
    });
    let mut map = vec![None; x1.len()];

    let tower: Vec<(usize, Vec<CharId>)> = (1..=n).rev().map(|j| (j, x2.stratum(StratumKind::S, 1, j).unwrap())).collect();
    let mirror = tower_basis(x2, &mut chooser, &[], &tower);
    let source: Vec<(CharId, usize)> = sgs.levels[0]
        .iter()
        .map(|&(g, p)| match p {
            Provenance::LevelOneTower { j } => (g, j),
            other => unreachable!("level 1 holds {other:?}"),
        })
        .collect();
    let pairs = match_by_step(&source, &mirror, 1)?;
    extend_level(x1, x2, 1, &pairs, &mut map)?;

    for k in 1..n {
        let entries = &sgs.levels[k];
        let mut block = Vec::new();
        let mut pairs = Vec::new();
        let mut anchor = None;
        for &(g, p) in entries {
            match p {
                Provenance::PredecessorBlock { anchor: h0, j } => {
                    anchor = Some(h0);
                    block.push((g, j));
                }
                Provenance::Lift { h, j } => {
                    let target = map[h.0].expect("level k is mapped");
                    let g2 = chooser
                        .pick(&lift_candidates(x2, target, k + 1, j))
                        .ok_or_else(|| Error::Hypothesis(format!("no lift below the image of {h} at depth {}", k + 1)))?;
                    pairs.push((g, g2));
                }
                Provenance::LevelOneTower { .. } => unreachable!("tower entries only on level 1"),
            }
        }
        let h0 = anchor.expect("every level past the first has an anchor block");
        let h0_image = map[h0.0].expect("level k is mapped");
        let mirror = predecessor_tower(x2, &mut chooser, h0_image, k + 1, &[]);
        pairs.extend(match_by_step(&block, &mirror, k + 1)?);
        extend_level(x1, x2, k + 1, &pairs, &mut map)?;
    }

    let map: Vec<CharId> = map.into_iter().map(|g| g.expect("every level is mapped")).collect();
    let forward = is_ars_morphism(x1, x2, &map)?;
    let backward = is_ars_morphism(x2, x1, &invert(&map))?;
    if !(forward.bijective && forward.holds() && backward.holds()) {
        return Err(Error::Hypothesis(format!(
            "constructed map fails verification: {forward:?} / {backward:?}"
        )));
    }
    Ok(map)
}

/// Pairs the elements introduced at each tower step, in order.
fn match_by_step(source: &[(CharId, usize)], mirror: &[(CharId, usize)], depth: usize) -> Result<Vec<(CharId, CharId)>> {
    let group = |xs: &[(CharId, usize)]| {
        let mut m: BTreeMap<usize, Vec<CharId>> = BTreeMap::new();
        for &(g, j) in xs {
            m.entry(j).or_default().push(g);
        }
        m
    };
    let (a, b) = (group(source), group(mirror));
    if a.iter().map(|(j, v)| (j, v.len())).ne(b.iter().map(|(j, v)| (j, v.len()))) {
        return Err(Error::Hypothesis(format!("tower steps at depth {depth} have different sizes")));
    }
    Ok(a.values().zip(b.values()).flat_map(|(u, v)| u.iter().copied().zip(v.iter().copied())).collect())
}

/// Extends `pairs` (a basis of level `d` and its images) linearly to the
/// whole level.
fn extend_level(
    x1: &CharSpace,
    x2: &CharSpace,
    d: usize,
    pairs: &[(CharId, CharId)],
    map: &mut [Option<CharId>],
) -> Result<()> {
    let mut basis = EchelonBasis::new(x1.chain().dim(d));
    for &(g, _) in pairs {
        if !basis.insert(x1.functional(g)) {
            return Err(Error::Hypothesis(format!("basis of level {d} is dependent")));
        }
    }
    let images: Vec<CharId> = pairs.iter().map(|p| p.1).collect();
    if is_dependent(x2, &images)? {
        return Err(Error::Hypothesis(format!("image of the basis of level {d} is dependent")));
    }
    for &g in x1.level(d) {
        let combo = basis
            .decompose(&x1.functional(g))
            .ok_or_else(|| Error::Hypothesis(format!("basis of level {d} does not span")))?;
        let mut f = Gf2Vec::zeros(x2.chain().dim(d));
        for (i, &h) in images.iter().enumerate() {
            if combo >> i & 1 == 1 {
                f += x2.functional(h);
            }
        }
        map[g.0] = Some(
            x2.id_of(&ChainCharacter { depth: d, functional: f })
                .ok_or_else(|| Error::Hypothesis(format!("level {d} image leaves the level")))?,
        );
    }
    Ok(())
}

/// Exhaustive search over depth-preserving bijections; `None` when no
/// bijection is an isomorphism.
pub fn brute_force_isomorphism(x1: &CharSpace, x2: &CharSpace, cap: usize) -> Result<Option<Vec<CharId>>> {
    if x1.len() > cap || x2.len() > cap {
        return Err(Error::Resource(format!(
            "brute-force search over {} and {} characters exceeds cap {cap}",
            x1.len(),
            x2.len()
        )));
    }
    let sizes = |x: &CharSpace| x.levels().iter().map(Vec::len).collect::<Vec<_>>();
    if sizes(x1) != sizes(x2) {
        return Ok(None);
    }
    let mut map = vec![None; x1.len()];
    let mut used = vec![false; x2.len()];
    Ok(search(x1, x2, 0, &mut map, &mut used))
}

fn search(
    x1: &CharSpace,
    x2: &CharSpace,
    next: usize,
    map: &mut Vec<Option<CharId>>,
    used: &mut Vec<bool>,
) -> Option<Vec<CharId>> {
    if next == x1.len() {
        let total: Vec<CharId> = map.iter().map(|g| g.unwrap()).collect();
        let f = is_ars_morphism(x1, x2, &total).ok()?;
        let b = is_ars_morphism(x2, x1, &invert(&total)).ok()?;
        return (f.holds() && b.holds()).then_some(total);
    }
    let g = CharId(next);
    let d = x1.depth(g);
    for &c in x2.level(d) {
        if used[c.0] {
            continue;
        }
        map[next] = Some(c);
        if consistent(x1, x2, g, map) {
            used[c.0] = true;
            if let Some(found) = search(x1, x2, next + 1, map, used) {
                return Some(found);
            }
            used[c.0] = false;
        }
        map[next] = None;
    }
    None
}

/// Order and same-level products agree on everything assigned so far.
fn consistent(x1: &CharSpace, x2: &CharSpace, g: CharId, map: &[Option<CharId>]) -> bool {
    let mg = map[g.0].unwrap();
    let assigned: Vec<(CharId, CharId)> = map
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.map(|m| (CharId(i), m)))
        .collect();
    for &(a, ma) in &assigned {
        if x1.specializes(g, a) != x2.specializes(mg, ma) || x1.specializes(a, g) != x2.specializes(ma, mg) {
            return false;
        }
    }
    let d = x1.depth(g);
    let same: Vec<(CharId, CharId)> = assigned.into_iter().filter(|&(a, _)| x1.depth(a) == d).collect();
    for &(a, ma) in &same {
        for &(b, mb) in &same {
            let p = x1.triple_product(g, a, b);
            if let Some(mp) = map[p.0] {
                if mp != x2.triple_product(mg, ma, mb) {
                    return false;
                }
            }
        }
    }
    true
}
