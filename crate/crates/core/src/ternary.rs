//! Finite ternary semigroups given by explicit multiplication tables, their
//! characters into `{+1, 0, -1}`, and the specialization and zero-set calculus
//! on characters.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::sign::Sign3;

/// Default bound on the number of table elements accepted by
/// [`enumerate_characters`].
pub const DEFAULT_CAP: usize = 64;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "FANFORGE_CAP";

/// The enumeration cap, honouring `FANFORGE_CAP` when it parses.
pub fn cap_from_env() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

/// A commutative multiplication table on `0..size` with distinguished
/// constants `1`, `0` and `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernaryTable {
    size: usize,
    one: usize,
    zero: usize,
    minus_one: usize,
    mul: Vec<usize>,
}

impl TernaryTable {
    /// Builds a table, checking only that it is well formed.
    pub fn new(mul: Vec<Vec<usize>>, one: usize, zero: usize, minus_one: usize) -> Result<Self> {
        let size = mul.len();
        if size == 0 {
            return Err(Error::Structural("empty table".into()));
        }
        for (name, idx) in [("one", one), ("zero", zero), ("minus_one", minus_one)] {
            if idx >= size {
                return Err(Error::Structural(format!("{name} index {idx} out of range 0..{size}")));
            }
        }
        let mut flat = Vec::with_capacity(size * size);
        for (x, row) in mul.iter().enumerate() {
            if row.len() != size {
                return Err(Error::Structural(format!(
                    "row {x} has {} entries, expected {size}",
                    row.len()
                )));
            }
            for (y, &z) in row.iter().enumerate() {
                if z >= size {
                    return Err(Error::Structural(format!("mul({x},{y}) = {z} out of range 0..{size}")));
                }
                flat.push(z);
            }
        }
        Ok(Self {
            size,
            one,
            zero,
            minus_one,
            mul: flat,
        })
    }

    /// The table of `{+1, 0, -1}` itself, elements ordered `0, 1, -1`.
    pub fn sign3() -> Self {
        let vals = [Sign3::Zero, Sign3::Plus, Sign3::Minus];
        let idx = |s: Sign3| vals.iter().position(|v| *v == s).unwrap();
        let mul = vals
            .iter()
            .map(|a| vals.iter().map(|b| idx(*a * *b)).collect())
            .collect();
        Self::new(mul, 1, 0, 2).expect("sign table is well formed")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn minus_one(&self) -> usize {
        self.minus_one
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.size + y]
    }

    /// Checks the ternary semigroup axioms, returning every violation found.
    pub fn validate(&self) -> ValidationReport {
        let m = self.size;
        let mut report = Vec::new();
        for x in 0..m {
            for y in x + 1..m {
                if self.mul(x, y) != self.mul(y, x) {
                    report.push(TableViolation::NotCommutative { x, y });
                }
            }
        }
        'assoc: for x in 0..m {
            for y in 0..m {
                let xy = self.mul(x, y);
                for z in 0..m {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        report.push(TableViolation::NotAssociative { x, y, z });
                        break 'assoc;
                    }
                }
            }
        }
        for x in 0..m {
            if self.mul(self.one, x) != x {
                report.push(TableViolation::IdentityFails { x });
            }
            if self.mul(self.zero, x) != self.zero {
                report.push(TableViolation::ZeroNotAbsorbing { x });
            }
            if self.mul(self.mul(x, x), x) != x {
                report.push(TableViolation::NotTripotent { x });
            }
            if x != self.zero && self.mul(self.minus_one, x) == x {
                report.push(TableViolation::MinusOneFixes { x });
            }
        }
        if self.mul(self.minus_one, self.minus_one) != self.one {
            report.push(TableViolation::MinusOneSquare);
        }
        if self.one == self.minus_one {
            report.push(TableViolation::OneIsMinusOne);
        }
        ValidationReport(report)
    }
}

/// A violated ternary semigroup axiom together with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableViolation {
    NotCommutative { x: usize, y: usize },
    /// Only the first failing triple is reported.
    NotAssociative { x: usize, y: usize, z: usize },
    IdentityFails { x: usize },
    ZeroNotAbsorbing { x: usize },
    NotTripotent { x: usize },
    MinusOneSquare,
    OneIsMinusOne,
    /// `(-1) x = x` for a non-zero `x`.
    MinusOneFixes { x: usize },
}

impl fmt::Display for TableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableViolation::NotCommutative { x, y } => write!(f, "not commutative at ({x},{y})"),
            TableViolation::NotAssociative { x, y, z } => write!(f, "not associative at ({x},{y},{z})"),
            TableViolation::IdentityFails { x } => write!(f, "1*x != x at x={x}"),
            TableViolation::ZeroNotAbsorbing { x } => write!(f, "0*x != 0 at x={x}"),
            TableViolation::NotTripotent { x } => write!(f, "x^3 != x at x={x}"),
            TableViolation::MinusOneSquare => write!(f, "(-1)^2 != 1"),
            TableViolation::OneIsMinusOne => write!(f, "1 = -1"),
            TableViolation::MinusOneFixes { x } => write!(f, "(-1)*x = x for non-zero x={x}"),
        }
    }
}

/// Outcome of a validation: empty iff every checked invariant holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport<V = TableViolation>(pub Vec<V>);

impl<V> ValidationReport<V> {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn violations(&self) -> &[V] {
        &self.0
    }
}

/// A map from the elements of a table into `{+1, 0, -1}`; a character when it
/// is multiplicative and respects the constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    values: Vec<Sign3>,
}

impl Character {
    pub fn new(values: Vec<Sign3>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[Sign3] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, x: usize) -> Sign3 {
        self.values[x]
    }

    pub fn is_character_of(&self, t: &TernaryTable) -> bool {
        if self.values.len() != t.size() {
            return false;
        }
        if self.values[t.one()] != Sign3::Plus
            || self.values[t.zero()] != Sign3::Zero
            || self.values[t.minus_one()] != Sign3::Minus
        {
            return false;
        }
        (0..t.size()).all(|x| (0..t.size()).all(|y| self.values[t.mul(x, y)] == self.values[x] * self.values[y]))
    }

    pub fn zero_set(&self) -> ZeroSet {
        let mut members = FixedBitSet::with_capacity(self.values.len());
        for (i, v) in self.values.iter().enumerate() {
            if v.is_zero() {
                members.insert(i);
            }
        }
        ZeroSet(members)
    }

    /// Pointwise product; the result need not be a character.
    pub fn product(&self, other: &Character) -> Result<Character> {
        check_same_len(self, other)?;
        Ok(Character::new(
            self.values.iter().zip(&other.values).map(|(a, b)| *a * *b).collect(),
        ))
    }

    pub fn square(&self) -> Character {
        Character::new(self.values.iter().map(|v| v.square()).collect())
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn check_same_len(a: &Character, b: &Character) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Usage(format!(
            "characters of different tables (lengths {} and {})",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// The set `h^-1[0]` of a character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroSet(pub FixedBitSet);

impl ZeroSet {
    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &ZeroSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Whether the set is an ideal of `t` containing `0`.
    pub fn is_ideal_of(&self, t: &TernaryTable) -> bool {
        self.contains(t.zero())
            && self
                .0
                .ones()
                .all(|x| (0..t.size()).all(|y| self.contains(t.mul(x, y))))
    }
}

/// Every character of `t`, in lexicographic order of value vectors.
///
/// Depth-first assignment in element order; each choice is propagated through
/// the multiplication table before branching further.
pub fn enumerate_characters(t: &TernaryTable, cap: usize) -> Result<Vec<Character>> {
    if t.size() > cap {
        return Err(Error::Resource(format!(
            "table has {} elements, enumeration cap is {cap}",
            t.size()
        )));
    }
    let mut assignment = vec![None; t.size()];
    let mut out = Vec::new();
    let seeds = [
        (t.one(), Sign3::Plus),
        (t.zero(), Sign3::Zero),
        (t.minus_one(), Sign3::Minus),
    ];
    for (x, v) in seeds {
        if !assign(t, &mut assignment, x, v) {
            return Ok(out);
        }
    }
    search(t, assignment, 0, &mut out);
    out.sort();
    Ok(out)
}

fn search(t: &TernaryTable, assignment: Vec<Option<Sign3>>, from: usize, out: &mut Vec<Character>) {
    let Some(x) = (from..t.size()).find(|&x| assignment[x].is_none()) else {
        out.push(Character::new(assignment.into_iter().map(Option::unwrap).collect()));
        return;
    };
    for v in Sign3::ALL {
        let mut next = assignment.clone();
        if assign(t, &mut next, x, v) {
            search(t, next, x + 1, out);
        }
    }
}

/// Sets `x := v` and closes under forced products; false on conflict.
fn assign(t: &TernaryTable, a: &mut [Option<Sign3>], x: usize, v: Sign3) -> bool {
    match a[x] {
        Some(w) => return w == v,
        None => a[x] = Some(v),
    }
    let mut work = vec![x];
    while let Some(p) = work.pop() {
        let vp = a[p].unwrap();
        for q in 0..t.size() {
            let Some(vq) = a[q] else { continue };
            let r = t.mul(p, q);
            let forced = vp * vq;
            match a[r] {
                Some(w) if w != forced => return false,
                Some(_) => {}
                None => {
                    a[r] = Some(forced);
                    work.push(r);
                }
            }
        }
    }
    true
}

/// Pointwise product of three characters.
pub fn triple_product(h1: &Character, h2: &Character, h3: &Character) -> Result<Character> {
    h1.product(h2)?.product(h3)
}

/// `g ~> h`: `h` is a specialization of `g`, decided by `h = h^2 g`.
pub fn specializes(g: &Character, h: &Character) -> Result<bool> {
    check_same_len(g, h)?;
    Ok(criterion_square(g, h))
}

/// `h^-1[1] ⊆ g^-1[1]`.
pub fn criterion_positive(g: &Character, h: &Character) -> bool {
    h.values
        .iter()
        .zip(&g.values)
        .all(|(hv, gv)| *hv != Sign3::Plus || *gv == Sign3::Plus)
}

/// `h^-1[-1] ⊆ g^-1[-1]`, the equivalent form of [`criterion_positive`].
pub fn criterion_negative(g: &Character, h: &Character) -> bool {
    h.values
        .iter()
        .zip(&g.values)
        .all(|(hv, gv)| *hv != Sign3::Minus || *gv == Sign3::Minus)
}

/// `g^-1[{0,1}] ⊆ h^-1[{0,1}]`.
pub fn criterion_nonnegative(g: &Character, h: &Character) -> bool {
    g.values
        .iter()
        .zip(&h.values)
        .all(|(gv, hv)| *gv == Sign3::Minus || *hv != Sign3::Minus)
}

/// `Z(g) ⊆ Z(h)` and `g`, `h` agree off `Z(h)`.
pub fn criterion_zero_agree(g: &Character, h: &Character) -> bool {
    g.values.iter().zip(&h.values).all(|(gv, hv)| {
        if hv.is_zero() {
            true
        } else {
            !gv.is_zero() && gv == hv
        }
    })
}

/// `h = h^2 g`.
pub fn criterion_square(g: &Character, h: &Character) -> bool {
    g.values.iter().zip(&h.values).all(|(gv, hv)| *hv == hv.square() * *gv)
}

/// `h^2 = h g`, the equivalent form of [`criterion_square`].
pub fn criterion_square_alt(g: &Character, h: &Character) -> bool {
    g.values.iter().zip(&h.values).all(|(gv, hv)| hv.square() == *hv * *gv)
}

/// Every characterization of `g ~> h`, in the order: positive set,
/// negative set, non-negative set, zero-set agreement, `h = h^2 g`,
/// `h^2 = h g`.
pub fn specialization_criteria(g: &Character, h: &Character) -> Result<[bool; 6]> {
    check_same_len(g, h)?;
    Ok([
        criterion_positive(g, h),
        criterion_negative(g, h),
        criterion_nonnegative(g, h),
        criterion_zero_agree(g, h),
        criterion_square(g, h),
        criterion_square_alt(g, h),
    ])
}

/// Relative position of `Z(g)` and `Z(h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroSetOrder {
    /// `Z(g) ⊊ Z(h)`.
    Subset,
    Equal,
    /// `Z(g) ⊋ Z(h)`.
    Superset,
    Incomparable,
}

/// Compares zero-sets both as sets and through `h = h g^2`, `g^2 = h^2`;
/// the two computations must agree.
pub fn zero_set_order(g: &Character, h: &Character) -> Result<ZeroSetOrder> {
    check_same_len(g, h)?;
    let (zg, zh) = (g.zero_set(), h.zero_set());
    let by_sets = match (zg.is_subset(&zh), zh.is_subset(&zg)) {
        (true, true) => ZeroSetOrder::Equal,
        (true, false) => ZeroSetOrder::Subset,
        (false, true) => ZeroSetOrder::Superset,
        (false, false) => ZeroSetOrder::Incomparable,
    };
    let (g2, h2) = (g.square(), h.square());
    let by_algebra = if g2 == h2 {
        ZeroSetOrder::Equal
    } else if h.product(&g2)? == *h {
        ZeroSetOrder::Subset
    } else if g.product(&h2)? == *g {
        ZeroSetOrder::Superset
    } else {
        ZeroSetOrder::Incomparable
    };
    assert_eq!(by_sets, by_algebra, "zero-set comparison disagrees with its algebraic form");
    Ok(by_sets)
}

/// Why a validated table fails the operative fan criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotAFan {
    /// No character tells the two elements apart.
    NotSeparated { x: usize, y: usize },
    /// The pointwise product of these characters is not a character.
    NotClosed { i: usize, j: usize, k: usize },
    /// Two characters with incomparable zero-sets.
    IncomparableZeroSets { i: usize, j: usize },
}

impl fmt::Display for NotAFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotAFan::NotSeparated { x, y } => write!(f, "characters do not separate elements {x} and {y}"),
            NotAFan::NotClosed { i, j, k } => {
                write!(f, "product of characters #{i}, #{j}, #{k} is not a character")
            }
            NotAFan::IncomparableZeroSets { i, j } => {
                write!(f, "characters #{i} and #{j} have incomparable zero-sets")
            }
        }
    }
}

/// Operative fan criterion on an enumerated character set: separation of
/// points, closure under triple products, and totally ordered zero-sets.
pub fn fan_criterion(t: &TernaryTable, chars: &[Character]) -> std::result::Result<(), NotAFan> {
    for x in 0..t.size() {
        for y in x + 1..t.size() {
            if chars.iter().all(|c| c.value(x) == c.value(y)) {
                return Err(NotAFan::NotSeparated { x, y });
            }
        }
    }
    let mut sorted = chars.to_vec();
    sorted.sort();
    for i in 0..chars.len() {
        for j in i..chars.len() {
            let ij = chars[i].product(&chars[j]).expect("same table");
            for (k, c) in chars.iter().enumerate().skip(j) {
                let p = ij.product(c).expect("same table");
                if sorted.binary_search(&p).is_err() {
                    return Err(NotAFan::NotClosed { i, j, k });
                }
            }
        }
    }
    for i in 0..chars.len() {
        for j in i + 1..chars.len() {
            let (zi, zj) = (chars[i].zero_set(), chars[j].zero_set());
            if !zi.is_subset(&zj) && !zj.is_subset(&zi) {
                return Err(NotAFan::IncomparableZeroSets { i, j });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_table_is_valid_with_one_character() {
        let t = TernaryTable::sign3();
        assert!(t.validate().is_empty());
        let chars = enumerate_characters(&t, DEFAULT_CAP).unwrap();
        assert_eq!(chars.len(), 1);
        assert_eq!(chars[0].values(), &[Sign3::Zero, Sign3::Plus, Sign3::Minus]);
        assert!(fan_criterion(&t, &chars).is_ok());
    }

    #[test]
    fn broken_identity_is_reported_with_witness() {
        // 1 * (-1) = 1 instead of -1
        let mul = vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 1]];
        let t = TernaryTable::new(mul, 1, 0, 2).unwrap();
        let report = t.validate();
        assert!(report.violations().contains(&TableViolation::IdentityFails { x: 2 }));
    }

    #[test]
    fn out_of_range_index_is_structural() {
        let err = TernaryTable::new(vec![vec![0, 5], vec![0, 1]], 1, 0, 1).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
        let err = TernaryTable::new(vec![vec![0]], 3, 0, 0).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn enumeration_respects_cap() {
        let t = TernaryTable::sign3();
        assert!(matches!(enumerate_characters(&t, 2), Err(Error::Resource(_))));
    }

    #[test]
    fn triple_product_of_equal_characters_is_itself() {
        let t = TernaryTable::sign3();
        let h = &enumerate_characters(&t, DEFAULT_CAP).unwrap()[0];
        assert_eq!(triple_product(h, h, h).unwrap(), *h);
        assert!(specializes(h, h).unwrap());
        assert_eq!(zero_set_order(h, h).unwrap(), ZeroSetOrder::Equal);
    }

    #[test]
    fn mismatched_tables_are_usage_errors() {
        let a = Character::new(vec![Sign3::Zero, Sign3::Plus]);
        let b = Character::new(vec![Sign3::Zero, Sign3::Plus, Sign3::Minus]);
        assert!(matches!(triple_product(&a, &a, &b), Err(Error::Usage(_))));
        assert!(matches!(specializes(&a, &b), Err(Error::Usage(_))));
    }

    /// `3 x 3` with componentwise product: its two projections have
    /// incomparable zero-sets.
    #[test]
    fn product_of_two_sign_tables_is_not_a_fan() {
        let vals = [Sign3::Zero, Sign3::Plus, Sign3::Minus];
        let elems: Vec<(Sign3, Sign3)> = vals.iter().flat_map(|a| vals.iter().map(move |b| (*a, *b))).collect();
        let idx = |p: (Sign3, Sign3)| elems.iter().position(|e| *e == p).unwrap();
        let mul = elems
            .iter()
            .map(|x| elems.iter().map(|y| idx((x.0 * y.0, x.1 * y.1))).collect())
            .collect();
        let t = TernaryTable::new(
            mul,
            idx((Sign3::Plus, Sign3::Plus)),
            idx((Sign3::Zero, Sign3::Zero)),
            idx((Sign3::Minus, Sign3::Minus)),
        )
        .unwrap();
        assert!(t.validate().is_empty());
        let chars = enumerate_characters(&t, DEFAULT_CAP).unwrap();
        // the two projections and their two mixed products
        assert_eq!(chars.len(), 4);
        assert!(matches!(
            fan_criterion(&t, &chars),
            Err(NotAFan::IncomparableZeroSets { .. })
        ));
    }
}
