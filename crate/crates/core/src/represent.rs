//! Which maps from a character space into `{+1, 0, -1}` are evaluations at
//! an element of the fan.

use std::fmt;

use crate::chain::Element;
use crate::error::{Error, Result};
use crate::sign::Sign3;
use crate::space::{CharId, CharSpace};

/// Why a map is not an evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `f(x) = 0`, `depth(y) <= depth(x)` and `f(y) != 0`.
    ZeroNotInherited { x: CharId, y: CharId },
    /// `f(x) != 0`, `y ~> x` and `f(y) != f(x)`.
    SignNotInherited { x: CharId, y: CharId },
    /// `x4 = x1 x2 x3` on a level where `f` does not vanish, but the product
    /// of the four values is `-1`.
    FourPointFan { points: [CharId; 4] },
    /// `f(abc) != f(a) f(b) f(c)`.
    TripleProduct { a: CharId, b: CharId, c: CharId },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ZeroNotInherited { x, y } => write!(f, "f({x}) = 0 but f({y}) != 0 at depth <= depth({x})"),
            Witness::SignNotInherited { x, y } => write!(f, "{y} specializes to {x} but f({y}) != f({x})"),
            Witness::FourPointFan { points: [a, b, c, d] } => {
                write!(f, "{d} = {a}{b}{c} but the product of values is -1")
            }
            Witness::TripleProduct { a, b, c } => write!(f, "f does not preserve the product of {a},{b},{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    /// The least element in canonical order whose evaluation is `f`.
    Element(Element),
    NotRepresentable(Witness),
}

fn check_len(x: &CharSpace, f: &[Sign3]) -> Result<()> {
    if f.len() != x.len() {
        return Err(Error::Usage(format!("map has {} values for {} characters", f.len(), x.len())));
    }
    Ok(())
}

/// First triple (in id order) whose product `f` fails to preserve.
pub fn triple_product_failure(x: &CharSpace, f: &[Sign3]) -> Result<Option<Witness>> {
    check_len(x, f)?;
    let n = x.len();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let p = x.triple_product(CharId(a), CharId(b), CharId(c));
                if f[p.0] != f[a] * f[b] * f[c] {
                    return Ok(Some(Witness::TripleProduct {
                        a: CharId(a),
                        b: CharId(b),
                        c: CharId(c),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// The three local conditions characterizing evaluations, checked in order.
pub fn local_conditions(x: &CharSpace, f: &[Sign3]) -> Result<Option<Witness>> {
    check_len(x, f)?;
    let ids: Vec<CharId> = x.ids().collect();
    for &a in &ids {
        if !f[a.0].is_zero() {
            continue;
        }
        for &b in &ids {
            if x.depth(b) <= x.depth(a) && !f[b.0].is_zero() {
                return Ok(Some(Witness::ZeroNotInherited { x: a, y: b }));
            }
        }
    }
    for &a in &ids {
        if f[a.0].is_zero() {
            continue;
        }
        for &b in &ids {
            if x.specializes(b, a) && f[b.0] != f[a.0] {
                return Ok(Some(Witness::SignNotInherited { x: a, y: b }));
            }
        }
    }
    for level in x.levels() {
        if level.iter().all(|g| f[g.0].is_zero()) {
            continue;
        }
        for (i, &a) in level.iter().enumerate() {
            for (j, &b) in level.iter().enumerate().skip(i + 1) {
                for &c in &level[j + 1..] {
                    let d = x.triple_product(a, b, c);
                    if f[a.0] * f[b.0] * f[c.0] * f[d.0] != Sign3::Plus {
                        return Ok(Some(Witness::FourPointFan { points: [a, b, c, d] }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Evaluation vector of an element.
pub fn evaluate(x: &CharSpace, a: &Element) -> Vec<Sign3> {
    x.ids().map(|g| x.value(g, a)).collect()
}

/// Finds an element `a` with `f = â`, or explains why none exists.
pub fn represent(x: &CharSpace, f: &[Sign3]) -> Result<Representation> {
    if let Some(broken) = triple_product_failure(x, f)? {
        let w = local_conditions(x, f)?.unwrap_or(broken);
        return Ok(Representation::NotRepresentable(w));
    }
    let a = x
        .chain()
        .elements()
        .into_iter()
        .find(|a| evaluate(x, a) == f)
        .expect("triple-product preserving maps are evaluations");
    Ok(Representation::Element(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{FanChain, Level};
    use crate::gf2::{Gf2Matrix, Gf2Vec};

    fn e1() -> CharSpace {
        let v = |s: &str| s.parse::<Gf2Vec>().unwrap();
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
    fn zero_at_depth_two_only() {
        let x = e1();
        let f = [Sign3::Plus, Sign3::Zero, Sign3::Plus];
        assert_eq!(
            represent(&x, &f).unwrap(),
            Representation::NotRepresentable(Witness::ZeroNotInherited { x: CharId(1), y: CharId(0) })
        );
        let hits = x.chain().elements().iter().filter(|a| evaluate(&x, a) == f).count();
        assert_eq!(hits, 0);
    }

    #[test]
    fn constants_and_round_trip() {
        let x = e1();
        let one = represent(&x, &[Sign3::Plus; 3]).unwrap();
        assert_eq!(one, Representation::Element(x.chain().elements()[1]));
        for a in x.chain().elements() {
            assert_eq!(represent(&x, &evaluate(&x, &a)).unwrap(), Representation::Element(a));
        }
    }

    #[test]
    fn length_mismatch() {
        assert!(represent(&e1(), &[Sign3::Plus]).is_err());
    }
}
