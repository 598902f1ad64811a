//! Property checks over a corpus of chains, one report per check.
//!
//! Every check fans out over the corpus with rayon and folds the per-fan
//! reports back in corpus order, so output does not depend on scheduling.

use std::collections::HashSet;

use fanforge_core::aos::{verify_involution, InvolutionHandle};
use fanforge_core::chain::{chain_characters, chain_to_table, is_table_isomorphism, table_to_chain};
use fanforge_core::genesis::{standard_generating_system, verify_sgs, Policy};
use fanforge_core::iso::{brute_force_isomorphism, build_isomorphism, forests_isomorphic, invert, is_ars_morphism};
use fanforge_core::realize::check_forest;
use fanforge_core::report::PropertyReport;
use fanforge_core::represent::{evaluate, local_conditions, represent, triple_product_failure, Representation};
use fanforge_core::ternary::{enumerate_characters, specialization_criteria, Character};
use fanforge_core::{CharSpace, Sign3};
use rayon::prelude::*;

use crate::formats::{parse_forest, parse_valid_chain, serialize_chain, serialize_forest};

/// Fans up to this many characters get the pairwise isomorphism check.
pub const ISO_PAIR_LIMIT: usize = 10;
/// Fans up to this many characters get the exhaustive representation check.
pub const REPRESENT_LIMIT: usize = 4;
/// Number of seeded policies tried besides the deterministic one.
pub const SGS_SEEDS: u64 = 10;

fn over<F>(spaces: &[CharSpace], check: F) -> PropertyReport
where
    F: Fn(usize, &CharSpace) -> PropertyReport + Sync,
{
    let reports: Vec<PropertyReport> = spaces.par_iter().enumerate().map(|(i, x)| check(i, x)).collect();
    let mut total = PropertyReport::new();
    for r in reports {
        total.merge(r);
    }
    total
}

/// `card(F) = 2 card(X) + 1`, with both sides counted independently.
pub fn cardinality(spaces: &[CharSpace]) -> PropertyReport {
    over(spaces, |i, x| {
        let mut r = PropertyReport::new();
        let c = x.chain();
        let elements = c.elements().len() as u128;
        let chars = chain_characters(c).len() as u128;
        r.check(elements == 2 * chars + 1, || format!("fan {i}: card(F)={elements}, card(X)={chars}"));
        r.check(c.cardinalities() == (elements, chars), || format!("fan {i}: closed-form counts disagree"));
        r.check(x.len() as u128 == chars, || format!("fan {i}: character space has {} entries", x.len()));
        r
    })
}

/// The algebraic specialization criteria agree pairwise on table characters
/// and with the chain order.
pub fn specialization(spaces: &[CharSpace]) -> PropertyReport {
    over(spaces, |i, x| {
        let mut r = PropertyReport::new();
        let elements = x.chain().elements();
        let chars: Vec<Character> = x.ids().map(|g| x.table_character(g, &elements)).collect();
        for g in x.ids() {
            for h in x.ids() {
                let crit = specialization_criteria(&chars[g.0], &chars[h.0]);
                r.check(
                    matches!(crit, Ok(c) if c.iter().all(|&b| b == x.specializes(g, h))),
                    || format!("fan {i}: criteria {crit:?} on {g},{h}"),
                );
            }
        }
        r
    })
}

/// Every handle with both characters on one level, at every admissible depth.
pub fn involutions(spaces: &[CharSpace]) -> PropertyReport {
    over(spaces, |i, x| {
        let mut r = PropertyReport::new();
        for level in x.levels() {
            for &g1 in level {
                for &g2 in level {
                    for d in 1..=x.depth(g1) {
                        match InvolutionHandle::new(x, g1, g2, d) {
                            Ok(h) => {
                                let mut one = verify_involution(x, &h);
                                one.failures.iter_mut().for_each(|m| *m = format!("fan {i}: {m}"));
                                r.merge(one);
                            }
                            Err(e) => r.check(false, || format!("fan {i}: handle {g1},{g2},{d}: {e}")),
                        }
                    }
                }
            }
        }
        r
    })
}

/// The root system of every fan satisfies all necessary conditions.
pub fn regularity(spaces: &[CharSpace]) -> PropertyReport {
    over(spaces, |i, x| {
        let mut r = PropertyReport::new();
        let violations = check_forest(x.forest());
        r.check(violations.is_empty(), || {
            let all: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            format!("fan {i}: {}", all.join("; "))
        });
        r
    })
}

/// Standard generating systems under the deterministic and seeded policies.
pub fn generating_systems(spaces: &[CharSpace]) -> PropertyReport {
    over(spaces, |i, x| {
        let mut r = PropertyReport::new();
        let policies = std::iter::once(Policy::Deterministic).chain((0..SGS_SEEDS).map(Policy::Seeded));
        for policy in policies {
            let sgs = standard_generating_system(x, policy);
            let mut one = verify_sgs(x, &sgs);
            one.failures.iter_mut().for_each(|m| *m = format!("fan {i} {policy:?}: {m}"));
            r.merge(one);
        }
        r
    })
}

/// For every pair of small fans, forest codes, the construction and the
/// exhaustive search give the same answer, and built maps are morphisms
/// both ways.
pub fn isomorphisms(spaces: &[CharSpace]) -> PropertyReport {
    let small: Vec<usize> = (0..spaces.len()).filter(|&i| spaces[i].len() <= ISO_PAIR_LIMIT).collect();
    let pairs: Vec<(usize, usize)> = small
        .iter()
        .flat_map(|&a| small.iter().filter(move |&&b| a <= b).map(move |&b| (a, b)))
        .collect();
    let reports: Vec<PropertyReport> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (x1, x2) = (&spaces[a], &spaces[b]);
            let mut r = PropertyReport::new();
            let codes = forests_isomorphic(x1.forest(), x2.forest());
            let built = build_isomorphism(x1, x2, Policy::Deterministic);
            let brute = brute_force_isomorphism(x1, x2, ISO_PAIR_LIMIT);
            r.check(codes == built.is_ok(), || format!("fans {a},{b}: codes {codes}, built {built:?}"));
            r.check(matches!(&brute, Ok(m) if m.is_some() == codes), || {
                format!("fans {a},{b}: codes {codes}, search {brute:?}")
            });
            if let Ok(m) = built {
                let there = is_ars_morphism(x1, x2, &m);
                let back = is_ars_morphism(x2, x1, &invert(&m));
                let ok = matches!((&there, &back), (Ok(f), Ok(g)) if f.holds() && g.holds() && f.bijective);
                r.check(ok, || format!("fans {a},{b}: built map fails {there:?} / {back:?}"));
            }
            r
        })
        .collect();
    let mut total = PropertyReport::new();
    reports.into_iter().for_each(|r| total.merge(r));
    total
}

fn sign_map(len: usize, code: usize) -> Vec<Sign3> {
    (0..len).map(|i| Sign3::ALL[code / 3usize.pow(i as u32) % 3]).collect()
}

/// Exhaustive over all maps into signs on fans with at most
/// [`REPRESENT_LIMIT`] characters.
pub fn representation(spaces: &[CharSpace]) -> PropertyReport {
    over(spaces, |i, x| {
        let mut r = PropertyReport::new();
        if x.len() > REPRESENT_LIMIT {
            return r;
        }
        let evaluations: HashSet<Vec<Sign3>> = x.chain().elements().iter().map(|a| evaluate(x, a)).collect();
        r.check(evaluations.len() as u128 == x.chain().cardinalities().0, || {
            format!("fan {i}: evaluations do not separate elements")
        });
        let mut representable = 0;
        for code in 0..3usize.pow(x.len() as u32) {
            let f = sign_map(x.len(), code);
            let by_scan = evaluations.contains(&f);
            let preserving = matches!(triple_product_failure(x, &f), Ok(None));
            let local = matches!(local_conditions(x, &f), Ok(None));
            let answer = represent(x, &f);
            let represented = match &answer {
                Ok(Representation::Element(a)) => {
                    r.check(evaluate(x, a) == f, || format!("fan {i}: wrong element {a} for {f:?}"));
                    representable += 1;
                    true
                }
                _ => false,
            };
            r.check(
                by_scan == preserving && by_scan == local && by_scan == represented,
                || format!("fan {i}: {f:?}: scan {by_scan}, triples {preserving}, local {local}, {answer:?}"),
            );
        }
        r.check(representable == evaluations.len(), || {
            format!("fan {i}: {representable} representable maps, {} evaluations", evaluations.len())
        });
        r
    })
}

/// Chain to table and back, plus byte-identical file round trips.
pub fn round_trips(spaces: &[CharSpace], cap: usize) -> PropertyReport {
    over(spaces, |i, x| {
        let mut r = PropertyReport::new();
        let c = x.chain();
        match chain_to_table(c).and_then(|t| table_to_chain(&t, cap).map(|m| (t, m))) {
            Ok((t, model)) => {
                let rebuilt = chain_to_table(&model.chain);
                let iso = matches!(&rebuilt, Ok(b) if is_table_isomorphism(b, &t, &model.table_index_map()));
                r.check(iso, || format!("fan {i}: rebuilt table is not isomorphic"));
                r.check(model.chain.len() == c.len(), || format!("fan {i}: rebuilt chain has other length"));
                let chars = enumerate_characters(&t, cap);
                r.check(matches!(&chars, Ok(v) if v.len() == x.len()), || {
                    format!("fan {i}: table enumeration gave {chars:?}")
                });
            }
            Err(e) => r.check(false, || format!("fan {i}: {e}")),
        }
        let text = serialize_chain(c);
        let parsed = parse_valid_chain(&text);
        r.check(matches!(&parsed, Ok(p) if p == c && serialize_chain(p) == text), || {
            format!("fan {i}: chain file round trip failed: {parsed:?}")
        });
        let forest = serialize_forest(x.forest());
        let parsed = parse_forest(&forest);
        r.check(matches!(&parsed, Ok(p) if p == x.forest() && serialize_forest(p) == forest), || {
            format!("fan {i}: forest file round trip failed")
        });
        r
    })
}

/// Every check, in a fixed order.
pub fn run_all(spaces: &[CharSpace], cap: usize) -> Vec<(&'static str, PropertyReport)> {
    vec![
        ("cardinality", cardinality(spaces)),
        ("specialization", specialization(spaces)),
        ("involutions", involutions(spaces)),
        ("regularity", regularity(spaces)),
        ("generating-systems", generating_systems(spaces)),
        ("isomorphisms", isomorphisms(spaces)),
        ("representation", representation(spaces)),
        ("round-trips", round_trips(spaces, cap)),
    ]
}

