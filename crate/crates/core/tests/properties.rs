use std::collections::{BTreeSet, HashMap};

use fanforge_core::aos::{closure, is_dependent, kappa, rank, verify_involution, InvolutionHandle};
use fanforge_core::chain::{chain_characters, chain_to_table, is_table_isomorphism, random_chain, table_to_chain};
use fanforge_core::genesis::{standard_generating_system, verify_sgs, Policy};
use fanforge_core::iso::{brute_force_isomorphism, build_isomorphism, forests_isomorphic, is_ars_morphism, invert};
use fanforge_core::order::{PredKind, StratumKind};
use fanforge_core::realize::check_forest;
use fanforge_core::represent::{evaluate, local_conditions, represent, triple_product_failure, Representation};
use fanforge_core::ternary::{
    enumerate_characters, specialization_criteria, specializes, zero_set_order, Character, ZeroSetOrder,
};
use fanforge_core::{CharId, CharSpace, FanChain, Forest, Sign3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chain_from(seed: u64, levels: usize, dim: usize) -> FanChain {
    random_chain(&mut ChaCha8Rng::seed_from_u64(seed), levels, dim)
}

fn space(seed: u64) -> CharSpace {
    CharSpace::new(chain_from(seed, 4, 3)).unwrap()
}

/// Table characters, indexed like the space.
fn table_chars(x: &CharSpace) -> Vec<Character> {
    let elements = x.chain().elements();
    x.ids().map(|g| x.table_character(g, &elements)).collect()
}

fn odd_subsets(items: &[CharId]) -> Vec<Vec<CharId>> {
    (0u32..1 << items.len())
        .filter(|m| m.count_ones() % 2 == 1 && m.count_ones() >= 3)
        .map(|m| (0..items.len()).filter(|i| m >> i & 1 == 1).map(|i| items[i]).collect())
        .collect()
}

/// Some member equals the product of an odd number (at least 3) of others.
fn dependent_by_search(x: &CharSpace, set: &[CharId]) -> bool {
    set.iter().any(|&a| {
        let rest: Vec<CharId> = set.iter().copied().filter(|&b| b != a).collect();
        odd_subsets(&rest).iter().any(|s| x.odd_product(s).unwrap() == a)
    })
}

fn random_forest(seed: u64, size: usize) -> Forest {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut depth = vec![1];
    let mut parent = vec![None];
    for i in 1..size {
        if rng.gen_bool(0.3) {
            depth.push(1);
            parent.push(None);
        } else {
            let p = rng.gen_range(0..i);
            depth.push(depth[p] + 1);
            parent.push(Some(p));
        }
    }
    Forest::new(depth, parent).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Some bijection preserves depth and parent links.
fn isomorphic_by_search(a: &Forest, b: &Forest) -> bool {
    a.len() == b.len()
        && permutations(a.len()).iter().any(|p| {
            (0..a.len()).all(|i| a.depth(i) == b.depth(p[i]) && a.parent(i).map(|q| p[q]) == b.parent(p[i]))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn table_model_agrees_with_chain(seed in any::<u64>()) {
        let x = space(seed);
        let t = chain_to_table(x.chain()).unwrap();
        prop_assert!(t.validate().is_empty());
        let (card_f, card_x) = x.chain().cardinalities();
        prop_assert_eq!(t.size() as u128, card_f);
        prop_assert_eq!(x.len() as u128, card_x);

        let enumerated = enumerate_characters(&t, 128).unwrap();
        let mut from_chain = table_chars(&x);
        from_chain.sort();
        prop_assert_eq!(&enumerated, &from_chain);

        let model = table_to_chain(&t, 128).unwrap();
        let rebuilt = chain_to_table(&model.chain).unwrap();
        prop_assert!(is_table_isomorphism(&rebuilt, &t, &model.table_index_map()));
        prop_assert_eq!(model.chain.len(), x.length());
    }

    #[test]
    fn specialization_calculus(seed in any::<u64>()) {
        let x = space(seed);
        let chars = table_chars(&x);
        let elements = x.chain().elements();
        for g in x.ids() {
            for h in x.ids() {
                let (cg, ch) = (&chars[g.0], &chars[h.0]);
                let crit = specialization_criteria(cg, ch).unwrap();
                prop_assert!(crit.iter().all(|&c| c == crit[0]), "criteria disagree on {} {}", g, h);
                prop_assert_eq!(specializes(cg, ch).unwrap(), x.specializes(g, h));
                let order = zero_set_order(cg, ch).unwrap();
                prop_assert_ne!(order, ZeroSetOrder::Incomparable);
                let expected = match x.depth(g).cmp(&x.depth(h)) {
                    std::cmp::Ordering::Less => ZeroSetOrder::Superset,
                    std::cmp::Ordering::Equal => ZeroSetOrder::Equal,
                    std::cmp::Ordering::Greater => ZeroSetOrder::Subset,
                };
                prop_assert_eq!(order, expected);
                for k in x.ids() {
                    let p = x.triple_product(g, h, k);
                    prop_assert_eq!(&x.table_character(p, &elements), &cg.product(ch).unwrap().product(&chars[k.0]).unwrap());
                }
            }
        }
        // zero-set transport below a common predecessor
        for u in x.ids() {
            for g in x.ids().filter(|&g| x.specializes(u, g)) {
                for h in x.ids().filter(|&h| x.specializes(u, h)) {
                    let inclusion = chars[g.0].zero_set().is_subset(&chars[h.0].zero_set());
                    prop_assert_eq!(inclusion, x.specializes(g, h));
                }
            }
        }
    }

    #[test]
    fn successor_is_unique(seed in any::<u64>()) {
        let x = space(seed);
        for g in x.ids() {
            for d in 1..=x.depth(g) {
                let s = x.successor(g, d).unwrap();
                let all: Vec<CharId> = x.level(d).iter().copied().filter(|&h| x.specializes(g, h)).collect();
                prop_assert_eq!(all, vec![s]);
            }
        }
        // parents generate the order
        let f = x.forest();
        for g in x.ids() {
            for h in x.ids() {
                prop_assert_eq!(f.specializes(g.0, h.0), x.specializes(g, h));
            }
        }
    }

    #[test]
    fn product_identities(seed in any::<u64>()) {
        let x = space(seed);
        let ids: Vec<CharId> = x.ids().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..40 {
            let r = [1usize, 3, 5][rng.gen_range(0..3)];
            let gs: Vec<CharId> = (0..r).map(|_| ids[rng.gen_range(0..ids.len())]).collect();
            let hs: Vec<CharId> = gs.iter().map(|&g| x.successor(g, rng.gen_range(1..=x.depth(g))).unwrap()).collect();
            prop_assert!(x.specializes(x.odd_product(&gs).unwrap(), x.odd_product(&hs).unwrap()));
            // h g_1..g_r = h f_1..f_r when Z(g_i) ⊆ Z(f_i) ⊆ Z(h)
            let h = ids[rng.gen_range(0..ids.len())];
            let fs: Vec<CharId> = gs
                .iter()
                .map(|&g| x.successor(g, rng.gen_range(x.depth(h).min(x.depth(g))..=x.depth(g))).unwrap())
                .collect();
            if fs.iter().all(|&f| x.depth(f) >= x.depth(h)) {
                let mut left = vec![h];
                left.extend(&gs);
                let mut right = vec![h];
                right.extend(&fs);
                left.push(h);
                right.push(h);
                // pad to odd length with h^2, which is the identity on h's support
                if left.len() % 2 == 0 {
                    left.pop();
                    right.pop();
                }
                let (l, rr) = (x.odd_product(&left).unwrap(), x.odd_product(&right).unwrap());
                prop_assert_eq!(l, rr);
            }
        }
    }

    #[test]
    fn matroid_matches_search(seed in any::<u64>()) {
        let x = space(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        for level in x.levels() {
            for _ in 0..8 {
                let size = rng.gen_range(1..=level.len().min(8));
                let mut set: Vec<CharId> = level.clone();
                while set.len() > size {
                    set.remove(rng.gen_range(0..set.len()));
                }
                prop_assert_eq!(is_dependent(&x, &set).unwrap(), dependent_by_search(&x, &set));
                let r = rank(&x, &set).unwrap();
                prop_assert_eq!(closure(&x, &set).unwrap().len(), 1 << (r - 1));
            }
        }
    }

    #[test]
    fn strata_are_closed_images(seed in any::<u64>()) {
        let x = space(seed);
        let n = x.length();
        for k in 1..=n {
            for j in k..=n {
                let s = x.stratum(StratumKind::S, k, j).unwrap();
                let image: BTreeSet<CharId> = kappa(&x, k, j).unwrap().into_iter().map(|p| p.1).collect();
                prop_assert_eq!(&image.iter().copied().collect::<Vec<_>>(), &s);
                prop_assert!(s.len().is_power_of_two());
                prop_assert_eq!(closure(&x, &s).unwrap(), s.clone());
                prop_assert_eq!(s.len(), 1 << (rank(&x, &s).unwrap() - 1));
            }
        }
    }

    #[test]
    fn involutions_on_every_handle(seed in any::<u64>()) {
        let x = space(seed);
        for level in x.levels() {
            for &g1 in level {
                for &g2 in level {
                    for d in 1..=x.depth(g1) {
                        let h = InvolutionHandle::new(&x, g1, g2, d).unwrap();
                        let report = verify_involution(&x, &h);
                        prop_assert!(report.passed(), "{}", report);
                    }
                }
            }
        }
    }

    #[test]
    fn predecessor_embeddings(seed in any::<u64>()) {
        let x = space(seed);
        for h1 in x.ids() {
            let k = x.depth(h1);
            let j = x.max_below(h1);
            let p1 = x.predecessors(h1);
            for &g in &p1 {
                for &g2 in &p1 {
                    for &g3 in &p1 {
                        prop_assert!(x.specializes(x.triple_product(g, g2, g3), h1));
                    }
                }
            }
            for &h2 in x.level(k) {
                if x.max_below(h2) < j {
                    continue;
                }
                let m = fanforge_core::aos::embed_predecessors(&x, h1, h2, j).unwrap();
                let image: BTreeSet<CharId> = m.iter().map(|p| p.1).collect();
                prop_assert_eq!(image.len(), m.len());
                let expected: BTreeSet<CharId> =
                    x.predecessors(h2).into_iter().filter(|&u| x.depth(u) <= j).collect();
                prop_assert_eq!(image, expected);
            }
        }
    }

    #[test]
    fn regularity_and_sgs(seed in any::<u64>()) {
        let x = space(seed);
        let violations = check_forest(x.forest());
        prop_assert!(violations.is_empty(), "{:?}", violations);
        for policy in [Policy::Deterministic, Policy::Seeded(seed), Policy::Seeded(seed ^ 7)] {
            let sgs = standard_generating_system(&x, policy);
            let report = verify_sgs(&x, &sgs);
            prop_assert!(report.passed(), "{}", report);
            for k in 1..=x.length() {
                prop_assert_eq!(sgs.basis(k).len(), x.chain().dim(k));
            }
        }
        prop_assert_eq!(
            standard_generating_system(&x, Policy::Seeded(seed)),
            standard_generating_system(&x, Policy::Seeded(seed))
        );
        // B/A counts are constant on strata
        let n = x.length();
        for k in 1..=n {
            for j in k..=n {
                for (kind, pred) in [(StratumKind::S, PredKind::B), (StratumKind::C, PredKind::A)] {
                    let s = x.stratum(kind, k, j).unwrap();
                    for j1 in k..=j {
                        for j2 in k..=j1 {
                            let counts: BTreeSet<usize> =
                                s.iter().map(|&h| x.pred_set(h, j1, j2, pred).unwrap().len()).collect();
                            prop_assert!(counts.len() <= 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn forest_codes_match_search(a in any::<u64>(), b in any::<u64>(), size in 1usize..=7) {
        let (fa, fb) = (random_forest(a, size), random_forest(b, size));
        prop_assert_eq!(forests_isomorphic(&fa, &fb), isomorphic_by_search(&fa, &fb));
        prop_assert!(forests_isomorphic(&fa, &fa));
    }

    #[test]
    fn isomorphism_theorem_small(a in any::<u64>(), b in any::<u64>()) {
        let x1 = CharSpace::new(chain_from(a, 3, 3)).unwrap();
        let x2 = CharSpace::new(chain_from(b, 3, 3)).unwrap();
        prop_assume!(x1.len() <= 10 && x2.len() <= 10);
        let codes = forests_isomorphic(x1.forest(), x2.forest());
        let built = build_isomorphism(&x1, &x2, Policy::Deterministic);
        let brute = brute_force_isomorphism(&x1, &x2, 10).unwrap();
        prop_assert_eq!(codes, built.is_ok());
        prop_assert_eq!(codes, brute.is_some());
        if let Ok(m) = built {
            let f = is_ars_morphism(&x1, &x2, &m).unwrap();
            let g = is_ars_morphism(&x2, &x1, &invert(&m)).unwrap();
            prop_assert!(f.holds() && g.holds() && f.depth_preserving && f.bijective);
            prop_assert!(f.criteria_agree());
        }
    }

    #[test]
    fn automorphisms_with_seeds(seed in any::<u64>()) {
        let x = space(seed);
        for s in 0..3 {
            let m = build_isomorphism(&x, &x, Policy::Seeded(seed.wrapping_add(s))).unwrap();
            prop_assert!(is_ars_morphism(&x, &x, &m).unwrap().holds());
        }
    }
}

#[test]
fn representation_exhaustive_on_small_fans() {
    for seed in 0..40u64 {
        let x = CharSpace::new(chain_from(seed, 3, 3)).unwrap();
        if x.len() > 4 {
            continue;
        }
        let evaluations: HashMap<Vec<Sign3>, usize> =
            x.chain().elements().iter().map(|a| (evaluate(&x, a), 0)).collect();
        assert_eq!(evaluations.len() as u128, x.chain().cardinalities().0);
        let mut representable = 0;
        for code in 0..3usize.pow(x.len() as u32) {
            let f: Vec<Sign3> = (0..x.len()).map(|i| Sign3::ALL[code / 3usize.pow(i as u32) % 3]).collect();
            let preserving = triple_product_failure(&x, &f).unwrap().is_none();
            let local = local_conditions(&x, &f).unwrap().is_none();
            let scanned = evaluations.contains_key(&f);
            assert_eq!(preserving, scanned, "seed {seed}: {f:?}");
            assert_eq!(local, scanned, "seed {seed}: {f:?}");
            if let Representation::Element(a) = represent(&x, &f).unwrap() {
                assert_eq!(evaluate(&x, &a), f);
                representable += 1;
            }
        }
        assert_eq!(representable, evaluations.len());
    }
}

#[test]
fn chain_characters_count() {
    for seed in 0..50 {
        let c = chain_from(seed, 4, 4);
        let total: usize = c.levels().iter().map(|l| 1 << (l.dim - 1)).sum();
        assert_eq!(chain_characters(&c).len(), total);
        assert!(c.validate().is_empty());
    }
}
