mod common;

use common::{dominates, partitions, regular, to_laurent, Oracle};
use hecke_core::abacus::{
    beta_numbers, block_partitions, core_and_weight, from_beta, from_quotient, quotient, BlockId,
};
use hecke_core::certify::{certify_block, replay, Verdict};
use hecke_core::charp::{CharpEngine, CharpOptions};
use hecke_core::llt::llt_column;
use hecke_core::partitions::partitions_of;
use hecke_core::scopes::{transport, ScopesClass};
use hecke_core::Partition;
use proptest::prelude::*;

fn arb_partition(max_len: usize, max_part: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_part, 0..=max_len).prop_map(Partition::from_unsorted)
}

proptest! {
    #[test]
    fn beta_round_trip(lam in arb_partition(10, 12), extra in 0usize..6) {
        let r = lam.len() + extra;
        let b = beta_numbers(&lam, r).unwrap();
        prop_assert_eq!(b.bead_count(), r);
        prop_assert_eq!(from_beta(&b), lam);
    }

    #[test]
    fn quotient_round_trip(lam in arb_partition(9, 9), e in 2usize..6) {
        let (core, w) = core_and_weight(&lam, e);
        let q = quotient(&lam, e);
        prop_assert_eq!(q.size(), w);
        prop_assert_eq!(core.size() + e * w, lam.size());
        prop_assert_eq!(core_and_weight(&core, e), (core.clone(), 0));
        prop_assert_eq!(from_quotient(&core, &q, e).unwrap(), lam);
    }

    #[test]
    fn conjugation_reverses_dominance(n in 1usize..=12, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let ps = partitions_of(n);
        let (a, b) = (i.get(&ps), j.get(&ps));
        prop_assert_eq!(a.dominates_unchecked(b), b.conjugate().dominates_unchecked(&a.conjugate()));
        prop_assert_eq!(a.dominates_unchecked(b), dominates(a.parts(), b.parts()));
        if a.dominates_unchecked(b) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn removal_preserves_graded_entries(n in 4usize..=12, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let e = 3;
        let ps = partitions_of(n);
        let (lam, mu) = (i.get(&ps), j.get(&ps));
        prop_assume!(mu.is_e_regular(e));
        let d = llt_column(mu, e).unwrap().coeff(lam);
        if lam.part(1) == mu.part(1) {
            let (a, b) = (lam.without_first_row(), mu.without_first_row());
            prop_assert_eq!(&d, &llt_column(&b, e).unwrap().coeff(&a));
        }
        if lam.len() == mu.len() {
            let (a, b) = (lam.without_first_column(), mu.without_first_column());
            prop_assert_eq!(&d, &llt_column(&b, e).unwrap().coeff(&a));
        }
    }
}

#[test]
fn dominance_is_a_partial_order() {
    for n in 1..=8 {
        let ps = partitions_of(n);
        for a in &ps {
            assert!(a.dominates_unchecked(a));
            for b in &ps {
                if a != b && a.dominates_unchecked(b) {
                    assert!(!b.dominates_unchecked(a));
                    for c in &ps {
                        if b.dominates_unchecked(c) {
                            assert!(a.dominates_unchecked(c));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn partition_enumeration_matches_oracle() {
    for n in 0..=14 {
        let ours: Vec<Vec<u32>> = partitions_of(n)
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(ours, partitions(n));
    }
}

#[test]
fn llt_matches_oracle() {
    for (e, nmax) in [(2, 8), (3, 10), (4, 10)] {
        let mut oracle = Oracle::new(e);
        for n in 1..=nmax {
            for mu in partitions(n).into_iter().filter(|m| regular(m, e)) {
                let ours = llt_column(&common::part(&mu), e).unwrap();
                let theirs = oracle.g(&mu);
                assert_eq!(ours.len(), theirs.len(), "support of G({mu:?}) at e={e}");
                for (lam, c) in &theirs {
                    assert_eq!(
                        ours.coeff(&common::part(lam)),
                        to_laurent(c),
                        "d_({lam:?}),({mu:?}) at e={e}"
                    );
                }
            }
        }
    }
}

#[test]
fn canonical_basis_shape() {
    for e in [3, 4] {
        for n in 1..=11 {
            for mu in partitions_of(n).into_iter().filter(|m| m.is_e_regular(e)) {
                let g = llt_column(&mu, e).unwrap();
                let block = BlockId::of(&mu, e);
                assert!(g.coeff(&mu).is_one());
                for (lam, c) in g.iter() {
                    assert!(block.contains(lam));
                    assert!(mu.dominates_unchecked(lam), "{lam} in G({mu})");
                    if *lam != mu {
                        assert!(c.in_v_nat_v(), "{c} at {lam} in G({mu})");
                    }
                }
            }
        }
    }
}

#[test]
fn scopes_preserves_block_matrices() {
    for (e, w, top) in [(3, 2, 7), (3, 3, 8), (4, 2, 5)] {
        let mut checked = 0;
        let mut counts = vec![1; e];
        loop {
            let rc = ScopesClass::new(counts.clone(), w).unwrap().rebased();
            let (_, path) = rc.normalize_with_path();
            if let Some(step) = path.first() {
                checked += 1;
                let src = rc.block();
                let parts = block_partitions(&src);
                let one = [*step];
                for mu in parts.iter().filter(|m| m.is_e_regular(e)) {
                    let mt = transport(mu, e, &one).unwrap();
                    assert!(mt.is_e_regular(e));
                    let (g, gt) = (llt_column(mu, e).unwrap(), llt_column(&mt, e).unwrap());
                    for lam in &parts {
                        let lt = transport(lam, e, &one).unwrap();
                        assert_eq!(quotient(lam, e), quotient(&lt, e));
                        assert_eq!(g.coeff(lam), gt.coeff(&lt), "{lam},{mu} in {rc}");
                    }
                }
            }
            // next count vector with counts[0] = 1 and entries up to `top`
            let Some(k) = (1..e).rev().find(|&k| counts[k] < top) else {
                break;
            };
            counts[k] += 1;
            for c in counts.iter_mut().skip(k + 1) {
                *c = 1;
            }
        }
        assert!(checked > 0, "no swaps exercised at e={e}, w={w}");
    }
}

#[test]
fn axioms_only_tighten_bounds() {
    for (e, p, counts, w) in [
        (3, 2, vec![1, 4, 7], 4),
        (3, 2, vec![1, 2, 4], 2),
        (4, 3, vec![1, 2, 3, 5], 2),
        (3, 2, vec![1, 3, 4], 3),
    ] {
        let block = ScopesClass::new(counts, w).unwrap().block();
        let parts: Vec<Partition> = block_partitions(&block);
        let mut plain = CharpEngine::new(e, p, CharpOptions::default());
        let mut strong = CharpEngine::new(
            e,
            p,
            CharpOptions {
                allow_axioms: true,
                ..CharpOptions::default()
            },
        );
        let mut zero = CharpEngine::new(e, 0, CharpOptions::default());
        for mu in parts.iter().filter(|m| m.is_e_regular(e)) {
            let g = llt_column(mu, e).unwrap();
            for lam in &parts {
                let (a, b) = (
                    plain.entry(lam, mu).unwrap(),
                    strong.entry(lam, mu).unwrap(),
                );
                let d0 = g.coeff(lam).eval_at_one() as u64;
                assert!(a.lower >= d0 && b.lower >= a.lower);
                if let Some(u) = a.upper {
                    assert!(b.upper.is_some_and(|v| v <= u));
                }
                assert!(a.assumptions.is_empty());
                assert_eq!(zero.entry(lam, mu).unwrap().value(), Some(d0));
            }
        }
    }
}

#[test]
fn certificates_are_deterministic_and_replay() {
    for (e, p, counts, w) in [
        (3, 2, vec![1, 4, 7], 4),
        (3, 2, vec![1, 2, 5], 4),
        (4, 0, vec![1, 3, 5, 7], 4),
        (3, 0, vec![1, 2, 3], 2),
    ] {
        let block = ScopesClass::new(counts, w).unwrap().block();
        let a = certify_block(e, p, &block).unwrap();
        let b = certify_block(e, p, &block).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.verdict, Verdict::SchurianInfinite);
        assert!(replay(&a).unwrap());
    }
}

#[test]
fn ladder_vectors_have_bar_invariant_canonical_coordinates() {
    use hecke_core::fock::{ladder_vector, Convention};
    for e in [3, 4] {
        for n in 1..=12 {
            for mu in partitions_of(n).into_iter().filter(|m| m.is_e_regular(e)) {
                let mut rest = ladder_vector(&mu, e, Convention::Above).unwrap();
                let mut diag = None;
                loop {
                    let lead = rest.iter().next_back().map(|(a, b)| (a.clone(), b.clone()));
                    let Some((nu, c)) = lead else { break };
                    assert!(nu.is_e_regular(e), "A({mu}) leads with {nu}");
                    assert!(c.is_bar_invariant(), "{c} at G({nu}) in A({mu})");
                    if nu == mu {
                        diag = Some(c.clone());
                    }
                    rest.add_scaled(&llt_column(&nu, e).unwrap(), &(-&c));
                }
                assert!(diag.is_some_and(|d| d.is_one()), "A({mu})");
            }
        }
    }
}
