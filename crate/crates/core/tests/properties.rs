//! Property tests for the library invariants.

mod common;

use lrss::access::AccessStructure;
use lrss::bounds::{
    construct_m, coop_general_bound, min_m, naive_secrecy_bound, roundtrip_claim, secrecy_bound,
};
use lrss::format::{scheme_from_json, scheme_to_json, shares_from_json, shares_to_json};
use lrss::galois::{Elem, Field, Matrix};
use lrss::graphscheme::lp::{maximize, q};
use lrss::lnc::{max_flow, FlowEdge};
use lrss::lrc::{build_partitioned_lrc, LinearCode, LocalityStructure};
use lrss::oracle::{enumerate_joint, verdict, Verdict};
use lrss::secret::{shamir, split_scheme, EncodingInput, ShareVector};
use lrss::subsets::{combinations, members};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FIELDS: &[(u64, usize)] = &[(2, 1), (3, 1), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2)];

fn field_and_elems(count: usize) -> impl Strategy<Value = (Field, Vec<Elem>)> {
    prop::sample::select(FIELDS).prop_flat_map(move |(p, d)| {
        let f = Field::new(p, d).unwrap();
        let order = f.order();
        prop::collection::vec(0..order, count)
            .prop_map(move |v| (f.clone(), v.into_iter().map(Elem).collect()))
    })
}

fn matrix_over(p: u64, rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(0..p, cols), rows)
        .prop_map(|r| Matrix::from_u64(&r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((f, e) in field_and_elems(3)) {
        let (a, b, c) = (e[0], e[1], e[2]);
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(a, f.degree()), a);
    }

    #[test]
    fn rank_and_solve(m in matrix_over(7, 4, 3), x in prop::collection::vec(0u64..7, 3)) {
        let f = Field::prime(7).unwrap();
        prop_assert_eq!(m.rank(&f), m.transpose().rank(&f));
        prop_assert_eq!(m.rank(&f), common::rank_mod_p(&m.to_u64_rows(), 7));
        let x: Vec<Elem> = x.into_iter().map(Elem).collect();
        let b = m.mul_vec(&f, &x).unwrap();
        let y = m.solve(&f, &b).unwrap();
        prop_assert_eq!(m.mul_vec(&f, &y).unwrap(), b);
    }

    #[test]
    fn roundtrip_identity(x in 1u64..=2000, r in 1u64..=32) {
        prop_assert_eq!(roundtrip_claim(x, r).1, x);
    }

    #[test]
    fn secrecy_bounds_consistent(m in 1usize..=200, l in 0usize..200, r in 1usize..=20) {
        prop_assume!(l < m);
        prop_assert!(secrecy_bound(m, l, r) <= naive_secrecy_bound(m, l, r));
        let k = secrecy_bound(m, l, r);
        if k >= 1 {
            prop_assert!(min_m(k as usize, l, r) <= m as i64);
        }
        prop_assert_eq!(coop_general_bound(m, r, 1), secrecy_bound(m, 0, r));
    }

    #[test]
    fn packing_invariants(groups in 1usize..6, r in 1usize..5, frac in 0.0f64..=1.0) {
        let n = groups * (r + 1);
        let m = ((n as f64 * frac).round() as usize).max(1);
        let loc = LocalityStructure::partition(n, r).unwrap();
        let p = construct_m(&loc, m).unwrap();
        prop_assert_eq!(p.set.len(), m);
        prop_assert!(p.groups_covered >= m / (r + 1));
        prop_assert_eq!(p.reduced.len(), m - p.groups_covered);
    }

    #[test]
    fn shamir_round_trip(n in 2usize..7, t in 1usize..7, seed in any::<u64>()) {
        prop_assume!(t <= n);
        let f = Field::prime(11).unwrap();
        let s = shamir(n, t, &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = EncodingInput::random(&s, &mut rng);
        let shares = s.encode(&input).unwrap();
        for set in combinations(n, t) {
            prop_assert_eq!(&s.decode(&shares.restrict(&set)).unwrap(), &input.secret);
        }
    }

    #[test]
    fn split_repair_and_serialization(seed in any::<u64>(), l in 0usize..3) {
        let f = Field::prime(11).unwrap();
        let code = build_partitioned_lrc(&f, 8, 6, 3).unwrap();
        let s = split_scheme(&code, l).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shares = s.encode(&EncodingInput::random(&s, &mut rng)).unwrap();
        for i in 0..8 {
            prop_assert_eq!(&s.repair(i, &shares).unwrap(), shares.get(i).unwrap());
        }
        let back = scheme_from_json(&scheme_to_json(&s).unwrap()).unwrap();
        prop_assert_eq!(&back, &s);
        let text = shares_to_json(&s.field, &shares).unwrap();
        prop_assert_eq!(shares_from_json(&s.field, &text).unwrap(), shares);
    }

    #[test]
    fn oracle_matches_direct_counting(rows in prop::collection::vec(prop::collection::vec(0u64..3, 3), 4)) {
        let f = Field::prime(3).unwrap();
        let g = Matrix::from_u64(&rows).unwrap();
        prop_assume!(g.rank(&f) == 3);
        let code = LinearCode::new(f, g, None).unwrap();
        let s = split_scheme(&code, 1).unwrap();
        let dist = enumerate_joint(&s, 1 << 20).unwrap();
        for mask in 1u64..16 {
            let set = members(mask);
            let expect = match common::reveal(&s, &set) {
                common::Reveal::All => Verdict::Determined,
                common::Reveal::Nothing => Verdict::Independent,
                common::Reveal::Some => Verdict::Partial,
            };
            prop_assert_eq!(verdict(&dist, &set), expect);
            let h = dist.entropy(&set, false);
            prop_assert!((h - common::entropy(&s, &set, false)).abs() < 1e-9);
        }
    }

    #[test]
    fn simplex_matches_vertices(
        c in prop::collection::vec(0i64..5, 2..4),
        seed in prop::collection::vec(prop::collection::vec(1i64..5, 3), 3),
        b in prop::collection::vec(1i64..8, 3),
    ) {
        let nv = c.len();
        let a: Vec<Vec<i64>> = seed.iter().map(|row| row[..nv].to_vec()).collect();
        let (val, x) = maximize(
            &c.iter().map(|&v| q(v)).collect::<Vec<_>>(),
            &a.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect::<Vec<_>>(),
            &b.iter().map(|&v| q(v)).collect::<Vec<_>>(),
        ).unwrap();
        let brute = common::lp_by_vertices(&c, &a, &b);
        prop_assert_eq!(val.clone(), BigRational::new(BigInt::from(*brute.numer()), BigInt::from(*brute.denom())));
        let at_x: BigRational = c.iter().zip(&x).map(|(&ci, xi)| xi * q(ci)).sum();
        prop_assert_eq!(at_x, val);
    }

    #[test]
    fn max_flow_equals_min_cut(caps in prop::collection::vec(0u64..4, 15)) {
        // complete DAG on 6 nodes, 0 -> 5
        let mut edges = Vec::new();
        let mut it = caps.iter();
        for u in 0..6 {
            for v in u + 1..6 {
                edges.push(FlowEdge { from: u, to: v, cap: *it.next().unwrap(), symbol: None });
            }
        }
        let flow = max_flow(6, &edges, 0, 5);
        let cut = (0u64..16)
            .map(|m| {
                let side = |v: usize| v == 0 || (v != 5 && m >> (v - 1) & 1 == 1);
                edges.iter().filter(|e| side(e.from) && !side(e.to)).map(|e| e.cap).sum::<u64>()
            })
            .min()
            .unwrap();
        prop_assert_eq!(flow, cut);
    }

    #[test]
    fn access_structure_closure(sets in prop::collection::vec(prop::collection::btree_set(0usize..5, 1..4), 1..4)) {
        let a = AccessStructure::new(5, sets.into_iter().map(|s| s.into_iter().collect()).collect()).unwrap();
        for mask in 0u64..32 {
            let s = members(mask);
            if a.is_qualified(&s) {
                for i in 0..5 {
                    let mut t = s.clone();
                    t.push(i);
                    prop_assert!(a.is_qualified(&t));
                }
            }
        }
        for b in a.maximal_blocked() {
            prop_assert!(!a.is_qualified(&b));
            for i in (0..5).filter(|i| !b.contains(i)) {
                let mut t = b.clone();
                t.push(i);
                prop_assert!(a.is_qualified(&t));
            }
        }
    }

    #[test]
    fn partial_views_restrict(seed in any::<u64>(), mask in 0u64..16) {
        let f = Field::prime(5).unwrap();
        let s = shamir(4, 2, &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shares = s.encode(&EncodingInput::random(&s, &mut rng)).unwrap();
        let idx = members(mask);
        let part: ShareVector = shares.restrict(&idx);
        prop_assert_eq!(part.indices(), idx);
        if part.indices().len() < 2 {
            prop_assert!(s.decode(&part).is_err());
        }
    }
}

#[test]
fn coop_rate_consistency() {
    for r in 1..=10i64 {
        for d in 1..=r {
            assert!(Ratio::new(1, d + 1) <= Ratio::new(r, r + d));
        }
    }
}
