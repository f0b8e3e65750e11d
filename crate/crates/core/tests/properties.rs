use std::collections::BTreeSet;

use mpreprog::bnet::{parse_booleannet, serialize_booleannet};
use mpreprog::dynamics::{
    attractor_reachable, escape_exists, escape_exists_exhaustive, fixed_points, in_attractor,
    is_trap_space, minimal_trap_spaces, percolate, smallest_trap_space,
};
use mpreprog::generate::random_unate_network;
use mpreprog::oracle::{
    async_stg, closed_subhypercubes, fixed_points_exhaustive, smallest_closed_containing,
    stg_fixed_points, trap_space_oracle,
};
use mpreprog::unate::{influence_graph, unateness_certificate, Unateness};
use mpreprog::{
    BooleanNetwork, Configuration, Limits, MonotoneNetwork, PartialAssignment, Subhypercube,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_net(seed: u64, n: usize, indegree: usize) -> BooleanNetwork {
    random_unate_network(&mut ChaCha8Rng::seed_from_u64(seed), n, indegree)
}

fn perturbation(n: usize, bits: u64, mask: u64) -> PartialAssignment {
    (0..n)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i, bits >> i & 1 == 1))
        .collect()
}

/// All vertices of `h` as an iterator over sub-cubes, for the escape check.
fn random_cube(n: usize, fixed: u64, bits: u64) -> Subhypercube {
    Subhypercube::new(
        (0..n)
            .map(|i| (fixed >> i & 1 == 1).then_some(bits >> i & 1 == 1))
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialize_round_trip(seed in any::<u64>(), n in 0usize..9) {
        let net = random_net(seed, n, 3);
        let text = serialize_booleannet(&net);
        let back = parse_booleannet(&text).unwrap();
        prop_assert!(back.semantically_equal(&net));
        prop_assert_eq!(serialize_booleannet(&back), text);
    }

    #[test]
    fn apply_matches_local_evaluation(seed in any::<u64>(), n in 1usize..9) {
        let net = random_net(seed, n, 3);
        let f = MonotoneNetwork::new(&net).unwrap();
        for x in Configuration::all(n) {
            let y = net.apply(&x);
            for i in 0..n {
                prop_assert_eq!(y.get(i), net.evaluate_local(i, &x));
                prop_assert_eq!(y.get(i), f.function(i).eval(|j| x.get(j)));
            }
        }
    }

    #[test]
    fn certificate_agrees_with_influence_graph(seed in any::<u64>(), n in 1usize..9) {
        let net = random_net(seed, n, 3);
        let graph = influence_graph(&net).unwrap();
        for i in 0..n {
            let Unateness::Unate(signs) = unateness_certificate(&net, i).unwrap() else {
                panic!("generated network is not unate");
            };
            for (j, sign) in signs.iter().enumerate() {
                let incoming: Vec<_> = graph
                    .edges()
                    .filter(|&(s, _, t)| s == j && t == i)
                    .map(|(_, sg, _)| sg)
                    .collect();
                match sign {
                    Some(s) => prop_assert_eq!(incoming, vec![*s]),
                    None => prop_assert!(incoming.is_empty()),
                }
            }
        }
    }

    #[test]
    fn perturbation_laws(seed in any::<u64>(), n in 1usize..8, bits in any::<u64>(), mask in any::<u64>()) {
        let net = random_net(seed, n, 3);
        let p = perturbation(n, bits, mask);
        let once = net.perturb(&p).unwrap();
        let twice = once.perturb(&p).unwrap();
        prop_assert!(once.semantically_equal(&twice));
        for x in Configuration::all(n) {
            for (i, v) in p.iter() {
                prop_assert_eq!(once.evaluate_local(i, &x), v);
            }
        }
        let graph = influence_graph(&once).unwrap();
        prop_assert!(graph.edges().all(|(_, _, t)| !p.contains(t)));
        prop_assert!(net.perturb(&PartialAssignment::new()).unwrap().semantically_equal(&net));
        // compiled perturbation agrees with the perturbed expression network
        let compiled = MonotoneNetwork::new(&net).unwrap().perturbed(&p);
        for x in Configuration::all(n) {
            let y = once.apply(&x);
            for i in 0..n {
                prop_assert_eq!(compiled.function(i).eval(|j| x.get(j)), y.get(i));
            }
        }
    }

    #[test]
    fn escape_check_is_exact(seed in any::<u64>(), n in 1usize..9, fixed in any::<u64>(), bits in any::<u64>()) {
        let net = random_net(seed, n, 3);
        let f = MonotoneNetwork::new(&net).unwrap();
        let h = random_cube(n, fixed, bits);
        for i in 0..n {
            for b in [false, true] {
                let brute = h.vertices().any(|y| net.evaluate_local(i, &y) == b);
                prop_assert_eq!(escape_exists(&f, &h, i, b), brute);
                prop_assert_eq!(escape_exists_exhaustive(&f, &h, i, b), brute);
            }
        }
    }

    #[test]
    fn trap_spaces_match_oracle(seed in any::<u64>(), n in 1usize..8) {
        let limits = Limits::default();
        let net = random_net(seed, n, 3);
        let f = MonotoneNetwork::new(&net).unwrap();
        let closed = closed_subhypercubes(&net, &limits).unwrap();
        let closed_set: BTreeSet<_> = closed.iter().cloned().collect();
        let attractors: BTreeSet<_> = minimal_trap_spaces(&f, &limits).unwrap().into_iter().collect();
        let oracle: BTreeSet<_> = trap_space_oracle(&net, &limits).unwrap().into_iter().collect();
        prop_assert_eq!(&attractors, &oracle);
        let core = percolate(&f, Subhypercube::full(n));
        prop_assert!(is_trap_space(&f, &core));
        prop_assert!(oracle.iter().all(|m| m.is_subcube_of(&core)));
        for x in Configuration::all(n) {
            let ts = smallest_trap_space(&f, &x);
            prop_assert!(ts.contains(&x));
            prop_assert!(is_trap_space(&f, &ts));
            prop_assert!(closed_set.contains(&ts));
            prop_assert_eq!(&ts, &smallest_closed_containing(&closed, &x));
            prop_assert_eq!(in_attractor(&f, &x, &limits).unwrap(), attractors.contains(&ts));
            prop_assert!(attractors.iter().any(|a| attractor_reachable(&f, &x, a)));
        }
        // smallest trap space below any trap space containing x
        for h in &closed {
            if let Some(x) = h.vertices().next() {
                prop_assert!(smallest_trap_space(&f, &x).is_subcube_of(h));
            }
        }
    }

    #[test]
    fn fixed_points_are_point_attractors(seed in any::<u64>(), n in 1usize..9) {
        let limits = Limits::default();
        let net = random_net(seed, n, 3);
        let f = MonotoneNetwork::new(&net).unwrap();
        let fps = fixed_points(&f);
        let mut exhaustive = fixed_points_exhaustive(&net, &limits).unwrap();
        exhaustive.sort();
        prop_assert_eq!(&fps, &exhaustive);
        let points: Vec<Configuration> = minimal_trap_spaces(&f, &limits)
            .unwrap()
            .into_iter()
            .filter(|h| h.free_count() == 0)
            .map(|h| h.vertices().next().unwrap())
            .collect();
        let mut sorted = points;
        sorted.sort();
        prop_assert_eq!(&fps, &sorted);
        let stg = async_stg(&net, None, &limits).unwrap();
        let mut from_stg = stg_fixed_points(&stg);
        from_stg.sort();
        prop_assert_eq!(&fps, &from_stg);
        for x in &fps {
            prop_assert_eq!(&smallest_trap_space(&f, x), &Subhypercube::from(x));
        }
    }

    #[test]
    fn ts_independent_of_scan_order(seed in any::<u64>(), n in 1usize..9, xbits in any::<u64>()) {
        let net = random_net(seed, n, 3);
        let f = MonotoneNetwork::new(&net).unwrap();
        let x = Configuration::from_bits(n, xbits);
        // free in reverse declaration order until stable
        let mut h = Subhypercube::from(&x);
        loop {
            let mut changed = false;
            for i in (0..n).rev() {
                if let Some(v) = h.get(i) {
                    if escape_exists(&f, &h, i, !v) {
                        h.set(i, None);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        prop_assert_eq!(h, smallest_trap_space(&f, &x));
    }
}
