use proptest::prelude::*;

use qstab::canonicalize::{normal_form, Partition};
use qstab::channel::{analyze_channel, centralizer_in_pauli, same_span, verify_duality, CodeSpec};
use qstab::crt;
use qstab::oracle;
use qstab::random::{random_code_parts, random_local_gates, random_partition, random_state, rng};
use qstab::{CliffordTableau, PauliProduct};

fn pauli(d: u64, n: usize) -> impl Strategy<Value = PauliProduct> {
    (
        0..2 * d as i128,
        prop::collection::vec(0..d as i128, n),
        prop::collection::vec(0..d as i128, n),
    )
        .prop_map(move |(g, x, z)| PauliProduct::new(d, g, &x, &z).unwrap())
}

fn pair(n: usize) -> impl Strategy<Value = (PauliProduct, PauliProduct)> {
    (2u64..=6).prop_flat_map(move |d| (pauli(d, n), pauli(d, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative((p, q) in pair(3), k in 0i128..7) {
        let r = p.power(k);
        let a = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let b = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn commutation_relation((p, q) in pair(2)) {
        let a = p.commutation_phase(&q).unwrap();
        let pq = p.multiply(&q).unwrap();
        let qp = q.multiply(&p).unwrap();
        // pq = ω^a qp, and ω = λ^2
        prop_assert_eq!(pq.proportional(&qp), Some(2 * a % (2 * p.d())));
    }

    #[test]
    fn power_order_closes((p, _q) in pair(3)) {
        prop_assert!(p.multiply(&p.inverse()).unwrap().is_identity());
        prop_assert!(p.power(p.order() as i128).is_scalar());
    }

    #[test]
    fn tableaux_preserve_commutation(seed in 0u64..10_000, d in 2u64..=6) {
        let mut r = rng(seed);
        let part = Partition::new(3, vec![vec![0, 1, 2], vec![], vec![]]).unwrap();
        let gates = random_local_gates(&part, d, 12, &mut r);
        let t = CliffordTableau::from_gates(3, d, &gates).unwrap();
        prop_assert!(t.is_symplectic());
        let p = PauliProduct::x_on(3, d, 0, 1).multiply(&PauliProduct::z_on(3, d, 1, 2)).unwrap();
        let q = PauliProduct::z_on(3, d, 0, 1).multiply(&PauliProduct::x_on(3, d, 2, 1)).unwrap();
        let before = p.commutation_phase(&q).unwrap();
        let after = t.conjugate(&p).unwrap().commutation_phase(&t.conjugate(&q).unwrap()).unwrap();
        prop_assert_eq!(before, after);
        let back = CliffordTableau::compose(&t.inverse(), &t).unwrap();
        prop_assert!(back.acts_as_identity());
    }

    #[test]
    fn qudit_conservation(seed in 0u64..10_000, d in prop::sample::select(vec![2u64, 3, 5, 6, 10, 15]), n in 1usize..=6) {
        let s = random_state(n, d, seed).unwrap();
        let part = random_partition(n, 3, &mut rng(seed ^ 0xabc)).unwrap();
        let nf = normal_form(&s, &part).unwrap();
        for c in &nf.components {
            let k = c.counts;
            let sizes: Vec<usize> = part.parts().iter().map(|p| p.len()).collect();
            prop_assert_eq!(k.m_a + k.m_ab + k.m_ac + k.m_abc, sizes[0]);
            prop_assert_eq!(k.m_b + k.m_ab + k.m_bc + k.m_abc, sizes[1]);
            prop_assert_eq!(k.m_c + k.m_ac + k.m_bc + k.m_abc, sizes[2]);
        }
        prop_assert!(nf.verify().unwrap());
    }

    #[test]
    fn reduced_rank_matches_counts(seed in 0u64..10_000, d in prop::sample::select(vec![2u64, 3, 6]), n in 2usize..=5) {
        let s = random_state(n, d, seed).unwrap();
        let part = random_partition(n, 2, &mut rng(seed)).unwrap();
        let nf = normal_form(&s, &part).unwrap();
        prop_assert_eq!(s.reduced_rank(&part.parts()[0]).unwrap(), nf.predicted_rank(&[0]));
    }

    #[test]
    fn crt_components_are_states(seed in 0u64..10_000, n in 1usize..=5) {
        let s = random_state(n, 30, seed).unwrap();
        let parts = crt::decompose_state(&s).unwrap();
        prop_assert_eq!(parts.iter().map(|p| p.d()).collect::<Vec<_>>(), vec![2, 3, 5]);
        for p in &parts {
            prop_assert!(p.is_state());
        }
    }

    #[test]
    fn duality_on_random_codes(seed in 0u64..10_000, d in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1usize..=6) {
        let k = (seed as usize) % (n.min(3) + 1);
        let (g, fs) = random_code_parts(n, k, d, seed).unwrap();
        let code = CodeSpec::new(g, fs).unwrap();
        let b: Vec<usize> = (0..n).filter(|q| (seed >> q) & 1 == 1).collect();
        let c: Vec<usize> = (0..n).filter(|q| (seed >> q) & 1 == 0).collect();
        let a = analyze_channel(&code, &b, &c).unwrap();
        prop_assert!(verify_duality(&a));
        prop_assert_eq!(a.m_abc + a.m_ab + a.m_ac, k);
    }
}

#[test]
fn centralizer_of_single_z() {
    let d = 3;
    let z = PauliProduct::z_on(2, d, 0, 1);
    let c = centralizer_in_pauli(std::slice::from_ref(&z), 2, d).unwrap();
    let want = [z, PauliProduct::x_on(2, d, 1, 1), PauliProduct::z_on(2, d, 1, 1)];
    assert!(same_span(&c, &want, 2, d));
}

#[test]
fn scrambled_state_matches_circuit() {
    let d = 3;
    let s = random_state(3, d, 42).unwrap();
    let part = Partition::new(3, vec![vec![0, 1], vec![2], vec![]]).unwrap();
    let gates = random_local_gates(&part, d, 10, &mut rng(1));
    let t = CliffordTableau::from_gates(3, d, &gates).unwrap();
    let u = oracle::clifford_matrix(&gates, 3, d).unwrap();
    let psi = oracle::state_from_group(&s).unwrap();
    let moved: Vec<oracle::C> = (&u * nalgebra::DVector::from_vec(psi)).iter().copied().collect();
    let want = oracle::state_from_group(&s.conjugated(&t).unwrap()).unwrap();
    assert!(oracle::fidelity(&moved, &want) > 1.0 - 1e-9);
}

#[test]
fn extra_bc_pairs_leave_info_groups_alone() {
    use qstab::GraphAdjacency;
    let d = 3;
    let base = CodeSpec::ghz(d).unwrap();
    // append an independent B-C edge pair on outputs 3, 4
    let mut g = GraphAdjacency::empty(4, d);
    g.set_edge(2, 3, 1).unwrap();
    let f = PauliProduct::from_terms(4, d, &[(0, 0, 1), (1, 0, 1)]);
    let bigger = CodeSpec::new(g, vec![f]).unwrap();
    let a = analyze_channel(&base, &[0], &[1]).unwrap();
    let b = analyze_channel(&bigger, &[0, 2], &[1, 3]).unwrap();
    assert_eq!(b.m_bc, 1);
    assert!(same_span(&a.g_b, &b.g_b, 1, d) && same_span(&a.g_c, &b.g_c, 1, d));
}
