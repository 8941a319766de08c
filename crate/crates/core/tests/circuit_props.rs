use extender_core::circuits::{
    advice_computes, circuit_from_json, circuit_to_json, from_bits, search_depth1_advice_shift, shift_bits, shift_fn,
    shift_search_space, to_bits, AdviceCircuit, Circuit, Gate, SearchStatus,
};
use extender_core::{Dag, Error, Fraction};
use proptest::prelude::*;

fn gate() -> impl Strategy<Value = Gate> {
    (0usize..5).prop_flat_map(|a| prop::collection::vec(any::<bool>(), 1 << a)).prop_map(|t| Gate::new(t).unwrap())
}

proptest! {
    #[test]
    fn hex_round_trip(g in gate()) {
        prop_assert_eq!(Gate::from_hex(g.arity(), &g.to_hex()).unwrap(), g);
    }

    #[test]
    fn bits_round_trip(v in 0usize..1 << 16, extra in 0usize..4) {
        let width = 16 + extra;
        prop_assert_eq!(from_bits(&to_bits(v, width)), v);
    }

    #[test]
    fn shift_is_invertible(n in 1usize..12, f in any::<u16>(), k in any::<u16>()) {
        let l = shift_bits(n);
        let bits = to_bits(f as usize % (1 << n), n);
        let k = k as usize % n;
        let back = (n - k) % n;
        let once = shift_fn(n, &bits, &to_bits(k, l)).unwrap();
        prop_assert_eq!(shift_fn(n, &once, &to_bits(back, l)).unwrap(), bits);
    }
}

fn xor_circuit() -> Circuit {
    let dag = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
    Circuit::new(dag, vec![None, None, Some(Gate::from_fn(2, |r| r == 1 || r == 2))], vec![0, 1], vec![2]).unwrap()
}

#[test]
fn circuit_json_round_trip() {
    let c = xor_circuit();
    assert_eq!(circuit_from_json(&circuit_to_json(&c)).unwrap(), c);
}

#[test]
fn truth_table_rows_follow_ascending_predecessors() {
    // Gate at 2 reads predecessors 0 and 1 as row bits 0 and 1; table "2"
    // (only row 1 true) fires on x0 = 1, x1 = 0.
    let dag = Dag::new(3, [(1, 2), (0, 2)]).unwrap();
    let c = Circuit::new(dag, vec![None, None, Some(Gate::from_hex(2, "2").unwrap())], vec![0, 1], vec![2]).unwrap();
    assert_eq!(c.evaluate(&[true, false]).unwrap(), vec![true]);
    assert_eq!(c.evaluate(&[false, true]).unwrap(), vec![false]);
}

#[test]
fn invalid_circuits_are_rejected() {
    let dag = Dag::new(3, [(0, 2), (1, 2)]).unwrap();
    let wrong_arity = Circuit::new(dag.clone(), vec![None, None, Some(Gate::constant(true))], vec![0, 1], vec![2]);
    assert!(matches!(wrong_arity, Err(Error::InvalidCircuit(_))));
    let missing = Circuit::new(dag.clone(), vec![None, None, None], vec![0, 1], vec![2]);
    assert!(matches!(missing, Err(Error::InvalidCircuit(_))));
    let cyclic = Dag::new(2, [(0, 1), (1, 0)]).unwrap();
    let c = Circuit::new(cyclic, vec![Some(Gate::from_fn(1, |r| r == 1)); 2], vec![], vec![0]);
    assert_eq!(c.unwrap_err(), Error::Cyclic);
}

#[test]
fn advice_width_is_checked() {
    let a = AdviceCircuit::new(xor_circuit(), vec![1]).unwrap();
    assert!(a.is_eps_advice(Fraction::new(1, 2).unwrap()));
    assert!(!a.is_eps_advice(Fraction::new(1, 3).unwrap()));
    assert!(advice_computes(&a, |s| vec![!s[0]], 1 << 10).unwrap());
    assert!(matches!(advice_computes(&a, |s| vec![s[0]], 2), Err(Error::BudgetExceeded { required: 4, .. })));
    assert!(AdviceCircuit::new(xor_circuit(), vec![2]).is_err());
}

#[test]
fn shift_search_on_two_bits() {
    let eps = Fraction::new(1, 4).unwrap();
    let space = shift_search_space(2, eps, 2, 1);
    assert_eq!(space.len(), 2);
    assert_eq!(space[0].wiring_patterns, 49);
    assert_eq!(space[0].search_space, 392);
    let r = search_depth1_advice_shift(2, eps, 2, 1, 1 << 20, 1 << 16).unwrap();
    assert_eq!(r.configs[0].status, SearchStatus::Unsatisfiable);
    assert_eq!(r.configs[1].status, SearchStatus::Satisfiable);
    assert!(r.configs[1].witness.is_some());
}
