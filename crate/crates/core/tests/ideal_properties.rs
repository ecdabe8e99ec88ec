mod common;

use curvemoduli_core::idealcalc::{hilbert_data, ideal_spans, standard_basis_check, IdealPresentation};
use curvemoduli_core::ringcore::binomial;
use curvemoduli_core::{FieldSpec, Monomial, Scalar, TruncatedPoly};
use proptest::prelude::*;

const LEVEL: u32 = 6;

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Q), Just(FieldSpec::prime(3).unwrap()), Just(FieldSpec::prime(5).unwrap())]
}

fn nonconstant(nv: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..4, nv).prop_filter("lies in M", |e| e.iter().any(|&x| x > 0))
}

fn generator(nv: usize, field: FieldSpec) -> impl Strategy<Value = TruncatedPoly> {
    prop::collection::vec((nonconstant(nv), -3i64..4), 1..4).prop_map(move |terms| {
        TruncatedPoly::from_terms(
            nv,
            field,
            LEVEL,
            terms.into_iter().map(|(e, c)| (Monomial::new(e), Scalar::from_integer(c.into()))),
        )
        .unwrap()
    })
}

fn ideal() -> impl Strategy<Value = IdealPresentation> {
    (2usize..4, field_strategy()).prop_flat_map(|(nv, f)| {
        prop::collection::vec(generator(nv, f), 1..4).prop_map(move |gens| {
            let gens: Vec<_> = gens.into_iter().filter(|g| !g.is_zero()).collect();
            IdealPresentation::new(nv, f, LEVEL, gens).unwrap()
        })
    })
}

fn monomial_ideal() -> impl Strategy<Value = (usize, Vec<Vec<u32>>)> {
    (2usize..4).prop_flat_map(|nv| (Just(nv), prop::collection::vec(nonconstant(nv), 1..4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hilbert_matches_dense_oracle(i in ideal()) {
        let h = hilbert_data(&i, LEVEL).unwrap();
        prop_assert_eq!(h.values, common::dense_hilbert(&i, LEVEL));
    }

    #[test]
    fn hilbert_function_shape(i in ideal()) {
        let h = hilbert_data(&i, LEVEL).unwrap();
        let nv = i.nvars() as u64;
        for t in 0..LEVEL as usize {
            let prev = if t == 0 { 0 } else { h.values[t - 1] };
            prop_assert!(h.values[t] >= prev);
            prop_assert_eq!(h.graded[t], (h.values[t] - prev) as i64);
            prop_assert!(h.values[t] - prev <= binomial(nv + t as u64 - 1, t as u64));
        }
    }

    #[test]
    fn monomial_ideals_count_standard_monomials((nv, gens) in monomial_ideal()) {
        let polys: Vec<_> = gens
            .iter()
            .filter(|e| e.iter().sum::<u32>() < LEVEL)
            .map(|e| TruncatedPoly::monomial(nv, FieldSpec::Q, LEVEL, Monomial::new(e.clone()), Scalar::from_integer(1.into())))
            .collect();
        let i = IdealPresentation::new(nv, FieldSpec::Q, LEVEL, polys).unwrap();
        let h = hilbert_data(&i, LEVEL).unwrap();
        for t in 0..LEVEL {
            prop_assert_eq!(h.values[t as usize], common::monomial_colength(&gens, nv, t));
        }
        prop_assert!(standard_basis_check(&i, LEVEL).unwrap().is_standard);
    }

    #[test]
    fn truncation_is_a_prefix(i in ideal(), n1 in 3u32..LEVEL) {
        let full = hilbert_data(&i, LEVEL).unwrap();
        let cut = hilbert_data(&i.truncate(n1).unwrap(), n1).unwrap();
        prop_assert_eq!(&cut.values[..], &full.values[..n1 as usize]);
    }

    #[test]
    fn generators_lie_in_their_span(i in ideal()) {
        let s = ideal_spans(&i, LEVEL).unwrap();
        for g in i.generators() {
            prop_assert!(s.contains(g));
            for k in 0..i.nvars() {
                prop_assert!(s.contains(&g.mul_monomial(&Monomial::var(i.nvars(), k))));
            }
        }
    }
}
