use proptest::prelude::*;

use higherlim::complex::{
    is_truncatable, mapping_cocylinder, truncated_mapping_cocylinder, ChainMap, Cocylinder, CochainComplex,
};
use higherlim::diagram::{random_instance, RandomParams, Shape};
use higherlim::exactla::{Field, Matrix, PrimeField, Rationals};
use higherlim::poset::{Poset, TreeStrategy};

fn small_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (0usize..5, 0usize..5).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c)))
}

fn build<F: Field>(field: &F, r: usize, c: usize, data: &[i64]) -> Matrix<F> {
    Matrix::from_vec(field, r, c, data.iter().map(|&x| field.from_i64(x)).collect()).unwrap()
}

fn random_poset(seed: u64, shape: Shape) -> Poset {
    let params = RandomParams { max_elements: 12, atoms: 0, max_layers: 5, shape, ..RandomParams::default() };
    random_instance(&Rationals, seed, &params).poset().clone()
}

fn check_factorization<F: Field>(f: &ChainMap<F>, c: &Cocylinder<F>) {
    assert_eq!(&c.projection.after(&c.inclusion).unwrap(), f);
    assert!(c.inclusion.is_quasi_iso());
    assert!(c.projection.is_degreewise_epi());
    assert_eq!(c.complex.cohomology_dims(), f.source().cohomology_dims());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn kernel_is_annihilated_and_rank_nullity((r, c, data) in small_matrix()) {
        let m = build(&Rationals, r, c, &data);
        let (rank, ker) = m.rank_and_kernel();
        prop_assert!(m.compose(&ker).unwrap().is_zero());
        prop_assert_eq!(rank + ker.cols(), c);
        prop_assert_eq!(ker.rank(), ker.cols());
    }

    #[test]
    fn reduction_mod_p_never_raises_rank((r, c, data) in small_matrix(), p in prop::sample::select(vec![2u32, 3, 5, 7])) {
        let q = build(&Rationals, r, c, &data).rank();
        let fp = build(&PrimeField::new(p).unwrap(), r, c, &data).rank();
        prop_assert!(fp <= q);
    }

    /// `f` from `F^a` in degree 0 into `D^0 -> D^1`; `f^0` lands in the cycles.
    #[test]
    fn cocylinders_factor_their_map(
        (d0, d1, dd) in (1usize..4, 0usize..4).prop_flat_map(|(a, b)| (Just(a), Just(b), prop::collection::vec(-2i64..=2, a * b))),
        a in 0usize..3,
        coeffs in prop::collection::vec(-2i64..=2, 9),
    ) {
        let field = Rationals;
        let d = build(&field, d1, d0, &dd);
        let target = CochainComplex::new(&field, vec![d0, d1], vec![d]).unwrap();
        let cycles = target.differential(0).rank_and_kernel().1;
        let mix = build(&field, cycles.cols(), a, &coeffs[..cycles.cols() * a]);
        let source = CochainComplex::concentrated(&field, a);
        let f = ChainMap::new(source, target.clone(), vec![cycles.compose(&mix).unwrap()]).unwrap();

        check_factorization(&f, &mapping_cocylinder(&f));
        if is_truncatable(&f) {
            let t = truncated_mapping_cocylinder(&f).unwrap();
            check_factorization(&f, &t);
            prop_assert!(t.complex.height() <= target.height());
        } else {
            prop_assert!(truncated_mapping_cocylinder(&f).is_err());
        }
    }

    #[test]
    fn labels_are_monotone_and_below_degree(seed in any::<u64>()) {
        let p = random_poset(seed, Shape::Layered);
        let b = p.labelling();
        for x in 0..p.len() {
            prop_assert!(b.label(x) <= p.degree(x));
            for y in 0..p.len() {
                if p.leq(x, y) {
                    prop_assert!(b.label(x) <= b.label(y));
                }
            }
        }
    }

    #[test]
    fn tree_bound_dominates_labels(seed in any::<u64>(), tree_seed in any::<u64>()) {
        let p = random_poset(seed, Shape::Layered);
        let det = p.maximal_tree(TreeStrategy::Deterministic).bound();
        prop_assert!(p.labelling().sup() <= det);
        let mut last = det;
        for trials in [2, 4, 16] {
            let t = p.maximal_tree(TreeStrategy::Sampled { seed: tree_seed, trials });
            prop_assert!(p.labelling().sup() <= t.bound());
            prop_assert!(t.bound() <= last);
            last = t.bound();
        }
    }

    #[test]
    fn trees_have_no_removed_covers(seed in any::<u64>()) {
        let p = random_poset(seed, Shape::Tree);
        let t = p.maximal_tree(TreeStrategy::Deterministic);
        prop_assert!(t.removed().is_empty());
        prop_assert_eq!(t.bound(), 1);
        prop_assert!(p.labelling().sup() <= 1);
    }
}
