use std::sync::LazyLock;

use ordtree_core::space::load_space;
use ordtree_core::verifier::{finite_model_oracle, Sampler};
use ordtree_core::{AtomicMeasure, ScaffoldTree};
use proptest::prelude::*;

static SPACES: LazyLock<Vec<ScaffoldTree>> = LazyLock::new(|| {
    ["seg:w1*2 + 5", "seg:w2 + w", "builtin:r1", "builtin:r", "builtin:non-r"]
        .iter()
        .map(|s| load_space(s).unwrap())
        .collect()
});

fn space() -> impl Strategy<Value = &'static ScaffoldTree> {
    (0..SPACES.len()).prop_map(|i| &SPACES[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn retraction_is_an_idempotent_lowering_into_the_set(t in space(), seed: u64) {
        let mut s = Sampler::new(t, seed);
        let (a, x) = (s.set(4), s.point());
        let r = t.retract(&a, &x).unwrap();
        prop_assert!(a.contains(&r));
        prop_assert!(t.leq(&r, &x));
        prop_assert_eq!(t.retract(&a, &r).unwrap(), r);
    }

    #[test]
    fn nested_retractions_compose(t in space(), seed: u64) {
        let mut s = Sampler::new(t, seed);
        let a = s.set(3);
        let b = t.union_admissible(&a, &s.set(3));
        let x = s.point();
        prop_assert!(a.is_subset(&b));
        let ra = t.retract(&a, &x).unwrap();
        prop_assert_eq!(t.retract(&a, &t.retract(&b, &x).unwrap()).unwrap(), ra.clone());
        prop_assert_eq!(t.retract(&b, &ra).unwrap(), ra);
    }

    #[test]
    fn set_algebra(t in space(), seed: u64) {
        let mut s = Sampler::new(t, seed);
        let (a, b) = (s.set(3), s.set(3));
        let u = t.union_admissible(&a, &b);
        let i = t.intersect_admissible(&a, &b);
        prop_assert_eq!(&u, &t.union_admissible(&b, &a));
        prop_assert!(i.is_subset(&a) && i.is_subset(&b));
        prop_assert!(a.is_subset(&u) && b.is_subset(&u));
    }

    #[test]
    fn wedge_is_the_greatest_common_predecessor(t in space(), seed: u64) {
        let mut s = Sampler::new(t, seed);
        let (p, q) = (s.point(), s.point());
        let w = t.wedge(&p, &q).unwrap();
        prop_assert_eq!(&w, &t.wedge(&q, &p).unwrap());
        prop_assert!(t.leq(&w, &p) && t.leq(&w, &q));
        prop_assert_eq!(t.wedge(&p, &p).unwrap(), p.clone());
        let m = finite_model_oracle(t, &ordtree_core::AdmissibleSet::root_only(), &[p.clone(), q.clone()]);
        prop_assert_eq!(m.wedge(&p, &q), w);
    }

    #[test]
    fn projection_is_a_linear_idempotent_contraction(t in space(), seed: u64) {
        let mut s = Sampler::new(t, seed);
        let (a, f, g) = (s.set(4), s.function(4), s.function(4));
        let pf = t.project(&a, &f).unwrap();
        prop_assert_eq!(&t.project(&a, &pf).unwrap(), &pf);
        prop_assert_eq!(t.project(&a, &f.add(&g)).unwrap(), pf.add(&t.project(&a, &g).unwrap()));
        prop_assert!(t.sup_norm(&pf) <= t.sup_norm(&f));
    }

    #[test]
    fn adjoint_is_dual_to_projection(t in space(), seed: u64) {
        let mut s = Sampler::new(t, seed);
        let (a, f, mu) = (s.set(4), s.function(4), s.measure(4, false));
        let amu = t.adjoint(&a, &mu).unwrap();
        prop_assert_eq!(t.pair(&t.project(&a, &f).unwrap(), &mu).unwrap(), t.pair(&f, &amu).unwrap());
        prop_assert!(amu.total_variation() <= mu.total_variation());
        prop_assert_eq!(&t.adjoint(&a, &amu).unwrap(), &amu);
    }

    #[test]
    fn point_masses_evaluate(t in space(), seed: u64) {
        let mut s = Sampler::new(t, seed);
        let (f, x) = (s.function(5), s.named_point(false));
        let delta = AtomicMeasure::delta(t, &x).unwrap();
        prop_assert_eq!(t.pair(&f, &delta).unwrap(), t.evaluate(&f, &x).unwrap());
    }

    #[test]
    fn projections_agree_with_the_oracle(t in space(), seed: u64) {
        let mut s = Sampler::new(t, seed);
        let (a, f, x) = (s.set(4), s.function(4), s.point());
        let pf = t.project(&a, &f).unwrap();
        let m = finite_model_oracle(t, &a, std::slice::from_ref(&x));
        // P_A f = f ∘ r_A
        prop_assert_eq!(t.evaluate(&pf, &x).unwrap(), m.evaluate(t, &f, &m.retract(&x)));
    }
}
