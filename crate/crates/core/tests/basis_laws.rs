use std::sync::LazyLock;

use num_traits::{One, Zero};
use ordtree_core::space::load_space;
use ordtree_core::verifier::{offset_pool, Sampler};
use ordtree_core::{Ordinal, Scalar, ScaffoldTree, StepFunction, XiRule};
use proptest::prelude::*;

static SPACES: LazyLock<Vec<ScaffoldTree>> = LazyLock::new(|| {
    ["seg:w1*2 + 5", "seg:w2", "builtin:r1", "builtin:r"]
        .iter()
        .map(|s| load_space(s).unwrap())
        .collect()
});

static SEG_W2: LazyLock<ScaffoldTree> = LazyLock::new(|| load_space("seg:w2").unwrap());

fn space() -> impl Strategy<Value = &'static ScaffoldTree> {
    (0..SPACES.len()).prop_map(|i| &SPACES[i])
}

fn kronecker(same: bool) -> Scalar {
    if same {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

fn isolated_offsets() -> Vec<Ordinal> {
    let mut v: Vec<Ordinal> = offset_pool(&Ordinal::omega2())
        .into_iter()
        .filter(|o| o.is_successor())
        .collect();
    v.push(Ordinal::zero());
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tail_pairs_are_biorthogonal(t in space(), seed: u64) {
        let mut s = Sampler::new(t, seed);
        let pts = s.distinct_isolated(6);
        let pairs: Vec<_> = pts.iter().map(|x| t.tail_basis(x).unwrap()).collect();
        for (i, p) in pairs.iter().enumerate() {
            for (j, q) in pairs.iter().enumerate() {
                prop_assert_eq!(t.pair(&p.vector, &q.functional).unwrap(), kronecker(i == j));
            }
        }
    }

    #[test]
    fn reconstruction_uses_the_functional_coefficients(t in space(), seed: u64) {
        let mut s = Sampler::new(t, seed);
        let f = s.function(6);
        let r = t.strong_reconstruct(&f).unwrap();
        prop_assert_eq!(&r.function, &f);
        let mut sum = StepFunction::zero();
        for (x, c) in &r.terms {
            let b = t.tail_basis(x).unwrap();
            prop_assert!(!c.is_zero());
            prop_assert_eq!(&t.pair(&f, &b.functional).unwrap(), c);
            sum = sum.add(&b.vector.scale(c));
        }
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn swap_rule_pairs_are_biorthogonal(i in 0usize..64, j in 0usize..64) {
        let t = &*SEG_W2;
        let offs = isolated_offsets();
        let (a, b) = (&offs[i % offs.len()], &offs[j % offs.len()]);
        let xi = XiRule::mbaze_divna_swap();
        let p = t.pri_basis(&xi, a).unwrap();
        let q = t.pri_basis(&xi, b).unwrap();
        prop_assert_eq!(t.pair(&p.vector, &q.functional).unwrap(), kronecker(a == b));
    }
}

#[test]
fn identity_rule_matches_tail_basis_on_segments() {
    let t = &*SEG_W2;
    for a in isolated_offsets() {
        let p = t.pri_basis(&XiRule::identity(), &a).unwrap();
        let q = t.tail_basis(&t.segment_point(&a).unwrap()).unwrap();
        assert_eq!(p.vector, q.vector, "{a}");
        assert_eq!(p.functional, q.functional, "{a}");
    }
}
