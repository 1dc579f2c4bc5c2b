use ga_harmonic::composite::{Affine2, ChartGroup, LinearPlus2, Solvable2};
use ga_harmonic::group::{sample, GroupElement, GroupTag};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TAGS: [GroupTag; 7] = [
    GroupTag::Rotation,
    GroupTag::PositiveDiagonal,
    GroupTag::Unipotent,
    GroupTag::SpecialLinear,
    GroupTag::GeneralLinearPlus,
    GroupTag::GeneralLinearMinus,
    GroupTag::Affine,
];

fn triple(seed: u64, tag: GroupTag, n: usize) -> [GroupElement; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    [0, 1, 2].map(|_| sample::random_element(&mut rng, tag, n))
}

fn scale(g: &GroupElement) -> f64 {
    g.matrix().abs().max().max(g.translation().map_or(0.0, |t| t.abs().max())).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_groups(seed in any::<u64>(), tag_index in 0usize..7, n in 2usize..=3) {
        let tag = TAGS[tag_index];
        let [g, h, k] = triple(seed, tag, n);
        let left = g.compose(&h).unwrap().compose(&k).unwrap();
        let right = g.compose(&h.compose(&k).unwrap()).unwrap();
        let s = scale(&g) * scale(&h) * scale(&k);
        prop_assert!(left.max_deviation(&right) <= 1e-12 * s * s, "{tag}: associativity");

        let e = g.compose(&g.inverse().unwrap()).unwrap();
        let id = GroupElement::identity(e.tag(), n);
        let gi = g.inverse().unwrap();
        prop_assert!(e.max_deviation(&id) <= 1e-12 * scale(&g) * scale(&gi), "{tag}: inverse");
        prop_assert_eq!(g.compose(&h).unwrap().tag(), e.tag());
    }

    #[test]
    fn chart_groups(x in prop::array::uniform6(-1.5f64..1.5), y in prop::array::uniform6(-1.5f64..1.5), z in prop::array::uniform6(-1.5f64..1.5)) {
        let groups: [(&dyn ChartGroup, &[usize]); 3] = [(&Solvable2, &[]), (&LinearPlus2, &[2]), (&Affine2, &[4])];
        for (group, periodic) in groups {
            let d = group.dim();
            let (x, y, z) = (&x[..d], &y[..d], &z[..d]);
            let mul = |a: &[f64], b: &[f64]| {
                let mut out = vec![0.0; d];
                group.multiply(a, b, &mut out);
                out
            };
            let inv = |a: &[f64]| {
                let mut out = vec![0.0; d];
                group.inverse(a, &mut out);
                out
            };
            let close = |a: &[f64], b: &[f64]| {
                a.iter().zip(b).enumerate().all(|(i, (p, q))| {
                    let diff = if periodic.contains(&i) {
                        let t = (p - q).rem_euclid(std::f64::consts::TAU);
                        t.min(std::f64::consts::TAU - t)
                    } else {
                        (p - q).abs()
                    };
                    diff <= 1e-9 * (1.0 + p.abs().max(q.abs()))
                })
            };
            prop_assert!(close(&mul(&mul(x, y), z), &mul(x, &mul(y, z))), "associativity, dim {d}");
            let e = mul(x, &inv(x));
            let e2 = mul(&inv(x), x);
            prop_assert!(close(&e, &vec![0.0; d]) && close(&e2, &vec![0.0; d]), "inverse, dim {d}: {e:?}");
        }
    }
}
