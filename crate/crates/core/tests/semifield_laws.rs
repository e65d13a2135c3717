use cluster_mech::semifield::{Polynomial, Semifield, SemifieldElement, Tropical, TropicalMonomial, Universal};
use proptest::prelude::*;

const N: usize = 2;

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..3, N), 1u64..4), 1..4)
        .prop_map(|terms| Polynomial::from_terms(N, &terms).unwrap())
}

fn element() -> impl Strategy<Value = SemifieldElement> {
    (poly(), poly()).prop_map(|(p, q)| SemifieldElement::from_parts(p, q).unwrap())
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..5.0, N)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

fn trop_mul(a: &TropicalMonomial, b: &TropicalMonomial) -> TropicalMonomial {
    Tropical::new(N).mul(a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn universal_laws(a in element(), b in element(), c in element()) {
        let sf = Universal::new(N);
        let eq = |x: &SemifieldElement, y: &SemifieldElement| sf.equal(x, y).unwrap();
        let add = |x: &SemifieldElement, y: &SemifieldElement| sf.add(x, y).unwrap();
        let mul = |x: &SemifieldElement, y: &SemifieldElement| sf.mul(x, y).unwrap();
        prop_assert!(eq(&add(&a, &b), &add(&b, &a)));
        prop_assert!(eq(&mul(&a, &b), &mul(&b, &a)));
        prop_assert!(eq(&add(&add(&a, &b), &c), &add(&a, &add(&b, &c))));
        prop_assert!(eq(&mul(&mul(&a, &b), &c), &mul(&a, &mul(&b, &c))));
        prop_assert!(eq(&mul(&a, &add(&b, &c)), &add(&mul(&a, &b), &mul(&a, &c))));
        prop_assert!(mul(&a, &sf.inv(&a).unwrap()).is_one());
    }

    #[test]
    fn tropicalization_is_a_homomorphism(a in element(), b in element()) {
        let trop = Tropical::new(N);
        prop_assert_eq!(a.mul(&b).unwrap().tropicalize(), trop_mul(&a.tropicalize(), &b.tropicalize()));
        prop_assert_eq!(a.add(&b).unwrap().tropicalize(), trop.add(&a.tropicalize(), &b.tropicalize()).unwrap());
        prop_assert_eq!(a.inv().tropicalize(), trop.inv(&a.tropicalize()).unwrap());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in element(), b in element(), y in point()) {
        let (va, vb) = (a.evaluate(&y).unwrap(), b.evaluate(&y).unwrap());
        prop_assert!(close(a.add(&b).unwrap().evaluate(&y).unwrap(), va + vb));
        prop_assert!(close(a.mul(&b).unwrap().evaluate(&y).unwrap(), va * vb));
        prop_assert!(close(a.inv().evaluate(&y).unwrap(), 1.0 / va));
    }

    #[test]
    fn tropical_laws(a in prop::collection::vec(-5i64..5, N), b in prop::collection::vec(-5i64..5, N), c in prop::collection::vec(-5i64..5, N)) {
        let t = Tropical::new(N);
        let (a, b, c) = (TropicalMonomial::new(a), TropicalMonomial::new(b), TropicalMonomial::new(c));
        prop_assert_eq!(t.add(&a, &b).unwrap(), t.add(&b, &a).unwrap());
        prop_assert_eq!(t.add(&t.add(&a, &b).unwrap(), &c).unwrap(), t.add(&a, &t.add(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(
            t.mul(&a, &t.add(&b, &c).unwrap()).unwrap(),
            t.add(&t.mul(&a, &b).unwrap(), &t.mul(&a, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(t.mul(&a, &t.inv(&a).unwrap()).unwrap(), t.one());
    }
}

#[derive(Clone, Debug)]
enum Op {
    Add(usize),
    Mul(usize),
    Inv,
    Pow(i64),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![(0..N).prop_map(Op::Add), (0..N).prop_map(Op::Mul), Just(Op::Inv), (-2i64..=2).prop_map(Op::Pow)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn op_chains_agree_with_floats(ops in prop::collection::vec(op(), 0..8), y in point()) {
        let sf = Universal::new(N);
        let mut e = SemifieldElement::one(N);
        let mut v = 1.0f64;
        for o in ops {
            match o {
                Op::Add(i) => {
                    e = sf.add(&e, &sf.generator(i).unwrap()).unwrap();
                    v += y[i];
                }
                Op::Mul(i) => {
                    e = sf.mul(&e, &sf.generator(i).unwrap()).unwrap();
                    v *= y[i];
                }
                Op::Inv => {
                    e = sf.inv(&e).unwrap();
                    v = 1.0 / v;
                }
                Op::Pow(k) => {
                    e = e.pow(k).unwrap();
                    v = v.powi(k as i32);
                }
            }
            prop_assert!(!e.numerator().is_empty() && !e.denominator().is_empty());
            prop_assert!(close(e.evaluate(&y).unwrap(), v));
        }
    }
}

#[test]
fn subtraction_free_cancellation() {
    // (1 + y1³)/(1 + y1) equals 1 − y1 + y1², which is not subtraction-free
    let one_plus = |e: u32| Polynomial::from_terms(N, &[(vec![0, 0], 1), (vec![e, 0], 1)]).unwrap();
    let q = SemifieldElement::from_parts(one_plus(3), one_plus(1)).unwrap();
    let y = [0.7, 1.3];
    assert!(close(q.evaluate(&y).unwrap(), 1.0 - 0.7 + 0.49));
    let p = SemifieldElement::from_parts(one_plus(3), Polynomial::from_terms(N, &[(vec![0, 0], 1)]).unwrap()).unwrap();
    let r = p.mul(&SemifieldElement::from_parts(Polynomial::from_terms(N, &[(vec![0, 0], 1)]).unwrap(), one_plus(1)).unwrap()).unwrap();
    assert!(r.semifield_eq(&q).unwrap());
}
