use proptest::prelude::*;
use unital_lab_core::{Backend, FieldCtx};

const FIELDS: [(u32, u32); 5] = [(3, 1), (5, 1), (7, 1), (3, 2), (13, 1)];

fn ctx(i: usize) -> FieldCtx {
    let (p, n) = FIELDS[i];
    FieldCtx::new(p, n).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(i in 0usize..5, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = ctx(i);
        let m = f.order();
        let (a, b, c) = (f.fq2(a % m).unwrap(), f.fq2(b % m).unwrap(), f.fq2(c % m).unwrap());
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.fq2(0).unwrap());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.fq2(1).unwrap());
        }
    }

    #[test]
    fn conjugation_trace_norm(i in 0usize..5, a in any::<u32>(), b in any::<u32>()) {
        let f = ctx(i);
        let m = f.order();
        let (a, b) = (f.fq2(a % m).unwrap(), f.fq2(b % m).unwrap());
        prop_assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
        prop_assert_eq!(f.conj(f.conj(a)), a);
        prop_assert_eq!(f.norm(f.mul(a, b)), f.fq_mul(f.norm(a), f.norm(b)));
        prop_assert_eq!(f.trace(f.add(a, b)), f.fq_add(f.trace(a), f.trace(b)));
        prop_assert_eq!(f.embed(f.trace(a)), f.add(a, f.conj(a)));
        prop_assert_eq!(f.embed(f.norm(a)), f.mul(a, f.conj(a)));
    }

    #[test]
    fn text_round_trip(i in 0usize..5, a in any::<u32>()) {
        let f = ctx(i);
        let a = f.fq2(a % f.order()).unwrap();
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
    }

    #[test]
    fn backends_agree(i in 0usize..5, a in any::<u32>(), b in any::<u32>()) {
        let (p, n) = FIELDS[i];
        let t = FieldCtx::with_options(p, n, None, Backend::Tables).unwrap();
        let r = FieldCtx::with_options(p, n, None, Backend::Polynomial).unwrap();
        let m = t.order();
        let (a, b) = (t.fq2(a % m).unwrap(), t.fq2(b % m).unwrap());
        prop_assert_eq!(t.mul(a, b), r.mul(a, b));
        prop_assert_eq!(t.add(a, b), r.add(a, b));
        prop_assert_eq!(t.conj(a), r.conj(a));
    }
}
