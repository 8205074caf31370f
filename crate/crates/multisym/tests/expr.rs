use multisym::expr::{parse_expr, parse_form, print_expr};
use multisym::generate::Generator;
use multisym_core::{GradedObject, Multiphase};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>(), k in 0usize..4, vector in any::<bool>(), big in any::<bool>()) {
        let m = if big { Multiphase::new(3, 2).unwrap() } else { Multiphase::new(2, 1).unwrap() };
        let s = m.extended();
        let mut g = Generator::new(seed, "expr", 2);
        let obj = if vector && k > 0 {
            GradedObject::MultiVector(g.multivector(s, k))
        } else {
            GradedObject::Form(g.form(s, k))
        };
        let text = print_expr(&obj);
        prop_assert_eq!(parse_expr(&text, s).unwrap(), obj);
    }

    #[test]
    fn printing_is_canonical(seed in any::<u64>(), k in 0usize..3) {
        let s = Multiphase::new(2, 1).unwrap().extended();
        let mut g = Generator::new(seed, "canonical", 2);
        let a = g.form(s, k);
        let b = g.form(s, k);
        // sums entered in either order print the same
        let ab = print_expr(&GradedObject::Form(&a + &b));
        let ba = print_expr(&GradedObject::Form(&b + &a));
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(parse_form(&ab, s).unwrap(), &a + &b);
    }
}
