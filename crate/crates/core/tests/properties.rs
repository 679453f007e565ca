//! Randomized identities of the cochain complex, cup products and iterated extensions.

mod common;

use common::{complex_case, complex_identities, massey_case, massey_roundtrip};
use nchull::linalg::FieldSpec;
use proptest::prelude::*;

macro_rules! per_field {
    ($($name:ident => $field:expr),* $(,)?) => {
        $(
            mod $name {
                use super::*;

                proptest! {
                    #![proptest_config(ProptestConfig::with_cases(100))]

                    #[test]
                    fn complex((shape, values, perm) in complex_case()) {
                        complex_identities($field, shape, values, perm);
                    }

                    #[test]
                    fn massey((shape, values, chain) in massey_case()) {
                        massey_roundtrip($field, shape, values, chain);
                    }
                }
            }
        )*
    };
}

per_field! {
    rationals => FieldSpec::Rational,
    gf3 => FieldSpec::Prime { p: 3 },
    gf7 => FieldSpec::Prime { p: 7 },
}
