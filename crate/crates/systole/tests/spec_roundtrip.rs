use proptest::prelude::*;
use systole::spec::{Atom, FormSpec, Term};

fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        Just(Atom::H),
        Just(Atom::E8),
        (0usize..4, 0usize..4).prop_filter("nonempty", |(p, q)| p + q > 0).prop_map(|(p, q)| Atom::I(p, q)),
        prop::collection::vec(-9i64..=9, 1..4).prop_map(Atom::Diagonal),
        (1usize..4)
            .prop_flat_map(|n| prop::collection::vec(-5i64..=5, n * n).prop_map(move |e| (n, e)))
            .prop_map(|(n, e)| Atom::Matrix((0..n).map(|i| (0..n).map(|j| e[i.min(j) * n + i.max(j)]).collect()).collect())),
    ]
}

fn spec() -> impl Strategy<Value = FormSpec> {
    prop::collection::vec((any::<bool>(), 1usize..4, atom()), 1..5)
        .prop_map(|ts| FormSpec { terms: ts.into_iter().map(|(negated, count, atom)| Term { negated, count, atom }).collect() })
}

/// Re-spells a canonical spec with extra whitespace after punctuation.
fn loosen(s: &str, pad: &[u8]) -> String {
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        out.push(c);
        if !c.is_ascii_alphanumeric() {
            out.extend(std::iter::repeat_n(' ', usize::from(pad[i % pad.len()] % 3)));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_then_parse_round_trips(s in spec(), pad in prop::collection::vec(any::<u8>(), 1..8)) {
        let printed = s.to_string();
        let back = FormSpec::parse(&printed).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_string(), printed.clone());
        prop_assert_eq!(back.build().ok(), s.build().ok());
        let loose = loosen(&printed, &pad);
        prop_assert_eq!(FormSpec::parse(&loose).unwrap(), s);
    }
}
