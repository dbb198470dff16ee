//! Round-trip and insensitivity properties of the text notation.

use proptest::prelude::*;

use arrangekit::enumeration::{enumerate_arrangements, BindingPredicate, SystemSpec};
use arrangekit::model::{Composition, Species, SpeciesName, SpeciesTable};
use arrangekit::notation::{parse, parse_lenient, print};
use arrangekit::Arrangement;

const BASES: [&str; 6] = ["A", "B", "C", "D", "Rb", "e-"];

fn build_system(counts: &[u64]) -> Option<SystemSpec> {
    let total: u64 = counts.iter().sum();
    if total == 0 || total > 8 {
        return None;
    }
    let table = SpeciesTable::new(
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| Species::identical(BASES[i]).unwrap()),
    )
    .unwrap();
    let composition = Composition::new(
        counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (SpeciesName::new(BASES[i]).unwrap(), c)),
    )
    .unwrap();
    Some(SystemSpec::new(table, composition, BindingPredicate::all()).unwrap())
}

/// Renders `arr` with shuffled group order, shuffled in-group item order,
/// partially expanded contractions, and random spacing.
fn scrambled_render(arr: &Arrangement, seed: &mut u64) -> String {
    let mut next = || {
        // xorshift64*; plenty for shuffling test renderings.
        *seed ^= *seed << 13;
        *seed ^= *seed >> 7;
        *seed ^= *seed << 17;
        *seed
    };
    let mut groups: Vec<(Vec<(String, u64)>, u64)> = arr
        .groups()
        .iter()
        .map(|g| {
            (
                g.cluster
                    .members()
                    .counts()
                    .map(|(n, c)| (n.as_str().to_owned(), c))
                    .collect(),
                g.multiplicity,
            )
        })
        .collect();
    // Fisher-Yates on groups.
    for i in (1..groups.len()).rev() {
        groups.swap(i, (next() as usize) % (i + 1));
    }
    let mut out = String::new();
    for (mut items, multiplicity) in groups {
        for i in (1..items.len()).rev() {
            items.swap(i, (next() as usize) % (i + 1));
        }
        let space = |out: &mut String, next: &mut dyn FnMut() -> u64| {
            if next() % 3 == 0 {
                out.push(' ');
            }
        };
        out.push('(');
        space(&mut out, &mut next);
        for (index, (name, count)) in items.iter().enumerate() {
            if index > 0 {
                out.push(',');
                space(&mut out, &mut next);
            }
            // Sometimes expand `X_2` as `X,X`.
            if *count >= 2 && next() % 2 == 0 {
                for rep in 0..*count {
                    if rep > 0 {
                        out.push(',');
                        space(&mut out, &mut next);
                    }
                    out.push_str(name);
                }
            } else {
                out.push_str(name);
                if *count >= 2 {
                    out.push('_');
                    out.push_str(&count.to_string());
                }
            }
            space(&mut out, &mut next);
        }
        out.push(')');
        if multiplicity >= 2 {
            out.push('_');
            out.push_str(&multiplicity.to_string());
        }
        space(&mut out, &mut next);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parse_print_is_identity_on_enumerated_arrangements(
        counts in prop::collection::vec(0u64..=3, 1..=6),
    ) {
        let Some(system) = build_system(&counts) else { return Ok(()) };
        let set = enumerate_arrangements(&system).unwrap();
        for arrangement in set.iter() {
            let text = print(arrangement);
            let reparsed = parse(&text, system.species()).unwrap();
            prop_assert_eq!(&reparsed, arrangement, "string {}", text);
        }
    }

    #[test]
    fn print_is_injective_within_a_system(
        counts in prop::collection::vec(0u64..=3, 1..=6),
    ) {
        let Some(system) = build_system(&counts) else { return Ok(()) };
        let set = enumerate_arrangements(&system).unwrap();
        let mut strings: Vec<String> = set.iter().map(print).collect();
        strings.sort();
        let before = strings.len();
        strings.dedup();
        prop_assert_eq!(before, strings.len());
    }

    #[test]
    fn parse_ignores_whitespace_order_and_contraction_style(
        counts in prop::collection::vec(0u64..=3, 1..=6),
        seed in 1u64..u64::MAX,
    ) {
        let Some(system) = build_system(&counts) else { return Ok(()) };
        let set = enumerate_arrangements(&system).unwrap();
        let mut seed = seed;
        for arrangement in set.iter() {
            let text = scrambled_render(arrangement, &mut seed);
            let reparsed = parse_lenient(&text).unwrap();
            prop_assert_eq!(&reparsed, arrangement, "scrambled {}", text);
        }
    }
}

#[test]
fn paper_string_corpus_round_trips() {
    // Canonical paper strings reprint verbatim.
    for text in ["(A_3)", "(A)_3", "(A^+)(e^-)", "(B,C)(A)", "(Rb_2)(Rb)_3"] {
        let arrangement = parse_lenient(text).unwrap();
        assert_eq!(print(&arrangement), text, "canonical form should reprint");
    }
    // The free-atom-first paper spelling parses to the same arrangement as
    // its canonical (largest-group-first) form.
    let paper = parse_lenient("(A)(B,C)").unwrap();
    let canonical = parse_lenient("(B,C)(A)").unwrap();
    assert_eq!(paper, canonical);
    assert_eq!(print(&paper), "(B,C)(A)");
}
