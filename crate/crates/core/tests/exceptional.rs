use std::collections::HashSet;

use sdecomp::classify::{ExceptionalCatalog, EXCEPTIONAL_SOURCE};
use sdecomp::mutation::mutation_class;
use sdecomp::{canonical_form, s_decompose, DecomposeOptions, ScanLimits};

#[test]
fn catalog_classes_are_finite_distinct_and_not_decomposable() {
    let cat = ExceptionalCatalog::parse(EXCEPTIONAL_SOURCE).unwrap();
    let limits = ScanLimits {
        weight_cutoff: 4,
        max_diagrams: 200_000,
    };
    let mut all_codes = HashSet::new();
    for t in &cat.types {
        let g = t.diagram().unwrap();
        let class = mutation_class(&g, limits)
            .unwrap()
            .unwrap_or_else(|| panic!("{} not finite", t.name));
        assert_eq!(class.len(), t.class_size, "{}", t.name);
        let skew = class
            .iter()
            .all(|d| d.edges().all(|e| e.weight == 1 || e.weight == 4));
        assert_eq!(skew, t.skew_symmetric, "{}", t.name);
        // decomposability is a class invariant, so checking a sample is enough to
        // catch a bad entry; the representative itself must not decompose
        for d in class.iter().take(50) {
            assert!(
                !s_decompose(d, &DecomposeOptions::default())
                    .unwrap()
                    .decomposable,
                "{}",
                t.name
            );
        }
        for d in &class {
            assert!(
                all_codes.insert(canonical_form(d).code),
                "{} overlaps another class",
                t.name
            );
        }
    }
}
