//! Property tests over randomly generated finite posets and monoids: the
//! validator accepts exactly the lawful tables, serialization round-trips,
//! and the opposite construction is involutive.

use proptest::prelude::*;

use finspan::fincat::{FinCat, RawCategory};

/// A random finite poset on up to 5 elements, by generating a random
/// relation and taking its reflexive-transitive closure (then antisymmetry
/// holds automatically since we close over indices upward only).
fn arb_poset() -> impl Strategy<Value = RawCategory> {
    (2usize..=5, proptest::collection::vec(any::<bool>(), 25)).prop_map(|(n, bits)| {
        // upper-triangular relation: i < j may hold
        let mut le = vec![vec![false; n]; n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            le[i][i] = true;
        }
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if bits[k % bits.len()] {
                    le[i][j] = true;
                }
                k += 1;
            }
        }
        // transitive closure
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i][m] && le[m][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        let oname = |i: usize| format!("p{i}");
        let mname = |i: usize, j: usize| format!("m{i}{j}");
        let mut raw = RawCategory {
            name: "poset".into(),
            objects: (0..n).map(oname).collect(),
            ..Default::default()
        };
        for i in 0..n {
            for j in 0..n {
                if le[i][j] {
                    raw.morphisms.push((mname(i, j), oname(i), oname(j)));
                    if i == j {
                        raw.identities.push((oname(i), mname(i, j)));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !le[i][j] {
                    continue;
                }
                for l in 0..n {
                    if le[j][l] {
                        raw.compositions.push((mname(j, l), mname(i, j), mname(i, l)));
                    }
                }
            }
        }
        raw
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posets_validate_roundtrip_and_dualize(raw in arb_poset()) {
        let cat = FinCat::validate(&raw).expect("closed relation is a category");
        // serialize -> validate -> same category
        let back = FinCat::validate(&cat.to_raw()).unwrap();
        prop_assert!(cat.same_as(&back));
        // opposite is involutive and preserves validation
        let op = cat.opposite();
        prop_assert!(op.opposite().same_as(&cat));
        // hom cardinalities transpose
        for x in cat.objects() {
            for y in cat.objects() {
                prop_assert_eq!(cat.hom(x, y).len(), op.hom(y, x).len());
            }
        }
        // text format round-trip
        let spec = finspan::textfmt::CategorySpec {
            raw: cat.to_raw(),
            families: vec![],
            indexings: vec![],
        };
        let text = finspan::textfmt::serialize_category_spec(&spec);
        let parsed = finspan::textfmt::parse_category_file(&text).unwrap();
        prop_assert_eq!(parsed, spec);
    }

    #[test]
    fn corrupting_a_composition_entry_is_caught(raw in arb_poset(), pick in any::<u32>()) {
        // swap one composition target to a different morphism with the same
        // endpoints if possible; the validator must object
        let mut raw = raw;
        if raw.compositions.is_empty() {
            return Ok(());
        }
        let k = (pick as usize) % raw.compositions.len();
        let (_, _, h) = raw.compositions[k].clone();
        // replace h with some other morphism name; in a poset any wrong
        // endpoint breaks either BadComposite or associativity/identity
        let other = raw.morphisms.iter().map(|(n, _, _)| n.clone()).find(|n| *n != h);
        if let Some(o) = other {
            raw.compositions[k].2 = o;
            prop_assert!(FinCat::validate(&raw).is_err());
        }
    }
}

#[test]
fn pullbacks_in_random_posets_are_meets() {
    // deterministic spot check built on the same generator idea: in the
    // divisor lattice, the canonical pullback apex of a cospan is the gcd
    let d = finspan::catalog::gen_divisor_lattice(12);
    let gcd = |mut a: u32, mut b: u32| {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    };
    for f in d.morphisms() {
        for g in d.morphisms() {
            if d.tgt(f) != d.tgt(g) {
                continue;
            }
            let cone = finspan::limits::pullback(&d, f, g).unwrap();
            let a = finspan::catalog::divlat_value(&d, d.src(f));
            let b = finspan::catalog::divlat_value(&d, d.src(g));
            assert_eq!(finspan::catalog::divlat_value(&d, cone.apex), gcd(a, b));
        }
    }
}
