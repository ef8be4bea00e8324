//! Property tests for the label machinery, the file formats, and the
//! erasure coder.

use proptest::prelude::*;

use pdacache::coded::{mds_decode, mds_encode, MdsSpec};
use pdacache::format::{read_pda, read_pda_json, write_pda, write_pda_json};
use pdacache::pda::{canonicalize, PdaArray, PdaEntry, RawLabel};

fn raw_entry() -> impl Strategy<Value = PdaEntry> {
    prop_oneof![
        2 => Just(PdaEntry::Star),
        3 => (proptest::collection::vec(0u32..4, 2), 0u32..3)
            .prop_map(|(vector, order)| PdaEntry::Raw(RawLabel::new(vector, order))),
    ]
}

fn raw_array() -> impl Strategy<Value = PdaArray> {
    (1usize..6, 1usize..6).prop_flat_map(|(f, k)| {
        proptest::collection::vec(raw_entry(), f * k)
            .prop_map(move |entries| PdaArray::new(entries, f, k, 0, 0).unwrap())
    })
}

fn canonical_entry() -> impl Strategy<Value = PdaEntry> {
    prop_oneof![
        2 => Just(PdaEntry::Star),
        3 => (0u32..9).prop_map(PdaEntry::Symbol),
    ]
}

fn canonical_array() -> impl Strategy<Value = PdaArray> {
    (1usize..7, 1usize..7, 0usize..9).prop_flat_map(|(f, k, s)| {
        proptest::collection::vec(canonical_entry(), f * k).prop_map(move |entries| {
            let z = (0..f).filter(|&r| entries[r * k].is_star()).count();
            PdaArray::new(entries, f, k, z, s).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn canonicalize_is_deterministic_and_mask_preserving(pda in raw_array()) {
        let a = canonicalize(&pda).unwrap();
        let b = canonicalize(&pda).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.is_canonical());
        for (before, after) in pda.entries().iter().zip(a.entries()) {
            prop_assert_eq!(before.is_star(), after.is_star());
        }
        // every symbol below S appears, and none reaches S
        let s = a.s();
        let mut seen = vec![false; s];
        for entry in a.entries() {
            if let PdaEntry::Symbol(sym) = entry {
                prop_assert!((*sym as usize) < s);
                seen[*sym as usize] = true;
            }
        }
        prop_assert!(seen.into_iter().all(|present| present));
    }

    #[test]
    fn text_round_trip_is_identity(pda in canonical_array()) {
        let text = write_pda(&pda).unwrap();
        let back = read_pda(&text).unwrap();
        prop_assert!(pda.same_grid(&back));
    }

    #[test]
    fn json_round_trip_is_identity(pda in canonical_array()) {
        let json = write_pda_json(&pda).unwrap();
        let back = read_pda_json(&json).unwrap();
        prop_assert!(pda.same_grid(&back));
    }

    #[test]
    fn any_two_decode_subsets_agree(
        k in 1usize..6,
        extra in 1usize..4,
        payload_len in 1usize..9,
        seed in any::<u64>(),
    ) {
        let n = k + extra;
        let spec = MdsSpec::new(n, k).unwrap();
        let mut bytes = seed;
        let mut next = move || {
            bytes = bytes.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (bytes >> 33) as u8
        };
        let data: Vec<Vec<u8>> = (0..k)
            .map(|_| (0..payload_len).map(|_| next()).collect())
            .collect();
        let coded = mds_encode(&spec, &data).unwrap();
        // systematic prefix unchanged
        prop_assert_eq!(&coded[..k], &data[..]);
        // first and last k-subsets agree with the data
        let first: Vec<(usize, Vec<u8>)> =
            (0..k).map(|i| (i, coded[i].clone())).collect();
        let last: Vec<(usize, Vec<u8>)> =
            (n - k..n).map(|i| (i, coded[i].clone())).collect();
        prop_assert_eq!(mds_decode(&spec, &first).unwrap(), data.clone());
        prop_assert_eq!(mds_decode(&spec, &last).unwrap(), data);
    }
}
