//! Round-trip properties of the canonical dataset format.

use ltk::ingest::{read_split, write_split_to, CanonicalRecord, DatasetSplit};
use ltk::synth::random_poster;

use proptest::prelude::*;

fn synthetic_split(posters: usize, seed: u64) -> DatasetSplit {
    let records = (0..posters)
        .map(|k| {
            let n = 1 + (seed as usize + k) % 20;
            random_poster(&format!("poster_{k:04}"), n, seed + k as u64)
        })
        .collect();
    DatasetSplit {
        name: "test".into(),
        posters: records,
        warnings: Vec::new(),
    }
}

#[test]
fn hundred_poster_split_roundtrips_in_memory() {
    let split = synthetic_split(100, 41);
    let mut buf = Vec::new();
    write_split_to(&split, &mut buf).unwrap();
    let back = read_split(&buf[..], "test", false).unwrap();
    assert_eq!(back.posters.len(), split.posters.len());
    for ((pa, ta), (pb, tb)) in split.posters.iter().zip(&back.posters) {
        assert_eq!(pa, pb);
        assert_eq!(ta, tb);
    }
}

#[test]
fn write_load_write_is_byte_identical() {
    let split = synthetic_split(25, 99);
    let mut first = Vec::new();
    write_split_to(&split, &mut first).unwrap();
    let loaded = read_split(&first[..], "test", false).unwrap();
    let mut second = Vec::new();
    write_split_to(&loaded, &mut second).unwrap();
    assert_eq!(first, second);
}

#[test]
fn empty_split_writes_zero_records() {
    let split = DatasetSplit {
        name: "test".into(),
        posters: Vec::new(),
        warnings: Vec::new(),
    };
    let mut buf = Vec::new();
    write_split_to(&split, &mut buf).unwrap();
    assert!(buf.is_empty());
}

proptest! {
    /// Coordinates quantized to the file precision survive a parse/serialize
    /// cycle exactly, including awkward poster ids.
    #[test]
    fn record_lines_roundtrip(
        seed in 0u64..5000,
        n in 1usize..15,
        id in "[a-zA-Z0-9 ,\"\\\\_-]{1,20}",
    ) {
        let (poster, tree) = random_poster(&id, n, seed);
        let record = CanonicalRecord::from_parts(&poster, &tree);
        let line = record.to_line();
        let back = CanonicalRecord::parse_line(&line).unwrap();
        prop_assert_eq!(&back, &record);
        prop_assert_eq!(back.to_line(), line);
    }
}
