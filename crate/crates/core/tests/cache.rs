use std::fs;

use egz::zerosum::{beta_search, s_from_beta, Budget, Cache, WeightSet};

#[test]
fn exact_records_round_trip_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path().join("values.tsv"));
    let beta = beta_search(&WeightSet::single(2), 4, &Budget::default()).unwrap();
    let s = s_from_beta(2, 3, &Budget::default()).unwrap();
    assert!(cache.append(&beta).unwrap());
    assert!(cache.append(&s).unwrap());

    let trusted = cache.trusted().unwrap();
    assert_eq!(trusted.len(), 2);
    assert_eq!(trusted[0].value(), beta.value());
    assert_eq!(cache.lookup(&s.quantity).unwrap().and_then(|r| r.value()), Some(7));

    let text = fs::read_to_string(cache.path()).unwrap();
    let first = text.lines().next().unwrap();
    let pos = first.split('\t').take(5).map(|f| f.len() + 1).sum::<usize>();
    let mut bytes = text.into_bytes();
    bytes[pos] = if bytes[pos] == b'0' { b'1' } else { b'0' };
    fs::write(cache.path(), bytes).unwrap();

    let lines = cache.read().unwrap();
    assert!(lines[0].record.is_err());
    assert!(lines[1].record.is_ok());
    assert_eq!(cache.trusted().unwrap().len(), 1);
}
