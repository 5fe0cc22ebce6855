use std::fs;

use unital_core::{Elem, Field};
use unital_forge::cache::{decode, encode, CacheError, TableCache};
use unital_forge::experiments::{run, Ctx, Params};
use unital_forge::report::Recorder;
use unital_forge::Pool;

fn same(a: &Field, b: &Field) -> bool {
    a.modulus() == b.modulus()
        && a.exp_table() == b.exp_table()
        && (0..a.order()).all(|x| a.log(Elem(x)) == b.log(Elem(x)))
        && a.elements().all(|x| a.elements().all(|y| a.add(x, y) == b.add(x, y)))
}

#[test]
fn round_trip() {
    for (p, n) in [(3, 1), (3, 2), (3, 4), (5, 2), (7, 2), (11, 2)] {
        let f = Field::new(p, n).unwrap();
        let bytes = encode(&f);
        assert_eq!(&bytes[..4], b"GFTB");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), p);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), n);
        assert!(same(&f, &decode(&bytes).unwrap()), "GF({p}^{n})");
    }
}

#[test]
fn header_layout_gf9() {
    let bytes = encode(&Field::new(3, 2).unwrap());
    let words: Vec<u32> = bytes[4..].chunks(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
    // p, n, three modulus coefficients of x² + 1, then 8 exponents and 9 logs
    assert_eq!(&words[..6], &[3, 2, 3, 1, 0, 1]);
    assert_eq!(words[6], 8);
    assert_eq!(words.len(), 6 + 1 + 8 + 1 + 9);
    assert_eq!(words[16], u32::MAX);
}

#[test]
fn damaged_files_are_rejected() {
    let good = encode(&Field::new(5, 2).unwrap());
    let mut magic = good.clone();
    magic[0] = b'X';
    assert!(matches!(decode(&magic), Err(CacheError::Format(_))));
    assert!(matches!(decode(&good[..good.len() - 2]), Err(CacheError::Format(_))));
    let mut extra = good.clone();
    extra.push(0);
    assert!(decode(&extra).is_err());
    // swap two exponents: the table no longer comes from a generator
    let mut swapped = good.clone();
    let at = 4 + 4 * 8;
    let (x, y) = (swapped[at..at + 4].to_vec(), swapped[at + 4..at + 8].to_vec());
    swapped[at..at + 4].copy_from_slice(&y);
    swapped[at + 4..at + 8].copy_from_slice(&x);
    assert!(decode(&swapped).is_err());
    // a log table that disagrees
    let mut log = good.clone();
    let n = log.len();
    log[n - 4] ^= 1;
    assert!(decode(&log).is_err());
}

#[test]
fn directory_cache_hits_and_repairs() {
    let dir = tempfile::tempdir().unwrap();
    let cache = TableCache::new(dir.path()).unwrap();
    let a = cache.field(7, 2).unwrap();
    assert_eq!((cache.hits(), cache.misses()), (0, 1));
    let b = cache.field(7, 2).unwrap();
    assert_eq!((cache.hits(), cache.misses()), (1, 1));
    assert!(same(&a, &b));
    fs::write(cache.path(7, 2), b"GFTB garbage").unwrap();
    let c = cache.field(7, 2).unwrap();
    assert_eq!(cache.misses(), 2);
    assert!(same(&a, &c));
    assert!(decode(&fs::read(cache.path(7, 2)).unwrap()).is_ok());
}

#[test]
fn cache_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let canon = |cache: Option<TableCache>| {
        let ctx = Ctx::new(Pool::new(2).unwrap(), cache);
        let mut rec = Recorder::new();
        for name in ["field-laws", "nearfield-axioms", "wantz-is-unital", "poly-suite"] {
            run(&ctx, name, &Params::new(5), &mut rec).unwrap();
        }
        rec.finish().into_iter().map(|c| (c.name, c.status, c.witness)).collect::<Vec<_>>()
    };
    let plain = canon(None);
    let cold = canon(Some(TableCache::new(dir.path()).unwrap()));
    let warm = canon(Some(TableCache::new(dir.path()).unwrap()));
    assert_eq!(plain, cold);
    assert_eq!(plain, warm);
}
