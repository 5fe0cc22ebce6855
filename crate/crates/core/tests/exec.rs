use unital_core::exec::*;

#[test]
fn split_covers_exactly() {
    for len in [0usize, 1, 7, 100] {
        for parts in [1usize, 3, 8, 200] {
            let r = split_ranges(len, parts);
            assert_eq!(r.first().unwrap().start, 0);
            assert_eq!(r.last().unwrap().end, len);
            assert!(r.windows(2).all(|w| w[0].end == w[1].start));
        }
    }
}
