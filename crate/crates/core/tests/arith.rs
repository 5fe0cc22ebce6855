use unital_core::arith::*;

#[test]
fn prime_powers() {
    assert_eq!(prime_power(9), Some((3, 2)));
    assert_eq!(prime_power(49), Some((7, 2)));
    assert_eq!(prime_power(12), None);
    assert_eq!(prime_power(1), None);
    assert_eq!(prime_divisors(120), [2, 3, 5]);
    assert!(is_prime(11) && !is_prime(9));
    assert_eq!(gcd(12, 18), 6);
}
