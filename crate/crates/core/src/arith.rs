//! Small exact number-theory helpers shared by the invariant modules.

use num_integer::Integer;
use num_rational::Ratio;

pub type Rational = Ratio<i64>;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Least non-negative residue of `a` modulo `n` (`n > 0`).
pub fn residue(a: i64, n: i64) -> i64 {
    a.mod_floor(&n)
}

/// Fractional part of `a / n` as an exact rational in `[0, 1)`.
pub fn frac(a: i64, n: i64) -> Rational {
    Rational::new(residue(a, n), n)
}

/// `a * b` with an explicit overflow check.
pub fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .unwrap_or_else(|| panic!("integer overflow computing {a} * {b}"))
}

pub fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b)
        .unwrap_or_else(|| panic!("integer overflow computing {a} + {b}"))
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn largest_prime_factor(n: i64) -> Option<i64> {
    prime_factors(n).last().copied()
}

/// The unit group of `Z/n`, ascending.
pub fn units(n: i64) -> Vec<i64> {
    (1..n).filter(|&m| gcd(m, n) == 1).collect()
}

/// Renders a rational as `a/b`, always with an explicit denominator.
pub fn render(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_are_non_negative() {
        assert_eq!(residue(-3, 7), 4);
        assert_eq!(residue(14, 7), 0);
        assert_eq!(frac(-4, 7), Rational::new(3, 7));
    }

    #[test]
    fn primes_and_factors() {
        let primes: Vec<i64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert_eq!(prime_factors(84), vec![2, 3, 7]);
        assert_eq!(largest_prime_factor(14), Some(7));
        assert_eq!(largest_prime_factor(1), None);
        assert_eq!(units(8), vec![1, 3, 5, 7]);
    }

    #[test]
    fn render_keeps_denominator() {
        assert_eq!(render(&Rational::from_integer(2)), "2/1");
        assert_eq!(render(&Rational::new(-6, 4)), "-3/2");
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn checked_mul_panics() {
        mul(i64::MAX, 2);
    }
}
