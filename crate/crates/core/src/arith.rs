//! Elementary integer arithmetic on machine words.

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Returns (g, x, y) with a x + b y = g = gcd(a, b) >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (old_r as i64, old_s as i64, old_t as i64)
}

pub fn is_squarefree(n: u64) -> bool {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

/// True for negative fundamental discriminants.
pub fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let m = d.rem_euclid(16);
    if d.rem_euclid(4) == 1 {
        return is_squarefree(d.unsigned_abs());
    }
    if m == 8 || m == 12 {
        return is_squarefree(d.unsigned_abs() / 4);
    }
    false
}

/// Kronecker symbol (d / n) for any integer n.
pub fn kronecker(d: i64, n: i64) -> i32 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    n >>= twos;
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    result * jacobi(d.rem_euclid(n), n)
}

/// Jacobi symbol (a / n) for odd positive n.
fn jacobi(a: i64, n: i64) -> i32 {
    let (mut a, mut n) = (a.rem_euclid(n), n);
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        (a, n) = (n, a);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

pub fn divisor_sum(n: u64, power: u32) -> u128 {
    let mut total = 0u128;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += (d as u128).pow(power);
            let e = n / d;
            if e != d {
                total += (e as u128).pow(power);
            }
        }
        d += 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_discriminants_below_30() {
        let found: Vec<i64> = (-30..0).rev().filter(|&d| is_fundamental(d)).collect();
        assert_eq!(found, vec![-3, -4, -7, -8, -11, -15, -19, -20, -23, -24]);
    }

    #[test]
    fn kronecker_matches_legendre_for_odd_primes() {
        for p in [3i64, 5, 7, 11, 13] {
            for a in -20i64..20 {
                let euler = {
                    let mut acc = 1i64;
                    for _ in 0..(p - 1) / 2 {
                        acc = acc * a.rem_euclid(p) % p;
                    }
                    acc
                };
                let expected = match euler {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(kronecker(a, p), expected, "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_at_two_and_minus_one() {
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-3, -1), -1);
        assert_eq!(kronecker(5, -1), 1);
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(240, 46), (-7, 3), (0, 5), (13, 0), (-12, -18)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(g, gcd(a, b));
            assert_eq!(a * x + b * y, g);
        }
    }

    #[test]
    fn sigma_values() {
        assert_eq!(divisor_sum(6, 1), 12);
        assert_eq!(divisor_sum(4, 3), 73);
    }
}
