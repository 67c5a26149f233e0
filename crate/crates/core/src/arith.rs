//! Elementary exact number theory, generic over the signed integer scalar.
//!
//! Everything here is desk scale: trial division, sieving, and the Kronecker
//! symbol on word-sized inputs. All arithmetic is overflow-checked; overflow
//! surfaces as [`Error::Overflow`], never as wraparound.

use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::{NumCast, PrimInt, Signed};

/// Signed integer scalar with checked arithmetic. `i64` and `i128` both
/// qualify; the crate-level alias [`crate::Int`] picks `i128`.
pub trait Scalar: PrimInt + Signed + Integer + std::fmt::Debug + std::fmt::Display {}

impl<T> Scalar for T where T: PrimInt + Signed + Integer + std::fmt::Debug + std::fmt::Display {}

#[inline]
fn cast<T: Scalar>(v: u64) -> T {
    NumCast::from(v).expect("small constant fits any scalar")
}

#[inline]
pub(crate) fn checked<T: Scalar>(v: Option<T>, ctx: &'static str) -> Result<T> {
    v.ok_or(Error::Overflow(ctx))
}

/// gcd of three values.
pub fn gcd3<T: Scalar>(a: T, b: T, c: T) -> T {
    a.gcd(&b).gcd(&c)
}

/// Extended gcd: returns `(g, x, y)` with `a·x + b·y = g` and `g = gcd(a, b) ≥ 0`.
pub fn extended_gcd<T: Scalar>(a: T, b: T) -> (T, T, T) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let q = Integer::div_floor(&r0, &r1);
        let r = r0 - q * r1;
        r0 = r1;
        r1 = r;
        let s = s0 - q * s1;
        s0 = s1;
        s1 = s;
        let t = t0 - q * t1;
        t0 = t1;
        t1 = t;
    }
    if r0 < T::zero() {
        (T::zero() - r0, T::zero() - s0, T::zero() - t0)
    } else {
        (r0, s0, t0)
    }
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt<T: Scalar>(n: T) -> Result<T> {
    if n < T::zero() {
        return Err(Error::InvalidArgument(format!("isqrt of negative {n}")));
    }
    if n < cast(2) {
        return Ok(n);
    }
    // Newton iteration; converges in a handful of steps at this scale.
    let mut x: T = n;
    let mut y: T = (x + T::one()) / cast::<T>(2);
    while y < x {
        x = y;
        y = (x + n / x) / cast::<T>(2);
    }
    Ok(x)
}

/// True iff `n` is a perfect square (negative values are never squares).
pub fn is_perfect_square<T: Scalar>(n: T) -> bool {
    if n < T::zero() {
        return false;
    }
    match isqrt(n) {
        Ok(r) => r * r == n,
        Err(_) => false,
    }
}

/// Kronecker symbol (a | n), totally defined on pairs other than (±1-free) (0, 0).
///
/// Agrees with the Legendre symbol for odd prime n not dividing a, and is
/// completely multiplicative in n.
pub fn kronecker<T: Scalar>(a: T, n: T) -> Result<i8> {
    if a.is_zero() && n.is_zero() {
        return Err(Error::InvalidArgument("kronecker(0, 0) is undefined".into()));
    }
    let two = cast::<T>(2);
    let four = cast::<T>(4);
    let eight = cast::<T>(8);

    if n.is_zero() {
        return Ok(if a == T::one() || a == T::zero() - T::one() { 1 } else { 0 });
    }
    let mut a = a;
    let mut n = n;
    let mut k: i8 = 1;
    if n < T::zero() {
        n = checked(T::zero().checked_sub(&n), "kronecker negate")?;
        if a < T::zero() {
            k = -k;
        }
    }
    // Split off the even part of n; (a | 2) depends on a mod 8.
    if n.is_even() {
        if a.is_even() {
            return Ok(0);
        }
        let mut v = 0u32;
        while n.is_even() {
            n = n / two;
            v += 1;
        }
        if v % 2 == 1 {
            let r = a.mod_floor(&eight);
            if r == cast(3) || r == cast(5) {
                k = -k;
            }
        }
    }
    // Now n is odd and positive: Jacobi-style reciprocity loop.
    a = a.mod_floor(&n);
    while !a.is_zero() {
        let mut v = 0u32;
        while a.is_even() {
            a = a / two;
            v += 1;
        }
        if v % 2 == 1 {
            let r = n.mod_floor(&eight);
            if r == cast(3) || r == cast(5) {
                k = -k;
            }
        }
        if a.mod_floor(&four) == cast(3) && n.mod_floor(&four) == cast(3) {
            k = -k;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    Ok(if n == T::one() { k } else { 0 })
}

/// Deterministic trial-division primality test.
pub fn is_prime<T: Scalar>(n: T) -> bool {
    let two = cast::<T>(2);
    let three = cast::<T>(3);
    if n < two {
        return false;
    }
    if n < four_t::<T>() {
        return true;
    }
    if n.is_even() || (n % three).is_zero() {
        return false;
    }
    let six = cast::<T>(6);
    let mut d = cast::<T>(5);
    while d * d <= n {
        if (n % d).is_zero() || (n % (d + two)).is_zero() {
            return false;
        }
        d = d + six;
    }
    true
}

#[inline]
fn four_t<T: Scalar>() -> T {
    cast(4)
}

/// Prime factorization with positive exponents, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<T> {
    pub factors: Vec<(T, u32)>,
    /// Unit sign of the factored value; `factor` only accepts n ≥ 1, so +1.
    pub sign: i8,
}

impl<T: Scalar> Factorization<T> {
    /// Multiply the factorization back together.
    pub fn value(&self) -> Result<T> {
        let mut v = T::one();
        for &(p, e) in &self.factors {
            for _ in 0..e {
                v = checked(v.checked_mul(&p), "factorization product")?;
            }
        }
        if self.sign < 0 {
            v = T::zero() - v;
        }
        Ok(v)
    }

    /// Exponent of `q` in the factored value.
    pub fn ord(&self, q: T) -> u32 {
        self.factors.iter().find(|(p, _)| *p == q).map_or(0, |&(_, e)| e)
    }

    /// Product of the primes occurring to an odd power.
    pub fn squarefree_part(&self) -> Result<T> {
        let mut v = T::one();
        for &(p, e) in &self.factors {
            if e % 2 == 1 {
                v = checked(v.checked_mul(&p), "squarefree part")?;
            }
        }
        Ok(v)
    }

    /// All positive divisors, sorted increasing.
    pub fn divisors(&self) -> Result<Vec<T>> {
        let mut divs = vec![T::one()];
        for &(p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for &d in &divs {
                let mut pe = T::one();
                for _ in 0..=e {
                    next.push(checked(d.checked_mul(&pe), "divisor product")?);
                    pe = checked(pe.checked_mul(&p), "divisor power")?;
                }
            }
            divs = next;
        }
        divs.sort();
        Ok(divs)
    }

    pub fn primes(&self) -> impl Iterator<Item = T> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }
}

/// Factor n ≥ 1 by trial division.
pub fn factor<T: Scalar>(n: T) -> Result<Factorization<T>> {
    if n < T::one() {
        return Err(Error::InvalidArgument(format!("factor requires n ≥ 1, got {n}")));
    }
    let mut rem = n;
    let mut factors = Vec::new();
    let two = cast::<T>(2);
    let mut push = |p: T, rem: &mut T| {
        let mut e = 0u32;
        while (*rem % p).is_zero() {
            *rem = *rem / p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(two, &mut rem);
    push(cast(3), &mut rem);
    let mut d = cast::<T>(5);
    while d * d <= rem {
        push(d, &mut rem);
        push(d + two, &mut rem);
        d = d + cast::<T>(6);
    }
    if rem > T::one() {
        factors.push((rem, 1));
    }
    Ok(Factorization { factors, sign: 1 })
}

/// Squarefree part sf(n): n / sf(n) is a perfect square.
pub fn squarefree_part<T: Scalar>(n: T) -> Result<T> {
    factor(n)?.squarefree_part()
}

/// All primes ≤ bound, by sieve of Eratosthenes.
pub fn primes_up_to<T: Scalar>(bound: T) -> Result<Vec<T>> {
    if bound < cast(2) {
        return Ok(Vec::new());
    }
    let b: u64 = NumCast::from(bound).ok_or(Error::Overflow("sieve bound"))?;
    if b > 100_000_000 {
        return Err(Error::InvalidArgument(format!("sieve bound {b} too large")));
    }
    let b = b as usize;
    let mut composite = vec![false; b + 1];
    let mut primes = Vec::new();
    for p in 2..=b {
        if !composite[p] {
            primes.push(cast::<T>(p as u64));
            let mut m = p * p;
            while m <= b {
                composite[m] = true;
                m += p;
            }
        }
    }
    Ok(primes)
}

/// All primes p ≤ bound with kronecker(aᵢ | p) = εᵢ for every condition (aᵢ, εᵢ).
///
/// An empty result is a valid return; an empty condition list selects every prime.
pub fn find_primes_with_conditions<T: Scalar>(conds: &[(T, i8)], bound: T) -> Result<Vec<T>> {
    let mut out = Vec::new();
    'next: for p in primes_up_to(bound)? {
        for &(a, want) in conds {
            if kronecker(a, p)? != want {
                continue 'next;
            }
        }
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;

    /// Independent square test: is a ≡ x² (mod p) solvable with p ∤ a?
    fn legendre_by_exhaustion(a: Int, p: Int) -> i8 {
        let r = a.rem_euclid(p);
        if r == 0 {
            return 0;
        }
        for x in 0..p {
            if (x * x) % p == r {
                return 1;
            }
        }
        -1
    }

    #[test]
    fn kronecker_basics() {
        assert_eq!(kronecker(-4, 5).unwrap(), 1);
        for d in [-3, -4, -7, -20, -23, -39, 5, 12] {
            assert_eq!(kronecker(d, 1).unwrap(), 1);
        }
        assert!(kronecker(0, 0).is_err());
    }

    #[test]
    fn kronecker_matches_square_test_for_odd_primes() {
        for p in primes_up_to(60i128).unwrap() {
            if p == 2 {
                continue;
            }
            for d in -50..=50 {
                if d % p == 0 {
                    assert_eq!(kronecker(d, p).unwrap(), 0, "d={d} p={p}");
                } else {
                    assert_eq!(kronecker(d, p).unwrap(), legendre_by_exhaustion(d, p), "d={d} p={p}");
                }
            }
        }
    }

    #[test]
    fn kronecker_minus_23_small_primes() {
        // Frozen from the exhaustive square test (p = 2 from the mod-8 rule).
        let expected = [(2, 1), (3, 1), (5, -1), (7, -1), (11, -1), (13, 1)];
        for (p, want) in expected {
            assert_eq!(kronecker(-23i128, p).unwrap(), want, "p={p}");
            if p != 2 {
                assert_eq!(legendre_by_exhaustion(-23, p), want);
            }
        }
    }

    #[test]
    fn kronecker_multiplicative_in_n() {
        for d in (-40..=40).step_by(7) {
            for m in -30i128..=30 {
                for n in -30i128..=30 {
                    if d == 0 && (m == 0 || n == 0) {
                        continue;
                    }
                    let lhs = kronecker(d, m * n).unwrap();
                    let rhs = kronecker(d, m).unwrap() * kronecker(d, n).unwrap();
                    assert_eq!(lhs, rhs, "d={d} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn factor_examples() {
        assert!(factor(1i128).unwrap().factors.is_empty());
        assert_eq!(factor(12i128).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factor(2401i128).unwrap().factors, vec![(7, 4)]);
        assert!(factor(0i128).is_err());
    }

    #[test]
    fn factor_invariants_to_1e5() {
        for n in 1..=100_000i128 {
            let f = factor(n).unwrap();
            assert_eq!(f.value().unwrap(), n);
            let mut last = 1;
            for &(p, e) in &f.factors {
                assert!(p > last, "primes strictly increasing for {n}");
                assert!(e > 0);
                // Independent primality check by plain division loop.
                let mut d = 2;
                while d * d <= p {
                    assert!(p % d != 0, "{p} listed as prime for {n}");
                    d += 1;
                }
                last = p;
            }
            let sf = f.squarefree_part().unwrap();
            assert_eq!(n % sf, 0);
            assert!(is_perfect_square(n / sf), "n={n} sf={sf}");
        }
    }

    #[test]
    fn squarefree_part_examples() {
        assert_eq!(squarefree_part(1i128).unwrap(), 1);
        assert_eq!(squarefree_part(52i128).unwrap(), 13);
        for m in 1..=60i128 {
            assert_eq!(squarefree_part(m * m).unwrap(), 1);
        }
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(primes_up_to(10i128).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(149i128).unwrap().len(), 35);
        assert!(primes_up_to(1i128).unwrap().is_empty());
    }

    #[test]
    fn prime_conditions_examples() {
        // kronecker(-4 | p) = 1 means p ≡ 1 (mod 4).
        assert_eq!(
            find_primes_with_conditions(&[(-4i128, 1)], 30).unwrap(),
            vec![5, 13, 17, 29]
        );
        assert_eq!(
            find_primes_with_conditions::<Int>(&[], 12).unwrap(),
            vec![2, 3, 5, 7, 11]
        );
    }

    #[test]
    fn prime_conditions_nonsquare_pairs_nonempty() {
        // For nonsquare a and any b, primes with (a|p) = -1 and (-b|p) = 1 exist.
        for a in [2i128, 3, 5, 6, 7, 10] {
            for b in [1i128, 2, 3, 5] {
                let ps = find_primes_with_conditions(&[(a, -1), (-b, 1)], 2000).unwrap();
                assert!(!ps.is_empty(), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn extended_gcd_identity() {
        for a in -40..=40i128 {
            for b in -40..=40i128 {
                let (g, x, y) = extended_gcd(a, b);
                assert_eq!(g, a.gcd(&b));
                assert_eq!(a * x + b * y, g, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..=10_000i128 {
            let r = isqrt(n).unwrap();
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "n={n}");
        }
        assert!(isqrt(-1i128).is_err());
    }

    #[test]
    fn is_prime_matches_sieve() {
        let primes = primes_up_to(2000i128).unwrap();
        for n in 0..=2000i128 {
            assert_eq!(is_prime(n), primes.binary_search(&n).is_ok(), "n={n}");
        }
    }
}
