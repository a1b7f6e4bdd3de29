//! Exact arithmetic in the field Q(i) of Gaussian rationals.
//!
//! A [`Scalar`] is `re + im*i` with both parts stored as reduced
//! [`BigRational`]s. The text form is
//!
//! ```text
//! rational ( ('+'|'-') rational? 'i' )?      rational = int ('/' int)?
//! ```
//!
//! so `1/2`, `-1/2+1/2i`, `3-i` and `0+i` are all valid. The parser also
//! accepts a bare imaginary term such as `i`, `-i` or `2/3i`; the renderer
//! always emits the grammar above.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest |re| or |im| (as a Gaussian integer) searched when extracting odd
/// roots. Beyond that [`Scalar::kth_roots`] reports that it could not decide.
const ROOT_SEARCH_LIMIT: u64 = 1 << 22;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num/den`; panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// `re + im*i` from two integer fractions.
    pub fn gaussian(re: (i64, i64), im: (i64, i64)) -> Self {
        Scalar::new(
            BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Scalar {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// Field norm `re^2 + im^2`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Scalar::new(&self.re / &n, -&self.im / &n))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// True when the leading nonzero part is negative: `re < 0`, or
    /// `re == 0 && im < 0`. Used to pull signs out when rendering sums.
    pub fn is_negative_like(&self) -> bool {
        self.re.is_negative() || (self.re.is_zero() && self.im.is_negative())
    }

    /// Square root inside Q(i), on the branch with `re > 0`, or `re == 0`
    /// and `im >= 0`. `None` when the root leaves the field.
    pub fn sqrt(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        // s = p + q i with p^2 - q^2 = re, 2pq = im, p^2 + q^2 = |self|.
        let modulus = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let p = rational_sqrt(&((&modulus + &self.re) / &two))?;
        let mut q = rational_sqrt(&((&modulus - &self.re) / &two))?;
        if self.im.is_negative() {
            q = -q;
        }
        let mut s = Scalar::new(p, q);
        if s.is_negative_like() {
            s = -s;
        }
        if &(&s * &s) == self {
            Some(s)
        } else {
            None
        }
    }

    /// All `z` in Q(i) with `z^k == self`, sorted.
    ///
    /// Returns `None` only when an odd-root search would exceed
    /// [`ROOT_SEARCH_LIMIT`]; an empty vector means no root exists.
    pub fn kth_roots(&self, k: u32) -> Option<Vec<Scalar>> {
        assert!(k >= 1, "root index must be positive");
        if self.is_zero() {
            return Some(vec![Scalar::zero()]);
        }
        let mut roots = if k == 1 {
            vec![self.clone()]
        } else if k.is_multiple_of(2) {
            let mut out = Vec::new();
            if let Some(s) = self.sqrt() {
                for half in [s.clone(), -s] {
                    out.extend(half.kth_roots(k / 2)?);
                }
            }
            out
        } else {
            odd_root(self, k)?.into_iter().collect()
        };
        roots.sort();
        roots.dedup();
        Some(roots)
    }

    /// Small random Gaussian rational: numerators in `[-bound, bound]`,
    /// denominators in `[1, bound]`.
    pub fn random_small<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Scalar {
        let b = bound.max(1);
        let re = BigRational::new(
            BigInt::from(rng.gen_range(-b..=b)),
            BigInt::from(rng.gen_range(1..=b)),
        );
        let im = BigRational::new(
            BigInt::from(rng.gen_range(-b..=b)),
            BigInt::from(rng.gen_range(1..=b)),
        );
        Scalar::new(re, im)
    }

    /// Like [`Scalar::random_small`] but never zero.
    pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Scalar {
        loop {
            let s = Scalar::random_small(rng, bound);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn parse(text: &str) -> Result<Scalar> {
        text.parse()
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Unique odd root in Q(i), if any. Clearing denominators reduces to a root
/// of a Gaussian integer, whose root is again a Gaussian integer; for odd `k`
/// its real part divides the real part of the target (and likewise for the
/// imaginary part), which bounds the search.
fn odd_root(c: &Scalar, k: u32) -> Option<Option<Scalar>> {
    let den_c = c.re.denom().lcm(c.im.denom());
    let den = root_denominator(&den_c, k);
    // B = c * den^k is a Gaussian integer and y = z * den is its k-th root.
    let scale = BigRational::from_integer(num_traits::pow(den.clone(), k as usize));
    let b_re = (&c.re * &scale).to_integer();
    let b_im = (&c.im * &scale).to_integer();

    let norm_b: BigInt = &b_re * &b_re + &b_im * &b_im;
    let m = norm_b.nth_root(k);
    if num_traits::pow(m.clone(), k as usize) != norm_b {
        return Some(None);
    }
    // |y|^2 = m, so each coordinate is at most sqrt(m).
    let bound = m.sqrt();
    let bound = match bound.to_u64() {
        Some(b) if b <= ROOT_SEARCH_LIMIT => b,
        _ => return None,
    };
    let target = (b_re.clone(), b_im.clone());
    let divides_re = !b_re.is_zero();
    for t in 0..=bound {
        let t_big = BigInt::from(t);
        if divides_re {
            if t == 0 || !(&b_re % &t_big).is_zero() {
                continue;
            }
        } else if t == 0 || !(&b_im % &t_big).is_zero() {
            continue;
        }
        let rest = &m - &t_big * &t_big;
        if rest.is_negative() {
            break;
        }
        let other = rest.sqrt();
        if &other * &other != rest {
            continue;
        }
        for s1 in [1i64, -1] {
            for s2 in [1i64, -1] {
                let a = &t_big * s1;
                let b = &other * s2;
                let (u, v) = if divides_re { (a, b) } else { (b, a) };
                if gaussian_int_pow(&u, &v, k) == target {
                    let d = BigRational::from_integer(den.clone());
                    let y = Scalar::new(BigRational::from_integer(u), BigRational::from_integer(v));
                    return Some(Some(Scalar::new(&y.re / &d, &y.im / &d)));
                }
            }
        }
    }
    Some(None)
}

/// Smallest-ish `D` with `D^k` divisible by `den`: primes found by trial
/// division get exponent `ceil(e / k)`, any unfactored cofactor is kept whole.
fn root_denominator(den: &BigInt, k: u32) -> BigInt {
    let exact = den.nth_root(k);
    if num_traits::pow(exact.clone(), k as usize) == *den {
        return exact;
    }
    let mut rest = den.clone();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= rest && p <= limit {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            out *= num_traits::pow(p.clone(), e.div_ceil(k) as usize);
        }
        p += 1;
    }
    out * rest
}

fn gaussian_int_pow(u: &BigInt, v: &BigInt, k: u32) -> (BigInt, BigInt) {
    let mut acc = (BigInt::one(), BigInt::zero());
    for _ in 0..k {
        acc = (&acc.0 * u - &acc.1 * v, &acc.0 * v + &acc.1 * u);
    }
    acc
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational(f, &self.re)?;
        if !self.im.is_zero() {
            f.write_str(if self.im.is_negative() { "-" } else { "+" })?;
            let mag = self.im.abs();
            if !mag.is_one() {
                write_rational(f, &mag)?;
            }
            f.write_str("i")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_err(input: &str, reason: &str) -> Error {
    Error::Parse {
        what: "scalar",
        input: input.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_int(whole: &str, s: &str, signed: bool) -> Result<BigInt> {
    let digits = if signed {
        s.strip_prefix(['+', '-']).unwrap_or(s)
    } else {
        s
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(whole, "expected an integer"));
    }
    s.parse::<BigInt>()
        .map_err(|_| parse_err(whole, "expected an integer"))
}

fn parse_rational(whole: &str, s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(whole, s, true)?)),
        Some((n, d)) => {
            let n = parse_int(whole, n, true)?;
            let d = parse_int(whole, d, false)?;
            if d.is_zero() {
                return Err(Error::ZeroDenominator(whole.to_string()));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Imaginary coefficient text such as `+`, `-3/4`, `` (empty = 1).
fn parse_imag_coeff(whole: &str, s: &str) -> Result<BigRational> {
    match s {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        _ => {
            let body = s.strip_prefix('+').unwrap_or(s);
            parse_rational(whole, body)
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(text: &str) -> Result<Scalar> {
        let s = text.trim();
        if s.is_empty() {
            return Err(parse_err(text, "empty input"));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Scalar::from_rational(parse_rational(text, s)?));
        };
        // Split at the last sign that is not leading and not part of a fraction.
        let split = body
            .char_indices()
            .filter(|&(p, ch)| p > 0 && (ch == '+' || ch == '-'))
            .map(|(p, _)| p)
            .next_back();
        match split {
            Some(p) => {
                let re = parse_rational(text, &body[..p])?;
                let im = parse_imag_coeff(text, &body[p..])?;
                Ok(Scalar::new(re, im))
            }
            None => Ok(Scalar::new(BigRational::zero(), parse_imag_coeff(text, body)?)),
        }
    }
}

// Arithmetic ----------------------------------------------------------------

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_real() && rhs.is_real() {
            return Scalar::from_rational(&self.re * &rhs.re);
        }
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

/// Panics on division by zero; use [`Scalar::checked_div`] for a `Result`.
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}
