//! Exact number, window and time-list parsing for command-line values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use ckdv::lattice::Window;

/// Parses `p/q`, an integer or a decimal literal exactly, then rounds once.
pub fn rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(p, q));
    }
    decimal(s)
}

fn decimal(s: &str) -> Result<BigRational, String> {
    let bad = || format!("not a number: {s:?}");
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(n);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

pub fn to_f64(r: &BigRational) -> Result<f64, String> {
    r.to_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("{r} is out of range"))
}

pub fn number(s: &str) -> Result<f64, String> {
    to_f64(&rational(s)?)
}

/// `lo:hi:count`
pub fn window(s: &str) -> Result<Window, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts[..] else {
        return Err(format!("window must be lo:hi:count, got {s:?}"));
    };
    let count: usize = count.trim().parse().map_err(|_| format!("bad point count in {s:?}"))?;
    Window::new(number(lo)?, number(hi)?, count).map_err(|e| e.to_string())
}
