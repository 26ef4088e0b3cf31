//! Exact decimal numbers.
//!
//! Domain values and degree literals are decimal numerals in config files,
//! CSV cells, and query text. They are kept exact (scaled integers) so that
//! value equality, hashing, and chain-degree checks never depend on float
//! rounding. Conversion to `f64` happens only at the point where a float
//! lattice or a ramp similarity actually computes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecimalError {
    #[error("empty decimal literal")]
    Empty,
    #[error("invalid decimal literal {0:?}")]
    Invalid(String),
    #[error("decimal literal {0:?} out of supported range")]
    Overflow(String),
}

/// A decimal number `mant / 10^scale`, normalized so the fractional part has
/// no trailing zeros. Normalization makes derived `Eq`/`Hash` agree with
/// numeric equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decimal {
    mant: i64,
    scale: u8,
}

const MAX_SCALE: u8 = 18;

impl Decimal {
    pub fn new(mant: i64, scale: u8) -> Self {
        let mut d = Decimal { mant, scale };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Decimal { mant: 0, scale: 0 }
    }

    pub fn one() -> Self {
        Decimal { mant: 1, scale: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Decimal { mant: v, scale: 0 }
    }

    fn normalize(&mut self) {
        while self.scale > 0 && self.mant % 10 == 0 {
            self.mant /= 10;
            self.scale -= 1;
        }
        if self.mant == 0 {
            self.scale = 0;
        }
    }

    pub fn mantissa(&self) -> i64 {
        self.mant
    }

    pub fn scale(&self) -> u8 {
        self.scale
    }

    pub fn is_negative(&self) -> bool {
        self.mant < 0
    }

    /// Value scaled to `10^scale`, for exact cross-scale arithmetic.
    fn widened(&self, scale: u8) -> i128 {
        debug_assert!(scale >= self.scale);
        self.mant as i128 * 10i128.pow((scale - self.scale) as u32)
    }

    pub fn to_f64(&self) -> f64 {
        // mant / 10^scale is correctly rounded only while mant fits the
        // float mantissa; the string path is correctly rounded always
        if self.mant.unsigned_abs() <= (1 << f64::MANTISSA_DIGITS) {
            self.mant as f64 / 10f64.powi(self.scale as i32)
        } else {
            self.to_string().parse().expect("canonical decimal text")
        }
    }

    /// |self - other| as an exact decimal.
    pub fn abs_diff(&self, other: &Decimal) -> Decimal {
        let scale = self.scale.max(other.scale);
        let diff = (self.widened(scale) - other.widened(scale)).abs();
        // widened values fit i128 comfortably; the difference may exceed i64
        // only for absurd inputs, which we saturate rather than wrap
        let mant = i64::try_from(diff).unwrap_or(i64::MAX);
        Decimal::new(mant, scale)
    }

    /// Interprets the decimal as `k/n` for a chain carrier: returns `k` when
    /// the value is an exact multiple of `1/n` within `[0, 1]`.
    pub fn as_chain_numerator(&self, n: u32) -> Option<u32> {
        if self.mant < 0 {
            return None;
        }
        let scaled = self.mant as i128 * n as i128;
        let pow = 10i128.pow(self.scale as u32);
        if scaled % pow != 0 {
            return None;
        }
        let k = scaled / pow;
        if k > n as i128 {
            return None;
        }
        Some(k as u32)
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let scale = self.scale.max(other.scale);
        self.widened(scale).cmp(&other.widened(scale))
    }
}

impl FromStr for Decimal {
    type Err = DecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(DecimalError::Empty);
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(DecimalError::Invalid(s.to_string()));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(DecimalError::Invalid(s.to_string()));
        }
        if frac_part.len() > MAX_SCALE as usize {
            return Err(DecimalError::Overflow(s.to_string()));
        }
        let digits: String = format!("{int_part}{frac_part}");
        let mant: i64 = if digits.is_empty() {
            0
        } else {
            digits
                .parse()
                .map_err(|_| DecimalError::Overflow(s.to_string()))?
        };
        let mant = if neg { -mant } else { mant };
        Ok(Decimal::new(mant, frac_part.len() as u8))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 0 {
            return write!(f, "{}", self.mant);
        }
        let sign = if self.mant < 0 { "-" } else { "" };
        let abs = self.mant.unsigned_abs();
        let pow = 10u64.pow(self.scale as u32);
        let int = abs / pow;
        let frac = abs % pow;
        write!(
            f,
            "{sign}{int}.{frac:0width$}",
            width = self.scale as usize
        )
    }
}
