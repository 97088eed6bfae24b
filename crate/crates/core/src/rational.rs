//! Exact rational coefficients of the higher-order averaged systems.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub const fn new(num: i64, den: i64) -> Self {
        Self { num, den }
    }

    /// Correctly rounded value. Both parts are below 2^53, so each converts
    /// exactly and the single division rounds once.
    pub fn value(&self) -> f64 {
        debug_assert!(self.num.unsigned_abs() < 1 << 53 && self.den.unsigned_abs() < 1 << 53);
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

pub const C_1_5: Ratio = Ratio::new(1875, 128);
pub const C_1_4: Ratio = Ratio::new(1665, 1);
pub const C_5_1: Ratio = Ratio::new(3, 1280);
pub const C_2_1: Ratio = Ratio::new(21, 640);
pub const C_2_3: Ratio = Ratio::new(297257881995, 282591232);
pub const C_3_2: Ratio = Ratio::new(1973735, 22289904);
pub const C_1_2: Ratio = Ratio::new(33, 4);
pub const C_1_2_R: Ratio = Ratio::new(51, 10);
pub const C_1_2_R6: Ratio = Ratio::new(51, 16);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transcription() {
        assert_eq!(C_2_3.to_string(), "297257881995/282591232");
        assert_eq!(C_3_2.to_string(), "1973735/22289904");
        assert_eq!(C_1_5.to_string(), "1875/128");
        assert_eq!(C_1_4.to_string(), "1665");
        assert_eq!(C_5_1.to_string(), "3/1280");
        assert_eq!(C_2_1.to_string(), "21/640");
    }

    #[test]
    fn values() {
        assert_eq!(C_1_5.value(), 14.6484375);
        assert_eq!(C_2_1.value(), 0.0328125);
        assert!((C_2_3.value() - 1051.9006).abs() < 1e-4);
        assert!((C_3_2.value() - 0.0885484).abs() < 1e-7);
    }
}
