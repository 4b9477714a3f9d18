use std::fmt;
use std::str::FromStr;

use super::KernelError;

/// Default regularization; small enough that it only guards division by zero.
pub const DEFAULT_EPSILON: f64 = 1e-100;

/// Which nonlinear weight design a reconstruction uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightDesign {
    /// `α_i = c_i / (I^JS_i + ε)^s`
    JiangShu,
    /// `α_i = c_i (1 + d_r^{s1} / ((I^JS_i)^{s1} + ε))^{s2}`
    YamaleevCarpenter,
    /// Yamaleev-Carpenter weights over the linear-cost difference indicators.
    Fast,
}

impl WeightDesign {
    pub const ALL: [WeightDesign; 3] = [WeightDesign::JiangShu, WeightDesign::YamaleevCarpenter, WeightDesign::Fast];

    pub fn short_name(self) -> &'static str {
        match self {
            WeightDesign::JiangShu => "js",
            WeightDesign::YamaleevCarpenter => "yc",
            WeightDesign::Fast => "fweno",
        }
    }
}

impl fmt::Display for WeightDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for WeightDesign {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "js" | "js-weno" | "jiang-shu" => Ok(WeightDesign::JiangShu),
            "yc" | "yc-weno" | "yamaleev-carpenter" => Ok(WeightDesign::YamaleevCarpenter),
            "fweno" | "fast" => Ok(WeightDesign::Fast),
            other => Err(KernelError::InvalidVariant(format!("unknown weight design `{other}`"))),
        }
    }
}

/// Weight design plus its exponents and regularization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WenoVariant {
    pub design: WeightDesign,
    /// Jiang-Shu exponent.
    pub s: u32,
    pub s1: u32,
    pub s2: u32,
    pub epsilon: f64,
}

fn half_up(r: usize) -> u32 {
    r.div_ceil(2) as u32
}

impl WenoVariant {
    /// Defaults for order `2r-1`: `s = s1 = ⌈r/2⌉`, `s2 = 1`, `ε = 1e-100`.
    pub fn new(design: WeightDesign, r: usize) -> Self {
        WenoVariant {
            design,
            s: half_up(r),
            s1: half_up(r),
            s2: 1,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn jiang_shu(r: usize) -> Self {
        Self::new(WeightDesign::JiangShu, r)
    }

    pub fn yamaleev_carpenter(r: usize) -> Self {
        Self::new(WeightDesign::YamaleevCarpenter, r)
    }

    pub fn fast(r: usize) -> Self {
        Self::new(WeightDesign::Fast, r)
    }

    pub fn with_s2(mut self, s2: u32) -> Self {
        self.s2 = s2;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Check the exponent hypotheses for use at order `2r-1`.
    pub fn validate(&self, r: usize) -> Result<(), KernelError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(KernelError::InvalidVariant(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        match self.design {
            WeightDesign::JiangShu => {
                if (self.s as usize) * 2 < r || self.s == 0 {
                    return Err(KernelError::InvalidVariant(format!(
                        "Jiang-Shu exponent s = {} below r/2 for r = {r}",
                        self.s
                    )));
                }
            }
            WeightDesign::YamaleevCarpenter | WeightDesign::Fast => {
                if self.s1 == 0 || self.s2 == 0 || 2 * (self.s1 as usize) * (self.s2 as usize) < r {
                    return Err(KernelError::InvalidVariant(format!(
                        "exponents s1 = {}, s2 = {} violate s1 >= 1, s1*s2 >= r/2 for r = {r}",
                        self.s1, self.s2
                    )));
                }
            }
        }
        Ok(())
    }

    /// Display label such as `FWENO5`.
    pub fn label(&self, r: usize) -> String {
        let prefix = match self.design {
            WeightDesign::JiangShu => "JS-WENO",
            WeightDesign::YamaleevCarpenter => "YC-WENO",
            WeightDesign::Fast => "FWENO",
        };
        format!("{prefix}{}", 2 * r - 1)
    }
}
