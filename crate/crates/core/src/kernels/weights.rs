use super::{pow_repeated, KernelError, Lanes, Real, WeightDesign, WenoVariant};

/// Unnormalized weights `α_i`.
///
/// Jiang-Shu: `c_i / (I_i + ε)^s`, one addition, `s-1` products and one
/// division each. Yamaleev-Carpenter form: `c_i (1 + d^{s1}/(I_i^{s1} + ε))^{s2}`,
/// two additions, `2s1+s2-2` products and one division each (the power of
/// `d` is formed per term).
#[inline(always)]
pub(crate) fn alphas_r<S: Real, const R: usize>(
    v: &WenoVariant,
    ind: &[S; R],
    d_r: S,
    c: &[f64],
) -> Result<[S; R], KernelError> {
    let c = &c[..R];
    let eps = S::constant(v.epsilon);
    let mut out = [S::constant(0.0); R];
    match v.design {
        WeightDesign::JiangShu => {
            for i in 0..R {
                out[i] = S::constant(c[i]) / pow_repeated(ind[i] + eps, v.s);
            }
        }
        WeightDesign::YamaleevCarpenter | WeightDesign::Fast => {
            let one = S::constant(1.0);
            for i in 0..R {
                let ratio = pow_repeated(d_r, v.s1) / (pow_repeated(ind[i], v.s1) + eps);
                out[i] = S::constant(c[i]) * pow_repeated(one + ratio, v.s2);
            }
        }
    }
    for (index, a) in out.iter().enumerate() {
        let value = a.value();
        if !value.is_finite() {
            return Err(KernelError::NonFiniteAlpha { index, value });
        }
    }
    Ok(out)
}

/// `ω_i = α_i · (1/Σα)`: `r-1` additions, one division, `r` products.
#[inline(always)]
pub(crate) fn weights_r<S: Real, const R: usize>(alpha: &[S; R]) -> Result<[S; R], KernelError> {
    let mut sum = alpha[0];
    for a in &alpha[1..] {
        sum = sum + *a;
    }
    if !(sum.value() > 0.0 && sum.value().is_finite()) {
        return Err(KernelError::NonFiniteAlpha { index: 0, value: sum.value() });
    }
    let inv = S::constant(1.0) / sum;
    let mut out = [S::constant(0.0); R];
    for i in 0..R {
        out[i] = alpha[i] * inv;
    }
    Ok(out)
}

fn to_array<S: Real, const R: usize>(v: &[S]) -> Result<[S; R], KernelError> {
    v.try_into()
        .map_err(|_| KernelError::LengthMismatch { expected: R, found: v.len() })
}

/// Unnormalized nonlinear weights for `indicators.len()` substencils.
pub fn alphas<S: Real>(
    variant: &WenoVariant,
    indicators: &[S],
    d_r: S,
    ideal: &[f64],
) -> Result<Lanes<S>, KernelError> {
    if ideal.len() != indicators.len() {
        return Err(KernelError::LengthMismatch { expected: indicators.len(), found: ideal.len() });
    }
    super::with_order!(indicators.len(), R => {
        let ind = to_array::<S, R>(indicators)?;
        Ok(Lanes::from_array(alphas_r::<S, R>(variant, &ind, d_r, ideal)?))
    })
}

/// Normalize `α` into convex weights.
pub fn weights<S: Real>(alpha: &[S]) -> Result<Lanes<S>, KernelError> {
    super::with_order!(alpha.len(), R => {
        let a = to_array::<S, R>(alpha)?;
        Ok(Lanes::from_array(weights_r::<S, R>(&a)?))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const C5: [f64; 3] = [0.1, 0.6, 0.3];

    #[test]
    fn smooth_limit_returns_ideal_weights() {
        let a = alphas(&WenoVariant::fast(3), &[0.0, 0.0, 0.0], 0.0, &C5).unwrap();
        assert_eq!(&*a, &C5);
        let w = weights(&a).unwrap();
        for (wi, ci) in w.iter().zip(C5) {
            assert!((wi - ci).abs() < 1e-16);
        }
    }

    #[test]
    fn fast_alphas_at_a_step() {
        let v = WenoVariant::fast(3);
        assert_eq!((v.s1, v.s2), (2, 1));
        let a = alphas(&v, &[0.0, 1.0, 1.0], 9.0, &C5).unwrap();
        assert!((a[0] / (0.1 * (1.0 + 81e100)) - 1.0).abs() < 1e-15);
        assert_eq!(a[1], 0.6 * 82.0);
        assert_eq!(a[2], 0.3 * 82.0);
        let w = weights(&a).unwrap();
        // 1 - 1e-90 rounds to 1 in f64; the complement carries the bound
        assert!(w[0] >= 1.0 - 1e-90);
        assert!(w[1] < 1e-90 && w[2] < 1e-90);
    }

    #[test]
    fn jiang_shu_constant_data_recovers_ideal_weights() {
        let v = WenoVariant::jiang_shu(3);
        assert_eq!(v.s, 2);
        let a = alphas(&v, &[0.0; 3], 0.0, &C5).unwrap();
        for (ai, ci) in a.iter().zip(C5) {
            assert_eq!(*ai, ci / 1e-200);
        }
        let w = weights(&a).unwrap();
        for (wi, ci) in w.iter().zip(C5) {
            assert!((wi - ci).abs() < 1e-15);
        }
    }

    #[test]
    fn equal_alphas_give_uniform_weights() {
        let w = weights(&[2.5; 4]).unwrap();
        assert!(w.iter().all(|&x| x == 0.25));
    }

    #[test]
    fn overflow_is_signalled() {
        let mut v = WenoVariant::jiang_shu(8);
        v.s = 4;
        // (0 + 1e-100)^4 underflows to zero
        let err = alphas(&v, &[0.0; 8], 0.0, &[0.125; 8]).unwrap_err();
        assert!(matches!(err, KernelError::NonFiniteAlpha { .. }));
        assert!(alphas(&v, &[0.0; 3], 0.0, &[0.1; 4]).is_err());
    }
}
