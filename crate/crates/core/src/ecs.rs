//! Two-mode entangled coherent states `N(|α⟩|kα⟩ + |−α⟩|−kα⟩)`.
//!
//! Everything here is closed form. The state only enters through `|α|²`
//! and `k²`, so most quantities are expressed in terms of the combined
//! intensity `x = (1 + k²)|α|²`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Arguments below this are flushed to zero by [`exp_flushed`].
const EXP_FLUSH: f64 = -700.0;

/// `exp(x)`, with arguments below −700 flushed to exactly zero.
#[inline]
pub fn exp_flushed(x: f64) -> f64 {
    if x < EXP_FLUSH {
        0.0
    } else {
        x.exp()
    }
}

/// `1 − exp(−y)` for `y ≥ 0`, accurate for small `y`.
#[inline]
pub(crate) fn one_minus_exp_neg(y: f64) -> f64 {
    -(-y).exp_m1()
}

/// Defining numbers of the sensor input state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcsParams {
    alpha: Complex64,
    k: f64,
}

impl EcsParams {
    /// Builds the state parameters; `k` must be finite and nonzero.
    pub fn new(alpha: Complex64, k: f64) -> Result<Self> {
        if !k.is_finite() || k == 0.0 {
            return Err(Error::InvalidAsymmetry(k));
        }
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::NonFiniteAmplitude(alpha));
        }
        Ok(Self { alpha, k })
    }

    /// Convenience constructor for a real amplitude.
    pub fn real(alpha: f64, k: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), k)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `|α|²`
    pub fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// `x = (1 + k²)|α|²`, the total coherent intensity of one branch.
    pub fn intensity(&self) -> f64 {
        (1.0 + self.k * self.k) * self.alpha_sq()
    }

    /// Overlap of the two branches, `⟨α, kα | −α, −kα⟩ = e^{−2x}`.
    pub fn branch_overlap(&self) -> f64 {
        exp_flushed(-2.0 * self.intensity())
    }
}

/// First and second moments of the mode and total photon numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStatistics {
    pub n1: f64,
    pub n2: f64,
    pub n_total: f64,
    pub n1_sq: f64,
    pub n2_sq: f64,
    pub n_total_sq: f64,
    pub var_total: f64,
}

/// Inner product `⟨β|γ⟩` of two coherent states.
pub fn coherent_overlap(beta: Complex64, gamma: Complex64) -> Complex64 {
    let exponent = -0.5 * (beta.norm_sqr() + gamma.norm_sqr()) + beta.conj() * gamma;
    if exponent.re < EXP_FLUSH {
        Complex64::new(0.0, 0.0)
    } else {
        exponent.exp()
    }
}

/// Normalization constant `N = [2 + 2e^{−2x}]^{−1/2}`.
pub fn normalization(params: &EcsParams) -> f64 {
    (2.0 + 2.0 * params.branch_overlap()).powf(-0.5)
}

/// `tanh(x)` written as `(1 − e^{−2x}) / (1 + e^{−2x})`, exact at `x = 0`.
fn branch_tanh(x: f64) -> f64 {
    let s = exp_flushed(-2.0 * x);
    one_minus_exp_neg(2.0 * x) / (1.0 + s)
}

/// Photon-number moments of the input state.
pub fn photon_statistics(params: &EcsParams) -> PhotonStatistics {
    let a2 = params.alpha_sq();
    let k2 = params.k * params.k;
    let x = params.intensity();
    let th = branch_tanh(x);

    let n1 = a2 * th;
    let n2 = k2 * a2 * th;
    let n_total = n1 + n2;
    let n1_sq = n1 + a2 * a2;
    let n2_sq = n2 + k2 * k2 * a2 * a2;
    let n_total_sq = n_total + x * x;
    // n_total_sq − n_total² = n_total + x²(1 − tanh²x), evaluated without cancellation.
    let var_total = n_total + x * x * (1.0 - th) * (1.0 + th);

    PhotonStatistics {
        n1,
        n2,
        n_total,
        n1_sq,
        n2_sq,
        n_total_sq,
        var_total,
    }
}

/// Largest number of bisection halvings; the loop normally stops earlier once
/// the bracket collapses to adjacent floats.
const MAX_BISECTIONS: usize = 2000;

/// Solves `x tanh x = n_bar` for `x ≥ 0`.
pub fn intensity_for_mean_photon(n_bar: f64) -> Result<f64> {
    if !n_bar.is_finite() || n_bar < 0.0 {
        return Err(Error::InvalidMeanPhoton(n_bar));
    }
    if n_bar == 0.0 {
        return Ok(0.0);
    }
    let f = |x: f64| x * branch_tanh(x) - n_bar;

    // x − 1 < x tanh x ≤ x², so the root lies in [max(n, √n) − 1, n + 1].
    let mut lo = (n_bar.max(n_bar.sqrt()) - 1.0).max(0.0);
    let mut hi = n_bar + 1.0;
    debug_assert!(f(lo) <= 0.0 && f(hi) > 0.0);

    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick whichever bracket end has the smaller residual.
    Ok(if f(lo).abs() <= f(hi).abs() { lo } else { hi })
}

/// Returns the real amplitude `|α|` whose state has total mean photon number `n_bar`.
pub fn amplitude_for_mean_photon(n_bar: f64, k: f64) -> Result<f64> {
    if !k.is_finite() || k == 0.0 {
        return Err(Error::InvalidAsymmetry(k));
    }
    let x = intensity_for_mean_photon(n_bar)?;
    Ok((x / (1.0 + k * k)).sqrt())
}
