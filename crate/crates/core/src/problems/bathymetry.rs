use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied bottom with its derivative.
#[derive(Clone)]
pub struct CustomBottom {
    pub name: String,
    pub beta: ScalarFn,
    pub dbeta: ScalarFn,
    pub kinks: Vec<f64>,
}

impl fmt::Debug for CustomBottom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomBottom").field("name", &self.name).finish()
    }
}

/// Bottom profile: the bottom is at `z = -beta(x)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bathymetry {
    Flat {
        depth: f64,
    },
    /// `depth - amplitude * exp(-rate (x - center)^2)`
    Gaussian {
        depth: f64,
        amplitude: f64,
        rate: f64,
        center: f64,
    },
    /// `h0` minus a trapezoid of height `delta0` centred at `length / 2`,
    /// flat over `|x - L/2| <= kappa/2`, with linear ramps out to `c kappa`.
    Trapezoid {
        length: f64,
        delta0: f64,
        kappa: f64,
        c: f64,
        h0: f64,
    },
    /// `h0` minus a raised-cosine hump of height `delta` and half width
    /// `kappa` centred at `length / 2`.
    CosineHump {
        length: f64,
        delta: f64,
        kappa: f64,
        h0: f64,
    },
    /// `depth - amplitude * cos(2 pi x / period)`; smooth and periodic.
    Sinusoid {
        depth: f64,
        amplitude: f64,
        period: f64,
    },
    #[serde(skip)]
    Custom(CustomBottom),
}

impl Bathymetry {
    pub fn flat(depth: f64) -> Result<Self> {
        if !(depth > 0.0) {
            return invalid(format!("flat depth {depth} must be positive"));
        }
        Ok(Self::Flat { depth })
    }

    pub fn gaussian(depth: f64, amplitude: f64, rate: f64, center: f64) -> Result<Self> {
        if !(depth - amplitude.abs() > 0.0) || rate < 0.0 {
            return invalid(format!(
                "gaussian bottom with depth {depth} and amplitude {amplitude} is not positive"
            ));
        }
        Ok(Self::Gaussian {
            depth,
            amplitude,
            rate,
            center,
        })
    }

    pub fn trapezoid(length: f64, delta0: f64, kappa: f64, c: f64, h0: f64) -> Result<Self> {
        if !(c > 0.5) {
            return invalid(format!("trapezoid ramp parameter c = {c} must exceed 1/2"));
        }
        if !(h0 > delta0) || !(kappa > 0.0) || !(length > 0.0) {
            return invalid(format!("trapezoid needs h0 > delta0 (got {h0}, {delta0})"));
        }
        Ok(Self::Trapezoid {
            length,
            delta0,
            kappa,
            c,
            h0,
        })
    }

    pub fn cosine_hump(length: f64, delta: f64, kappa: f64, h0: f64) -> Result<Self> {
        if !(h0 > delta) || !(kappa > 0.0) {
            return invalid(format!("cosine hump needs h0 > delta (got {h0}, {delta})"));
        }
        Ok(Self::CosineHump {
            length,
            delta,
            kappa,
            h0,
        })
    }

    pub fn sinusoid(depth: f64, amplitude: f64, period: f64) -> Result<Self> {
        if !(depth - amplitude.abs() > 0.0) || !(period > 0.0) {
            return invalid("sinusoidal bottom is not positive");
        }
        Ok(Self::Sinusoid {
            depth,
            amplitude,
            period,
        })
    }

    pub fn beta(&self, x: f64) -> f64 {
        match self {
            Self::Flat { depth } => *depth,
            Self::Gaussian {
                depth,
                amplitude,
                rate,
                center,
            } => depth - amplitude * (-rate * (x - center).powi(2)).exp(),
            Self::Trapezoid { h0, .. } => h0 - self.trapezoid_parts(x).0,
            Self::CosineHump {
                length,
                delta,
                kappa,
                h0,
            } => {
                let y = x - 0.5 * length;
                if y.abs() < *kappa {
                    h0 - 0.5 * delta * (1.0 + (PI * y / kappa).cos())
                } else {
                    *h0
                }
            }
            Self::Sinusoid {
                depth,
                amplitude,
                period,
            } => depth - amplitude * (2.0 * PI * x / period).cos(),
            Self::Custom(c) => (c.beta)(x),
        }
    }

    /// `beta'(x)`; at kinks the limit from the right.
    pub fn dbeta(&self, x: f64) -> f64 {
        match self {
            Self::Flat { .. } => 0.0,
            Self::Gaussian {
                amplitude,
                rate,
                center,
                ..
            } => {
                let y = x - center;
                2.0 * amplitude * rate * y * (-rate * y * y).exp()
            }
            Self::Trapezoid { .. } => -self.trapezoid_parts(x).1,
            Self::CosineHump {
                length,
                delta,
                kappa,
                ..
            } => {
                let y = x - 0.5 * length;
                if y.abs() < *kappa {
                    0.5 * delta * PI / kappa * (PI * y / kappa).sin()
                } else {
                    0.0
                }
            }
            Self::Sinusoid {
                amplitude, period, ..
            } => amplitude * 2.0 * PI / period * (2.0 * PI * x / period).sin(),
            Self::Custom(c) => (c.dbeta)(x),
        }
    }

    /// Trapezoid height and slope, intervals closed on the left.
    fn trapezoid_parts(&self, x: f64) -> (f64, f64) {
        let Self::Trapezoid {
            length,
            delta0,
            kappa,
            c,
            ..
        } = self
        else {
            unreachable!()
        };
        let y = x - 0.5 * length;
        let ck = c * kappa;
        let half = 0.5 * kappa;
        let slope = delta0 / (ck - half);
        if (-ck..-half).contains(&y) {
            (slope * (y + ck), slope)
        } else if (-half..half).contains(&y) {
            (*delta0, 0.0)
        } else if (half..ck).contains(&y) {
            (-slope * (y - ck), -slope)
        } else {
            (0.0, 0.0)
        }
    }

    /// Points where `beta'` is discontinuous.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            Self::Trapezoid {
                length, kappa, c, ..
            } => {
                let m = 0.5 * length;
                vec![m - c * kappa, m - 0.5 * kappa, m + 0.5 * kappa, m + c * kappa]
            }
            Self::Custom(c) => c.kinks.clone(),
            _ => Vec::new(),
        }
    }

    /// Reference (far-field) depth.
    pub fn reference_depth(&self) -> f64 {
        match self {
            Self::Flat { depth } | Self::Gaussian { depth, .. } | Self::Sinusoid { depth, .. } => *depth,
            Self::Trapezoid { h0, .. } | Self::CosineHump { h0, .. } => *h0,
            Self::Custom(c) => (c.beta)(0.0),
        }
    }

    /// Checks `min beta > 0` on `samples` equispaced points of `[left, right]`.
    pub fn validate(&self, left: f64, right: f64, samples: usize) -> Result<()> {
        let n = samples.max(2);
        for i in 0..n {
            let x = left + (right - left) * i as f64 / (n - 1) as f64;
            let b = self.beta(x);
            if !(b > 0.0) {
                return invalid(format!("bottom depth {b} at x = {x} is not positive"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(b: &Bathymetry, left: f64, right: f64) {
        let kinks = b.kinks();
        let scale = (right - left).abs();
        for i in 0..50 {
            let x = left + (right - left) * (i as f64 + 0.37) / 50.0;
            if kinks.iter().any(|k| (k - x).abs() < 1e-3 * scale) {
                continue;
            }
            let h = 1e-6 * scale;
            let fd = (b.beta(x + h) - b.beta(x - h)) / (2.0 * h);
            let d = b.dbeta(x);
            let tol = 1e-6 * d.abs().max(1e-3 * b.reference_depth() / scale);
            assert!((fd - d).abs() <= tol, "x={x}: fd {fd} vs {d}");
        }
    }

    #[test]
    fn gaussian_values() {
        let b = Bathymetry::gaussian(1.0, 0.04, 100.0, 0.5).unwrap();
        assert!((b.beta(0.5) - 0.96).abs() < 1e-15);
        assert!((b.beta(0.0) - (1.0 - 0.04 * (-25f64).exp())).abs() < 1e-15);
        let b = Bathymetry::gaussian(1.0, 0.4, 100.0, 0.5).unwrap();
        assert!((b.beta(0.5) - 0.6).abs() < 1e-15);
        fd_check(&b, 0.0, 1.0);
    }

    #[test]
    fn zero_amplitude_is_flat() {
        let b = Bathymetry::gaussian(1.0, 0.0, 100.0, 0.5).unwrap();
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            assert_eq!(b.beta(x), 1.0);
            assert_eq!(b.dbeta(x), 0.0);
        }
    }

    #[test]
    fn gaussian_rejects_nonpositive_depth() {
        assert!(Bathymetry::gaussian(1.0, 1.0, 100.0, 0.5).is_err());
    }

    #[test]
    fn trapezoid_profile() {
        let l = 1e6;
        let b = Bathymetry::trapezoid(l, 500.0, l / 10.0, 1.0, 1000.0).unwrap();
        assert!((b.beta(l / 2.0) - 500.0).abs() < 1e-12);
        assert_eq!(b.beta(0.0), 1000.0);
        assert_eq!(b.dbeta(0.0), 0.0);
        // midpoint of the left ramp: between L/2 - c kappa and L/2 - kappa/2
        let mid = 0.5 * ((l / 2.0 - l / 10.0) + (l / 2.0 - l / 20.0));
        assert!((b.beta(mid) - 750.0).abs() < 1e-9);
        // right limit at the first kink is the ramp slope
        assert!((b.dbeta(l / 2.0 - l / 10.0) + 500.0 / (l / 20.0)).abs() < 1e-15);
        fd_check(&b, 0.0, l);
        assert!(Bathymetry::trapezoid(l, 500.0, l / 10.0, 0.5, 1000.0).is_err());
        assert!(Bathymetry::trapezoid(l, 1000.0, l / 10.0, 1.0, 1000.0).is_err());
    }

    #[test]
    fn cosine_hump_and_sinusoid() {
        let l = 1e6;
        let b = Bathymetry::cosine_hump(l, 5000.0, l / 10.0, 1e4).unwrap();
        assert!((b.beta(l / 2.0) - 5000.0).abs() < 1e-9);
        assert_eq!(b.beta(0.0), 1e4);
        fd_check(&b, 0.0, l);
        let s = Bathymetry::sinusoid(1.0, 0.1, 1.0).unwrap();
        assert!((s.beta(0.0) - s.beta(1.0)).abs() < 1e-15);
        fd_check(&s, 0.0, 1.0);
    }

    #[test]
    fn every_shipped_bottom_is_positive() {
        let l = 1e6;
        let cases = [
            (Bathymetry::gaussian(1.0, 0.4, 100.0, 0.5).unwrap(), 1.0),
            (Bathymetry::gaussian(1.0, 0.3, 1000.0, 0.5).unwrap(), 1.0),
            (Bathymetry::trapezoid(l, 500.0, l / 10.0, 2.0, 1000.0).unwrap(), l),
            (Bathymetry::cosine_hump(l, 5000.0, l / 10.0, 1e4).unwrap(), l),
        ];
        for (b, right) in cases {
            b.validate(0.0, right, 10_000).unwrap();
        }
    }

    #[test]
    fn json_roundtrip() {
        let b = Bathymetry::gaussian(1.0, 0.04, 100.0, 0.5).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        assert!(s.contains("\"kind\":\"gaussian\""));
        let back: Bathymetry = serde_json::from_str(&s).unwrap();
        assert_eq!(back.beta(0.3), b.beta(0.3));
    }
}
