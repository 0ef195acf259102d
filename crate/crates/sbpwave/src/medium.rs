//! Material descriptions sampled pointwise at each variable's grid location.

use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// A scalar material field; either uniform or sampled from a closure of the
/// physical coordinates (the second coordinate is ignored in 1D).
#[derive(Clone)]
pub enum MaterialField {
    Uniform(f64),
    Sampled(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl MaterialField {
    pub fn at(&self, x: f64, y: f64) -> f64 {
        match self {
            MaterialField::Uniform(v) => *v,
            MaterialField::Sampled(f) => f(x, y),
        }
    }
}

impl fmt::Debug for MaterialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaterialField::Uniform(v) => write!(f, "Uniform({v})"),
            MaterialField::Sampled(_) => write!(f, "Sampled(..)"),
        }
    }
}

impl From<f64> for MaterialField {
    fn from(v: f64) -> Self {
        MaterialField::Uniform(v)
    }
}

#[derive(Debug, Error)]
pub enum MediumError {
    #[error("{field} must be positive, got {value} at ({x}, {y})")]
    NotPositive {
        field: &'static str,
        value: f64,
        x: f64,
        y: f64,
    },
    #[error("lambda + 2 mu must be positive, got {value} at ({x}, {y})")]
    PWaveModulus { value: f64, x: f64, y: f64 },
    #[error("lambda + mu must be positive for the compliance form, got {value} at ({x}, {y})")]
    Compliance { value: f64, x: f64, y: f64 },
}

/// Density and compressibility for the 1D system and the 2D acoustic system,
/// with `beta = 1/(rho c^2)`.
#[derive(Clone, Debug)]
pub struct AcousticMedium {
    pub rho: MaterialField,
    pub beta: MaterialField,
}

impl AcousticMedium {
    pub fn uniform(rho: f64, c: f64) -> Self {
        AcousticMedium {
            rho: MaterialField::Uniform(rho),
            beta: MaterialField::Uniform(1.0 / (rho * c * c)),
        }
    }

    pub fn unit() -> Self {
        Self::uniform(1.0, 1.0)
    }

    pub fn rho_at(&self, x: f64, y: f64) -> Result<f64, MediumError> {
        positive("rho", self.rho.at(x, y), x, y)
    }

    pub fn beta_at(&self, x: f64, y: f64) -> Result<f64, MediumError> {
        positive("beta", self.beta.at(x, y), x, y)
    }
}

/// Density and Lame parameters for the 2D elastic system.
#[derive(Clone, Debug)]
pub struct ElasticMedium {
    pub rho: MaterialField,
    pub lambda: MaterialField,
    pub mu: MaterialField,
}

impl ElasticMedium {
    pub fn uniform(rho: f64, lambda: f64, mu: f64) -> Self {
        ElasticMedium {
            rho: MaterialField::Uniform(rho),
            lambda: MaterialField::Uniform(lambda),
            mu: MaterialField::Uniform(mu),
        }
    }

    pub fn unit() -> Self {
        Self::uniform(1.0, 1.0, 1.0)
    }

    pub fn rho_at(&self, x: f64, y: f64) -> Result<f64, MediumError> {
        positive("rho", self.rho.at(x, y), x, y)
    }

    /// `(lambda, mu)` with the hyperbolicity and compliance checks applied.
    pub fn lame_at(&self, x: f64, y: f64) -> Result<(f64, f64), MediumError> {
        let lambda = self.lambda.at(x, y);
        let mu = positive("mu", self.mu.at(x, y), x, y)?;
        if lambda + 2.0 * mu <= 0.0 {
            return Err(MediumError::PWaveModulus {
                value: lambda + 2.0 * mu,
                x,
                y,
            });
        }
        if lambda + mu <= 0.0 {
            return Err(MediumError::Compliance {
                value: lambda + mu,
                x,
                y,
            });
        }
        Ok((lambda, mu))
    }
}

fn positive(field: &'static str, value: f64, x: f64, y: f64) -> Result<f64, MediumError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(MediumError::NotPositive { field, value, x, y })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let m = AcousticMedium::uniform(2.0, 3.0);
        assert_eq!(m.rho_at(0.0, 0.0).unwrap(), 2.0);
        assert!((m.beta_at(0.0, 0.0).unwrap() - 1.0 / 18.0).abs() < 1e-15);

        let bad = AcousticMedium {
            rho: MaterialField::Uniform(-1.0),
            beta: MaterialField::Uniform(1.0),
        };
        assert!(bad.rho_at(0.0, 0.0).is_err());

        let e = ElasticMedium::uniform(1.0, -1.5, 1.0);
        // lambda + 2 mu = 0.5 > 0 but lambda + mu < 0: compliance rejects.
        assert!(matches!(e.lame_at(0.0, 0.0), Err(MediumError::Compliance { .. })));
    }

    #[test]
    fn sampled_field() {
        let f = MaterialField::Sampled(Arc::new(|x, y| 1.0 + x + 2.0 * y));
        assert_eq!(f.at(0.25, 0.5), 2.25);
    }
}
