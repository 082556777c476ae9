use super::ball::{count_ball, EnumLimits};
use super::spec::GroupSpec;
use crate::error::{Error, Result};

/// Least-squares growth exponent of the norm ball: `#{‖γ‖ < T} ≍ T^{2δ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaEstimate {
    /// `(T_i, count_i)`.
    pub samples: Vec<(f64, usize)>,
    /// Slope of `log count` against `log T`.
    pub slope: f64,
    pub delta_hat: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
}

pub fn estimate_delta(g: &GroupSpec, t_samples: &[f64]) -> Result<DeltaEstimate> {
    estimate_delta_with(g, t_samples, &EnumLimits::default())
}

pub fn estimate_delta_with(
    g: &GroupSpec,
    t_samples: &[f64],
    limits: &EnumLimits,
) -> Result<DeltaEstimate> {
    if t_samples.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 radii, got {}",
            t_samples.len()
        )));
    }
    if t_samples.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    let mut samples = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let count = count_ball(g, t, limits)?;
        if count == 0 {
            return Err(Error::InsufficientData(format!("ball of radius {t} is empty")));
        }
        samples.push((t, count));
    }
    let (slope, residual) = fit_log_log(&samples);
    Ok(DeltaEstimate { samples, slope, delta_hat: slope / 2.0, residual })
}

fn fit_log_log(samples: &[(f64, usize)]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(t, c)| (t.ln(), (c as f64).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    (slope, (rss / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matgroup::Mat2;

    #[test]
    fn cyclic_group_grows_linearly() {
        let g = GroupSpec::with_prune_factor(vec![Mat2::upper(1)], 1, (1, 0), (0, 1), 1.0).unwrap();
        let radii: Vec<f64> = (5..=12).map(|k| 2f64.powi(k)).collect();
        let est = estimate_delta(&g, &radii).unwrap();
        assert!((est.delta_hat - 0.5).abs() < 0.15, "{est:?}");
        assert!(est.samples.windows(2).all(|w| w[0].1 <= w[1].1));
    }

    #[test]
    fn rejects_degenerate_input() {
        let g = GroupSpec::with_prune_factor(vec![Mat2::upper(1)], 1, (1, 0), (0, 1), 1.0).unwrap();
        assert!(matches!(estimate_delta(&g, &[2.0, 4.0]), Err(Error::InsufficientData(_))));
        assert!(estimate_delta(&g, &[4.0, 2.0, 8.0]).is_err());
        assert!(matches!(
            estimate_delta(&g, &[0.5, 1.0, 1.2]),
            Err(Error::InsufficientData(_))
        ));
    }
}
