use crate::error::{domain, Result};
use crate::helmholtz::Frequency;

/// One-sided length of a straight ray at distance `impact` from the centre
/// inside the collar `1 <= r <= 1 + λ^{-α}`.
///
/// For `d <= 1` this is `√((1+δ)² - d²) - √(1 - d²)`, evaluated as
/// `(2δ + δ²) / (√((1+δ)² - d²) + √(1 - d²))` to avoid cancellation; a ray
/// missing the ball (`1 < d <= 1 + δ`) spends `√((1+δ)² - d²)`.
pub fn ray_sojourn(alpha: f64, lambda: Frequency, impact: f64) -> Result<f64> {
    if !(impact >= 0.0) || !impact.is_finite() {
        return Err(domain("impact parameter must be finite and nonnegative", impact));
    }
    let delta = lambda.value().powf(-alpha);
    let outer = 1.0 + delta;
    if impact > outer {
        return Ok(0.0);
    }
    // (1+δ)² - d² without forming 1+δ
    let far = ((1.0 - impact) * (1.0 + impact) + delta * (2.0 + delta)).max(0.0).sqrt();
    if impact > 1.0 {
        return Ok(far);
    }
    if impact == 0.0 {
        return Ok(delta);
    }
    let near = ((1.0 - impact) * (1.0 + impact)).sqrt();
    Ok(delta * (2.0 + delta) / (far + near))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_and_grazing_chords() {
        for &lam in &[1.0, 7.0, 1024.0, 1e6] {
            let l = Frequency::new(lam).unwrap();
            let d = lam.powf(-0.4);
            assert_eq!(ray_sojourn(0.4, l, 0.0).unwrap(), d);
            let g = ray_sojourn(0.4, l, 1.0).unwrap();
            assert!((g - (2.0 * d + d * d).sqrt()).abs() < 1e-15 * g);
            assert_eq!(ray_sojourn(0.4, l, 1.0 + d + 1e-9).unwrap(), 0.0);
        }
    }

    #[test]
    fn oblique_chord_expansion() {
        // d = 0.6: δ/0.8 + O(δ²)
        let l = Frequency::new(2f64.powi(20)).unwrap();
        let d = 2f64.powi(20).powf(-0.4);
        let v = ray_sojourn(0.4, l, 0.6).unwrap();
        assert!((v - d / 0.8).abs() < 2.0 * d * d);
    }

    #[test]
    fn monotone_and_continuous_at_grazing() {
        let l = Frequency::new(300.0).unwrap();
        let mut prev = 0.0;
        for i in 0..=1000 {
            let v = ray_sojourn(0.3, l, i as f64 / 1000.0).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        let below = ray_sojourn(0.3, l, 1.0 - 1e-12).unwrap();
        let above = ray_sojourn(0.3, l, 1.0 + 1e-12).unwrap();
        assert!((below - above).abs() < 1e-5);
        assert!(ray_sojourn(0.3, l, -0.1).is_err());
    }
}
