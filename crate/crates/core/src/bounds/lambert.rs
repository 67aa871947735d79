use super::BoundError;

const MAX_ITERATIONS: usize = 50;

/// Principal branch of the Lambert W function on `[0, ∞)`.
///
/// Halley iteration on `f(w) = w e^w - z`, seeded with `ln(1 + z)`.
pub fn lambert_w(z: f64) -> Result<f64, BoundError> {
    if z.is_nan() || z < 0.0 {
        return Err(BoundError::Domain {
            what: "lambert_w",
            value: z,
        });
    }
    if z == 0.0 || z.is_infinite() {
        return Ok(z);
    }
    let mut w = z.ln_1p();
    for _ in 0..MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - z;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs() {
            break;
        }
    }
    Ok(w)
}
