//! Closed-form real profiles used for windows, cutoffs and corpus members.

/// `exp(1 - 1/(1 - r^2))` for `|r| < 1`, zero otherwise; equals 1 at the origin.
pub fn bump(r: f64) -> f64 {
    let r2 = r * r;
    if r2 >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r2)).exp()
    }
}

/// `max(1 - |t|, 0)`.
pub fn triangle(t: f64) -> f64 {
    (1.0 - t.abs()).max(0.0)
}

fn edge(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// C-infinity step rising from 0 at `t <= 0` to 1 at `t >= 1`.
pub fn smooth_step(t: f64) -> f64 {
    let a = edge(t);
    let b = edge(1.0 - t);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Smooth plateau: 1 on `|x - center| <= half_width - ramp`, 0 outside `|x - center| < half_width`.
pub fn plateau(x: f64, center: f64, half_width: f64, ramp: f64) -> f64 {
    let d = half_width - (x - center).abs();
    smooth_step(d / ramp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_is_compact() {
        assert_eq!(bump(1.0), 0.0);
        assert_eq!(bump(-1.5), 0.0);
        assert_eq!(bump(0.0), 1.0);
        assert!(bump(0.999) < 1e-200 || bump(0.999) > 0.0);
    }

    #[test]
    fn plateau_limits() {
        assert_eq!(plateau(0.0, 0.0, 2.0, 0.5), 1.0);
        assert_eq!(plateau(2.0, 0.0, 2.0, 0.5), 0.0);
        assert_eq!(plateau(3.0, 0.0, 2.0, 0.5), 0.0);
        let mid = plateau(1.75, 0.0, 2.0, 0.5);
        assert!((mid - 0.5).abs() < 1e-15);
    }
}
