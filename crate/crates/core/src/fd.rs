//! Central finite differences with one Richardson extrapolation step.
//!
//! This is the independent check on jet derivatives, so it only ever
//! calls the function being differentiated at real arguments.

/// Default step for a derivative of order `k`.
pub fn default_step(k: usize) -> f64 {
    match k {
        1 => 1e-5,
        2 => 1e-3,
        _ => 3e-3,
    }
}

/// Central-difference stencil for the `k`-th derivative with step `h`.
fn central(f: &dyn Fn(f64) -> f64, t0: f64, k: usize, h: f64) -> f64 {
    match k {
        1 => (f(t0 + h) - f(t0 - h)) / (2.0 * h),
        2 => (f(t0 + h) - 2.0 * f(t0) + f(t0 - h)) / (h * h),
        3 => {
            (f(t0 + 2.0 * h) - 2.0 * f(t0 + h) + 2.0 * f(t0 - h) - f(t0 - 2.0 * h))
                / (2.0 * h * h * h)
        }
        _ => panic!("finite-difference oracle supports k in 1..=3, got {k}"),
    }
}

/// Estimates the `k`-th derivative of `f` at `t0` (`k` in `1..=3`).
///
/// The stencils at `h` and `h/2` both carry an `O(h²)` leading error,
/// which the combination `(4 D(h/2) - D(h)) / 3` cancels.
pub fn fd_oracle(f: &dyn Fn(f64) -> f64, t0: f64, k: usize, h: f64) -> f64 {
    let coarse = central(f, t0, k, h);
    let fine = central(f, t0, k, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_first_derivative() {
        let d = fd_oracle(&f64::sin, 0.3, 1, 1e-5);
        assert!(((d - 0.3f64.cos()) / 0.3f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn cubic_third_derivative() {
        let d = fd_oracle(&|t: f64| t * t * t, 1.0, 3, 1e-3);
        assert!(((d - 6.0) / 6.0).abs() < 1e-6);
    }

    #[test]
    fn constant_has_zero_derivative() {
        for t0 in [-3.0, 0.0, 2.5] {
            assert!(fd_oracle(&|_| 7.0, t0, 1, default_step(1)).abs() < 1e-12);
        }
    }

    #[test]
    fn second_derivative_of_exp() {
        let d = fd_oracle(&f64::exp, 0.5, 2, default_step(2));
        assert!(((d - 0.5f64.exp()) / 0.5f64.exp()).abs() < 1e-8);
    }
}
