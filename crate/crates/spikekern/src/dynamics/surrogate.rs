/// Triangular surrogate gradient for the spike nondifferentiability:
/// `max(0, alpha * (width - |x|))` where `x` is the distance of the
/// membrane potential from threshold. `alpha` scales the peak, `width`
/// bounds the support.
pub fn surrogate_relu_grad(x: f64, alpha: f64, width: f64) -> f64 {
    debug_assert!(alpha > 0.0 && width > 0.0);
    (alpha * (width - x.abs())).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::surrogate_relu_grad;

    #[test]
    fn peak_value_at_zero() {
        assert!((surrogate_relu_grad(0.0, 0.3, 1.0) - 0.3).abs() < 1e-15);
        assert!((surrogate_relu_grad(0.5, 0.3, 1.0) - 0.15).abs() < 1e-15);
    }

    #[test]
    fn vanishes_outside_support() {
        assert_eq!(surrogate_relu_grad(1.0, 0.3, 1.0), 0.0);
        assert_eq!(surrogate_relu_grad(-2.5, 0.3, 1.0), 0.0);
    }

    #[test]
    fn even_continuous_compact() {
        for k in 0..1000 {
            let x = -2.0 + k as f64 * 0.004;
            let g = surrogate_relu_grad(x, 0.3, 1.0);
            assert_eq!(g, surrogate_relu_grad(-x, 0.3, 1.0));
            assert!(g >= 0.0);
            if x.abs() >= 1.0 {
                assert_eq!(g, 0.0);
            } else {
                assert!(g > 0.0);
            }
        }
    }
}
