use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdOrder {
    Central3,
    Central5,
}

/// Central finite difference with step ε^{1/3} (3-point) or ε^{1/5}
/// (5-point) scaled by max(1, |x|).
pub fn fd_derivative<F: Fn(f64) -> f64>(f: F, x: f64, order: FdOrder) -> f64 {
    let scale = x.abs().max(1.0);
    match order {
        FdOrder::Central3 => {
            let h = f64::EPSILON.cbrt() * scale;
            let (xp, xm) = (x + h, x - h);
            (f(xp) - f(xm)) / (xp - xm)
        }
        FdOrder::Central5 => {
            let h = f64::EPSILON.powf(0.2) * scale;
            // Round h to a representable offset so x ± h are exact.
            let h = (x + h) - x;
            (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_functions() {
        for order in [FdOrder::Central3, FdOrder::Central5] {
            assert!((fd_derivative(|x| x * x, 3.0, order) - 6.0).abs() < 1e-9);
            assert!(fd_derivative(|_| 4.2, 1.0, order).abs() < 1e-12);
        }
        let d = fd_derivative(|x: f64| x.sin(), 0.7, FdOrder::Central5);
        assert!((d - 0.7f64.cos()).abs() < 1e-10);
    }
}
