//! Gauss-Legendre rules and adaptive interval-halving integration.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the rule by Newton iteration on `P_n`, started from the
    /// Tricomi approximation of each root.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared 8-point rule.
    pub fn order8() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(8))
    }

    /// Shared 16-point rule.
    pub fn order16() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(node, weight)` pairs mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Outcome of [`adaptive_gauss_legendre`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveEstimate {
    pub value: f64,
    /// Sum of `|coarse - refined|` over accepted intervals.
    pub error: f64,
    pub intervals: usize,
}

/// Composite 16-point Gauss-Legendre with interval halving: an interval is
/// accepted once the estimate on it and the sum over its two halves differ
/// by less than `rel_tol` relative to the running magnitude of the integral.
pub fn adaptive_gauss_legendre<F>(mut f: F, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> Result<AdaptiveEstimate>
where
    F: FnMut(f64) -> f64,
{
    let rule = GaussLegendre::order16();
    let whole = rule.integrate(a, b, &mut f);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    let mut stack = vec![(a, b, whole, 0u32)];
    let mut value = 0.0;
    let mut error = 0.0;
    let mut intervals = 0;
    let mut failed = false;
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &mut f);
        let right = rule.integrate(mid, hi, &mut f);
        let fine = left + right;
        let diff = (fine - coarse).abs();
        // the absolute floor stops refinement on intervals that carry no mass
        if diff <= rel_tol * scale.max(fine.abs()) || diff <= 1e-15 * scale {
            value += fine;
            error += diff;
            intervals += 1;
        } else if depth >= max_depth {
            value += fine;
            error += diff;
            intervals += 1;
            failed = true;
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    if failed && error > rel_tol * value.abs().max(f64::MIN_POSITIVE) * 10.0 {
        return Err(Error::Resolution { requested: rel_tol, achieved: error / value.abs().max(f64::MIN_POSITIVE) });
    }
    Ok(AdaptiveEstimate { value, error, intervals })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_polynomials_exactly() {
        for n in [1usize, 2, 5, 8, 16] {
            let rule = GaussLegendre::new(n);
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            let degree = 2 * n - 1;
            let exact = if degree % 2 == 0 { 2.0 / (degree as f64 + 1.0) } else { 0.0 };
            let approx = rule.integrate(-1.0, 1.0, |x| x.powi(degree as i32));
            assert!((approx - exact).abs() < 1e-13, "n = {n}");
            let even = rule.integrate(-1.0, 1.0, |x| x.powi(2 * (n as i32 - 1)));
            assert!((even - 2.0 / (2.0 * n as f64 - 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let rule = GaussLegendre::new(9);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        for i in 0..9 {
            assert!((rule.nodes[i] + rule.nodes[8 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        // integral of eps / (x^2 + eps^2) over [-1, 1] is 2 atan(1 / eps)
        let eps = 1e-4;
        let est = adaptive_gauss_legendre(|x| eps / (x * x + eps * eps), -1.0, 1.0, 1e-12, 60).unwrap();
        assert!((est.value - 2.0 * (1.0 / eps).atan()).abs() < 1e-10);
    }

    #[test]
    fn adaptive_reports_unreachable_tolerance() {
        let res = adaptive_gauss_legendre(|x| if x > 0.3 { 1.0 } else { 0.0 }, 0.0, 1.0, 1e-14, 3);
        assert!(matches!(res, Err(Error::Resolution { .. })));
    }
}
