//! Finite compressions `P_N C_phi P_N` of composition operators on `H^2`,
//! in the monomial basis `{z^n : n < N}`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{coefficients_from_samples, Symbol, TaylorConfig};

/// `A[j][n]` is the `j`-th Taylor coefficient of `phi^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedComposition {
    n: usize,
    samples: usize,
    radius: f64,
    matrix: DMatrix<Complex64>,
    symbol: String,
}

impl TruncatedComposition {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn column_norms(&self) -> Vec<f64> {
        self.matrix.column_iter().map(|c| c.norm()).collect()
    }

    /// Entries as `j,n,re,im` rows in row-major order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,n,re,im\n");
        for j in 0..self.n {
            for k in 0..self.n {
                let v = self.matrix[(j, k)];
                writeln!(out, "{j},{k},{:e},{:e}", v.re, v.im).expect("write to string");
            }
        }
        out
    }
}

/// Builds the compression from one set of samples of `phi` on the circle of
/// radius `r`, powered pointwise.
pub fn truncate(phi: &Symbol, n: usize, cfg: &TaylorConfig) -> Result<TruncatedComposition> {
    let (samples, radius) = cfg.resolve(n)?;
    let values = phi.circle_samples(samples, radius)?;
    let mut planner = FftPlanner::new();
    let mut matrix = DMatrix::zeros(n, n);
    matrix[(0, 0)] = Complex64::new(1.0, 0.0);
    let mut power = values.clone();
    for col in 1..n {
        let coefficients = coefficients_from_samples(&mut planner, power.clone(), radius, n);
        for (j, c) in coefficients.into_iter().enumerate() {
            matrix[(j, col)] = c;
        }
        for (p, v) in power.iter_mut().zip(&values) {
            *p *= v;
        }
    }
    Ok(TruncatedComposition { n, samples, radius, matrix, symbol: phi.name() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub symbol: String,
    pub n: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
}

impl SpectrumReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,sigma\n");
        for (k, s) in self.singular_values.iter().enumerate() {
            writeln!(out, "{},{:e}", k + 1, s).expect("write to string");
        }
        out
    }
}

fn sorted_singular_values(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if m.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Domain { value: f64::NAN, domain: "finite matrix entries" });
    }
    let mut s: Vec<f64> = m.singular_values().iter().map(|v| v.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

pub fn singular_values(t: &TruncatedComposition) -> Result<SpectrumReport> {
    Ok(SpectrumReport { symbol: t.symbol.clone(), n: t.n, singular_values: sorted_singular_values(&t.matrix)? })
}

/// Largest singular value: a lower bound for `||C_phi||` on `H^2`.
pub fn op_norm(t: &TruncatedComposition) -> Result<f64> {
    Ok(sorted_singular_values(&t.matrix)?[0])
}

/// `sigma_max(A_phi - A_psi)`, a lower bound for `||C_phi - C_psi||`.
pub fn difference_norm(phi: &Symbol, psi: &Symbol, n: usize, cfg: &TaylorConfig) -> Result<f64> {
    let a = truncate(phi, n, cfg)?;
    let b = truncate(psi, n, cfg)?;
    difference_norm_of(&a, &b)
}

pub fn difference_norm_of(a: &TruncatedComposition, b: &TruncatedComposition) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::InvalidParameter(format!("truncation sizes differ: {} and {}", a.n, b.n)));
    }
    Ok(sorted_singular_values(&(&a.matrix - &b.matrix))?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::PathFamily;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn default_truncation(phi: &Symbol, n: usize) -> TruncatedComposition {
        truncate(phi, n, &TaylorConfig::default()).unwrap()
    }

    fn max_entry_error(t: &TruncatedComposition, expected: impl Fn(usize, usize) -> Complex64) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..t.dimension() {
            for k in 0..t.dimension() {
                worst = worst.max((t.matrix()[(j, k)] - expected(j, k)).norm());
            }
        }
        worst
    }

    #[test]
    fn catalog_truncations_are_exact() {
        let n = 24;
        let zero = default_truncation(&Symbol::zero(), n);
        assert!(max_entry_error(&zero, |j, k| if j == 0 && k == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) }) < 1e-10);
        let id = default_truncation(&Symbol::identity(), n);
        assert!(max_entry_error(&id, |j, k| if j == k { c(1.0, 0.0) } else { c(0.0, 0.0) }) < 1e-10);
        let sq = default_truncation(&Symbol::monomial(2).unwrap(), n);
        assert!(max_entry_error(&sq, |j, k| if j == 2 * k { c(1.0, 0.0) } else { c(0.0, 0.0) }) < 1e-10);
        let w = c(0.3, -0.4);
        let constant = default_truncation(&Symbol::constant(w).unwrap(), n);
        assert!(max_entry_error(&constant, |j, k| if j == 0 { w.powu(k as u32) } else { c(0.0, 0.0) }) < 1e-10);
        assert_eq!(zero.matrix()[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn norms_of_catalog_symbols() {
        let n = 32;
        assert!((op_norm(&default_truncation(&Symbol::identity(), n)).unwrap() - 1.0).abs() < 1e-10);
        assert!((op_norm(&default_truncation(&Symbol::zero(), n)).unwrap() - 1.0).abs() < 1e-12);
        let half = default_truncation(&Symbol::constant(c(0.5, 0.0)).unwrap(), n);
        // rank one: the spectral norm is the Frobenius norm of row 0
        let row: f64 = (0..n).map(|k| 0.25f64.powi(k as i32)).sum();
        assert!((op_norm(&half).unwrap() - row.sqrt()).abs() < 1e-10);
        assert!((op_norm(&half).unwrap() - (4.0f64 / 3.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn spectra_of_catalog_symbols() {
        let zero = singular_values(&default_truncation(&Symbol::zero(), 16)).unwrap();
        assert!((zero.singular_values[0] - 1.0).abs() < 1e-12);
        assert!(zero.singular_values[1..].iter().all(|s| s.abs() < 1e-12));
        let id = singular_values(&default_truncation(&Symbol::identity(), 16)).unwrap();
        assert!(id.singular_values.iter().all(|s| (s - 1.0).abs() < 1e-10));
        for n in [15, 16, 33] {
            let sq = singular_values(&default_truncation(&Symbol::monomial(2).unwrap(), n)).unwrap();
            let ones = sq.singular_values.iter().filter(|s| (*s - 1.0).abs() < 1e-9).count();
            let zeros = sq.singular_values.iter().filter(|s| s.abs() < 1e-9).count();
            assert_eq!(ones, n.div_ceil(2));
            assert_eq!(ones + zeros, n);
        }
    }

    #[test]
    fn difference_norm_examples() {
        let cfg = TaylorConfig::default();
        let z2 = Symbol::monomial(2).unwrap();
        assert_eq!(difference_norm(&z2, &z2, 16, &cfg).unwrap(), 0.0);
        let d = difference_norm(&Symbol::identity(), &z2, 16, &cfg).unwrap();
        assert!(d >= 2f64.sqrt() - 1e-10);
        let a = default_truncation(&z2, 8);
        let b = default_truncation(&z2, 9);
        assert!(difference_norm_of(&a, &b).is_err());
    }

    #[test]
    fn compression_monotonicity() {
        let phi = Symbol::blaschke(vec![c(0.5, 0.2), c(-0.3, 0.0)], 0.3).unwrap();
        let psi = PathFamily::default().path_symbol(0.5).unwrap();
        for sym in [phi, psi] {
            let spectra: Vec<Vec<f64>> = [32, 64, 128]
                .iter()
                .map(|&n| singular_values(&default_truncation(&sym, n)).unwrap().singular_values)
                .collect();
            for w in spectra.windows(2) {
                for (k, (hi, lo)) in w[1].iter().zip(&w[0]).enumerate() {
                    assert!(*hi >= lo - 1e-6, "{} sigma_{k}: {} < {}", sym.name(), hi, lo);
                }
            }
        }
    }

    #[test]
    fn littlewood_ceiling_and_column_bound() {
        let symbols = [
            Symbol::constant(c(0.5, 0.0)).unwrap(),
            Symbol::blaschke(vec![c(0.6, 0.0)], 0.0).unwrap(),
            Symbol::blaschke(vec![c(0.2, 0.7), c(-0.4, -0.1)], 2.0).unwrap(),
            PathFamily::default().path_symbol(1.0).unwrap(),
            PathFamily::default().path_symbol(1.0 / 3.0).unwrap(),
        ];
        for phi in &symbols {
            let t = default_truncation(phi, 64);
            let a = phi.at_zero().norm();
            let ceiling = ((1.0 + a) / (1.0 - a)).sqrt();
            assert!(op_norm(&t).unwrap() <= ceiling + 1e-6, "{}", phi.name());
            for (k, norm) in t.column_norms().into_iter().enumerate() {
                assert!(norm <= 1.0 + 1e-8, "{} column {k}: {norm}", phi.name());
            }
        }
    }

    #[test]
    fn csv_layout() {
        let t = default_truncation(&Symbol::identity(), 2);
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "j,n,re,im");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,0,1e0"));
        let s = singular_values(&t).unwrap().to_csv();
        assert_eq!(s.lines().next(), Some("k,sigma"));
    }
}
