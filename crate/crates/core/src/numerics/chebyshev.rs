//! Chebyshev interpolation on `[-1, 1]`.

/// Chebyshev points of the second kind, `cos(jπ/n)` for `j = 0..=n`.
pub fn lobatto_points(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|j| (std::f64::consts::PI * j as f64 / n as f64).cos())
        .collect()
}

/// A Chebyshev series `Σ c_k T_k(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
}

impl ChebSeries {
    /// Interpolates values sampled at [`lobatto_points`]`(n)`.
    pub fn from_lobatto_values(values: &[f64]) -> Self {
        let n = values.len() - 1;
        assert!(n >= 1);
        let nf = n as f64;
        let coeffs = (0..=n)
            .map(|k| {
                let mut sum = 0.0;
                for (j, &v) in values.iter().enumerate() {
                    let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                    sum += w * v * (std::f64::consts::PI * (j * k) as f64 / nf).cos();
                }
                let scale = if k == 0 || k == n { 1.0 / nf } else { 2.0 / nf };
                scale * sum
            })
            .collect();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, s: f64) -> f64 {
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * s * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        s * b1 - b2 + self.coeffs[0]
    }

    /// Series of the derivative with respect to `s`.
    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self { coeffs: vec![0.0] };
        }
        let mut d = vec![0.0; n];
        // c'_{k-1} = c'_{k+1} + 2k c_k
        for k in (1..n).rev() {
            let next = if k + 1 < n { d[k + 1] } else { 0.0 };
            d[k - 1] = next + 2.0 * k as f64 * self.coeffs[k];
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        Self { coeffs: d }
    }
}
