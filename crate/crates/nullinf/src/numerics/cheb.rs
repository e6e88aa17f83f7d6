//! Chebyshev–Gauss–Lobatto collocation on an interval.

use nalgebra::DMatrix;
use std::f64::consts::PI;

/// Nodes `s_j = mid + half cos(pi j / N)`, `j = 0..=N`, in decreasing order,
/// with the first-derivative matrix and Clenshaw–Curtis weights.
#[derive(Clone, Debug)]
pub struct Chebyshev {
    pub nodes: Vec<f64>,
    pub d1: DMatrix<f64>,
    pub weights: Vec<f64>,
}

impl Chebyshev {
    pub fn new(n: usize, a: f64, b: f64) -> Self {
        assert!(n >= 2 && b > a);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let z: Vec<f64> = (0..=n).map(|j| (PI * j as f64 / n as f64).cos()).collect();
        let c = |j: usize| if j == 0 || j == n { 2.0 } else { 1.0 };
        let sgn = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut d = DMatrix::<f64>::zeros(n + 1, n + 1);
        for i in 0..=n {
            for j in 0..=n {
                if i != j {
                    d[(i, j)] = c(i) / c(j) * sgn(i + j) / (z[i] - z[j]);
                }
            }
        }
        // negative-sum trick for the diagonal
        for i in 0..=n {
            let s: f64 = (0..=n).filter(|&j| j != i).map(|j| d[(i, j)]).sum();
            d[(i, i)] = -s;
        }
        d /= half;
        let weights = clenshaw_curtis(n).into_iter().map(|w| w * half).collect();
        Self { nodes: z.iter().map(|z| mid + half * z).collect(), d1: d, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Clenshaw–Curtis weights on `[-1, 1]` for the nodes `cos(pi j / n)`.
pub fn clenshaw_curtis(n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    let nf = n as f64;
    for (j, wj) in w.iter_mut().enumerate() {
        let theta = PI * j as f64 / nf;
        let mut s = 0.0;
        for k in 1..=n / 2 {
            let b = if 2 * k == n { 1.0 } else { 2.0 };
            s += b / (4.0 * (k * k) as f64 - 1.0) * (2.0 * k as f64 * theta).cos();
        }
        let c = if j == 0 || j == n { 1.0 } else { 2.0 };
        *wj = c / nf * (1.0 - s);
    }
    w
}
