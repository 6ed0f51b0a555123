//! Second eigenpair of the lazy normalised walk operator
//! `M = (I + D^{-1/2} A D^{-1/2}) / 2`.
//!
//! Small graphs use a dense symmetric eigensolver. Larger ones use
//! thick-restart Lanczos with full reorthogonalisation, deflating the top
//! eigenvector `sqrt(d)` (eigenvalue 1).

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::SimpleGraphView;

/// Graphs up to this size are solved densely.
pub const DENSE_LIMIT: u32 = 400;
const BASIS: usize = 48;
const KEEP: usize = 16;
const MAX_RESTARTS: usize = 2000;
/// Converged when `||M y - θ y|| <= TOLERANCE * θ`.
pub const TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    /// Unit vector indexed by `vertex - 1`.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

struct LazyOperator<'a> {
    g: &'a SimpleGraphView,
    inv_sqrt_deg: Vec<f64>,
    /// Unit top eigenvector `sqrt(d) / ||sqrt(d)||`.
    top: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'a> LazyOperator<'a> {
    fn new(g: &'a SimpleGraphView) -> Self {
        let n = g.n() as usize;
        let sqrt_deg: Vec<f64> = (1..=g.n()).map(|v| (g.degree(v) as f64).sqrt()).collect();
        let norm = sqrt_deg.iter().map(|x| x * x).sum::<f64>().sqrt();
        LazyOperator {
            g,
            inv_sqrt_deg: sqrt_deg.iter().map(|s| 1.0 / s).collect(),
            top: sqrt_deg.iter().map(|s| s / norm).collect(),
            scratch: vec![0.0; n],
        }
    }

    fn apply(&mut self, x: &[f64], out: &mut [f64]) {
        for (i, s) in self.scratch.iter_mut().enumerate() {
            *s = x[i] * self.inv_sqrt_deg[i];
        }
        for v in 1..=self.g.n() {
            let i = v as usize - 1;
            let sum: f64 = self.g.neighbors(v).iter().map(|&w| self.scratch[w as usize - 1]).sum();
            out[i] = 0.5 * (x[i] + sum * self.inv_sqrt_deg[i]);
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

fn start_vector(n: usize) -> Vec<f64> {
    let golden = 0.618_033_988_749_894_9;
    (0..n).map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * golden).fract()).collect()
}

fn check_graph(g: &SimpleGraphView) -> Result<()> {
    if g.n() < 3 {
        return Err(Error::SizeOutOfRange { n: g.n(), min: 3, max: u32::MAX });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Dense eigen-decomposition of `M`.
pub fn second_eigenpair_dense(g: &SimpleGraphView) -> Result<Eigenpair> {
    check_graph(g)?;
    let n = g.n() as usize;
    let op = LazyOperator::new(g);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for v in 1..=g.n() {
        let i = v as usize - 1;
        m[(i, i)] = 0.5;
        for &w in g.neighbors(v) {
            let j = w as usize - 1;
            m[(i, j)] = 0.5 * op.inv_sqrt_deg[i] * op.inv_sqrt_deg[j];
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    // The top eigenvalue is 1 with eigenvector sqrt(d); take the next one.
    let idx = order[1];
    let mut vector: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
    let proj = dot(&vector, &op.top);
    axpy(-proj, &op.top, &mut vector);
    normalize(&mut vector);
    Ok(Eigenpair { value: eig.eigenvalues[idx], vector, iterations: 0 })
}

/// Thick-restart Lanczos for the second eigenpair of `M`.
pub fn second_eigenpair_lanczos(g: &SimpleGraphView) -> Result<Eigenpair> {
    check_graph(g)?;
    let n = g.n() as usize;
    let mut op = LazyOperator::new(g);
    let dim = n - 1;
    let basis_cap = BASIS.min(dim);
    let keep = KEEP.min(basis_cap.saturating_sub(2)).max(1);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(basis_cap + 1);
    let mut v0 = start_vector(n);
    let top = op.top.clone();
    axpy(-dot(&v0, &top), &top, &mut v0);
    normalize(&mut v0);
    basis.push(v0);
    // Upper triangle of the projected matrix; h[i][j] = v_i' M v_j for i <= j.
    let mut h = vec![vec![0.0f64; basis_cap + 1]; basis_cap + 1];
    let mut w = vec![0.0; n];
    let mut next_col = 0usize;
    let mut last_residual = f64::INFINITY;

    for restart in 0..MAX_RESTARTS {
        let mut invariant = false;
        let mut tail = None;
        while next_col < basis.len() {
            let j = next_col;
            op.apply(&basis[j], &mut w);
            // Full reorthogonalisation, twice, against the basis and the top vector.
            for _ in 0..2 {
                let c = dot(&w, &top);
                axpy(-c, &top, &mut w);
                for (i, b) in basis.iter().enumerate() {
                    let c = dot(&w, b);
                    h[i][j] += c;
                    axpy(-c, b, &mut w);
                }
            }
            next_col += 1;
            let beta = normalize(&mut w);
            if beta <= 1e-13 {
                invariant = true;
                break;
            }
            if basis.len() == basis_cap {
                tail = Some(w.clone());
                break;
            }
            basis.push(w.clone());
        }

        let m = next_col;
        let mut proj = DMatrix::<f64>::zeros(m, m);
        for j in 0..m {
            for i in 0..=j {
                proj[(i, j)] = h[i][j];
                proj[(j, i)] = h[i][j];
            }
        }
        let eig = SymmetricEigen::new(proj);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let ritz = |col: usize| -> Vec<f64> {
            let mut y = vec![0.0; n];
            for (i, b) in basis.iter().take(m).enumerate() {
                axpy(eig.eigenvectors[(i, col)], b, &mut y);
            }
            y
        };
        let theta = eig.eigenvalues[order[0]];
        let mut y = ritz(order[0]);
        normalize(&mut y);
        op.apply(&y, &mut w);
        axpy(-theta, &y, &mut w);
        last_residual = dot(&w, &w).sqrt();
        if last_residual <= TOLERANCE * theta.abs().max(f64::MIN_POSITIVE) || invariant || m >= dim {
            return Ok(Eigenpair { value: theta, vector: y, iterations: restart + 1 });
        }

        // Restart: keep the leading Ritz vectors plus the newest basis vector.
        let kept = keep.min(m - 1);
        let mut new_basis: Vec<Vec<f64>> = order[..kept].iter().map(|&c| ritz(c)).collect();
        for b in new_basis.iter_mut() {
            normalize(b);
        }
        let Some(mut tail) = tail else {
            return Ok(Eigenpair { value: theta, vector: y, iterations: restart + 1 });
        };
        for _ in 0..2 {
            for b in &new_basis {
                let c = dot(&tail, b);
                axpy(-c, b, &mut tail);
            }
        }
        normalize(&mut tail);
        for row in h.iter_mut() {
            row.iter_mut().for_each(|x| *x = 0.0);
        }
        for (i, &c) in order[..kept].iter().enumerate() {
            h[i][i] = eig.eigenvalues[c];
        }
        new_basis.push(tail);
        basis = new_basis;
        next_col = kept;
    }
    Err(Error::NonConvergence { iterations: MAX_RESTARTS, residual: last_residual })
}

/// Dense below [`DENSE_LIMIT`] vertices, Lanczos above.
pub fn second_eigenpair(g: &SimpleGraphView) -> Result<Eigenpair> {
    if g.n() <= DENSE_LIMIT {
        second_eigenpair_dense(g)
    } else {
        second_eigenpair_lanczos(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{families, AttachmentGraph};

    #[test]
    fn cycle_eigenvalue() {
        // Lazy C_n: (1 + cos(2π/n)) / 2.
        for n in [5u32, 8, 13] {
            let e = second_eigenpair_dense(&families::cycle(n)).unwrap();
            let expect = 0.5 * (1.0 + (2.0 * std::f64::consts::PI / n as f64).cos());
            assert!((e.value - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn complete_graph_eigenvalue() {
        // Normalised adjacency of K_n has -1/(n-1) with multiplicity n-1.
        let e = second_eigenpair_dense(&families::complete(6)).unwrap();
        assert!((e.value - 0.5 * (1.0 - 0.2)).abs() < 1e-12);
    }

    #[test]
    fn lanczos_matches_dense() {
        for (n, k, seed) in [(300u32, 3u32, 1u64), (250, 2, 2), (120, 4, 3)] {
            let g = AttachmentGraph::generate(n, k, seed).unwrap();
            let sv = g.simple_view();
            let dense = second_eigenpair_dense(sv).unwrap();
            let lanczos = second_eigenpair_lanczos(sv).unwrap();
            assert!((dense.value - lanczos.value).abs() < 1e-8, "{} vs {}", dense.value, lanczos.value);
            let overlap = dot(&dense.vector, &lanczos.vector).abs();
            assert!(overlap > 1.0 - 1e-5, "overlap {overlap}");
        }
    }

    #[test]
    fn lanczos_on_small_graphs() {
        let e = second_eigenpair_lanczos(&families::cycle(9)).unwrap();
        let expect = 0.5 * (1.0 + (2.0 * std::f64::consts::PI / 9.0).cos());
        assert!((e.value - expect).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(second_eigenpair(&families::matching(3)).unwrap_err(), Error::Disconnected);
        assert!(matches!(second_eigenpair(&families::path(2)), Err(Error::SizeOutOfRange { .. })));
    }
}
