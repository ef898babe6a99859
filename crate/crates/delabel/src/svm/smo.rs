//! Sequential minimal optimization for the binary soft-margin dual.
//!
//! Classic Platt-style solver: pick a KKT-violating multiplier, pair it via
//! the max-|E1 - E2| heuristic with fallback sweeps, and solve the
//! two-variable subproblem analytically. The error cache is refreshed from
//! the support vectors at every examine-all pass, and the fallback sweeps
//! rotate from a deterministic counter instead of a random start, so the
//! solver has no RNG anywhere.
//!
//! Conventions: decision function `f(x) = sum_i alpha_i y_i K(x_i, x) + b`,
//! error `E_i = f(x_i) - y_i`. Termination: a full examine-all pass with no
//! updates means every point satisfies its KKT condition within the
//! tolerance.

use crate::matrix::Matrix;

pub(crate) struct SmoProblem<'a> {
    pub features: &'a Matrix,
    /// Targets in {-1.0, +1.0}, one per feature row.
    pub targets: &'a [f64],
    pub c: f64,
    pub gamma: f64,
    pub tolerance: f64,
    pub max_passes: usize,
}

pub(crate) struct SmoSolution {
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub converged: bool,
    pub passes: usize,
}

/// Precompute the full kernel matrix up to this many samples; larger
/// problems evaluate kernel entries on demand.
const KERNEL_CACHE_LIMIT: usize = 4096;

/// Two-variable subproblem step threshold and box-snapping tolerance.
const EPS: f64 = 1e-12;

pub(crate) fn rbf(u: &[f64], v: &[f64], gamma: f64) -> f64 {
    let mut dist2 = 0.0;
    for (a, b) in u.iter().zip(v) {
        let d = a - b;
        dist2 += d * d;
    }
    (-gamma * dist2).exp()
}

struct Solver<'a> {
    problem: &'a SmoProblem<'a>,
    m: usize,
    alphas: Vec<f64>,
    bias: f64,
    errors: Vec<f64>,
    kernel_cache: Option<Vec<f64>>,
    rotation: usize,
}

impl<'a> Solver<'a> {
    fn new(problem: &'a SmoProblem<'a>) -> Self {
        let m = problem.targets.len();
        let kernel_cache = (m <= KERNEL_CACHE_LIMIT).then(|| {
            let mut cache = vec![0.0; m * m];
            for i in 0..m {
                for j in i..m {
                    let k = rbf(problem.features.row(i), problem.features.row(j), problem.gamma);
                    cache[i * m + j] = k;
                    cache[j * m + i] = k;
                }
            }
            cache
        });
        // alphas start at zero, so f = b = 0 and E_i = -y_i exactly.
        let errors = problem.targets.iter().map(|&y| -y).collect();
        Solver {
            problem,
            m,
            alphas: vec![0.0; m],
            bias: 0.0,
            errors,
            kernel_cache,
            rotation: 0,
        }
    }

    #[inline]
    fn kernel(&self, i: usize, j: usize) -> f64 {
        match &self.kernel_cache {
            Some(cache) => cache[i * self.m + j],
            None => rbf(
                self.problem.features.row(i),
                self.problem.features.row(j),
                self.problem.gamma,
            ),
        }
    }

    fn is_non_bound(&self, i: usize) -> bool {
        self.alphas[i] > 0.0 && self.alphas[i] < self.problem.c
    }

    /// Recompute the error cache from scratch via the current support
    /// vectors. Bounds float drift accumulated by incremental updates.
    fn refresh_errors(&mut self) {
        let support: Vec<usize> = (0..self.m).filter(|&j| self.alphas[j] > 0.0).collect();
        for i in 0..self.m {
            let mut f = self.bias;
            for &j in &support {
                f += self.alphas[j] * self.problem.targets[j] * self.kernel(j, i);
            }
            self.errors[i] = f - self.problem.targets[i];
        }
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let c = self.problem.c;
        let y1 = self.problem.targets[i1];
        let y2 = self.problem.targets[i2];
        let alph1 = self.alphas[i1];
        let alph2 = self.alphas[i2];
        let e1 = self.errors[i1];
        let e2 = self.errors[i2];
        let s = y1 * y2;

        let (lo, hi) = if (y1 - y2).abs() > f64::EPSILON {
            ((alph2 - alph1).max(0.0), (c + alph2 - alph1).min(c))
        } else {
            ((alph1 + alph2 - c).max(0.0), (alph1 + alph2).min(c))
        };
        if lo >= hi {
            return false;
        }

        let k11 = self.kernel(i1, i1);
        let k12 = self.kernel(i1, i2);
        let k22 = self.kernel(i2, i2);
        let eta = k11 + k22 - 2.0 * k12;

        let mut a2 = if eta > 0.0 {
            (alph2 + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            // Degenerate curvature: evaluate the restricted dual objective
            // at both ends of the feasible segment and take the smaller.
            let g1 = y1 * (e1 - self.bias) - alph1 * k11 - s * alph2 * k12;
            let g2 = y2 * (e2 - self.bias) - s * alph1 * k12 - alph2 * k22;
            let l1 = alph1 + s * (alph2 - lo);
            let h1 = alph1 + s * (alph2 - hi);
            let obj_lo = l1 * g1 + lo * g2
                + 0.5 * l1 * l1 * k11
                + 0.5 * lo * lo * k22
                + s * lo * l1 * k12;
            let obj_hi = h1 * g1 + hi * g2
                + 0.5 * h1 * h1 * k11
                + 0.5 * hi * hi * k22
                + s * hi * h1 * k12;
            if obj_lo < obj_hi - EPS {
                lo
            } else if obj_lo > obj_hi + EPS {
                hi
            } else {
                return false;
            }
        };

        if (a2 - alph2).abs() < EPS * (a2 + alph2 + EPS) {
            return false;
        }
        let mut a1 = alph1 + s * (alph2 - a2);

        // Snap to the box so 0 <= alpha <= C holds exactly.
        let snap = EPS * c;
        if a1 < snap {
            a1 = 0.0;
        } else if a1 > c - snap {
            a1 = c;
        }
        if a2 < snap {
            a2 = 0.0;
        } else if a2 > c - snap {
            a2 = c;
        }

        let d1 = a1 - alph1;
        let d2 = a2 - alph2;
        let b1 = self.bias - e1 - y1 * d1 * k11 - y2 * d2 * k12;
        let b2 = self.bias - e2 - y1 * d1 * k12 - y2 * d2 * k22;
        let new_bias = if a1 > 0.0 && a1 < c {
            b1
        } else if a2 > 0.0 && a2 < c {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        let db = new_bias - self.bias;

        for k in 0..self.m {
            self.errors[k] += y1 * d1 * self.kernel(i1, k) + y2 * d2 * self.kernel(i2, k) + db;
        }
        self.alphas[i1] = a1;
        self.alphas[i2] = a2;
        self.bias = new_bias;
        true
    }

    fn examine(&mut self, i2: usize) -> bool {
        let y2 = self.problem.targets[i2];
        let alph2 = self.alphas[i2];
        let e2 = self.errors[i2];
        let r2 = e2 * y2;
        let tol = self.problem.tolerance;
        let violates = (r2 < -tol && alph2 < self.problem.c) || (r2 > tol && alph2 > 0.0);
        if !violates {
            return false;
        }

        // Heuristic 1: the non-bound partner with the largest |E1 - E2|.
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m {
            if self.is_non_bound(i) {
                let gap = (self.errors[i] - e2).abs();
                if best.is_none_or(|(_, g)| gap > g) {
                    best = Some((i, gap));
                }
            }
        }
        if let Some((i1, _)) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }

        // Heuristic 2: sweep the non-bound points from a rotating offset.
        self.rotation = (self.rotation + 1) % self.m;
        for offset in 0..self.m {
            let i1 = (self.rotation + offset) % self.m;
            if self.is_non_bound(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        // Heuristic 3: sweep everything.
        for offset in 0..self.m {
            let i1 = (self.rotation + offset) % self.m;
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn solve(mut self) -> SmoSolution {
        let mut examine_all = true;
        let mut passes = 0usize;
        let mut converged = false;
        while passes < self.problem.max_passes {
            passes += 1;
            let mut changed = 0usize;
            if examine_all {
                self.refresh_errors();
                for i in 0..self.m {
                    changed += usize::from(self.examine(i));
                }
                if changed == 0 {
                    converged = true;
                    break;
                }
                examine_all = false;
            } else {
                for i in 0..self.m {
                    if self.is_non_bound(i) {
                        changed += usize::from(self.examine(i));
                    }
                }
                if changed == 0 {
                    examine_all = true;
                }
            }
        }
        SmoSolution {
            alphas: self.alphas,
            bias: self.bias,
            converged,
            passes,
        }
    }
}

pub(crate) fn solve(problem: &SmoProblem) -> SmoSolution {
    Solver::new(problem).solve()
}
