//! Nelder-Mead simplex minimizer.
//!
//! Coefficients are the textbook ones (reflection 1, expansion 2, contraction
//! 0.5, shrink 0.5) and the step order follows the common SciPy variant:
//! greedy expansion, outside/inside contraction, then shrink toward the best
//! vertex. Termination requires both the simplex diameter (max-norm distance
//! to the best vertex) and the spread of function values to fall below their
//! tolerances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub x_tolerance: f64,
    pub f_tolerance: f64,
    /// Evaluation budget; `None` means `200 · dimension`.
    pub max_evaluations: Option<usize>,
    /// Absolute step added to each coordinate of `x0` to build the simplex.
    pub initial_simplex_scale: f64,
    /// Rebuild the simplex around the optimum and run once more.
    pub restart: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            x_tolerance: 1e-4,
            f_tolerance: 1e-4,
            max_evaluations: None,
            initial_simplex_scale: 0.05,
            restart: false,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.x_tolerance)
            && positive(self.f_tolerance)
            && positive(self.initial_simplex_scale))
            || self.max_evaluations == Some(0)
        {
            return Err(Error::Configuration(format!(
                "optimizer settings must be positive: {self:?}"
            )));
        }
        Ok(())
    }

    pub fn budget(&self, dimension: usize) -> usize {
        self.max_evaluations.unwrap_or(200 * dimension.max(1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
    /// Best simplex value after each iteration.
    pub best_history: Vec<f64>,
}

struct Counted<F> {
    objective: F,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        let v = (self.objective)(x);
        if !v.is_finite() {
            return Err(Error::Optimizer(format!("objective returned {v} at {x:?}")));
        }
        Ok(v)
    }
}

pub fn minimize<F>(objective: F, x0: &[f64], config: &OptimizerConfig) -> Result<OptimizationResult>
where
    F: FnMut(&[f64]) -> f64,
{
    config.validate()?;
    let mut f = Counted {
        objective,
        evaluations: 0,
    };
    let budget = config.budget(x0.len());
    let mut result = run_simplex(&mut f, x0, config, budget)?;
    if config.restart && f.evaluations < budget {
        let start = result.best_params.clone();
        let mut second = run_simplex(&mut f, &start, config, budget)?;
        if second.best_value <= result.best_value {
            let mut history = std::mem::take(&mut result.best_history);
            history.append(&mut second.best_history);
            second.best_history = history;
            second.iterations += result.iterations;
            result = second;
        }
    }
    result.evaluations = f.evaluations;
    Ok(result)
}

fn run_simplex<F>(
    f: &mut Counted<F>,
    x0: &[f64],
    config: &OptimizerConfig,
    budget: usize,
) -> Result<OptimizationResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    if dim == 0 {
        let v = f.eval(x0)?;
        return Ok(OptimizationResult {
            best_params: vec![],
            best_value: v,
            evaluations: 0,
            iterations: 0,
            converged: true,
            best_history: vec![v],
        });
    }

    let mut sim: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    sim.push(x0.to_vec());
    for k in 0..dim {
        let mut y = x0.to_vec();
        y[k] += config.initial_simplex_scale;
        sim.push(y);
    }
    let mut fsim = Vec::with_capacity(dim + 1);
    for x in &sim {
        fsim.push(f.eval(x)?);
    }
    sort_simplex(&mut sim, &mut fsim);

    let mut iterations = 0;
    let mut converged = false;
    let mut best_history = Vec::new();
    let mut xbar = vec![0.0; dim];

    while f.evaluations < budget {
        let x_spread = sim[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&sim[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let f_spread = fsim[1..]
            .iter()
            .map(|v| (v - fsim[0]).abs())
            .fold(0.0, f64::max);
        if x_spread <= config.x_tolerance && f_spread <= config.f_tolerance {
            converged = true;
            break;
        }

        xbar.iter_mut().for_each(|c| *c = 0.0);
        for v in &sim[..dim] {
            for (c, x) in xbar.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }
        let worst = sim[dim].clone();
        let along = |t: f64| -> Vec<f64> {
            xbar.iter()
                .zip(&worst)
                .map(|(c, w)| (1.0 + t) * c - t * w)
                .collect()
        };

        let xr = along(REFLECTION);
        let fxr = f.eval(&xr)?;
        let mut shrink = false;
        if fxr < fsim[0] {
            let xe = along(REFLECTION * EXPANSION);
            let fxe = f.eval(&xe)?;
            if fxe < fxr {
                sim[dim] = xe;
                fsim[dim] = fxe;
            } else {
                sim[dim] = xr;
                fsim[dim] = fxr;
            }
        } else if fxr < fsim[dim - 1] {
            sim[dim] = xr;
            fsim[dim] = fxr;
        } else if fxr < fsim[dim] {
            let xc = along(CONTRACTION * REFLECTION);
            let fxc = f.eval(&xc)?;
            if fxc <= fxr {
                sim[dim] = xc;
                fsim[dim] = fxc;
            } else {
                shrink = true;
            }
        } else {
            let xcc = along(-CONTRACTION);
            let fxcc = f.eval(&xcc)?;
            if fxcc < fsim[dim] {
                sim[dim] = xcc;
                fsim[dim] = fxcc;
            } else {
                shrink = true;
            }
        }
        if shrink {
            let best = sim[0].clone();
            for j in 1..=dim {
                for (x, b) in sim[j].iter_mut().zip(&best) {
                    *x = b + SHRINK * (*x - b);
                }
                fsim[j] = f.eval(&sim[j])?;
            }
        }
        iterations += 1;
        sort_simplex(&mut sim, &mut fsim);
        best_history.push(fsim[0]);
    }

    Ok(OptimizationResult {
        best_params: sim.swap_remove(0),
        best_value: fsim[0],
        evaluations: 0,
        iterations,
        converged,
        best_history,
    })
}

/// Stable sort of vertices by function value.
fn sort_simplex(sim: &mut Vec<Vec<f64>>, fsim: &mut Vec<f64>) {
    let mut order: Vec<usize> = (0..fsim.len()).collect();
    order.sort_by(|&a, &b| fsim[a].total_cmp(&fsim[b]));
    let new_sim = order.iter().map(|&i| std::mem::take(&mut sim[i])).collect();
    let new_f = order.iter().map(|&i| fsim[i]).collect();
    *sim = new_sim;
    *fsim = new_f;
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadratic_1d() {
        let r = minimize(
            |x| (x[0] - 2.0).powi(2),
            &[0.0],
            &OptimizerConfig::default(),
        )
        .unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.best_params[0], 2.0, epsilon = 1e-4);
    }

    #[test]
    fn rosenbrock_2d() {
        let rosen = |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2);
        let cfg = OptimizerConfig {
            x_tolerance: 1e-8,
            f_tolerance: 1e-10,
            max_evaluations: Some(5000),
            ..Default::default()
        };
        let r = minimize(rosen, &[-1.2, 1.0], &cfg).unwrap();
        assert_abs_diff_eq!(r.best_params[0], 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(r.best_params[1], 1.0, epsilon = 1e-3);
    }

    #[test]
    fn constant_objective_stays_at_start() {
        let x0 = [0.3, -1.0, 2.0];
        let r = minimize(|_| 4.0, &x0, &OptimizerConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.best_params, x0);
        assert_eq!(r.best_value, 4.0);
        assert!(r.evaluations < 100, "{}", r.evaluations);
    }

    #[test]
    fn non_finite_objective_aborts() {
        let r = minimize(
            |x| if x[0] > 0.01 { f64::NAN } else { x[0] },
            &[0.0],
            &OptimizerConfig::default(),
        );
        assert!(matches!(r, Err(Error::Optimizer(_))));
    }

    #[test]
    fn budget_is_respected() {
        let cfg = OptimizerConfig {
            max_evaluations: Some(40),
            x_tolerance: 1e-14,
            f_tolerance: 1e-14,
            ..Default::default()
        };
        let r = minimize(
            |x| x.iter().map(|v| (v - 3.0).powi(2)).sum(),
            &[0.0; 4],
            &cfg,
        )
        .unwrap();
        assert!(!r.converged);
        // a shrink step on the last iteration may overshoot by at most dim + 1
        assert!(r.evaluations <= 40 + 5);
    }

    #[test]
    fn zero_dimension() {
        let r = minimize(|_| 1.5, &[], &OptimizerConfig::default()).unwrap();
        assert_eq!(r.best_value, 1.5);
        assert!(r.converged);
    }

    #[test]
    fn restart_never_worsens() {
        let f =
            |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 0.5).powi(2) + (x[2] * x[0]).powi(2);
        let base = minimize(f, &[0.0; 3], &OptimizerConfig::default()).unwrap();
        let cfg = OptimizerConfig {
            restart: true,
            ..Default::default()
        };
        let again = minimize(f, &[0.0; 3], &cfg).unwrap();
        assert!(again.best_value <= base.best_value);
    }

    #[test]
    fn invalid_config() {
        let cfg = OptimizerConfig {
            x_tolerance: 0.0,
            ..Default::default()
        };
        assert!(minimize(|x| x[0], &[0.0], &cfg).is_err());
    }
}
