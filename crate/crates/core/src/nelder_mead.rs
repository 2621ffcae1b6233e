//! Derivative-free Nelder-Mead simplex minimisation.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop once `max f - min f` over the simplex drops below this.
    pub f_tolerance: f64,
    pub max_evaluations: usize,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            f_tolerance: 1e-10,
            max_evaluations: 2000,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    /// False when the evaluation budget ran out first.
    pub converged: bool,
}

/// Minimises `f` from `start`. The start point is a vertex of the initial
/// simplex, so the returned value never exceeds `f(start)`.
pub fn minimize<F>(mut f: F, start: &[f64], config: &NelderMeadConfig) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = start.len();
    assert!(dim > 0);
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), eval(start, &mut evaluations)));
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += config.initial_step;
        let fx = eval(&x, &mut evaluations);
        simplex.push((x, fx));
    }

    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[dim].1 - simplex[0].1;
        if spread < config.f_tolerance {
            converged = true;
            break;
        }
        if evaluations >= config.max_evaluations {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / dim as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };

        let reflected = along(-config.reflection);
        let f_reflected = eval(&reflected, &mut evaluations);

        if f_reflected < simplex[0].1 {
            let expanded = along(-config.reflection * config.expansion);
            let f_expanded = eval(&expanded, &mut evaluations);
            simplex[dim] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < simplex[dim - 1].1 {
            simplex[dim] = (reflected, f_reflected);
            continue;
        }

        // contraction, outside if the reflection beat the worst point
        let (contracted, f_contracted) = if f_reflected < simplex[dim].1 {
            let x = along(-config.reflection * config.contraction);
            let fx = eval(&x, &mut evaluations);
            (x, fx)
        } else {
            let x = along(config.contraction);
            let fx = eval(&x, &mut evaluations);
            (x, fx)
        };
        if f_contracted < simplex[dim].1.min(f_reflected) {
            simplex[dim] = (contracted, f_contracted);
            continue;
        }

        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + config.shrink * (v - b))
                .collect();
            let fx = eval(&x, &mut evaluations);
            *vertex = (x, fx);
        }
    }

    let (x, f) = simplex.swap_remove(0);
    Minimum {
        x,
        f,
        evaluations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let m = minimize(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &NelderMeadConfig::default(),
        );
        assert!(m.converged);
        assert!(
            (m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] + 2.0).abs() < 1e-4,
            "{:?}",
            m.x
        );
        assert!(m.f < 1e-9);
    }

    #[test]
    fn rosenbrock() {
        let config = NelderMeadConfig {
            max_evaluations: 20_000,
            f_tolerance: 1e-14,
            ..Default::default()
        };
        let m = minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            &config,
        );
        assert!(
            (m.x[0] - 1.0).abs() < 1e-3 && (m.x[1] - 1.0).abs() < 1e-3,
            "{:?}",
            m
        );
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| (3.0 * x[0]).sin() + x[1].cos() * x[2];
        let start = [0.4, -1.0, 2.0];
        let m = minimize(f, &start, &NelderMeadConfig::default());
        assert!(m.f <= f(&start));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let config = NelderMeadConfig {
            max_evaluations: 10,
            ..Default::default()
        };
        let m = minimize(|x| x[0].powi(2) + x[1].powi(2), &[5.0, 5.0], &config);
        assert!(!m.converged);
        assert!(m.evaluations >= 10);
    }
}
