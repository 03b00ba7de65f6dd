//! Gradient-free local minimizers.

/// Every objective evaluation in call order.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub x: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
}

/// `a` beats `b` if strictly lower, or equal and lexicographically smaller.
pub(crate) fn better(a: (&[f64], f64), b: (&[f64], f64)) -> bool {
    if a.1 != b.1 {
        return a.1 < b.1;
    }
    a.0.iter().zip(b.0).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y)
}

/// Coordinate descent with per-coordinate steps halved whenever no single
/// `+-step` move improves the objective. Stops once every step is below `min_step`.
pub fn coordinate_descent<F>(
    mut f: F,
    start: &[f64],
    initial_steps: &[f64],
    min_step: f64,
    max_evals: usize,
    trace: &mut Vec<Evaluation>,
) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut x = start.to_vec();
    let mut fx = f(&x);
    trace.push(Evaluation {
        x: x.clone(),
        value: fx,
    });
    let mut steps = initial_steps.to_vec();
    while steps.iter().any(|&s| s >= min_step) && trace.len() < max_evals {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [-1.0, 1.0] {
                let mut y = x.clone();
                y[i] += dir * steps[i];
                let fy = f(&y);
                trace.push(Evaluation {
                    x: y.clone(),
                    value: fy,
                });
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            steps.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
    Minimum { x, value: fx }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    /// Stop when the simplex spread in both value and position drops below these.
    pub f_tol: f64,
    pub x_tol: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            f_tol: 1e-12,
            x_tol: 1e-9,
            max_evals: 5000,
        }
    }
}

/// Nelder-Mead with the standard coefficients (1, 2, 0.5, 0.5).
pub fn nelder_mead<F>(mut f: F, start: &[f64], opts: &NelderMeadOptions, trace: &mut Vec<Evaluation>) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = start.len();
    let mut eval = |x: Vec<f64>, trace: &mut Vec<Evaluation>| {
        let v = f(&x);
        trace.push(Evaluation { x: x.clone(), value: v });
        (x, v)
    };
    let evals_at_start = trace.len();
    let mut simplex = vec![eval(start.to_vec(), trace)];
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += opts.initial_step;
        simplex.push(eval(v, trace));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (&simplex[0], &simplex[dim]);
        let f_spread = worst.1 - best.1;
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (f_spread <= opts.f_tol && x_spread <= opts.x_tol) || trace.len() - evals_at_start >= opts.max_evals {
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
            .collect();
        let toward = |coef: f64, from: &[f64]| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, w)| c + coef * (w - c)).collect()
        };

        let worst_x = simplex[dim].0.clone();
        let reflected = eval(toward(-1.0, &worst_x), trace);
        if reflected.1 < simplex[0].1 {
            let expanded = eval(toward(-2.0, &worst_x), trace);
            simplex[dim] = if expanded.1 < reflected.1 { expanded } else { reflected };
        } else if reflected.1 < simplex[dim - 1].1 {
            simplex[dim] = reflected;
        } else {
            let contracted = if reflected.1 < simplex[dim].1 {
                eval(toward(-0.5, &worst_x), trace)
            } else {
                eval(toward(0.5, &worst_x), trace)
            };
            if contracted.1 < simplex[dim].1.min(reflected.1) {
                simplex[dim] = contracted;
            } else {
                let best_x = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = best_x.iter().zip(&vertex.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
                    *vertex = eval(shrunk, trace);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value }
}
