//! Derivative-free simplex descent used by the curve fits.
//!
//! Deterministic: the simplex update sequence depends only on the starting
//! point, the per-coordinate scales, and the cost function.

pub(crate) struct Options {
    pub max_evals: usize,
    /// Convergence when the largest coordinate distance between the best
    /// vertex and any other drops below this.
    pub diameter_tol: f64,
}

pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

pub(crate) fn minimize<F>(mut cost: F, x0: &[f64], scale: &[f64], opts: &Options) -> Outcome
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += scale[i];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| cost(v)).collect();
    let mut evals = dim + 1;
    let mut converged = false;

    while evals < opts.max_evals {
        // order best-to-worst; stable sort keeps ties deterministic
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if diameter < opts.diameter_tol {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|c| simplex[..dim].iter().map(|v| v[c]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst)
            .map(|(c, w)| c + (c - w))
            .collect();
        let f_reflect = cost(&reflect);
        evals += 1;

        if f_reflect < values[0] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + 2.0 * (c - w))
                .collect();
            let f_expand = cost(&expand);
            evals += 1;
            if f_expand < f_reflect {
                simplex[dim] = expand;
                values[dim] = f_expand;
            } else {
                simplex[dim] = reflect;
                values[dim] = f_reflect;
            }
        } else if f_reflect < values[dim - 1] {
            simplex[dim] = reflect;
            values[dim] = f_reflect;
        } else {
            let contract: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + 0.5 * (w - c))
                .collect();
            let f_contract = cost(&contract);
            evals += 1;
            if f_contract < values[dim] {
                simplex[dim] = contract;
                values[dim] = f_contract;
            } else {
                // shrink toward the best vertex
                for i in 1..=dim {
                    let shrunk: Vec<f64> = simplex[0]
                        .iter()
                        .zip(&simplex[i])
                        .map(|(b, v)| b + 0.5 * (v - b))
                        .collect();
                    values[i] = cost(&shrunk);
                    simplex[i] = shrunk;
                    evals += 1;
                }
            }
        }
    }

    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    Outcome {
        x: simplex[best].clone(),
        value: values[best],
        converged,
    }
}
