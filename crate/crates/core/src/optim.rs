//! Local optimizers: golden-section search for convex functions of one
//! variable, Nelder–Mead, and limited-memory BFGS.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes a convex function on the whole real line.
///
/// Starts from `t0` with initial step `step`, expands until the minimum is
/// bracketed, then runs golden-section search down to a relative width of
/// about `1e-13`. Returns `(argmin, min)`.
pub fn minimize_convex_1d(f: impl Fn(f64) -> f64, t0: f64, step: f64) -> (f64, f64) {
    let step = if step > 0.0 { step } else { 1.0 };
    let fb = f(t0);
    let (mut a, mut c) = (t0 - step, t0 + step);
    let (mut fa, mut fc) = (f(a), f(c));
    let (mut b, mut fbv) = (t0, fb);
    let mut width = step;
    for _ in 0..200 {
        if fa >= fbv && fc >= fbv {
            break;
        }
        if fa < fc {
            // move left
            c = b;
            fc = fbv;
            b = a;
            fbv = fa;
            width *= 2.0;
            a = b - width;
            fa = f(a);
        } else {
            a = b;
            fa = fbv;
            b = c;
            fbv = fc;
            width *= 2.0;
            c = b + width;
            fc = f(c);
        }
    }
    let _ = (fa, fc);
    let mut x1 = c - INV_PHI * (c - a);
    let mut x2 = a + INV_PHI * (c - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..300 {
        if (c - a).abs() <= 1e-13 * (1.0 + b.abs().max(a.abs()).max(c.abs())) {
            break;
        }
        if f1 <= f2 {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - INV_PHI * (c - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (c - a);
            f2 = f(x2);
        }
    }
    let mut best = (b, fbv);
    for cand in [(x1, f1), (x2, f2)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Result of a multidimensional local search.
#[derive(Clone, Debug)]
pub struct LocalMin {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder–Mead simplex search with the standard coefficients.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_evals: usize,
    ftol: f64,
) -> LocalMin {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        simplex.push(x);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| sanitize(f(x))).collect();
    let mut evals = n + 1;
    let mut converged = false;
    while evals < max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let spread = values[n] - values[0];
        if spread.abs() <= ftol * (1.0 + values[0].abs()) {
            converged = true;
            break;
        }
        let mut centroid = vec![0.0; n];
        for x in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (w - c)).collect()
        };
        let xr = along(-1.0);
        let fr = sanitize(f(&xr));
        evals += 1;
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = sanitize(f(&xe));
            evals += 1;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
        } else {
            let (xc, fc) = if fr < values[n] {
                let xc = along(-0.5);
                let fc = sanitize(f(&xc));
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = sanitize(f(&xc));
                (xc, fc)
            };
            evals += 1;
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                let best = simplex[0].clone();
                for i in 1..=n {
                    simplex[i] = best.iter().zip(&simplex[i]).map(|(b, x)| b + 0.5 * (x - b)).collect();
                    values[i] = sanitize(f(&simplex[i]));
                }
                evals += n;
            }
        }
    }
    let best = (0..=n).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap_or(0);
    LocalMin { x: simplex[best].clone(), value: values[best], evaluations: evals, converged }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Limited-memory BFGS with Armijo backtracking.
///
/// `fg` returns the value and the gradient. Works on nonsmooth objectives in
/// the sense that it stops cleanly when line search fails repeatedly.
pub fn lbfgs(
    fg: impl Fn(&[f64]) -> (f64, Vec<f64>),
    x0: &[f64],
    max_iters: usize,
    gtol: f64,
    mut trace: Option<&mut Vec<f64>>,
) -> LocalMin {
    const MEMORY: usize = 8;
    let mut x = x0.to_vec();
    let (mut fx, mut g) = fg(&x);
    let mut evals = 1;
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut converged = false;
    let mut failures = 0;
    for _ in 0..max_iters {
        if let Some(t) = trace.as_deref_mut() {
            t.push(fx);
        }
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm <= gtol * (1.0 + fx.abs()) {
            converged = true;
            break;
        }
        // two-loop recursion
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let k = s_hist.len();
        let mut alpha = vec![0.0; k];
        for i in (0..k).rev() {
            let rho = 1.0 / dotv(&y_hist[i], &s_hist[i]);
            alpha[i] = rho * dotv(&s_hist[i], &d);
            for (dj, yj) in d.iter_mut().zip(&y_hist[i]) {
                *dj -= alpha[i] * yj;
            }
        }
        if k > 0 {
            let gamma = dotv(&s_hist[k - 1], &y_hist[k - 1]) / dotv(&y_hist[k - 1], &y_hist[k - 1]);
            for dj in d.iter_mut() {
                *dj *= gamma;
            }
        }
        for i in 0..k {
            let rho = 1.0 / dotv(&y_hist[i], &s_hist[i]);
            let beta = rho * dotv(&y_hist[i], &d);
            for (dj, sj) in d.iter_mut().zip(&s_hist[i]) {
                *dj += (alpha[i] - beta) * sj;
            }
        }
        let mut slope = dotv(&g, &d);
        if slope >= 0.0 {
            d = g.iter().map(|v| -v).collect();
            slope = -gnorm * gnorm;
            s_hist.clear();
            y_hist.clear();
        }
        let mut step = if k == 0 { 1.0 / gnorm.max(1e-300) * (1.0 + norm_inf(&x)) * 1e-2 } else { 1.0 };
        let mut accepted = None;
        for _ in 0..40 {
            let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            let (fnew, gnew) = fg(&xn);
            evals += 1;
            if fnew.is_finite() && fnew <= fx + 1e-4 * step * slope {
                accepted = Some((xn, fnew, gnew));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fnew, gnew)) = accepted else {
            failures += 1;
            s_hist.clear();
            y_hist.clear();
            if failures >= 3 {
                break;
            }
            continue;
        };
        failures = 0;
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gnew.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dotv(&s, &y);
        if sy > 1e-12 * dotv(&y, &y).sqrt() * dotv(&s, &s).sqrt() {
            if s_hist.len() == MEMORY {
                s_hist.remove(0);
                y_hist.remove(0);
            }
            s_hist.push(s);
            y_hist.push(y);
        }
        let improvement = fx - fnew;
        x = xn;
        fx = fnew;
        g = gnew;
        if improvement.abs() <= 1e-15 * (1.0 + fx.abs()) {
            converged = true;
            break;
        }
    }
    LocalMin { x, value: fx, evaluations: evals, converged }
}

fn dotv(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_inf(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_kink() {
        let (t, v) = minimize_convex_1d(|t| (t - 3.7).abs() + 2.0, 0.0, 1.0);
        assert!((t - 3.7).abs() < 1e-9);
        assert!((v - 2.0).abs() < 1e-9);
        let (t, _) = minimize_convex_1d(|t| (t + 1e4).powi(2), 0.0, 1.0);
        assert!((t + 1e4).abs() < 1e-6);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let r = nelder_mead(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            0.5,
            5000,
            1e-14,
        );
        assert!((r.x[0] - 1.0).abs() < 1e-3, "{:?}", r);
    }

    #[test]
    fn lbfgs_quadratic() {
        let r = lbfgs(
            |x| {
                let f = (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2);
                (f, vec![2.0 * (x[0] - 1.0), 20.0 * (x[1] + 2.0)])
            },
            &[5.0, 5.0],
            200,
            1e-12,
            None,
        );
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] + 2.0).abs() < 1e-6);
    }
}
