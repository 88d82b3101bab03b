//! Box-clipped Nelder–Mead minimization.

/// Settings for [`minimize`].
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Stop once the spread of simplex values drops below this.
    pub f_tol: f64,
    /// ... and the simplex diameter drops below this.
    pub x_tol: f64,
    pub max_iter: usize,
}

/// Best vertex found and the number of objective calls.
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadResult<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub evaluations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn clip<const N: usize>(x: [f64; N], lo: &[f64; N], hi: &[f64; N]) -> [f64; N] {
    let mut out = x;
    for i in 0..N {
        out[i] = x[i].clamp(lo[i], hi[i]);
    }
    out
}

fn affine<const N: usize>(a: &[f64; N], b: &[f64; N], t: f64) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = a[i] + t * (b[i] - a[i]);
    }
    out
}

/// Minimizes `f` over the box `[lo, hi]` starting from `x0`.
///
/// Every trial point is clipped into the box. NaN values rank as `+∞`.
pub fn minimize<const N: usize, F: Fn(&[f64; N]) -> f64>(
    f: F,
    x0: [f64; N],
    step: [f64; N],
    lo: [f64; N],
    hi: [f64; N],
    opts: NelderMeadOptions,
) -> NelderMeadResult<N> {
    let mut evaluations = 0;
    let mut eval = |x: &[f64; N]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let start = clip(x0, &lo, &hi);
    let mut simplex: Vec<([f64; N], f64)> = vec![(start, eval(&start))];
    for i in 0..N {
        let mut x = start;
        x[i] += step[i];
        if x[i] > hi[i] {
            x[i] = start[i] - step[i];
        }
        let x = clip(x, &lo, &hi);
        simplex.push((x, eval(&x)));
    }
    for _ in 0..opts.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[N].1;
        let diameter = simplex
            .iter()
            .skip(1)
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (worst - best).abs() <= opts.f_tol && diameter <= opts.x_tol {
            break;
        }
        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for i in 0..N {
                centroid[i] += x[i] / N as f64;
            }
        }
        let worst_x = simplex[N].0;
        let reflected = clip(affine(&centroid, &worst_x, -REFLECT), &lo, &hi);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = clip(affine(&centroid, &worst_x, -EXPAND), &lo, &hi);
            let fe = eval(&expanded);
            simplex[N] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (reflected, fr);
            continue;
        }
        let (target, ft) = if fr < worst { (reflected, fr) } else { (worst_x, worst) };
        let contracted = clip(affine(&centroid, &target, CONTRACT), &lo, &hi);
        let fc = eval(&contracted);
        if fc < ft {
            simplex[N] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            let x = clip(affine(&anchor, &vertex.0, SHRINK), &lo, &hi);
            *vertex = (x, eval(&x));
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    NelderMeadResult { x: simplex[0].0, value: simplex[0].1, evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPTS: NelderMeadOptions = NelderMeadOptions { f_tol: 1e-14, x_tol: 1e-9, max_iter: 5000 };

    #[test]
    fn rosenbrock() {
        let r = minimize(
            |x: &[f64; 2]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            [-1.0, 1.5],
            [0.1, 0.1],
            [-2.0, -2.0],
            [2.0, 2.0],
            OPTS,
        );
        assert!((r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn optimum_on_box_edge() {
        let r = minimize(
            |x: &[f64; 2]| (x[0] + 1.0).powi(2) + (x[1] - 0.5).powi(2),
            [0.5, 0.1],
            [0.1, 0.1],
            [0.0, 0.0],
            [1.0, 1.0],
            OPTS,
        );
        assert!(r.x[0] < 1e-6);
        assert!((r.x[1] - 0.5).abs() < 1e-6);
    }
}
