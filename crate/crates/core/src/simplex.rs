//! Derivative-free Nelder–Mead minimization.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Stop once every vertex lies within this distance of the best one.
    pub x_tol: f64,
    /// Stop once the spread of objective values falls below this.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-6,
            f_tol: 1e-10,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn affine<const N: usize>(a: &[f64; N], b: &[f64; N], t: f64) -> [f64; N] {
    // a + t (b - a)
    std::array::from_fn(|i| a[i] + t * (b[i] - a[i]))
}

/// Minimizes `f` starting from `x0` with initial edge lengths `steps`.
pub fn minimize<const N: usize, F>(
    f: F,
    x0: [f64; N],
    steps: [f64; N],
    opts: &SimplexOptions,
) -> SimplexResult<N>
where
    F: Fn(&[f64; N]) -> f64,
{
    let mut verts: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    verts.push((x0, f(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += steps[i];
        verts.push((x, f(&x)));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        verts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = verts[0];
        let worst = verts[N];

        let diameter = verts[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(best.0.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < opts.x_tol || (worst.1 - best.1).abs() < opts.f_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = [0.0; N];
        for (x, _) in &verts[..N] {
            for i in 0..N {
                centroid[i] += x[i] / N as f64;
            }
        }

        let xr = affine(&centroid, &worst.0, -REFLECT);
        let fr = f(&xr);
        if fr < best.1 {
            let xe = affine(&centroid, &worst.0, -EXPAND);
            let fe = f(&xe);
            verts[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < verts[N - 1].1 {
            verts[N] = (xr, fr);
            continue;
        }
        // Contraction, outside or inside depending on the reflected value.
        let (xc, fc) = if fr < worst.1 {
            let xc = affine(&centroid, &xr, CONTRACT);
            (xc, f(&xc))
        } else {
            let xc = affine(&centroid, &worst.0, CONTRACT);
            (xc, f(&xc))
        };
        if fc < worst.1.min(fr) {
            verts[N] = (xc, fc);
            continue;
        }
        for v in verts.iter_mut().skip(1) {
            let x = affine(&best.0, &v.0, SHRINK);
            *v = (x, f(&x));
        }
    }

    verts.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexResult {
        x: verts[0].0,
        value: verts[0].1,
        iterations,
        converged,
    }
}
