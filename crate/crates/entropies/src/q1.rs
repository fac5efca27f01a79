use psc_channels::Channel;
use psc_matqi::haar::{random_density, rng_from_seed};
use psc_matqi::linalg::{self, c, r, CMat};

use crate::vn::{coherent_information_raw, env_output};

#[derive(Debug, Clone)]
pub struct Q1Options {
    pub restarts: usize,
    pub max_iter: usize,
    /// Stop once an accepted step improves the objective by less than this.
    pub tol: f64,
    pub seed: u64,
    /// Bloch-ball grid resolution for qubit inputs (0 disables the grid).
    pub grid: usize,
}

impl Default for Q1Options {
    fn default() -> Self {
        Self { restarts: 20, max_iter: 400, tol: 1e-13, seed: 1, grid: 24 }
    }
}

#[derive(Debug, Clone)]
pub struct Q1Result {
    pub value: f64,
    pub optimizer: CMat,
    /// Whether the best run stopped on the tolerance rather than the iteration cap.
    pub converged: bool,
    pub iterations: usize,
    /// Best value found on the qubit grid, if one was evaluated.
    pub grid_value: Option<f64>,
}

/// Q^(1)(N) = max_ρ S(N(ρ)) − S(N^c(ρ)) by projected gradient ascent over input states.
pub fn q1(channel: &Channel, opts: &Q1Options) -> Q1Result {
    let d = channel.din();
    let mut rng = rng_from_seed(opts.seed);
    let mut starts = vec![linalg::eye(d) * r(1.0 / d as f64)];
    for _ in 0..opts.restarts {
        starts.push(random_density(d, d, &mut rng));
    }
    let mut grid_value = None;
    if d == 2 && opts.grid > 0 {
        let (v, arg) = qubit_grid(channel, opts.grid);
        grid_value = Some(v);
        starts.push(arg);
    }
    let mut best: Option<Q1Result> = None;
    for s in starts {
        let (rho, val, conv, it) = ascend(channel, s, opts);
        if best.as_ref().is_none_or(|b| val > b.value) {
            best = Some(Q1Result { value: val, optimizer: rho, converged: conv, iterations: it, grid_value });
        }
    }
    best.expect("at least one start")
}

fn gradient(channel: &Channel, rho: &CMat) -> CMat {
    let out = channel.apply_raw(rho);
    let env = env_output(channel, rho);
    let lg = |m: &CMat| linalg::funm(m, |x| x.max(1e-300).log2());
    let g = channel.apply_adjoint(&lg(&out));
    let mut gc = linalg::zeros(rho.nrows(), rho.nrows());
    for f in channel.dilation().complementary_kraus() {
        gc += f.adjoint() * lg(&env) * &f;
    }
    linalg::hermitize(&(gc - g))
}

fn ascend(channel: &Channel, mut rho: CMat, opts: &Q1Options) -> (CMat, f64, bool, usize) {
    let mut val = coherent_information_raw(channel, &rho);
    let mut step = 0.5;
    for it in 0..opts.max_iter {
        let g = gradient(channel, &rho);
        let mut improved = false;
        let mut t = step;
        while t > 1e-12 {
            let cand = project_to_states(&(&rho + &g * r(t)));
            let v = coherent_information_raw(channel, &cand);
            if v > val {
                let gain = v - val;
                rho = cand;
                val = v;
                improved = true;
                step = (t * 2.0).min(8.0);
                if gain < opts.tol {
                    return (rho, val, true, it + 1);
                }
                break;
            }
            t *= 0.5;
        }
        if !improved {
            return (rho, val, true, it + 1);
        }
    }
    (rho, val, false, opts.max_iter)
}

/// Euclidean projection onto density matrices: project the spectrum onto the simplex.
pub fn project_to_states(m: &CMat) -> CMat {
    let (vals, vecs) = linalg::eigh(&linalg::hermitize(m));
    let p = simplex_projection(&vals);
    let mut scaled = vecs.clone();
    for (k, &x) in p.iter().enumerate() {
        scaled.column_mut(k).scale_mut(x);
    }
    linalg::hermitize(&(scaled * vecs.adjoint()))
}

fn simplex_projection(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (k, &x) in u.iter().enumerate() {
        acc += x;
        let t = (acc - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn qubit_grid(channel: &Channel, n: usize) -> (f64, CMat) {
    let mut best = (f64::NEG_INFINITY, linalg::eye(2) * r(0.5));
    let nr = n / 2;
    for ir in 0..=nr {
        let rad = ir as f64 / nr as f64;
        for it in 0..=n / 2 {
            let th = std::f64::consts::PI * it as f64 / (n / 2) as f64;
            for ip in 0..n {
                let ph = 2.0 * std::f64::consts::PI * ip as f64 / n as f64;
                let (x, y, z) = (rad * th.sin() * ph.cos(), rad * th.sin() * ph.sin(), rad * th.cos());
                let rho = CMat::from_row_slice(2, 2, &[r(0.5 * (1.0 + z)), c(0.5 * x, -0.5 * y), c(0.5 * x, 0.5 * y), r(0.5 * (1.0 - z))]);
                let v = coherent_information_raw(channel, &rho);
                if v > best.0 {
                    best = (v, rho);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_projection_cases() {
        assert_eq!(simplex_projection(&[0.5, 0.5]), vec![0.5, 0.5]);
        assert_eq!(simplex_projection(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = simplex_projection(&[0.7, 0.6, -0.3]);
        assert!((p[0] - 0.55).abs() < 1e-12 && (p[1] - 0.45).abs() < 1e-12 && p[2] == 0.0);
    }

    #[test]
    fn projection_yields_states() {
        let m = CMat::from_row_slice(2, 2, &[r(1.5), c(0.3, 0.2), c(0.3, -0.2), r(-0.4)]);
        let p = project_to_states(&m);
        assert!((linalg::trace(&p).re - 1.0).abs() < 1e-12);
        assert!(linalg::eigvalsh(&p)[0] >= -1e-15);
    }
}
