use nalgebra::{DMatrix, DVector};
use psc_matqi::linalg::{self, r, CMat, C64};

use crate::problem::{standardize, SdpProblem, Sense, StdBlock, StdForm};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
}

#[derive(Debug, Clone)]
pub struct SdpOptions {
    pub max_iter: usize,
    /// Relative duality gap targeted before stopping.
    pub gap_tol: f64,
    /// Relative feasibility residual targeted before stopping.
    pub feas_tol: f64,
    /// Looser thresholds under which a stalled run is still reported optimal.
    pub accept_gap: f64,
    pub accept_feas: f64,
    pub step_fraction: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self { max_iter: 200, gap_tol: 1e-9, feas_tol: 1e-10, accept_gap: 1e-6, accept_feas: 1e-7, step_fraction: 0.98 }
    }
}

/// Farkas-type evidence for infeasibility or unboundedness.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// Multipliers Z ⪰ 0 (per LMI) and z ≥ 0 (per inequality) annihilating every variable
    /// coefficient while pairing to −1 with the constant terms.
    Infeasible { lmi: Vec<CMat>, lin: Vec<f64>, residual: f64 },
    /// A direction along which every constraint stays satisfied and the objective improves.
    Unbounded { direction: Vec<f64> },
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: Status,
    /// Objective at the returned variables.
    pub primal_value: f64,
    /// Objective bound implied by the multipliers.
    pub dual_value: f64,
    pub y: Vec<f64>,
    /// Multiplier Z_k ⪰ 0 of each LMI.
    pub lmi_multipliers: Vec<CMat>,
    /// Multiplier of each scalar constraint (None for eliminated equalities).
    pub lin_multipliers: Vec<Option<f64>>,
    pub iterations: usize,
    /// |primal − dual| / (1 + |primal|).
    pub gap: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub certificate: Option<Certificate>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

fn a_op(std: &StdForm, xs: &[CMat], xl: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; std.m];
    for (blk, x) in std.blocks.iter().zip(xs) {
        for (i, a) in &blk.terms {
            out[*i] += a.re_trace_with(x);
        }
    }
    for (row, &x) in std.lp_a.iter().zip(xl) {
        for &(i, a) in row {
            out[i] += a * x;
        }
    }
    out
}

fn at_block(blk: &StdBlock, y: &[f64]) -> CMat {
    let mut m = linalg::zeros(blk.n, blk.n);
    for (i, a) in &blk.terms {
        let v = y[*i];
        if v != 0.0 {
            for &(p, q, x) in &a.entries {
                m[(p, q)] += x * v;
            }
        }
    }
    m
}

fn at_lp(std: &StdForm, y: &[f64]) -> Vec<f64> {
    std.lp_a.iter().map(|row| row.iter().map(|&(i, a)| a * y[i]).sum()).collect()
}

fn sym(m: &CMat) -> CMat {
    (m + m.adjoint()) * r(0.5)
}

fn fro(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn herm_inverse(m: &CMat) -> Option<CMat> {
    m.clone().cholesky().map(|c| c.inverse())
}

/// Largest α with X + α dX ⪰ 0 (∞ if unrestricted).
fn max_step(x: &CMat, dx: &CMat) -> f64 {
    let n = x.nrows();
    let Some(ch) = x.clone().cholesky() else { return 0.0 };
    let l = ch.l();
    let Some(linv) = l.solve_lower_triangular(&linalg::eye(n)) else { return 0.0 };
    let t = &linv * dx * linv.adjoint();
    let lmin = linalg::eigvalsh(&t)[0];
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn max_step_lp(x: &[f64], dx: &[f64]) -> f64 {
    x.iter().zip(dx).filter(|(_, &d)| d < 0.0).map(|(&a, &d)| -a / d).fold(f64::INFINITY, f64::min)
}

fn schur(std: &StdForm, xs: &[CMat], sinv: &[CMat], xl: &[f64], sl: &[f64]) -> DMatrix<f64> {
    let m = std.m;
    let mut mm = DMatrix::<f64>::zeros(m, m);
    for (k, blk) in std.blocks.iter().enumerate() {
        let n = blk.n;
        let x = xs[k].as_slice();
        let si = sinv[k].as_slice();
        let mut prefix = 0usize;
        let mut g = vec![C64::new(0.0, 0.0); n * n];
        for jt in 0..blk.terms.len() {
            let (j, aj) = &blk.terms[jt];
            let nj = aj.nnz();
            prefix += nj;
            // rough flop counts of the three ways to get Re Tr(A_i X A_j S⁻¹), i ≤ j
            let pair = 4 * nj * prefix;
            let outer = n * n * nj + prefix;
            let dense = n * n * n / 2 + n * nj + prefix;
            if pair <= outer && pair <= dense {
                for (i, ai) in blk.terms[..=jt].iter() {
                    let mut acc = 0.0;
                    for &(a, b, alpha) in &ai.entries {
                        for &(c, d, beta) in &aj.entries {
                            acc += (alpha * beta * x[c * n + b] * si[a * n + d]).re;
                        }
                    }
                    mm[(*i, *j)] += acc;
                    if i != j {
                        mm[(*j, *i)] += acc;
                    }
                }
                continue;
            }
            if outer <= dense {
                // G = Σ β X[:,c] S⁻¹[d,:], column-major
                g.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
                for &(c, d, beta) in &aj.entries {
                    let xc = &x[c * n..(c + 1) * n];
                    for a in 0..n {
                        let f = beta * si[a * n + d];
                        let col = &mut g[a * n..(a + 1) * n];
                        for (gv, xv) in col.iter_mut().zip(xc) {
                            *gv += xv * f;
                        }
                    }
                }
            } else {
                let mut xa = linalg::zeros(n, n);
                for &(c, d, beta) in &aj.entries {
                    for row in 0..n {
                        xa[(row, d)] += xs[k][(row, c)] * beta;
                    }
                }
                let gm = xa * &sinv[k];
                g.copy_from_slice(gm.as_slice());
            }
            for (i, ai) in blk.terms[..=jt].iter() {
                let acc: f64 = ai.entries.iter().map(|&(a, b, alpha)| (alpha * g[a * n + b]).re).sum();
                mm[(*i, *j)] += acc;
                if i != j {
                    mm[(*j, *i)] += acc;
                }
            }
        }
    }
    for (l, row) in std.lp_a.iter().enumerate() {
        let w = xl[l] / sl[l];
        for &(i, ai) in row {
            for &(j, aj) in row {
                mm[(i, j)] += ai * aj * w;
            }
        }
    }
    mm
}

enum Factor {
    Chol(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    Lu(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl Factor {
    fn new(mut mm: DMatrix<f64>) -> Self {
        let m = mm.nrows();
        let maxd = (0..m).map(|i| mm[(i, i)].abs()).fold(0.0f64, f64::max).max(1e-300);
        if let Some(c) = mm.clone().cholesky() {
            return Factor::Chol(c);
        }
        let mut reg = 1e-14 * maxd;
        for _ in 0..6 {
            for i in 0..m {
                mm[(i, i)] += reg;
            }
            if let Some(c) = mm.clone().cholesky() {
                return Factor::Chol(c);
            }
            reg *= 100.0;
        }
        Factor::Lu(mm.lu())
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let b = DVector::from_column_slice(rhs);
        let x = match self {
            Factor::Chol(c) => c.solve(&b),
            Factor::Lu(l) => l.solve(&b).unwrap_or_else(|| DVector::zeros(rhs.len())),
        };
        x.iter().copied().collect()
    }
}

struct Dir {
    dx: Vec<CMat>,
    ds: Vec<CMat>,
    dxl: Vec<f64>,
    dsl: Vec<f64>,
    dy: Vec<f64>,
}

struct Ctx<'a> {
    std: &'a StdForm,
    x: &'a [CMat],
    sinv: &'a [CMat],
    xl: &'a [f64],
    sl: &'a [f64],
    rp: &'a [f64],
    rd: &'a [CMat],
    rdl: &'a [f64],
    factor: &'a Factor,
}

impl Ctx<'_> {
    /// Solves for the HKM direction with dX = Rc − sym(X dS S⁻¹).
    fn direction(&self, rc: Vec<CMat>, rcl: Vec<f64>) -> Dir {
        let std = self.std;
        let tmp: Vec<CMat> = (0..std.blocks.len()).map(|k| sym(&(&self.x[k] * &self.rd[k] * &self.sinv[k]))).collect();
        let tmpl: Vec<f64> = (0..self.xl.len()).map(|l| self.xl[l] * self.rdl[l] / self.sl[l]).collect();
        let a_rc = a_op(std, &rc, &rcl);
        let a_t = a_op(std, &tmp, &tmpl);
        let rhs: Vec<f64> = (0..std.m).map(|i| self.rp[i] - a_rc[i] + a_t[i]).collect();
        let dy = self.factor.solve(&rhs);
        let ds: Vec<CMat> = std.blocks.iter().enumerate().map(|(k, b)| &self.rd[k] - at_block(b, &dy)).collect();
        let atl = at_lp(std, &dy);
        let dsl: Vec<f64> = (0..self.xl.len()).map(|l| self.rdl[l] - atl[l]).collect();
        let dx: Vec<CMat> = (0..std.blocks.len()).map(|k| &rc[k] - sym(&(&self.x[k] * &ds[k] * &self.sinv[k]))).collect();
        let dxl: Vec<f64> = (0..self.xl.len()).map(|l| rcl[l] - self.xl[l] * dsl[l] / self.sl[l]).collect();
        Dir { dx, ds, dxl, dsl, dy }
    }
}

struct Raw {
    status: Status,
    y: Vec<f64>,
    x: Vec<CMat>,
    xl: Vec<f64>,
    pobj: f64,
    dobj: f64,
    pinf: f64,
    dinf: f64,
    iterations: usize,
    certificate: Option<Certificate>,
}

fn initial_scale(n: usize, norms: &[f64], bs: &[f64], cnorm: f64) -> (f64, f64) {
    let sn = (n as f64).sqrt();
    let mut xi = 10f64.max(sn);
    let mut eta = 10f64.max(sn).max(cnorm);
    for (&a, &b) in norms.iter().zip(bs) {
        xi = xi.max(sn * (1.0 + b.abs()) / (1.0 + a));
        eta = eta.max(a);
    }
    (xi, eta)
}

fn ipm(std: &StdForm, opts: &SdpOptions) -> Raw {
    let m = std.m;
    let nb = std.blocks.len();
    let nl = std.lp_c.len();
    let mut x = Vec::with_capacity(nb);
    let mut s = Vec::with_capacity(nb);
    for blk in &std.blocks {
        let norms: Vec<f64> = blk.terms.iter().map(|t| fro(&t.1.to_dense())).collect();
        let bs: Vec<f64> = blk.terms.iter().map(|t| std.b[t.0]).collect();
        let (xi, eta) = initial_scale(blk.n, &norms, &bs, fro(&blk.c));
        x.push(linalg::eye(blk.n) * r(xi));
        s.push(linalg::eye(blk.n) * r(eta));
    }
    let mut xl = Vec::with_capacity(nl);
    let mut sl = Vec::with_capacity(nl);
    for (row, &c) in std.lp_a.iter().zip(&std.lp_c) {
        let norms: Vec<f64> = row.iter().map(|t| t.1.abs()).collect();
        let bs: Vec<f64> = row.iter().map(|t| std.b[t.0]).collect();
        let (xi, eta) = initial_scale(1, &norms, &bs, c.abs());
        xl.push(xi);
        sl.push(eta);
    }
    let mut y = vec![0.0; m];
    let ntot: f64 = (std.blocks.iter().map(|b| b.n).sum::<usize>() + nl) as f64;
    let bnorm = norm2(&std.b);
    let cnorm = (std.blocks.iter().map(|b| fro(&b.c).powi(2)).sum::<f64>() + std.lp_c.iter().map(|c| c * c).sum::<f64>()).sqrt();
    let trace = std::env::var_os("PSC_SDP_TRACE").is_some();
    let mut stall = 0usize;
    let mut since_best = 0usize;
    let mut best: Option<(f64, Vec<f64>, Vec<CMat>, Vec<f64>, f64, f64, f64, f64)> = None;
    let mut status = Status::MaxIter;
    let mut certificate = None;
    let mut it = 0;
    let (mut pobj, mut dobj, mut pinf, mut dinf);
    loop {
        let ax = a_op(std, &x, &xl);
        let rp: Vec<f64> = (0..m).map(|i| std.b[i] - ax[i]).collect();
        let rd: Vec<CMat> = (0..nb).map(|k| &std.blocks[k].c - &s[k] - at_block(&std.blocks[k], &y)).collect();
        let atl = at_lp(std, &y);
        let rdl: Vec<f64> = (0..nl).map(|l| std.lp_c[l] - sl[l] - atl[l]).collect();
        pobj = (0..nb).map(|k| linalg::hs_re(&std.blocks[k].c, &x[k])).sum::<f64>()
            + std.lp_c.iter().zip(&xl).map(|(c, x)| c * x).sum::<f64>();
        dobj = std.b.iter().zip(&y).map(|(b, y)| b * y).sum::<f64>();
        pinf = norm2(&rp) / (1.0 + bnorm);
        dinf = (rd.iter().map(|m| fro(m).powi(2)).sum::<f64>() + rdl.iter().map(|v| v * v).sum::<f64>()).sqrt() / (1.0 + cnorm);
        let gap = (pobj - dobj).abs() / (1.0 + dobj.abs());
        let merit = pinf.max(dinf).max(gap);
        if trace {
            eprintln!("it {it:3} pobj {pobj:+.10e} dobj {dobj:+.10e} pinf {pinf:.2e} dinf {dinf:.2e} gap {gap:.2e}");
        }
        if best.as_ref().is_none_or(|b| merit < 0.9 * b.0) {
            since_best = 0;
        } else {
            since_best += 1;
        }
        if best.as_ref().is_none_or(|b| merit < b.0) {
            best = Some((merit, y.clone(), x.clone(), xl.clone(), pobj, dobj, pinf, dinf));
        }
        let acceptable = best.as_ref().is_some_and(|b| b.6 <= opts.accept_feas && b.7 <= opts.accept_feas && (b.4 - b.5).abs() / (1.0 + b.5.abs()) <= opts.accept_gap);
        if since_best > if acceptable { 6 } else { 25 } {
            break;
        }
        if pinf <= opts.feas_tol && dinf <= opts.feas_tol && gap <= opts.gap_tol {
            status = Status::Optimal;
            break;
        }
        // Infeasibility of the affine problem: multipliers grow along a Farkas direction.
        if pobj < 0.0 && dinf > 1e-6 {
            let ratio = norm2(&ax) / pobj.abs();
            if ratio <= 1e-8 || pobj < -1e8 {
                let sc = 1.0 / pobj.abs();
                certificate = Some(Certificate::Infeasible {
                    lmi: x.iter().map(|m| m * r(sc)).collect(),
                    lin: xl.iter().map(|v| v * sc).collect(),
                    residual: ratio,
                });
                status = Status::Infeasible;
                break;
            }
        }
        if dobj > 1e8 && pinf > 1e-6 {
            let ny = norm2(&y);
            certificate = Some(Certificate::Unbounded { direction: y.iter().map(|v| v / ny).collect() });
            status = Status::Unbounded;
            break;
        }
        if it >= opts.max_iter {
            break;
        }
        it += 1;

        let mu = ((0..nb).map(|k| linalg::hs_re(&x[k], &s[k])).sum::<f64>() + xl.iter().zip(&sl).map(|(a, b)| a * b).sum::<f64>()) / ntot;
        let Some(sinv) = s.iter().map(herm_inverse).collect::<Option<Vec<_>>>() else { break };
        let factor = Factor::new(schur(std, &x, &sinv, &xl, &sl));
        let ctx = Ctx { std, x: &x, sinv: &sinv, xl: &xl, sl: &sl, rp: &rp, rd: &rd, rdl: &rdl, factor: &factor };

        let pred = ctx.direction(x.iter().map(|m| -m).collect(), xl.iter().map(|v| -v).collect());
        let (ap, ad) = step_lengths(&x, &s, &xl, &sl, &pred);
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let mu_aff = ((0..nb).map(|k| linalg::hs_re(&(&x[k] + &pred.dx[k] * r(ap)), &(&s[k] + &pred.ds[k] * r(ad)))).sum::<f64>()
            + (0..nl).map(|l| (xl[l] + ap * pred.dxl[l]) * (sl[l] + ad * pred.dsl[l])).sum::<f64>())
            / ntot;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let rc: Vec<CMat> = (0..nb)
            .map(|k| &sinv[k] * r(sigma * mu) - &x[k] - sym(&(&pred.dx[k] * &pred.ds[k] * &sinv[k])))
            .collect();
        let rcl: Vec<f64> = (0..nl).map(|l| (sigma * mu - pred.dxl[l] * pred.dsl[l]) / sl[l] - xl[l]).collect();
        let dir = ctx.direction(rc, rcl);
        let (ap, ad) = step_lengths(&x, &s, &xl, &sl, &dir);
        let ap = (opts.step_fraction * ap).min(1.0);
        let ad = (opts.step_fraction * ad).min(1.0);
        for k in 0..nb {
            x[k] = sym(&(&x[k] + &dir.dx[k] * r(ap)));
            s[k] = sym(&(&s[k] + &dir.ds[k] * r(ad)));
        }
        for l in 0..nl {
            xl[l] += ap * dir.dxl[l];
            sl[l] += ad * dir.dsl[l];
        }
        for i in 0..m {
            y[i] += ad * dir.dy[i];
        }
        if ap.max(ad) < 1e-8 {
            stall += 1;
            if stall >= 5 {
                break;
            }
        } else {
            stall = 0;
        }
    }
    if status == Status::MaxIter {
        // Fall back to the best iterate; accept it if within the reporting thresholds.
        if let Some((_, by, bx, bxl, bp, bd, bpi, bdi)) = best {
            y = by;
            x = bx;
            xl = bxl;
            pobj = bp;
            dobj = bd;
            pinf = bpi;
            dinf = bdi;
        }
        let gap = (pobj - dobj).abs() / (1.0 + dobj.abs());
        if pinf > opts.accept_feas && dinf <= opts.accept_feas && gap <= opts.accept_gap {
            if let Some((px, pxl)) = restore_primal(std, &x, &xl) {
                let p2 = primal_residual(std, &px, &pxl) / (1.0 + norm2(&std.b));
                if p2 < pinf {
                    x = px;
                    xl = pxl;
                    pinf = p2;
                    pobj = (0..nb).map(|k| linalg::hs_re(&std.blocks[k].c, &x[k])).sum::<f64>()
                        + std.lp_c.iter().zip(&xl).map(|(c, x)| c * x).sum::<f64>();
                }
            }
        }
        let gap = (pobj - dobj).abs() / (1.0 + dobj.abs());
        if pinf <= opts.accept_feas && dinf <= opts.accept_feas && gap <= opts.accept_gap {
            status = Status::Optimal;
        }
    }
    Raw { status, y, x, xl, pobj, dobj, pinf, dinf, iterations: it, certificate }
}

fn primal_residual(std: &StdForm, x: &[CMat], xl: &[f64]) -> f64 {
    let ax = a_op(std, x, xl);
    norm2(&std.b.iter().zip(&ax).map(|(b, a)| b - a).collect::<Vec<_>>())
}

/// Least-squares correction of A(X) = b for a nearly feasible X; `None` if it leaves the cone.
fn restore_primal(std: &StdForm, x: &[CMat], xl: &[f64]) -> Option<(Vec<CMat>, Vec<f64>)> {
    let ax = a_op(std, x, xl);
    let rp: Vec<f64> = std.b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let eye: Vec<CMat> = std.blocks.iter().map(|b| CMat::identity(b.n, b.n)).collect();
    let ones = vec![1.0; xl.len()];
    let gram = schur(std, &eye, &eye, &ones, &ones);
    let z = gram.lu().solve(&DVector::from_column_slice(&rp))?;
    let z: Vec<f64> = z.iter().copied().collect();
    let px: Vec<CMat> = std.blocks.iter().zip(x).map(|(b, xk)| sym(&(xk + at_block(b, &z)))).collect();
    let atl = at_lp(std, &z);
    let pxl: Vec<f64> = xl.iter().zip(&atl).map(|(a, b)| a + b).collect();
    if pxl.iter().any(|&v| v < 0.0) || px.iter().any(|m| m.clone().cholesky().is_none()) {
        return None;
    }
    Some((px, pxl))
}

fn step_lengths(x: &[CMat], s: &[CMat], xl: &[f64], sl: &[f64], d: &Dir) -> (f64, f64) {
    let mut ap = max_step_lp(xl, &d.dxl);
    let mut ad = max_step_lp(sl, &d.dsl);
    for k in 0..x.len() {
        ap = ap.min(max_step(&x[k], &d.dx[k]));
        ad = ad.min(max_step(&s[k], &d.ds[k]));
    }
    (ap, ad)
}

/// Solves the problem. Deterministic: no randomness, fixed operation order.
pub fn solve(problem: &SdpProblem, opts: &SdpOptions) -> Result<SdpSolution> {
    let st = standardize(problem);
    let sign = if problem.sense == Sense::Maximize { 1.0 } else { -1.0 };
    let nlmi = problem.lmis.len();
    let mut lin_mult: Vec<Option<f64>> = vec![None; problem.lin.len()];
    if st.inconsistent {
        let y = st.map.y0.clone();
        return Ok(SdpSolution {
            status: Status::Infeasible,
            primal_value: problem.objective_value(&y),
            dual_value: f64::NAN,
            y,
            lmi_multipliers: problem.lmis.iter().map(|l| linalg::zeros(l.expr.rows, l.expr.rows)).collect(),
            lin_multipliers: lin_mult,
            iterations: 0,
            gap: f64::NAN,
            primal_infeasibility: f64::INFINITY,
            dual_infeasibility: f64::NAN,
            certificate: None,
        });
    }
    let raw = if st.std.m == 0 { constant_only(&st.std) } else { ipm(&st.std, opts) };
    let y = st.map.expand(&raw.y);
    for (k, &row) in st.lp_rows.iter().enumerate() {
        lin_mult[row] = Some(raw.xl[k]);
    }
    let primal_value = problem.objective_value(&y);
    let dual_value = sign * (raw.pobj + st.obj_const);
    let _ = raw.dobj;
    let gap = (primal_value - dual_value).abs() / (1.0 + primal_value.abs());
    debug_assert_eq!(raw.x.len(), nlmi);
    Ok(SdpSolution {
        status: raw.status,
        primal_value,
        dual_value,
        y,
        lmi_multipliers: raw.x,
        lin_multipliers: lin_mult,
        iterations: raw.iterations,
        gap,
        primal_infeasibility: raw.dinf,
        dual_infeasibility: raw.pinf,
        certificate: raw.certificate,
    })
}

/// No free variables: feasibility is a spectral check of the constant terms.
fn constant_only(std: &StdForm) -> Raw {
    let mut worst = 0.0f64;
    let mut cert_lmi = vec![];
    let mut cert_lin = vec![];
    let mut total_neg = 0.0;
    for blk in &std.blocks {
        let (vals, vecs) = linalg::eigh(&blk.c);
        let scale = vals.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let lmin = vals.first().copied().unwrap_or(0.0);
        worst = worst.max(-lmin / scale);
        if lmin < 0.0 {
            let v = vecs.column(0).into_owned();
            cert_lmi.push(linalg::proj(&v));
            total_neg += lmin;
        } else {
            cert_lmi.push(linalg::zeros(blk.n, blk.n));
        }
    }
    for &c in &std.lp_c {
        worst = worst.max(-c / (1.0 + c.abs()));
        if c < 0.0 {
            cert_lin.push(1.0);
            total_neg += c;
        } else {
            cert_lin.push(0.0);
        }
    }
    let feasible = worst <= 1e-9;
    let zeros: Vec<CMat> = std.blocks.iter().map(|b| linalg::zeros(b.n, b.n)).collect();
    if feasible {
        Raw { status: Status::Optimal, y: vec![], x: zeros, xl: vec![0.0; std.lp_c.len()], pobj: 0.0, dobj: 0.0, pinf: 0.0, dinf: 0.0, iterations: 0, certificate: None }
    } else {
        let sc = 1.0 / total_neg.abs();
        Raw {
            status: Status::Infeasible,
            y: vec![],
            x: zeros,
            xl: vec![0.0; std.lp_c.len()],
            pobj: f64::NAN,
            dobj: 0.0,
            pinf: 0.0,
            dinf: worst,
            iterations: 0,
            certificate: Some(Certificate::Infeasible {
                lmi: cert_lmi.into_iter().map(|m| m * r(sc)).collect(),
                lin: cert_lin.into_iter().map(|v| v * sc).collect(),
                residual: 0.0,
            }),
        }
    }
}
