use std::sync::OnceLock;

use psc_matqi::labels;
use psc_matqi::linalg::{self, CMat};
use psc_matqi::{DensityOperator, SystemLabel, MAX_DIM};

use crate::choi::{choi_of_kraus, kraus_operators_from_choi, ChoiMatrix};
use crate::{Error, Result, RANK_CUTOFF};

#[derive(Debug)]
pub struct Channel {
    kraus: Vec<CMat>,
    input: SystemLabel,
    output: SystemLabel,
    choi: OnceLock<ChoiMatrix>,
    dilation: OnceLock<Dilation>,
}

impl Clone for Channel {
    fn clone(&self) -> Self {
        Self {
            kraus: self.kraus.clone(),
            input: self.input.clone(),
            output: self.output.clone(),
            choi: self.choi.clone(),
            dilation: self.dilation.clone(),
        }
    }
}

/// Minimal Stinespring isometry U: in → B̂ ⊗ E, with B̂ the support of N(1) inside the output.
#[derive(Debug, Clone)]
pub struct Dilation {
    /// (dB̂·dE) × din
    pub u: CMat,
    /// Orthonormal basis of B̂ in the full output (dB × dB̂).
    pub out_basis: CMat,
    pub out_label: SystemLabel,
    pub env_label: SystemLabel,
}

impl Dilation {
    pub fn out_dim(&self) -> usize {
        self.out_label.dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_label.dim
    }

    /// Kraus operators of the reduced channel (one per environment basis vector).
    pub fn kraus(&self) -> Vec<CMat> {
        let (db, de, din) = (self.out_dim(), self.env_dim(), self.u.ncols());
        (0..de).map(|e| CMat::from_fn(db, din, |b, i| self.u[(b * de + e, i)])).collect()
    }

    /// Kraus operators of the complementary channel (one per B̂ basis vector).
    pub fn complementary_kraus(&self) -> Vec<CMat> {
        let (db, de, din) = (self.out_dim(), self.env_dim(), self.u.ncols());
        (0..db).map(|b| CMat::from_fn(de, din, |e, i| self.u[(b * de + e, i)])).collect()
    }

    /// Tr_E U ρ U†, embedded back into the full output space.
    pub fn output(&self, rho: &CMat) -> CMat {
        let full = &self.u * rho * self.u.adjoint();
        let b = linalg::ptrace(&full, &[self.out_dim(), self.env_dim()], &[0]);
        &self.out_basis * b * self.out_basis.adjoint()
    }
}

fn tp_deviation(kraus: &[CMat], din: usize) -> f64 {
    let mut s = linalg::zeros(din, din);
    for k in kraus {
        s += k.adjoint() * k;
    }
    linalg::max_abs(&(s - linalg::eye(din)))
}

impl Channel {
    pub fn new(kraus: Vec<CMat>) -> Result<Self> {
        let (dout, din) = kraus.first().map(|k| k.shape()).ok_or_else(|| Error::InvalidParameter("no Kraus operators".into()))?;
        Self::with_labels(kraus, SystemLabel::new("A'", din)?, SystemLabel::new("B", dout)?)
    }

    pub fn with_labels(kraus: Vec<CMat>, input: SystemLabel, output: SystemLabel) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidParameter("no Kraus operators".into()));
        }
        if kraus.iter().any(|k| k.nrows() != output.dim || k.ncols() != input.dim) {
            return Err(psc_matqi::Error::DimensionMismatch("Kraus operator shape".into()).into());
        }
        linalg::check_dim(input.dim * output.dim)?;
        let dev = tp_deviation(&kraus, input.dim);
        if dev > 1e-9 {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(Self { kraus, input, output, choi: OnceLock::new(), dilation: OnceLock::new() })
    }

    pub fn relabel(&self, input: &str, output: &str) -> Result<Self> {
        Self::with_labels(self.kraus.clone(), SystemLabel::new(input, self.din())?, SystemLabel::new(output, self.dout())?)
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn input(&self) -> &SystemLabel {
        &self.input
    }

    pub fn output(&self) -> &SystemLabel {
        &self.output
    }

    pub fn din(&self) -> usize {
        self.input.dim
    }

    pub fn dout(&self) -> usize {
        self.output.dim
    }

    pub fn choi(&self) -> &ChoiMatrix {
        self.choi.get_or_init(|| {
            let m = choi_of_kraus(&self.kraus, self.din(), self.dout());
            ChoiMatrix { matrix: linalg::hermitize(&m), din: self.din(), dout: self.dout() }
        })
    }

    pub fn dilation(&self) -> &Dilation {
        self.dilation.get_or_init(|| build_dilation(self))
    }

    /// N(ρ) on the input system alone.
    pub fn apply_raw(&self, rho: &CMat) -> CMat {
        let mut out = linalg::zeros(self.dout(), self.dout());
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        out
    }

    /// Applies the channel to factor `pos` of an operator on a product space.
    pub fn apply_on(&self, rho: &CMat, dims: &[usize], pos: usize) -> CMat {
        let mut perm: Vec<usize> = (0..dims.len()).filter(|&k| k != pos).collect();
        perm.push(pos);
        let moved = linalg::permute_op(rho, dims, &perm);
        let rest: usize = dims.iter().enumerate().filter(|&(k, _)| k != pos).map(|(_, d)| d).product();
        let mut out = linalg::zeros(rest * self.dout(), rest * self.dout());
        let e = linalg::eye(rest);
        for k in &self.kraus {
            let kk = linalg::kron(&e, k);
            out += &kk * &moved * kk.adjoint();
        }
        let mut new_dims: Vec<usize> = perm[..perm.len() - 1].iter().map(|&k| dims[k]).collect();
        new_dims.push(self.dout());
        // inverse permutation back to the original order
        let mut inv = vec![0; perm.len()];
        for (newpos, &old) in perm.iter().enumerate() {
            inv[old] = newpos;
        }
        linalg::permute_op(&out, &new_dims, &inv)
    }

    /// Adjoint map N†(Y) = Σ K† Y K.
    pub fn apply_adjoint(&self, y: &CMat) -> CMat {
        let mut out = linalg::zeros(self.din(), self.din());
        for k in &self.kraus {
            out += k.adjoint() * y * k;
        }
        out
    }

    /// Channel with output restricted to B̂ = supp N(1).
    pub fn reduced(&self) -> Channel {
        let d = self.dilation();
        Channel::with_labels(d.kraus(), self.input.clone(), SystemLabel::of(&self.output.name, d.out_dim()))
            .expect("reduced channel is trace preserving")
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &Channel) -> Result<Channel> {
        if inner.dout() != self.din() {
            return Err(psc_matqi::Error::DimensionMismatch("composition".into()).into());
        }
        let mut ks = vec![];
        for a in &self.kraus {
            for b in &inner.kraus {
                ks.push(a * b);
            }
        }
        let c = Channel::with_labels(ks, inner.input.clone(), self.output.clone())?;
        Ok(c.canonical_if_large())
    }

    /// Replaces an oversized Kraus set by the minimal one from the Choi matrix.
    fn canonical_if_large(self) -> Channel {
        if self.kraus.len() > self.din() * self.dout() {
            let ks = kraus_operators_from_choi(&self.choi().matrix, self.din(), self.dout());
            Channel::with_labels(ks, self.input.clone(), self.output.clone()).expect("canonical Kraus set")
        } else {
            self
        }
    }
}

fn build_dilation(ch: &Channel) -> Dilation {
    let (din, dout) = (ch.din(), ch.dout());
    let kraus = kraus_operators_from_choi(&ch.choi().matrix, din, dout);
    let n1 = {
        let mut s = linalg::zeros(dout, dout);
        for k in &kraus {
            s += k * k.adjoint();
        }
        s
    };
    let (vals, vecs) = linalg::eigh(&n1);
    let top = vals.last().copied().unwrap_or(0.0).max(1.0);
    let keep: Vec<usize> = (0..dout).rev().filter(|&k| vals[k] > RANK_CUTOFF * top).collect();
    let basis = if keep.len() == dout {
        linalg::eye(dout)
    } else {
        let cols: Vec<_> = keep.iter().map(|&k| vecs.column(k).into_owned()).collect();
        CMat::from_columns(&cols)
    };
    let db = basis.ncols();
    let de = kraus.len();
    let mut u = linalg::zeros(db * de, din);
    for (e, k) in kraus.iter().enumerate() {
        let kr = basis.adjoint() * k;
        for b in 0..db {
            for i in 0..din {
                u[(b * de + e, i)] = kr[(b, i)];
            }
        }
    }
    Dilation { u, out_basis: basis, out_label: SystemLabel::of(&ch.output.name, db), env_label: SystemLabel::of("E", de) }
}

pub fn minimal_dilation(ch: &Channel) -> Dilation {
    ch.dilation().clone()
}

/// N^c(ρ) = Tr_B̂ U ρ U† with output system E.
pub fn complementary(ch: &Channel) -> Channel {
    let d = ch.dilation();
    Channel::with_labels(d.complementary_kraus(), ch.input().clone(), d.env_label.clone())
        .expect("complementary channel is trace preserving")
}

/// Applies the channel to the named factor; the factor is renamed to the channel's output label.
pub fn apply(ch: &Channel, state: &DensityOperator, acting_on: &str) -> Result<DensityOperator> {
    let pos = labels::position(state.factors(), acting_on)?;
    if state.factors()[pos].dim != ch.din() {
        return Err(psc_matqi::Error::DimensionMismatch(format!(
            "channel input {} vs system `{acting_on}` of dim {}",
            ch.din(),
            state.factors()[pos].dim
        ))
        .into());
    }
    let m = ch.apply_on(state.matrix(), &state.dims(), pos);
    let mut factors = state.factors().to_vec();
    factors[pos] = SystemLabel::new(ch.output().name.clone(), ch.dout())?;
    Ok(DensityOperator::new(m, factors)?)
}

pub fn tensor(c1: &Channel, c2: &Channel) -> Result<Channel> {
    let din = c1.din() * c2.din();
    let dout = c1.dout() * c2.dout();
    if din * dout > MAX_DIM * MAX_DIM || din > MAX_DIM || dout > MAX_DIM {
        return Err(psc_matqi::Error::DimensionGuard(din.max(dout)).into());
    }
    let mut ks = vec![];
    for a in c1.kraus() {
        for b in c2.kraus() {
            ks.push(linalg::kron(a, b));
        }
    }
    let input = SystemLabel::new(format!("{}{}", c1.input().name, c2.input().name), din)?;
    let output = SystemLabel::new(format!("{}{}", c1.output().name, c2.output().name), dout)?;
    Ok(Channel::with_labels(ks, input, output)?.canonical_if_large())
}

pub fn tensor_power(c: &Channel, n: usize) -> Result<Channel> {
    if n == 0 {
        return Err(Error::InvalidParameter("tensor power n must be ≥ 1".into()));
    }
    let mut out = c.clone();
    for _ in 1..n {
        out = tensor(&out, c)?;
    }
    let input = SystemLabel::new(format!("{}^{n}", c.input().name), out.din())?;
    let output = SystemLabel::new(format!("{}^{n}", c.output().name), out.dout())?;
    Channel::with_labels(out.kraus, input, output)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{make_channel, Zoo};

    #[test]
    fn apply_on_middle_factor() {
        let z = make_channel(&Zoo::Dephasing { p: 0.3 }).unwrap();
        let x = CMat::from_fn(8, 8, |i, j| linalg::c((i + j) as f64, i as f64 - j as f64));
        let x = linalg::hermitize(&x);
        let got = z.apply_on(&x, &[2, 2, 2], 1);
        let mut expect = linalg::zeros(8, 8);
        for k in z.kraus() {
            let kk = linalg::kron_all(&[&linalg::eye(2), k, &linalg::eye(2)]);
            expect += &kk * &x * kk.adjoint();
        }
        assert!(linalg::max_abs(&(got - expect)) < 1e-12);
    }

    #[test]
    fn dilation_reproduces_channel() {
        let e = make_channel(&Zoo::Erasure { d: 2, q: 0.3 }).unwrap();
        let d = e.dilation();
        let rho = CMat::from_row_slice(2, 2, &[linalg::r(0.6), linalg::c(0.1, 0.2), linalg::c(0.1, -0.2), linalg::r(0.4)]);
        assert!(linalg::max_abs(&(d.output(&rho) - e.apply_raw(&rho))) < 1e-12);
    }
}
