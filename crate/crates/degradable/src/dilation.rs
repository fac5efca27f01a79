use psc_channels::{kraus_from_choi, zoo::schur_vectors, Channel};
use psc_matqi::linalg::{self, r, CMat, CVec};
use psc_matqi::state::isometry_defect;

use crate::{Error, Result};

/// Largest ‖W − VU‖ accepted when recovering V.
pub const FACTOR_TOL: f64 = 1e-7;

/// Dilations U: A′ → B⊗E of the channel and V: B → F⊗E′ of a degrading map, with a unitary
/// X_F such that (X_F ⊗ SWAP_{EE′})VU = sign·VU.
#[derive(Debug, Clone)]
pub struct TypeIDilation {
    /// (dB·dE) × dA′
    pub u: CMat,
    /// (dF·dE) × dB, output ordered F ⊗ E′.
    pub v: CMat,
    pub x_f: CMat,
    pub sign: f64,
    pub dim_in: usize,
    pub dim_out: usize,
    pub dim_env: usize,
    pub dim_f: usize,
}

/// Rows of `m` reordered as tensor factors (columns untouched).
pub(crate) fn permute_rows(m: &CMat, dims: &[usize], perm: &[usize]) -> CMat {
    let p = linalg::permutation_indices(dims, perm);
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(p[i], j)])
}

impl TypeIDilation {
    /// VU: A′ → F⊗E⊗E′.
    pub fn vu(&self) -> CMat {
        let raw = linalg::kron(&self.v, &linalg::eye(self.dim_env)) * &self.u;
        permute_rows(&raw, &[self.dim_f, self.dim_env, self.dim_env], &[0, 2, 1])
    }

    /// (X_F ⊗ SWAP_{EE′}) on F⊗E⊗E′.
    pub fn symmetry_operator(&self) -> CMat {
        let de = self.dim_env;
        linalg::kron(&self.x_f, &linalg::swap_operator(de, de))
    }

    /// max |(X_F ⊗ SWAP)VU − sign·VU|.
    pub fn symmetry_residual(&self) -> f64 {
        let vu = self.vu();
        linalg::max_abs(&(self.symmetry_operator() * &vu - &vu * r(self.sign)))
    }

    pub fn involution_residual(&self) -> f64 {
        linalg::max_abs(&(&self.x_f * &self.x_f - linalg::eye(self.dim_f)))
    }

    pub fn isometry_residual(&self) -> f64 {
        isometry_defect(&self.u).max(isometry_defect(&self.v))
    }

    /// The channel ρ ↦ Tr_E UρU†.
    pub fn channel(&self) -> Result<Channel> {
        Ok(Channel::new(kraus_of(&self.u, self.dim_out, self.dim_env))?)
    }

    /// Largest deviation between Tr_{FE′} VUρ(VU)† and Tr_B UρU† over the matrix units |i⟩⟨j|.
    pub fn complement_residual(&self) -> f64 {
        let (de, df) = (self.dim_env, self.dim_f);
        let vu = self.vu();
        let mut worst: f64 = 0.0;
        for i in 0..self.dim_in {
            for j in 0..self.dim_in {
                let mut unit = linalg::zeros(self.dim_in, self.dim_in);
                unit[(i, j)] = r(1.0);
                let a = linalg::ptrace(&(&vu * &unit * vu.adjoint()), &[df, de, de], &[1]);
                let b = linalg::ptrace(&(&self.u * &unit * self.u.adjoint()), &[self.dim_out, de], &[1]);
                worst = worst.max(linalg::max_abs(&(a - b)));
            }
        }
        worst
    }
}

/// Kraus operators of ρ ↦ Tr_E UρU† for an isometry into B⊗E.
fn kraus_of(u: &CMat, db: usize, de: usize) -> Vec<CMat> {
    let din = u.ncols();
    (0..de).map(|e| CMat::from_fn(db, din, |b, i| u[(b * de + e, i)])).collect()
}

/// Lemma 1 construction from a degrading map M: B → E given by its Choi matrix on B⊗E.
///
/// With V₀ a dilation of M, W = (V₀U⊗|0⟩ + SWAP·V₀U⊗|1⟩)/√2 is an isometry into F₀⊗G⊗E⊗E′ and
/// W = VU for an isometry V: B → F₀G⊗E′, with X_F = 1_{F₀}⊗σ_x.
pub fn symmetrized_dilation(channel: &Channel, degrading_choi: &CMat) -> Result<TypeIDilation> {
    let dil = channel.dilation();
    let (din, db, de) = (channel.din(), channel.dout(), dil.env_dim());
    let dbh = dil.out_dim();
    if degrading_choi.nrows() != db * de {
        return Err(psc_matqi::Error::DimensionMismatch(format!(
            "degrading Choi of size {} for B⊗E = {db}⊗{de}",
            degrading_choi.nrows()
        ))
        .into());
    }
    let u_full = linalg::kron(&dil.out_basis, &linalg::eye(de)) * &dil.u;

    let m = kraus_from_choi(&psc_channels::ChoiMatrix::new(degrading_choi.clone(), db, de)?)?;
    let nf = m.kraus().len();
    let mut v0 = linalg::zeros(nf * de, db);
    for (f, k) in m.kraus().iter().enumerate() {
        for e in 0..de {
            for b in 0..db {
                v0[(f * de + e, b)] = k[(e, b)];
            }
        }
    }
    // V₀U on F₀⊗E⊗E′
    let v0u = permute_rows(&(linalg::kron(&v0, &linalg::eye(de)) * &u_full), &[nf, de, de], &[0, 2, 1]);
    let swapped = permute_rows(&v0u, &[nf, de, de], &[0, 2, 1]);
    let h = 1.0 / 2f64.sqrt();
    let rows = nf * de * de;
    // W on F₀⊗E⊗E′⊗G
    let mut w = linalg::zeros(rows * 2, din);
    for x in 0..rows {
        for i in 0..din {
            w[(2 * x, i)] = v0u[(x, i)] * r(h);
            w[(2 * x + 1, i)] = swapped[(x, i)] * r(h);
        }
    }
    // reorder to (F₀, G, E′, E) so that W = (V ⊗ 1_E)U can be read off
    let w_fe = permute_rows(&w, &[nf, de, de, 2], &[0, 3, 2, 1]);
    let dx = nf * 2 * de;
    let wt = CMat::from_fn(dx, de * din, |x, k| w_fe[(x * de + k / din, k % din)]);
    let ut = CMat::from_fn(dbh, de * din, |b, k| dil.u[(b * de + k / din, k % din)]);
    let ut_pinv = ut.clone().pseudo_inverse(1e-12).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let vh = &wt * ut_pinv;
    let mut v = &vh * dil.out_basis.adjoint();
    if dbh < db {
        let q = linalg::orth_complement(&dil.out_basis);
        let range = orthonormal_range(&vh);
        let comp = linalg::orth_complement(&range);
        if comp.ncols() < q.ncols() {
            return Err(Error::InvalidParameter("F⊗E′ too small to complete V".into()));
        }
        v += comp.columns(0, q.ncols()) * q.adjoint();
    }
    let out = TypeIDilation {
        u: u_full,
        v,
        x_f: linalg::kron(&linalg::eye(nf), &linalg::pauli_x()),
        sign: 1.0,
        dim_in: din,
        dim_out: db,
        dim_env: de,
        dim_f: 2 * nf,
    };
    let w_target = permute_rows(&w, &[nf, de, de, 2], &[0, 3, 1, 2]);
    let resid = linalg::max_abs(&(out.vu() - w_target)).max(isometry_defect(&out.v));
    if resid > FACTOR_TOL {
        return Err(Error::Factorization(resid));
    }
    Ok(out)
}

fn orthonormal_range(m: &CMat) -> CMat {
    let (vals, vecs) = linalg::support(&(m * m.adjoint()));
    vecs.columns(0, vals.len()).into_owned()
}

/// Direct dilation of a Schur-multiplier channel: U|i⟩ = |i⟩|φ_i⟩, V|i⟩ = |i⟩|φ_i⟩ with
/// ⟨φ_j|φ_i⟩ = S_ij, so VU|i⟩ = |i⟩|φ_i⟩|φ_i⟩ and X_F = 1.
pub fn schur_direct_dilation(s: &CMat) -> Result<TypeIDilation> {
    let phi = schur_vectors(s)?;
    let (k, d) = phi.shape();
    let mut u = linalg::zeros(d * k, d);
    for i in 0..d {
        for e in 0..k {
            u[(i * k + e, i)] = phi[(e, i)];
        }
    }
    Ok(TypeIDilation { v: u.clone(), u, x_f: linalg::eye(d), sign: 1.0, dim_in: d, dim_out: d, dim_env: k, dim_f: d })
}

/// Entropies of ψ^{AFEE′} = (1⊗VU)|φ⟩ entering I(A⟩B) = S(F|E′).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct IdentityCheck {
    pub coherent_information: f64,
    pub s_f_given_e_prime: f64,
    pub s_af_given_e_prime: f64,
}

impl IdentityCheck {
    pub fn max_violation(&self) -> f64 {
        (self.coherent_information - self.s_f_given_e_prime).abs().max(self.s_af_given_e_prime.abs())
    }
}

pub fn degradable_identity(dil: &TypeIDilation, phi: &CVec, da: usize) -> Result<IdentityCheck> {
    let din = dil.dim_in;
    if phi.len() != da * din {
        return Err(psc_matqi::Error::DimensionMismatch(format!("test state of length {} on {da}⊗{din}", phi.len())).into());
    }
    let (db, de, df) = (dil.dim_out, dil.dim_env, dil.dim_f);
    let s = |v: &CVec, dims: &[usize], keep: &[usize]| linalg::von_neumann_raw(&linalg::ptrace_pure(v, dims, keep));
    let abe = linalg::kron(&linalg::eye(da), &dil.u) * phi;
    let dims = [da, db, de];
    let coherent_information = s(&abe, &dims, &[1]) - s(&abe, &dims, &[0, 1]);
    let psi = linalg::kron(&linalg::eye(da), &dil.vu()) * phi;
    let dims = [da, df, de, de];
    let se2 = s(&psi, &dims, &[3]);
    Ok(IdentityCheck {
        coherent_information,
        s_f_given_e_prime: s(&psi, &dims, &[1, 3]) - se2,
        s_af_given_e_prime: s(&psi, &dims, &[0, 1, 3]) - se2,
    })
}

/// I(A⟩B) for the purification of ρ, evaluated as S(F|E′).
pub fn coherent_information_via_degrading(dil: &TypeIDilation, rho: &CMat) -> Result<IdentityCheck> {
    let (phi, rk) = linalg::purify(rho);
    // purify gives |φ⟩ on A′⊗R; reorder to R⊗A′
    let phi = linalg::permute_vec(&phi, &[dil.dim_in, rk], &[1, 0]);
    degradable_identity(dil, &phi, rk)
}
