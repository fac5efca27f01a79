use psc_channels::Channel;
use psc_matqi::linalg::{self, r, CMat};

use psc_matqi::symmetric_projector;

use crate::dilation::{permute_rows, TypeIDilation};
use crate::{Error, Result};

/// Ñ = N ⊗ τ^{B₀} with the dilations Ũ, Ṽ of the type-I lift.
#[derive(Debug, Clone)]
pub struct TypeILift {
    pub channel: Channel,
    /// Ũ: A′ → (B⊗B₀)⊗(E⊗E₀), Ṽ: B⊗B₀ → F⊗(E′⊗E₀′), X̃_F = 1.
    pub dilation: TypeIDilation,
}

impl TypeILift {
    /// max |(1 − P)ṼŨ| with P the projector onto F ⊗ Sym²(E E₀) (antisymmetric part for sign −1).
    pub fn subspace_residual(&self) -> Result<f64> {
        let d = &self.dilation;
        let de = d.dim_env;
        let (ps, _) = symmetric_projector(de, 2)?;
        let p = if d.sign > 0.0 { ps } else { linalg::eye(de * de) - ps };
        let full = linalg::kron(&linalg::eye(d.dim_f), &p);
        let vu = d.vu();
        Ok(linalg::max_abs(&(&vu - full * &vu)))
    }
}

pub fn type_i_lift(channel: &Channel, dil: &TypeIDilation) -> Result<TypeILift> {
    let inv = dil.involution_residual();
    if inv > 1e-8 {
        return Err(Error::NotInvolution(inv));
    }
    if channel.din() != dil.dim_in || channel.dout() != dil.dim_out {
        return Err(psc_matqi::Error::DimensionMismatch("channel and dilation".into()).into());
    }
    let (db, de, df) = (dil.dim_out, dil.dim_env, dil.dim_f);
    let h = 1.0 / 2f64.sqrt();

    let mut ks = vec![];
    for k in channel.kraus() {
        for b in 0..2 {
            ks.push(linalg::kron(k, &CMat::from_column_slice(2, 1, (linalg::ket(2, b) * r(h)).as_slice())));
        }
    }
    let lifted = Channel::new(ks)?;

    // (|01⟩ + |10⟩)/√2 on B₀E₀
    let mut psi = linalg::zeros(4, 1);
    psi[(1, 0)] = r(h);
    psi[(2, 0)] = r(h);
    let u = permute_rows(&linalg::kron(&dil.u, &psi), &[db, de, 2, 2], &[0, 2, 1, 3]);

    let id = linalg::eye(df);
    let p_plus = (&id + &dil.x_f) * r(0.5);
    let p_minus = (&id - &dil.x_f) * r(0.5);
    let ie = linalg::eye(de);
    let cz = linalg::kron_all(&[&p_plus, &ie, &linalg::eye(2)]) + linalg::kron_all(&[&p_minus, &ie, &linalg::pauli_z()]);
    let v = cz * linalg::kron(&dil.v, &linalg::eye(2));

    Ok(TypeILift {
        channel: lifted,
        dilation: TypeIDilation {
            u,
            v,
            x_f: id,
            sign: dil.sign,
            dim_in: dil.dim_in,
            dim_out: 2 * db,
            dim_env: 2 * de,
            dim_f: df,
        },
    })
}
