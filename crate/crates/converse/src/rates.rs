use psc_matqi::linalg::binary_entropy;

/// Error floor √(1 − 1/d) for codes of dimension d over PPT channels.
pub fn ppt_error_bound(d: usize) -> f64 {
    (1.0 - 1.0 / d.max(1) as f64).sqrt()
}

/// Best fidelity for sending a d-dimensional code through n ideal qubits.
pub fn ideal_fidelity(n: u32, d: usize) -> f64 {
    let ratio = (n as f64 * std::f64::consts::LN_2 - (d.max(1) as f64).ln()).exp();
    ratio.sqrt().min(1.0)
}

/// (1 − ½h(p), h(½ + √(p(1−p)))) for the dephasing channel Z_p.
pub fn dephasing_assisted_rates(p: f64) -> (f64, f64) {
    let p = p.clamp(0.0, 1.0);
    let q = 0.5 + (p * (1.0 - p)).sqrt();
    (1.0 - 0.5 * binary_entropy(p), binary_entropy(q.min(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_edges() {
        assert_eq!(dephasing_assisted_rates(0.0), (1.0, 1.0));
        let (q, e) = dephasing_assisted_rates(0.5);
        assert!((q - 0.5).abs() < 1e-15 && e.abs() < 1e-15);
        assert_eq!(ideal_fidelity(3, 8), 1.0);
        assert_eq!(ppt_error_bound(1), 0.0);
    }
}
