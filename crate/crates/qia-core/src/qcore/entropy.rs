//! Von Neumann entropy and the Holevo quantity.
//!
//! Eigenvalues come from a closed form at dimension 2 and cyclic Jacobi
//! sweeps above that, which is plenty for the ≤64-dimensional matrices this
//! kernel produces.

use super::{ComplexAmp, DensityMatrix, QcoreError, TOL};

/// S(ρ) = −Tr(ρ log₂ ρ) = −Σ λ log₂ λ, in bits, with 0·log 0 := 0.
///
/// Rejects non-Hermitian input; eigenvalues below −1e-9 are a caller bug,
/// tiny negative round-off is clamped to zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64, QcoreError> {
    if !rho.is_hermitian(TOL) {
        return Err(QcoreError::NotHermitian);
    }
    let mut s = 0.0;
    for lambda in hermitian_eigenvalues(rho) {
        if lambda < -TOL {
            return Err(QcoreError::InvalidProbabilities(format!(
                "negative eigenvalue {lambda}"
            )));
        }
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s.max(0.0))
}

/// Holevo quantity χ = S(Σ pᵢ ρᵢ) − Σ pᵢ S(ρᵢ), in bits.
pub fn holevo(ensemble: &[(f64, DensityMatrix)]) -> Result<f64, QcoreError> {
    if ensemble.is_empty() {
        return Err(QcoreError::InvalidProbabilities("empty ensemble".into()));
    }
    let mut total = 0.0;
    for (p, _) in ensemble {
        if *p < 0.0 {
            return Err(QcoreError::InvalidProbabilities(format!(
                "negative probability {p}"
            )));
        }
        total += p;
    }
    if (total - 1.0).abs() > TOL {
        return Err(QcoreError::InvalidProbabilities(format!(
            "probabilities sum to {total}"
        )));
    }
    let avg = DensityMatrix::mixture(ensemble)?;
    let mut chi = von_neumann_entropy(&avg)?;
    for (p, rho) in ensemble {
        if *p > 0.0 {
            chi -= p * von_neumann_entropy(rho)?;
        }
    }
    // Concavity makes the quantity nonnegative; shave eigenvalue round-off.
    if chi < 0.0 && chi > -1e-9 {
        chi = 0.0;
    }
    Ok(chi)
}

/// Eigenvalues of a Hermitian matrix, unordered.
pub fn hermitian_eigenvalues(m: &DensityMatrix) -> Vec<f64> {
    let dim = m.dim();
    if dim == 2 {
        // Closed form: mean ± sqrt(((a-d)/2)^2 + |b|^2).
        let a = m.entry(0, 0).re;
        let d = m.entry(1, 1).re;
        let b = m.entry(0, 1);
        let mid = (a + d) / 2.0;
        let rad = ((a - d) / 2.0).hypot(b.norm());
        return vec![mid - rad, mid + rad];
    }
    jacobi_eigenvalues(m.entries().to_vec(), dim)
}

/// Cyclic Jacobi on a Hermitian matrix: rotate away each off-diagonal entry
/// in sweeps until the off-diagonal Frobenius norm drops below 1e-12.
fn jacobi_eigenvalues(mut a: Vec<ComplexAmp>, dim: usize) -> Vec<f64> {
    let at = |a: &[ComplexAmp], r: usize, c: usize| a[r * dim + c];
    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..dim)
            .flat_map(|r| (0..dim).map(move |c| (r, c)))
            .filter(|(r, c)| r != c)
            .map(|(r, c)| at(&a, r, c).norm_sqr())
            .sum();
        if off.sqrt() < 1e-12 {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = at(&a, p, q);
                if apq.norm() < 1e-300 {
                    continue;
                }
                let app = at(&a, p, p).re;
                let aqq = at(&a, q, q).re;
                // Phase that makes the pivot real, then a standard 2x2
                // symmetric rotation.
                let phase = apq / apq.norm();
                let g = apq.norm();
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns: col_p' = c*col_p - s*conj(phase)... applied as
                // unitary similarity A <- J^H A J with
                // J[p][p]=c, J[p][q]=s*phase, J[q][p]=-s*conj(phase), J[q][q]=c.
                let jpp = ComplexAmp::new(c, 0.0);
                let jpq = phase * s;
                let jqp = -phase.conj() * s;
                let jqq = ComplexAmp::new(c, 0.0);
                // A <- A J (columns p and q)
                for r in 0..dim {
                    let arp = at(&a, r, p);
                    let arq = at(&a, r, q);
                    a[r * dim + p] = arp * jpp + arq * jqp;
                    a[r * dim + q] = arp * jpq + arq * jqq;
                }
                // A <- J^H A (rows p and q)
                for col in 0..dim {
                    let apc = at(&a, p, col);
                    let aqc = at(&a, q, col);
                    a[p * dim + col] = jpp.conj() * apc + jqp.conj() * aqc;
                    a[q * dim + col] = jpq.conj() * apc + jqq.conj() * aqc;
                }
            }
        }
    }
    (0..dim).map(|i| at(&a, i, i).re).collect()
}
