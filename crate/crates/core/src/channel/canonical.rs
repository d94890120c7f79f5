use num_complex::Complex;
use num_traits::Zero;

use super::{CanonicalChannelParams, KrausPair};
use crate::error::{Error, Result};
use crate::linalg::svd::complement;
use crate::linalg::{fix_phase, inner, svd, ComplexMatrix};
use crate::scalar::Real;

/// Reduces a valid Kraus pair to its normal form `(p, η, ζ, U, V)`.
///
/// If no unitary remix makes the second operator rank one the pair is first
/// remixed with `[[x*, 1], [−1, x]]/√(1+|x|²)`, where `x` solves
/// `det(−C1 + x·C2) = 0`. Among the unmixed pair and both roots, the
/// candidate with the smallest second singular value of `C̃2` is used.
pub fn canonicalize<T: Real>(kp: &KrausPair<T>) -> Result<CanonicalChannelParams<T>> {
    kp.ensure_valid()?;

    let mut best = kp.clone();
    let mut best_s2 = svd(&kp.c2)?.s[1];
    for x in remix_roots(kp) {
        let cand = kp.remix(&remix_unitary(x));
        let s2 = svd(&cand.c2)?.s[1];
        if s2 < best_s2 {
            best = cand;
            best_s2 = s2;
        }
    }
    if best.c2.frobenius_norm() < T::zero_tol() {
        return Err(Error::SingleKraus);
    }

    let d = svd(&best.c2)?;
    let p = (d.s[0] * d.s[0]).min(T::one());
    let i = d.left(0);
    let j = d.right(0);

    let j_t = complement(&j);
    let k_t = best.c1.mat_vec(&j_t);
    let one_minus_p = T::one() - p;
    let k = if one_minus_p > T::zero_tol() {
        let s = one_minus_p.sqrt();
        best.c1.mat_vec(&j).into_iter().map(|z| z / s).collect::<Vec<_>>()
    } else {
        let mut k = complement(&k_t);
        fix_phase(&mut k);
        k
    };

    // C2 may carry any global phase e^{iε} without changing the channel; pick
    // it so that ζ = e^{iε}⟨k|i⟩ is real and non-negative.
    let ki = inner(&k, &i);
    let phase = if ki.norm() > T::zero_tol() {
        ki.conj() / ki.norm()
    } else {
        Complex::new(T::one(), T::zero())
    };
    let eta = inner(&k_t, &i) * phase;
    let zeta = ki.norm();

    let u = ComplexMatrix::from_columns(&[k_t, k]);
    let v = ComplexMatrix::from_columns(&[j_t, j]);
    let norm = (eta.norm_sqr() + zeta * zeta).sqrt();
    Ok(CanonicalChannelParams {
        p,
        eta: eta / norm,
        zeta: zeta / norm,
        u,
        v,
    })
}

/// Like [`canonicalize`], but a single-Kraus channel `ρ ↦ WρW†` maps to
/// `p = 0` with `U = W` and `V = I`.
pub fn canonicalize_or_unitary<T: Real>(kp: &KrausPair<T>) -> Result<CanonicalChannelParams<T>> {
    match canonicalize(kp) {
        Err(Error::SingleKraus) => {
            let c = if kp.c1.frobenius_norm() >= kp.c2.frobenius_norm() {
                &kp.c1
            } else {
                &kp.c2
            };
            let w = c.scale_real(T::two().sqrt() / c.frobenius_norm());
            CanonicalChannelParams::new(T::zero(), Complex::zero(), w, ComplexMatrix::identity(2))
        }
        other => other,
    }
}

fn remix_unitary<T: Real>(x: Complex<T>) -> ComplexMatrix<T> {
    let one = Complex::new(T::one(), T::zero());
    let n = (T::one() + x.norm_sqr()).sqrt();
    ComplexMatrix::from_row_major(2, 2, vec![x.conj(), one, -one, x])
        .expect("2x2 entries")
        .scale_real(T::one() / n)
}

/// Roots of `det(x·C2 − C1) = a x² + b x + c`.
fn remix_roots<T: Real>(kp: &KrausPair<T>) -> Vec<Complex<T>> {
    let (c, d) = (&kp.c1, &kp.c2);
    let qa = d.determinant_2x2();
    let qb = -(d[(0, 0)] * c[(1, 1)] + c[(0, 0)] * d[(1, 1)] - d[(0, 1)] * c[(1, 0)] - c[(0, 1)] * d[(1, 0)]);
    let qc = c.determinant_2x2();

    let scale = qa.norm().max(qb.norm()).max(qc.norm());
    if scale == T::zero() {
        return Vec::new();
    }
    if qa.norm() <= T::zero_tol() * scale {
        // Degenerate to linear.
        return if qb.norm() > T::zero_tol() * scale {
            vec![-qc / qb]
        } else {
            Vec::new()
        };
    }
    let disc = (qb * qb - qa * qc * T::lit(4.0)).sqrt();
    let sign = if (qb.conj() * disc).re >= T::zero() {
        T::one()
    } else {
        -T::one()
    };
    let q = (qb + disc * sign) * -T::half();
    if q.is_zero() {
        return vec![Complex::zero()];
    }
    vec![q / qa, qc / q]
}
