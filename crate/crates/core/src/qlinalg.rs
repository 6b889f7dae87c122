//! Dense complex linear algebra for Hilbert-space dimensions 2 and 4.
//!
//! Everything here is a pure function over small `Copy` value types:
//! Kronecker products, partial traces, adjoints, and Hermitian matrix
//! exponentials via exact eigendecomposition (closed form at dimension 2,
//! cyclic Jacobi at dimension 4). No general-N machinery on purpose.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Complex amplitude over the crate's scalar type.
pub type C<T> = Complex<T>;

/// Which tensor factor survives a partial trace. The system q-bit is the
/// left factor, the probe the right, in the fixed basis |00>,|01>,|10>,|11>.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Probe,
}

/// Dense complex vector of fixed dimension 2 or 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVec<T, const N: usize> {
    entries: [C<T>; N],
}

/// Dense complex matrix of fixed dimension 2 or 4, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat<T, const N: usize> {
    entries: [[C<T>; N]; N],
}

pub type CVec2<T> = CVec<T, 2>;
pub type CVec4<T> = CVec<T, 4>;
pub type CMat2<T> = CMat<T, 2>;
pub type CMat4<T> = CMat<T, 4>;

impl<T: Scalar, const N: usize> CVec<T, N> {
    pub fn new(entries: [C<T>; N]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self {
            entries: [C::new(T::zero(), T::zero()); N],
        }
    }

    /// Standard basis vector `e_k`.
    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.entries[k] = C::new(T::one(), T::zero());
        v
    }

    pub fn entries(&self) -> &[C<T>; N] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> C<T> {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: C<T>) {
        self.entries[i] = value;
    }

    /// Conjugating inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> C<T> {
        let mut acc = C::new(T::zero(), T::zero());
        for i in 0..N {
            acc += self.entries[i].conj() * other.entries[i];
        }
        acc
    }

    pub fn norm_sqr(&self) -> T {
        let mut acc = T::zero();
        for e in &self.entries {
            acc += e.norm_sqr();
        }
        acc
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: C<T>) -> Self {
        let mut out = *self;
        for e in &mut out.entries {
            *e *= factor;
        }
        out
    }

    pub fn scale_re(&self, factor: T) -> Self {
        self.scale(C::new(factor, T::zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            out.entries[i] += other.entries[i];
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            out.entries[i] -= other.entries[i];
        }
        out
    }

    /// Outer product `|self><other|`.
    pub fn outer(&self, other: &Self) -> CMat<T, N> {
        let mut m = CMat::zero();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = self.entries[i] * other.entries[j].conj();
            }
        }
        m
    }

    /// Largest entry modulus of the difference, ignoring global phase is
    /// the caller's business; this is a plain max-norm distance.
    pub fn max_diff(&self, other: &Self) -> T {
        let mut m = T::zero();
        for i in 0..N {
            m = m.max((self.entries[i] - other.entries[i]).norm());
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }

    /// Multiply every entry by the phase that makes the first entry of
    /// modulus above `threshold` real and non-negative. Fixes the global
    /// phase so outputs are reproducible.
    pub fn canonicalize_phase(&self, threshold: T) -> Self {
        for i in 0..N {
            let a = self.entries[i];
            let r = a.norm();
            if r > threshold {
                let phase = a.conj().scale(r.recip());
                let mut out = self.scale(phase);
                // Pin the pivot entry exactly real.
                out.entries[i] = C::new(r, T::zero());
                return out;
            }
        }
        *self
    }
}

impl<T: Scalar> CVec2<T> {
    /// Orthogonal complement with the fixed convention
    /// `(a, b) -> (-conj(b), conj(a))`.
    pub fn orthogonal(&self) -> Self {
        Self::new([-self.entries[1].conj(), self.entries[0].conj()])
    }
}

impl<T: Scalar, const N: usize> CMat<T, N> {
    pub fn new(entries: [[C<T>; N]; N]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self {
            entries: [[C::new(T::zero(), T::zero()); N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.entries[i][i] = C::new(T::one(), T::zero());
        }
        m
    }

    /// Build from real entries, mostly for gates and test fixtures.
    pub fn from_re(entries: [[T; N]; N]) -> Self {
        let mut m = Self::zero();
        for (i, row) in entries.iter().enumerate() {
            for (j, value) in row.iter().enumerate() {
                m.entries[i][j] = C::new(*value, T::zero());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C<T>) {
        self.entries[i][j] = value;
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            for j in 0..N {
                out.entries[i][j] += other.entries[i][j];
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            for j in 0..N {
                out.entries[i][j] -= other.entries[i][j];
            }
        }
        out
    }

    pub fn scale(&self, factor: C<T>) -> Self {
        let mut out = *self;
        for i in 0..N {
            for j in 0..N {
                out.entries[i][j] *= factor;
            }
        }
        out
    }

    pub fn scale_re(&self, factor: T) -> Self {
        self.scale(C::new(factor, T::zero()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..N {
            for j in 0..N {
                let mut acc = C::new(T::zero(), T::zero());
                for k in 0..N {
                    acc += self.entries[i][k] * other.entries[k][j];
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &CVec<T, N>) -> CVec<T, N> {
        let mut out = CVec::zero();
        for i in 0..N {
            let mut acc = C::new(T::zero(), T::zero());
            for j in 0..N {
                acc += self.entries[i][j] * v.entries[j];
            }
            out.entries[i] = acc;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..N {
            for j in 0..N {
                out.entries[i][j] = self.entries[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C<T> {
        let mut acc = C::new(T::zero(), T::zero());
        for i in 0..N {
            acc += self.entries[i][i];
        }
        acc
    }

    /// Max-norm: largest entry modulus.
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for row in &self.entries {
            for e in row {
                m = m.max(e.norm());
            }
        }
        m
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_diff(&self, other: &Self) -> T {
        self.sub(other).max_abs()
    }

    pub fn frobenius_norm(&self) -> T {
        let mut acc = T::zero();
        for row in &self.entries {
            for e in row {
                acc += e.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Deviation from hermiticity, `max |M - M'|`.
    pub fn hermiticity_deviation(&self) -> T {
        self.max_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|row| row.iter().all(|e| e.re.is_finite() && e.im.is_finite()))
    }

    /// Error unless `max |M - M'| <= tol`.
    pub fn require_hermitian(&self, tol: T) -> Result<()> {
        let dev = self.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NotHermitian {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }

    /// Error unless `max |U'U - 1| <= tol`.
    pub fn require_unitary(&self, tol: T) -> Result<()> {
        let dev = self.adjoint().mul(self).max_diff(&Self::identity());
        if dev > tol {
            return Err(Error::NotUnitary {
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

/// 2x2 identity.
pub fn identity2<T: Scalar>() -> CMat2<T> {
    CMat2::identity()
}

/// 4x4 identity.
pub fn identity4<T: Scalar>() -> CMat4<T> {
    CMat4::identity()
}

pub fn sigma_x<T: Scalar>() -> CMat2<T> {
    CMat2::from_re([[T::zero(), T::one()], [T::one(), T::zero()]])
}

pub fn sigma_y<T: Scalar>() -> CMat2<T> {
    let mut m = CMat2::zero();
    m.set(0, 1, C::new(T::zero(), -T::one()));
    m.set(1, 0, C::new(T::zero(), T::one()));
    m
}

pub fn sigma_z<T: Scalar>() -> CMat2<T> {
    CMat2::from_re([[T::one(), T::zero()], [T::zero(), -T::one()]])
}

/// `n . sigma` for a Bloch 3-vector (not necessarily unit).
pub fn bloch_dot<T: Scalar>(n: [T; 3]) -> CMat2<T> {
    let mut m = CMat2::zero();
    m.set(0, 0, C::new(n[2], T::zero()));
    m.set(1, 1, C::new(-n[2], T::zero()));
    m.set(0, 1, C::new(n[0], -n[1]));
    m.set(1, 0, C::new(n[0], n[1]));
    m
}

/// Kronecker product with the system as the left factor, so the joint
/// basis is ordered |00>,|01>,|10>,|11>.
pub fn tensor_product<T: Scalar>(a: &CMat2<T>, b: &CMat2<T>) -> CMat4<T> {
    let mut out = CMat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, a.get(i, j) * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Kronecker product of vectors in the same basis ordering.
pub fn tensor_product_vec<T: Scalar>(a: &CVec2<T>, b: &CVec2<T>) -> CVec4<T> {
    let mut out = CVec4::zero();
    for i in 0..2 {
        for k in 0..2 {
            out.set(2 * i + k, a.get(i) * b.get(k));
        }
    }
    out
}

/// Trace over the discarded factor. `Tr(output) = Tr(input)`.
pub fn partial_trace<T: Scalar>(m: &CMat4<T>, keep: Subsystem) -> CMat2<T> {
    let mut out = CMat2::zero();
    match keep {
        Subsystem::System => {
            for i in 0..2 {
                for j in 0..2 {
                    let mut acc = C::new(T::zero(), T::zero());
                    for p in 0..2 {
                        acc += m.get(2 * i + p, 2 * j + p);
                    }
                    out.set(i, j, acc);
                }
            }
        }
        Subsystem::Probe => {
            for p in 0..2 {
                for q in 0..2 {
                    let mut acc = C::new(T::zero(), T::zero());
                    for i in 0..2 {
                        acc += m.get(2 * i + p, 2 * i + q);
                    }
                    out.set(p, q, acc);
                }
            }
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in
/// descending order with orthonormal, phase-canonical eigenvectors.
#[derive(Debug, Clone, Copy)]
pub struct EigenH<T, const N: usize> {
    pub values: [T; N],
    pub vectors: [CVec<T, N>; N],
}

/// Hermitian eigendecomposition, implemented at dimensions 2 and 4.
pub trait HermEigen<T: Scalar, const N: usize> {
    /// Assumes hermiticity; callers validate inputs where the contract
    /// requires it. Only the lower/upper symmetrized part is used.
    fn eigh(&self) -> EigenH<T, N>;
}

impl<T: Scalar> HermEigen<T, 2> for CMat2<T> {
    fn eigh(&self) -> EigenH<T, 2> {
        eigh2(self)
    }
}

impl<T: Scalar> HermEigen<T, 4> for CMat4<T> {
    fn eigh(&self) -> EigenH<T, 4> {
        eigh4(self)
    }
}

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix.
fn eigh2<T: Scalar>(m: &CMat2<T>) -> EigenH<T, 2> {
    let a = m.get(0, 0).re;
    let c = m.get(1, 1).re;
    // Symmetrize the off-diagonal so tiny hermiticity drift cannot skew
    // the rotation.
    let b = (m.get(0, 1) + m.get(1, 0).conj()).scale(T::half());
    let b_norm = b.norm();

    let scale = a.abs().max(c.abs()).max(b_norm).max(T::one());
    let tiny = T::epsilon() * scale;

    if b_norm <= tiny {
        // Already diagonal; order deterministically.
        return if a >= c {
            EigenH {
                values: [a, c],
                vectors: [CVec2::basis(0), CVec2::basis(1)],
            }
        } else {
            EigenH {
                values: [c, a],
                vectors: [CVec2::basis(1), CVec2::basis(0)],
            }
        };
    }

    let mean = (a + c) * T::half();
    let half_gap = (a - c) * T::half();
    let radius = (half_gap * half_gap + b_norm * b_norm).sqrt();
    let hi = mean + radius;
    let lo = mean - radius;

    // Null-space vector of (A - hi). Two algebraically equivalent forms
    // exist; pick the one that never subtracts the dominant diagonal
    // entry from hi, or the cancellation wrecks small rotations.
    let raw = if a >= c {
        CVec2::new([C::new(half_gap + radius, T::zero()), b.conj()])
    } else {
        CVec2::new([b, C::new(radius - half_gap, T::zero())])
    };
    let v_hi = raw.scale_re(raw.norm().recip());
    let v_lo = v_hi.orthogonal();

    let threshold = T::from_f64(1e-6);
    EigenH {
        values: [hi, lo],
        vectors: [
            v_hi.canonicalize_phase(threshold),
            v_lo.canonicalize_phase(threshold),
        ],
    }
}

const JACOBI_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Cyclic Jacobi eigendecomposition of a 4x4 Hermitian matrix, built on
/// the closed-form 2x2 solver for each pivot rotation.
fn eigh4<T: Scalar>(m: &CMat4<T>) -> EigenH<T, 4> {
    // Work on the symmetrized matrix so the iteration sees an exactly
    // Hermitian input.
    let mut a = m.add(&m.adjoint()).scale_re(T::half());
    let mut v = CMat4::identity();

    let scale = a.max_abs().max(T::one());
    let target = T::epsilon() * scale * T::from_f64(4.0);

    for _sweep in 0..40 {
        let mut off = T::zero();
        for (p, q) in JACOBI_PAIRS {
            off = off.max(a.get(p, q).norm());
        }
        if off <= target {
            break;
        }
        for (p, q) in JACOBI_PAIRS {
            if a.get(p, q).norm() <= target {
                continue;
            }
            let sub = CMat2::new([
                [a.get(p, p), a.get(p, q)],
                [a.get(p, q).conj(), a.get(q, q)],
            ]);
            let eig = eigh2(&sub);
            // Embed the 2x2 eigenvector matrix as a plane rotation.
            let mut j = CMat4::identity();
            j.set(p, p, eig.vectors[0].get(0));
            j.set(q, p, eig.vectors[0].get(1));
            j.set(p, q, eig.vectors[1].get(0));
            j.set(q, q, eig.vectors[1].get(1));
            a = j.adjoint().mul(&a).mul(&j);
            // Pin the rotated pivot to exactly zero and the diagonal real.
            a.set(p, q, C::new(T::zero(), T::zero()));
            a.set(q, p, C::new(T::zero(), T::zero()));
            a.set(p, p, C::new(a.get(p, p).re, T::zero()));
            a.set(q, q, C::new(a.get(q, q).re, T::zero()));
            v = v.mul(&j);
        }
    }

    // Sort descending; stable in the original index for exact ties.
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| {
        a.get(j, j)
            .re
            .partial_cmp(&a.get(i, i).re)
            .expect("eigenvalues are finite")
    });

    let threshold = T::from_f64(1e-6);
    let mut values = [T::zero(); 4];
    let mut vectors = [CVec4::zero(); 4];
    for (slot, &idx) in order.iter().enumerate() {
        values[slot] = a.get(idx, idx).re;
        let col = CVec4::new([v.get(0, idx), v.get(1, idx), v.get(2, idx), v.get(3, idx)]);
        vectors[slot] = col.canonicalize_phase(threshold);
    }

    EigenH { values, vectors }
}

/// Exact `exp(-i * theta * h)` for Hermitian `h` via eigendecomposition.
///
/// Valid for any angle, not just weak couplings, which is what makes the
/// large-angle oracle tests possible.
pub fn expm_hermitian<T: Scalar, const N: usize>(h: &CMat<T, N>, theta: T) -> Result<CMat<T, N>>
where
    CMat<T, N>: HermEigen<T, N>,
{
    if !h.is_finite() {
        return Err(Error::NonFinite {
            context: "expm_hermitian input",
        });
    }
    h.require_hermitian(T::TOL_EXACT)?;

    let eig = h.eigh();
    let mut out = CMat::zero();
    for k in 0..N {
        let phase = C::from_polar(T::one(), -theta * eig.values[k]);
        let proj = eig.vectors[k].outer(&eig.vectors[k]);
        out = out.add(&proj.scale(phase));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M2 = CMat2<f64>;
    type M4 = CMat4<f64>;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    /// Independent brute-force Kronecker product used as the oracle.
    fn kron_oracle(a: &M2, b: &M2) -> M4 {
        let mut out = M4::zero();
        for r in 0..4 {
            for s in 0..4 {
                out.set(r, s, a.get(r / 2, s / 2) * b.get(r % 2, s % 2));
            }
        }
        out
    }

    /// Truncated Taylor series oracle for exp(-i theta H).
    fn expm_taylor(h: &M4, theta: f64) -> M4 {
        let mut out = M4::identity();
        let mut term = M4::identity();
        let factor = h.scale(c(0.0, -theta));
        for k in 1..40 {
            term = term.mul(&factor).scale_re(1.0 / k as f64);
            out = out.add(&term);
        }
        out
    }

    #[test]
    fn tensor_identity_times_identity() {
        assert_eq!(
            tensor_product(&identity2::<f64>(), &identity2()),
            M4::identity()
        );
    }

    #[test]
    fn tensor_sigma_z_sigma_x_block_structure() {
        let got = tensor_product(&sigma_z::<f64>(), &sigma_x());
        // Blocks [[sigma_x, 0], [0, -sigma_x]].
        let mut expect = M4::zero();
        expect.set(0, 1, c(1.0, 0.0));
        expect.set(1, 0, c(1.0, 0.0));
        expect.set(2, 3, c(-1.0, 0.0));
        expect.set(3, 2, c(-1.0, 0.0));
        assert_eq!(got, expect);
        assert_eq!(got, kron_oracle(&sigma_z(), &sigma_x()));
    }

    #[test]
    fn tensor_projector_controls_probe() {
        // |0><0| (x) sigma_x acts as sigma_x on the probe only when the
        // system is |0>.
        let p0 = M2::from_re([[1.0, 0.0], [0.0, 0.0]]);
        let got = tensor_product(&p0, &sigma_x());
        assert_eq!(got, kron_oracle(&p0, &sigma_x()));
        let psi = tensor_product_vec(&CVec2::basis(1), &CVec2::basis(0));
        assert_eq!(got.mul_vec(&psi), CVec4::zero());
    }

    #[test]
    fn tensor_bilinearity() {
        let x = sigma_x::<f64>();
        let y = sigma_y::<f64>();
        let z = sigma_z::<f64>();
        let a = c(0.3, -0.7);
        let b = c(-1.2, 0.4);
        let lhs = tensor_product(&x.scale(a).add(&y.scale(b)), &z);
        let rhs = tensor_product(&x, &z)
            .scale(a)
            .add(&tensor_product(&y, &z).scale(b));
        assert!(lhs.max_diff(&rhs) <= 1e-14);
    }

    #[test]
    fn partial_trace_product_state() {
        let rho_s = M2::new([[c(0.7, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.3, 0.0)]]);
        let rho_p = M2::new([[c(0.4, 0.0), c(0.0, 0.3)], [c(0.0, -0.3), c(0.6, 0.0)]]);
        let joint = tensor_product(&rho_s, &rho_p);
        assert!(partial_trace(&joint, Subsystem::System).max_diff(&rho_s) <= 1e-12);
        assert!(partial_trace(&joint, Subsystem::Probe).max_diff(&rho_p) <= 1e-12);
    }

    #[test]
    fn partial_trace_bell_state_is_maximally_mixed() {
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let mut phi = CVec4::<f64>::zero();
        phi.set(0, c(inv, 0.0));
        phi.set(3, c(inv, 0.0));
        let rho = phi.outer(&phi);
        let reduced = partial_trace(&rho, Subsystem::System);
        assert!(reduced.max_diff(&identity2::<f64>().scale_re(0.5)) <= 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace_and_is_linear() {
        let m = tensor_product(&sigma_x::<f64>(), &sigma_y()).add(&M4::identity().scale_re(0.25));
        let t_in = m.trace();
        for keep in [Subsystem::System, Subsystem::Probe] {
            let t_out = partial_trace(&m, keep).trace();
            assert!((t_in - t_out).norm() <= 1e-12);
        }
        let a = tensor_product(&sigma_z::<f64>(), &sigma_x());
        let b = tensor_product(&sigma_y::<f64>(), &sigma_y());
        let lhs = partial_trace(&a.add(&b), Subsystem::Probe);
        let rhs = partial_trace(&a, Subsystem::Probe).add(&partial_trace(&b, Subsystem::Probe));
        assert!(lhs.max_diff(&rhs) <= 1e-14);
    }

    #[test]
    fn partial_trace_of_product_scales_by_trace() {
        let a = M2::new([[c(0.5, 0.0), c(0.2, 0.1)], [c(0.2, -0.1), c(1.5, 0.0)]]);
        let b = M2::new([[c(0.9, 0.0), c(0.0, 0.4)], [c(0.0, -0.4), c(0.1, 0.0)]]);
        let got = partial_trace(&tensor_product(&a, &b), Subsystem::System);
        let expect = a.scale(b.trace());
        assert!(got.max_diff(&expect) <= 1e-12);
    }

    #[test]
    fn eigh2_known_spectra() {
        let eig = sigma_x::<f64>().eigh();
        assert!((eig.values[0] - 1.0).abs() <= 1e-15);
        assert!((eig.values[1] + 1.0).abs() <= 1e-15);
        // Eigenvector phase convention: first nonzero entry real positive.
        assert!(eig.vectors[0].get(0).im.abs() <= 1e-15);
        assert!(eig.vectors[0].get(0).re > 0.0);

        let diag = M2::from_re([[0.25, 0.0], [0.0, 0.75]]);
        let eig = diag.eigh();
        assert_eq!(eig.values, [0.75, 0.25]);
        assert_eq!(eig.vectors[0], CVec2::basis(1));
    }

    #[test]
    fn eigh_reconstructs_input() {
        let h2 = M2::new([[c(0.3, 0.0), c(0.4, -1.1)], [c(0.4, 1.1), c(-0.9, 0.0)]]);
        let eig = h2.eigh();
        let mut rebuilt = M2::zero();
        for k in 0..2 {
            rebuilt = rebuilt.add(
                &eig.vectors[k]
                    .outer(&eig.vectors[k])
                    .scale_re(eig.values[k]),
            );
        }
        assert!(rebuilt.max_diff(&h2) <= 1e-12);

        let h4 = tensor_product(&h2, &sigma_y()).add(&tensor_product(&sigma_x(), &identity2()));
        let eig = h4.eigh();
        let mut rebuilt = M4::zero();
        for k in 0..4 {
            rebuilt = rebuilt.add(
                &eig.vectors[k]
                    .outer(&eig.vectors[k])
                    .scale_re(eig.values[k]),
            );
        }
        assert!(rebuilt.max_diff(&h4) <= 1e-12);
        // Orthonormality.
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((eig.vectors[i].inner(&eig.vectors[j]).norm() - want).abs() <= 1e-12);
            }
        }
        // Descending order.
        for k in 0..3 {
            assert!(eig.values[k] >= eig.values[k + 1]);
        }
    }

    #[test]
    fn eigh4_sigma_z_tensor_sigma_x_spectrum() {
        let eig = tensor_product(&sigma_z::<f64>(), &sigma_x()).eigh();
        assert!((eig.values[0] - 1.0).abs() <= 1e-14);
        assert!((eig.values[1] - 1.0).abs() <= 1e-14);
        assert!((eig.values[2] + 1.0).abs() <= 1e-14);
        assert!((eig.values[3] + 1.0).abs() <= 1e-14);
    }

    #[test]
    fn expm_zero_angle_is_identity() {
        let h = tensor_product(&sigma_z::<f64>(), &sigma_x());
        let u = expm_hermitian(&h, 0.0).unwrap();
        assert!(u.max_diff(&M4::identity()) <= 1e-15);
    }

    #[test]
    fn expm_involutory_closed_form_and_taylor_oracle() {
        // (sigma_z (x) sigma_x)^2 = 1, so the series closes:
        // exp(-i e H) = cos(e) 1 - i sin(e) H.
        let h = tensor_product(&sigma_z::<f64>(), &sigma_x());
        for eps in [1e-3, 0.1, 0.7, 2.5] {
            let u = expm_hermitian(&h, eps).unwrap();
            let closed = M4::identity()
                .scale_re(eps.cos())
                .add(&h.scale(c(0.0, -eps.sin())));
            assert!(u.max_diff(&closed) <= 1e-12, "eps={eps}");
            assert!(u.max_diff(&expm_taylor(&h, eps)) <= 1e-12, "eps={eps}");
        }
    }

    #[test]
    fn expm_sigma_z_quarter_turn() {
        let u = expm_hermitian(&sigma_z::<f64>(), std::f64::consts::FRAC_PI_2).unwrap();
        let mut expect = M2::zero();
        expect.set(0, 0, c(0.0, -1.0));
        expect.set(1, 1, c(0.0, 1.0));
        assert!(u.max_diff(&expect) <= 1e-12);
    }

    #[test]
    fn expm_is_unitary_for_random_hermitian() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..32 {
            let mut h = M4::zero();
            for i in 0..4 {
                h.set(i, i, c(rng.gen_range(-1.0..1.0), 0.0));
                for j in (i + 1)..4 {
                    let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    h.set(i, j, v);
                    h.set(j, i, v.conj());
                }
            }
            let theta = rng.gen_range(-3.0..3.0);
            let u = expm_hermitian(&h, theta).unwrap();
            assert!(u.adjoint().mul(&u).max_diff(&M4::identity()) <= 1e-12);
        }
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let mut h = M2::zero();
        h.set(0, 1, c(1.0, 0.0));
        assert!(matches!(
            expm_hermitian(&h, 0.5),
            Err(Error::NotHermitian { .. })
        ));
    }
}
