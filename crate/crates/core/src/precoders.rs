//! The C2PO iteration and its building blocks, plus the infinite-precision
//! zero-forcing baseline.
//!
//! C2PO solves the relaxed 1-bit precoding problem by forward-backward
//! splitting: a gradient step on `||A x||^2 / 2` followed by the proximal
//! step of the box regularizer, with the final iterate quantized to the
//! 1-bit transmit alphabet `{+/-xi +/- j xi}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{adjoint_matvec, cdot, gram, matvec, ComplexMatrix, ComplexVector};

/// Where a trained schedule came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingProvenance {
    pub channel_kinds: Vec<String>,
    pub seed: u64,
    pub epochs: usize,
}

/// Per-iteration parameters of the (folded or unfolded) C2PO iteration.
///
/// `xi` is fixed by the power constraint as `sqrt(power / (2 B))` and stored
/// alongside the step sizes so a schedule is self-contained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecoderSchedule {
    pub t_max: usize,
    pub tau: Vec<f64>,
    pub rho: Vec<f64>,
    pub xi: f64,
    pub power: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training_provenance: Option<TrainingProvenance>,
}

/// Alphabet scale for a given power constraint and antenna count.
pub fn xi_for(power: f64, antennas: usize) -> f64 {
    (power / (2.0 * antennas as f64)).sqrt()
}

impl PrecoderSchedule {
    /// Schedule with the same `tau`/`rho` at every iteration.
    pub fn constant(
        t_max: usize,
        tau: f64,
        rho: f64,
        power: f64,
        antennas: usize,
    ) -> Result<Self> {
        let schedule = Self {
            t_max,
            tau: vec![tau; t_max],
            rho: vec![rho; t_max],
            xi: xi_for(power, antennas),
            power,
            training_provenance: None,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    /// Checks internal consistency. `t_max = 0` is allowed and means
    /// "quantize the initializer" (quantized MRT).
    pub fn validate(&self) -> Result<()> {
        if self.tau.len() != self.t_max || self.rho.len() != self.t_max {
            return Err(Error::InvalidConfig(format!(
                "schedule: t_max {} with {} tau and {} rho values",
                self.t_max,
                self.tau.len(),
                self.rho.len()
            )));
        }
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !self.tau.iter().chain(self.rho.iter()).all(|v| positive(*v)) {
            return Err(Error::InvalidConfig(
                "schedule: tau and rho must be finite and positive".into(),
            ));
        }
        if !positive(self.xi) || !positive(self.power) {
            return Err(Error::InvalidConfig(
                "schedule: xi and power must be finite and positive".into(),
            ));
        }
        Ok(())
    }

    /// Errors unless the schedule was built for `antennas` transmit antennas.
    pub fn check_antennas(&self, antennas: usize) -> Result<()> {
        let expected = xi_for(self.power, antennas);
        if (self.xi - expected).abs() > 1e-12 * expected.max(1.0) {
            return Err(Error::InvalidConfig(format!(
                "schedule xi {} does not match sqrt(P/(2B)) = {} for B = {}",
                self.xi, expected, antennas
            )));
        }
        Ok(())
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json + "\n")?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let schedule: Self = serde_json::from_str(&text)?;
        schedule.validate()?;
        Ok(schedule)
    }
}

/// Output of a precoder: the transmit vector, the receive-side scaling
/// factor, and optionally the iterate trajectory (initializer included).
#[derive(Debug, Clone)]
pub struct PrecodeResult {
    pub x: ComplexVector,
    pub beta: Complex64,
    pub trajectory: Option<Vec<ComplexVector>>,
}

/// Residual matrix `A = (I - s s^H / ||s||^2) H`, which annihilates every
/// `x` with `H x` proportional to `s`.
pub fn build_a(h: &ComplexMatrix, s: &ComplexVector) -> Result<ComplexMatrix> {
    if h.rows() != s.len() {
        return Err(Error::DimensionMismatch(format!(
            "build_a: {}x{} channel with {} symbols",
            h.rows(),
            h.cols(),
            s.len()
        )));
    }
    let norm_sq = s.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::ZeroSymbolVector);
    }
    // v = s^H H, then A = H - s v / ||s||^2
    let v = adjoint_matvec_rowspace(h, s);
    let (u, b) = (h.rows(), h.cols());
    let mut entries = Vec::with_capacity(u * b);
    for r in 0..u {
        let su = s[r] / norm_sq;
        for c in 0..b {
            entries.push(h.get(r, c) - su * v[c]);
        }
    }
    Ok(ComplexMatrix::from_raw(u, b, entries))
}

/// Row-space projection `s^H H` as a length-`cols` vector.
fn adjoint_matvec_rowspace(h: &ComplexMatrix, s: &ComplexVector) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); h.cols()];
    for r in 0..h.rows() {
        let sc = s[r].conj();
        for (c, hij) in h.row(r).iter().enumerate() {
            v[c] += sc * hij;
        }
    }
    v
}

/// Least-squares symbol scale `alpha = s^H H x / ||s||^2`, the minimizer of
/// `||alpha s - H x||^2`.
pub fn alpha_hat(s: &ComplexVector, h: &ComplexMatrix, x: &ComplexVector) -> Result<Complex64> {
    let norm_sq = s.norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::ZeroSymbolVector);
    }
    let hx = matvec(h, x)?;
    Ok(cdot(s, &hx)? / norm_sq)
}

fn clip(v: f64, limit: f64) -> f64 {
    v.min(limit).max(-limit)
}

/// Proximal step: scale by `rho` and clip real and imaginary parts to the
/// box `[-xi, xi]`.
pub fn prox_g(z: &ComplexVector, rho: f64, xi: f64) -> ComplexVector {
    debug_assert!(rho > 0.0 && xi > 0.0);
    ComplexVector::from_raw(
        z.as_slice()
            .iter()
            .map(|v| Complex64::new(clip(rho * v.re, xi), clip(rho * v.im, xi)))
            .collect(),
    )
}

fn sign(v: f64) -> f64 {
    // sign(0) := +1 so the quantizer is deterministic everywhere.
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Element-wise 1-bit quantizer `Q(x; xi) = xi sign(Re) + j xi sign(Im)`.
pub fn quantize_1bit(x: &ComplexVector, xi: f64) -> ComplexVector {
    debug_assert!(xi > 0.0);
    ComplexVector::from_raw(
        x.as_slice()
            .iter()
            .map(|v| Complex64::new(xi * sign(v.re), xi * sign(v.im)))
            .collect(),
    )
}

/// Receive-side scaling factor `beta = ||s||^2 / (s^H H x)`.
pub fn beta_hat(s: &ComplexVector, h: &ComplexMatrix, xq: &ComplexVector) -> Result<Complex64> {
    let hx = matvec(h, xq)?;
    beta_from_received(s, &hx)
}

/// `beta` from the noiseless receive vector `H x`.
pub fn beta_from_received(s: &ComplexVector, hx: &ComplexVector) -> Result<Complex64> {
    let denom = cdot(s, hx)?;
    let mag = denom.norm();
    if !(mag > 0.0) || !mag.is_finite() {
        return Err(Error::DegeneratePrecoding { magnitude: mag });
    }
    Ok(s.norm_sq() / denom)
}

/// Runs the C2PO iteration from precomputed `x0 = H^H s` and `A^H A`.
pub fn c2po_precomputed(
    x0: &ComplexVector,
    aha: &ComplexMatrix,
    h: &ComplexMatrix,
    s: &ComplexVector,
    schedule: &PrecoderSchedule,
    capture_trajectory: bool,
) -> Result<PrecodeResult> {
    schedule.validate()?;
    schedule.check_antennas(h.cols())?;
    let mut trajectory = capture_trajectory.then(|| vec![x0.clone()]);
    let mut x = x0.clone();
    for t in 0..schedule.t_max {
        let grad = matvec(aha, &x)?;
        let tau = schedule.tau[t];
        let z = ComplexVector::from_raw(
            x.as_slice()
                .iter()
                .zip(grad.as_slice())
                .map(|(xi_, gi)| xi_ - tau * gi)
                .collect(),
        );
        x = prox_g(&z, schedule.rho[t], schedule.xi);
        if let Some(tr) = trajectory.as_mut() {
            tr.push(x.clone());
        }
    }
    let xq = quantize_1bit(&x, schedule.xi);
    let beta = beta_hat(s, h, &xq)?;
    Ok(PrecodeResult {
        x: xq,
        beta,
        trajectory,
    })
}

/// Full C2PO run: initializes `x0 = H^H s`, precomputes `A^H A`, iterates,
/// quantizes, and computes the receive scaling.
pub fn c2po(
    h: &ComplexMatrix,
    s: &ComplexVector,
    schedule: &PrecoderSchedule,
    capture_trajectory: bool,
) -> Result<PrecodeResult> {
    let x0 = adjoint_matvec(h, s)?;
    let aha = gram(&build_a(h, s)?);
    c2po_precomputed(&x0, &aha, h, s, schedule, capture_trajectory)
}

/// Solves `M w = rhs` for Hermitian positive-definite `M` by Cholesky
/// factorization. Fails on non-positive pivots (rank deficiency).
pub(crate) fn solve_hermitian(m: &ComplexMatrix, rhs: &ComplexVector) -> Result<ComplexVector> {
    let n = m.rows();
    if m.cols() != n || rhs.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "solve_hermitian: {}x{} with length-{} rhs",
            m.rows(),
            m.cols(),
            rhs.len()
        )));
    }
    let max_diag = (0..n).map(|i| m.get(i, i).re).fold(0.0f64, f64::max);
    let tol = 1e-12 * max_diag.max(f64::MIN_POSITIVE);
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = m.get(j, j).re;
        for k in 0..j {
            d -= l.get(j, k).norm_sqr();
        }
        if !(d > tol) {
            return Err(Error::RankDeficient { row: j, pivot: d });
        }
        let ljj = d.sqrt();
        l.set(j, j, Complex64::new(ljj, 0.0));
        for i in j + 1..n {
            let mut acc = m.get(i, j);
            for k in 0..j {
                acc -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, acc / ljj);
        }
    }
    // forward solve L y = rhs
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut acc = rhs[i];
        for k in 0..i {
            acc -= l.get(i, k) * y[k];
        }
        y[i] = acc / l.get(i, i).re;
    }
    // backward solve L^H w = y
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = y[i];
        for k in i + 1..n {
            acc -= l.get(k, i).conj() * w[k];
        }
        w[i] = acc / l.get(i, i).re;
    }
    Ok(ComplexVector::from_raw(w))
}

/// Infinite-precision zero-forcing reference: `x = c H^H (H H^H)^{-1} s`
/// scaled so `||x||^2 = power`.
pub fn zf_precode(h: &ComplexMatrix, s: &ComplexVector, power: f64) -> Result<PrecodeResult> {
    if s.norm_sq() == 0.0 {
        return Err(Error::ZeroSymbolVector);
    }
    let hh = gram_of_adjoint(h);
    let w = solve_hermitian(&hh, s)?;
    let x_unnormalized = adjoint_matvec(h, &w)?;
    let norm = x_unnormalized.norm_sq().sqrt();
    if !(norm > 0.0) {
        return Err(Error::DegeneratePrecoding { magnitude: norm });
    }
    let c = power.sqrt() / norm;
    let x = ComplexVector::from_raw(x_unnormalized.as_slice().iter().map(|v| v * c).collect());
    let beta = beta_hat(s, h, &x)?;
    Ok(PrecodeResult {
        x,
        beta,
        trajectory: None,
    })
}

/// `H H^H`, Hermitian by construction (upper triangle mirrored).
fn gram_of_adjoint(h: &ComplexMatrix) -> ComplexMatrix {
    let u = h.rows();
    let mut g = ComplexMatrix::zeros(u, u);
    for i in 0..u {
        for j in i..u {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..h.cols() {
                acc += h.get(i, c) * h.get(j, c).conj();
            }
            if i == j {
                g.set(i, i, Complex64::new(acc.re, 0.0));
            } else {
                g.set(i, j, acc);
                g.set(j, i, acc.conj());
            }
        }
    }
    g
}
