//! Closed forms for the Werner-state and Bloch-qubit examples.
//!
//! Werner curves assume the measurement pair `qubit_basis(π/2, 0)` and
//! `pi2_basis()` on subsystem A; they turn out to be basis-independent.
//! Bloch curves use `qubit_basis(θ, 0)` and `pi2_basis()` on `½(I + r3 σ_z)`.

use crate::entropy::Bits;

/// `x log₂ x` with `0 log 0 = 0`.
fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// `H(A|B)` of the Werner state.
pub fn werner_conditional(eta: f64) -> Bits {
    let mixed = (1.0 - eta) / 4.0;
    let top = (1.0 + 3.0 * eta) / 4.0;
    -3.0 * xlog2x(mixed) - xlog2x(top) - 1.0
}

/// Total measurement uncertainty `H(Π¹|B) + H(Π²|B)`.
pub fn werner_mm(eta: f64) -> Bits {
    2.0 - xlog2x(1.0 + eta) - xlog2x(1.0 - eta)
}

/// One disturbance plus the other uncertainty.
pub fn werner_md(eta: f64) -> Bits {
    1.0 + xlog2x(1.0 + 3.0 * eta) / 4.0 - xlog2x(1.0 - eta) / 4.0 - xlog2x(1.0 + eta)
}

/// Total disturbance.
pub fn werner_dd(eta: f64) -> Bits {
    xlog2x(1.0 + 3.0 * eta) / 2.0 + xlog2x(1.0 - eta) / 2.0 - xlog2x(1.0 + eta)
}

fn bloch_terms(r3: f64, theta: f64) -> (f64, f64, f64) {
    let mut x = 0.0;
    let mut y = 0.0;
    let mut s = 0.0;
    for m in [1.0, -1.0] {
        x -= xlog2x((1.0 + m * r3 * theta.cos()) / 2.0);
        y -= xlog2x((2.0 + m * r3) / 4.0);
        s -= xlog2x((1.0 + m * r3) / 2.0);
    }
    (x, y, s)
}

/// `H(ρ_X) + H(ρ_Y)`.
pub fn bloch_mm(r3: f64, theta: f64) -> Bits {
    let (x, y, _) = bloch_terms(r3, theta);
    x + y
}

/// `H(ρ‖ρ_X) + H(ρ_Y)`.
pub fn bloch_md(r3: f64, theta: f64) -> Bits {
    let (x, y, s) = bloch_terms(r3, theta);
    x + y - s
}

/// `H(ρ‖ρ_X) + H(ρ‖ρ_Y)`.
pub fn bloch_dd(r3: f64, theta: f64) -> Bits {
    let (x, y, s) = bloch_terms(r3, theta);
    x + y - 2.0 * s
}

/// `H(ρ)` of the Bloch qubit.
pub fn bloch_entropy(r3: f64) -> Bits {
    bloch_terms(r3, 0.0).2
}

/// Bisection for a sign change of `f` on `[lo, hi]`; stops once
/// `|f(mid)| ≤ residual` or the bracket collapses.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, residual: f64) -> Option<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= residual || mid == lo || mid == hi {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// The Werner parameter where `H(A|B)` crosses zero and the three curves meet.
pub fn werner_crossing(residual: f64) -> f64 {
    bisect(werner_conditional, 0.0, 1.0, residual).expect("H(A|B) changes sign on [0, 1]")
}
