use num_complex::Complex64 as C64;

use crate::waterwave_dynamics::state::WaveState;

/// Energy density integrated on the grid; the real part is the Hamiltonian.
///
/// E = int |W|^2/2 + (Q conj(Q)_a - conj(Q) Q_a)/(4i) - (conj(W)^2 W_a + W^2 conj(W)_a)/4.
pub fn hamiltonian_complex(s: &WaveState) -> C64 {
    let w = s.w.values();
    let q = s.q.values();
    let wa = s.w.dx().values();
    let qa = s.q.dx().values();
    let quarter_i = C64::new(0.0, -0.25);
    let sum: C64 = (0..w.len())
        .map(|m| {
            let (w, q, wa, qa) = (w[m], q[m], wa[m], qa[m]);
            0.5 * w.norm_sqr()
                + quarter_i * (q * qa.conj() - q.conj() * qa)
                - 0.25 * (w.conj() * w.conj() * wa + w * w * wa.conj())
        })
        .sum();
    sum * s.w.grid().spec().dx()
}

/// The conserved energy.
pub fn hamiltonian(s: &WaveState) -> f64 {
    hamiltonian_complex(s).re
}

/// Quadratic part of the energy only.
pub fn quadratic_energy(s: &WaveState) -> f64 {
    let w = s.w.values();
    let q = s.q.values();
    let qa = s.q.dx().values();
    let sum: f64 = (0..w.len())
        .map(|m| 0.5 * w[m].norm_sqr() + 0.5 * (q[m].conj() * qa[m] * C64::new(0.0, 1.0)).re)
        .sum();
    sum * s.w.grid().spec().dx()
}
