#pragma once

#include "gzk/grid.hpp"

namespace gzk {

// One point of the frequency lattice, in radians per unit length.
struct Mode {
    double xi = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
};

// Exponential weight rate a > 0 for the weight e^{a(x+y1+y2)}. When weighting
// a profile with radial decay rate b the combination is square integrable
// only for a*sqrt(3) < b; callers that know b should check representable().
struct WeightRate {
    double a = 1.0;
    bool representable(double decay_rate_b) const { return a * 1.7320508075688772 < decay_rate_b; }
};

// Dispersion relation of u_t + u_xxx + u_xy1y1 + u_xy2y2 = 0 under the
// convention u(t) = F^{-1} e^{i t omega} F u0:  omega = xi (xi^2 + |eta|^2).
double dispersion_symbol(const Mode& m);

// Free flow: multiply every coefficient by e^{i t omega}. Unimodular, hence
// an L2 isometry mode by mode. The x-Nyquist plane has no conjugate partner
// on the lattice and is zeroed for t != 0 so real fields stay real.
SpectralField apply_propagator(const SpectralField& F, double t);

// Symbol of the conjugated evolution: if w = e^{a(x+y1+y2)} v and v solves
// the free equation, then w_t = m_a(D) w with
//   Re m_a = -a [ xi^2 + (xi+eta1)^2 + (xi+eta2)^2 ] + 3 a^3
//   Im m_a = xi (xi^2 + |eta|^2) - 3 a^2 xi - 2 a^2 (xi + eta1 + eta2).
// Re m_a <= 3a^3 with equality only at the origin, so e^{t m_a} damps high
// modes for t > 0.
cplx weighted_propagator_symbol(const Mode& m, const WeightRate& a);

// Evolve w(t) = e^{t m_a} w0. Requires t >= 0: for t < 0 the damping flips
// sign and the caller must mirror the weight (use rate -a data) instead.
SpectralField apply_weighted_propagator(const SpectralField& W0, double t, const WeightRate& a);

// Fourier multiplier families used throughout: homogeneous / inhomogeneous
// fractional derivatives, their single-axis variants, and first derivatives.
enum class Op {
    d,     // (xi^2+|eta|^2)^{s/2}
    j,     // (1+xi^2+|eta|^2)^{s/2}
    dx,    // |xi|^s
    dy1,   // |eta1|^s
    dy2,   // |eta2|^s
    jx,    // (1+xi^2)^{s/2}
    jy,    // (1+|eta|^2)^{s/2}
    ddx,   // i xi          (s ignored)
    ddy1,  // i eta1        (s ignored)
    ddy2,  // i eta2        (s ignored)
};

// Applies the multiplier. For homogeneous symbols with s < 0 every mode with
// vanishing base is zeroed and *singular_zeroed set. First derivatives zero
// their own Nyquist plane (no conjugate partner).
SpectralField apply_fractional(const SpectralField& F, Op op, double s,
                               bool* singular_zeroed = nullptr);

// d^alpha = dx^a0 dy1^a1 dy2^a2 applied spectrally.
SpectralField apply_partial(const SpectralField& F, int a0, int a1, int a2);

}  // namespace gzk
