#include "gzk/multipliers.hpp"

#include <cmath>
#include <stdexcept>

namespace gzk {

double dispersion_symbol(const Mode& m) {
    return m.xi * (m.xi * m.xi + m.eta1 * m.eta1 + m.eta2 * m.eta2);
}

namespace {

void zero_plane_x_nyquist(SpectralField& F) {
    const Grid3& g = F.grid;
    const int ix = g.nx / 2;  // index of mode -nx/2
    for (int iy = 0; iy < g.ny1; ++iy)
        for (int iz = 0; iz < g.ny2; ++iz) F.c[g.idx(ix, iy, iz)] = cplx{0.0, 0.0};
}

}  // namespace

SpectralField apply_propagator(const SpectralField& F, double t) {
    SpectralField out(F.grid);
    out.real_rep = F.real_rep;
    if (t == 0.0) {
        out.c = F.c;
        return out;
    }
    const Grid3& g = F.grid;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double e1 = g.eta1(iy);
            for (int iz = 0; iz < g.ny2; ++iz) {
                const double e2 = g.eta2(iz);
                const double w = xi * (xi * xi + e1 * e1 + e2 * e2);
                out.c[g.idx(ix, iy, iz)] =
                    F.c[g.idx(ix, iy, iz)] * std::polar(1.0, t * w);
            }
        }
    }
    zero_plane_x_nyquist(out);
    return out;
}

cplx weighted_propagator_symbol(const Mode& m, const WeightRate& w) {
    const double a = w.a;
    const double s1 = m.xi + m.eta1;
    const double s2 = m.xi + m.eta2;
    const double re = -a * (m.xi * m.xi + s1 * s1 + s2 * s2) + 3.0 * a * a * a;
    const double im = m.xi * (m.xi * m.xi + m.eta1 * m.eta1 + m.eta2 * m.eta2) -
                      3.0 * a * a * m.xi - 2.0 * a * a * (m.xi + m.eta1 + m.eta2);
    return cplx{re, im};
}

SpectralField apply_weighted_propagator(const SpectralField& W0, double t, const WeightRate& a) {
    if (t < 0.0)
        throw std::invalid_argument(
            "apply_weighted_propagator: t < 0; evolve with the mirrored weight instead");
    SpectralField out(W0.grid);
    if (t == 0.0) {
        out.c = W0.c;
        out.real_rep = W0.real_rep;
        return out;
    }
    const Grid3& g = W0.grid;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double e1 = g.eta1(iy);
            for (int iz = 0; iz < g.ny2; ++iz) {
                const double e2 = g.eta2(iz);
                const cplx ma = weighted_propagator_symbol(Mode{xi, e1, e2}, a);
                out.c[g.idx(ix, iy, iz)] =
                    W0.c[g.idx(ix, iy, iz)] * std::exp(t * ma);
            }
        }
    }
    // the damped symbol is not conjugate symmetric across Nyquist planes
    out.real_rep = false;
    return out;
}

SpectralField apply_fractional(const SpectralField& F, Op op, double s, bool* singular_zeroed) {
    const Grid3& g = F.grid;
    SpectralField out(g);
    out.real_rep = F.real_rep;
    if (singular_zeroed) *singular_zeroed = false;
    bool flagged = false;

    const bool homogeneous = (op == Op::d || op == Op::dx || op == Op::dy1 || op == Op::dy2);
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double e1 = g.eta1(iy);
            for (int iz = 0; iz < g.ny2; ++iz) {
                const double e2 = g.eta2(iz);
                const std::size_t k = g.idx(ix, iy, iz);
                cplx mult;
                double base = 0.0;
                switch (op) {
                    case Op::d: base = xi * xi + e1 * e1 + e2 * e2; mult = std::pow(base, 0.5 * s); break;
                    case Op::j: mult = std::pow(1.0 + xi * xi + e1 * e1 + e2 * e2, 0.5 * s); break;
                    case Op::dx: base = std::abs(xi); mult = std::pow(base, s); break;
                    case Op::dy1: base = std::abs(e1); mult = std::pow(base, s); break;
                    case Op::dy2: base = std::abs(e2); mult = std::pow(base, s); break;
                    case Op::jx: mult = std::pow(1.0 + xi * xi, 0.5 * s); break;
                    case Op::jy: mult = std::pow(1.0 + e1 * e1 + e2 * e2, 0.5 * s); break;
                    case Op::ddx: mult = cplx{0.0, xi}; break;
                    case Op::ddy1: mult = cplx{0.0, e1}; break;
                    case Op::ddy2: mult = cplx{0.0, e2}; break;
                }
                if (homogeneous && base == 0.0) {
                    // |.|^s at a vanishing base: identity for s = 0, zero for
                    // s > 0, singular for s < 0 (zeroed and flagged)
                    if (s > 0.0) mult = 0.0;
                    else if (s == 0.0) mult = 1.0;
                    else { mult = 0.0; flagged = true; }
                }
                out.c[k] = F.c[k] * mult;
            }
        }
    }

    // first derivatives: kill the unpaired Nyquist plane of their own axis
    if (op == Op::ddx) {
        const int ix = g.nx / 2;
        for (int iy = 0; iy < g.ny1; ++iy)
            for (int iz = 0; iz < g.ny2; ++iz) out.c[g.idx(ix, iy, iz)] = cplx{0.0, 0.0};
    } else if (op == Op::ddy1) {
        const int iy = g.ny1 / 2;
        for (int ix = 0; ix < g.nx; ++ix)
            for (int iz = 0; iz < g.ny2; ++iz) out.c[g.idx(ix, iy, iz)] = cplx{0.0, 0.0};
    } else if (op == Op::ddy2) {
        const int iz = g.ny2 / 2;
        for (int ix = 0; ix < g.nx; ++ix)
            for (int iy = 0; iy < g.ny1; ++iy) out.c[g.idx(ix, iy, iz)] = cplx{0.0, 0.0};
    }

    if (singular_zeroed) *singular_zeroed = flagged;
    return out;
}

SpectralField apply_partial(const SpectralField& F, int a0, int a1, int a2) {
    SpectralField out = F;
    for (int i = 0; i < a0; ++i) out = apply_fractional(out, Op::ddx, 1.0);
    for (int i = 0; i < a1; ++i) out = apply_fractional(out, Op::ddy1, 1.0);
    for (int i = 0; i < a2; ++i) out = apply_fractional(out, Op::ddy2, 1.0);
    return out;
}

}  // namespace gzk
