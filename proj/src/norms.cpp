#include "gzk/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gzk/multipliers.hpp"

namespace gzk {

namespace {

bool is_inf(double p) { return std::isinf(p); }

double symbol_value(SobolevVariant v, double s, double xi, double e1, double e2,
                    bool& singular, bool& hit) {
    double base = 0.0;
    switch (v) {
        case SobolevVariant::j: return std::pow(1.0 + xi * xi + e1 * e1 + e2 * e2, 0.5 * s);
        case SobolevVariant::jx: return std::pow(1.0 + xi * xi, 0.5 * s);
        case SobolevVariant::jy: return std::pow(1.0 + e1 * e1 + e2 * e2, 0.5 * s);
        case SobolevVariant::d: base = xi * xi + e1 * e1 + e2 * e2; break;
        case SobolevVariant::dx: base = std::abs(xi); break;
        case SobolevVariant::dy1: base = std::abs(e1); break;
        case SobolevVariant::dy2: base = std::abs(e2); break;
    }
    const double expo = (v == SobolevVariant::d) ? 0.5 * s : s;
    if (base == 0.0) {
        if (s > 0.0) return 0.0;
        if (s == 0.0) return 1.0;
        hit = true;
        singular = true;
        return 0.0;
    }
    return std::pow(base, expo);
}

}  // namespace

double lebesgue_norm(const RealField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lebesgue_norm: p must be >= 1");
    if (is_inf(p)) {
        double m = 0.0;
        for (double v : f.v) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (double v : f.v) acc += std::pow(std::abs(v), p);
    return std::pow(acc * f.grid.cell(), 1.0 / p);
}

double sobolev_norm(const SpectralField& F, const SobolevSpec& spec, bool* singular_zeroed) {
    const Grid3& g = F.grid;
    bool singular = false, hit = false;
    double acc = 0.0;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double e1 = g.eta1(iy);
            for (int iz = 0; iz < g.ny2; ++iz) {
                const double e2 = g.eta2(iz);
                const double m = symbol_value(spec.variant, spec.s, xi, e1, e2, singular, hit);
                acc += std::norm(m * F.c[g.idx(ix, iy, iz)]);
            }
        }
    }
    if (singular_zeroed) *singular_zeroed = singular;
    return std::sqrt(acc / g.volume());
}

double sobolev_norm(const RealField& f, const SobolevSpec& spec, bool* singular_zeroed) {
    return sobolev_norm(forward_transform(f), spec, singular_zeroed);
}

RealField spatial_weight(const Grid3& g, double r, unsigned axes, WeightBracket bracket) {
    RealField w(g);
    for (int ix = 0; ix < g.nx; ++ix) {
        const double x = (axes & axis_x) ? g.x(ix) : 0.0;
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double y1 = (axes & axis_y1) ? g.y1(iy) : 0.0;
            for (int iz = 0; iz < g.ny2; ++iz) {
                const double y2 = (axes & axis_y2) ? g.y2(iz) : 0.0;
                const double rho2 = x * x + y1 * y1 + y2 * y2;
                w.v[g.idx(ix, iy, iz)] = (bracket == WeightBracket::homogeneous)
                                             ? std::pow(rho2, 0.5 * r)
                                             : std::pow(1.0 + rho2, 0.5 * r);
            }
        }
    }
    return w;
}

double weighted_z_norm(const RealField& f, double s, const WeightSpec& w) {
    const double hs = sobolev_norm(f, SobolevSpec{s, SobolevVariant::j});
    RealField wx = spatial_weight(f.grid, w.r1, axis_x, w.bracket);
    RealField wy = spatial_weight(f.grid, w.r2, axis_y, w.bracket);
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        wx.v[i] *= f.v[i];
        wy.v[i] *= f.v[i];
    }
    return hs + lebesgue_norm(wx, 2.0) + lebesgue_norm(wy, 2.0);
}

double exp_weighted_sobolev(const RealField& f, double a, const std::array<int, 3>& alpha,
                            double decay_rate_hint) {
    const Grid3& g = f.grid;
    if (decay_rate_hint > 0.0 && !(WeightRate{a}.representable(decay_rate_hint)))
        throw std::invalid_argument(
            "exp_weighted_sobolev: weight rate a violates a*sqrt(3) < decay rate");
    const double max_exponent = std::abs(a) * 1.5 * g.box_len;
    if (max_exponent > 700.0)
        throw std::overflow_error("exp_weighted_sobolev: weight exponent up to " +
                                  std::to_string(max_exponent) + " overflows");
    RealField wf(g);
    for (int ix = 0; ix < g.nx; ++ix) {
        const double x = g.x(ix);
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double y1 = g.y1(iy);
            for (int iz = 0; iz < g.ny2; ++iz) {
                const double y2 = g.y2(iz);
                wf.v[g.idx(ix, iy, iz)] =
                    std::exp(a * (x + y1 + y2)) * f.v[g.idx(ix, iy, iz)];
            }
        }
    }
    SpectralField W = apply_partial(forward_transform(wf), alpha[0], alpha[1], alpha[2]);
    return sobolev_norm(W, SobolevSpec{0.0, SobolevVariant::j});
}

// ---------------------------------------------------------------------------
// mixed space-time norms

namespace {

struct SpatialTensor {
    std::array<int, 3> dims{1, 1, 1};
    std::vector<double> v;

    static SpatialTensor full(const Grid3& g) {
        SpatialTensor t;
        t.dims = {g.nx, g.ny1, g.ny2};
        t.v.assign(std::size_t(g.nx) * g.ny1 * g.ny2, 0.0);
        return t;
    }
    std::size_t size() const { return std::size_t(dims[0]) * dims[1] * dims[2]; }
    std::size_t idx(int i0, int i1, int i2) const {
        return (std::size_t(i0) * dims[1] + i1) * dims[2] + i2;
    }
};

std::array<bool, 3> spatial_axes_of(unsigned axes) {
    return {bool(axes & axis_x), bool(axes & axis_y1), bool(axes & axis_y2)};
}

// collapse the selected axes: finite p accumulates w * |v|^p (caller applies
// the root), inf takes the max
SpatialTensor reduce_spatial(const SpatialTensor& in, const std::array<bool, 3>& sel,
                             double p, double measure, bool take_root) {
    SpatialTensor out;
    out.dims = in.dims;
    for (int d = 0; d < 3; ++d)
        if (sel[d]) out.dims[d] = 1;
    out.v.assign(out.size(), 0.0);
    const bool inf = is_inf(p);
    for (int i0 = 0; i0 < in.dims[0]; ++i0)
        for (int i1 = 0; i1 < in.dims[1]; ++i1)
            for (int i2 = 0; i2 < in.dims[2]; ++i2) {
                const double a = std::abs(in.v[in.idx(i0, i1, i2)]);
                double& slot = out.v[out.idx(sel[0] ? 0 : i0, sel[1] ? 0 : i1, sel[2] ? 0 : i2)];
                if (inf) slot = std::max(slot, a);
                else slot += measure * std::pow(a, p);
            }
    if (!inf && take_root)
        for (double& x : out.v) x = std::pow(x, 1.0 / p);
    return out;
}

double group_measure(const Grid3& g, const std::array<bool, 3>& sel) {
    double m = 1.0;
    if (sel[0]) m *= g.spacing_x();
    if (sel[1]) m *= g.spacing_y1();
    if (sel[2]) m *= g.spacing_y2();
    return m;
}

}  // namespace

double mixed_norm(const Trajectory& traj, const MixedNormSpec& spec) {
    if (traj.snapshots.empty()) throw std::invalid_argument("mixed_norm: empty trajectory");
    unsigned seen = 0;
    int t_factor = -1;
    for (std::size_t i = 0; i < spec.factors.size(); ++i) {
        const auto& f = spec.factors[i];
        if (f.axes == 0) throw std::invalid_argument("mixed_norm: empty factor");
        if (seen & f.axes) throw std::invalid_argument("mixed_norm: axes repeated across factors");
        if (!(f.p >= 1.0)) throw std::invalid_argument("mixed_norm: exponent must be >= 1");
        seen |= f.axes;
        if (f.axes & axis_t) t_factor = int(i);
    }
    if (seen != axis_all) throw std::invalid_argument("mixed_norm: factors must cover x,y1,y2,t");

    const Grid3& g = traj.grid;
    const std::size_t nt = traj.count();
    const double dt = traj.dt();
    const auto& factors = spec.factors;
    const double pt = factors[t_factor].p;
    if (!is_inf(pt) && nt < 2)
        throw std::invalid_argument("mixed_norm: time integral needs >= 2 snapshots");

    const auto t_sel = spatial_axes_of(factors[t_factor].axes);
    const double t_measure = group_measure(g, t_sel);

    SpatialTensor acc;
    bool acc_init = false;
    for (std::size_t it = 0; it < nt; ++it) {
        SpatialTensor cur = SpatialTensor::full(g);
        cur.v.assign(traj.snapshots[it].v.begin(), traj.snapshots[it].v.end());

        // factors inner than the time factor: per-snapshot spatial reductions
        for (std::size_t i = factors.size(); i-- > std::size_t(t_factor) + 1;) {
            const auto sel = spatial_axes_of(factors[i].axes);
            cur = reduce_spatial(cur, sel, factors[i].p, group_measure(g, sel), true);
        }

        // the time factor itself (jointly with any spatial axes it carries)
        SpatialTensor part = reduce_spatial(cur, t_sel, pt, t_measure, false);
        if (!acc_init) {
            acc = part;
            if (is_inf(pt)) acc_init = true;
            else { for (double& x : acc.v) x = 0.0; acc_init = true; }
        }
        if (is_inf(pt)) {
            for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] = std::max(acc.v[i], part.v[i]);
        } else {
            const double wt = (it == 0 || it + 1 == nt) ? 0.5 * dt : dt;
            for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += wt * part.v[i];
        }
    }
    if (!is_inf(pt))
        for (double& x : acc.v) x = std::pow(x, 1.0 / pt);

    // outer factors
    for (int i = t_factor; i-- > 0;) {
        const auto sel = spatial_axes_of(factors[i].axes);
        acc = reduce_spatial(acc, sel, factors[i].p, group_measure(g, sel), true);
    }
    if (acc.size() != 1) throw std::logic_error("mixed_norm: reduction did not collapse");
    return acc.v[0];
}

// ---------------------------------------------------------------------------
// work-space norm

namespace {

MixedNormSpec l2T_linf_xy() {
    return MixedNormSpec{{{axis_t, 2.0}, {axis_x | axis_y, inf_exponent}}};
}
MixedNormSpec l2x_linf_yT() {
    return MixedNormSpec{{{axis_x, 2.0}, {axis_y | axis_t, inf_exponent}}};
}
MixedNormSpec linfx_l2_yT() {
    return MixedNormSpec{{{axis_x, inf_exponent}, {axis_y | axis_t, 2.0}}};
}

Trajectory derived_trajectory(const Trajectory& traj, const std::vector<SpectralField>& hats,
                              const std::vector<std::pair<Op, double>>& ops) {
    Trajectory out;
    out.grid = traj.grid;
    out.times = traj.times;
    out.provenance = traj.provenance;
    out.snapshots.reserve(hats.size());
    for (const auto& H : hats) {
        SpectralField D = H;
        for (auto [op, s] : ops) D = apply_fractional(D, op, s);
        out.snapshots.push_back(inverse_transform(D));
    }
    return out;
}

}  // namespace

XTNormReport xt_norm(const Trajectory& traj, double s, double r1, double r2) {
    if (!(s > 2.0 && s < 3.0)) throw std::invalid_argument("xt_norm: s must lie in (2,3)");
    if (traj.snapshots.empty()) throw std::invalid_argument("xt_norm: empty trajectory");
    XTNormReport rep;

    std::vector<SpectralField> hats;
    hats.reserve(traj.count());
    for (const auto& f : traj.snapshots) hats.push_back(forward_transform(f));

    // sup-in-time terms
    double hs = 0.0, wx = 0.0, wy = 0.0, diag = 0.0;
    RealField weight_x = spatial_weight(traj.grid, r1, axis_x, WeightBracket::homogeneous);
    RealField weight_y = spatial_weight(traj.grid, r2, axis_y, WeightBracket::homogeneous);
    RealField weight_diag = spatial_weight(traj.grid, 1.5, axis_x, WeightBracket::japanese);
    for (std::size_t it = 0; it < traj.count(); ++it) {
        hs = std::max(hs, sobolev_norm(hats[it], SobolevSpec{s, SobolevVariant::j}));
        RealField fx = traj.snapshots[it], fy = traj.snapshots[it], fd = traj.snapshots[it];
        for (std::size_t i = 0; i < fx.v.size(); ++i) {
            fx.v[i] *= weight_x.v[i];
            fy.v[i] *= weight_y.v[i];
            fd.v[i] *= weight_diag.v[i];
        }
        wx = std::max(wx, lebesgue_norm(fx, 2.0));
        wy = std::max(wy, lebesgue_norm(fy, 2.0));
        diag = std::max(diag, lebesgue_norm(fd, 2.0));
    }
    rep.terms.emplace_back("u L^inf_T H^s", hs);
    rep.terms.emplace_back("|x|^r1 u L^inf_T L^2", wx);
    rep.terms.emplace_back("|y|^r2 u L^inf_T L^2", wy);
    rep.diagnostic_weighted_sup = diag;

    struct TermDef {
        const char* label;
        std::vector<std::pair<Op, double>> ops;
        int family;  // 0: L^2_T L^inf_xy, 1: L^2_x L^inf_yT, 2: L^inf_x L^2_yT
    };
    const std::vector<TermDef> defs = {
        {"u_x L^2_T L^inf_xy", {{Op::ddx, 1}}, 0},
        {"u_xx L^2_T L^inf_xy", {{Op::ddx, 1}, {Op::ddx, 1}}, 0},
        {"D_x^{s-1} u L^2_T L^inf_xy", {{Op::dx, s - 1.0}}, 0},
        {"D_y1^{s-2} u_x L^2_T L^inf_xy", {{Op::dy1, s - 2.0}, {Op::ddx, 1}}, 0},
        {"D_y2^{s-2} u_x L^2_T L^inf_xy", {{Op::dy2, s - 2.0}, {Op::ddx, 1}}, 0},
        {"u_xy1 L^2_T L^inf_xy", {{Op::ddx, 1}, {Op::ddy1, 1}}, 0},
        {"u_xy2 L^2_T L^inf_xy", {{Op::ddx, 1}, {Op::ddy2, 1}}, 0},
        {"u L^2_x L^inf_yT", {}, 1},
        {"u_x L^2_x L^inf_yT", {{Op::ddx, 1}}, 1},
        {"u_y1 L^2_x L^inf_yT", {{Op::ddy1, 1}}, 1},
        {"u_y2 L^2_x L^inf_yT", {{Op::ddy2, 1}}, 1},
        {"D_x^{s-2} u L^2_x L^inf_yT", {{Op::dx, s - 2.0}}, 1},
        {"D_y1^{s-2} u L^2_x L^inf_yT", {{Op::dy1, s - 2.0}}, 1},
        {"D_y2^{s-2} u L^2_x L^inf_yT", {{Op::dy2, s - 2.0}}, 1},
        {"D_x^s u_x L^inf_x L^2_yT", {{Op::dx, s}, {Op::ddx, 1}}, 2},
        {"D_y1^s u_x L^inf_x L^2_yT", {{Op::dy1, s}, {Op::ddx, 1}}, 2},
        {"D_y2^s u_x L^inf_x L^2_yT", {{Op::dy2, s}, {Op::ddx, 1}}, 2},
        {"u_xxx L^inf_x L^2_yT", {{Op::ddx, 1}, {Op::ddx, 1}, {Op::ddx, 1}}, 2},
        {"D_y1^2 u_x L^inf_x L^2_yT", {{Op::dy1, 2.0}, {Op::ddx, 1}}, 2},
        {"D_y2^2 u_x L^inf_x L^2_yT", {{Op::dy2, 2.0}, {Op::ddx, 1}}, 2},
    };
    for (const auto& def : defs) {
        Trajectory d = derived_trajectory(traj, hats, def.ops);
        const MixedNormSpec spec = def.family == 0   ? l2T_linf_xy()
                                   : def.family == 1 ? l2x_linf_yT()
                                                     : linfx_l2_yT();
        rep.terms.emplace_back(def.label, mixed_norm(d, spec));
    }

    rep.total = 0.0;
    for (const auto& [label, value] : rep.terms) rep.total += value;
    return rep;
}

// ---------------------------------------------------------------------------
// shell spectra

ShellSpectrum shell_spectrum(const SpectralField& F) {
    const Grid3& g = F.grid;
    const double pi = 3.14159265358979323846;
    const double dk = 2.0 * pi / g.box_len;
    ShellSpectrum out;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double e1 = g.eta1(iy);
            for (int iz = 0; iz < g.ny2; ++iz) {
                const double e2 = g.eta2(iz);
                const double kappa = std::sqrt(xi * xi + e1 * e1 + e2 * e2);
                const std::size_t bin = std::size_t(kappa / dk);
                if (out.energies.size() <= bin) out.energies.resize(bin + 1, 0.0);
                out.energies[bin] += std::norm(F.c[g.idx(ix, iy, iz)]);
            }
        }
    }
    out.radii.resize(out.energies.size());
    for (std::size_t i = 0; i < out.radii.size(); ++i) out.radii[i] = (double(i) + 0.5) * dk;
    return out;
}

ShellSpectrum shell_spectrum(const RealField& f) { return shell_spectrum(forward_transform(f)); }

double tail_exponent(const ShellSpectrum& spec, double lo, double hi, const Grid3& grid) {
    const double pi = 3.14159265358979323846;
    const int nmin = std::min(grid.nx, std::min(grid.ny1, grid.ny2));
    const double resolved = pi * nmin / grid.box_len;
    if (hi > resolved * (1.0 + 1e-12))
        throw std::invalid_argument("tail_exponent: fit window outside resolved band");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < spec.radii.size(); ++i) {
        if (spec.radii[i] < lo || spec.radii[i] > hi || spec.energies[i] <= 0.0) continue;
        const double lx = std::log(spec.radii[i]);
        const double ly = std::log(spec.energies[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++count;
    }
    if (count < 8) throw std::invalid_argument("tail_exponent: fewer than 8 shells in window");
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double tail_exponent(const RealField& f, double lo, double hi) {
    return tail_exponent(shell_spectrum(f), lo, hi, f.grid);
}

}  // namespace gzk
