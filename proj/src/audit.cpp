#include "gzk/audit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "gzk/multipliers.hpp"
#include "gzk/norms.hpp"

namespace gzk {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
    return v;
}

double trapezoid_weight(int i, int n, double dt) {
    return (i == 0 || i == n - 1) ? 0.5 * dt : dt;
}

double l2_norm(const SpectralField& F) {
    double acc = 0.0;
    for (const cplx& c : F.c) acc += std::norm(c);
    return std::sqrt(acc / F.grid.volume());
}

double grad_norm(const SpectralField& F) {
    const Grid3& g = F.grid;
    double acc = 0.0;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double e1 = g.eta1(iy);
            for (int iz = 0; iz < g.ny2; ++iz) {
                const double e2 = g.eta2(iz);
                acc += (xi * xi + e1 * e1 + e2 * e2) * std::norm(F.c[g.idx(ix, iy, iz)]);
            }
        }
    }
    return std::sqrt(acc / g.volume());
}

}  // namespace

std::string EstimateId::name() const {
    switch (kind) {
        case Kind::strichartz:
            return "strichartz(gamma=" + std::to_string(gamma) + ",beta=" + std::to_string(beta) + ")";
        case Kind::kato_forward: return "kato_forward";
        case Kind::kato_dual: return "kato_dual";
        case Kind::maximal: return "maximal(s=" + std::to_string(s) + ")";
        case Kind::weighted_commutator:
            return "weighted_commutator(r=" + std::to_string(r) + ",axis=" + std::to_string(axis) + ")";
        case Kind::weighted_decay:
            return "weighted_decay(a=" + std::to_string(a) + ",|alpha|=" +
                   std::to_string(alpha[0] + alpha[1] + alpha[2]) + ")";
        case Kind::genericity: return "genericity";
    }
    return "unknown";
}

void EstimateId::validate() const {
    switch (kind) {
        case Kind::strichartz:
            if (!(0.0 < gamma && gamma < beta))
                throw std::invalid_argument("strichartz requires 0 < gamma < beta");
            break;
        case Kind::maximal:
            if (!(s > 1.0)) throw std::invalid_argument("maximal estimate requires s > 1");
            break;
        case Kind::weighted_commutator:
            if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("commutator requires r in (0,1)");
            if (!(s >= 2.0 * r)) throw std::invalid_argument("commutator requires s >= 2r");
            if (axis < 0 || axis > 2) throw std::invalid_argument("commutator axis out of range");
            break;
        case Kind::weighted_decay: {
            if (!(a > 0.0)) throw std::invalid_argument("weighted decay requires a > 0");
            const int order = alpha[0] + alpha[1] + alpha[2];
            if (order < 0 || order > 2)
                throw std::invalid_argument("weighted decay audited for |alpha| <= 2");
            break;
        }
        default: break;
    }
}

RealField ensemble_member(const Ensemble& ens, int index, const Grid3& grid) {
    const int band =
        ens.band > 0 ? ens.band : std::max(2, std::min(grid.nx, std::min(grid.ny1, grid.ny2)) / 4);

    if (ens.generator == Ensemble::Generator::probe_set) {
        RealField f(grid);
        const int which = index % 4;
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x(ix);
            for (int iy = 0; iy < grid.ny1; ++iy) {
                const double y1 = grid.y1(iy);
                for (int iz = 0; iz < grid.ny2; ++iz) {
                    const double y2 = grid.y2(iz);
                    const double r2 = x * x + y1 * y1 + y2 * y2;
                    double v = 0.0;
                    switch (which) {
                        case 0: v = std::exp(-2.0 * std::sqrt(r2)); break;
                        case 1: v = std::exp(-1.5 * std::sqrt(r2)); break;
                        case 2: v = std::exp(-0.25 * r2); break;
                        case 3: v = std::exp(-(x * x / 2.0 + y1 * y1 / 4.0 + y2 * y2 / 8.0)); break;
                    }
                    f.v[grid.idx(ix, iy, iz)] = v;
                }
            }
        }
        const double nrm = lebesgue_norm(f, 2.0);
        for (double& v : f.v) v /= nrm;
        return f;
    }

    std::mt19937_64 rng(ens.seed * 1000003ull + std::uint64_t(index) * 7919ull + 17ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    RealField f(grid);
    for (double& v : f.v) v = gauss(rng);

    SpectralField F = forward_transform(f);
    const double fraction = std::min(1.0, double(band) / (std::min(grid.nx, std::min(grid.ny1, grid.ny2)) / 2.0));
    apply_mask(F, dealias_mask(grid, fraction));
    f = inverse_transform(F);

    if (ens.generator == Ensemble::Generator::decaying_envelope) {
        const double w = ens.envelope_width;
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x(ix);
            for (int iy = 0; iy < grid.ny1; ++iy) {
                const double y1 = grid.y1(iy);
                for (int iz = 0; iz < grid.ny2; ++iz) {
                    const double y2 = grid.y2(iz);
                    f.v[grid.idx(ix, iy, iz)] *=
                        std::exp(-(x * x + y1 * y1 + y2 * y2) / (w * w));
                }
            }
        }
    }
    const double nrm = lebesgue_norm(f, 2.0);
    if (nrm > 0.0)
        for (double& v : f.v) v /= nrm;
    return f;
}

// ---------------------------------------------------------------------------
// streaming evaluation of the four linear-estimate ratios. All members share
// one set of propagator phases: states are advanced time step by time step
// with a single precomputed e^{i dt w} multiplier instead of a fresh
// exponential per (member, sample).

namespace {

SpectralField phase_array(const Grid3& g, double t) {
    SpectralField E(g);
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double e1 = g.eta1(iy);
            for (int iz = 0; iz < g.ny2; ++iz) {
                const double e2 = g.eta2(iz);
                E.c[g.idx(ix, iy, iz)] =
                    std::polar(1.0, t * xi * (xi * xi + e1 * e1 + e2 * e2));
            }
        }
    }
    return E;
}

void mul_in(SpectralField& f, const SpectralField& e) {
    for (std::size_t i = 0; i < f.c.size(); ++i) f.c[i] *= e.c[i];
}

void zero_x_nyquist(SpectralField& f) {
    const Grid3& g = f.grid;
    for (int iy = 0; iy < g.ny1; ++iy)
        for (int iz = 0; iz < g.ny2; ++iz) f.c[g.idx(g.nx / 2, iy, iz)] = cplx{0.0, 0.0};
}

// d/d(axis) applied into a scratch field
void derivative_into(const SpectralField& f, int axis, SpectralField& out) {
    const Grid3& g = f.grid;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix);
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double e1 = g.eta1(iy);
            for (int iz = 0; iz < g.ny2; ++iz) {
                const double k = axis == 0 ? xi : (axis == 1 ? e1 : g.eta2(iz));
                const std::size_t m = g.idx(ix, iy, iz);
                out.c[m] = f.c[m] * cplx{0.0, k};
            }
        }
    }
    if (axis == 0) {
        for (int iy = 0; iy < g.ny1; ++iy)
            for (int iz = 0; iz < g.ny2; ++iz) out.c[g.idx(g.nx / 2, iy, iz)] = cplx{0.0, 0.0};
    } else if (axis == 1) {
        for (int ix = 0; ix < g.nx; ++ix)
            for (int iz = 0; iz < g.ny2; ++iz) out.c[g.idx(ix, g.ny1 / 2, iz)] = cplx{0.0, 0.0};
    } else {
        for (int ix = 0; ix < g.nx; ++ix)
            for (int iy = 0; iy < g.ny1; ++iy) out.c[g.idx(ix, iy, g.ny2 / 2)] = cplx{0.0, 0.0};
    }
}

std::vector<SpectralField> member_spectra(const Ensemble& ens, const Grid3& g, int from, int to) {
    std::vector<SpectralField> F;
    F.reserve(to - from);
    for (int i = from; i < to; ++i) {
        F.push_back(forward_transform(ensemble_member(ens, i, g)));
        zero_x_nyquist(F.back());
    }
    return F;
}

// ||grad W(t)f||_{L^inf_x L^2_yt} / ||f||_2 over t in [-T, T]
std::vector<double> kato_forward_ratios(std::vector<SpectralField> F, double T, int nt) {
    const Grid3& g = F.front().grid;
    const auto ts = linspace(-T, T, nt);
    const double dt = ts[1] - ts[0];
    std::vector<double> rhs;
    for (const auto& f : F) rhs.push_back(l2_norm(f));

    std::vector<SpectralField> state = F;
    const SpectralField e0 = phase_array(g, ts[0]);
    const SpectralField estep = phase_array(g, dt);
    for (auto& s : state) mul_in(s, e0);

    const double hy = g.spacing_y1() * g.spacing_y2();
    std::vector<std::vector<double>> acc(F.size(), std::vector<double>(g.nx, 0.0));
    SpectralField scratch(g);
    for (int i = 0; i < nt; ++i) {
        if (i > 0)
            for (auto& s : state) mul_in(s, estep);
        const double wt = trapezoid_weight(i, nt, dt);
        for (std::size_t m = 0; m < state.size(); ++m) {
            for (int d = 0; d < 3; ++d) {
                derivative_into(state[m], d, scratch);
                scratch.real_rep = true;
                RealField gd = inverse_transform(scratch);
                for (int ix = 0; ix < g.nx; ++ix) {
                    double s = 0.0;
                    const double* row = gd.v.data() + g.idx(ix, 0, 0);
                    for (int r = 0; r < g.ny1 * g.ny2; ++r) s += row[r] * row[r];
                    acc[m][ix] += wt * hy * s;
                }
            }
        }
    }
    std::vector<double> out;
    for (std::size_t m = 0; m < F.size(); ++m) {
        double lhs = 0.0;
        for (double a : acc[m]) lhs = std::max(lhs, std::sqrt(a));
        out.push_back(lhs / rhs[m]);
    }
    return out;
}

// ||W(t)f||_{L^2_x L^inf_yT} / ||f||_{H^s} over t in [0, T]
std::vector<double> maximal_ratios(std::vector<SpectralField> state, double s, double T,
                                   int nt) {
    const Grid3& g = state.front().grid;
    const auto ts = linspace(0.0, T, nt);
    std::vector<double> rhs;
    for (const auto& f : state) rhs.push_back(sobolev_norm(f, SobolevSpec{s, SobolevVariant::j}));

    const SpectralField estep = phase_array(g, ts[1] - ts[0]);
    std::vector<std::vector<double>> mx(state.size(), std::vector<double>(g.nx, 0.0));
    for (int i = 0; i < nt; ++i) {
        if (i > 0)
            for (auto& st : state) mul_in(st, estep);
        for (std::size_t m = 0; m < state.size(); ++m) {
            RealField u = inverse_transform(state[m]);
            for (int ix = 0; ix < g.nx; ++ix) {
                const double* row = u.v.data() + g.idx(ix, 0, 0);
                double big = mx[m][ix];
                for (int r = 0; r < g.ny1 * g.ny2; ++r) big = std::max(big, std::abs(row[r]));
                mx[m][ix] = big;
            }
        }
    }
    std::vector<double> out;
    for (std::size_t m = 0; m < state.size(); ++m) {
        double lhs2 = 0.0;
        for (double v : mx[m]) lhs2 += v * v;
        out.push_back(std::sqrt(lhs2 * g.spacing_x()) / rhs[m]);
    }
    return out;
}

// ||D_x^gamma W(t)f||_{L^2_T L^inf_xy} / ||f||_{H^beta} over t in [0, T]
std::vector<double> strichartz_ratios(std::vector<SpectralField> state, double gamma,
                                      double beta, double T, int nt) {
    const Grid3& g = state.front().grid;
    const auto ts = linspace(0.0, T, nt);
    const double dt = ts[1] - ts[0];
    std::vector<double> rhs, acc(state.size(), 0.0);
    for (auto& f : state) {
        rhs.push_back(sobolev_norm(f, SobolevSpec{beta, SobolevVariant::j}));
        f = apply_fractional(f, Op::dx, gamma);
    }
    const SpectralField estep = phase_array(g, dt);
    for (int i = 0; i < nt; ++i) {
        if (i > 0)
            for (auto& st : state) mul_in(st, estep);
        const double wt = trapezoid_weight(i, nt, dt);
        for (std::size_t m = 0; m < state.size(); ++m) {
            RealField u = inverse_transform(state[m]);
            double big = 0.0;
            for (double v : u.v) big = std::max(big, std::abs(v));
            acc[m] += wt * big * big;
        }
    }
    std::vector<double> out;
    for (std::size_t m = 0; m < state.size(); ++m) out.push_back(std::sqrt(acc[m]) / rhs[m]);
    return out;
}

// sup_t ||grad int_0^t W(-t')g(t')dt'||_2 / ||g||_{L^1_x L^2_yt}, t in [-T, T];
// g is a smooth-in-time combination of three basis fields
double kato_dual_ratio(const Ensemble& ens, int member, const Grid3& g, double T, int nt) {
    RealField b0 = ensemble_member(ens, 3 * member, g);
    RealField b1 = ensemble_member(ens, 3 * member + 1, g);
    RealField b2 = ensemble_member(ens, 3 * member + 2, g);
    std::vector<SpectralField> B;
    B.push_back(forward_transform(b0));
    B.push_back(forward_transform(b1));
    B.push_back(forward_transform(b2));
    for (auto& bb : B) zero_x_nyquist(bb);

    const auto ts = linspace(-T, T, nt);
    const double dt = ts[1] - ts[0];
    const int mid = (nt - 1) / 2;  // index of t = 0

    auto env = [&](double t) {
        return std::array<double, 3>{std::cos(0.5 * kPi * t / T), std::sin(kPi * t / T), t / T};
    };

    // LHS: prefix trapezoid sums of W(-t')g(t'), outward from t = 0, with the
    // three basis states advanced by the shared step phase
    double lhs = 0.0;
    for (int dir : {+1, -1}) {
        const SpectralField estep = phase_array(g, -dir * dt);
        std::vector<SpectralField> st = B;  // at t = 0, W(0) = identity
        SpectralField prefix(g), prev(g), cur(g);
        auto combine = [&](int i, SpectralField& out) {
            const auto e = env(ts[i]);
            for (std::size_t m = 0; m < out.c.size(); ++m)
                out.c[m] = e[0] * st[0].c[m] + e[1] * st[1].c[m] + e[2] * st[2].c[m];
        };
        combine(mid, prev);
        for (int k = 1; mid + dir * k >= 0 && mid + dir * k < nt; ++k) {
            const int i = mid + dir * k;
            for (auto& s : st) mul_in(s, estep);
            combine(i, cur);
            for (std::size_t m = 0; m < prefix.c.size(); ++m)
                prefix.c[m] += dir * 0.5 * dt * (prev.c[m] + cur.c[m]);
            std::swap(prev, cur);
            lhs = std::max(lhs, grad_norm(prefix));
        }
    }

    // RHS: || g ||_{L^1_x L^2_yt}
    std::vector<double> acc(g.nx, 0.0);
    const double hy = g.spacing_y1() * g.spacing_y2();
    for (int i = 0; i < nt; ++i) {
        const auto e = env(ts[i]);
        const double wt = trapezoid_weight(i, nt, dt);
        for (int ix = 0; ix < g.nx; ++ix) {
            double s = 0.0;
            for (int iy = 0; iy < g.ny1; ++iy)
                for (int iz = 0; iz < g.ny2; ++iz) {
                    const std::size_t k = g.idx(ix, iy, iz);
                    const double v = e[0] * b0.v[k] + e[1] * b1.v[k] + e[2] * b2.v[k];
                    s += v * v;
                }
            acc[ix] += wt * hy * s;
        }
    }
    double rhs = 0.0;
    for (double a : acc) rhs += std::sqrt(a);
    rhs *= g.spacing_x();
    return lhs / rhs;
}

}  // namespace

double weighted_commutator_residual(const RealField& u0, double r, int axis, double t, double s) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("commutator: r must be in (0,1)");
    if (!(s >= 2.0 * r)) throw std::invalid_argument("commutator: needs s >= 2r");
    const Grid3& g = u0.grid;
    const unsigned ax = (axis == 0) ? axis_x : (axis == 1) ? axis_y1 : axis_y2;
    RealField w = spatial_weight(g, r, ax, WeightBracket::homogeneous);

    SpectralField U = forward_transform(u0);
    RealField lhs = inverse_transform(apply_propagator(U, t));
    for (std::size_t i = 0; i < lhs.v.size(); ++i) lhs.v[i] *= w.v[i];

    RealField wu = u0;
    for (std::size_t i = 0; i < wu.v.size(); ++i) wu.v[i] *= w.v[i];
    RealField rhs = inverse_transform(apply_propagator(forward_transform(wu), t));

    for (std::size_t i = 0; i < lhs.v.size(); ++i) lhs.v[i] -= rhs.v[i];
    const double num = lebesgue_norm(lhs, 2.0);
    const double den = (1.0 + std::abs(t)) * sobolev_norm(U, SobolevSpec{s, SobolevVariant::j});
    return num / den;
}

DecayScaling weighted_decay_scaling(double a, const std::array<int, 3>& alpha,
                                    const std::vector<double>& t_samples, const Grid3& grid,
                                    const ProfileSpec& profile) {
    if (t_samples.size() < 2) throw std::invalid_argument("weighted_decay: need >= 2 samples");
    for (double t : t_samples)
        if (!(t > 0.0 && t <= 1.0))
            throw std::invalid_argument("weighted_decay: samples must lie in (0, 1]");
    const int order = alpha[0] + alpha[1] + alpha[2];
    if (order > 3) throw std::invalid_argument("weighted_decay: |alpha| <= 3");
    if (!(WeightRate{a}.representable(profile.b)))
        throw std::invalid_argument("weighted_decay: a*sqrt(3) must stay below the profile decay");

    const Grid3& g = grid;
    RealField w0 = sample_profile(profile, g).field;
    for (int ix = 0; ix < g.nx; ++ix) {
        const double x = g.x(ix);
        for (int iy = 0; iy < g.ny1; ++iy) {
            const double y1 = g.y1(iy);
            for (int iz = 0; iz < g.ny2; ++iz)
                w0.v[g.idx(ix, iy, iz)] *= std::exp(a * (x + y1 + g.y2(iz)));
        }
    }
    SpectralField W0 = forward_transform(w0);

    DecayScaling out;
    out.t_samples = t_samples;
    const double growth = 3.0 * a * a * a;
    for (double t : t_samples) {
        SpectralField Wt = apply_weighted_propagator(W0, t, WeightRate{a});
        Wt = apply_partial(Wt, alpha[0], alpha[1], alpha[2]);
        out.values.push_back(l2_norm(Wt) * std::exp(-growth * t));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = int(t_samples.size());
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(t_samples[i]);
        const double ly = std::log(out.values[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return out;
}

double gradient_oscillation(const SpectralField& F, double delta) {
    const Grid3& g = F.grid;
    const double hmax = std::max(g.spacing_x(), std::max(g.spacing_y1(), g.spacing_y2()));
    if (!(delta >= 2.0 * hmax))
        throw std::invalid_argument("gradient_oscillation: delta below grid resolution");

    // marginal sums over the other two axes; the evaluation points sit on the
    // coordinate axes so the phase depends on one index only
    std::vector<cplx> ax(g.nx, 0.0), ay1(g.ny1, 0.0), ay2(g.ny2, 0.0);
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny1; ++iy)
            for (int iz = 0; iz < g.ny2; ++iz) {
                const cplx c = F.c[g.idx(ix, iy, iz)];
                ax[ix] += c;
                ay1[iy] += c;
                ay2[iz] += c;
            }
    const double vol = g.volume();
    auto osc = [&](const std::vector<cplx>& marg, int n, auto freq) {
        cplx plus = 0.0, minus = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = freq(i);
            const cplx d = cplx(0.0, k) * marg[i];
            plus += d * std::polar(1.0, delta * k);
            minus += d * std::polar(1.0, -delta * k);
        }
        return std::abs(plus.real() - minus.real()) / vol;
    };
    double best = osc(ax, g.nx, [&](int i) { return g.xi(i); });
    best = std::max(best, osc(ay1, g.ny1, [&](int i) { return g.eta1(i); }));
    best = std::max(best, osc(ay2, g.ny2, [&](int i) { return g.eta2(i); }));
    return best;
}

double gradient_oscillation(const RealField& f, double delta) {
    return gradient_oscillation(forward_transform(f), delta);
}

SweepTable blowup_sweep(const BlowupSpec& spec, const Grid3& grid,
                        const std::vector<double>& times, double delta,
                        const SweepSource& source, const SolverConfig& solver_cfg) {
    BlowupData data = build_u0(spec, grid);
    SweepTable table;

    for (double t : times) {
        SweepRow row;
        row.t = t;
        for (const SingularTime& st : data.armed) {
            if (std::abs(t - st.t()) < 1e-9) {
                row.is_armed_rational = true;
                row.coefficient = st.coefficient;
                table.armed.push_back(st);
                break;
            }
        }

        if (source.kind == SweepSource::Kind::linear) {
            row.score = gradient_oscillation(apply_propagator(data.u0_hat, t), delta);
        } else {
            RealField u0s = data.u0;
            for (double& v : u0s.v) v *= source.eps;
            SolverConfig cfg = solver_cfg;
            cfg.T = t;
            cfg.snapshot_stride = 0;  // final state only
            Trajectory traj = integrate(u0s, cfg);
            SpectralField Ft = forward_transform(traj.snapshots.back());
            if (source.kind == SweepSource::Kind::duhamel) {
                SpectralField lin =
                    apply_propagator(forward_transform(traj.snapshots.front()), t);
                for (std::size_t i = 0; i < Ft.c.size(); ++i) Ft.c[i] -= lin.c[i];
            }
            row.score = gradient_oscillation(Ft, delta);
        }
        table.rows.push_back(row);
    }
    return table;
}

SmoothingReport smoothing_report(const ProfileSpec& data, const SolverConfig& cfg, double s_probe,
                                 const std::vector<Grid3>& grids, double t_eval) {
    if (grids.size() < 2) throw std::invalid_argument("smoothing_report: need >= 2 grids");
    SmoothingReport rep;
    rep.s_probe = s_probe;
    rep.t_eval = t_eval;
    rep.comparative = (cfg.k == 1);

    for (const Grid3& g : grids) {
        RealField u0 = sample_profile(data, g).field;
        SolverConfig c = cfg;
        c.T = t_eval;
        c.snapshot_stride = 0;
        Trajectory traj = integrate(u0, c);
        SpectralField u0_hat = forward_transform(traj.snapshots.front());
        SpectralField lin = apply_propagator(u0_hat, t_eval);
        SpectralField z = forward_transform(traj.snapshots.back());
        for (std::size_t i = 0; i < z.c.size(); ++i) z.c[i] -= lin.c[i];

        SmoothingGridResult r;
        r.n = g.nx;
        r.g_lin = sobolev_norm(lin, SobolevSpec{s_probe, SobolevVariant::j});
        r.g_duh = sobolev_norm(z, SobolevSpec{s_probe, SobolevVariant::j});
        rep.grids.push_back(r);
    }
    bool ok = true;
    for (std::size_t i = 0; i + 1 < rep.grids.size(); ++i) {
        const double gl = rep.grids[i + 1].g_lin / rep.grids[i].g_lin;
        const double tiny = 1e-14 * rep.grids[i + 1].g_lin;
        const double gd = (rep.grids[i].g_duh <= tiny && rep.grids[i + 1].g_duh <= tiny)
                              ? 0.0
                              : rep.grids[i + 1].g_duh / rep.grids[i].g_duh;
        rep.lin_growth.push_back(gl);
        rep.duh_growth.push_back(gd);
        if (rep.comparative) ok = ok && (gd <= gl);
        else ok = ok && (gl >= rep.lin_growth_min) && (gd <= rep.duh_growth_max);
    }
    rep.smoothing = ok;
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> audit_ratios(const EstimateId& id, const Ensemble& ens, const Grid3& g,
                                 double T, const AuditOptions& opts) {
    std::vector<double> out;
    switch (id.kind) {
        case EstimateId::Kind::kato_forward:
            out = kato_forward_ratios(member_spectra(ens, g, 0, ens.count), T, opts.time_samples);
            break;
        case EstimateId::Kind::kato_dual:
            for (int i = 0; i < ens.count; ++i)
                out.push_back(kato_dual_ratio(ens, i, g, T, opts.time_samples));
            break;
        case EstimateId::Kind::maximal:
            out = maximal_ratios(member_spectra(ens, g, 0, ens.count), id.s, T,
                                 opts.time_samples);
            break;
        case EstimateId::Kind::strichartz:
            out = strichartz_ratios(member_spectra(ens, g, 0, ens.count), id.gamma, id.beta, T,
                                    opts.time_samples);
            break;
        case EstimateId::Kind::weighted_commutator:
            for (int i = 0; i < ens.count; ++i) {
                RealField f = ensemble_member(ens, i, g);
                for (double t : {0.5, 1.0, 2.0, 4.0})
                    out.push_back(weighted_commutator_residual(f, id.r, id.axis, t, id.s));
            }
            break;
        default: break;
    }
    return out;
}

}  // namespace

double estimate_ratio(const EstimateId& id, const RealField& f, double T, int time_samples) {
    id.validate();
    std::vector<SpectralField> F;
    F.push_back(forward_transform(f));
    zero_x_nyquist(F.front());
    switch (id.kind) {
        case EstimateId::Kind::kato_forward:
            return kato_forward_ratios(std::move(F), T, time_samples).front();
        case EstimateId::Kind::maximal:
            return maximal_ratios(std::move(F), id.s, T, time_samples).front();
        case EstimateId::Kind::strichartz:
            return strichartz_ratios(std::move(F), id.gamma, id.beta, T, time_samples).front();
        default:
            throw std::invalid_argument("estimate_ratio: estimate is not single-field");
    }
}

AuditReport run_audit(const EstimateId& id, const Ensemble& ens, const Grid3& grid, double T,
                      const AuditOptions& opts_in) {
    id.validate();
    AuditOptions opts = opts_in;
    AuditReport rep;
    rep.estimate = id.name();
    rep.growth_bound = opts.growth_bound;

    if (id.kind == EstimateId::Kind::maximal && !(T < 1.0))
        throw std::invalid_argument("maximal estimate audited only for T < 1");

    if (id.kind == EstimateId::Kind::genericity) {
        const double golden = 0.5 * (1.0 + std::sqrt(5.0));
        const double probes[] = {golden, std::sqrt(2.0), std::cbrt(2.0)};
        double base_min = 1e300, ref_min = 1e300;
        for (double gmm : probes) {
            const double m1 = genericity_margin(GenericityProbe{gmm, 10000});
            const double m2 = genericity_margin(GenericityProbe{gmm, 20000});
            rep.ratios.push_back(m1);
            base_min = std::min(base_min, m1);
            ref_min = std::min(ref_min, m2);
        }
        rep.sup_ratio = base_min;
        rep.refined_sup = ref_min;
        rep.growth = (base_min > 0.0) ? ref_min / base_min : 0.0;
        rep.pass = base_min > 0.0 && ref_min >= 0.5 * base_min;
        rep.notes.push_back("ratios are Diophantine margins at K=10^4 for golden, sqrt2, cbrt2");
        return rep;
    }

    if (id.kind == EstimateId::Kind::weighted_decay) {
        std::vector<double> ts;
        for (int i = 0; i < 9; ++i) ts.push_back(0.1 * std::pow(10.0, double(i) / 8.0));
        DecayScaling sc = weighted_decay_scaling(id.a, id.alpha, ts, grid);
        const double order = id.alpha[0] + id.alpha[1] + id.alpha[2];
        rep.ratios = {sc.slope};
        rep.sup_ratio = sc.slope;
        rep.refined_sup = sc.slope;
        rep.growth = 1.0;
        rep.pass = sc.slope >= -0.5 * order - 0.15;
        rep.notes.push_back("value is the fitted log-log slope; bound is -|alpha|/2 - 0.15");
        return rep;
    }

    // fix the spectral band before refining so both grids see the same class
    Ensemble fixed = ens;
    if (fixed.band == 0)
        fixed.band = std::max(2, std::min(grid.nx, std::min(grid.ny1, grid.ny2)) / 4);

    rep.ratios = audit_ratios(id, fixed, grid, T, opts);
    rep.sup_ratio = 0.0;
    for (double r : rep.ratios) rep.sup_ratio = std::max(rep.sup_ratio, r);

    if (opts.refine) {
        const Grid3 g2 = make_grid(2 * grid.nx, 2 * grid.ny1, 2 * grid.ny2, grid.box_len);
        const auto r2 = audit_ratios(id, fixed, g2, T, opts);
        for (double r : r2) rep.refined_sup = std::max(rep.refined_sup, r);
        rep.growth = (rep.sup_ratio > 0.0) ? rep.refined_sup / rep.sup_ratio : 0.0;
    } else {
        rep.refined_sup = rep.sup_ratio;
        rep.growth = 1.0;
    }
    rep.pass = std::isfinite(rep.sup_ratio) && rep.sup_ratio > 0.0 &&
               (!opts.refine || rep.growth < opts.growth_bound);
    return rep;
}

}  // namespace gzk
