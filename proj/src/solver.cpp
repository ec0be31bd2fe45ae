#include "gzk/solver.hpp"

#include <algorithm>
#include <cmath>

#include "gzk/multipliers.hpp"
#include "gzk/norms.hpp"

namespace gzk {

namespace {

// largest dealiased wavenumber, the advective stability scale
double k_max_dealiased(const Grid3& g, double fraction) {
    const double pi = 3.14159265358979323846;
    const int nmax = std::max(g.nx, std::max(g.ny1, g.ny2));
    return fraction * pi * nmax / g.box_len;
}

struct NonlinearOp {
    const Grid3& g;
    int k;
    std::vector<std::uint8_t> mask;
    double max_abs_u = 0.0;  // refreshed on every call

    NonlinearOp(const Grid3& g_, int k_, double fraction)
        : g(g_), k(k_), mask(dealias_mask(g_, fraction)) {}

    // F(u) = -dealias( u^k u_x ), evaluated pseudo-spectrally
    SpectralField operator()(const SpectralField& uhat) {
        RealField u = inverse_transform(uhat);
        RealField ux = inverse_transform(apply_fractional(uhat, Op::ddx, 1.0));
        double m = 0.0;
        for (std::size_t i = 0; i < u.v.size(); ++i) {
            double p = ux.v[i];
            for (int q = 0; q < k; ++q) p *= u.v[i];
            m = std::max(m, std::abs(u.v[i]));
            ux.v[i] = -p;
        }
        max_abs_u = m;
        SpectralField out = forward_transform(ux);
        apply_mask(out, mask);
        return out;
    }
};

SpectralField phase_factor(const Grid3& g, double t) {
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

void mul(SpectralField& f, const SpectralField& e) {
    for (std::size_t i = 0; i < f.c.size(); ++i) f.c[i] *= e.c[i];
}
void mul_conj(SpectralField& f, const SpectralField& e) {
    for (std::size_t i = 0; i < f.c.size(); ++i) f.c[i] *= std::conj(e.c[i]);
}

bool finite(const SpectralField& f) {
    for (const cplx& c : f.c)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

}  // namespace

Trajectory integrate(const RealField& u0, const SolverConfig& cfg) {
    const Grid3& g = u0.grid;
    if (u0.v.size() != g.size()) throw std::invalid_argument("integrate: field/grid mismatch");
    if (cfg.k < 1) throw std::invalid_argument("integrate: k must be >= 1");
    if (!(cfg.T > 0.0)) throw std::invalid_argument("integrate: T must be positive");
    if (cfg.snapshot_stride < 0) throw std::invalid_argument("integrate: bad snapshot_stride");
    const bool final_only = cfg.snapshot_stride == 0;

    double amp = 0.0;
    for (double v : u0.v) amp = std::max(amp, std::abs(v));
    const double kmax = k_max_dealiased(g, cfg.dealias_fraction);
    const double speed = std::pow(amp, double(cfg.k));
    const double dt_cfl = (cfg.linear_only || speed == 0.0)
                              ? std::numeric_limits<double>::infinity()
                              : cfg.cfl_c / (speed * kmax);
    double dt = cfg.dt;
    if (dt <= 0.0) {
        dt = std::min(cfg.dt_cap, dt_cfl);
    } else if (dt > dt_cfl * (1.0 + 1e-12)) {
        throw std::invalid_argument("integrate: dt exceeds the advective stability bound");
    }

    // land exactly on T with a snapshot at the final step
    long steps = long(std::ceil(cfg.T / dt - 1e-9));
    if (!final_only)
        steps = ((steps + cfg.snapshot_stride - 1) / cfg.snapshot_stride) * cfg.snapshot_stride;
    dt = cfg.T / double(steps);

    NonlinearOp nl(g, cfg.k, cfg.dealias_fraction);
    const SpectralField e_half = phase_factor(g, 0.5 * dt);
    SpectralField e_full = e_half;
    mul(e_full, e_half);

    Trajectory traj;
    traj.grid = g;
    traj.provenance = cfg.linear_only ? Provenance::linear : Provenance::nonlinear;

    SpectralField uhat = forward_transform(u0);
    // the x-Nyquist plane has no conjugate partner under the odd dispersion
    // phase; drop it once so snapshots stay exactly real-representing
    for (int iy = 0; iy < g.ny1; ++iy)
        for (int iz = 0; iz < g.ny2; ++iz) uhat.c[g.idx(g.nx / 2, iy, iz)] = cplx{0.0, 0.0};
    // nonlinear runs evolve in the dealiased band: an unmasked tail in the
    // state would feed one-sided energy transfer through the masked product
    // and destroy discrete mass conservation
    if (!cfg.linear_only) apply_mask(uhat, nl.mask);
    traj.times.push_back(0.0);
    traj.snapshots.push_back(cfg.linear_only ? u0 : inverse_transform(uhat));
    const std::size_t n = g.size();

    for (long step = 0; step < steps; ++step) {
        const double t_now = double(step) * dt;
        if (cfg.linear_only) {
            mul(uhat, e_full);
        } else {
            // RK4 on y(tau) = e^{-i tau w} u(t+tau); only the relative phases
            // e^{i dt w / 2} and e^{i dt w} enter
            SpectralField g1 = nl(uhat);
            SpectralField stage(g);
            for (std::size_t i = 0; i < n; ++i)
                stage.c[i] = (uhat.c[i] + 0.5 * dt * g1.c[i]) * e_half.c[i];
            SpectralField g2 = nl(stage);
            mul_conj(g2, e_half);
            for (std::size_t i = 0; i < n; ++i)
                stage.c[i] = (uhat.c[i] + 0.5 * dt * g2.c[i]) * e_half.c[i];
            SpectralField g3 = nl(stage);
            mul_conj(g3, e_half);
            for (std::size_t i = 0; i < n; ++i)
                stage.c[i] = (uhat.c[i] + dt * g3.c[i]) * e_full.c[i];
            SpectralField g4 = nl(stage);
            mul_conj(g4, e_full);
            for (std::size_t i = 0; i < n; ++i)
                uhat.c[i] = (uhat.c[i] + dt / 6.0 * (g1.c[i] + 2.0 * g2.c[i] +
                                                     2.0 * g3.c[i] + g4.c[i])) *
                            e_full.c[i];
            if (!std::isfinite(nl.max_abs_u)) throw SolverAbort(t_now);
        }
        const bool record = final_only ? (step + 1 == steps) : ((step + 1) % cfg.snapshot_stride == 0);
        if (record) {
            if (!finite(uhat)) throw SolverAbort(t_now);
            traj.times.push_back(double(step + 1) * dt);
            traj.snapshots.push_back(inverse_transform(uhat));
        }
    }
    return traj;
}

Trajectory duhamel_split(const Trajectory& traj, const RealField& u0) {
    if (!(u0.grid == traj.grid)) throw std::invalid_argument("duhamel_split: grid mismatch");
    if (traj.snapshots.empty()) throw std::invalid_argument("duhamel_split: empty trajectory");
    // the linear reference starts from the trajectory's own initial snapshot
    // (the solver's evolved state is the band-projected datum)
    SpectralField u0_hat = forward_transform(traj.snapshots.front());
    Trajectory z;
    z.grid = traj.grid;
    z.times = traj.times;
    z.provenance = Provenance::duhamel;
    z.snapshots.reserve(traj.count());
    for (std::size_t i = 0; i < traj.count(); ++i) {
        SpectralField diff = forward_transform(traj.snapshots[i]);
        SpectralField lin = apply_propagator(u0_hat, traj.times[i]);
        for (std::size_t m = 0; m < diff.c.size(); ++m) diff.c[m] -= lin.c[m];
        z.snapshots.push_back(inverse_transform(diff));
    }
    return z;
}

Invariants invariants(const RealField& f, int k) {
    const Grid3& g = f.grid;
    Invariants out;
    for (double v : f.v) {
        out.mass += v * v;
        out.mean += v;
    }
    const double cell = g.cell();
    out.mass *= cell;
    out.mean *= cell;

    SpectralField F = forward_transform(f);
    RealField gx = inverse_transform(apply_fractional(F, Op::ddx, 1.0));
    RealField gy1 = inverse_transform(apply_fractional(F, Op::ddy1, 1.0));
    RealField gy2 = inverse_transform(apply_fractional(F, Op::ddy2, 1.0));
    const double cnl = 1.0 / (double(k + 1) * double(k + 2));
    double h = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        const double grad2 =
            gx.v[i] * gx.v[i] + gy1.v[i] * gy1.v[i] + gy2.v[i] * gy2.v[i];
        h += 0.5 * grad2 - cnl * std::pow(f.v[i], double(k + 2));
    }
    out.hamiltonian = h * cell;
    return out;
}

PicardResult picard_iterate(const RealField& u0, double T, int n_iters, int quad_points) {
    const Grid3& g = u0.grid;
    if (quad_points < 2) throw std::invalid_argument("picard_iterate: quad_points must be >= 2");
    if (n_iters < 1) throw std::invalid_argument("picard_iterate: n_iters must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("picard_iterate: T must be positive");

    const int q = quad_points;
    const double dt = T / double(q - 1);
    NonlinearOp nl(g, 1, 2.0 / 3.0);
    SpectralField u0_hat = forward_transform(u0);
    for (int iy = 0; iy < g.ny1; ++iy)
        for (int iz = 0; iz < g.ny2; ++iz) u0_hat.c[g.idx(g.nx / 2, iy, iz)] = cplx{0.0, 0.0};
    apply_mask(u0_hat, nl.mask);  // same state space as integrate

    // free flow at the quadrature nodes
    std::vector<SpectralField> cur;
    cur.reserve(q);
    for (int i = 0; i < q; ++i) cur.push_back(apply_propagator(u0_hat, i * dt));

    PicardResult res;
    int increases = 0;
    const SobolevSpec h2{2.0, SobolevVariant::j};

    for (int it = 0; it < n_iters; ++it) {
        // M_j = W(-t_j) F(u(t_j)); prefix trapezoid sums give the Duhamel
        // integral since W(t_i - t_j) = W(t_i) W(-t_j)
        std::vector<SpectralField> next(q, SpectralField(g));
        next[0] = u0_hat;
        SpectralField prefix(g);
        SpectralField m_prev(g);
        for (int j = 0; j < q; ++j) {
            SpectralField mj = apply_propagator(nl(cur[j]), -j * dt);
            if (j > 0)
                for (std::size_t m = 0; m < prefix.c.size(); ++m)
                    prefix.c[m] += 0.5 * dt * (m_prev.c[m] + mj.c[m]);
            m_prev = std::move(mj);
            if (j > 0) {
                SpectralField state(g);
                // sign: F already carries the minus of the equation, so the
                // mild solution is W(t) u0 + prefix
                for (std::size_t m = 0; m < state.c.size(); ++m)
                    state.c[m] = u0_hat.c[m] + prefix.c[m];
                next[j] = apply_propagator(state, j * dt);
            }
        }
        double d = 0.0;
        for (int j = 0; j < q; ++j) {
            SpectralField diff(g);
            for (std::size_t m = 0; m < diff.c.size(); ++m)
                diff.c[m] = next[j].c[m] - cur[j].c[m];
            d = std::max(d, sobolev_norm(diff, h2));
        }
        if (!res.distances.empty()) {
            res.ratios.push_back(res.distances.back() > 0.0 ? d / res.distances.back() : 0.0);
            if (d > res.distances.back()) ++increases;
            else increases = 0;
            if (increases >= 3) res.diverged = true;
        }
        res.distances.push_back(d);
        cur = std::move(next);
    }
    res.final_at_T = inverse_transform(cur.back());
    return res;
}

}  // namespace gzk
