#pragma once

#include <stdexcept>
#include <vector>

#include "gzk/grid.hpp"
#include "gzk/trajectory.hpp"

namespace gzk {

// Pseudo-spectral integrator configuration for u_t + u_xxx + u_xy1y1 + u_xy2y2
// + u^k u_x = 0. dt = 0 requests the advective stability step
// cfl_c / (max|u0|^k * k_max) capped at dt_cap; an explicit dt above the
// stability bound is refused.
struct SolverConfig {
    int k = 1;
    double dt = 0.0;
    double T = 1.0;
    double dealias_fraction = 2.0 / 3.0;
    int snapshot_stride = 1;
    bool linear_only = false;
    double cfl_c = 1.0;
    double dt_cap = 0.01;
};

// thrown when the state stops being finite; carries the last time that was
struct SolverAbort : std::runtime_error {
    double last_valid_time;
    explicit SolverAbort(double t)
        : std::runtime_error("solver aborted: non-finite state"), last_valid_time(t) {}
};

// Integrating-factor RK4 on the phase-transported variable; the linear flow
// is exact per mode, the nonlinear product is dealiased once per evaluation.
Trajectory integrate(const RealField& u0, const SolverConfig& cfg);

// z(t_i) = u(t_i) - W(t_i) u0 for every snapshot of a nonlinear trajectory.
Trajectory duhamel_split(const Trajectory& traj, const RealField& u0);

struct Invariants {
    double mass = 0.0;         // integral of u^2
    double mean = 0.0;         // integral of u
    double hamiltonian = 0.0;  // integral of |grad u|^2 / 2 - u^{k+2}/((k+1)(k+2))
};

Invariants invariants(const RealField& f, int k);

struct PicardResult {
    std::vector<double> distances;  // d_n = sup_t ||u^{n+1}(t) - u^n(t)||_{H^2}
    std::vector<double> ratios;     // d_{n+1} / d_n
    bool diverged = false;          // three consecutive increasing distances
    RealField final_at_T;           // last iterate evaluated at t = T
};

// Picard iteration of the mild formulation for k = 1: starting from the free
// flow, u^{n+1}(t) = W(t)u0 - int_0^t W(t-t') (u^n u^n_x)(t') dt', with the
// time integral by trapezoid on quad_points nodes.
PicardResult picard_iterate(const RealField& u0, double T, int n_iters, int quad_points);

}  // namespace gzk
