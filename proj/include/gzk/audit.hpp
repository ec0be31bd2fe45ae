#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gzk/blowup.hpp"
#include "gzk/grid.hpp"
#include "gzk/solver.hpp"

namespace gzk {

// Which linear estimate to stress, with its parameters.
struct EstimateId {
    enum class Kind {
        strichartz,           // ||D_x^g W(t)f||_{L^2_T L^inf_xy} <~ ||f||_{H^b}, 0<g<b
        kato_forward,         // ||grad W(t)f||_{L^inf_x L^2_yt}  <~ ||f||_2
        kato_dual,            // sup_t ||grad int_0^t W(-t')g dt'||_2 <~ ||g||_{L^1_x L^2_yt}
        maximal,              // ||W(t)f||_{L^2_x L^inf_yT} <~ ||f||_{H^s}, s>1, T<1
        weighted_commutator,  // residual of the |x|^r / propagator commutation
        weighted_decay,       // t^{-|alpha|/2} e^{3 a^3 t} decay of the weighted flow
        genericity,           // Diophantine margin of probe irrationals
    };
    Kind kind = Kind::kato_forward;
    double gamma = 0.4;              // strichartz
    double beta = 0.6;               // strichartz
    double s = 1.25;                 // maximal / commutator H^s normalization
    double r = 0.5;                  // commutator weight exponent
    int axis = 0;                    // commutator axis: 0 = x, 1 = y1, 2 = y2
    double a = 1.0;                  // weighted decay rate
    std::array<int, 3> alpha{1, 0, 0};  // weighted decay derivative

    std::string name() const;
    void validate() const;  // enforces the stated parameter ranges
};

// Reproducible family of test fields.
struct Ensemble {
    enum class Generator { band_limited, decaying_envelope, probe_set };
    int count = 20;
    Generator generator = Generator::band_limited;
    std::uint64_t seed = 1234;
    int band = 0;                // max |mode| per axis; 0 = n/4 of the target grid
    double envelope_width = 6.0; // gaussian width of the decaying envelope
};

RealField ensemble_member(const Ensemble& ens, int index, const Grid3& grid);

struct AuditReport {
    std::string estimate;
    std::vector<double> ratios;   // per ensemble member, base grid
    double sup_ratio = 0.0;
    double refined_sup = 0.0;     // sup ratio on the doubled grid (or doubled K)
    double growth = 0.0;          // refined_sup / sup_ratio
    double growth_bound = 2.0;
    bool pass = false;
    std::vector<std::string> notes;
};

struct AuditOptions {
    int time_samples = 65;
    bool refine = true;        // re-run on the doubled grid for the trend
    double growth_bound = 2.0;
    bool symmetric_time = false;  // set internally for the Kato estimates
};

AuditReport run_audit(const EstimateId& id, const Ensemble& ens, const Grid3& grid, double T,
                      const AuditOptions& opts = {});

// Ratio of one estimate for one field (kato_forward, maximal or strichartz);
// the quantity run_audit aggregates over an ensemble.
double estimate_ratio(const EstimateId& id, const RealField& f, double T, int time_samples = 33);

// || |x_axis|^r W(t)u0 - W(t)(|x_axis|^r u0) ||_2 / ((1+|t|) ||u0||_{H^s})
double weighted_commutator_residual(const RealField& u0, double r, int axis, double t, double s);

struct DecayScaling {
    double slope = 0.0;                 // least-squares slope in log-log
    std::vector<double> t_samples;
    std::vector<double> values;         // N(t) e^{-3 a^3 t}
};

// N(t) = || d^alpha e^{a(x+y1+y2)} W(t) phi ||_2 evolved with the conjugated
// propagator; returns the fitted slope of log(N e^{-3a^3 t}) against log t.
DecayScaling weighted_decay_scaling(double a, const std::array<int, 3>& alpha,
                                    const std::vector<double>& t_samples, const Grid3& grid,
                                    const ProfileSpec& profile = {});

// C^1-failure detector: max over the axes of |d_d f(+delta e_d) - d_d f(-delta e_d)|,
// derivatives spectral, off-grid values by trigonometric interpolation.
double gradient_oscillation(const SpectralField& F, double delta);
double gradient_oscillation(const RealField& f, double delta);

struct SweepSource {
    enum class Kind { linear, nonlinear, duhamel };
    Kind kind = Kind::linear;
    double eps = 0.05;  // data amplitude for the nonlinear / duhamel sources
};

struct SweepRow {
    double t = 0.0;
    double score = 0.0;
    bool is_armed_rational = false;
    double coefficient = 0.0;  // of the armed term, when armed
};

struct SweepTable {
    std::vector<SweepRow> rows;
    SingularTimeSet armed;  // rationals of the datum present among the times
};

SweepTable blowup_sweep(const BlowupSpec& spec, const Grid3& grid,
                        const std::vector<double>& times, double delta,
                        const SweepSource& source, const SolverConfig& solver_cfg = {});

struct SmoothingGridResult {
    int n = 0;
    double g_lin = 0.0;  // ||J^{s_probe} W(t*) u0||_2
    double g_duh = 0.0;  // ||J^{s_probe} z_k(t*)||_2
};

struct SmoothingReport {
    double s_probe = 0.0;
    double t_eval = 0.5;
    std::vector<SmoothingGridResult> grids;
    std::vector<double> lin_growth;  // per consecutive grid pair
    std::vector<double> duh_growth;
    bool comparative = false;  // k = 1 mode: only duh_growth <= lin_growth is claimed
    double lin_growth_min = 1.25;
    double duh_growth_max = 1.15;
    bool smoothing = false;
};

// Runs the solver on each grid from profile data, splits off the Duhamel term
// at t_eval and compares spectral-tail growth under grid refinement.
SmoothingReport smoothing_report(const ProfileSpec& data, const SolverConfig& cfg, double s_probe,
                                 const std::vector<Grid3>& grids, double t_eval = 0.5);

}  // namespace gzk
