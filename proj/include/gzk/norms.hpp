#pragma once

#include <array>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gzk/grid.hpp"
#include "gzk/trajectory.hpp"

namespace gzk {

enum class SobolevVariant { j, d, jx, dx, jy, dy1, dy2 };

struct SobolevSpec {
    double s = 0.0;
    SobolevVariant variant = SobolevVariant::j;
};

enum class WeightBracket { homogeneous, japanese };

// Exponents of the spatial weights |x|^{r1}, |y|^{r2} (or their <.> variants).
struct WeightSpec {
    double r1 = 0.5;
    double r2 = 0.5;
    WeightBracket bracket = WeightBracket::homogeneous;
};

// Axis sets for mixed norms, combinable: axis_x | axis_t etc.
inline constexpr unsigned axis_x = 1u;
inline constexpr unsigned axis_y1 = 2u;
inline constexpr unsigned axis_y2 = 4u;
inline constexpr unsigned axis_t = 8u;
inline constexpr unsigned axis_y = axis_y1 | axis_y2;
inline constexpr unsigned axis_all = axis_x | axis_y | axis_t;

inline constexpr double inf_exponent = std::numeric_limits<double>::infinity();

// Nested space-time norm: factors listed outermost first, each a variable
// group with an exponent in [1, inf]; the groups must partition {x,y1,y2,t}.
struct MixedNormSpec {
    struct Factor {
        unsigned axes = 0;
        double p = 2.0;
    };
    std::vector<Factor> factors;

    static MixedNormSpec of(std::initializer_list<Factor> fs) { return MixedNormSpec{fs}; }
};

// quadrature L^p norm; p = inf gives the grid max
double lebesgue_norm(const RealField& f, double p);

// Parseval-side norm with the variant's symbol. The homogeneous variants with
// s < 0 drop singular modes; *singular_zeroed reports that.
double sobolev_norm(const RealField& f, const SobolevSpec& spec, bool* singular_zeroed = nullptr);
double sobolev_norm(const SpectralField& F, const SobolevSpec& spec, bool* singular_zeroed = nullptr);

// || f ||_{H^s} + || |x|^{r1} f ||_2 + || |y|^{r2} f ||_2, centered coordinates,
// no periodic wrap of the weight.
double weighted_z_norm(const RealField& f, double s, const WeightSpec& w);

// pointwise weight field used by weighted_z_norm and the work-space norm
RealField spatial_weight(const Grid3& g, double r, unsigned axes, WeightBracket bracket);

// || d^alpha ( e^{a(x+y1+y2)} f ) ||_2: physical-space weighting followed by
// spectral differentiation. Throws when the weight overflows on the box, or
// when decay_rate_hint is supplied and fails a*sqrt(3) < decay_rate_hint.
double exp_weighted_sobolev(const RealField& f, double a, const std::array<int, 3>& alpha,
                            double decay_rate_hint = 0.0);

// nested quadrature over a trajectory in the declared factor order; time by
// trapezoid, spatial integrals by the periodic rectangle rule, inf by max
double mixed_norm(const Trajectory& traj, const MixedNormSpec& spec);

// Work-space norm: every term of the local-theory norm (s in (2,3)), plus an
// extra weighted sup-in-time diagnostic that is reported but kept out of the
// total.
struct XTNormReport {
    std::vector<std::pair<std::string, double>> terms;
    double total = 0.0;
    double diagnostic_weighted_sup = 0.0;  // ||<x>^{3/2+} u||_{L^inf_T L^2}
};

XTNormReport xt_norm(const Trajectory& traj, double s, double r1, double r2);

struct ShellSpectrum {
    std::vector<double> radii;     // shell centers, width 2 pi / L
    std::vector<double> energies;  // sum of |coeff|^2 per shell
};

ShellSpectrum shell_spectrum(const RealField& f);
ShellSpectrum shell_spectrum(const SpectralField& F);

// least-squares slope of log E vs log kappa over shells inside [lo, hi];
// needs >= 8 populated shells and hi within the resolved band
double tail_exponent(const ShellSpectrum& spec, double lo, double hi, const Grid3& grid);
double tail_exponent(const RealField& f, double lo, double hi);

}  // namespace gzk
