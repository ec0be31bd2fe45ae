#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gzk/grid.hpp"

namespace gzk {

// Radially symmetric cusp profile phi_b(x,y1,y2) = e^{-b sqrt(x^2+y1^2+y2^2)}.
// Smooth away from the origin, not C^1 at it; the default b = 2 sits just
// below the H^{5/2} regularity threshold.
struct ProfileSpec {
    double b = 2.0;
};

enum class CoefficientRule { double_exp, custom };

// Truncation and coefficients of the dispersive blow-up datum
//   u0 = sum over coprime (j,k) of c_{jk} W(-j/k) phi,
// default rule c_{jk} = e^{-e^k} e^{-j^2}.
struct BlowupSpec {
    int j_max = 3;
    int k_max = 2;
    ProfileSpec profile{};
    CoefficientRule rule = CoefficientRule::double_exp;
    // custom rule: c_{jk} = custom_base^{-(j+k)}; detectable spikes at larger (j,k)
    double custom_base = 2.0;
};

// One armed rational time j/k with its coefficient.
struct SingularTime {
    int j = 0;
    int k = 1;
    double coefficient = 0.0;
    double t() const { return double(j) / double(k); }
};
using SingularTimeSet = std::vector<SingularTime>;

// Finite search for near-resonances |k1 + k2*gamma|: small margin values mean
// gamma is well approximated by rationals.
struct GenericityProbe {
    double gamma = 0.0;
    long long K = 10000;
};

struct ProfileSample {
    RealField field;
    double boundary_magnitude = 0.0;  // max |phi| on the box faces
    bool boundary_warning = false;    // set when boundary_magnitude > 1e-10
};

ProfileSample sample_profile(const ProfileSpec& spec, const Grid3& grid);

// closed forms of the continuum profile, used as oracles and calibrations
double profile_l2_squared(const ProfileSpec& spec);            // pi / b^3
double profile_transform(const ProfileSpec& spec, double k);   // 8 pi b / (b^2+k^2)^2

// All (j,k) with 1 <= j <= j_max, 1 <= k <= k_max, gcd(j,k) = 1, ordered by k
// then j (the double-sum order of the datum).
std::vector<std::pair<int, int>> coprime_pairs(int j_max, int k_max);

// c_{jk} = e^{-e^k} e^{-j^2}. Returns nullopt when the value underflows to
// zero at double precision (k >= 5), in which case the term is dropped.
std::optional<double> coefficient(int j, int k);

double coefficient_for(const BlowupSpec& spec, int j, int k);

struct BlowupData {
    SpectralField u0_hat;      // spectral datum (sum of back-propagated profiles)
    RealField u0;              // physical samples
    SingularTimeSet armed;     // retained rationals with their coefficients
    bool boundary_warning = false;
    std::vector<std::pair<int, int>> dropped;  // underflowed terms
};

BlowupData build_u0(const BlowupSpec& spec, const Grid3& grid);

// min over 0 < |k1|+|k2| <= K, |k2| >= 1 of
//   |k1 + k2 gamma| * (|k1|+|k2|) * ln(|k1|+|k2|+1).
// Positive and K-stable for generic irrationals; hits 0 for rationals.
double genericity_margin(const GenericityProbe& probe);

}  // namespace gzk
