#include "gzk/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gzk/multipliers.hpp"

namespace gzk {

ProfileSample sample_profile(const ProfileSpec& spec, const Grid3& grid) {
    if (!(spec.b > 0.0)) throw std::invalid_argument("profile: b must be positive");
    ProfileSample out;
    out.field = RealField(grid);
    for (int ix = 0; ix < grid.nx; ++ix) {
        const double x = grid.x(ix);
        for (int iy = 0; iy < grid.ny1; ++iy) {
            const double y1 = grid.y1(iy);
            for (int iz = 0; iz < grid.ny2; ++iz) {
                const double y2 = grid.y2(iz);
                const double r = std::sqrt(x * x + y1 * y1 + y2 * y2);
                out.field.v[grid.idx(ix, iy, iz)] = std::exp(-spec.b * r);
            }
        }
    }
    // face value: nearest face is at distance L/2 from the center
    out.boundary_magnitude = std::exp(-spec.b * 0.5 * grid.box_len);
    out.boundary_warning = out.boundary_magnitude > 1e-10;
    return out;
}

double profile_l2_squared(const ProfileSpec& spec) {
    const double pi = 3.14159265358979323846;
    return pi / (spec.b * spec.b * spec.b);
}

double profile_transform(const ProfileSpec& spec, double k) {
    const double pi = 3.14159265358979323846;
    const double b = spec.b;
    const double d = b * b + k * k;
    return 8.0 * pi * b / (d * d);
}

std::vector<std::pair<int, int>> coprime_pairs(int j_max, int k_max) {
    if (j_max < 1 || k_max < 1) throw std::invalid_argument("coprime_pairs: bounds must be >= 1");
    std::vector<std::pair<int, int>> out;
    for (int k = 1; k <= k_max; ++k)
        for (int j = 1; j <= j_max; ++j)
            if (std::gcd(j, k) == 1) out.emplace_back(j, k);
    return out;
}

std::optional<double> coefficient(int j, int k) {
    // evaluated in the log domain; e^{-e^k} leaves the normal range once
    // e^k + j^2 exceeds ~708 (k >= 7, or k = 6 with j >= 18)
    const double log_c = -std::exp(double(k)) - double(j) * double(j);
    const double c = std::exp(log_c);
    if (c < std::numeric_limits<double>::min()) return std::nullopt;  // subnormal or zero
    return c;
}

double coefficient_for(const BlowupSpec& spec, int j, int k) {
    if (spec.rule == CoefficientRule::double_exp) {
        auto c = coefficient(j, k);
        return c ? *c : 0.0;
    }
    return std::pow(spec.custom_base, -(double(j) + double(k)));
}

BlowupData build_u0(const BlowupSpec& spec, const Grid3& grid) {
    BlowupData data;
    ProfileSample prof = sample_profile(spec.profile, grid);
    data.boundary_warning = prof.boundary_warning;

    SpectralField phi_hat = forward_transform(prof.field);
    SpectralField acc(grid);
    for (auto [j, k] : coprime_pairs(spec.j_max, spec.k_max)) {
        double c = 0.0;
        if (spec.rule == CoefficientRule::double_exp) {
            auto copt = coefficient(j, k);
            if (!copt) {
                data.dropped.emplace_back(j, k);
                continue;
            }
            c = *copt;
        } else {
            c = coefficient_for(spec, j, k);
        }
        SpectralField term = apply_propagator(phi_hat, -double(j) / double(k));
        for (std::size_t i = 0; i < acc.c.size(); ++i) acc.c[i] += c * term.c[i];
        data.armed.push_back(SingularTime{j, k, c});
    }
    std::sort(data.armed.begin(), data.armed.end(),
              [](const SingularTime& a, const SingularTime& b) { return a.t() < b.t(); });
    data.u0_hat = std::move(acc);
    data.u0 = inverse_transform(data.u0_hat);
    return data;
}

double genericity_margin(const GenericityProbe& probe) {
    if (probe.K < 2) throw std::invalid_argument("genericity_margin: K must be >= 2");
    if (!std::isfinite(probe.gamma))
        throw std::invalid_argument("genericity_margin: gamma must be finite");
    double best = std::numeric_limits<double>::infinity();
    // for fixed k2 the weighted residual is a down-opening parabola (times a
    // slowly varying log) in k1 between the residual minimum near -k2*gamma
    // and the weight minimum near 0, so only integers near those two ends can
    // attain the minimum
    for (long long k2 = 1; k2 < probe.K; ++k2) {
        const long long base = llround(-double(k2) * probe.gamma);
        const long long cands[10] = {base - 2, base - 1, base,  base + 1, base + 2,
                                     -2,       -1,       0,     1,        2};
        for (long long k1 : cands) {
            const long long h = std::llabs(k1) + k2;
            if (h == 0 || h > probe.K) continue;
            const double v =
                std::abs(double(k1) + double(k2) * probe.gamma) * double(h) * std::log(double(h) + 1.0);
            best = std::min(best, v);
        }
    }
    return best;
}

}  // namespace gzk
