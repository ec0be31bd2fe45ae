#pragma once

#include <vector>

#include "gzk/grid.hpp"

namespace gzk {

enum class Provenance { nonlinear, linear, duhamel };

// Time-ordered snapshots of one evolving field on a fixed grid, uniformly
// spaced in time.
struct Trajectory {
    Grid3 grid;
    std::vector<double> times;
    std::vector<RealField> snapshots;
    Provenance provenance = Provenance::linear;

    std::size_t count() const { return times.size(); }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

}  // namespace gzk
