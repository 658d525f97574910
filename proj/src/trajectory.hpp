// Data triples, forcing series and sampled solution trajectories.
#pragma once

#include "spectral_core.hpp"

#include <vector>

namespace nslab {

// Forcing sampled at increasing times; linear interpolation in between and
// clamped outside.  An empty series is the zero forcing, a single sample is
// constant in time.
struct ForcingSeries {
    std::vector<double> times;
    std::vector<VectorField> samples;

    bool empty() const { return samples.empty(); }
    VectorField at(double t, const SpectralGrid& g) const;
    static ForcingSeries constant(const VectorField& f);
};

struct DataTriple {
    VectorField u0;
    ForcingSeries f;
    double T = 1.0;
};

struct Trajectory {
    SpectralGrid grid;
    double eps = 0.0;
    std::vector<double> times;
    std::vector<VectorField> u;
    std::vector<ScalarField> p;
    // Gradient of a pressure part linear in x, which a periodic field cannot carry.
    std::vector<Vec3> p_linear;
    ForcingSeries f;

    std::size_t size() const { return times.size(); }
    double final_time() const { return times.empty() ? 0.0 : times.back(); }
};

}  // namespace nslab
