#include "trajectory.hpp"

#include <algorithm>

namespace nslab {

VectorField ForcingSeries::at(double t, const SpectralGrid& g) const {
    if (samples.empty()) return VectorField(g);
    if (samples.size() == 1 || t <= times.front()) return samples.front();
    if (t >= times.back()) return samples.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t j = std::size_t(it - times.begin());
    const double t0 = times[j - 1], t1 = times[j];
    const double w = (t - t0) / (t1 - t0);
    VectorField out = samples[j - 1];
    out *= (1.0 - w);
    out.axpy(w, samples[j]);
    return out;
}

ForcingSeries ForcingSeries::constant(const VectorField& f) {
    ForcingSeries s;
    s.times = {0.0};
    s.samples = {f};
    return s;
}

}  // namespace nslab
