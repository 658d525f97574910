// Named initial-data and forcing generators.
#pragma once

#include "trajectory.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nslab {

struct DataSpec {
    std::string kind = "shear";  // shear, taylor-green, random-band, wave-packet, composite
    std::uint64_t seed = 0;
    double T = 1.0;
    double amplitude = 1.0;      // shear / Taylor-Green amplitude, L^2 norm otherwise
    double slope = -2.0;         // random-band shell spectrum |k|^slope
    int kmin = 1;
    int kmax = 4;
    Vec3 mean{};                 // constant added after the mean is removed
    double forcing = 0.0;        // L^2 norm of a steady random-band forcing
    int packet_n = 2;
    double packet_radius = 0.15;
    double packet_amplitude = 1.0;
    Vec3 packet_centre{0.5, 0.5, 0.5};
};

const std::vector<std::string>& data_kinds();

// Divergence-free, mean `spec.mean`, reproducible from the seed.  Unknown kinds
// and grids that cannot hold the requested band throw std::invalid_argument.
DataTriple generate_data(const DataSpec& spec, const SpectralGrid& g);

// Leray-projected random coefficients on kmin <= |k| <= kmax with shell
// spectrum |k|^slope, scaled to the given L^2 norm.
VectorField random_band(const SpectralGrid& g, std::uint64_t seed, int kmin, int kmax, double slope, double l2);

// Curl of chi(|x - c| / radius) sin(2 pi n x1 / L) e2 with periodic distance,
// scaled to the given L^2 norm.
VectorField torus_packet(const SpectralGrid& g, const Vec3& centre, double radius, int n, double l2);

}  // namespace nslab
