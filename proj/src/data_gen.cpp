#include "data_gen.hpp"

#include "counterexample.hpp"
#include "function_spaces.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void scale_to(VectorField& u, double l2) {
    const double n = l2_norm(u);
    if (n == 0.0) throw std::invalid_argument("generated field vanishes identically");
    u *= l2 / n;
}

void finish(VectorField& u, const Vec3& mean) {
    u = leray_project(u);
    for (int i = 0; i < 3; ++i) {
        zero_nyquist(u.comp[i]);
        u.comp[i].c[0] = mean[i];
    }
}

}  // namespace

const std::vector<std::string>& data_kinds() {
    static const std::vector<std::string> k{"shear", "taylor-green", "random-band", "wave-packet", "composite"};
    return k;
}

VectorField random_band(const SpectralGrid& g, std::uint64_t seed, int kmin, int kmax, double slope, double l2) {
    if (kmin < 1 || kmax < kmin) throw std::invalid_argument("random band needs 1 <= kmin <= kmax");
    if (double(kmax) > g.dealias * g.N / 2) throw std::invalid_argument("random band exceeds the dealiased range");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    VectorField u(g);
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double) {
        const double k = std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3));
        cplx z[3];
        for (auto& v : z) v = cplx(nd(rng), nd(rng));
        if (k < kmin || k > kmax || is_nyquist(g, k1, k2, k3)) return;
        const double a = std::pow(k, (slope - 2) / 2);
        for (int i = 0; i < 3; ++i) u.comp[i].c[idx] = a * z[i];
    });
    // The k1 = 0 plane must be Hermitian; a physical round trip enforces it.
    u = VectorField::from_physical(g, u.to_physical());
    finish(u, {});
    scale_to(u, l2);
    return u;
}

VectorField torus_packet(const SpectralGrid& g, const Vec3& centre, double radius, int n, double l2) {
    if (!(radius > 0) || radius > g.L / 4) throw std::invalid_argument("packet radius must lie in (0, L/4]");
    if (n < 1) throw std::invalid_argument("packet frequency must be positive");
    if (4 * n > g.N) throw std::invalid_argument("packet frequency is not resolved (4 points per wavelength)");
    const auto psi = sample_vector(g, [&](const Vec3& x) {
        double r2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            double d = x[i] - centre[i];
            d -= g.L * std::round(d / g.L);
            r2 += d * d;
        }
        return Vec3{0.0, bump(std::sqrt(r2) / radius) * std::sin(2 * kPi * n * x[0] / g.L), 0.0};
    });
    auto u = curl(psi);
    finish(u, {});
    scale_to(u, l2);
    return u;
}

DataTriple generate_data(const DataSpec& spec, const SpectralGrid& g) {
    g.validate();
    if (!(spec.T > 0)) throw std::invalid_argument("time horizon must be positive");
    DataTriple d;
    d.T = spec.T;
    if (spec.kind == "shear") {
        d.u0 = sample_vector(g, [&](const Vec3& x) { return Vec3{spec.amplitude * std::sin(2 * kPi * x[2] / g.L), 0.0, 0.0}; });
    } else if (spec.kind == "taylor-green") {
        d.u0 = sample_vector(g, [&](const Vec3& x) {
            const double a = 2 * kPi * x[0] / g.L, b = 2 * kPi * x[1] / g.L;
            return Vec3{spec.amplitude * std::sin(a) * std::cos(b), -spec.amplitude * std::cos(a) * std::sin(b), 0.0};
        });
    } else if (spec.kind == "random-band") {
        d.u0 = random_band(g, spec.seed, spec.kmin, spec.kmax, spec.slope, spec.amplitude);
    } else if (spec.kind == "wave-packet") {
        d.u0 = torus_packet(g, spec.packet_centre, spec.packet_radius, spec.packet_n, spec.packet_amplitude);
    } else if (spec.kind == "composite") {
        d.u0 = random_band(g, spec.seed, spec.kmin, spec.kmax, spec.slope, spec.amplitude);
        d.u0 += torus_packet(g, spec.packet_centre, spec.packet_radius, spec.packet_n, spec.packet_amplitude);
    } else {
        throw std::invalid_argument("unknown data kind '" + spec.kind + "'");
    }
    finish(d.u0, spec.mean);
    if (spec.forcing > 0) {
        const auto f = random_band(g, spec.seed ^ 0x9e3779b97f4a7c15ULL, spec.kmin, spec.kmax, spec.slope, spec.forcing);
        d.f = ForcingSeries::constant(f);
    }
    return d;
}

}  // namespace nslab
