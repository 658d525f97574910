#include "doctest.h"
#include "counterexample.hpp"
#include "function_spaces.hpp"
#include "test_util.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

using namespace nslab;
using namespace nslab::testing;

namespace {

// Symmetric image sum of the closed-form far-field kernel on a periodic box.
double lattice_kernel(int i, int j, int c, const Vec3& x, double L, int M) {
    double s = 0.0;
    for (int a = -M; a <= M; ++a)
        for (int b = -M; b <= M; ++b)
            for (int d = -M; d <= M; ++d) s += point_mass_kernel(i, j, c, Vec3{x[0] + L * a, x[1] + L * b, x[2] + L * d});
    return s;
}

double l2_squared_laplacian(const VectorField& u) {
    const double n = l2_norm(laplacian(u));
    return n * n;
}

}  // namespace

TEST_CASE("test function has unit mass") {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double moment = ts.integrate([](double s) { return bump(s) * s * s; }, 0.0, 1.0);
    for (double radius : {0.5, 1.0, 2.0}) {
        const RadialTestFunction psi{radius, 2};
        CHECK(std::abs(4 * kPi * radius * radius * radius * moment * psi.normalisation() - 1) < 1e-10);
    }
    const RadialTestFunction psi{0.5, 2};
    CHECK(psi(Vec3{0.5, 0.0, 0.0}) == 0.0);
    CHECK(psi(Vec3{0.3, 0.2, 0.1}) > 0.0);
}

TEST_CASE("pairing kernel matches the image sum of the point-mass kernel") {
    for (double radius : {0.5, 1.0}) {
        const RadialTestFunction psi{radius, 2};
        const auto k = PairingKernel::compute(psi, SpectralGrid{16.0, 128});
        double err = 0.0, scale = 0.0;
        for (const Vec3& x : {Vec3{3, 0, 0}, Vec3{0, 3, 0}, Vec3{0, 0, 3}, Vec3{1.5, -2, 1}, Vec3{-2, 2, 2},
                              Vec3{4, 1, -3}}) {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double o = lattice_kernel(i, j, 2, x, 16.0, 8);
                    err = std::max(err, std::abs(k.at(i, j, x) - o));
                    scale = std::max(scale, std::abs(o));
                }
        }
        CHECK(err < 1e-5 * scale);
    }
}

TEST_CASE("point-mass kernel is symmetric and matches finite differences of the potential") {
    const Vec3 x{1.3, -0.7, 2.1};
    const double h = 1e-3;
    const auto G = [](const Vec3& y) {
        return -1 / (4 * kPi * std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]));
    };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(point_mass_kernel(i, j, 2, x) == doctest::Approx(point_mass_kernel(j, i, 2, x)).epsilon(1e-14));
            CHECK(point_mass_kernel(i, j, 2, x) == doctest::Approx(point_mass_kernel(i, 2, j, x)).epsilon(1e-14));
            auto shift = [&](Vec3 y, int a, double t) {
                y[a] += t;
                return y;
            };
            auto dij = [&](const Vec3& y) {
                return (G(shift(shift(y, i, h), j, h)) - G(shift(shift(y, i, h), j, -h)) -
                        G(shift(shift(y, i, -h), j, h)) + G(shift(shift(y, i, -h), j, -h))) /
                       (4 * h * h);
            };
            const double fd = (dij(shift(x, 2, h)) - dij(shift(x, 2, -h))) / (2 * h);
            CHECK(std::abs(fd - point_mass_kernel(i, j, 2, x)) < 1e-5);
        }
}

TEST_CASE("wave packet is divergence-free and its exterior ringing shrinks with resolution") {
    WavePacketSpec s;
    for (int n : {2, 8}) {
        s.n = n;
        std::vector<double> ratio;
        for (int N : {64, 128}) {
            const SpectralGrid g{4.0, N};
            const auto u = wave_packet(s, g);
            CHECK(l2_norm(divergence(u)) < 1e-12 * l2_norm(u));
            const auto p = u.to_physical();
            const double h = g.spacing();
            double inside = 0.0, outside = 0.0;
            for (int i3 = 0; i3 < N; ++i3)
                for (int i2 = 0; i2 < N; ++i2)
                    for (int i1 = 0; i1 < N; ++i1) {
                        const double y1 = i1 * h - 2, y2 = i2 * h - 2, y3 = i3 * h - 2;
                        const std::size_t id = (std::size_t(i3) * N + i2) * N + i1;
                        const double v = std::abs(p[0][id]) + std::abs(p[1][id]) + std::abs(p[2][id]);
                        double& slot = y1 * y1 + y2 * y2 + y3 * y3 < 1 ? inside : outside;
                        slot = std::max(slot, v);
                    }
            ratio.push_back(outside / inside);
        }
        CHECK(ratio[1] < ratio[0] / 4);
        CHECK(ratio[1] < 1e-3);
    }
}

TEST_CASE("packet preconditions") {
    WavePacketSpec s;
    s.eta_dir = s.xi;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_THROWS_AS(wave_packet(s, SpectralGrid{4.0, 64}), std::invalid_argument);
    s = WavePacketSpec{};
    s.n = 32;
    CHECK_THROWS_AS(wave_packet(s, SpectralGrid{4.0, 128}), std::invalid_argument);
    s.n = 8;
    CHECK_THROWS_AS(wave_packet(s, SpectralGrid{3.0, 96}), std::invalid_argument);
    CHECK_NOTHROW(wave_packet(s, SpectralGrid{4.0, 64}));
    CHECK_THROWS_AS(PairingKernel::compute(RadialTestFunction{1.0, 2}, SpectralGrid{8.0, 32}), std::invalid_argument);
    CHECK_THROWS_AS(PairingKernel::compute(RadialTestFunction{0.5, 3}, SpectralGrid{8.0, 32}), std::invalid_argument);
}

TEST_CASE("norm asymptotics and leading amplitude") {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double chi2 = 4 * kPi * ts.integrate([](double s) { return bump(s) * bump(s) * s * s; }, 0.0, 1.0);
    WavePacketSpec s;
    const double xi = std::sqrt(s.xi[0] * s.xi[0] + s.xi[1] * s.xi[1] + s.xi[2] * s.xi[2]);
    const double w = xi;  // |xi x eta| with eta a unit vector orthogonal to xi
    // Norm weights carry |k / L| without 2 pi.
    const double c1 = xi * w * std::sqrt(chi2 / 2) / (2 * kPi);
    const double c2 = xi * xi * w * std::sqrt(chi2 / 2) / (4 * kPi * kPi);
    const SpectralGrid g{4.0, 192};
    std::vector<double> h1, h2, rem;
    for (int n : {16, 32}) {
        s.n = n;
        const auto u = wave_packet(s, g);
        h1.push_back(sobolev_norm(u, 1.0));
        h2.push_back(sobolev_norm(u, 2.0));
        rem.push_back(leading_remainder(s, g, u));
        CHECK(h1.back() * std::sqrt(double(n)) == doctest::Approx(c1).epsilon(0.05));
        CHECK(h2.back() / std::sqrt(double(n)) == doctest::Approx(c2).epsilon(0.05));
    }
    CHECK(std::abs(h1[1] / h1[0] / std::sqrt(0.5) - 1) < 0.15);
    CHECK(std::abs(h2[1] / h2[0] / std::sqrt(2.0) - 1) < 0.15);
    CHECK(std::abs(rem[1] / rem[0] / std::pow(2.0, -2.5) - 1) < 0.15);
}

TEST_CASE("pairing of the zero field vanishes and overflow is rejected") {
    const auto k = PairingKernel::compute(RadialTestFunction{0.5, 2}, SpectralGrid{16.0, 64});
    const SpectralGrid g{4.0, 32};
    CHECK(x0_pairing(VectorField(g), Vec3{0.0, 0.0, 3.0}, k, 1.0) == 0.0);
    CHECK_THROWS_AS(x0_pairing(VectorField(g), Vec3{0.0, 0.0, 6.0}, k, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(x0_pairing(VectorField(g), Vec3{0.0, 0.0, 0.8}, k, 1.0), std::invalid_argument);
}

TEST_CASE("pairing matches direct quadrature against the closed-form kernel") {
    WavePacketSpec s;
    s.n = 2;
    const SpectralGrid g{4.0, 48};
    const auto u = wave_packet(s, g);
    const Vec3 x0{0.4, 0.0, 3.0};
    const auto lap = laplacian(u).to_physical();
    const double h = g.spacing();
    double direct = 0.0;
    for (int i3 = 0; i3 < g.N; ++i3)
        for (int i2 = 0; i2 < g.N; ++i2)
            for (int i1 = 0; i1 < g.N; ++i1) {
                const std::size_t id = (std::size_t(i3) * g.N + i2) * g.N + i1;
                const Vec3 y{x0[0] + i1 * h - 2, x0[1] + i2 * h - 2, x0[2] + i3 * h - 2};
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        direct += lattice_kernel(i, j, 2, y, 16.0, 1) * lap[i][id] * lap[j][id];
            }
    direct *= h * h * h;
    const double spectral = x0_pairing(u, x0, RadialTestFunction{0.5, 2}, SpectralGrid{16.0, 128}, 1.0);
    CHECK(spectral == doctest::Approx(direct).epsilon(2e-3));
}

TEST_CASE("far separated low mode: monotone decay below the pairing threshold") {
    const auto k = PairingKernel::compute(RadialTestFunction{0.5, 2}, SpectralGrid{64.0, 128});
    WavePacketSpec s;
    s.n = 1;
    const auto u = wave_packet(s, SpectralGrid{4.0, 48});
    const double lap2 = l2_squared_laplacian(u);
    const Vec3 dir{0.48, 0.6, 0.64};
    std::vector<double> vals;
    for (double d : {7.0, 14.0, 28.0})
        vals.push_back(std::abs(x0_pairing(u, Vec3{d * dir[0], d * dir[1], d * dir[2]}, k, 1.0)));
    CHECK(vals[1] < vals[0] / 8);
    CHECK(vals[2] < vals[1] / 8);
    CHECK(vals[2] <= 1e-6 * lap2);
}

TEST_CASE("x0 search finds the maximising direction of the closed form") {
    const auto k = PairingKernel::compute(RadialTestFunction{0.5, 2}, SpectralGrid{16.0, 128});
    const Vec3 w = WavePacketSpec{}.polarisation();
    const Vec3 x = search_x0(k, w, 3.0);
    CHECK(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) == doctest::Approx(3.0).epsilon(1e-12));
    double closed = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) closed += point_mass_kernel(i, j, 2, x) * w[i] * w[j];
    CHECK(k.contract(w, x) == doctest::Approx(closed).epsilon(1e-4));
    // No other search direction beats it in the closed form either.
    for (int a = 0; a < 12; ++a)
        for (int b = 0; b < 24; ++b) {
            const double th = kPi * (a + 0.5) / 12, ph = 2 * kPi * b / 24;
            const Vec3 y{3 * std::sin(th) * std::cos(ph), 3 * std::sin(th) * std::sin(ph), 3 * std::cos(th)};
            double v = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) v += point_mass_kernel(i, j, 2, y) * w[i] * w[j];
            CHECK(std::abs(v) <= std::abs(closed) * (1 + 1e-3));
        }
}

TEST_CASE("log-log slope of exact power laws") {
    CHECK(loglog_slope({8, 16, 32}, {3.0 * 8, 3.0 * 16, 3.0 * 32}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(loglog_slope({1, 2, 5, 9}, {1, 0.25, 0.04, 1.0 / 81}) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK_THROWS_AS(loglog_slope({1}, {1}), std::invalid_argument);
}
