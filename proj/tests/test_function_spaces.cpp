#include "doctest.h"
#include "function_spaces.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace nslab;
using namespace nslab::testing;

namespace {

VectorField shear(const SpectralGrid& g, double amp) {
    return sample_vector(g, [&](const Vec3& x) { return Vec3{amp * std::sin(2 * kPi * x[2] / g.L), 0.0, 0.0}; });
}

// Direct physical quadrature of the L^2 norm.
double quadrature_l2(const VectorField& u) {
    const auto p = u.to_physical();
    const double h3 = std::pow(u.grid().spacing(), 3);
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (double v : p[i]) s += v * v;
    return std::sqrt(s * h3);
}

}  // namespace

TEST_CASE("Sobolev norms of a single mode") {
    SpectralGrid g{1.0, 16};
    const auto s = sample_grid(g, [](const Vec3& x) { return std::sin(2 * kPi * x[0]); });
    const auto f = ScalarField::from_physical(g, s);
    CHECK(std::abs(sobolev_norm(f, 0.0) - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(sobolev_norm(f, 1.0) - 1.0) < 1e-14);
    CHECK(std::abs(sobolev_norm(f, 1.0, true) - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(sobolev_norm(ScalarField(g), 3.0) == 0.0);
}

TEST_CASE("s = 0 norm equals the L^2 quadrature norm, including L != 1") {
    for (double L : {1.0, 2.5}) {
        SpectralGrid g{L, 16};
        const auto u = random_vector(g, 17, 5);
        CHECK(std::abs(sobolev_norm(u, 0.0) - quadrature_l2(u)) < 1e-12 * quadrature_l2(u));
    }
}

TEST_CASE("H^1 seminorm matches the gradient L^2 norm up to the 2 pi convention") {
    SpectralGrid g{1.7, 16};
    const auto f = random_scalar(g, 3, 5, true);
    const double grad = l2_norm(gradient(f));
    CHECK(std::abs(sobolev_norm(f, 1.0, true) * 2 * kPi - grad) < 1e-12 * grad);
}

TEST_CASE("homogeneous norm rejects a non-zero mean") {
    SpectralGrid g{1.0, 8};
    auto f = random_scalar(g, 1, 3);
    f.c[0] = 0.5;
    CHECK_THROWS_AS(sobolev_norm(f, 1.0, true), std::invalid_argument);
}

TEST_CASE("mixed norms: trapezoid, sup, single sample") {
    const std::vector<double> t{0.0, 0.5, 1.0};
    const std::vector<double> v{1.0, 2.0, 3.0};
    CHECK(mixed_norm(t, v, kInf) == 3.0);
    CHECK(std::abs(mixed_norm(t, v, 1.0) - 2.0) < 1e-15);
    // trapezoid of v^2: 0.25 (1 + 4) + 0.25 (4 + 9) = 4.5
    CHECK(std::abs(mixed_norm(t, v, 2.0) - std::sqrt(4.5)) < 1e-15);
    CHECK(mixed_norm(std::vector<double>{0.3}, std::vector<double>{5.0}, 2.0) == 0.0);
    CHECK(mixed_norm(std::vector<double>{0.3}, std::vector<double>{5.0}, kInf) == 5.0);
    CHECK_THROWS_AS(mixed_norm(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0}, 2.0), std::invalid_argument);
}

TEST_CASE("mixed norms are monotone in p on unit intervals (Hoelder)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> t(11), v(11);
        for (int i = 0; i < 11; ++i) {
            t[i] = i / 10.0;
            v[i] = U(rng);
        }
        const double n1 = mixed_norm(t, v, 1.0), n2 = mixed_norm(t, v, 2.0), ni = mixed_norm(t, v, kInf);
        CHECK(n1 <= n2 + 1e-14);
        CHECK(n2 <= ni + 1e-14);
    }
}

TEST_CASE("energy functional, enstrophy and data norm") {
    SpectralGrid g{1.0, 16};
    const auto u = shear(g, 1.0);
    CHECK(std::abs(enstrophy(u) - kPi * kPi) < 1e-12);
    const double e = energy_functional(u, ForcingSeries{}, 1.0);
    CHECK(std::abs(e - 0.25) < 1e-14);  // 1/2 (1/sqrt 2)^2
    // Constant forcing of L^2 norm a over [0, T] adds a T to the root.
    const auto f = shear(g, 2.0);
    const double ef = energy_functional(u, ForcingSeries::constant(f), 0.5);
    const double root = 1.0 / std::sqrt(2.0) + 0.5 * std::sqrt(2.0);
    CHECK(std::abs(ef - 0.5 * root * root) < 1e-13);
    CHECK(std::abs(h1_data_norm(u, ForcingSeries::constant(f), 0.5) - 3.0) < 1e-13);
}

TEST_CASE("xs norm of a sampled trajectory") {
    SpectralGrid g{1.0, 16};
    Trajectory tr;
    tr.grid = g;
    // u(t) = e^{-4 pi^2 t} sin(2 pi x3) e1 sampled finely; compare to closed form.
    const int n = 2001;
    const double T = 0.05, lam = 4 * kPi * kPi;
    for (int i = 0; i < n; ++i) {
        const double t = T * i / (n - 1);
        tr.times.push_back(t);
        tr.u.push_back(shear(g, std::exp(-lam * t)));
    }
    // H^1 norm of the unit shear is 1, H^2 norm is sqrt(2^2 / 2) = sqrt 2.
    const double sup = 1.0;
    const double l2 = std::sqrt(2.0 * (1 - std::exp(-2 * lam * T)) / (2 * lam));
    CHECK(std::abs(xs_norm(tr, 1.0) - (sup + l2)) < 1e-5);
    NormReport r{"xs1", xs_norm(tr, 1.0), {0.0, T}, {1.0, std::exp(-lam * T)}};
    CHECK(csv_header(r) == "name,value,t=0,t=0.050000000000000003");
    CHECK(csv_row(r).rfind("xs1,", 0) == 0);
}
