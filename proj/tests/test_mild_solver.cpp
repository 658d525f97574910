#include "doctest.h"
#include "function_spaces.hpp"
#include "mild_solver.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace nslab;
using namespace nslab::testing;

namespace {

VectorField shear(const SpectralGrid& g, double amp) {
    return sample_vector(g, [&](const Vec3& x) { return Vec3{amp * std::sin(2 * kPi * x[2] / g.L), 0.0, 0.0}; });
}

VectorField taylor_green(const SpectralGrid& g, double a) {
    return sample_vector(g, [&](const Vec3& x) {
        const double s1 = std::sin(2 * kPi * x[0]), c1 = std::cos(2 * kPi * x[0]);
        const double s2 = std::sin(2 * kPi * x[1]), c2 = std::cos(2 * kPi * x[1]);
        return Vec3{a * s1 * c2, -a * c1 * s2, 0.0};
    });
}

VectorField small_random(const SpectralGrid& g, std::uint64_t seed, int kmax, double h1) {
    auto u = leray_project(random_vector(g, seed, kmax, true));
    u *= h1 / sobolev_norm(u, 1.0);
    return u;
}

double max_err(const VectorField& a, const VectorField& b) {
    const auto pa = a.to_physical(), pb = b.to_physical();
    double m = 0.0;
    for (int i = 0; i < 3; ++i) m = std::max(m, max_abs_diff(pa[i], pb[i]));
    return m;
}

}  // namespace

TEST_CASE("bilinear form: symmetry, vanishing on shear, energy neutrality") {
    SpectralGrid g{1.0, 24};
    const auto s = shear(g, 1.3);
    CHECK(coeff_diff(bilinear(s, s), VectorField(g)) < 1e-13);
    const auto u = small_random(g, 1, 5, 1.0), v = small_random(g, 2, 5, 1.0);
    CHECK(coeff_diff(bilinear(u, v), bilinear(v, u)) < 1e-14);
    // <B(u,u), u> = 0 for divergence-free u inside the dealiased band.
    const auto b = bilinear(u, u);
    double dot = 0.0, scale = 0.0;
    for_each_mode(g, [&](std::size_t idx, int, int, int, double w) {
        for (int i = 0; i < 3; ++i) {
            dot += w * (b.comp[i].c[idx] * std::conj(u.comp[i].c[idx])).real();
            scale += w * std::norm(b.comp[i].c[idx]);
        }
    });
    CHECK(std::abs(dot) < 1e-13 * std::sqrt(scale));
}

TEST_CASE("pressure: Taylor-Green closed form and Poisson identity") {
    SpectralGrid g{1.0, 32};
    const double a = 0.7;
    const auto p = pressure(taylor_green(g, a), VectorField(g)).to_physical();
    const auto ex = sample_grid(g, [&](const Vec3& x) {
        return a * a / 4 * (std::cos(4 * kPi * x[0]) + std::cos(4 * kPi * x[1]));
    });
    CHECK(max_abs_diff(p, ex) < 1e-13);
    // Independent route: -Delta p = div(advection) - div f.
    const auto u = small_random(g, 7, 6, 2.0);
    const auto f = random_vector(g, 8, 4);
    const auto lhs = laplacian(pressure(u, f));
    auto rhs = divergence(advection(u));
    rhs -= divergence(f);
    rhs *= -1.0;
    CHECK(coeff_diff(lhs, rhs) < 1e-10 * coeff_max(rhs));
}

TEST_CASE("shear flow evolves to the closed form") {
    SpectralGrid g{1.0, 16};
    DataTriple d{shear(g, 1.0), {}, 0.2};
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.sample_stride = 50;
    const auto tr = evolve(d, cfg);
    REQUIRE(tr.size() == 5);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double amp = std::exp(-4 * kPi * kPi * tr.times[i]);
        CHECK(max_err(tr.u[i], shear(g, amp)) < 1e-12);
        CHECK(max_abs(tr.p[i].to_physical()) < 1e-13);
    }
}

TEST_CASE("hyperdissipative shear decays with the fourth-order symbol") {
    SpectralGrid g{1.0, 16};
    DataTriple d{shear(g, 1.0), {}, 0.05};
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.eps = 1e-3;
    const auto tr = evolve(d, cfg);
    const double q = 4 * kPi * kPi;
    CHECK(max_err(tr.u.back(), shear(g, std::exp(-0.05 * (q + 1e-3 * q * q)))) < 1e-12);
}

TEST_CASE("Taylor-Green vortex decays at rate 8 pi^2 with its pressure") {
    SpectralGrid g{1.0, 32};
    DataTriple d{taylor_green(g, 1.0), {}, 0.05};
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.sample_stride = 10;
    const auto tr = evolve(d, cfg);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double A = std::exp(-8 * kPi * kPi * tr.times[i]);
        CHECK(max_err(tr.u[i], taylor_green(g, A)) < 1e-10);
        const auto ex = sample_grid(g, [&](const Vec3& x) {
            return A * A / 4 * (std::cos(4 * kPi * x[0]) + std::cos(4 * kPi * x[1]));
        });
        CHECK(max_abs_diff(tr.p[i].to_physical(), ex) < 1e-10);
    }
}

TEST_CASE("mean forcing accelerates the mean velocity linearly") {
    SpectralGrid g{1.0, 8};
    VectorField f(g);
    f.comp[1].c[0] = 0.3;
    DataTriple d{VectorField(g), ForcingSeries::constant(f), 0.5};
    SolverConfig cfg;
    cfg.dt = 0.01;
    const auto tr = evolve(d, cfg);
    CHECK(std::abs(tr.u.back().mean()[1] - 0.15) < 1e-14);
}

TEST_CASE("residual of the exact shear trajectory converges at second order") {
    SpectralGrid g{1.0, 16};
    std::vector<double> res;
    for (double dt : {1e-2, 1e-3}) {
        DataTriple d{shear(g, 1.0), {}, 0.05};
        SolverConfig cfg;
        cfg.dt = dt;
        const auto r = residual(evolve(d, cfg));
        double m = 0.0;
        for (double v : r) m = std::max(m, v);
        res.push_back(m);
    }
    const double slope = std::log10(res[0] / res[1]);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("solver rejects bad input and aborts on non-finite states") {
    SpectralGrid g{1.0, 8};
    SolverConfig cfg;
    DataTriple d{random_vector(g, 3, 3), {}, 0.1};
    CHECK_THROWS_AS(evolve(d, cfg), std::invalid_argument);
    DataTriple z{VectorField(g), {}, 0.0};
    CHECK_THROWS_AS(evolve(z, cfg), std::invalid_argument);
    DataTriple nan{shear(g, 1.0), {}, 0.1};
    nan.u0.comp[0].c[1] = cplx(std::nan(""), 0.0);
    try {
        evolve(nan, cfg);
        CHECK(false);
    } catch (const NumericalAbort& e) {
        CHECK(e.step() == 1);
    }
}

TEST_CASE("Picard fixed point reproduces the time stepper") {
    SpectralGrid g{1.0, 16};
    const auto u0 = small_random(g, 11, 4, 0.5);
    DataTriple d{u0, {}, 0.05};
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.sample_stride = 10;
    const auto pr = picard_solve(d, cfg);
    const auto ev = evolve(d, cfg);
    CHECK(pr.contraction < 0.5);
    CHECK(pr.iterations >= 2);
    REQUIRE(pr.traj.size() == ev.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i) worst = std::max(worst, sobolev_norm(pr.traj.u[i] - ev.u[i], 1.0));
    CHECK(worst < 1e-9);
    // Distances shrink geometrically.
    for (std::size_t i = 1; i < pr.distances.size(); ++i) CHECK(pr.distances[i] < pr.distances[i - 1]);
}

TEST_CASE("Picard on a linear problem converges immediately; smallness is enforced") {
    SpectralGrid g{1.0, 16};
    DataTriple d{shear(g, 0.2), {}, 0.1};
    SolverConfig cfg;
    const auto pr = picard_solve(d, cfg);
    CHECK(pr.iterations == 1);
    DataTriple big{shear(g, 5.0), {}, 1.0};
    CHECK_THROWS_AS(picard_solve(big, cfg), std::invalid_argument);
}

TEST_CASE("global energy inequality on random data") {
    SpectralGrid g{1.0, 16};
    DataTriple d{small_random(g, 5, 2, 3.0), {}, 0.02};
    SolverConfig cfg;
    cfg.dt = 1e-4;
    const auto tr = evolve(d, cfg);
    const double E = energy_functional(d.u0, d.f, d.T);
    std::vector<double> g2(tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) s += std::pow(l2_norm(gradient(tr.u[i][c])), 2);
        g2[i] = s;
    }
    double diss = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        if (i > 0) diss += 0.5 * (tr.times[i] - tr.times[i - 1]) * (g2[i] + g2[i - 1]);
        const double e = 0.5 * std::pow(l2_norm(tr.u[i]), 2);
        CHECK(e + diss <= E * (1 + 2e-3));
    }
}

TEST_CASE("maximal continuation completes for decaying data and reports consistent verdicts") {
    SpectralGrid g{1.0, 16};
    DataTriple d{shear(g, 1.0), {}, 0.3};
    SolverConfig cfg;
    cfg.dt = 1e-3;
    const auto v = continue_max(d, cfg);
    CHECK(v.completed);
    CHECK(v.T_star == doctest::Approx(0.3));
    CHECK(v.final_h1 == doctest::Approx(std::exp(-4 * kPi * kPi * 0.3)).epsilon(1e-9));
    CHECK(v.window_start.size() >= 2);

    DataTriple big{small_random(g, 3, 6, 400.0), {}, 0.05};
    SolverConfig c2;
    c2.dt = 1e-3;
    c2.blowup = 500.0;
    const auto w = continue_max(big, c2);
    if (!w.completed) CHECK(w.final_h1 >= c2.blowup);
    else CHECK(w.final_h1 <= c2.blowup);
}
