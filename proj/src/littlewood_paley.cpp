#include "littlewood_paley.hpp"

#include "function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nslab {

namespace {

double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double multiplier(double xi, double N, LPKind kind) {
    const double x = xi / N;
    switch (kind) {
        case LPKind::At: return lp_psi(x);
        case LPKind::AtMost: return xi == 0.0 ? 0.0 : lp_phi(x);
        case LPKind::Above: return 1.0 - lp_phi(x);
    }
    return 0.0;
}

}  // namespace

double lp_phi(double xi) {
    xi = std::abs(xi);
    if (xi <= 1.0) return 1.0;
    if (xi >= 2.0) return 0.0;
    const double a = glue(2.0 - xi), b = glue(xi - 1.0);
    return a / (a + b);
}

double lp_psi(double xi) { return lp_phi(xi) - lp_phi(2.0 * xi); }

ScalarField lp_project(const ScalarField& f, double N, LPKind kind) {
    if (!(N > 0.0)) throw std::invalid_argument("dyadic frequency must be positive");
    ScalarField out(f.grid);
    const double invL = 1.0 / f.grid.L;
    for_each_mode(f.grid, [&](std::size_t idx, int k1, int k2, int k3, double) {
        const double xi = std::sqrt(double(k1 * k1 + k2 * k2 + k3 * k3)) * invL;
        out.c[idx] = multiplier(xi, N, kind) * f.c[idx];
    });
    return out;
}

VectorField lp_project(const VectorField& u, double N, LPKind kind) {
    VectorField out;
    for (int i = 0; i < 3; ++i) out.comp[i] = lp_project(u.comp[i], N, kind);
    return out;
}

std::vector<double> dyadic_range(const SpectralGrid& g) {
    const int jmin = int(std::floor(std::log2(1.0 / g.L) + 1e-12));
    const int jmax = int(std::ceil(std::log2(std::sqrt(3.0) * g.N / (2.0 * g.L)) - 1e-12));
    std::vector<double> out;
    for (int j = jmin; j <= jmax; ++j) out.push_back(std::ldexp(1.0, j));
    return out;
}

std::vector<double> bernstein_range(const SpectralGrid& g) {
    std::vector<double> out;
    const double top = g.N / (3.0 * g.L);
    for (double N = 2.0; N <= top + 1e-12; N *= 2.0) out.push_back(N);
    return out;
}

double lp_norm(const ScalarField& f, double p) {
    if (std::isinf(p)) return sup_norm(f);
    if (!(p >= 1.0)) throw std::invalid_argument("Lebesgue exponent must be >= 1");
    const auto v = f.to_physical();
    const double h3 = std::pow(f.grid.spacing(), 3);
    double sum = 0.0;
    for (double x : v) sum += std::pow(std::abs(x), p);
    return std::pow(sum * h3, 1.0 / p);
}

double lp_norm(const VectorField& u, double p) {
    if (std::isinf(p)) return sup_norm(u);
    if (!(p >= 1.0)) throw std::invalid_argument("Lebesgue exponent must be >= 1");
    const auto v = u.to_physical();
    const double h3 = std::pow(u.grid().spacing(), 3);
    double sum = 0.0;
    for (std::size_t i = 0; i < v[0].size(); ++i) {
        const double m = std::sqrt(v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i]);
        sum += std::pow(m, p);
    }
    return std::pow(sum * h3, 1.0 / p);
}

BernsteinRatios bernstein_check(const ScalarField& f, double N, double p, double q) {
    const auto range = bernstein_range(f.grid);
    if (std::find(range.begin(), range.end(), N) == range.end())
        throw std::invalid_argument("dyadic frequency outside the resolved range [2, N_grid/(3L)]");
    if (!(p >= 1.0) || q < p) throw std::invalid_argument("Bernstein check needs 1 <= p <= q");
    const ScalarField pf = lp_project(f, N, LPKind::At);
    const double base = lp_norm(pf, p);
    if (base == 0.0) throw std::invalid_argument("projection P_N f vanishes");
    BernsteinRatios r;
    r.gradient = lp_norm(gradient(pf), p) / (N * base);
    const double expo = (std::isinf(p) ? 0.0 : 3.0 / p) - (std::isinf(q) ? 0.0 : 3.0 / q);
    r.lebesgue = lp_norm(pf, q) / (std::pow(N, expo) * base);
    return r;
}

std::vector<double> product_support(const ScalarField& f, const ScalarField& g, double tol) {
    const ScalarField fg = product(f, g);
    const double total = l2_norm(fg);
    std::vector<double> out;
    if (total == 0.0) return out;
    for (double M : dyadic_range(f.grid))
        if (l2_norm(lp_project(fg, M, LPKind::At)) > tol * total) out.push_back(M);
    return out;
}

}  // namespace nslab
