#include "spherical.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Normalised associated Legendre values (Condon-Shortley phase) and
// theta-derivatives for one theta, with the sqrt 2 of the real basis folded in
// for m != 0.
void legendre_tables(int lmax, double theta, double* P, double* dP) {
    const double x = std::cos(theta), s = std::sin(theta);
    std::vector<double> bar(std::size_t(lmax + 1) * (lmax + 1), 0.0);  // [l * (lmax+1) + m]
    auto at = [&](int l, int m) -> double& { return bar[std::size_t(l) * (lmax + 1) + m]; };
    double pmm = 1 / std::sqrt(4 * kPi);
    for (int m = 0; m <= lmax; ++m) {
        if (m > 0) pmm *= -std::sqrt((2.0 * m + 1) / (2.0 * m)) * s;
        at(m, m) = pmm;
        if (m + 1 <= lmax) at(m + 1, m) = std::sqrt(2.0 * m + 3) * x * pmm;
        for (int l = m + 2; l <= lmax; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1) / (double(l) * l - double(m) * m));
            const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) / (4.0 * (l - 1) * (l - 1) - 1));
            at(l, m) = a * (x * at(l - 1, m) - b * at(l - 2, m));
        }
    }
    for (int l = 0; l <= lmax; ++l)
        for (int m = 0; m <= l; ++m) {
            const double p = at(l, m);
            const double prev = m < l ? at(l - 1, m) : 0.0;
            const double c = l > 0 ? std::sqrt((2.0 * l + 1) * (l - m) * (l + m) / (2.0 * l - 1)) : 0.0;
            const double d = (l * x * p - c * prev) / s;
            const double f = m == 0 ? 1.0 : std::sqrt(2.0);
            P[sh_index(l, m)] = f * p;
            dP[sh_index(l, m)] = f * d;
            if (m > 0) {
                P[sh_index(l, -m)] = f * p;
                dP[sh_index(l, -m)] = f * d;
            }
        }
}

double trig(int m, double phi) { return m >= 0 ? std::cos(m * phi) : std::sin(-m * phi); }

// F[m + lmax][i] = dphi * sum_k f(i, k) trig_m(phi_k)
std::vector<double> fourier_sums(const SphereGrid& g, const std::vector<double>& f, int lmax) {
    const int M = 2 * lmax + 1;
    std::vector<double> F(std::size_t(M) * g.nlat, 0.0);
    const double dp = g.dphi();
    for (int m = -lmax; m <= lmax; ++m) {
        std::vector<double> tr(g.nlon);
        for (int k = 0; k < g.nlon; ++k) tr[k] = trig(m, g.phi[k]) * dp;
        for (int i = 0; i < g.nlat; ++i) {
            double s = 0.0;
            const double* row = &f[std::size_t(i) * g.nlon];
            for (int k = 0; k < g.nlon; ++k) s += row[k] * tr[k];
            F[std::size_t(m + lmax) * g.nlat + i] = s;
        }
    }
    return F;
}

void check_degree(const SphereGrid& g, int lmax) {
    if (lmax < 0 || lmax > g.lmax) throw std::invalid_argument("requested degree exceeds the sphere grid tables");
}

}  // namespace

SphereGrid SphereGrid::make(int lmax, int nlat) {
    if (lmax < 0) throw std::invalid_argument("lmax must be non-negative");
    SphereGrid g;
    g.lmax = lmax;
    g.nlat = nlat > 0 ? nlat : 3 * (lmax + 1) / 2 + 1;
    if (g.nlat < lmax + 1) throw std::invalid_argument("too few latitudes for the requested degree");
    g.nlon = 2 * g.nlat;
    const auto zeros = boost::math::legendre_p_zeros<double>(g.nlat);
    std::vector<double> xs;
    for (double z : zeros) {
        xs.push_back(z);
        if (z != 0.0) xs.push_back(-z);
    }
    std::sort(xs.begin(), xs.end(), std::greater<double>());
    for (double x : xs) {
        const double dp = boost::math::legendre_p_prime(g.nlat, x);
        g.cos_t.push_back(x);
        g.theta.push_back(std::acos(x));
        g.sin_t.push_back(std::sqrt(1 - x * x));
        g.weight.push_back(2.0 / ((1 - x * x) * dp * dp));
    }
    for (int k = 0; k < g.nlon; ++k) g.phi.push_back(2 * kPi * k / g.nlon);
    const int n = sh_count(lmax);
    g.P.assign(std::size_t(g.nlat) * n, 0.0);
    g.dP.assign(g.P.size(), 0.0);
    for (int i = 0; i < g.nlat; ++i) legendre_tables(lmax, g.theta[i], &g.P[std::size_t(i) * n], &g.dP[std::size_t(i) * n]);
    return g;
}

double SphereGrid::dphi() const { return 2 * kPi / nlon; }

Vec3 SphereGrid::direction(int i, int k) const {
    return {sin_t[i] * std::cos(phi[k]), sin_t[i] * std::sin(phi[k]), cos_t[i]};
}

Vec3 SphereGrid::e_theta(int i, int k) const {
    return {cos_t[i] * std::cos(phi[k]), cos_t[i] * std::sin(phi[k]), -sin_t[i]};
}

Vec3 SphereGrid::e_phi(int, int k) const { return {-std::sin(phi[k]), std::cos(phi[k]), 0.0}; }

void sh_basis(int lmax, double theta, double phi, std::vector<double>& Y, std::vector<double>& Yt,
              std::vector<double>& Yp) {
    const int n = sh_count(lmax);
    std::vector<double> P(n), dP(n);
    legendre_tables(lmax, theta, P.data(), dP.data());
    const double s = std::sin(theta);
    Y.assign(n, 0.0);
    Yt.assign(n, 0.0);
    Yp.assign(n, 0.0);
    for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) {
            const int j = sh_index(l, m);
            Y[j] = P[j] * trig(m, phi);
            Yt[j] = dP[j] * trig(m, phi);
            const double dtrig = m > 0 ? -m * trig(-m, phi) : (m < 0 ? -m * trig(-m, phi) : 0.0);
            Yp[j] = P[j] * dtrig / s;
        }
}

std::vector<double> sh_analyse(const SphereGrid& g, const std::vector<double>& f, int lmax) {
    check_degree(g, lmax);
    const auto F = fourier_sums(g, f, lmax);
    const int n = sh_count(g.lmax);
    std::vector<double> c(sh_count(lmax), 0.0);
    for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) {
            double s = 0.0;
            for (int i = 0; i < g.nlat; ++i)
                s += g.weight[i] * F[std::size_t(m + lmax) * g.nlat + i] * g.P[std::size_t(i) * n + sh_index(l, m)];
            c[sh_index(l, m)] = s;
        }
    return c;
}

std::vector<double> sh_synthesise(const SphereGrid& g, const std::vector<double>& c, int lmax) {
    check_degree(g, lmax);
    const int n = sh_count(g.lmax);
    std::vector<double> f(g.size(), 0.0);
    std::vector<double> G(2 * lmax + 1);
    for (int i = 0; i < g.nlat; ++i) {
        std::fill(G.begin(), G.end(), 0.0);
        for (int l = 0; l <= lmax; ++l)
            for (int m = -l; m <= l; ++m) G[m + lmax] += c[sh_index(l, m)] * g.P[std::size_t(i) * n + sh_index(l, m)];
        for (int k = 0; k < g.nlon; ++k) {
            double s = 0.0;
            for (int m = -lmax; m <= lmax; ++m) s += G[m + lmax] * trig(m, g.phi[k]);
            f[std::size_t(i) * g.nlon + k] = s;
        }
    }
    return f;
}

void vsh_analyse(const SphereGrid& g, const std::vector<double>& ut, const std::vector<double>& up, int lmax,
                 std::vector<double>& S, std::vector<double>& T) {
    check_degree(g, lmax);
    const auto Ft = fourier_sums(g, ut, lmax);
    const auto Fp = fourier_sums(g, up, lmax);
    const int n = sh_count(g.lmax);
    S.assign(sh_count(lmax), 0.0);
    T.assign(sh_count(lmax), 0.0);
    auto at = [&](const std::vector<double>& F, int m, int i) { return F[std::size_t(m + lmax) * g.nlat + i]; };
    for (int l = 1; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) {
            const int j = sh_index(l, m);
            double s = 0.0, t = 0.0;
            for (int i = 0; i < g.nlat; ++i) {
                const double P = g.P[std::size_t(i) * n + j], dP = g.dP[std::size_t(i) * n + j];
                // int g . (1/sin) d_phi trig_m = -m F_{-m} (m > 0), |m| F_{|m|} (m < 0)
                const double tp = m > 0 ? -m * at(Fp, -m, i) : (m < 0 ? -m * at(Fp, -m, i) : 0.0);
                const double tt = m > 0 ? -m * at(Ft, -m, i) : (m < 0 ? -m * at(Ft, -m, i) : 0.0);
                s += g.weight[i] * (at(Ft, m, i) * dP + tp * P / g.sin_t[i]);
                t += g.weight[i] * (at(Fp, m, i) * dP - tt * P / g.sin_t[i]);
            }
            const double ll = double(l) * (l + 1);
            S[j] = s / ll;
            T[j] = t / ll;
        }
}

void vsh_synthesise(const SphereGrid& g, const std::vector<double>& S, const std::vector<double>& T, int lmax,
                    std::vector<double>& ut, std::vector<double>& up) {
    check_degree(g, lmax);
    const int n = sh_count(g.lmax);
    ut.assign(g.size(), 0.0);
    up.assign(g.size(), 0.0);
    // Per latitude: coefficients of trig_m in u_theta and u_phi.
    std::vector<double> At(2 * lmax + 1), Ap(2 * lmax + 1);
    for (int i = 0; i < g.nlat; ++i) {
        std::fill(At.begin(), At.end(), 0.0);
        std::fill(Ap.begin(), Ap.end(), 0.0);
        const double inv_s = 1.0 / g.sin_t[i];
        for (int l = 1; l <= lmax; ++l)
            for (int m = -l; m <= l; ++m) {
                const int j = sh_index(l, m);
                const double P = g.P[std::size_t(i) * n + j], dP = g.dP[std::size_t(i) * n + j];
                // grad Y = dP trig_m e_theta + P/sin d_phi trig_m e_phi; d_phi trig_m = -m trig_{-m}.
                At[m + lmax] += S[j] * dP;
                Ap[-m + lmax] += S[j] * P * inv_s * (-m);
                // rhat x grad Y = dP trig_m e_phi - P/sin d_phi trig_m e_theta.
                Ap[m + lmax] += T[j] * dP;
                At[-m + lmax] -= T[j] * P * inv_s * (-m);
            }
        for (int k = 0; k < g.nlon; ++k) {
            double a = 0.0, b = 0.0;
            for (int m = -lmax; m <= lmax; ++m) {
                const double tr = trig(m, g.phi[k]);
                a += At[m + lmax] * tr;
                b += Ap[m + lmax] * tr;
            }
            ut[std::size_t(i) * g.nlon + k] = a;
            up[std::size_t(i) * g.nlon + k] = b;
        }
    }
}

Chebyshev Chebyshev::make(int n, double a, double b) {
    if (n < 3) throw std::invalid_argument("Chebyshev grid needs at least three nodes");
    if (!(b > a)) throw std::invalid_argument("Chebyshev interval must be non-empty");
    Chebyshev c;
    c.a = a;
    c.b = b;
    const int N = n - 1;
    std::vector<double> x(n), cc(n);
    for (int j = 0; j < n; ++j) {
        x[j] = std::cos(kPi * j / N);
        cc[j] = (j == 0 || j == N ? 2.0 : 1.0) * (j % 2 ? -1.0 : 1.0);
    }
    const double half = 0.5 * (b - a);
    c.D.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = cc[i] / cc[j] / (x[i] - x[j]);
            c.D[std::size_t(i) * n + j] = d / half;
            diag -= d;
        }
        c.D[std::size_t(i) * n + i] = diag / half;
    }
    // Clenshaw-Curtis weights.
    c.quad.assign(n, 0.0);
    std::vector<double> v(n, 1.0);
    const auto theta = [&](int k) { return kPi * k / N; };
    if (N % 2 == 0) {
        c.quad[0] = c.quad[N] = 1.0 / (double(N) * N - 1);
        for (int k = 1; k < N / 2; ++k)
            for (int j = 1; j < N; ++j) v[j] -= 2 * std::cos(2 * k * theta(j)) / (4.0 * k * k - 1);
        for (int j = 1; j < N; ++j) v[j] -= std::cos(N * theta(j)) / (double(N) * N - 1);
    } else {
        c.quad[0] = c.quad[N] = 1.0 / (double(N) * N);
        for (int k = 1; k <= (N - 1) / 2; ++k)
            for (int j = 1; j < N; ++j) v[j] -= 2 * std::cos(2 * k * theta(j)) / (4.0 * k * k - 1);
    }
    for (int j = 1; j < N; ++j) c.quad[j] = 2 * v[j] / N;
    for (auto& w : c.quad) w *= half;
    c.x.resize(n);
    for (int j = 0; j < n; ++j) c.x[j] = 0.5 * (a + b) + half * x[j];
    return c;
}

std::vector<double> Chebyshev::derivative(const std::vector<double>& f) const {
    const int n = size();
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += D[std::size_t(i) * n + j] * f[j];
        out[i] = s;
    }
    return out;
}

std::vector<double> Chebyshev::interpolation_weights(double r) const {
    const int n = size();
    std::vector<double> w(n, 0.0);
    for (int j = 0; j < n; ++j)
        if (r == x[j]) {
            w[j] = 1.0;
            return w;
        }
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double lam = (j == 0 || j == n - 1 ? 0.5 : 1.0) * (j % 2 ? -1.0 : 1.0);
        w[j] = lam / (r - x[j]);
        sum += w[j];
    }
    for (auto& v : w) v /= sum;
    return w;
}

}  // namespace nslab
