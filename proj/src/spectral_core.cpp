#include "spectral_core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace nslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct PlanPair {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

// Plans are created once per size and executed through the new-array
// interface on aligned per-thread buffers, which is safe to call concurrently.
PlanPair plans_for(int N) {
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    const std::size_t nr = std::size_t(N) * N * N;
    const std::size_t nc = std::size_t(N) * N * (N / 2 + 1);
    double* r = fftw_alloc_real(nr);
    fftw_complex* c = fftw_alloc_complex(nc);
    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE;
    p.r2c = fftw_plan_dft_r2c_3d(N, N, N, r, c, flags);
    p.c2r = fftw_plan_dft_c2r_3d(N, N, N, c, r, flags);
    fftw_free(r);
    fftw_free(c);
    if (!p.r2c || !p.c2r) throw std::runtime_error("FFTW plan creation failed for N=" + std::to_string(N));
    cache[N] = p;
    return p;
}

struct Scratch {
    int N = 0;
    double* r = nullptr;
    fftw_complex* c = nullptr;
    ~Scratch() { release(); }
    void release() {
        fftw_free(r);
        fftw_free(c);
        r = nullptr;
        c = nullptr;
    }
    void ensure(int n) {
        if (n == N) return;
        release();
        N = n;
        r = fftw_alloc_real(std::size_t(n) * n * n);
        c = fftw_alloc_complex(std::size_t(n) * n * (n / 2 + 1));
        if (!r || !c) throw std::bad_alloc();
    }
};

Scratch& scratch_for(int N) {
    thread_local Scratch s;
    s.ensure(N);
    return s;
}

void check_same(const SpectralGrid& a, const SpectralGrid& b) {
    if (a != b) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

void SpectralGrid::validate() const {
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("grid period L must be positive");
    if (N < 4 || N % 2 != 0) throw std::invalid_argument("grid resolution N must be even and >= 4 (got " + std::to_string(N) + ")");
    if (!(dealias > 0.0 && dealias <= 1.0)) throw std::invalid_argument("dealias fraction must lie in (0, 1]");
}

void forward_transform(int N, const double* in, cplx* out) {
    PlanPair p = plans_for(N);
    Scratch& w = scratch_for(N);
    std::copy(in, in + std::size_t(N) * N * N, w.r);
    fftw_execute_dft_r2c(p.r2c, w.r, w.c);
    const double s = 1.0 / (double(N) * N * N);
    const std::size_t nc = std::size_t(N) * N * (N / 2 + 1);
    const cplx* c = reinterpret_cast<const cplx*>(w.c);
    for (std::size_t i = 0; i < nc; ++i) out[i] = c[i] * s;
}

void inverse_transform(int N, const cplx* in, double* out) {
    PlanPair p = plans_for(N);
    Scratch& w = scratch_for(N);
    std::copy(in, in + std::size_t(N) * N * (N / 2 + 1), reinterpret_cast<cplx*>(w.c));
    fftw_execute_dft_c2r(p.c2r, w.c, w.r);
    std::copy(w.r, w.r + std::size_t(N) * N * N, out);
}

bool is_nyquist(const SpectralGrid& g, int k1, int k2, int k3) {
    const int h = g.N / 2;
    return k1 == h || k2 == h || k3 == h || k1 == -h || k2 == -h || k3 == -h;
}

bool is_dealiased_out(const SpectralGrid& g, int k1, int k2, int k3) {
    const double cut = g.dealias * g.N - 1e-9;
    return 2.0 * std::abs(k1) >= cut || 2.0 * std::abs(k2) >= cut || 2.0 * std::abs(k3) >= cut;
}

ScalarField ScalarField::from_physical(const SpectralGrid& g, const std::vector<double>& samples) {
    g.validate();
    if (samples.size() != g.physical_size()) throw std::invalid_argument("sample count does not match grid");
    ScalarField f(g);
    forward_transform(g.N, samples.data(), f.c.data());
    zero_nyquist(f);
    return f;
}

std::vector<double> ScalarField::to_physical() const {
    std::vector<double> out(grid.physical_size());
    inverse_transform(grid.N, c.data(), out.data());
    return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    check_same(grid, o.grid);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    check_same(grid, o.grid);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
}

VectorField VectorField::from_physical(const SpectralGrid& g, const std::array<std::vector<double>, 3>& s) {
    VectorField u;
    for (int i = 0; i < 3; ++i) u.comp[i] = ScalarField::from_physical(g, s[i]);
    return u;
}

std::array<std::vector<double>, 3> VectorField::to_physical() const {
    return {comp[0].to_physical(), comp[1].to_physical(), comp[2].to_physical()};
}

Vec3 VectorField::mean() const { return {comp[0].c[0].real(), comp[1].c[0].real(), comp[2].c[0].real()}; }

VectorField& VectorField::operator+=(const VectorField& o) {
    for (int i = 0; i < 3; ++i) comp[i] += o.comp[i];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
    for (int i = 0; i < 3; ++i) comp[i] -= o.comp[i];
    return *this;
}

VectorField& VectorField::operator*=(double s) {
    for (int i = 0; i < 3; ++i) comp[i] *= s;
    return *this;
}

VectorField& VectorField::axpy(double a, const VectorField& x) {
    for (int i = 0; i < 3; ++i) {
        check_same(comp[i].grid, x.comp[i].grid);
        auto& d = comp[i].c;
        const auto& s = x.comp[i].c;
        for (std::size_t j = 0; j < d.size(); ++j) d[j] += a * s[j];
    }
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

void zero_nyquist(ScalarField& f) {
    const auto& g = f.grid;
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double) {
        if (is_nyquist(g, k1, k2, k3)) f.c[idx] = 0.0;
    });
}

void dealias(ScalarField& f) {
    const auto& g = f.grid;
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double) {
        if (is_nyquist(g, k1, k2, k3) || is_dealiased_out(g, k1, k2, k3)) f.c[idx] = 0.0;
    });
}

void dealias(VectorField& u) {
    for (auto& c : u.comp) dealias(c);
}

ScalarField derivative(const ScalarField& f, int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("derivative axis must be 0, 1 or 2");
    ScalarField out(f.grid);
    const auto& g = f.grid;
    const double s = 2.0 * kPi / g.L;
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double) {
        if (is_nyquist(g, k1, k2, k3)) return;
        const int k = axis == 0 ? k1 : axis == 1 ? k2 : k3;
        out.c[idx] = cplx(0.0, s * k) * f.c[idx];
    });
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    ScalarField out(f.grid);
    const auto& g = f.grid;
    const double s = 4.0 * kPi * kPi / (g.L * g.L);
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double) {
        out.c[idx] = -s * double(k1 * k1 + k2 * k2 + k3 * k3) * f.c[idx];
    });
    return out;
}

ScalarField inverse_laplacian(const ScalarField& f) {
    ScalarField out(f.grid);
    const auto& g = f.grid;
    const double s = g.L * g.L / (4.0 * kPi * kPi);
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double) {
        const int k2sum = k1 * k1 + k2 * k2 + k3 * k3;
        if (k2sum == 0) return;
        out.c[idx] = -s / double(k2sum) * f.c[idx];
    });
    return out;
}

VectorField laplacian(const VectorField& u) {
    VectorField out;
    for (int i = 0; i < 3; ++i) out.comp[i] = laplacian(u.comp[i]);
    return out;
}

VectorField inverse_laplacian(const VectorField& u) {
    VectorField out;
    for (int i = 0; i < 3; ++i) out.comp[i] = inverse_laplacian(u.comp[i]);
    return out;
}

VectorField gradient(const ScalarField& f) {
    VectorField out;
    for (int i = 0; i < 3; ++i) out.comp[i] = derivative(f, i);
    return out;
}

ScalarField divergence(const VectorField& u) {
    ScalarField out = derivative(u.comp[0], 0);
    out += derivative(u.comp[1], 1);
    out += derivative(u.comp[2], 2);
    return out;
}

VectorField curl(const VectorField& u) {
    VectorField out;
    out.comp[0] = derivative(u.comp[2], 1);
    out.comp[0] -= derivative(u.comp[1], 2);
    out.comp[1] = derivative(u.comp[0], 2);
    out.comp[1] -= derivative(u.comp[2], 0);
    out.comp[2] = derivative(u.comp[1], 0);
    out.comp[2] -= derivative(u.comp[0], 1);
    return out;
}

VectorField leray_project(const VectorField& u) {
    VectorField out = u;
    const auto& g = u.grid();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double) {
        const int kk = k1 * k1 + k2 * k2 + k3 * k3;
        if (kk == 0) return;
        const cplx kdotu = double(k1) * u.comp[0].c[idx] + double(k2) * u.comp[1].c[idx] + double(k3) * u.comp[2].c[idx];
        const cplx q = kdotu / double(kk);
        out.comp[0].c[idx] -= double(k1) * q;
        out.comp[1].c[idx] -= double(k2) * q;
        out.comp[2].c[idx] -= double(k3) * q;
    });
    return out;
}

VectorField biot_savart(const VectorField& omega) {
    double scale = 0.0;
    for (const auto& c : omega.comp)
        for (const auto& v : c.c) scale = std::max(scale, std::abs(v));
    const Vec3 m = omega.mean();
    const double mm = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    if (mm > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("Biot-Savart requires mean-zero vorticity (mean magnitude " + std::to_string(mm) + ")");
    VectorField u = inverse_laplacian(curl(omega));
    u *= -1.0;
    return u;
}

double heat_symbol(const SpectralGrid& g, int k1, int k2, int k3, double eps) {
    const double q = 4.0 * kPi * kPi * double(k1 * k1 + k2 * k2 + k3 * k3) / (g.L * g.L);
    return -q - eps * q * q;
}

ScalarField heat_semigroup(const ScalarField& f, double t, double eps) {
    if (t < 0.0) throw std::invalid_argument("heat semigroup requires t >= 0");
    if (eps < 0.0) throw std::invalid_argument("hyperdissipation must be non-negative");
    ScalarField out(f.grid);
    for_each_mode(f.grid, [&](std::size_t idx, int k1, int k2, int k3, double) {
        out.c[idx] = std::exp(t * heat_symbol(f.grid, k1, k2, k3, eps)) * f.c[idx];
    });
    return out;
}

VectorField heat_semigroup(const VectorField& u, double t, double eps) {
    VectorField out;
    for (int i = 0; i < 3; ++i) out.comp[i] = heat_semigroup(u.comp[i], t, eps);
    return out;
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
    check_same(a.grid, b.grid);
    auto pa = a.to_physical();
    auto pb = b.to_physical();
    for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
    ScalarField out(a.grid);
    forward_transform(a.grid.N, pa.data(), out.c.data());
    dealias(out);
    return out;
}

ScalarField translate(const ScalarField& f, const Vec3& x0) {
    ScalarField out(f.grid);
    const double s = -2.0 * kPi / f.grid.L;
    for_each_mode(f.grid, [&](std::size_t idx, int k1, int k2, int k3, double) {
        const double ph = s * (k1 * x0[0] + k2 * x0[1] + k3 * x0[2]);
        out.c[idx] = f.c[idx] * cplx(std::cos(ph), std::sin(ph));
    });
    return out;
}

VectorField translate(const VectorField& u, const Vec3& x0) {
    VectorField out;
    for (int i = 0; i < 3; ++i) out.comp[i] = translate(u.comp[i], x0);
    return out;
}

std::vector<double> oversampled(const ScalarField& f, int factor) {
    const int N = f.grid.N, M = factor * N, HM = M / 2 + 1;
    std::vector<cplx> big(std::size_t(M) * M * HM, cplx(0.0, 0.0));
    for_each_mode(f.grid, [&](std::size_t idx, int k1, int k2, int k3, double) {
        if (is_nyquist(f.grid, k1, k2, k3)) return;
        const int j3 = k3 < 0 ? k3 + M : k3;
        const int j2 = k2 < 0 ? k2 + M : k2;
        big[(std::size_t(j3) * M + j2) * HM + k1] = f.c[idx];
    });
    std::vector<double> out(std::size_t(M) * M * M);
    inverse_transform(M, big.data(), out.data());
    return out;
}

double sup_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : oversampled(f, 2)) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm(const VectorField& u) {
    auto a = oversampled(u.comp[0], 2);
    auto b = oversampled(u.comp[1], 2);
    auto c = oversampled(u.comp[2], 2);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] * a[i] + b[i] * b[i] + c[i] * c[i]);
    return std::sqrt(m);
}

double evaluate(const ScalarField& f, const Vec3& x) {
    double sum = 0.0;
    const double s = 2.0 * kPi / f.grid.L;
    for_each_mode(f.grid, [&](std::size_t idx, int k1, int k2, int k3, double w) {
        if (f.c[idx] == cplx(0.0, 0.0)) return;
        const double ph = s * (k1 * x[0] + k2 * x[1] + k3 * x[2]);
        sum += w * (f.c[idx] * cplx(std::cos(ph), std::sin(ph))).real();
    });
    return sum;
}

}  // namespace nslab
