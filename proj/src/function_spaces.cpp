#include "function_spaces.hpp"

#include "format_util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nslab {

namespace {

double sobolev_sum(const ScalarField& f, double s, bool homogeneous) {
    const auto& g = f.grid;
    if (homogeneous) {
        double scale = 0.0;
        for (const auto& v : f.c) scale = std::max(scale, std::abs(v));
        if (std::abs(f.c[0]) > 1e-12 * std::max(1.0, scale))
            throw std::invalid_argument("homogeneous Sobolev norm requires a mean-zero field");
    }
    double sum = 0.0;
    const double invL2 = 1.0 / (g.L * g.L);
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double w) {
        const double a = std::norm(f.c[idx]);
        if (a == 0.0) return;
        const double q = double(k1 * k1 + k2 * k2 + k3 * k3) * invL2;
        double weight;
        if (homogeneous)
            weight = q == 0.0 ? 0.0 : std::pow(q, s);
        else
            weight = s == 0.0 ? 1.0 : std::pow(1.0 + q, s);
        sum += w * weight * a;
    });
    return sum * g.volume();
}

}  // namespace

double sobolev_norm(const ScalarField& f, double s, bool homogeneous) {
    return std::sqrt(sobolev_sum(f, s, homogeneous));
}

double sobolev_norm(const VectorField& u, double s, bool homogeneous) {
    double sum = 0.0;
    for (const auto& c : u.comp) sum += sobolev_sum(c, s, homogeneous);
    return std::sqrt(sum);
}

double mixed_norm(const std::vector<double>& times, const std::vector<double>& values, double p) {
    if (times.size() != values.size()) throw std::invalid_argument("mixed_norm: times and values differ in length");
    if (times.empty()) throw std::invalid_argument("mixed_norm: no samples");
    if (!(p >= 1.0)) throw std::invalid_argument("mixed_norm: exponent must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    if (times.size() == 1) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double dt = times[i + 1] - times[i];
        sum += 0.5 * dt * (std::pow(std::abs(values[i]), p) + std::pow(std::abs(values[i + 1]), p));
    }
    return std::pow(sum, 1.0 / p);
}

double mixed_norm(const Trajectory& traj, double p, double s) {
    std::vector<double> v(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) v[i] = sobolev_norm(traj.u[i], s);
    return mixed_norm(traj.times, v, p);
}

double xs_norm(const Trajectory& traj, double s) {
    return mixed_norm(traj, kInf, s) + mixed_norm(traj, 2.0, s + 1.0);
}

double forcing_mixed_norm(const ForcingSeries& f, const SpectralGrid& g, double T, double p, double s) {
    if (f.empty()) return 0.0;
    if (f.samples.size() == 1) {
        const double v = sobolev_norm(f.samples[0], s);
        return std::isinf(p) ? v : v * std::pow(T, 1.0 / p);
    }
    std::vector<double> ts{0.0};
    for (double t : f.times)
        if (t > 0.0 && t < T) ts.push_back(t);
    ts.push_back(T);
    std::vector<double> vals(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) vals[i] = sobolev_norm(f.at(ts[i], g), s);
    return mixed_norm(ts, vals, p);
}

double energy_functional(const VectorField& u0, const ForcingSeries& f, double T) {
    const double a = l2_norm(u0) + forcing_mixed_norm(f, u0.grid(), T, 1.0, 0.0);
    return 0.5 * a * a;
}

double enstrophy(const VectorField& u) {
    const double w = l2_norm(curl(u));
    return 0.5 * w * w;
}

double h1_data_norm(const VectorField& u0, const ForcingSeries& f, double T) {
    return sobolev_norm(u0, 1.0) + forcing_mixed_norm(f, u0.grid(), T, kInf, 1.0);
}

std::string csv_header(const NormReport& r) {
    std::string h = "name,value";
    for (std::size_t i = 0; i < r.times.size(); ++i) h += ",t=" + fmt_double(r.times[i]);
    return h;
}

std::string csv_row(const NormReport& r) {
    std::string row = r.name + "," + fmt_double(r.value);
    for (double v : r.per_time) row += "," + fmt_double(v);
    return row;
}

}  // namespace nslab
