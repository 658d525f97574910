#include "symmetries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vec3 lerp(const std::vector<double>& t, const std::vector<Vec3>& v, double x) {
    if (v.empty()) return {0.0, 0.0, 0.0};
    if (v.size() == 1 || x <= t.front()) return v.front();
    if (x >= t.back()) return v.back();
    const std::size_t j = std::size_t(std::upper_bound(t.begin(), t.end(), x) - t.begin());
    const double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = (1 - w) * v[j - 1][i] + w * v[j][i];
    return out;
}

void add_mean(VectorField& u, const Vec3& v) {
    for (int i = 0; i < 3; ++i) u.comp[i].c[0] += v[i];
}

Vec3 neg(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

void check_path(const VelocityPath& p) {
    if (p.times.empty() || p.times.size() != p.v.size() || p.times.size() != p.dv.size())
        throw std::invalid_argument("velocity path needs matching non-empty times, v and v' samples");
    if (std::abs(p.times.front()) > 1e-14) throw std::invalid_argument("velocity path must start at t = 0");
    for (std::size_t i = 1; i < p.times.size(); ++i)
        if (!(p.times[i] > p.times[i - 1])) throw std::invalid_argument("velocity path times must increase");
}

// Forcing of the image trajectory resampled on its own sample times.
template <class F>
ForcingSeries resample(const std::vector<double>& times, F&& at) {
    ForcingSeries s;
    s.times = times;
    for (double t : times) s.samples.push_back(at(t));
    return s;
}

Trajectory translate_traj(const Trajectory& tr, const Vec3& x0) {
    Trajectory out = tr;
    for (auto& u : out.u) u = translate(u, x0);
    for (auto& p : out.p) p = translate(p, x0);
    for (auto& f : out.f.samples) f = translate(f, x0);
    return out;
}

Trajectory time_translate(const Trajectory& tr, double t0) {
    if (t0 < 0.0 || t0 > tr.final_time()) throw std::invalid_argument("time shift outside [0, T]");
    const double tol = 1e-9 * std::max(1.0, tr.final_time());
    std::size_t j = 0;
    while (j < tr.size() && std::abs(tr.times[j] - t0) > tol) ++j;
    if (j == tr.size()) throw std::invalid_argument("time shift must coincide with a stored sample time");
    Trajectory out;
    out.grid = tr.grid;
    out.eps = tr.eps;
    for (std::size_t i = j; i < tr.size(); ++i) {
        out.times.push_back(tr.times[i] - tr.times[j]);
        out.u.push_back(tr.u[i]);
        out.p.push_back(tr.p[i]);
        out.p_linear.push_back(tr.p_linear.empty() ? Vec3{} : tr.p_linear[i]);
    }
    out.f = tr.f;
    for (auto& t : out.f.times) t -= tr.times[j];
    return out;
}

Trajectory scale_traj(const Trajectory& tr, double lam) {
    if (!(lam > 0.0)) throw std::invalid_argument("scaling factor must be positive");
    Trajectory out;
    out.grid = tr.grid;
    out.grid.L *= lam;
    out.eps = tr.eps * lam * lam;
    const double l1 = 1.0 / lam, l2 = l1 * l1, l3 = l2 * l1;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        out.times.push_back(tr.times[i] * lam * lam);
        VectorField u = tr.u[i];
        for (auto& c : u.comp) c.grid = out.grid;
        u *= l1;
        out.u.push_back(u);
        ScalarField p = tr.p[i];
        p.grid = out.grid;
        p *= l2;
        out.p.push_back(p);
        Vec3 g = tr.p_linear.empty() ? Vec3{} : tr.p_linear[i];
        for (auto& x : g) x *= l3;
        out.p_linear.push_back(g);
    }
    out.f = tr.f;
    for (auto& t : out.f.times) t *= lam * lam;
    for (auto& f : out.f.samples) {
        for (auto& c : f.comp) c.grid = out.grid;
        f *= l3;
    }
    return out;
}

Trajectory galilean_traj(const Trajectory& tr, const VelocityPath& path, bool forced) {
    check_path(path);
    Trajectory out = tr;
    if (out.p_linear.empty()) out.p_linear.assign(tr.size(), Vec3{});
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double t = tr.times[i];
        const Vec3 s = path.displacement(t);
        out.u[i] = translate(tr.u[i], s);
        add_mean(out.u[i], path.velocity(t));
        out.p[i] = translate(tr.p[i], s);
        if (!forced) {
            const Vec3 a = path.acceleration(t);
            for (int k = 0; k < 3; ++k) out.p_linear[i][k] -= a[k];
        }
    }
    out.f = resample(tr.times, [&](double t) {
        VectorField f = translate(tr.f.at(t, tr.grid), path.displacement(t));
        if (forced) add_mean(f, path.acceleration(t));
        return f;
    });
    return out;
}

Trajectory forcing_traj(const Trajectory& tr, const ForcingShift& fs) {
    if (!fs.q) throw std::invalid_argument("forcing transform needs a pressure increment q(t)");
    Trajectory out = tr;
    for (std::size_t i = 0; i < tr.size(); ++i) out.p[i] += fs.q(tr.times[i]);
    out.f = resample(tr.times, [&](double t) { return tr.f.at(t, tr.grid) + gradient(fs.q(t)); });
    return out;
}

}  // namespace

Vec3 VelocityPath::velocity(double t) const { return lerp(times, v, t); }
Vec3 VelocityPath::acceleration(double t) const { return lerp(times, dv, t); }

Vec3 VelocityPath::displacement(double t) const {
    Vec3 s{0.0, 0.0, 0.0};
    if (times.empty()) return s;
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        if (t <= times[j]) break;
        const double b = std::min(t, times[j + 1]);
        const Vec3 vb = velocity(b);
        for (int i = 0; i < 3; ++i) s[i] += 0.5 * (b - times[j]) * (v[j][i] + vb[i]);
    }
    if (t > times.back())
        for (int i = 0; i < 3; ++i) s[i] += (t - times.back()) * v.back()[i];
    return s;
}

VelocityPath VelocityPath::sample(const std::vector<double>& times, const std::function<Vec3(double)>& v,
                                  const std::function<Vec3(double)>& dv) {
    VelocityPath p;
    p.times = times;
    for (double t : times) {
        p.v.push_back(v(t));
        p.dv.push_back(dv(t));
    }
    return p;
}

const char* transform_name(const SymmetryTransform& s) {
    return std::visit(overloaded{[](const SpaceTranslate&) { return "space-translate"; },
                                 [](const TimeTranslate&) { return "time-translate"; },
                                 [](const Scale&) { return "scaling"; },
                                 [](const PressureShift&) { return "pressure-shift"; },
                                 [](const Galilean&) { return "galilean"; },
                                 [](const ForcingShift&) { return "forcing"; },
                                 [](const GalileanForced&) { return "galilean-forced"; }},
                      s);
}

Trajectory apply(const SymmetryTransform& s, const Trajectory& traj) {
    return std::visit(overloaded{[&](const SpaceTranslate& x) { return translate_traj(traj, x.x0); },
                                 [&](const TimeTranslate& x) { return time_translate(traj, x.t0); },
                                 [&](const Scale& x) { return scale_traj(traj, x.lambda); },
                                 [&](const PressureShift& x) {
                                     if (!x.C) throw std::invalid_argument("pressure shift needs C(t)");
                                     Trajectory out = traj;
                                     for (std::size_t i = 0; i < out.size(); ++i) out.p[i].c[0] += x.C(out.times[i]);
                                     return out;
                                 },
                                 [&](const Galilean& x) { return galilean_traj(traj, x.path, false); },
                                 [&](const ForcingShift& x) { return forcing_traj(traj, x); },
                                 [&](const GalileanForced& x) { return galilean_traj(traj, x.path, true); }},
                      s);
}

DataTriple apply(const SymmetryTransform& s, const DataTriple& data) {
    const SpectralGrid& g = data.u0.grid();
    return std::visit(
        overloaded{[&](const SpaceTranslate& x) {
                       DataTriple out = data;
                       out.u0 = translate(data.u0, x.x0);
                       for (auto& f : out.f.samples) f = translate(f, x.x0);
                       return out;
                   },
                   [&](const TimeTranslate&) -> DataTriple {
                       throw std::invalid_argument("time translation acts on solutions, not on data alone");
                   },
                   [&](const Scale& x) {
                       if (!(x.lambda > 0.0)) throw std::invalid_argument("scaling factor must be positive");
                       DataTriple out = data;
                       SpectralGrid ng = g;
                       ng.L *= x.lambda;
                       for (auto& c : out.u0.comp) c.grid = ng;
                       out.u0 *= 1.0 / x.lambda;
                       for (auto& t : out.f.times) t *= x.lambda * x.lambda;
                       for (auto& f : out.f.samples) {
                           for (auto& c : f.comp) c.grid = ng;
                           f *= std::pow(x.lambda, -3);
                       }
                       out.T = data.T * x.lambda * x.lambda;
                       return out;
                   },
                   [&](const PressureShift&) { return data; },
                   [&](const Galilean& x) {
                       check_path(x.path);
                       DataTriple out = data;
                       add_mean(out.u0, x.path.velocity(0.0));
                       out.f = resample(x.path.times, [&](double t) {
                           return translate(data.f.at(t, g), x.path.displacement(t));
                       });
                       return out;
                   },
                   [&](const ForcingShift& x) {
                       if (!x.q || x.times.empty()) throw std::invalid_argument("forcing transform needs q(t) and sample times");
                       DataTriple out = data;
                       out.f = resample(x.times, [&](double t) { return data.f.at(t, g) + gradient(x.q(t)); });
                       return out;
                   },
                   [&](const GalileanForced& x) {
                       check_path(x.path);
                       DataTriple out = data;
                       add_mean(out.u0, x.path.velocity(0.0));
                       out.f = resample(x.path.times, [&](double t) {
                           VectorField f = translate(data.f.at(t, g), x.path.displacement(t));
                           add_mean(f, x.path.acceleration(t));
                           return f;
                       });
                       return out;
                   }},
        s);
}

MeanZeroResult normalise_mean_zero(const DataTriple& data, int min_samples) {
    const SpectralGrid& g = data.u0.grid();
    std::vector<double> times;
    if (data.f.samples.size() >= 2) {
        times.push_back(0.0);
        for (double t : data.f.times)
            if (t > 0.0 && t < data.T) times.push_back(t);
        times.push_back(data.T);
    }
    if (int(times.size()) < min_samples) {
        times.clear();
        for (int i = 0; i < min_samples; ++i) times.push_back(data.T * i / (min_samples - 1));
    }
    VelocityPath path;
    path.times = times;
    const Vec3 m0 = data.u0.mean();
    Vec3 v = neg(m0);
    Vec3 prev_a{};
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Vec3 a = neg(data.f.at(times[i], g).mean());
        if (i > 0)
            for (int k = 0; k < 3; ++k) v[k] += 0.5 * (times[i] - times[i - 1]) * (a[k] + prev_a[k]);
        path.v.push_back(v);
        path.dv.push_back(a);
        prev_a = a;
    }
    MeanZeroResult r;
    r.path = path;
    r.data = apply(GalileanForced{path}, data);
    return r;
}

ForcingSeries homogenise_shift(const ForcingSeries& f, const SpectralGrid& g, const Vec3& w,
                               const std::vector<double>& times) {
    ForcingSeries out;
    out.times = times;
    for (double t : times) out.samples.push_back(translate(f.at(t, g), {w[0] * t * t, w[1] * t * t, w[2] * t * t}));
    return out;
}

PairingTable weak_pairing_decay(const ForcingSeries& f, const SpectralGrid& g, const TestFunction& phi,
                                const Vec3& alpha, const std::vector<double>& lambdas, double T,
                                bool enforce_irrational) {
    if (!(T > 0.0)) throw std::invalid_argument("pairing horizon must be positive");
    if (f.empty()) throw std::invalid_argument("pairing needs a non-empty forcing");
    if (!phi.envelope) throw std::invalid_argument("test function needs a time envelope");
    for (const auto& s : f.samples) {
        const Vec3 m = s.mean();
        if (std::abs(m[0]) + std::abs(m[1]) + std::abs(m[2]) > 1e-12)
            throw std::invalid_argument("homogenisation requires mean-zero forcing");
    }

    struct Mode {
        std::size_t idx;
        double kalpha;
        double weight;
    };
    std::vector<Mode> modes;
    PairingTable table;
    table.min_phase_gap = 1.0;
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double w) {
        if (k1 == 0 && k2 == 0 && k3 == 0) return;
        bool fa = false, pa = false;
        for (int i = 0; i < 3; ++i) {
            pa |= std::abs(phi.shape.comp[i].c[idx]) > 0.0;
            for (const auto& s : f.samples) fa |= std::abs(s.comp[i].c[idx]) > 1e-14;
        }
        if (!(fa && pa)) return;
        const double ka = (k1 * alpha[0] + k2 * alpha[1] + k3 * alpha[2]) / g.L;
        table.min_phase_gap = std::min(table.min_phase_gap, std::abs(ka - std::round(ka)));
        modes.push_back({idx, ka, w});
    });
    if (enforce_irrational && !modes.empty() && table.min_phase_gap < 1e-3)
        throw std::invalid_argument("shift direction is too close to a rational relation on the active modes");

    // Coefficient pairing fhat(t)(k) . conj(phihat(k)), linear in t between forcing samples.
    auto coupling_at = [&](const Mode& m, std::size_t j) {
        cplx acc = 0.0;
        for (int i = 0; i < 3; ++i)
            acc += f.samples[j].comp[i].c[m.idx] * std::conj(phi.shape.comp[i].c[m.idx]);
        return acc;
    };
    auto coupling = [&](const std::vector<cplx>& node, double t) {
        const auto& ts = f.times;
        if (node.size() == 1 || t <= ts.front()) return node.front();
        if (t >= ts.back()) return node.back();
        const std::size_t j = std::size_t(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
        const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
        return (1 - w) * node[j - 1] + w * node[j];
    };
    for (double lam : lambdas) {
        double total = 0.0;
        cplx plane = 0.0;
        for (const auto& m : modes) {
            const double rate = 4.0 * kPi * std::abs(lam * m.kalpha) * T;
            long M = std::max(2000L, long(std::ceil(rate * T / 0.05)));
            if (M % 2) ++M;
            const double h = T / double(M);
            std::vector<cplx> node;
            for (std::size_t j = 0; j < f.samples.size(); ++j) node.push_back(coupling_at(m, j));
            cplx acc = 0.0;
            for (long j = 0; j <= M; ++j) {
                const double t = j * h;
                const double wgt = (j == 0 || j == M) ? 1.0 : (j % 2 ? 4.0 : 2.0);
                const double ph = -2.0 * kPi * lam * m.kalpha * t * t;
                const cplx c = coupling(node, t);
                acc += wgt * phi.envelope(t) * c * cplx(std::cos(ph), std::sin(ph));
            }
            acc *= h / 3.0;
            if (m.weight == 2.0)
                total += 2.0 * acc.real();
            else
                plane += acc;
        }
        total += plane.real();
        table.lambda.push_back(lam);
        table.magnitude.push_back(std::abs(total) * g.volume());
    }
    return table;
}

}  // namespace nslab
