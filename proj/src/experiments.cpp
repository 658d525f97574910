#include "experiments.hpp"

#include "divfree_localize.hpp"
#include "estimate_harness.hpp"
#include "function_spaces.hpp"
#include "symmetries.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

namespace nslab {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Context {
    const ExperimentConfig& cfg;
    fs::path dir;
    std::vector<std::string> files;
    std::vector<Verdict> verdicts;

    std::string file(const std::string& name) {
        if (std::find(files.begin(), files.end(), name) == files.end()) files.push_back(name);
        return (dir / name).string();
    }
    void verdict(const std::string& label, bool pass, double value, double bound, const std::string& detail = {}) {
        verdicts.push_back(Verdict{label, pass, value, bound, detail});
    }
    // value <= bound
    void at_most(const std::string& label, double value, double bound, const std::string& detail = {}) {
        verdict(label, value <= bound, value, bound, detail);
    }
    Baselines baselines() const { return Baselines::load(Baselines::default_dir()); }
};

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

std::string fmt(double v) { return csv_cell(v); }

Trajectory solve_data(const DataTriple& d, const SolverConfig& s) { return evolve(d, s); }

DataTriple make_data(const ExperimentConfig& cfg) { return generate_data(cfg.data, cfg.grid); }

void dump_endpoints(Context& ctx, const Trajectory& tr) {
    write_field(ctx.file("u_initial.field"), tr.u.front());
    write_field(ctx.file("u_final.field"), tr.u.back());
}

// Closed-form comparisons for the exact-solution generators.
void closed_form_checks(Context& ctx, const Trajectory& tr) {
    const auto& c = ctx.cfg;
    const auto& d = c.data;
    const bool plain = d.forcing == 0 && d.mean[0] == 0 && d.mean[1] == 0 && d.mean[2] == 0;
    if (!plain || (d.kind != "shear" && d.kind != "taylor-green")) return;
    const auto& g = tr.grid;
    const double kap = 2 * kPi / g.L, eps = tr.eps;
    double uerr = 0.0, perr = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double t = tr.times[i];
        if (d.kind == "shear") {
            const double A = d.amplitude * std::exp(-(kap * kap + eps * std::pow(kap, 4)) * t);
            const auto ex = sample_vector(g, [&](const Vec3& x) { return Vec3{A * std::sin(kap * x[2]), 0.0, 0.0}; });
            uerr = std::max(uerr, l2_norm(tr.u[i] - ex) / (std::abs(d.amplitude) * std::sqrt(g.volume() / 2)));
        } else {
            const double A = d.amplitude * std::exp(-(2 * kap * kap + 4 * eps * std::pow(kap, 4)) * t);
            const auto ex = sample_vector(g, [&](const Vec3& x) {
                return Vec3{A * std::sin(kap * x[0]) * std::cos(kap * x[1]), -A * std::cos(kap * x[0]) * std::sin(kap * x[1]),
                            0.0};
            });
            const auto pex = ScalarField::from_physical(g, sample_grid(g, [&](const Vec3& x) {
                return A * A / 4 * (std::cos(2 * kap * x[0]) + std::cos(2 * kap * x[1]));
            }));
            const double a2 = d.amplitude * d.amplitude;
            uerr = std::max(uerr, l2_norm(tr.u[i] - ex) / (std::abs(d.amplitude) * std::sqrt(g.volume() / 2)));
            ScalarField dp = tr.p[i];
            dp -= pex;
            perr = std::max(perr, l2_norm(dp) / (a2 / 4 * std::sqrt(g.volume())));
        }
    }
    const double tol = d.kind == "shear" ? 1e-6 : 1e-5;
    ctx.at_most("closed-form", uerr, tol, d.kind + " velocity, relative L2");
    if (d.kind == "taylor-green") ctx.at_most("closed-form-pressure", perr, tol, "relative L2");
}

void run_solve(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto data = make_data(c);
    Trajectory tr;
    if (c.picard) {
        const auto pr = picard_solve(data, c.solver);
        ctx.at_most("d4", pr.smallness, c.solver.c_small, "(||u0||_H1 + ||f||_L1H1)^4 T");
        ctx.at_most("contraction", pr.contraction, 0.5, "iterations=" + std::to_string(pr.iterations));
        tr = pr.traj;
    } else {
        tr = solve_data(data, c.solver);
    }
    const auto res = residual(tr);
    std::vector<std::vector<double>> rows;
    double scale = 0.0, div = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double lap = l2_norm(laplacian(tr.u[i]));
        const double dv = divergence_l2(tr.u[i]);
        scale = std::max(scale, lap + (tr.f.empty() ? 0.0 : l2_norm(tr.f.at(tr.times[i], tr.grid))));
        div = std::max(div, dv / std::max(sobolev_norm(tr.u[i], 1.0), 1e-300));
        rows.push_back({tr.times[i], 0.5 * std::pow(l2_norm(tr.u[i]), 2), enstrophy(tr.u[i]), sobolev_norm(tr.u[i], 1.0),
                        res[i], dv});
    }
    write_csv(ctx.file("diagnostics.csv"), {"t", "energy", "enstrophy", "h1", "residual", "divergence"}, rows);
    dump_endpoints(ctx, tr);
    const double dt = tr.size() > 1 ? tr.times[1] - tr.times[0] : c.solver.dt;
    const double tol = c.harness.residual_tol > 0 ? c.harness.residual_tol
                                                  : 10.0 * ctx.baselines().get("solve.residual_dt2") * dt * dt;
    ctx.at_most("residual", scale > 0 ? max_of(res) / scale : max_of(res), tol, "max residual / max(||Delta u|| + ||f||)");
    ctx.at_most("divergence", div, 1e-10, "max ||div u|| / ||u||_H1");
    closed_form_checks(ctx, tr);
}

void run_energy(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto data = make_data(c);
    const auto tr = solve_data(data, c.solver);
    const auto rep = energy_budget(tr);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        rows.push_back({rep.times[i], rep.local_energy[i], rep.dissipation[i], rep.work[i]});
    write_csv(ctx.file("energy.csv"), {"t", "energy", "dissipation", "work"}, rows);
    ctx.at_most("ul2-en", rep.identity_defect, c.harness.budget_tol, "global budget defect, relative");
    if (c.harness.R > 0) {
        const StaticCutoff cut{c.harness.x0, c.harness.R, c.harness.r, c.harness.exterior};
        const auto loc = energy_budget(tr, &cut);
        std::vector<std::vector<double>> lrows;
        for (std::size_t i = 0; i < loc.times.size(); ++i) lrows.push_back({loc.times[i], loc.local_energy[i], loc.dissipation[i]});
        write_csv(ctx.file("local_energy.csv"), {"t", "local_energy", "local_dissipation"}, lrows);
        const std::string key = c.harness.exterior ? "local_energy_external.ratio" : "local_energy.ratio";
        ctx.at_most(c.harness.exterior ? "local-energy-external" : "local-energy", loc.ratio, ctx.baselines().get(key),
                    "lhs=" + fmt(loc.lhs) + " rhs=" + fmt(loc.rhs));
    }
}

void run_total_speed(Context& ctx) {
    const auto& c = ctx.cfg;
    const int m = c.harness.ensemble;
    std::vector<SpeedReport> reps(m);
    std::vector<std::string> errors(m);
    parallel_for(m, c.threads, [&](int i) {
        DataSpec ds = c.data;
        ds.seed = c.data.seed + std::uint64_t(i);
        try {
            const auto d = generate_data(ds, c.grid);
            reps[i] = total_speed(solve_data(d, c.solver), d);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw std::invalid_argument(e);
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
        rows.push_back({double(i), double(c.data.seed + std::uint64_t(i)), reps[i].value, reps[i].bound, reps[i].ratio});
        worst = std::max(worst, reps[i].ratio);
    }
    write_csv(ctx.file("total_speed.csv"), {"member", "seed", "value", "bound", "ratio"}, rows);
    ctx.at_most("lota", c.data.T, c.grid.L * c.grid.L, "T <= L^2");
    ctx.at_most("l1x", worst, ctx.baselines().get("total_speed.ratio"), "ensemble max of int ||u||_inf / (E^1/2 T^1/4 + E)");
    const auto d0 = generate_data(c.data, c.grid);
    const auto tr0 = solve_data(d0, c.solver);
    const auto a = total_speed(tr0, d0);
    const Scale s{c.symmetry.lambda};
    const auto b = total_speed(apply(s, tr0), apply(s, d0));
    ctx.at_most("scaling", std::abs(b.ratio - a.ratio) / a.ratio, 1e-6, "ratio change under Scale(" + fmt(s.lambda) + ")");
}

void enstrophy_verdicts(Context& ctx, const EnstrophyReport& rep, double K, const std::string& suffix) {
    for (const char* label : {"eeta", "delta-4", "r-large", "periodic", "w-init"}) {
        const bool bad = std::find(rep.violations.begin(), rep.violations.end(), label) != rep.violations.end();
        double value = 0.0, bound = 0.0;
        if (std::string(label) == "eeta") value = rep.eeta, bound = rep.delta;
        if (std::string(label) == "delta-4") value = rep.smallness, bound = ctx.cfg.harness.c;
        if (std::string(label) == "r-large") value = rep.r_required, bound = ctx.cfg.harness.r;
        ctx.verdict(label + suffix, !bad, value, bound);
    }
    ctx.at_most("wdef" + suffix, rep.w_ratio, K, "max W / delta^2");
    ctx.at_most("tax" + suffix, rep.tax_violation, 1e-9, "pointwise cutoff estimate");
}

void run_enstrophy(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto data = make_data(c);
    const EnstrophyOptions o{c.harness.x0, c.harness.R, c.harness.r, c.harness.delta, c.harness.c, c.harness.C};
    const auto tr = solve_data(data, c.solver);
    const auto rep = enstrophy_localisation(tr, data, o);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rep.times.size(); ++i) rows.push_back({rep.times[i], rep.W[i], rep.radius[i]});
    write_csv(ctx.file("enstrophy.csv"), {"t", "W", "radius"}, rows);
    dump_endpoints(ctx, tr);
    const double K = ctx.baselines().get("enstrophy.K");
    enstrophy_verdicts(ctx, rep, K, "");
    for (double eps : c.harness.eps) {
        SolverConfig s = c.solver;
        s.eps = eps;
        const auto hr = enstrophy_localisation(solve_data(data, s), data, o);
        enstrophy_verdicts(ctx, hr, K, " hyperdis eps=" + fmt(eps));
    }
}

void run_localize(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& l = c.localize;
    const AnnulusSpec spec{{0.0, 0.0, 0.0}, l.R1, l.R2, l.R3, l.R4};
    LocalizeOptions opt;
    opt.lmax = l.lmax;
    opt.nrad = l.nrad;
    std::vector<std::string> names;
    if (l.field == "all")
        names = suite_field_names();
    else
        names = {l.field};
    const auto b = ctx.baselines();
    const double K0 = b.get("localize.K0"), K1 = b.get("localize.K1");
    std::vector<Row> rows;
    double agree = 0.0, vanish = 0.0, div = 0.0, k0 = 0.0, k1 = 0.0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto u = suite_field(names[i]);
        const auto v = localize_divfree(u, spec, opt);
        const auto chk = check_localized(u, v, l.points, c.data.seed + i);
        const auto out = localized_norms(v);
        const auto in = field_norms(u, spec, l.lmax, l.nrad);
        const double r0 = out.l2 / in.h1, r1 = out.h1 / in.h2;
        agree = std::max(agree, chk.agreement);
        vanish = std::max(vanish, chk.vanishing);
        div = std::max(div, chk.divergence);
        k0 = std::max(k0, r0);
        k1 = std::max(k1, r1);
        rows.push_back({names[i], fmt(chk.agreement), fmt(chk.vanishing), fmt(chk.divergence), fmt(out.l2), fmt(out.h1),
                        fmt(in.h1), fmt(in.h2), fmt(r0), fmt(r1)});
    }
    write_csv(ctx.file("localize.csv"),
              {"field", "agreement", "vanishing", "divergence", "l2_out", "h1_out", "h1_in", "h2_in", "k0", "k1"}, rows);
    ctx.at_most("divloc-agreement", agree, 1e-6, "max |u~ - u| / max |u| on R1 < r < R2");
    ctx.at_most("divloc-vanishing", vanish, 1e-6, "max |u~| / max |u| on R3 < r < R4");
    ctx.at_most("divloc-divergence", div, 1e-6, "max |div u~| / max |u|");
    ctx.at_most("quant-k0", k0, K0, "||u~||_L2 / ||u||_H1");
    ctx.at_most("quant-k1", k1, K1, "||u~||_H1 / ||u||_H2");
    if (names.size() >= 2) {
        const auto u = suite_field(names[0]), w = suite_field(names[1]);
        const double a = 0.7, bb = -1.3;
        const FieldFn mix = [&](const Vec3& x) {
            const Vec3 p = u(x), q = w(x);
            return Vec3{a * p[0] + bb * q[0], a * p[1] + bb * q[1], a * p[2] + bb * q[2]};
        };
        const auto vu = localize_divfree(u, spec, opt), vw = localize_divfree(w, spec, opt), vm = localize_divfree(mix, spec, opt);
        std::mt19937_64 rng(c.data.seed);
        std::uniform_real_distribution<double> ur(l.R1, l.R4), ud(-1.0, 1.0);
        double err = 0.0;
        for (int i = 0; i < l.points; ++i) {
            Vec3 d{ud(rng), ud(rng), ud(rng)};
            const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
            const double r = ur(rng);
            const Vec3 x{r * d[0] / n, r * d[1] / n, r * d[2] / n};
            const Vec3 p = vu.evaluate(x), q = vw.evaluate(x), m = vm.evaluate(x);
            for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(m[k] - a * p[k] - bb * q[k]));
        }
        ctx.at_most("linearity", err / std::max(vm.scale, 1e-300), 1e-10, names[0] + ", " + names[1]);
    }
}

void run_counterexample(Context& ctx) {
    const auto& ce = ctx.cfg.counterexample;
    const RadialTestFunction psi{ce.psi_radius, ce.component};
    const SpectralGrid box{ce.box_L, ce.box_N};
    const auto k = PairingKernel::compute(psi, box);
    WavePacketSpec spec;
    spec.x0 = search_x0(k, spec.polarisation(), ce.distance);
    const SpectralGrid pg{ce.packet_L, ce.packet_N};
    const auto g = growth_study(spec, ce.n, pg, k);
    write_growth(ctx.file("growth.csv"), ctx.file("growth.dat"), g);
    if (g.rows.size() < 2) return;
    ctx.verdict("growth-slope", g.slope >= 0.8, g.slope, 0.8, "log-log slope of |X0| against n");
    const double rmin = *std::min_element(g.ratios.begin(), g.ratios.end());
    ctx.verdict("growth-ratio", rmin >= 1.5, rmin, 1.5, "min X0(n_i+1) / X0(n_i)");
    double e1 = 0.0, e2 = 0.0, er = 0.0;
    for (std::size_t i = 1; i < g.rows.size(); ++i) {
        const double q = double(g.rows[i].n) / g.rows[i - 1].n;
        e1 = std::max(e1, std::abs(g.rows[i].h1 / g.rows[i - 1].h1 / std::pow(q, -0.5) - 1));
        e2 = std::max(e2, std::abs(g.rows[i].h2 / g.rows[i - 1].h2 / std::pow(q, 0.5) - 1));
        er = std::max(er, std::abs(g.rows[i].remainder / g.rows[i - 1].remainder / std::pow(q, -2.5) - 1));
    }
    ctx.at_most("h1-scaling", e1, 0.15, "max |ratio / (n ratio)^-1/2 - 1|");
    ctx.at_most("h2-scaling", e2, 0.15, "max |ratio / (n ratio)^1/2 - 1|");
    ctx.at_most("leading-amplitude", er, 0.15, "remainder against n^-5/2");
    if (ce.box_check) {
        WavePacketSpec s = spec;
        s.n = g.rows.back().n;
        const auto u = wave_packet(s, pg);
        const auto k2 = PairingKernel::compute(psi, SpectralGrid{2 * ce.box_L, 2 * ce.box_N});
        const double a = g.rows.back().x0, b = x0_pairing(u, s.x0, k2, s.chi_radius);
        ctx.at_most("box-doubling", std::abs(b - a) / std::abs(a), 0.02, "relative X0 change at n=" + std::to_string(s.n));
    }
}

void run_homogenize(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto& g = c.grid;
    const auto cosfield = [&](int axis, int comp) {
        VectorField v(g);
        v.comp[comp] = ScalarField::from_physical(g, sample_grid(g, [&](const Vec3& x) { return std::cos(2 * kPi * x[axis] / g.L); }));
        return v;
    };
    const auto envelope = [](double t) { return std::exp(-t) * (1 + t); };
    Vec3 alpha = c.homogenize.alpha;
    if (alpha == Vec3{0.0, 0.0, 0.0}) alpha = {std::sqrt(2.0) - 1, std::sqrt(3.0) - 1, std::sqrt(5.0) - 2};
    const auto& lam = c.homogenize.lambda;
    const auto irr = weak_pairing_decay(ForcingSeries::constant(cosfield(0, 1)), g, TestFunction{cosfield(0, 1), envelope},
                                        alpha, lam, c.data.T);
    std::vector<std::vector<double>> rows;
    PairingTable ctrl;
    if (c.homogenize.control)
        ctrl = weak_pairing_decay(ForcingSeries::constant(cosfield(1, 0)), g, TestFunction{cosfield(1, 0), envelope},
                                  {0.5, 0.0, 0.0}, lam, c.data.T, false);
    for (std::size_t i = 0; i < lam.size(); ++i)
        rows.push_back({lam[i], irr.magnitude[i], c.homogenize.control ? ctrl.magnitude[i] : 0.0});
    write_csv(ctx.file("homogenize.csv"), {"lambda", "irrational", "rational_control"}, rows);
    const double first = irr.magnitude.front(), last = irr.magnitude.back();
    ctx.at_most("riemann-lebesgue", last, first / 3, "|pairing(" + fmt(lam.back()) + ")| against |pairing(" + fmt(lam.front()) + ")|/3");
    ctx.verdict("phase-gap", irr.min_phase_gap >= 1e-3, irr.min_phase_gap, 1e-3, "min dist(k.alpha, Z) over active modes");
    if (c.homogenize.control) {
        const double dev = std::abs(ctrl.magnitude.back() / ctrl.magnitude.front() - 1);
        ctx.at_most("rational-control", dev, 1e-6, "pairing is lambda-independent when k.alpha is an integer");
    }
}

VelocityPath wobble(const std::vector<double>& times) {
    return VelocityPath::sample(
        times, [](double t) { return Vec3{0.3 + 2.0 * t, -0.2 * std::cos(5 * t), 0.1}; },
        [](double t) { return Vec3{2.0, std::sin(5 * t), 0.0}; });
}

void run_symmetry(Context& ctx) {
    const auto& c = ctx.cfg;
    const auto data = make_data(c);
    const auto tr = solve_data(data, c.solver);
    const double base = max_of(residual(tr));
    const auto& g = tr.grid;
    const auto q = [g](double t) {
        return ScalarField::from_physical(
            g, sample_grid(g, [&](const Vec3& x) { return std::sin(3 * t) * std::cos(2 * kPi * (x[0] + x[1]) / g.L); }));
    };
    const std::vector<SymmetryTransform> all{SpaceTranslate{{0.123 * g.L, 0.4 * g.L, -0.77 * g.L}},
                                             TimeTranslate{tr.times[tr.size() / 5]},
                                             Scale{c.symmetry.lambda},
                                             PressureShift{[](double t) { return std::exp(t); }},
                                             Galilean{wobble(tr.times)},
                                             ForcingShift{q, {}},
                                             GalileanForced{wobble(tr.times)}};
    std::vector<Row> rows;
    for (const auto& s : all) {
        const double r = max_of(residual(apply(s, tr)));
        rows.push_back({transform_name(s), fmt(r), fmt(base), fmt(r - base)});
        ctx.at_most(transform_name(s), r - base, 1e-6, "residual increase");
    }
    write_csv(ctx.file("symmetry.csv"), {"transform", "residual", "base_residual", "increase"}, rows);

    DataTriple shifted = data;
    const Vec3 m = c.data.mean == Vec3{0.0, 0.0, 0.0} ? Vec3{0.4, -1.1, 0.25} : c.data.mean;
    for (int i = 0; i < 3; ++i) shifted.u0.comp[i].c[0] = m[i];
    const auto mz = normalise_mean_zero(shifted);
    double mean = 0.0;
    for (int i = 0; i < 3; ++i) mean = std::max(mean, std::abs(mz.data.u0.mean()[i]));
    for (const auto& f : mz.data.f.samples)
        for (int i = 0; i < 3; ++i) mean = std::max(mean, std::abs(f.mean()[i]));
    ctx.at_most("meanzero-3", mean, 1e-12, "max |mean| after normalisation");

    const double lam = c.symmetry.lambda;
    const auto sd = apply(Scale{lam}, data);
    const double e0 = energy_functional(data.u0, data.f, data.T), e1 = energy_functional(sd.u0, sd.f, sd.T);
    ctx.at_most("scaling-energy", std::abs(e1 / (lam * e0) - 1), 1e-6, "energy ratio against lambda");
}

void dispatch(Context& ctx) {
    const auto& e = ctx.cfg.experiment;
    if (e == "solve") return run_solve(ctx);
    if (e == "energy-budget") return run_energy(ctx);
    if (e == "total-speed") return run_total_speed(ctx);
    if (e == "enstrophy-loc") return run_enstrophy(ctx);
    if (e == "localize") return run_localize(ctx);
    if (e == "counterexample") return run_counterexample(ctx);
    if (e == "homogenize") return run_homogenize(ctx);
    if (e == "symmetry-suite") return run_symmetry(ctx);
    throw ConfigError("unknown experiment '" + e + "'");
}

}  // namespace

std::string error_tag(const std::string& message) {
    if (message.find("(lota)") != std::string::npos) return "lota";
    if (message.find("smallness") != std::string::npos) return "d4";
    if (message.find("xi x eta") != std::string::npos) return "degenerate-direction";
    return "precondition";
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    const int w = std::max(1, std::min(threads, n));
    if (w == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < w; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += w) body(i);
        });
    for (auto& th : pool) th.join();
}

RunManifest run(const ExperimentConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    RunManifest m;
    m.config = cfg.entries;
    m.experiment = cfg.experiment;
    m.version = code_version();
    Context ctx{cfg, fs::path(cfg.out_dir), {}, {}};
    try {
        fs::create_directories(ctx.dir);
        dispatch(ctx);
    } catch (const ConfigError& e) {
        m.error = e.what();
        m.exit_code = kExitConfig;
    } catch (const NumericalAbort& e) {
        m.error = e.what();
        m.exit_code = kExitNumerical;
    } catch (const ResolutionError& e) {
        m.error = e.what();
        m.exit_code = kExitNumerical;
    } catch (const std::invalid_argument& e) {
        m.error = e.what();
        m.exit_code = kExitVerdictFail;
        ctx.verdicts.push_back(Verdict{error_tag(e.what()), false, 0.0, 0.0, e.what()});
    } catch (const std::domain_error& e) {
        m.error = e.what();
        m.exit_code = kExitVerdictFail;
        ctx.verdicts.push_back(Verdict{error_tag(e.what()), false, 0.0, 0.0, e.what()});
    } catch (const std::exception& e) {
        m.error = e.what();
        m.exit_code = kExitNumerical;
    }
    m.verdicts = ctx.verdicts;
    if (m.error.empty()) m.exit_code = m.passed() ? kExitPass : kExitVerdictFail;
    try {
        fs::create_directories(ctx.dir);
        write_verdicts(ctx.file("verdicts.txt"), m.verdicts);
        for (const auto& f : ctx.files) m.files.push_back(Artifact{f, fs::file_size(ctx.dir / f)});
        m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest((ctx.dir / "manifest.json").string(), m);
    } catch (const std::exception& e) {
        if (m.error.empty()) m.error = e.what();
        if (m.exit_code == kExitPass) m.exit_code = kExitNumerical;
    }
    return m;
}

}  // namespace nslab
