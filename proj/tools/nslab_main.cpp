#include "nslab/nslab.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

int config_error(const std::string& what) {
    std::fprintf(stderr, "nslab: %s\n", what.c_str());
    return NSLAB_ERR_CONFIG;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> names;
    for (int i = 0; i < nslab_experiment_count(); ++i) names.emplace_back(nslab_experiment_name(i));

    CLI::App app{"Navier-Stokes estimate laboratory"};
    app.set_version_flag("--version", nslab_version());
    std::string experiment, config, out;
    std::string seed;
    int threads = 0;
    app.add_option("experiment", experiment, "Experiment to run")->required()->check(CLI::IsMember(names));
    app.add_option("--config", config, "Flat key = value configuration file")->required();
    app.add_option("--out", out, "Output directory (overrides output.dir)");
    app.add_option("--seed", seed, "Data seed (overrides data.seed)");
    app.add_option("--threads", threads, "Worker threads for ensembles")->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : NSLAB_ERR_CONFIG;
    }

    nslab_config* cfg = nullptr;
    if (nslab_config_load(config.c_str(), &cfg) != NSLAB_OK) return config_error(nslab_last_error());
    const std::string declared = nslab_config_experiment(cfg);
    if (declared != experiment) {
        nslab_config_free(cfg);
        return config_error("config declares experiment '" + declared + "' but '" + experiment + "' was requested");
    }
    const auto set = [&](const char* key, const std::string& value) {
        return nslab_config_set(cfg, key, value.c_str()) == NSLAB_OK;
    };
    if ((!out.empty() && !set("output.dir", out)) || (!seed.empty() && !set("data.seed", seed)) ||
        (threads > 0 && !set("threads", std::to_string(threads)))) {
        const std::string msg = nslab_last_error();
        nslab_config_free(cfg);
        return config_error(msg);
    }

    nslab_run* run = nullptr;
    if (nslab_run_experiment(cfg, &run) != NSLAB_OK) {
        std::fprintf(stderr, "nslab: %s\n", nslab_last_error());
        nslab_config_free(cfg);
        return NSLAB_ERR_NUMERICAL;
    }
    for (size_t i = 0; i < nslab_run_verdict_count(run); ++i) {
        const char *label = nullptr, *detail = nullptr;
        int pass = 0;
        double value = 0.0, bound = 0.0;
        nslab_run_verdict(run, i, &label, &pass, &value, &bound, &detail);
        std::printf("%s %-28s value=%.6g bound=%.6g  %s\n", pass ? "PASS" : "FAIL", label, value, bound, detail);
    }
    const int code = nslab_run_exit_code(run);
    if (*nslab_run_error(run)) std::fprintf(stderr, "nslab: %s\n", nslab_run_error(run));
    std::printf("manifest: %s/manifest.json (%.2f s)\n", nslab_config_output_dir(cfg), nslab_run_wall_seconds(run));
    nslab_run_free(run);
    nslab_config_free(cfg);
    return code;
}
