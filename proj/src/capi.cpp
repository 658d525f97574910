#include "nslab/nslab.h"

#include "divfree_localize.hpp"
#include "experiments.hpp"
#include "function_spaces.hpp"

#include <algorithm>
#include <exception>
#include <new>
#include <string>

struct nslab_config {
    nslab::ExperimentConfig cfg;
};

struct nslab_run {
    nslab::RunManifest manifest;
};

struct nslab_field {
    nslab::VectorField u;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

// Maps the active exception to a status code.
int translate() {
    try {
        throw;
    } catch (const nslab::ConfigError& e) {
        return fail(NSLAB_ERR_CONFIG, e.what());
    } catch (const nslab::NumericalAbort& e) {
        return fail(NSLAB_ERR_NUMERICAL, e.what());
    } catch (const nslab::ResolutionError& e) {
        return fail(NSLAB_ERR_NUMERICAL, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(NSLAB_ERR_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(NSLAB_ERR_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(NSLAB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(NSLAB_ERR_IO, e.what());
    } catch (...) {
        return fail(NSLAB_ERR_INTERNAL, "unknown error");
    }
}

template <class F>
int guarded(F&& f) {
    g_last_error.clear();
    try {
        f();
        return NSLAB_OK;
    } catch (...) {
        return translate();
    }
}

}  // namespace

extern "C" {

const char* nslab_version(void) { return nslab::code_version(); }

const char* nslab_last_error(void) { return g_last_error.c_str(); }

int nslab_experiment_count(void) { return int(nslab::experiment_names().size()); }

const char* nslab_experiment_name(int index) {
    const auto& n = nslab::experiment_names();
    if (index < 0 || index >= int(n.size())) return nullptr;
    return n[std::size_t(index)].c_str();
}

int nslab_config_load(const char* path, nslab_config** out) {
    if (!path || !out) return fail(NSLAB_ERR_ARGUMENT, "null argument");
    return guarded([&] { *out = new nslab_config{nslab::parse_config(path)}; });
}

int nslab_config_parse(const char* text, nslab_config** out) {
    if (!text || !out) return fail(NSLAB_ERR_ARGUMENT, "null argument");
    return guarded([&] { *out = new nslab_config{nslab::parse_config_text(text)}; });
}

int nslab_config_set(nslab_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return fail(NSLAB_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        const auto& keys = nslab::config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw nslab::ConfigError(std::string("override: unknown key '") + key + "'");
        cfg->cfg = nslab::with_override(cfg->cfg, key, value);
    });
}

const char* nslab_config_experiment(const nslab_config* cfg) { return cfg ? cfg->cfg.experiment.c_str() : nullptr; }

const char* nslab_config_output_dir(const nslab_config* cfg) { return cfg ? cfg->cfg.out_dir.c_str() : nullptr; }

void nslab_config_free(nslab_config* cfg) { delete cfg; }

int nslab_run_experiment(const nslab_config* cfg, nslab_run** out) {
    if (!cfg || !out) return fail(NSLAB_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        auto* r = new nslab_run{nslab::run(cfg->cfg)};
        if (!r->manifest.error.empty()) g_last_error = r->manifest.error;
        *out = r;
    });
}

int nslab_run_exit_code(const nslab_run* run) { return run ? run->manifest.exit_code : NSLAB_ERR_ARGUMENT; }

const char* nslab_run_error(const nslab_run* run) { return run ? run->manifest.error.c_str() : nullptr; }

double nslab_run_wall_seconds(const nslab_run* run) { return run ? run->manifest.wall_seconds : 0.0; }

size_t nslab_run_verdict_count(const nslab_run* run) { return run ? run->manifest.verdicts.size() : 0; }

int nslab_run_verdict(const nslab_run* run, size_t index, const char** label, int* pass, double* value, double* bound,
                      const char** detail) {
    if (!run) return fail(NSLAB_ERR_ARGUMENT, "null run");
    if (index >= run->manifest.verdicts.size()) return fail(NSLAB_ERR_ARGUMENT, "verdict index out of range");
    const auto& v = run->manifest.verdicts[index];
    if (label) *label = v.label.c_str();
    if (pass) *pass = v.pass ? 1 : 0;
    if (value) *value = v.value;
    if (bound) *bound = v.bound;
    if (detail) *detail = v.detail.c_str();
    return NSLAB_OK;
}

size_t nslab_run_file_count(const nslab_run* run) { return run ? run->manifest.files.size() : 0; }

int nslab_run_file(const nslab_run* run, size_t index, const char** path, uint64_t* bytes) {
    if (!run) return fail(NSLAB_ERR_ARGUMENT, "null run");
    if (index >= run->manifest.files.size()) return fail(NSLAB_ERR_ARGUMENT, "file index out of range");
    const auto& f = run->manifest.files[index];
    if (path) *path = f.path.c_str();
    if (bytes) *bytes = f.bytes;
    return NSLAB_OK;
}

void nslab_run_free(nslab_run* run) { delete run; }

int nslab_field_generate(const char* kind, double L, int N, uint64_t seed, nslab_field** out) {
    if (!kind || !out) return fail(NSLAB_ERR_ARGUMENT, "null argument");
    return guarded([&] {
        nslab::DataSpec spec;
        spec.kind = kind;
        spec.seed = seed;
        nslab::SpectralGrid g;
        g.L = L;
        g.N = N;
        *out = new nslab_field{nslab::generate_data(spec, g).u0};
    });
}

int nslab_field_load(const char* path, nslab_field** out) {
    if (!path || !out) return fail(NSLAB_ERR_ARGUMENT, "null argument");
    return guarded([&] { *out = new nslab_field{nslab::read_field(path)}; });
}

int nslab_field_save(const nslab_field* field, const char* path) {
    if (!field || !path) return fail(NSLAB_ERR_ARGUMENT, "null argument");
    return guarded([&] { nslab::write_field(path, field->u); });
}

int nslab_field_grid(const nslab_field* field, double* L, int* N) {
    if (!field) return fail(NSLAB_ERR_ARGUMENT, "null field");
    if (L) *L = field->u.grid().L;
    if (N) *N = field->u.grid().N;
    return NSLAB_OK;
}

int nslab_field_norm(const nslab_field* field, double s, double* out) {
    if (!field || !out) return fail(NSLAB_ERR_ARGUMENT, "null argument");
    return guarded([&] { *out = nslab::sobolev_norm(field->u, s); });
}

int nslab_field_divergence(const nslab_field* field, double* out) {
    if (!field || !out) return fail(NSLAB_ERR_ARGUMENT, "null argument");
    return guarded([&] { *out = nslab::divergence_l2(field->u); });
}

void nslab_field_free(nslab_field* field) { delete field; }

}  // extern "C"
