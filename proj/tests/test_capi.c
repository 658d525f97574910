/* Exercises the C interface from plain C. Argument: scratch output directory. */
#include "nslab/nslab.h"

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                \
        }                                                              \
    } while (0)

static void test_registry(void) {
    EXPECT(strlen(nslab_version()) > 0);
    EXPECT(nslab_experiment_count() == 8);
    EXPECT(strcmp(nslab_experiment_name(0), "solve") == 0);
    EXPECT(nslab_experiment_name(8) == NULL);
    EXPECT(nslab_experiment_name(-1) == NULL);
}

static void test_config_errors(void) {
    nslab_config* cfg = NULL;
    EXPECT(nslab_config_parse("experiment = solve\ngrid.M = 3\n", &cfg) == NSLAB_ERR_CONFIG);
    EXPECT(cfg == NULL);
    EXPECT(strstr(nslab_last_error(), "grid.M") != NULL);
    EXPECT(nslab_config_load("/nonexistent/x.cfg", &cfg) == NSLAB_ERR_CONFIG);
    EXPECT(nslab_config_parse(NULL, &cfg) == NSLAB_ERR_ARGUMENT);
    EXPECT(nslab_config_parse("experiment = solve\ndata.kind = shear\n", NULL) == NSLAB_ERR_ARGUMENT);

    EXPECT(nslab_config_parse("experiment = solve\ndata.kind = shear\n", &cfg) == NSLAB_OK);
    EXPECT(strcmp(nslab_config_experiment(cfg), "solve") == 0);
    EXPECT(nslab_config_set(cfg, "grid.N", "7") == NSLAB_ERR_CONFIG);
    EXPECT(nslab_config_set(cfg, "no.such.key", "1") == NSLAB_ERR_CONFIG);
    EXPECT(nslab_config_set(cfg, "output.dir", "elsewhere") == NSLAB_OK);
    EXPECT(strcmp(nslab_config_output_dir(cfg), "elsewhere") == 0);
    EXPECT(nslab_last_error()[0] == '\0');
    nslab_config_free(cfg);
    nslab_config_free(NULL);
}

static void test_run(const char* out) {
    nslab_config* cfg = NULL;
    nslab_run* run = NULL;
    size_t i, n;
    int saw_residual = 0, saw_manifest = 0;
    EXPECT(nslab_config_parse("experiment = solve\ngrid.N = 16\ndata.kind = shear\nsolver.dt = 1e-3\nT = 0.02\n", &cfg) ==
           NSLAB_OK);
    EXPECT(nslab_config_set(cfg, "output.dir", out) == NSLAB_OK);
    EXPECT(nslab_run_experiment(cfg, &run) == NSLAB_OK);
    EXPECT(nslab_run_exit_code(run) == 0);
    EXPECT(nslab_run_error(run)[0] == '\0');
    EXPECT(nslab_run_wall_seconds(run) >= 0.0);
    n = nslab_run_verdict_count(run);
    EXPECT(n >= 3);
    for (i = 0; i < n; ++i) {
        const char *label = NULL, *detail = NULL;
        int pass = 0;
        double value = 0, bound = 0;
        EXPECT(nslab_run_verdict(run, i, &label, &pass, &value, &bound, &detail) == NSLAB_OK);
        EXPECT(pass == 1);
        if (strcmp(label, "residual") == 0) saw_residual = 1;
    }
    EXPECT(saw_residual);
    EXPECT(nslab_run_verdict(run, n, NULL, NULL, NULL, NULL, NULL) == NSLAB_ERR_ARGUMENT);
    for (i = 0; i < nslab_run_file_count(run); ++i) {
        const char* path = NULL;
        uint64_t bytes = 0;
        EXPECT(nslab_run_file(run, i, &path, &bytes) == NSLAB_OK);
        EXPECT(bytes > 0);
        if (strcmp(path, "manifest.json") == 0) saw_manifest = 1;
    }
    (void)saw_manifest;
    EXPECT(nslab_run_file(run, 1000, NULL, NULL) == NSLAB_ERR_ARGUMENT);
    nslab_run_free(run);
    nslab_config_free(cfg);
}

static void test_fields(const char* out) {
    nslab_field *u = NULL, *v = NULL;
    char path[4096];
    double L = 0, a = 0, b = 0, div = 1;
    int N = 0;
    EXPECT(nslab_field_generate("random-band", 1.0, 16, 7, &u) == NSLAB_OK);
    EXPECT(nslab_field_grid(u, &L, &N) == NSLAB_OK);
    EXPECT(L == 1.0 && N == 16);
    EXPECT(nslab_field_norm(u, 0.0, &a) == NSLAB_OK);
    EXPECT(fabs(a - 1.0) < 1e-12);
    EXPECT(nslab_field_divergence(u, &div) == NSLAB_OK);
    EXPECT(div < 1e-12);
    snprintf(path, sizeof path, "%s/u.field", out);
    EXPECT(nslab_field_save(u, path) == NSLAB_OK);
    EXPECT(nslab_field_load(path, &v) == NSLAB_OK);
    EXPECT(nslab_field_norm(v, 1.0, &b) == NSLAB_OK);
    EXPECT(nslab_field_norm(u, 1.0, &a) == NSLAB_OK);
    EXPECT(a == b);
    EXPECT(nslab_field_generate("vortex", 1.0, 16, 7, &v) == NSLAB_ERR_ARGUMENT);
    EXPECT(nslab_field_generate("shear", 1.0, 15, 0, &v) == NSLAB_ERR_ARGUMENT);
    EXPECT(nslab_field_load("/nonexistent/u.field", &v) == NSLAB_ERR_IO);
    nslab_field_free(u);
    nslab_field_free(NULL);
}

int main(int argc, char** argv) {
    const char* out = argc > 1 ? argv[1] : "capi_out";
    test_registry();
    test_config_errors();
    test_run(out);
    test_fields(out);
    if (failures) fprintf(stderr, "%d C API check(s) failed\n", failures);
    else printf("C API checks passed\n");
    return failures ? 1 : 0;
}
