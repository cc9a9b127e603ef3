// Command-line front end; talks to libzeroone strictly through the C API.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "zeroone.h"

namespace {

int exit_code_for(zo_status st) {
    switch (st) {
        case ZO_OK: return 0;
        case ZO_ERR_PARSE: return 2;
        case ZO_ERR_HYPOTHESIS: return 3;
        default: return 1;
    }
}

int report_error(zo_status st) {
    std::fprintf(stderr, "error: %s\n", zo_last_error());
    return exit_code_for(st);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zeroone: weight calculus and Monte Carlo suites for sparse random relational structures"};
    app.require_subcommand(1);

    // run
    std::string spec_path, out_dir;
    uint64_t seed = 0;
    int trials = 0, universe = 0;
    bool have_seed = false;
    auto* run = app.add_subcommand("run", "execute an experiment spec file");
    run->add_option("spec", spec_path, "experiment spec file")->required();
    run->add_option("--out", out_dir, "directory for trials.jsonl, summary.csv, report.txt");
    run->add_option("--seed", seed, "override the spec seed")
        ->each([&](const std::string&) { have_seed = true; });
    run->add_option("--trials", trials, "override the trial count");
    run->add_option("--n", universe, "override the universe size");

    // catalog
    std::string catalog_kind;
    auto* cat = app.add_subcommand("catalog", "list built-in contexts, pairs, systems, quads");
    cat->add_option("kind", catalog_kind, "contexts|pairs|systems|quads|all")->required();

    // screen
    std::string ctx_path;
    int size_bound = 5;
    auto* scr = app.add_subcommand("screen", "irrationality screen over a context file");
    scr->add_option("context", ctx_path, "context file")->required();
    scr->add_option("--size-bound", size_bound, "largest structure size to enumerate");

    // validate
    std::string val_kind, val_path;
    bool print_normalized = false;
    auto* val = app.add_subcommand("validate", "parse and round-trip a data file");
    val->add_option("kind", val_kind, "structure|context|system|spec")->required();
    val->add_option("file", val_path, "file to validate")->required();
    val->add_flag("--print", print_normalized, "print the normalized form");

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        zo_spec* spec = nullptr;
        zo_status st = zo_spec_parse_file(spec_path.c_str(), &spec);
        if (st != ZO_OK) return report_error(st);
        if (have_seed) zo_spec_override_seed(spec, seed);
        if (run->count("--trials")) zo_spec_override_trials(spec, trials);
        if (run->count("--n")) zo_spec_override_n(spec, universe);
        zo_result* result = nullptr;
        st = zo_run(spec, &result);
        zo_spec_free(spec);
        if (st != ZO_OK) return report_error(st);
        const char* report = nullptr;
        zo_result_text(result, "report", &report);
        std::fputs(report, stdout);
        if (!out_dir.empty()) {
            st = zo_result_write(result, out_dir.c_str());
            if (st != ZO_OK) {
                zo_result_free(result);
                return report_error(st);
            }
            std::printf("outputs written to %s\n", out_dir.c_str());
        }
        int failed = zo_result_failed_checks(result);
        zo_result_free(result);
        return failed == 0 ? 0 : 1;
    }

    if (*cat) {
        char* listing = nullptr;
        zo_status st = zo_catalog(catalog_kind.c_str(), &listing);
        if (st != ZO_OK) {
            std::fprintf(stderr, "error: %s\n", zo_last_error());
            return 2;
        }
        std::fputs(listing, stdout);
        zo_string_free(listing);
        return 0;
    }

    if (*scr) {
        zo_context* ctx = nullptr;
        zo_status st = zo_context_parse_file(ctx_path.c_str(), &ctx);
        if (st != ZO_OK) return report_error(st);
        char* report = nullptr;
        st = zo_screen(ctx, size_bound, &report);
        zo_context_free(ctx);
        if (st != ZO_OK) return report_error(st);
        std::printf("%s\n", report);
        zo_string_free(report);
        return 0; // the screen reports, it does not fail
    }

    if (*val) {
        char* normalized = nullptr;
        zo_status st = zo_validate_file(val_kind.c_str(), val_path.c_str(), &normalized);
        if (st != ZO_OK) return report_error(st);
        if (print_normalized) std::fputs(normalized, stdout);
        else std::printf("ok: %s\n", val_path.c_str());
        zo_string_free(normalized);
        return 0;
    }

    return 0;
}
