// Command-line front end; talks to the library through the C interface only.

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "dirichlet/dirichlet.h"

namespace {

int report_error(dirichlet_status status) {
    std::fprintf(stderr, "dirichlet-cli: %s\n", dirichlet_last_error());
    return static_cast<int>(status);
}

// Maps library statuses onto the documented exit codes 0..3.
int exit_code(dirichlet_status status) {
    switch (status) {
    case DIRICHLET_OK: return 0;
    case DIRICHLET_TOLERANCE_FAILURE: return 1;
    case DIRICHLET_IO_ERROR: return 3;
    case DIRICHLET_NUMERICAL_ERROR: return 1;
    default: return 2;
    }
}

int fail(dirichlet_status status) {
    report_error(status);
    return exit_code(status);
}

int write_stdout(const char* text, size_t length) {
    if (std::fwrite(text, 1, length, stdout) != length || std::fflush(stdout) != 0) {
        std::fprintf(stderr, "dirichlet-cli: error writing standard output\n");
        return 3;
    }
    return 0;
}

int run(dirichlet_suite* suite, int workers) {
    if (workers > 0) dirichlet_suite_set_workers(suite, workers);
    dirichlet_format format = DIRICHLET_FORMAT_JSON;
    const char* path = "";
    int timings = 0;
    dirichlet_suite_output(suite, &format, &path, &timings);

    dirichlet_results* results = nullptr;
    dirichlet_status st = dirichlet_suite_run(suite, &results);
    if (st != DIRICHLET_OK) return fail(st);

    int code = 0;
    if (path && *path) {
        st = dirichlet_results_write(results, format, timings, path);
        if (st != DIRICHLET_OK) code = fail(st);
    } else {
        char* text = nullptr;
        size_t length = 0;
        st = dirichlet_results_emit(results, format, timings, &text, &length);
        if (st != DIRICHLET_OK) {
            code = fail(st);
        } else {
            code = write_stdout(text, length);
            dirichlet_string_free(text);
        }
    }
    if (code == 0) {
        st = dirichlet_results_status(results);
        if (st != DIRICHLET_OK) {
            std::fprintf(stderr, "dirichlet-cli: %s\n", dirichlet_last_error());
            code = exit_code(st);
        }
    }
    dirichlet_results_destroy(results);
    return code;
}

std::vector<int> parse_levels(const std::string& csv) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t next = csv.find(',', pos);
        const std::string item = csv.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (!item.empty()) {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirichlet energy identity verification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dirichlet_version()));

    int workers = 0;
    app.add_option("--workers", workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    auto* verify = app.add_subcommand("verify", "Run a suite config or a single corpus case");
    std::string config, case_id, forms, out, format;
    int level = 0;
    auto* config_opt = verify->add_option("--config", config, "YAML suite configuration");
    auto* case_opt = verify->add_option("--case", case_id, "Corpus case id");
    config_opt->excludes(case_opt);
    verify->add_option("--forms", forms, "Comma-separated forms")->needs(case_opt);
    verify->add_option("--level", level, "Resolution level (0: defaults)")->needs(case_opt)->check(CLI::NonNegativeNumber);
    verify->add_option("--out", out, "Output path (default: standard output)");
    verify->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* convergence = app.add_subcommand("convergence", "Value against resolution level for a corpus case");
    std::string conv_case, levels_csv, conv_forms, conv_out;
    convergence->add_option("--case", conv_case, "Corpus case id")->required();
    convergence->add_option("--levels", levels_csv, "Comma-separated levels, e.g. 1,2,3")->required();
    convergence->add_option("--forms", conv_forms, "Comma-separated forms");
    convergence->add_option("--out", conv_out, "Output path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (verify->parsed()) {
        if (config.empty() && case_id.empty()) {
            std::fprintf(stderr, "dirichlet-cli: verify needs --config or --case\n");
            return 2;
        }
        dirichlet_suite* suite = nullptr;
        const dirichlet_status st = config.empty()
                                        ? dirichlet_suite_from_case(case_id.c_str(), forms.c_str(), level, &suite)
                                        : dirichlet_suite_load(config.c_str(), &suite);
        if (st != DIRICHLET_OK) return fail(st);
        if (!format.empty() || !out.empty()) {
            dirichlet_format f = DIRICHLET_FORMAT_JSON;
            const char* path = "";
            dirichlet_suite_output(suite, &f, &path, nullptr);
            if (!format.empty()) f = format == "csv" ? DIRICHLET_FORMAT_CSV : DIRICHLET_FORMAT_JSON;
            const std::string p = out.empty() ? std::string(path) : out;
            dirichlet_suite_set_output(suite, f, p.c_str());
        }
        const int code = run(suite, workers);
        dirichlet_suite_destroy(suite);
        return code;
    }

    std::vector<int> levels;
    try {
        levels = parse_levels(levels_csv);
    } catch (const std::exception&) {
        std::fprintf(stderr, "dirichlet-cli: --levels must be comma-separated integers\n");
        return 2;
    }
    char* text = nullptr;
    size_t length = 0;
    const dirichlet_status st = dirichlet_convergence_csv(conv_case.c_str(), conv_forms.c_str(), levels.data(),
                                                          levels.size(), &text, &length);
    if (st != DIRICHLET_OK) return fail(st);
    int code = 0;
    if (conv_out.empty()) {
        code = write_stdout(text, length);
    } else if (std::FILE* f = std::fopen(conv_out.c_str(), "wb")) {
        const bool ok = std::fwrite(text, 1, length, f) == length;
        if (std::fclose(f) != 0 || !ok) code = 3;
    } else {
        code = 3;
    }
    if (code == 3 && !conv_out.empty()) std::fprintf(stderr, "dirichlet-cli: cannot write '%s'\n", conv_out.c_str());
    dirichlet_string_free(text);
    return code;
}
