#include "dirichlet/dirichlet.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <sstream>

#include "dirichlet/suite.hpp"

struct dirichlet_suite {
    dirichlet::SuiteConfig config;
};

struct dirichlet_results {
    std::vector<dirichlet::EnergyReport> reports;
};

namespace {

thread_local std::string t_last_error;

dirichlet_status set_error(dirichlet_status status, const std::string& message) {
    t_last_error = message;
    return status;
}

// Maps exceptions from the core onto status codes.
template <class F>
dirichlet_status guarded(F&& body) {
    t_last_error.clear();
    try {
        return body();
    } catch (const dirichlet::ConfigError& e) {
        return set_error(DIRICHLET_CONFIG_ERROR, e.what());
    } catch (const dirichlet::IoError& e) {
        return set_error(DIRICHLET_IO_ERROR, e.what());
    } catch (const std::invalid_argument& e) {
        return set_error(DIRICHLET_CONFIG_ERROR, e.what());
    } catch (const std::bad_alloc&) {
        return set_error(DIRICHLET_NUMERICAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return set_error(DIRICHLET_NUMERICAL_ERROR, e.what());
    } catch (...) {
        return set_error(DIRICHLET_NUMERICAL_ERROR, "unknown error");
    }
}

std::vector<dirichlet::Form> parse_forms(const char* csv) {
    std::vector<dirichlet::Form> forms;
    std::stringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) forms.push_back(dirichlet::parse_form(item));
    }
    if (forms.empty()) throw dirichlet::ConfigError("empty form list");
    return forms;
}

dirichlet::VerifyRequest corpus_request(const char* case_id, const char* forms_csv, int level) {
    if (!case_id) throw dirichlet::ConfigError("missing case id");
    dirichlet::VerifyRequest req = dirichlet::corpus_case(case_id);
    if (forms_csv && *forms_csv) req.forms = parse_forms(forms_csv);
    if (level < 0) throw dirichlet::ConfigError("level must be >= 0");
    req.level = level;
    dirichlet::check_request(req);
    return req;
}

dirichlet::ReportFormat to_format(dirichlet_format f) {
    if (f == DIRICHLET_FORMAT_JSON) return dirichlet::ReportFormat::json;
    if (f == DIRICHLET_FORMAT_CSV) return dirichlet::ReportFormat::csv;
    throw dirichlet::ConfigError("unknown report format");
}

char* copy_string(const std::string& s, size_t* length) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    if (length) *length = s.size();
    return out;
}

}  // namespace

extern "C" {

const char* dirichlet_version(void) { return "0.1.0"; }

const char* dirichlet_last_error(void) { return t_last_error.c_str(); }

dirichlet_status dirichlet_suite_parse(const char* text, size_t length, dirichlet_suite** out) {
    return guarded([&] {
        if (!out || (!text && length)) return set_error(DIRICHLET_INVALID_ARGUMENT, "null argument");
        *out = nullptr;
        auto suite = std::make_unique<dirichlet_suite>();
        suite->config = dirichlet::parse_config(std::string(text ? text : "", length));
        *out = suite.release();
        return DIRICHLET_OK;
    });
}

dirichlet_status dirichlet_suite_load(const char* path, dirichlet_suite** out) {
    return guarded([&] {
        if (!out || !path) return set_error(DIRICHLET_INVALID_ARGUMENT, "null argument");
        *out = nullptr;
        auto suite = std::make_unique<dirichlet_suite>();
        suite->config = dirichlet::load_config(path);
        *out = suite.release();
        return DIRICHLET_OK;
    });
}

dirichlet_status dirichlet_suite_from_case(const char* case_id, const char* forms_csv, int level,
                                           dirichlet_suite** out) {
    return guarded([&] {
        if (!out) return set_error(DIRICHLET_INVALID_ARGUMENT, "null argument");
        *out = nullptr;
        auto suite = std::make_unique<dirichlet_suite>();
        suite->config.cases.push_back(corpus_request(case_id, forms_csv, level));
        *out = suite.release();
        return DIRICHLET_OK;
    });
}

dirichlet_status dirichlet_suite_set_workers(dirichlet_suite* suite, int workers) {
    if (!suite || workers < 0) return set_error(DIRICHLET_INVALID_ARGUMENT, "invalid worker count");
    suite->config.workers = workers;
    return DIRICHLET_OK;
}

dirichlet_status dirichlet_suite_output(const dirichlet_suite* suite, dirichlet_format* format, const char** path,
                                        int* timings) {
    if (!suite) return set_error(DIRICHLET_INVALID_ARGUMENT, "null suite");
    const auto& o = suite->config.output;
    if (format) *format = o.format == dirichlet::ReportFormat::csv ? DIRICHLET_FORMAT_CSV : DIRICHLET_FORMAT_JSON;
    if (path) *path = o.path.c_str();
    if (timings) *timings = o.timings ? 1 : 0;
    return DIRICHLET_OK;
}

dirichlet_status dirichlet_suite_set_output(dirichlet_suite* suite, dirichlet_format format, const char* path) {
    return guarded([&] {
        if (!suite) return set_error(DIRICHLET_INVALID_ARGUMENT, "null suite");
        suite->config.output.format = to_format(format);
        suite->config.output.path = path ? path : "";
        return DIRICHLET_OK;
    });
}

size_t dirichlet_suite_case_count(const dirichlet_suite* suite) { return suite ? suite->config.cases.size() : 0; }

void dirichlet_suite_destroy(dirichlet_suite* suite) { delete suite; }

dirichlet_status dirichlet_suite_run(const dirichlet_suite* suite, dirichlet_results** out) {
    return guarded([&] {
        if (!suite || !out) return set_error(DIRICHLET_INVALID_ARGUMENT, "null argument");
        *out = nullptr;
        auto results = std::make_unique<dirichlet_results>();
        results->reports = dirichlet::run_suite(suite->config);
        *out = results.release();
        return DIRICHLET_OK;
    });
}

size_t dirichlet_results_count(const dirichlet_results* results) { return results ? results->reports.size() : 0; }

dirichlet_status dirichlet_results_status(const dirichlet_results* results) {
    if (!results) return set_error(DIRICHLET_INVALID_ARGUMENT, "null results");
    if (dirichlet::suite_exit_code(results->reports) == 0) return DIRICHLET_OK;
    std::string msg;
    for (const auto& r : results->reports) {
        if (!r.pass) msg += (msg.empty() ? "" : "; ") + r.case_id;
    }
    return set_error(DIRICHLET_TOLERANCE_FAILURE, "failing cases: " + msg);
}

dirichlet_status dirichlet_results_emit(const dirichlet_results* results, dirichlet_format format, int timings,
                                        char** text, size_t* length) {
    return guarded([&] {
        if (!results || !text) return set_error(DIRICHLET_INVALID_ARGUMENT, "null argument");
        *text = copy_string(dirichlet::emit_report(results->reports, to_format(format), timings != 0), length);
        return DIRICHLET_OK;
    });
}

dirichlet_status dirichlet_results_write(const dirichlet_results* results, dirichlet_format format, int timings,
                                         const char* path) {
    return guarded([&] {
        if (!results || !path) return set_error(DIRICHLET_INVALID_ARGUMENT, "null argument");
        const std::string text = dirichlet::emit_report(results->reports, to_format(format), timings != 0);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw dirichlet::IoError(std::string("cannot open '") + path + "' for writing");
        out << text;
        out.flush();
        if (!out) throw dirichlet::IoError(std::string("error writing '") + path + "'");
        return DIRICHLET_OK;
    });
}

void dirichlet_results_destroy(dirichlet_results* results) { delete results; }

dirichlet_status dirichlet_convergence_csv(const char* case_id, const char* forms_csv, const int* levels,
                                           size_t level_count, char** text, size_t* length) {
    return guarded([&] {
        if (!text || (!levels && level_count)) return set_error(DIRICHLET_INVALID_ARGUMENT, "null argument");
        const dirichlet::VerifyRequest req = corpus_request(case_id, forms_csv, 0);
        const std::vector<int> lv(levels, levels + level_count);
        *text = copy_string(dirichlet::convergence_csv(req, lv), length);
        return DIRICHLET_OK;
    });
}

void dirichlet_string_free(char* text) { std::free(text); }

}  // extern "C"
