#pragma once

// Suite configuration, the built-in corpus and report emitters.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirichlet/energy.hpp"

namespace dirichlet {

/// Malformed or inconsistent configuration; the message carries the line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ReportFormat { json, csv };

ReportFormat parse_report_format(const std::string& name);

struct OutputSettings {
    ReportFormat format = ReportFormat::json;
    std::string path;    // empty: standard output
    bool timings = false;
};

struct SuiteConfig {
    std::uint64_t seed = 0;
    int workers = 0;    // 0: hardware concurrency
    OutputSettings output;
    std::vector<VerifyRequest> cases;
};

/// YAML document, keys:
///   seed, workers, output {format, path, timings},
///   cases [{id, function, geometry, boundary, forms, field, tolerance, level, schedule}].
/// A case whose id or function names a corpus entry inherits its settings.
SuiteConfig parse_config(const std::string& text);
SuiteConfig load_config(const std::string& path);

std::vector<std::string> corpus_ids();
/// Throws ConfigError for unknown ids.
VerifyRequest corpus_case(const std::string& id);

/// One report per case in config order. DIRICHLET_WORKERS overrides cfg.workers.
std::vector<EnergyReport> run_suite(const SuiteConfig& cfg);

std::string emit_report(const std::vector<EnergyReport>& reports, ReportFormat format, bool timings = false);

/// CSV "level,form,value,error_estimate" for the case at each level.
std::string convergence_csv(const VerifyRequest& request, const std::vector<int>& levels);

/// 0 when every report passes, 1 otherwise.
int suite_exit_code(const std::vector<EnergyReport>& reports);

}  // namespace dirichlet
