#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "dirichlet/suite.hpp"

using namespace dirichlet;

namespace {

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
    const SuiteConfig cfg = parse_config("cases:\n  - id: disk_douglas\n");
    REQUIRE(cfg.cases.size() == 1);
    CHECK(cfg.seed == 0);
    CHECK(cfg.workers == 0);
    CHECK(cfg.output.format == ReportFormat::json);
    CHECK(cfg.output.path.empty());
    const VerifyRequest& r = cfg.cases[0];
    CHECK(r.geometry == Geometry::disk());
    CHECK(r.forms.size() == 4);
    CHECK(r.tolerance == 1e-6);
    CHECK(r.level == 0);
    CHECK(parse_config("").cases.empty());
}

TEST_CASE("case overrides and inline boundaries") {
    const SuiteConfig cfg = parse_config(R"(seed: 9
workers: 3
output: {format: csv, path: out.csv, timings: true}
cases:
  - id: quick_half
    function: half1_gauss
    forms: [fourier, double]
    tolerance: 0.05
    level: 2
    schedule: {radii: [0.08, 0.04, 0.02, 0.01], order: 3}
  - id: mine
    geometry: half2
    boundary:
      type: gaussian
      n: 2
      terms:
        - {amplitude: 2, center: [0.5, 0.0], width: 0.5, frequency: [0.0, 1.0]}
  - id: samples
    geometry: disk
    boundary: {type: sampled, samples: [1, 0, -1, 0, 1, 0, -1, 0]}
    forms: [gradient, fourier]
)");
    CHECK(cfg.seed == 9);
    CHECK(cfg.workers == 3);
    CHECK(cfg.output.format == ReportFormat::csv);
    CHECK(cfg.output.path == "out.csv");
    CHECK(cfg.output.timings);
    REQUIRE(cfg.cases.size() == 3);
    CHECK(cfg.cases[0].function_id == "half1_gauss");
    CHECK(cfg.cases[0].forms == std::vector<Form>{Form::fourier, Form::double_integral});
    CHECK(cfg.cases[0].schedule.order == 3);
    CHECK(cfg.cases[0].seed == 9);
    CHECK(cfg.cases[1].geometry == Geometry::halfspace(2));
    CHECK(std::holds_alternative<GaussianFamily>(cfg.cases[1].spec));
    CHECK(cfg.cases[1].forms == std::vector<Form>{Form::gradient, Form::fourier, Form::double_integral});
    CHECK(std::holds_alternative<SampledGrid>(cfg.cases[2].spec));
}

TEST_CASE("config errors carry line context") {
    const std::string ahlfors = config_error(R"(cases:
  - id: b3
    geometry: ball3
    boundary: {type: zonal, n: 3, gamma: [0, 0, -2]}
    forms: [gradient, ahlfors]
)");
    CHECK(ahlfors.find("line 2") != std::string::npos);
    CHECK(ahlfors.find("catalog field") != std::string::npos);

    const std::string dup = config_error("cases:\n  - id: disk_douglas\n  - id: disk_douglas\n");
    CHECK(dup.find("line 3") != std::string::npos);
    CHECK(dup.find("duplicate") != std::string::npos);

    const std::string unknown = config_error("cases:\n  - id: disk_douglas\n    tolerence: 1\n");
    CHECK(unknown.find("line 3") != std::string::npos);
    CHECK(unknown.find("tolerence") != std::string::npos);

    CHECK(config_error("cases: [\n").find("line") != std::string::npos);
    CHECK(config_error("verbose: true\n").find("unknown key") != std::string::npos);
    CHECK(config_error("cases:\n  - id: x\n    function: nowhere\n").find("unknown corpus") != std::string::npos);
    CHECK(config_error("cases:\n  - id: x\n").find("needs 'function'") != std::string::npos);
    CHECK(!config_error("cases:\n  - id: disk_douglas\n    tolerance: -1\n").empty());
    CHECK(!config_error("cases:\n  - id: disk_douglas\n    forms: [ahlforsSeries]\n").empty());
    CHECK(!config_error("cases:\n  - id: disk_douglas\n    forms: [gradient, gradient]\n").empty());
    CHECK(!config_error("output: {format: xml}\n").empty());
    CHECK(!config_error("cases:\n  - id: x\n    geometry: disk\n    boundary: {type: zonal, n: 3, gamma: [1]}\n").empty());
    CHECK(!config_error("cases:\n  - id: half1_gauss\n    schedule: {radii: [0.1, 0.2, 0.3]}\n").empty());
    CHECK_THROWS_AS(load_config("/nonexistent/suite.yaml"), IoError);
}

TEST_CASE("corpus") {
    for (const auto& id : corpus_ids()) {
        const VerifyRequest r = corpus_case(id);
        CHECK_NOTHROW(check_request(r));
    }
    CHECK(corpus_case("half3_gauss").geometry == Geometry::quaternion_halfspace());
    CHECK(corpus_case("ball4_zonal_k2").geometry == Geometry::quaternion_ball());
    CHECK_THROWS_AS(corpus_case("nope"), ConfigError);
}

TEST_CASE("run suite keeps config order and reports") {
    CHECK(run_suite(SuiteConfig{}).empty());
    CHECK(suite_exit_code({}) == 0);

    SuiteConfig cfg = parse_config(R"(workers: 2
cases:
  - id: moebius_cos
  - id: disk_douglas
  - id: ball3_zonal_k2
    forms: [gradient, fourier, double, ahlforsSeries]
)");
    const auto reports = run_suite(cfg);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].case_id == "moebius_cos");
    CHECK(reports[1].case_id == "disk_douglas");
    CHECK(reports[1].pass);
    CHECK(reports[1].values.size() == 4);
    CHECK(reports[2].pass);
    CHECK(*reports[2].ahlfors_series_ratio == doctest::Approx(0.75));
    CHECK(suite_exit_code(reports) == 0);

    cfg.cases[1].tolerance = 1e-15;
    const auto failing = run_suite(cfg);
    CHECK_FALSE(failing[1].pass);
    CHECK(suite_exit_code(failing) == 1);
}

TEST_CASE("worker override from the environment") {
    SuiteConfig cfg = parse_config("workers: 1\ncases:\n  - id: disk_douglas\n");
    setenv("DIRICHLET_WORKERS", "3", 1);
    run_suite(cfg);
    CHECK(quad::worker_count() == 3);
    unsetenv("DIRICHLET_WORKERS");
    run_suite(cfg);
    CHECK(quad::worker_count() == 1);
    quad::set_worker_count(0);
}

TEST_CASE("emitted reports") {
    const auto reports = run_suite(parse_config("cases:\n  - id: disk_douglas\n  - id: ball3_zonal_k2\n"));
    const std::string json = emit_report(reports, ReportFormat::json);
    CHECK(json == emit_report(reports, ReportFormat::json));

    const auto doc = nlohmann::json::parse(json);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 2);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& o = doc[i];
        CHECK(o["case"] == reports[i].case_id);
        CHECK(o["geometry"] == reports[i].geometry.name());
        CHECK(o["functionId"] == reports[i].function_id);
        CHECK(o["pass"] == reports[i].pass);
        CHECK(o["maxPairwiseRelativeDeviation"].get<double>() == reports[i].max_pairwise_relative_deviation);
        CHECK(o["timings"].empty());
        for (const auto& [form, e] : reports[i].values) {
            CHECK(o["values"][form]["value"].get<double>() == e.value);
            CHECK(o["values"][form]["error"].get<double>() == e.error);
        }
    }
    CHECK(doc[1]["ahlforsSeriesRatio"].get<double>() == *reports[1].ahlfors_series_ratio);
    CHECK(doc[0].find("ahlforsSeriesRatio") == doc[0].end());

    const auto timed = nlohmann::json::parse(emit_report(reports, ReportFormat::json, true));
    CHECK(timed[0]["timings"].size() == 4);

    const std::string csv = emit_report(reports, ReportFormat::csv);
    CHECK(csv.rfind("case,geometry,form,value,error_estimate,pass\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 + 5);
    CHECK(csv.find("disk_douglas,disk,gradient,97.38937226128") != std::string::npos);
    CHECK(emit_report({}, ReportFormat::json) == "[]\n");
}

TEST_CASE("failed reports list their errors") {
    EnergyReport r;
    r.case_id = "x\"y";
    r.function_id = "f";
    r.failures.push_back("double: schedule too coarse");
    const auto doc = nlohmann::json::parse(emit_report({r}, ReportFormat::json));
    CHECK(doc[0]["case"] == "x\"y");
    CHECK(doc[0]["errors"][0] == "double: schedule too coarse");
    CHECK(doc[0]["pass"] == false);
}

TEST_CASE("convergence table") {
    VerifyRequest r = corpus_case("half1_gauss");
    r.forms = {Form::gradient, Form::fourier};
    const std::string csv = convergence_csv(r, {1, 2});
    CHECK(csv.rfind("level,form,value,error_estimate\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK_THROWS_AS(convergence_csv(r, {}), ConfigError);
    CHECK_THROWS_AS(convergence_csv(r, {0}), ConfigError);
}
