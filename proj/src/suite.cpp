#include "dirichlet/suite.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace dirichlet {

namespace {

std::string where(const YAML::Node& node) {
    const YAML::Mark m = node.Mark();
    return m.is_null() ? std::string("config") : "line " + std::to_string(m.line + 1);
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
    throw ConfigError(where(node) + ": " + what);
}

void only_keys(const YAML::Node& map, std::initializer_list<const char*> allowed, const std::string& context) {
    if (!map.IsMap()) fail(map, context + " must be a mapping");
    for (const auto& kv : map) {
        const std::string key = kv.first.as<std::string>();
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            std::string list;
            for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
            fail(kv.first, "unknown key '" + key + "' in " + context + " (allowed: " + list + ")");
        }
    }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& name) {
    if (!node.IsScalar()) fail(node, "'" + name + "' must be a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(node, "'" + name + "' has the wrong type");
    }
}

std::vector<double> numbers(const YAML::Node& node, const std::string& name) {
    if (!node.IsSequence()) fail(node, "'" + name + "' must be a list of numbers");
    std::vector<double> out;
    for (const auto& v : node) out.push_back(scalar<double>(v, name));
    return out;
}

BoundarySpec parse_boundary(const YAML::Node& node) {
    if (!node.IsMap() || !node["type"]) fail(node, "boundary needs a 'type' (fourier, zonal, gaussian, sampled)");
    const std::string type = scalar<std::string>(node["type"], "type");
    if (type == "fourier") {
        only_keys(node, {"type", "a0", "terms"}, "fourier boundary");
        CircleFourier c;
        if (node["a0"]) c.a0 = scalar<double>(node["a0"], "a0");
        if (node["terms"]) {
            if (!node["terms"].IsSequence()) fail(node["terms"], "'terms' must be a list");
            for (const auto& t : node["terms"]) {
                only_keys(t, {"k", "a", "b"}, "fourier term");
                if (!t["k"]) fail(t, "fourier term needs 'k'");
                CircleFourier::Term term;
                term.k = scalar<int>(t["k"], "k");
                if (t["a"]) term.a = scalar<double>(t["a"], "a");
                if (t["b"]) term.b = scalar<double>(t["b"], "b");
                c.terms.push_back(term);
            }
        }
        return c;
    }
    if (type == "zonal") {
        only_keys(node, {"type", "n", "pole", "gamma"}, "zonal boundary");
        ZonalGegenbauer z;
        if (!node["n"] || !node["gamma"]) fail(node, "zonal boundary needs 'n' and 'gamma'");
        z.n = scalar<int>(node["n"], "n");
        z.gamma = numbers(node["gamma"], "gamma");
        if (node["pole"]) z.pole = numbers(node["pole"], "pole");
        return z;
    }
    if (type == "gaussian") {
        only_keys(node, {"type", "n", "terms"}, "gaussian boundary");
        GaussianFamily g;
        if (!node["n"]) fail(node, "gaussian boundary needs 'n'");
        g.n = scalar<int>(node["n"], "n");
        if (node["terms"]) {
            if (!node["terms"].IsSequence()) fail(node["terms"], "'terms' must be a list");
            for (const auto& t : node["terms"]) {
                only_keys(t, {"amplitude", "center", "width", "frequency"}, "gaussian term");
                GaussianFamily::Term term;
                if (t["amplitude"]) term.amplitude = scalar<double>(t["amplitude"], "amplitude");
                if (t["center"]) term.center = numbers(t["center"], "center");
                if (t["width"]) term.width = scalar<double>(t["width"], "width");
                if (t["frequency"]) term.frequency = numbers(t["frequency"], "frequency");
                g.terms.push_back(term);
            }
        }
        return g;
    }
    if (type == "sampled") {
        only_keys(node, {"type", "domain", "samples"}, "sampled boundary");
        SampledGrid s;
        s.domain = node["domain"] ? scalar<std::string>(node["domain"], "domain") : "circle";
        if (!node["samples"]) fail(node, "sampled boundary needs 'samples'");
        s.samples = numbers(node["samples"], "samples");
        return s;
    }
    fail(node["type"], "unknown boundary type '" + type + "' (expected fourier, zonal, gaussian, sampled)");
}

quad::SingularSchedule parse_schedule(const YAML::Node& node) {
    only_keys(node, {"radii", "order"}, "schedule");
    quad::SingularSchedule s = quad::SingularSchedule::standard();
    if (node["radii"]) s.radii = numbers(node["radii"], "radii");
    if (node["order"]) s.order = scalar<int>(node["order"], "order");
    try {
        s.validate();
    } catch (const std::exception& e) {
        fail(node, e.what());
    }
    return s;
}

VerifyRequest parse_case(const YAML::Node& node) {
    only_keys(node, {"id", "function", "geometry", "boundary", "forms", "field", "tolerance", "level", "schedule"},
              "case");
    if (!node["id"]) fail(node, "case needs an 'id'");
    const std::string id = scalar<std::string>(node["id"], "id");
    const auto corpus = corpus_ids();
    auto in_corpus = [&](const std::string& s) { return std::find(corpus.begin(), corpus.end(), s) != corpus.end(); };

    VerifyRequest req;
    bool have_base = false;
    if (node["function"]) {
        const std::string fn = scalar<std::string>(node["function"], "function");
        if (!in_corpus(fn)) fail(node["function"], "unknown corpus function '" + fn + "'");
        req = corpus_case(fn);
        have_base = true;
    } else if (!node["boundary"] && in_corpus(id)) {
        req = corpus_case(id);
        have_base = true;
    }
    req.case_id = id;

    if (node["boundary"]) {
        if (node["function"]) fail(node["boundary"], "give either 'function' or 'boundary', not both");
        req.spec = parse_boundary(node["boundary"]);
        req.function_id = id;
        req.field.reset();
        have_base = true;
        if (!node["geometry"]) fail(node, "case with an inline boundary needs a 'geometry'");
    }
    if (!have_base) fail(node, "case '" + id + "' needs 'function' (a corpus id) or 'boundary'");

    try {
        if (node["geometry"]) req.geometry = Geometry::parse(scalar<std::string>(node["geometry"], "geometry"));
        if (node["forms"]) {
            if (!node["forms"].IsSequence()) fail(node["forms"], "'forms' must be a list");
            req.forms.clear();
            for (const auto& f : node["forms"]) {
                const Form form = parse_form(scalar<std::string>(f, "forms"));
                if (std::find(req.forms.begin(), req.forms.end(), form) != req.forms.end()) {
                    fail(f, "form '" + form_name(form) + "' listed twice");
                }
                req.forms.push_back(form);
            }
        } else if (node["boundary"]) {
            req.forms.clear();
            for (Form f : forms_for(req.geometry)) {
                if (is_identity_form(f) && f != Form::ahlfors && f != Form::transport) req.forms.push_back(f);
            }
        }
        if (node["field"]) req.field = scalar<std::string>(node["field"], "field");
        if (node["tolerance"]) req.tolerance = scalar<double>(node["tolerance"], "tolerance");
        if (node["level"]) req.level = scalar<int>(node["level"], "level");
        if (node["schedule"]) req.schedule = parse_schedule(node["schedule"]);
        if (req.level < 0) fail(node["level"], "level must be >= 0");
        check_request(req);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(node, "case '" + id + "': " + e.what());
    }
    return req;
}

std::string number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string json_report(const EnergyReport& r, bool timings) {
    std::ostringstream o;
    o << "  {\n";
    o << "    \"case\": " << quoted(r.case_id) << ",\n";
    o << "    \"geometry\": " << quoted(r.geometry.name()) << ",\n";
    o << "    \"functionId\": " << quoted(r.function_id) << ",\n";
    o << "    \"values\": {";
    bool first = true;
    for (const auto& [form, e] : r.values) {
        o << (first ? "\n" : ",\n") << "      " << quoted(form) << ": {\"value\": " << number(e.value)
          << ", \"error\": " << number(e.error) << "}";
        first = false;
    }
    o << (first ? "},\n" : "\n    },\n");
    o << "    \"maxPairwiseRelativeDeviation\": " << number(r.max_pairwise_relative_deviation) << ",\n";
    if (r.ahlfors_series_ratio) o << "    \"ahlforsSeriesRatio\": " << number(*r.ahlfors_series_ratio) << ",\n";
    if (!r.failures.empty()) {
        o << "    \"errors\": [";
        for (std::size_t i = 0; i < r.failures.size(); ++i) o << (i ? ", " : "") << quoted(r.failures[i]);
        o << "],\n";
    }
    o << "    \"pass\": " << (r.pass ? "true" : "false") << ",\n";
    o << "    \"timings\": {";
    if (timings) {
        first = true;
        for (const auto& [form, t] : r.timings) {
            o << (first ? "" : ", ") << quoted(form) << ": " << number(t);
            first = false;
        }
    }
    o << "}\n  }";
    return o.str();
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    throw ConfigError("unknown output format '" + name + "' (expected json or csv)");
}

std::vector<std::string> corpus_ids() {
    return {"disk_douglas", "ball3_zonal_k2", "ball4_zonal_k2", "half1_gauss", "half2_gauss", "half3_gauss",
            "moebius_cos"};
}

VerifyRequest corpus_case(const std::string& id) {
    VerifyRequest r;
    r.case_id = id;
    r.function_id = id;
    auto gaussian = [](int n) {
        GaussianFamily g;
        g.n = n;
        g.terms.push_back({});
        return g;
    };
    if (id == "disk_douglas") {
        CircleFourier c;
        c.terms = {{1, 3.0, 0.0}, {2, 1.0, 0.0}, {5, 0.0, -2.0}};
        r.geometry = Geometry::disk();
        r.spec = c;
        r.forms = {Form::gradient, Form::fourier, Form::double_integral, Form::ahlfors};
        r.tolerance = 1e-6;
    } else if (id == "moebius_cos") {
        CircleFourier c;
        c.terms = {{1, 1.0, 0.0}};
        r.geometry = Geometry::disk();
        r.spec = c;
        r.forms = {Form::gradient, Form::fourier, Form::double_integral, Form::ahlfors, Form::transport};
        r.tolerance = 1e-3;
    } else if (id == "ball3_zonal_k2") {
        ZonalGegenbauer z;
        z.n = 3;
        z.gamma = {0.0, 0.0, -2.0};
        r.geometry = Geometry::ball(3);
        r.spec = z;
        r.forms = {Form::gradient, Form::fourier, Form::double_integral, Form::ahlfors, Form::ahlfors_series};
        r.field = "ball3_k2";
        r.tolerance = 2e-2;
    } else if (id == "ball4_zonal_k2") {
        ZonalGegenbauer z;
        z.n = 4;
        z.gamma = {0.0, 0.0, -3.0};
        r.geometry = Geometry::quaternion_ball();
        r.spec = z;
        r.forms = {Form::gradient, Form::fourier, Form::double_integral, Form::ahlfors};
        r.field = "quat_k2";
        r.tolerance = 5e-2;
    } else if (id == "half1_gauss" || id == "half2_gauss" || id == "half3_gauss") {
        const int n = id[4] - '0';
        r.geometry = n == 3 ? Geometry::quaternion_halfspace() : Geometry::halfspace(n);
        r.spec = gaussian(n);
        r.forms = {Form::gradient, Form::fourier, Form::double_integral, Form::ahlfors};
        r.tolerance = 1e-2;
    } else {
        std::string list;
        for (const auto& c : corpus_ids()) list += (list.empty() ? "" : ", ") + c;
        throw ConfigError("unknown corpus case '" + id + "' (available: " + list + ")");
    }
    return r;
}

SuiteConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    SuiteConfig cfg;
    if (root.IsNull()) return cfg;
    only_keys(root, {"seed", "workers", "output", "cases"}, "suite");
    if (root["seed"]) cfg.seed = scalar<std::uint64_t>(root["seed"], "seed");
    if (root["workers"]) {
        cfg.workers = scalar<int>(root["workers"], "workers");
        if (cfg.workers < 0) fail(root["workers"], "workers must be >= 0");
    }
    if (root["output"]) {
        const YAML::Node out = root["output"];
        only_keys(out, {"format", "path", "timings"}, "output");
        if (out["format"]) {
            try {
                cfg.output.format = parse_report_format(scalar<std::string>(out["format"], "format"));
            } catch (const ConfigError& e) {
                fail(out["format"], e.what());
            }
        }
        if (out["path"]) cfg.output.path = scalar<std::string>(out["path"], "path");
        if (out["timings"]) cfg.output.timings = scalar<bool>(out["timings"], "timings");
    }
    if (root["cases"]) {
        const YAML::Node cases = root["cases"];
        if (cases.IsNull()) return cfg;
        if (!cases.IsSequence()) fail(cases, "'cases' must be a list");
        std::set<std::string> seen;
        for (const auto& c : cases) {
            VerifyRequest req = parse_case(c);
            if (!seen.insert(req.case_id).second) fail(c, "duplicate case id '" + req.case_id + "'");
            req.seed = cfg.seed;
            cfg.cases.push_back(std::move(req));
        }
    }
    return cfg;
}

SuiteConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error reading config '" + path + "'");
    return parse_config(buf.str());
}

std::vector<EnergyReport> run_suite(const SuiteConfig& cfg) {
    int workers = cfg.workers;
    if (const char* env = std::getenv("DIRICHLET_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) workers = static_cast<int>(v);
    }
    if (workers > 0) quad::set_worker_count(workers);
    std::vector<EnergyReport> reports(cfg.cases.size());
    quad::parallel_for(cfg.cases.size(), [&](std::size_t i) {
        try {
            reports[i] = verify_identities(cfg.cases[i]);
        } catch (const std::exception& e) {
            EnergyReport r;
            r.case_id = cfg.cases[i].case_id;
            r.geometry = cfg.cases[i].geometry;
            r.function_id = cfg.cases[i].function_id;
            r.failures.push_back(e.what());
            reports[i] = std::move(r);
        }
    });
    return reports;
}

std::string emit_report(const std::vector<EnergyReport>& reports, ReportFormat format, bool timings) {
    std::ostringstream o;
    if (format == ReportFormat::json) {
        o << "[";
        for (std::size_t i = 0; i < reports.size(); ++i) o << (i ? ",\n" : "\n") << json_report(reports[i], timings);
        o << (reports.empty() ? "]\n" : "\n]\n");
        return o.str();
    }
    o << "case,geometry,form,value,error_estimate,pass\n";
    for (const auto& r : reports) {
        for (const auto& [form, e] : r.values) {
            o << csv_field(r.case_id) << ',' << r.geometry.name() << ',' << form << ',' << number(e.value) << ','
              << number(e.error) << ',' << (r.pass ? "true" : "false") << '\n';
        }
    }
    return o.str();
}

std::string convergence_csv(const VerifyRequest& request, const std::vector<int>& levels) {
    if (levels.empty()) throw ConfigError("convergence needs at least one level");
    std::ostringstream o;
    o << "level,form,value,error_estimate\n";
    for (int level : levels) {
        if (level < 1) throw ConfigError("levels must be >= 1");
        VerifyRequest r = request;
        r.level = level;
        const EnergyReport rep = verify_identities(r);
        for (Form f : r.forms) {
            const auto it = rep.values.find(form_name(f));
            if (it == rep.values.end()) continue;
            o << level << ',' << it->first << ',' << number(it->second.value) << ',' << number(it->second.error)
              << '\n';
        }
    }
    return o.str();
}

int suite_exit_code(const std::vector<EnergyReport>& reports) {
    for (const auto& r : reports) {
        if (!r.pass) return 1;
    }
    return 0;
}

}  // namespace dirichlet
