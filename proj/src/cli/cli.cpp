#include "phasecov/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "phasecov/error.hpp"
#include "phasecov/region.hpp"
#include "phasecov/serialization.hpp"

namespace phasecov {

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct Common {
    std::string out;
    std::string format;
    std::string config;
    double tol = kTolerance;
    int grid = 0;
    double t_max = 0.0;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("IOError", ErrorCategory::config, msg) {}
};

std::string fmt(double x) {
    if (x == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
    return s;
}

Json load_config(const std::string& path) {
    if (path.empty()) return Json::object();
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON (") + e.what() + ")");
    }
    if (!j.is_object()) throw ValidationError("config: top level must be an object");
    return j;
}

double config_number(const Json& cfg, const std::string& key) {
    const Json& v = cfg.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) throw ValidationError(key + ": expected a finite number");
    return v.get<double>();
}

int config_int(const Json& cfg, const std::string& key) {
    const Json& v = cfg.at(key);
    if (!v.is_number_integer()) throw ValidationError(key + ": expected an integer");
    return v.get<int>();
}

std::vector<double> config_numbers(const Json& cfg, const std::string& key) {
    const Json& v = cfg.at(key);
    if (!v.is_array()) throw ValidationError(key + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ValidationError(key + ": expected an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed) {
        if (format == a) return;
    }
    std::vector<std::string> names(allowed.begin(), allowed.end());
    throw ValidationError("format: '" + format + "' is not supported here (expected " + join(names, ", ") + ")");
}

void emit(const Common& common, const std::string& command, const std::vector<std::string>& args,
          const std::string& content, std::ostream& out) {
    if (common.out.empty()) {
        out << content;
        return;
    }
    {
        std::ofstream file(common.out, std::ios::binary);
        if (!file) throw IoError("out: cannot write '" + common.out + "'");
        file << content;
    }
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    const Json meta{{"schema", kSchema},     {"tool_version", kToolVersion}, {"command", command},
                    {"arguments", args},     {"format", common.format},      {"tolerance", common.tol},
                    {"threads", common.threads}, {"generated_at", stamp}};
    std::ofstream sidecar(common.out + ".meta.json", std::ios::binary);
    if (!sidecar) throw IoError("out: cannot write '" + common.out + ".meta.json'");
    sidecar << meta.dump(2) << "\n";
}

void add_common(CLI::App* cmd, Common& c, const char* default_format) {
    c.format = default_format;
    cmd->add_option("--out", c.out, "Write output to this path (plus a .meta.json sidecar)");
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}));
    cmd->add_option("--config", c.config, "JSON configuration file");
    cmd->add_option("--tol", c.tol, "Classification tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--grid", c.grid, "Grid steps (per axis for region scans, time points otherwise)");
    cmd->add_option("--t-max", c.t_max, "Time horizon")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------- region

struct RegionOptions {
    std::vector<double> lambda, lambda_z, t_z, point;
    std::vector<std::string> predicates;
    std::optional<double> slice_t_z;
    bool summary = false;
};

AxisRange axis_from(const std::vector<double>& v, const std::string& name) {
    if (v.size() != 3) throw ValidationError(name + ": expected min,max,steps");
    if (v[2] != std::floor(v[2])) throw ValidationError(name + ".steps: must be an integer");
    return {v[0], v[1], static_cast<int>(v[2])};
}

AxisRange axis_from_json(const Json& j, const std::string& name) {
    if (!j.is_object()) throw ValidationError(name + ": expected {min, max, steps}");
    AxisRange r;
    if (j.contains("min")) r.min = config_number(j, "min");
    if (j.contains("max")) r.max = config_number(j, "max");
    if (j.contains("steps")) {
        if (!j.at("steps").is_number_integer()) throw ValidationError(name + ".steps: expected an integer");
        r.steps = j.at("steps").get<int>();
    }
    return r;
}

std::string region_svg(const RegionScan& scan, double slice_t_z) {
    const ScanConfig& cfg = scan.config;
    int k = 0;
    for (int i = 1; i < cfg.t_z.steps; ++i) {
        if (std::abs(cfg.t_z.value(i) - slice_t_z) < std::abs(cfg.t_z.value(k) - slice_t_z)) k = i;
    }
    static const char* palette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2"};
    const int cell = 5, margin = 40;
    const int width = cfg.lambda.steps * cell, height = cfg.lambda_z.steps * cell;
    const int legend = 18 * static_cast<int>(cfg.predicates.size());
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width + 2 * margin + 160 << "\" height=\""
       << height + 2 * margin + legend << "\">\n";
    os << "<title>phasecov region slice t_z=" << fmt(cfg.t_z.value(k)) << "</title>\n";
    os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width << "\" height=\"" << height
       << "\" fill=\"#ffffff\" stroke=\"#333333\"/>\n";
    const auto nz = static_cast<std::size_t>(cfg.t_z.steps), ny = static_cast<std::size_t>(cfg.lambda_z.steps);
    for (std::size_t p = 0; p < cfg.predicates.size(); ++p) {
        os << "<g fill=\"" << palette[p % 6] << "\" fill-opacity=\"0.45\">\n";
        for (int i = 0; i < cfg.lambda.steps; ++i) {
            for (int j = 0; j < cfg.lambda_z.steps; ++j) {
                const std::size_t q = (static_cast<std::size_t>(i) * ny + static_cast<std::size_t>(j)) * nz +
                                      static_cast<std::size_t>(k);
                if (scan.status(q, p) == Status::fails) continue;
                os << "<rect x=\"" << margin + i * cell << "\" y=\"" << margin + (cfg.lambda_z.steps - 1 - j) * cell
                   << "\" width=\"" << cell << "\" height=\"" << cell << "\"/>\n";
            }
        }
        os << "</g>\n";
    }
    os << "<text x=\"" << margin + width / 2 << "\" y=\"" << margin + height + 28
       << "\" text-anchor=\"middle\" font-size=\"12\">lambda [" << fmt(cfg.lambda.min) << ", "
       << fmt(cfg.lambda.max) << "]</text>\n";
    os << "<text x=\"12\" y=\"" << margin + height / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 "
       << margin + height / 2 << ")\" text-anchor=\"middle\">lambda_z [" << fmt(cfg.lambda_z.min) << ", "
       << fmt(cfg.lambda_z.max) << "]</text>\n";
    for (std::size_t p = 0; p < cfg.predicates.size(); ++p) {
        const int y = margin + height + 44 + 18 * static_cast<int>(p);
        os << "<rect x=\"" << margin << "\" y=\"" << y - 10 << "\" width=\"12\" height=\"12\" fill=\""
           << palette[p % 6] << "\" fill-opacity=\"0.45\"/><text x=\"" << margin + 18 << "\" y=\"" << y
           << "\" font-size=\"12\">" << to_string(cfg.predicates[p]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string cmd_region(const Common& common, const RegionOptions& opt, const Json& cfg_json,
                       const std::function<bool(const char*)>& given) {
    ScanConfig cfg;
    if (cfg_json.contains("lambda")) cfg.lambda = axis_from_json(cfg_json.at("lambda"), "lambda");
    if (cfg_json.contains("lambda_z")) cfg.lambda_z = axis_from_json(cfg_json.at("lambda_z"), "lambda_z");
    if (cfg_json.contains("t_z")) cfg.t_z = axis_from_json(cfg_json.at("t_z"), "t_z");
    if (cfg_json.contains("predicates")) {
        cfg.predicates.clear();
        for (const auto& p : cfg_json.at("predicates")) {
            if (!p.is_string()) throw ValidationError("predicates: expected strings");
            cfg.predicates.push_back(predicate_from_string(p.get<std::string>()));
        }
    }
    std::optional<double> slice = opt.slice_t_z;
    if (!slice && cfg_json.contains("slice_t_z")) slice = config_number(cfg_json, "slice_t_z");

    if (given("--grid")) cfg.lambda.steps = cfg.lambda_z.steps = cfg.t_z.steps = common.grid;
    if (!opt.lambda.empty()) cfg.lambda = axis_from(opt.lambda, "lambda");
    if (!opt.lambda_z.empty()) cfg.lambda_z = axis_from(opt.lambda_z, "lambda_z");
    if (!opt.t_z.empty()) cfg.t_z = axis_from(opt.t_z, "t_z");
    if (!opt.predicates.empty()) {
        cfg.predicates.clear();
        for (const auto& p : opt.predicates) cfg.predicates.push_back(predicate_from_string(p));
    }

    std::vector<std::string> pred_names;
    for (Predicate p : cfg.predicates) pred_names.emplace_back(to_string(p));

    if (!opt.point.empty()) {
        if (opt.point.size() != 3) throw ValidationError("point: expected lambda,lambda_z,t_z");
        if (common.format == "svg") throw ValidationError("format: svg needs a grid scan, not a single point");
        const PhaseCovChannel ch(opt.point[0], opt.point[1], opt.point[2]);
        if (common.format == "json") {
            Json verdicts = Json::object();
            for (Predicate p : cfg.predicates) verdicts[std::string(to_string(p))] = to_json(evaluate(p, ch, common.tol));
            const Json j{{"schema", kSchema}, {"command", "region"}, {"channel", to_json(ch)}, {"verdicts", verdicts}};
            return j.dump(2) + "\n";
        }
        std::ostringstream os;
        os << "# phasecov/1 region columns=lambda,lambda_z,t_z," << join(pred_names, ",") << "\n";
        os << "lambda,lambda_z,t_z," << join(pred_names, ",") << "\n";
        os << fmt(ch.lambda()) << "," << fmt(ch.lambda_z()) << "," << fmt(ch.t_z());
        for (Predicate p : cfg.predicates) os << "," << to_string(evaluate(p, ch, common.tol).status);
        os << "\n";
        return os.str();
    }

    const RegionScan scan = scan_region(cfg, common.threads, common.tol);
    if (common.format == "svg") return region_svg(scan, slice.value_or(0.0));

    if (common.format == "json") {
        const auto counts = count_statuses(scan);
        Json jc = Json::object();
        for (std::size_t p = 0; p < counts.size(); ++p) {
            jc[pred_names[p]] = {{"holds", counts[p].holds}, {"fails", counts[p].fails}, {"marginal", counts[p].marginal}};
        }
        Json containments = Json::array();
        for (const auto& c : check_containments(scan)) {
            containments.push_back({{"inner", std::string(to_string(c.inner))},
                                    {"outer", std::string(to_string(c.outer))},
                                    {"inner_satisfied", c.inner_satisfied},
                                    {"violations", c.violations}});
        }
        const auto axis = [](const AxisRange& r) { return Json{{"min", r.min}, {"max", r.max}, {"steps", r.steps}}; };
        Json j{{"schema", kSchema},
               {"command", "region"},
               {"axes", {{"lambda", axis(cfg.lambda)}, {"lambda_z", axis(cfg.lambda_z)}, {"t_z", axis(cfg.t_z)}}},
               {"predicates", pred_names},
               {"points", scan.points()},
               {"counts", jc},
               {"containments", containments}};
        if (!opt.summary) {
            Json rows = Json::array();
            for (std::size_t q = 0; q < scan.points(); ++q) {
                const PhaseCovChannel ch = scan.channel(q);
                Json row = Json::array({ch.lambda(), ch.lambda_z(), ch.t_z()});
                for (std::size_t p = 0; p < cfg.predicates.size(); ++p) row.push_back(std::string(to_string(scan.status(q, p))));
                rows.push_back(std::move(row));
            }
            j["rows"] = std::move(rows);
        }
        return j.dump() + "\n";
    }

    std::string s = "# phasecov/1 region columns=lambda,lambda_z,t_z," + join(pred_names, ",") + "\n";
    s += "lambda,lambda_z,t_z," + join(pred_names, ",") + "\n";
    s.reserve(scan.points() * (24 + 9 * pred_names.size()));
    for (std::size_t q = 0; q < scan.points(); ++q) {
        const PhaseCovChannel ch = scan.channel(q);
        s += fmt(ch.lambda());
        s += ',';
        s += fmt(ch.lambda_z());
        s += ',';
        s += fmt(ch.t_z());
        for (std::size_t p = 0; p < cfg.predicates.size(); ++p) {
            s += ',';
            s += to_string(scan.status(q, p));
        }
        s += '\n';
    }
    return s;
}

// ------------------------------------------------------- simulate / divisibility

struct SourceOptions {
    std::string family;
    std::vector<std::string> params;
    std::string f;
    std::vector<double> rho0;
    std::vector<std::string> outputs;
    bool include_verdicts = false;
};

struct Source {
    Trajectory trajectory;
    RateTriple rates;
    Json description;
    double rotation_rate = 0.0;
};

struct RunSettings {
    double t_max = 10.0;
    int n_grid = 201;
};

RunSettings run_settings(const Common& common, const Json& cfg, const std::function<bool(const char*)>& given) {
    RunSettings rs;
    if (cfg.contains("t_max")) rs.t_max = config_number(cfg, "t_max");
    if (cfg.contains("n_grid")) rs.n_grid = config_int(cfg, "n_grid");
    if (given("--t-max")) rs.t_max = common.t_max;
    if (given("--grid")) rs.n_grid = common.grid;
    if (!(rs.t_max > 0.0)) throw ValidationError("t_max: must be positive");
    if (rs.n_grid < 2) throw ValidationError("n_grid: must be at least 2");
    return rs;
}

Source load_source(const SourceOptions& opt, const Json& cfg, double horizon) {
    if (!opt.family.empty()) {
        FamilySpec spec;
        spec.kind = family_kind_from_string(opt.family);
        for (const auto& kv : opt.params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ValidationError("param: expected name=value, got '" + kv + "'");
            try {
                std::size_t used = 0;
                const std::string text = kv.substr(eq + 1);
                const double v = std::stod(text, &used);
                if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(kv);
                spec.params[kv.substr(0, eq)] = v;
            } catch (const std::logic_error&) {
                throw ValidationError("param: '" + kv + "' does not hold a finite number");
            }
        }
        if (!opt.f.empty()) {
            Json fj;
            try {
                fj = Json::parse(opt.f);
            } catch (const nlohmann::json::parse_error& e) {
                throw ValidationError(std::string("f: invalid JSON (") + e.what() + ")");
            }
            spec.f = named_function_from_json(fj, "f");
        }
        Family fam = make_family(spec, horizon);
        return {fam.trajectory, fam.rates, Json{{"family", to_json(spec)}}, fam.rotation_rate};
    }
    if (cfg.contains("family")) {
        const FamilySpec spec = family_spec_from_json(cfg.at("family"), "family");
        Family fam = make_family(spec, horizon);
        return {fam.trajectory, fam.rates, Json{{"family", to_json(spec)}}, fam.rotation_rate};
    }
    if (cfg.contains("rates")) {
        const Json& r = cfg.at("rates");
        if (!r.is_object()) throw ValidationError("rates: expected an object");
        const auto fn = [&](const char* key) {
            if (!r.contains(key)) throw ValidationError(std::string("rates.") + key + ": missing");
            return time_function_from_json(r.at(key), std::string("rates.") + key);
        };
        RateTriple rates(fn("gamma_plus"), fn("gamma_minus"), fn("gamma_z"));
        return {trajectory_from_rates(rates), rates, Json{{"rates", r}}, 0.0};
    }
    if (cfg.contains("trajectory")) {
        const Json& t = cfg.at("trajectory");
        if (!t.is_object()) throw ValidationError("trajectory: expected an object");
        const auto fn = [&](const char* key) {
            if (!t.contains(key)) throw ValidationError(std::string("trajectory.") + key + ": missing");
            return time_function_from_json(t.at(key), std::string("trajectory.") + key);
        };
        Trajectory tr(fn("lambda"), fn("lambda_z"), fn("t_z"));
        return {tr, rates_of(tr), Json{{"trajectory", t}}, 0.0};
    }
    throw ValidationError("source: give --family, or one of family / rates / trajectory in the config");
}

std::vector<double> time_grid(const RunSettings& rs) {
    std::vector<double> grid(static_cast<std::size_t>(rs.n_grid));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = rs.t_max * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    }
    return grid;
}

std::string cmd_simulate(const Common& common, const SourceOptions& opt, const Json& cfg,
                         const std::function<bool(const char*)>& given) {
    require_format(common.format, {"csv", "json"});
    const RunSettings rs = run_settings(common, cfg, given);
    const Source src = load_source(opt, cfg, rs.t_max);

    std::vector<std::string> outputs = opt.outputs;
    if (outputs.empty() && cfg.contains("outputs")) {
        for (const auto& o : cfg.at("outputs")) {
            if (!o.is_string()) throw ValidationError("outputs: expected strings");
            outputs.push_back(o.get<std::string>());
        }
    }
    if (outputs.empty()) outputs = {"trajectory", "rates", "population"};
    bool want_traj = false, want_rates = false, want_pop = false, want_div = false;
    for (const auto& o : outputs) {
        if (o == "trajectory") want_traj = true;
        else if (o == "rates") want_rates = true;
        else if (o == "population") want_pop = true;
        else if (o == "divisibility") want_div = true;
        else throw ValidationError("outputs: unknown output '" + o + "' (expected trajectory, rates, population, divisibility)");
    }
    std::vector<double> rho0 = opt.rho0;
    if (rho0.empty() && cfg.contains("rho0_z")) rho0 = config_numbers(cfg, "rho0_z");
    if (rho0.empty()) rho0 = {-1.0, 0.0, 1.0};
    for (double r : rho0) {
        if (!(r >= -1.0 && r <= 1.0)) throw ValidationError("rho0_z: values must lie in [-1, 1], got " + fmt(r));
    }

    std::vector<std::string> columns{"t"};
    if (want_traj) columns.insert(columns.end(), {"lambda", "lambda_z", "t_z"});
    if (want_rates) columns.insert(columns.end(), {"gamma_plus", "gamma_minus", "gamma_z"});
    if (want_pop) {
        for (double r : rho0) columns.push_back("p[rho0_z=" + fmt(r) + "]");
    }
    if (want_div) columns.insert(columns.end(), {"cp_divisible", "p_divisible", "blp_monotone"});

    std::vector<std::vector<std::string>> rows;
    Json jrows = Json::array();
    for (double t : time_grid(rs)) {
        std::vector<std::string> row{fmt(t)};
        Json jrow = Json::array({t});
        const auto put = [&](double v) {
            row.push_back(fmt(v));
            jrow.push_back(v);
        };
        const auto put_status = [&](const Verdict& v) {
            row.emplace_back(to_string(v.status));
            jrow.push_back(std::string(to_string(v.status)));
        };
        if (want_traj) {
            const TrajectoryPoint p = src.trajectory.at(t);
            put(p.lambda);
            put(p.lambda_z);
            put(p.t_z);
        }
        if (want_rates) {
            const RateValues r = src.rates.at(t);
            put(r.gamma_plus);
            put(r.gamma_minus);
            put(r.gamma_z);
        }
        if (want_pop) {
            for (double r : rho0) put(population(src.trajectory, r, t));
        }
        if (want_div) {
            put_status(is_cp_divisible_at(src.rates, t, common.tol));
            put_status(is_p_divisible_at(src.rates, t, common.tol));
            put_status(blp_monotone_at(src.rates, t, common.tol));
        }
        rows.push_back(std::move(row));
        jrows.push_back(std::move(jrow));
    }

    if (common.format == "json") {
        Json j{{"schema", kSchema}, {"command", "simulate"}, {"source", src.description}};
        if (src.rotation_rate != 0.0) j["frame"] = {{"co_rotating", true}, {"omega", src.rotation_rate}};
        j["t_max"] = rs.t_max;
        j["n_grid"] = rs.n_grid;
        j["columns"] = columns;
        j["rows"] = std::move(jrows);
        return j.dump(2) + "\n";
    }
    std::string s = "# phasecov/1 simulate columns=" + join(columns, ",") + "\n" + join(columns, ",") + "\n";
    for (const auto& row : rows) s += join(row, ",") + "\n";
    return s;
}

std::string cmd_divisibility(const Common& common, const SourceOptions& opt, const Json& cfg,
                             const std::function<bool(const char*)>& given) {
    require_format(common.format, {"csv", "json"});
    const RunSettings rs = run_settings(common, cfg, given);
    const Source src = load_source(opt, cfg, rs.t_max);
    const DivisibilityReport report = classify_intervals(src.rates, rs.t_max, static_cast<std::size_t>(rs.n_grid), common.tol);

    if (common.format == "json") {
        Json j{{"schema", kSchema}, {"command", "divisibility"}, {"source", src.description}, {"tolerance", common.tol}};
        j["report"] = to_json(report, opt.include_verdicts);
        return j.dump(2) + "\n";
    }
    std::string s = "# phasecov/1 divisibility columns=t,cp_divisible,cp_margin,p_divisible,p_margin,blp_monotone,blp_margin\n";
    s += "t,cp_divisible,cp_margin,p_divisible,p_margin,blp_monotone,blp_margin\n";
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        const auto cell = [](const Verdict& v) { return std::string(to_string(v.status)) + "," + fmt(v.margin); };
        s += fmt(report.grid[i]) + "," + cell(report.cp_divisible.verdicts[i]) + "," +
             cell(report.p_divisible.verdicts[i]) + "," + cell(report.blp_monotone.verdicts[i]) + "\n";
    }
    return s;
}

// ---------------------------------------------------------------- kernel

struct KernelOptions {
    std::vector<double> example;
    std::vector<double> f_num, f_den;
    bool zero = false;
    int depth = 0;
    std::vector<double> s_grid;
};

std::string cmd_kernel(const Common& common, const KernelOptions& opt, const Json& cfg,
                       const std::function<bool(const char*)>& given) {
    require_format(common.format, {"json"});
    KernelSpec kernel;
    Json source;
    bool have_kernel = false;
    if (opt.zero) {
        kernel = KernelSpec::zero();
        source = {{"zero", true}};
        have_kernel = true;
    } else if (!opt.example.empty()) {
        if (opt.example.size() != 3) throw ValidationError("example: expected a,a_plus,a_minus");
        if (opt.f_num.empty() || opt.f_den.empty()) throw ValidationError("f_s: --f-num and --f-den are required with --example");
        const RationalLaplace f_s(opt.f_num, opt.f_den);
        kernel = example_kernel(opt.example[0], opt.example[1], opt.example[2], f_s);
        source = {{"example", {{"a", opt.example[0]}, {"a_plus", opt.example[1]}, {"a_minus", opt.example[2]}, {"f_s", to_json(f_s)}}}};
        have_kernel = true;
    } else if (cfg.contains("example")) {
        const Json& e = cfg.at("example");
        if (!e.is_object() || !e.contains("f_s")) throw ValidationError("example: expected {a, a_plus, a_minus, f_s}");
        const RationalLaplace f_s = rational_from_json(e.at("f_s"), "example.f_s");
        const double a = config_number(e, "a"), ap = config_number(e, "a_plus"), am = config_number(e, "a_minus");
        kernel = example_kernel(a, ap, am, f_s);
        source = {{"example", {{"a", a}, {"a_plus", ap}, {"a_minus", am}, {"f_s", to_json(f_s)}}}};
        have_kernel = true;
    } else if (cfg.contains("kernel")) {
        kernel = kernel_spec_from_json(cfg.at("kernel"), "kernel");
        source = {{"kernel", cfg.at("kernel")}};
        have_kernel = true;
    }
    if (!have_kernel) throw ValidationError("kernel: give --zero, --example with --f-num/--f-den, or kernel / example in the config");

    CMOptions cm;
    if (cfg.contains("depth")) cm.depth = config_int(cfg, "depth");
    if (opt.depth > 0) cm.depth = opt.depth;
    cm.tol = common.tol;
    std::vector<double> sg = opt.s_grid;
    if (sg.empty() && cfg.contains("s_grid")) {
        const Json& g = cfg.at("s_grid");
        if (!g.is_object()) throw ValidationError("s_grid: expected {min, max, n}");
        sg = {config_number(g, "min"), config_number(g, "max"), static_cast<double>(config_int(g, "n"))};
    }
    if (!sg.empty()) {
        if (sg.size() != 3 || sg[2] < 2 || sg[2] != std::floor(sg[2])) throw ValidationError("s_grid: expected min,max,n");
        cm.grid = log_grid(sg[0], sg[1], static_cast<std::size_t>(sg[2]));
    }

    const RunSettings rs = run_settings(common, cfg, given);
    const LaplaceParams params = laplace_params_from_kernel(kernel);
    const AdmissibilityReport adm = prop8_admissible(kernel, cm);

    Json j{{"schema", kSchema}, {"command", "kernel"}, {"source", source}, {"kernel", to_json(kernel)}};
    j["laplace"] = {{"lambda", to_json(params.lambda)}, {"lambda_z", to_json(params.lambda_z)}, {"t_z", to_json(params.t_z)}};
    j["admissibility"] = to_json(adm);
    try {
        const Trajectory tr = inverse_trajectory(params);
        Json rows = Json::array();
        for (double t : time_grid(rs)) {
            const TrajectoryPoint p = tr.at(t);
            rows.push_back(Json::array({t, p.lambda, p.lambda_z, p.t_z, std::string(to_string(in_polyhedron(tr.channel_at(t), common.tol).status))}));
        }
        j["trajectory"] = {{"columns", {"t", "lambda", "lambda_z", "t_z", "polyhedron"}}, {"rows", rows}};
    } catch (const UnsupportedInversion& e) {
        j["trajectory"] = nullptr;
        j["trajectory_unavailable"] = e.what();
    }
    return j.dump(2) + "\n";
}

// ------------------------------------------------------------ family-list

std::string cmd_family_list(const Common& common) {
    require_format(common.format, {"csv", "json"});
    if (common.format == "csv") {
        std::string s = "# phasecov/1 family-list columns=kind,parameters,summary\nkind,parameters,summary\n";
        for (const auto& info : family_catalog()) {
            s += std::string(to_string(info.kind)) + "," + join(info.parameters, ";") + ",\"" + info.summary + "\"\n";
        }
        return s;
    }
    Json families = Json::array();
    for (const auto& info : family_catalog()) {
        Json entry{{"kind", std::string(to_string(info.kind))}, {"parameters", info.parameters}, {"summary", info.summary}};
        if (info.kind == FamilyKind::kernel_example) entry["function"] = "f: exp_decay(c, rate) | cosine(c, omega) | constant(c), or an array of them";
        families.push_back(std::move(entry));
    }
    return Json{{"schema", kSchema}, {"families", families}}.dump(2) + "\n";
}

void report_error(std::ostream& err, const std::string& kind, const std::string& category, const std::string& message) {
    err << Json{{"schema", kSchema}, {"error", {{"kind", kind}, {"category", category}, {"message", message}}}}.dump() << "\n";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Phase covariant qubit channels and dynamical maps", "phasecov"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Common region_c, sim_c, div_c, kern_c, list_c;
    RegionOptions region_o;
    SourceOptions sim_o, div_o;
    KernelOptions kern_o;

    auto* region = app.add_subcommand("region", "Scan (lambda, lambda_z, t_z) and classify each grid point");
    add_common(region, region_c, "csv");
    region->add_option("--lambda", region_o.lambda, "min,max,steps")->delimiter(',');
    region->add_option("--lambda-z", region_o.lambda_z, "min,max,steps")->delimiter(',');
    region->add_option("--t-z", region_o.t_z, "min,max,steps")->delimiter(',');
    region->add_option("--predicates", region_o.predicates, "Comma-separated predicates")->delimiter(',');
    region->add_option("--point", region_o.point, "Classify a single channel lambda,lambda_z,t_z")->delimiter(',');
    region->add_option("--slice-tz", region_o.slice_t_z, "t_z value of the SVG slice");
    region->add_flag("--summary", region_o.summary, "JSON: counts and containments only");

    const auto add_source = [](CLI::App* cmd, SourceOptions& o) {
        cmd->add_option("--family", o.family, "Built-in family (see family-list)");
        cmd->add_option("--param", o.params, "Family parameter name=value (repeatable)");
        cmd->add_option("--f", o.f, "kernel_example f(t) as JSON");
    };
    auto* simulate = app.add_subcommand("simulate", "Time series of trajectory, rates and populations");
    add_common(simulate, sim_c, "csv");
    add_source(simulate, sim_o);
    simulate->add_option("--rho0", sim_o.rho0, "Initial tr[rho sigma_z] values")->delimiter(',');
    simulate->add_option("--outputs", sim_o.outputs, "trajectory,rates,population,divisibility")->delimiter(',');

    auto* divisibility = app.add_subcommand("divisibility", "CP-/P-divisibility and BLP intervals over time");
    add_common(divisibility, div_c, "json");
    add_source(divisibility, div_o);
    divisibility->add_flag("--verdicts", div_o.include_verdicts, "Include per-grid verdicts in JSON");

    auto* kernel = app.add_subcommand("kernel", "Laplace-domain memory kernel analysis");
    add_common(kernel, kern_c, "json");
    kernel->add_option("--example", kern_o.example, "a,a_plus,a_minus")->delimiter(',');
    kernel->add_option("--f-num", kern_o.f_num, "Numerator of f_s, ascending")->delimiter(',');
    kernel->add_option("--f-den", kern_o.f_den, "Denominator of f_s, ascending")->delimiter(',');
    kernel->add_flag("--zero", kern_o.zero, "Zero memory kernel");
    kernel->add_option("--depth", kern_o.depth, "Derivative depth of the monotonicity test")->check(CLI::PositiveNumber);
    kernel->add_option("--s-grid", kern_o.s_grid, "min,max,n of the log grid in s")->delimiter(',');

    auto* family_list = app.add_subcommand("family-list", "List built-in dynamics families");
    add_common(family_list, list_c, "json");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report_error(err, "UsageError", "config", e.what());
        return kExitConfig;
    }

    const CLI::App* active = app.get_subcommands().front();
    const auto given = [active](const char* flag) { return active->count(flag) > 0; };
    try {
        std::string content;
        const Common* common = nullptr;
        if (active == region) {
            common = &region_c;
            content = cmd_region(region_c, region_o, load_config(region_c.config), given);
        } else if (active == simulate) {
            common = &sim_c;
            content = cmd_simulate(sim_c, sim_o, load_config(sim_c.config), given);
        } else if (active == divisibility) {
            common = &div_c;
            content = cmd_divisibility(div_c, div_o, load_config(div_c.config), given);
        } else if (active == kernel) {
            common = &kern_c;
            content = cmd_kernel(kern_c, kern_o, load_config(kern_c.config), given);
        } else {
            common = &list_c;
            content = cmd_family_list(list_c);
        }
        emit(*common, active->get_name(), args, content, out);
        return kExitOk;
    } catch (const Error& e) {
        const bool config = e.category() == ErrorCategory::config;
        report_error(err, e.kind(), config ? "config" : "numerical", e.what());
        return config ? kExitConfig : kExitNumerical;
    } catch (const std::exception& e) {
        report_error(err, "InternalError", "numerical", e.what());
        return kExitNumerical;
    }
}

} // namespace phasecov
