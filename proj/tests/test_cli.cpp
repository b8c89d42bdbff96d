#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "phasecov/cli.hpp"
#include "phasecov/region.hpp"

using namespace phasecov;
using Json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "phasecov_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("region single point") {
    const Run r = run({"region", "--point", "1,1,0", "--format", "json"});
    REQUIRE(r.code == kExitOk);
    const Json j = Json::parse(r.out);
    CHECK(j["schema"] == "phasecov/1");
    for (const char* p : {"cp", "positive", "class_l"}) CHECK(j["verdicts"][p]["status"] == "marginal");
}

TEST_CASE("region scan output") {
    const Run csv = run({"region", "--lambda", "-1,1,5", "--lambda-z", "-1,1,5", "--t-z", "-1,1,5", "--predicates",
                         "cp,polyhedron"});
    REQUIRE(csv.code == kExitOk);
    CHECK(csv.out.rfind("# phasecov/1 region", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv.out) lines += c == '\n';
    CHECK(lines == 2 + 125);

    const Run summary = run({"region", "--grid", "21", "--summary", "--format", "json", "--threads", "3"});
    REQUIRE(summary.code == kExitOk);
    const Json j = Json::parse(summary.out);
    for (const auto& c : j["containments"]) CHECK(c["violations"] == 0);

    const Run svg = run({"region", "--grid", "11", "--format", "svg", "--slice-tz", "0"});
    REQUIRE(svg.code == kExitOk);
    CHECK(svg.out.find("<svg") != std::string::npos);
}

TEST_CASE("region counts do not depend on traversal order") {
    ScanConfig cfg;
    cfg.lambda = {-1.5, 1.5, 17};
    cfg.lambda_z = {-1.5, 1.5, 13};
    cfg.t_z = {-1.5, 1.5, 11};
    const RegionScan scan = scan_region(cfg, 4);
    const std::vector<StatusCounts> counts = count_statuses(scan);
    for (std::size_t p = 0; p < cfg.predicates.size(); ++p) {
        StatusCounts direct;
        for (int k = 0; k < cfg.t_z.steps; ++k)
            for (int j = 0; j < cfg.lambda_z.steps; ++j)
                for (int i = 0; i < cfg.lambda.steps; ++i) {
                    const PhaseCovChannel ch(cfg.lambda.value(i), cfg.lambda_z.value(j), cfg.t_z.value(k));
                    switch (evaluate(cfg.predicates[p], ch).status) {
                    case Status::holds: ++direct.holds; break;
                    case Status::fails: ++direct.fails; break;
                    case Status::marginal: ++direct.marginal; break;
                    }
                }
        CHECK(direct.holds == counts[p].holds);
        CHECK(direct.fails == counts[p].fails);
        CHECK(direct.marginal == counts[p].marginal);
    }
    const RegionScan single = scan_region(cfg, 1);
    CHECK(single.statuses == scan.statuses);
}

TEST_CASE("simulate") {
    SUBCASE("semigroup matches the closed forms") {
        const Run r = run({"simulate", "--family", "semigroup", "--param", "gamma_plus=2", "--param", "gamma_minus=1",
                           "--param", "gamma_z=0.25", "--t-max", "5", "--grid", "51", "--outputs", "trajectory"});
        REQUIRE(r.code == kExitOk);
        const auto rows = csv_rows(r.out);
        REQUIRE(rows.size() == 51);
        for (const auto& row : rows) {
            const double t = row[0];
            CHECK(std::abs(row[1] - std::exp(-2 * t)) < 1e-9);
            CHECK(std::abs(row[2] - std::exp(-3 * t)) < 1e-9);
            CHECK(std::abs(row[3] - (1 - std::exp(-3 * t)) / 3) < 1e-9);
        }
    }
    SUBCASE("non-monotone populations") {
        const Run r = run({"simulate", "--family", "nonmonotone_population", "--param", "nu=1", "--param", "omega=2",
                           "--rho0", "-1,0,1", "--outputs", "population", "--t-max", "8", "--grid", "801"});
        REQUIRE(r.code == kExitOk);
        const auto rows = csv_rows(r.out);
        const double t0 = 0.5 * std::log(std::sqrt(8.0) / 2);
        for (std::size_t col = 1; col <= 3; ++col) {
            int extrema = 0;
            for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
                if (rows[i][0] <= t0 || rows[i][0] > t0 + std::numbers::pi) continue;
                const double a = rows[i - 1][col], b = rows[i][col], c = rows[i + 1][col];
                extrema += (b > a && b > c) || (b < a && b < c);
            }
            CHECK(extrema >= 2);
        }
    }
    SUBCASE("zero rates give constant rows") {
        const Run r = run({"simulate", "--family", "semigroup", "--param", "gamma_plus=0", "--param", "gamma_minus=0",
                           "--param", "gamma_z=0", "--outputs", "trajectory"});
        REQUIRE(r.code == kExitOk);
        for (const auto& row : csv_rows(r.out)) {
            CHECK(row[1] == 1.0);
            CHECK(row[2] == 1.0);
            CHECK(row[3] == 0.0);
        }
    }
}

TEST_CASE("divisibility report") {
    const Run r = run({"divisibility", "--family", "eternal_commutative", "--param", "a=0.5", "--param", "nu=1",
                       "--t-max", "5", "--format", "json"});
    REQUIRE(r.code == kExitOk);
    const Json j = Json::parse(r.out);
    for (const auto& iv : j["report"]["cp_divisible"]["intervals"]) CHECK(iv["status"] != "holds");
    const auto& crossings = j["report"]["p_divisible"]["crossings"];
    REQUIRE(crossings.size() == 1);
    // √(1−a²) + 2γz(t) = 0 solved by bisection on the closed-form γz.
    const auto g = [](double t) {
        const double a = 0.5;
        return std::sqrt(1 - a * a) -
               (1 - a * a) * std::sinh(2 * t) / (1 + a * a + (1 - a * a) * std::cosh(2 * t));
    };
    double lo = 0.5, hi = 5;
    for (int i = 0; i < 100; ++i) (g(0.5 * (lo + hi)) > 0 ? lo : hi) = 0.5 * (lo + hi);
    CHECK(std::abs(crossings[0]["t"].get<double>() - lo) < 1e-8);

    const Run sg = run({"divisibility", "--family", "semigroup", "--param", "gamma_plus=1", "--param",
                        "gamma_minus=0.5", "--param", "gamma_z=0.2", "--format", "json"});
    REQUIRE(sg.code == kExitOk);
    const Json sg_json = Json::parse(sg.out);
    for (const char* prop : {"cp_divisible", "p_divisible", "blp_monotone"}) {
        const auto& ivs = sg_json["report"][prop]["intervals"];
        REQUIRE(ivs.size() == 1);
        CHECK(ivs[0]["status"] == "holds");
    }

    const Run pop = run({"divisibility", "--family", "nonmonotone_population", "--param", "nu=1", "--param",
                         "omega=2", "--format", "json"});
    REQUIRE(pop.code == kExitOk);
    const Json pop_json = Json::parse(pop.out);
    for (const auto& iv : pop_json["report"]["cp_divisible"]["intervals"]) CHECK(iv["status"] != "fails");
}

TEST_CASE("kernel command") {
    const Run ex = run({"kernel", "--example", "1,0.5,0.5", "--f-num", "1", "--f-den", "1,1", "--format", "json"});
    REQUIRE(ex.code == kExitOk);
    const Json j = Json::parse(ex.out);
    CHECK(j["admissibility"]["overall"]["status"] == "holds");

    const Run sin = run({"kernel", "--example", "1,0.5,0.5", "--f-num", "1", "--f-den", "1,0,1", "--format", "json"});
    REQUIRE(sin.code == kExitOk);
    const Json k = Json::parse(sin.out);
    CHECK(k["admissibility"]["overall"]["status"] == "fails");
    bool witnessed = false;
    for (const auto& f : k["admissibility"]["functions"]) witnessed |= !f["witness"].is_null();
    CHECK(witnessed);

    const Run zero = run({"kernel", "--zero", "--format", "json"});
    REQUIRE(zero.code == kExitOk);
    CHECK(Json::parse(zero.out)["laplace"]["t_z"]["num"].empty());
}

TEST_CASE("family-list") {
    const Run r = run({"family-list", "--format", "json"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("eternal_noncommutative") != std::string::npos);
    CHECK(r.out.find("kernel_example") != std::string::npos);
}

TEST_CASE("errors are JSON with exit codes") {
    const auto check_error = [](const Run& r, int code, const std::string& kind, const std::string& needle) {
        CHECK(r.code == code);
        const Json e = Json::parse(r.err);
        CHECK(e["schema"] == "phasecov/1");
        CHECK(e["error"]["kind"] == kind);
        CHECK(e["error"]["message"].get<std::string>().find(needle) != std::string::npos);
    };
    check_error(run({"region", "--lambda", "0,1,1"}), kExitConfig, "ValidationError", "lambda.steps");
    check_error(run({"simulate", "--family", "lindblad"}), kExitConfig, "ValidationError", "lindblad");
    check_error(run({"simulate", "--family", "eternal_commutative", "--param", "a=0.5"}), kExitConfig,
                "ValidationError", "params.nu");
    check_error(run({"simulate", "--family", "eternal_commutative", "--param", "a=2", "--param", "nu=1"}),
                kExitConfig, "DomainError", "|a| < 1");
    check_error(run({"kernel", "--example", "1,0.5,0.5", "--f-num", "1", "--f-den", "1"}), kExitNumerical,
                "DegenerateKernel", "vanishes");
    check_error(run({"region", "--config", "/nonexistent/phasecov.json"}), kExitConfig, "IOError", "");
    CHECK(run({"bogus"}).code == kExitConfig);
    CHECK(run({"region", "--format", "xml"}).code == kExitConfig);
}

TEST_CASE("files, sidecar and determinism") {
    const auto dir = scratch_dir();
    const auto cfg = dir / "run.json";
    {
        std::ofstream(cfg) << R"({"family": {"kind": "eternal_noncommutative", "params": {"b": 0.5, "nu": 1}},
                                 "t_max": 3, "n_grid": 31, "outputs": ["trajectory", "rates"]})";
    }
    const auto a = dir / "a.csv", b = dir / "b.csv";
    REQUIRE(run({"simulate", "--config", cfg.string(), "--out", a.string()}).code == kExitOk);
    REQUIRE(run({"simulate", "--config", cfg.string(), "--out", b.string()}).code == kExitOk);
    CHECK(slurp(a) == slurp(b));
    CHECK(csv_rows(slurp(a)).size() == 31);
    const Run stdout_run = run({"simulate", "--config", cfg.string()});
    CHECK(stdout_run.out == slurp(a));

    const auto sidecar = dir / "a.csv.meta.json";
    REQUIRE(std::filesystem::exists(sidecar));
    const Json meta = Json::parse(slurp(sidecar));
    CHECK(meta["schema"] == "phasecov/1");
    CHECK(slurp(a).find(meta.dump()) == std::string::npos);

    const Run j1 = run({"divisibility", "--config", cfg.string(), "--format", "json"});
    const Run j2 = run({"divisibility", "--config", cfg.string(), "--format", "json"});
    CHECK(j1.out == j2.out);

    {
        std::ofstream(cfg) << R"({"t_max": "long"})";
    }
    const Run bad = run({"simulate", "--config", cfg.string(), "--family", "semigroup"});
    CHECK(bad.code == kExitConfig);
    CHECK(bad.err.find("t_max") != std::string::npos);
    std::filesystem::remove_all(dir);
}
