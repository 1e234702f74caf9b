#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using spinex::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return (fs::temp_directory_path() / ("spinex_cli_" + name)).string(); }

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string make_series(const std::string& name, const std::string& function = "sine", std::size_t n = 150) {
    const auto path = tmp(name);
    const auto r = invoke({"generate", "--function", function, "--n", std::to_string(n), "--tmax", "15", "--seed", "3",
                           "-o", path});
    REQUIRE(r.code == 0);
    return path;
}

} // namespace

TEST_CASE("generate writes the requested number of values") {
    const auto path = tmp("gen.csv");
    const auto r = invoke({"generate", "--function", "linear", "--n", "100", "--tmax", "10", "--sigma", "0", "--seed",
                           "0", "-o", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const auto s = spinex::load_csv(path);
    REQUIRE(s.size() == 100);
    CHECK(s[99] == Catch::Approx(5.0));
    CHECK(s[0] == 0.0);
}

TEST_CASE("forecast reports are byte-identical across runs") {
    const auto input = make_series("fc.csv");
    const auto a = invoke({"forecast", "--input", input, "--horizon", "5", "--seed", "0"});
    const auto b = invoke({"forecast", "--input", input, "--horizon", "5", "--seed", "0"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto report = spinex::parse_report(a.out);
    CHECK(report.kind == spinex::ReportKind::Forecast);
    CHECK(report.payload["values"].size() == 5);
}

TEST_CASE("missing input maps to a data error and writes no report") {
    const auto out = tmp("missing_report.json");
    fs::remove(out);
    const auto r = invoke({"forecast", "--input", tmp("does_not_exist.csv"), "-o", out});
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("usage errors exit 1") {
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"forecast"}).code == 1);
    CHECK(invoke({"generate", "--function", "nope"}).code == 1);
    const auto input = make_series("usage.csv");
    CHECK(invoke({"forecast", "--input", input, "--methods", "manhattan"}).code == 1);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("seed falls back to SPINEX_SEED only without --seed") {
    const auto input = make_series("seed.csv");
    ::setenv("SPINEX_SEED", "17", 1);
    const auto env = invoke({"forecast", "--input", input});
    const auto flag = invoke({"forecast", "--input", input, "--seed", "4"});
    ::setenv("SPINEX_SEED", "bogus", 1);
    const auto bad = invoke({"forecast", "--input", input});
    ::unsetenv("SPINEX_SEED");
    REQUIRE(env.code == 0);
    CHECK(spinex::parse_report(env.out).seed == 17);
    CHECK(spinex::parse_report(flag.out).seed == 4);
    CHECK(bad.code == 1);
}

TEST_CASE("each command produces its report kind") {
    const auto input = make_series("cmds.csv", "composite_sines", 200);
    const auto ev = invoke({"evaluate", "--input", input, "--horizon", "5", "--splits", "3"});
    REQUIRE(ev.code == 0);
    const auto evr = spinex::parse_report(ev.out);
    CHECK(evr.kind == spinex::ReportKind::Metrics);
    CHECK(evr.payload["splits"].size() == 3);

    const auto an = invoke({"anomalies", "--input", input, "--percentile", "5"});
    REQUIRE(an.code == 0);
    CHECK(spinex::parse_report(an.out).payload.contains("score_stats"));

    const auto plot = tmp("neighbors.csv");
    const auto ex = invoke({"explain", "--input", input, "--horizon", "3", "--k", "3", "--plot", plot});
    REQUIRE(ex.code == 0);
    const auto exr = spinex::parse_report(ex.out);
    CHECK(exr.kind == spinex::ReportKind::Explainability);
    CHECK(exr.payload["nearest_neighbors"].size() == 3);
    CHECK(slurp(plot).rfind("index,latest,segment_", 0) == 0);

    const auto cx = invoke({"complexity", "--sizes", "50,500,5000", "--times", "2500,250000,25000000"});
    REQUIRE(cx.code == 0);
    CHECK(spinex::parse_report(cx.out).payload["class"] == "poly");
}

TEST_CASE("forecast plot csv and bench outputs") {
    const auto input = make_series("plot.csv", "sine", 120);
    const auto plot = tmp("plot_out.csv");
    const auto r = invoke({"forecast", "--input", input, "--horizon", "4", "--plot", plot});
    REQUIRE(r.code == 0);
    const auto text = slurp(plot);
    CHECK(text.rfind("index,actual,predicted,ci_lower,ci_upper\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 120 + 4);

    const auto csv = tmp("bench.csv");
    const auto b = invoke({"bench", "--datasets", "linear,sine", "--algorithms", "naive,ses,theta", "--horizon", "3",
                           "--n", "60", "--csv", csv, "--seed", "1"});
    REQUIRE(b.code == 0);
    const auto rep = spinex::parse_report(b.out);
    CHECK(rep.payload["records"].size() == 6);
    CHECK(rep.payload["rankings"].contains("wins"));
    CHECK(slurp(csv).rfind("algorithm,dataset,metric,value\n", 0) == 0);
}
