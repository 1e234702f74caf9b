#include <catch_amalgamated.hpp>

#include <map>

#include "oracles.hpp"
#include "spinex/spinex.hpp"

using namespace spinex;

namespace {

BenchmarkRecord rec(std::string algo, std::string ds, double da, double dtw, double mase, double mad) {
    BenchmarkRecord r;
    r.algorithm = std::move(algo);
    r.dataset = std::move(ds);
    r.direction_accuracy = da;
    r.dtw_cost = dtw;
    r.mase = mase;
    r.mad = mad;
    return r;
}

const RankingRow& row(const RankingTable& t, const std::string& name) {
    for (const auto& r : t.rows)
        if (r.algorithm == name) return r;
    throw std::runtime_error("missing row " + name);
}

// Four algorithms, one dataset; B and C tie on DA, A and B tie on MASE.
std::vector<BenchmarkRecord> fixture() {
    return {rec("A", "d", 0.8, 1.0, 0.5, 0.2), rec("B", "d", 0.6, 2.0, 0.5, 0.3), rec("C", "d", 0.6, 1.5, 0.9, 0.1),
            rec("D", "d", 0.4, 3.0, 1.2, 0.4)};
}

struct PublishedRow {
    const char* name;
    double da, dtw, mase, mad;
};

// Cross-dataset means from the printed ranking table.
const PublishedRow published_rows[] = {
    {"SARIMA", 0.578, 15.353, 2625.313, 0.116},   {"Prophet", 0.546, 2.058, 58.910, 0.095},
    {"Holt-Winters", 0.572, 15.419, 46.643, 0.291}, {"Theta", 0.550, 2.451, 82.481, 0.100},
    {"SPINEX", 0.602, 1.956, 45.676, 0.075},      {"ARIMA", 0.264, 2.544, 84.369, 0.097},
    {"Croston", 0.000, 2.602, 87.962, 0.101},     {"ETS", 0.000, 2.603, 87.962, 0.101},
    {"LSTM", 0.502, 3.756, 115.265, 0.090},       {"Random Forest", 0.000, 2.698, 88.205, 0.101},
    {"Bagging", 0.000, 2.698, 88.205, 0.101},     {"Gradient Boosting", 0.000, 2.689, 88.144, 0.101},
    {"XGBoost", 0.000, 2.695, 88.281, 0.101},     {"SMA", 0.000, 2.669, 88.733, 0.101},
    {"KNN", 0.000, 2.669, 88.733, 0.101},         {"CatBoost", 0.000, 2.666, 89.402, 0.101},
    {"Neural Network", 0.518, 6.952, 194.656, 0.110}, {"SVR", 0.166, 4.262, 157.608, 0.115},
    {"Gaussian Process", 0.255, 7.354, 144.260, 0.097},
};

std::vector<BenchmarkRecord> published_records() {
    std::vector<BenchmarkRecord> out;
    for (const auto& p : published_rows) out.push_back(rec(p.name, "all", p.da, p.dtw, p.mase, p.mad));
    return out;
}

} // namespace

TEST_CASE("linear and sine generator examples") {
    const auto lin = generate_synthetic({SyntheticFunction::Linear, 11, 10.0, 0.0, 0});
    for (std::size_t i = 0; i < 11; ++i) CHECK(lin[i] == Catch::Approx(0.5 * static_cast<double>(i)).margin(1e-12));
    const auto sine = generate_synthetic({SyntheticFunction::Sine, 5, 1.0, 0.0, 0});
    CHECK(sine[1] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("noise-free generators match closed forms") {
    for (const auto& info : synthetic_catalogue) {
        if (info.recursive) continue;
        const auto spec = SyntheticSpec{info.id, 57, 13.0, 0.0, 3};
        const auto s = generate_synthetic(spec);
        const auto t = time_grid(57, 13.0);
        CHECK(t.back() == 13.0);
        for (std::size_t i = 0; i < 57; ++i)
            CHECK(std::abs(s[i] - synthetic_closed_form(info.id, t[i], 13.0)) <= 1e-12);
    }
}

TEST_CASE("generators are seeded and named") {
    for (const auto& info : synthetic_catalogue) {
        const auto spec = default_synthetic_spec(info.id, 64, 10.0, 99);
        const auto a = generate_synthetic(spec);
        const auto b = generate_synthetic(spec);
        CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
        for (double v : a.values()) CHECK(std::isfinite(v));
        CHECK(parse_synthetic_function(info.name) == info.id);
    }
    CHECK(synthetic_catalogue.size() == 25);
    CHECK_THROWS_AS(parse_synthetic_function("tent_map"), UnknownFunction);
    CHECK_THROWS_AS(generate_synthetic({SyntheticFunction::Linear, 1, 10.0, 0.1, 0}), InvalidArgument);
    CHECK_THROWS_AS(generate_synthetic({SyntheticFunction::Linear, 10, 0.0, 0.1, 0}), InvalidArgument);
    CHECK_THROWS_AS(generate_synthetic({SyntheticFunction::Linear, 10, 1.0, -0.1, 0}), InvalidArgument);
}

TEST_CASE("recursive generators") {
    const auto ar = generate_synthetic({SyntheticFunction::Ar1, 30, 10.0, 0.0, 1});
    for (double v : ar.values()) CHECK(v == 0.0);
    const auto chaos = generate_synthetic({SyntheticFunction::ChaoticMap, 20, 10.0, 0.0, 1});
    double x = 0.1;
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(chaos[i] == x);
        x = 3.9 * x * (1.0 - x);
    }
    // Brownian motion is the running sum of the same draws.
    const auto walk = generate_synthetic({SyntheticFunction::Brownian, 50, 10.0, 0.5, 4});
    Rng rng(4);
    double acc = 0.0;
    for (std::size_t i = 0; i < 50; ++i) CHECK(walk[i] == (acc += rng.normal(0.0, 0.5)));
    CHECK_THROWS_AS(synthetic_closed_form(SyntheticFunction::Garch, 1.0, 10.0), InvalidArgument);
}

TEST_CASE("documented piecewise shapes") {
    CHECK(synthetic_closed_form(SyntheticFunction::Step, 0.5, 10.0) == 0.0);
    CHECK(synthetic_closed_form(SyntheticFunction::Step, 1.5, 10.0) == 1.0);
    CHECK(synthetic_closed_form(SyntheticFunction::Piecewise, 2.0, 9.0) == 2.0);
    CHECK(synthetic_closed_form(SyntheticFunction::Piecewise, 4.0, 9.0) == 3.0);
    CHECK(synthetic_closed_form(SyntheticFunction::Piecewise, 8.0, 9.0) == Catch::Approx(1.0));
}

TEST_CASE("rank_average matches the hand computation") {
    const auto t = rank_average(fixture());
    CHECK(row(t, "A").columns == std::array<double, 4>{1.0, 1.0, 1.5, 2.0});
    CHECK(row(t, "B").columns == std::array<double, 4>{2.5, 3.0, 1.5, 3.0});
    CHECK(row(t, "C").columns == std::array<double, 4>{2.5, 2.0, 3.0, 1.0});
    CHECK(row(t, "D").columns == std::array<double, 4>{4.0, 4.0, 4.0, 4.0});
    CHECK(row(t, "A").average == 1.375);
    CHECK(row(t, "B").average == 2.5);
    CHECK(row(t, "C").average == 2.125);
    CHECK(row(t, "A").final_rank == 1);
    CHECK(row(t, "C").final_rank == 2);
    CHECK(row(t, "B").final_rank == 3);
    CHECK(row(t, "D").final_rank == 4);
}

TEST_CASE("rank_wins matches the hand computation") {
    const auto t = rank_wins(fixture());
    CHECK(row(t, "A").columns == std::array<double, 4>{1, 1, 1, 2});
    CHECK(row(t, "B").columns == std::array<double, 4>{2, 3, 1, 3});
    CHECK(row(t, "C").columns == std::array<double, 4>{2, 2, 3, 1});
    CHECK(row(t, "A").average == 1.25);
    CHECK(row(t, "B").average == 2.25);
    CHECK(row(t, "C").average == 2.0);
    CHECK(row(t, "A").final_rank == 1);
    CHECK(row(t, "C").final_rank == 2);
    CHECK(row(t, "B").final_rank == 3);
    CHECK(row(t, "D").final_rank == 4);
}

TEST_CASE("rank_normalized matches the hand computation") {
    const auto t = rank_normalized(fixture());
    const auto& a = row(t, "A");
    const auto& b = row(t, "B");
    const auto& c = row(t, "C");
    CHECK(a.columns[3] == Catch::Approx(1.0 / 3.0));
    CHECK(b.columns[0] == Catch::Approx(0.5));
    CHECK(c.columns[2] == Catch::Approx(0.4 / 0.7));
    CHECK(a.average == Catch::Approx(1.0 / 12.0));
    CHECK(b.average == Catch::Approx((0.5 + 0.5 + 0.0 + 2.0 / 3.0) / 4.0));
    CHECK(c.average == Catch::Approx((0.5 + 0.25 + 0.4 / 0.7 + 0.0) / 4.0));
    CHECK(row(t, "D").average == 1.0);
    CHECK(a.final_rank == 1);
    CHECK(c.final_rank == 2);
    CHECK(b.final_rank == 3);
}

TEST_CASE("ranking tie rules and dataset averaging") {
    std::vector<BenchmarkRecord> twin{rec("X", "d", 0.5, 1.0, 1.0, 1.0), rec("Y", "d", 0.5, 1.0, 1.0, 1.0),
                                      rec("Z", "d", 0.1, 2.0, 2.0, 2.0)};
    for (const auto& t : {rank_average(twin), rank_normalized(twin), rank_wins(twin)}) {
        CHECK(row(t, "X").final_rank == 1);
        CHECK(row(t, "Y").final_rank == 1);
        CHECK(row(t, "Z").final_rank == 3);
    }
    // Each wins one dataset outright: per-dataset ranks average to a tie.
    std::vector<BenchmarkRecord> split{rec("X", "d1", 0.9, 1, 1, 1), rec("Y", "d1", 0.5, 2, 2, 2),
                                       rec("Z", "d1", 0.1, 3, 3, 3), rec("X", "d2", 0.5, 2, 2, 2),
                                       rec("Y", "d2", 0.9, 1, 1, 1), rec("Z", "d2", 0.1, 3, 3, 3)};
    const auto t = rank_average(split);
    CHECK(row(t, "X").average == 1.5);
    CHECK(row(t, "Y").average == 1.5);
    CHECK(row(t, "Z").final_rank == 3);
    CHECK_THROWS_AS(rank_wins(std::vector<BenchmarkRecord>{rec("X", "d", 1, 1, 1, 1)}), InsufficientData);
}

TEST_CASE("constant columns normalise to zero and NaN ranks last") {
    std::vector<BenchmarkRecord> recs{rec("A", "d", 0.5, 1.0, 2.0, 3.0), rec("B", "d", 0.5, 2.0, 2.0, 1.0)};
    BenchmarkRecord failed;
    failed.algorithm = "C";
    failed.dataset = "d";
    failed.error = "boom";
    recs.push_back(failed);
    const auto n = rank_normalized(recs);
    CHECK(row(n, "A").columns[0] == 0.0);
    CHECK(row(n, "A").columns[2] == 0.0);
    CHECK(row(n, "C").columns == std::array<double, 4>{1, 1, 1, 1});
    CHECK(row(n, "C").final_rank == 3);
    CHECK(row(rank_average(recs), "C").final_rank == 3);
    CHECK(row(rank_wins(recs), "C").final_rank == 3);
}

TEST_CASE("rankings are invariant under record order") {
    auto recs = published_records();
    const auto a = rank_average(recs), n = rank_normalized(recs), w = rank_wins(recs);
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(recs.begin(), recs.end(), gen);
        const auto a2 = rank_average(recs), n2 = rank_normalized(recs), w2 = rank_wins(recs);
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].algorithm == a2.rows[i].algorithm);
            CHECK(a.rows[i].final_rank == a2.rows[i].final_rank);
            CHECK(n.rows[i].average == n2.rows[i].average);
            CHECK(w.rows[i].columns == w2.rows[i].columns);
        }
    }
}

TEST_CASE("published wins block") {
    const auto t = rank_wins(published_records());
    CHECK(row(t, "SPINEX").columns == std::array<double, 4>{1, 1, 1, 1});
    CHECK(row(t, "SPINEX").final_rank == 1);
    CHECK(row(t, "Prophet").columns == std::array<double, 4>{5, 2, 3, 3});
    CHECK(row(t, "Prophet").average == 3.25);
    CHECK(row(t, "Prophet").final_rank == 2);
    CHECK(row(t, "Theta").columns == std::array<double, 4>{4, 3, 4, 6});
    CHECK(row(t, "Theta").average == 4.25);
    CHECK(row(t, "Theta").final_rank == 3);
    CHECK(row(t, "ARIMA").columns == std::array<double, 4>{8, 4, 5, 4});
    CHECK(row(t, "ARIMA").final_rank == 4);
    CHECK(row(t, "Croston").columns == std::array<double, 4>{11, 5, 6, 7});
    CHECK(row(t, "Croston").average == 7.25);
    CHECK(row(t, "Croston").final_rank == 5);
    CHECK(row(t, "Gradient Boosting").average == 9.0);
    CHECK(row(t, "Gradient Boosting").final_rank == 7);
    for (const char* name : {"SMA", "LSTM", "KNN"}) {
        CHECK(row(t, name).average == 9.5);
        CHECK(row(t, name).final_rank == 8);
    }
    for (const char* name : {"Random Forest", "CatBoost", "Bagging"}) CHECK(row(t, name).final_rank == 11);
}

TEST_CASE("published normalized block") {
    const auto t = rank_normalized(published_records());
    const auto& spinex = row(t, "SPINEX");
    CHECK(spinex.columns == std::array<double, 4>{0, 0, 0, 0});
    CHECK(spinex.average == 0.0);
    CHECK(spinex.final_rank == 1);
    const auto& prophet = row(t, "Prophet");
    const std::array<double, 4> printed{0.094, 0.008, 0.005, 0.093};
    for (std::size_t m = 0; m < 4; ++m) CHECK(std::abs(prophet.columns[m] - printed[m]) < 0.002);
    CHECK(std::abs(prophet.average - 0.050) < 0.002);
    CHECK(prophet.final_rank == 2);
    const auto& hw = row(t, "Holt-Winters");
    CHECK(std::abs(hw.columns[0] - 0.051) < 0.002);
    CHECK(hw.columns[1] == 1.0);
    CHECK(std::abs(hw.columns[2]) < 0.002);
    CHECK(hw.columns[3] == 1.0);
    CHECK(std::abs(hw.average - 0.513) < 0.002);
    CHECK(row(t, "Theta").final_rank == 3);
}

TEST_CASE("pareto frontier") {
    const auto single = pareto_frontier(std::vector<BenchmarkRecord>{rec("A", "d", 0.3, 5, 5, 5)});
    REQUIRE(single.size() == 1);
    CHECK(single[0].efficient);

    const auto dom = pareto_frontier(std::vector<BenchmarkRecord>{rec("A", "d", 0.9, 1, 1, 1), rec("B", "d", 0.5, 2, 2, 2)});
    CHECK(dom[0].efficient);
    CHECK_FALSE(dom[1].efficient);

    const std::vector<BenchmarkRecord> trade{rec("A", "d", 0.9, 2.0, 1, 1), rec("B", "d", 0.5, 1.0, 1, 1)};
    const auto tr = pareto_frontier(trade);
    CHECK(tr[0].efficient);
    CHECK(tr[1].efficient);

    // Strictly increasing rescaling of every metric leaves the flags alone.
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<BenchmarkRecord> recs, scaled;
        for (int a = 0; a < 6; ++a) {
            const auto v = oracle::random_vector(gen, 4, 0.0, 1.0);
            recs.push_back(rec("alg" + std::to_string(a), "d", v[0], v[1], v[2], v[3]));
            scaled.push_back(rec("alg" + std::to_string(a), "d", std::pow(v[0], 3.0), std::exp(v[1]),
                                 10.0 * v[2] + 4.0, std::sqrt(v[3])));
        }
        const auto p = pareto_frontier(recs), q = pareto_frontier(scaled);
        bool any = false;
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p[i].efficient == q[i].efficient);
            any = any || p[i].efficient;
        }
        CHECK(any);
    }
}

TEST_CASE("complexity fitter") {
    const std::vector<double> sizes{50, 500, 5000};
    std::vector<double> lg, sq, ex;
    for (double n : sizes) {
        lg.push_back(3.0 * std::log(n));
        sq.push_back(n * n);
        ex.push_back(std::exp(0.001 * n));
    }
    const auto a = fit_complexity(sizes, lg);
    CHECK(a.model == ComplexityClass::Log);
    CHECK(a.r2 == Catch::Approx(1.0).margin(1e-12));
    CHECK(a.exponent_or_rate == Catch::Approx(3.0));

    const auto b = fit_complexity(sizes, sq);
    CHECK(b.model == ComplexityClass::Poly);
    CHECK(std::abs(b.exponent_or_rate - 2.0) < 0.01);
    CHECK(b.r2 >= 0.999);
    CHECK(b.big_o() == "O(n^2.00)");

    const auto c = fit_complexity(sizes, ex);
    CHECK(c.model == ComplexityClass::Exp);
    CHECK(c.r2 >= 0.999);
    CHECK(c.exponent_or_rate == Catch::Approx(0.001));

    const auto d = fit_complexity(sizes, std::vector<double>{2.0, 2.0, 2.0});
    CHECK(d.degenerate);
    CHECK(d.exponent_or_rate == 0.0);
    CHECK(std::isnan(d.r2));
    CHECK_THROWS_AS(fit_complexity(std::vector<double>{1, 2}, std::vector<double>{1, 2}), TooShort);
    CHECK_THROWS_AS(fit_complexity(sizes, std::vector<double>{1, -2, 3}), InvalidArgument);
    CHECK_THROWS_AS(fit_complexity(sizes, std::vector<double>{1, 2}), LengthMismatch);
}

TEST_CASE("run_benchmark records") {
    const std::vector<NamedSeries> data{{"flat", TimeSeries(std::vector<double>(40, 3.0))},
                                        {"tiny", TimeSeries({1.0, 2.0, 3.0})}};
    BaselineSpec naive;
    const auto records = run_benchmark(data, {baseline_algorithm("naive", naive), baseline_algorithm("naive2", naive)},
                                       5, 0);
    REQUIRE(records.size() == 4);
    const auto& flat = records[0];
    CHECK(flat.mad == 0.0);
    CHECK(std::isnan(flat.mase));
    CHECK(flat.error.empty());
    CHECK(std::isnan(records[1].mad));
    CHECK_FALSE(records[1].error.empty());
    CHECK(records[2].mad == records[0].mad);
    CHECK(std::isnan(records[2].mase));
}

TEST_CASE("identical algorithms under two names give identical rows") {
    const std::vector<NamedSeries> data{
        {"noisy", generate_synthetic(default_synthetic_spec(SyntheticFunction::CompositeSines, 120, 12.0, 5))}};
    const auto recs = run_benchmark(data, {spinex_algorithm({}, "S1"), spinex_algorithm({}, "S2")}, 5, 11);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].metrics() == recs[1].metrics());
}

TEST_CASE("SPINEX beats naive on exactly periodic data") {
    std::vector<double> v(200);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 20) / 20.0;
    const std::vector<NamedSeries> data{{"sawtooth", TimeSeries(v)}};
    const auto recs = run_benchmark(data, {spinex_algorithm(), baseline_algorithm("naive", {})}, 5, 0);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].mad < recs[1].mad);
}
