#include <doctest.h>

#include "pcs/baselines.hpp"
#include "pcs/errors.hpp"
#include "pcs/metrics.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace pcs;
using namespace pcs::test;

TEST_CASE("prediction error formula") {
    CHECK(pred_err_pct(10.0, 10.0) == 0.0);
    CHECK(pred_err_pct(20.0, 10.0) == doctest::Approx(100.0));
    CHECK(pred_err_pct(5.0, 10.0) == doctest::Approx(-50.0));
    CHECK_THROWS_AS(pred_err_pct(5.0, 0.0), ValidationError);
}

TEST_CASE("fft: single job finishes at its unhindered time") {
    const Trace trace = make_trace({make_job("a", 3.0, 12.0, 4)});
    const auto fft = compute_fft(trace, 8.0);
    CHECK(fft.at("a") == doctest::Approx(3.0 + 12.0 / 4.0));
}

TEST_CASE("fft: two identical single-unit jobs share the unit") {
    const Trace trace = make_trace({make_job("a", 0.0, 4.0), make_job("b", 0.0, 4.0)});
    const auto fft = compute_fft(trace, 1.0);
    CHECK(fft.at("a") == doctest::Approx(8.0));
    CHECK(fft.at("b") == doctest::Approx(8.0));
}

TEST_CASE("fft is policy independent and idempotent") {
    const WorkloadModel model = random_model(2, 40, 8, true);
    const Trace trace = model.generate(900);
    const auto a = compute_fft(trace, 8.0);
    const auto b = compute_fft(trace, 8.0);
    CHECK(a == b);
    // runs of other policies do not enter the oracle: recompute after a run
    SimConfig cfg;
    cfg.capacity = 8.0;
    SrsfPolicy policy;
    run_simulation(trace, policy, cfg);
    CHECK(compute_fft(trace, 8.0) == a);
}

TEST_CASE("unfairness formula and floor") {
    CHECK(unfairness_pct(10.0, 0.0, 10.0) == 0.0);   // exactly at fft
    CHECK(unfairness_pct(8.0, 0.0, 10.0) == 0.0);    // early finishers clamp to 0
    CHECK(unfairness_pct(15.0, 0.0, 10.0) == doctest::Approx(50.0));
    CHECK(unfairness_pct(15.0, 5.0, 15.0) == doctest::Approx(50.0)); // fair duration 10
    CHECK_THROWS_AS(unfairness_pct(1.0, 5.0, 5.0), ValidationError);
}

TEST_CASE("aggregate: mean and nearest-rank percentiles") {
    CHECK(aggregate({1.0, 2.0, 3.0}, Measure::avg()) == doctest::Approx(2.0));
    CHECK(aggregate({10.0, 20.0, 30.0, 40.0}, Measure::pct(99)) == 40.0);
    CHECK(aggregate({10.0, 20.0, 30.0, 40.0}, Measure::pct(50)) == 20.0);
    CHECK(aggregate({10.0, 20.0, 30.0, 40.0}, Measure::pct(100)) == 40.0);
    CHECK(aggregate({7.0}, Measure::avg()) == 7.0);
    CHECK(aggregate({7.0}, Measure::pct(1)) == 7.0);
    CHECK_THROWS_AS(aggregate({}, Measure::avg()), ValidationError);
    CHECK_THROWS_AS(Measure::pct(0), ValidationError);
    CHECK_THROWS_AS(Measure::pct(101), ValidationError);
}

TEST_CASE("percentiles are monotone in p and reach the maximum") {
    std::mt19937_64 rng(4);
    std::vector<double> values;
    for (int i = 0; i < 37; ++i)
        values.push_back(static_cast<double>(rng() % 10000) / 7.0);
    double prev = -1.0;
    for (int p = 1; p <= 100; ++p) {
        const double v = aggregate(values, Measure::pct(p));
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(prev == *std::max_element(values.begin(), values.end()));
}

TEST_CASE("evaluate_objectives follows the spec order and abs(pred_err)") {
    SimResult result;
    JobRecord a;
    a.id = "a";
    a.jct = 4.0;
    a.pred_err = -50.0;
    a.unfairness = 0.0;
    JobRecord b;
    b.id = "b";
    b.jct = 6.0;
    b.pred_err = 25.0;
    b.unfairness = 10.0;
    result.records = {a, b};

    ObjectiveSpec spec;
    spec.entries = {{Metric::Jct, Measure::avg()}, {Metric::PredErr, Measure::pct(99)}};
    const auto v = evaluate_objectives(result, spec);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == doctest::Approx(5.0));
    CHECK(v[1] == doctest::Approx(50.0)); // |−50| is the p99 of {50, 25}

    ObjectiveSpec repeat;
    repeat.entries = {{Metric::PredErr, Measure::avg()}, {Metric::PredErr, Measure::pct(50)}};
    const auto w = evaluate_objectives(result, repeat);
    CHECK(w[0] == doctest::Approx(37.5));
    CHECK(w[1] == doctest::Approx(25.0));
}

TEST_CASE("fifo exact-size runs aggregate to zero error at every measure") {
    const WorkloadModel model = random_model(0, 50, 8);
    const Trace trace = model.generate(5);
    SimConfig cfg;
    cfg.capacity = 8.0;
    FifoPolicy policy;
    const SimResult res = run_simulation(trace, policy, cfg);
    ObjectiveSpec spec;
    spec.entries = {{Metric::PredErr, Measure::avg()},
                    {Metric::PredErr, Measure::pct(50)},
                    {Metric::PredErr, Measure::pct(100)}};
    for (double v : evaluate_objectives(res, spec))
        CHECK(v == 0.0);
}

TEST_CASE("max-min runs are perfectly fair against their own oracle") {
    for (std::uint64_t variant = 0; variant < 4; ++variant) {
        const WorkloadModel model = random_model(variant, 50, 8, variant % 2 == 1);
        const Trace trace = model.generate(variant + 400);
        SimConfig cfg;
        cfg.capacity = 8.0;
        MaxMinPolicy policy;
        SimResult res = run_simulation(trace, policy, cfg);
        annotate_fairness(res, trace, 8.0);
        for (const auto& rec : res.records)
            CHECK(rec.unfairness == 0.0); // exactly zero
    }
}

TEST_CASE("metric and measure names parse") {
    CHECK(metric_from_string("jct") == Metric::Jct);
    CHECK(metric_from_string("pred_err") == Metric::PredErr);
    CHECK(metric_from_string("unfairness") == Metric::Unfairness);
    CHECK_THROWS_AS(metric_from_string("latency"), ValidationError);
    CHECK(measure_from_string("avg").is_avg);
    CHECK(measure_from_string("p99").percentile == 99);
    CHECK_THROWS_AS(measure_from_string("p0"), ValidationError);
    CHECK_THROWS_AS(measure_from_string("mean"), ValidationError);
}
