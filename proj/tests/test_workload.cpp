#include <doctest.h>

#include "pcs/errors.hpp"
#include "pcs/synthetic.hpp"
#include "pcs/trace_io.hpp"
#include "test_util.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace pcs;
using namespace pcs::test;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

} // namespace

TEST_CASE("csv trace: single-resource job gets one linear demand point") {
    const auto path = temp_file("pcs_t1.csv");
    write_file(path, "job_id,arrival,size,max_gpus\nj1,0.0,100.0,1\n");
    const Trace trace = load_trace(path.string(), TraceFormat::Csv);
    REQUIRE(trace.jobs.size() == 1);
    CHECK(trace.jobs[0].id == "j1");
    CHECK(trace.jobs[0].arrival == 0.0);
    CHECK(trace.jobs[0].size == 100.0);
    CHECK(trace.jobs[0].max_alloc() == 1);
    CHECK(trace.jobs[0].demand->points().size() == 1);
}

TEST_CASE("csv trace: jobs re-sorted by arrival") {
    const auto path = temp_file("pcs_t2.csv");
    write_file(path, "job_id,arrival,size,max_gpus\na,5.0,10.0,1\nb,2.0,10.0,1\n");
    const Trace trace = load_trace(path.string(), TraceFormat::Csv);
    REQUIRE(trace.jobs.size() == 2);
    CHECK(trace.jobs[0].arrival == 2.0);
    CHECK(trace.jobs[1].arrival == 5.0);
}

TEST_CASE("csv trace: negative size is a validation error naming the row") {
    const auto path = temp_file("pcs_t3.csv");
    write_file(path, "job_id,arrival,size,max_gpus\nj1,0.0,10.0,1\nj2,1.0,-3,1\n");
    CHECK_THROWS_WITH_AS(load_trace(path.string(), TraceFormat::Csv),
                         doctest::Contains("row 3"), ValidationError);
}

TEST_CASE("csv trace: malformed rows are parse errors with the row number") {
    const auto path = temp_file("pcs_t4.csv");
    write_file(path, "job_id,arrival,size,max_gpus\nj1,zero,10.0,1\n");
    CHECK_THROWS_WITH_AS(load_trace(path.string(), TraceFormat::Csv),
                         doctest::Contains("row 2"), ParseError);
    const auto path2 = temp_file("pcs_t5.csv");
    write_file(path2, "job_id,arrival,size,max_gpus\nj1,0.0,10.0\n");
    CHECK_THROWS_AS(load_trace(path2.string(), TraceFormat::Csv), ParseError);
}

TEST_CASE("csv trace with speedup sidecar") {
    const auto sidecar = temp_file("pcs_speedup.json");
    write_file(sidecar, R"({"j1": {"1": 50.0, "2": 30.0, "4": 20.0}})");
    const auto path = temp_file("pcs_t6.csv");
    write_file(path, "job_id,arrival,size,max_gpus,speedup_file\n"
                     "j1,0.0,100.0,4,pcs_speedup.json\n");
    const Trace trace = load_trace(path.string(), TraceFormat::Csv);
    REQUIRE(trace.jobs.size() == 1);
    const auto& df = *trace.jobs[0].demand;
    // sidecar shape rescaled so exec(1) == size
    CHECK(df.points().front().exec_time == doctest::Approx(100.0));
    CHECK(df.speedup(2.0) == doctest::Approx(50.0 / 30.0));
    CHECK(df.speedup(4.0) == doctest::Approx(50.0 / 20.0));
}

TEST_CASE("json trace with inline demand") {
    const auto path = temp_file("pcs_t7.json");
    write_file(path, R"([{"job_id": "a", "arrival": 1.0, "size": 60.0, "max_gpus": 2,
                          "demand": {"1": 60.0, "2": 40.0}},
                         {"job_id": "b", "arrival": 0.5, "size": 10.0, "max_gpus": 1}])");
    const Trace trace = load_trace(path.string(), TraceFormat::Json);
    REQUIRE(trace.jobs.size() == 2);
    CHECK(trace.jobs[0].id == "b"); // sorted by arrival
    CHECK(trace.jobs[1].demand->speedup(2.0) == doctest::Approx(60.0 / 40.0));
    CHECK(trace.jobs[1].demand->max_alloc() == 2);
}

TEST_CASE("csv trace round-trips sublinear scaling through a sidecar") {
    const WorkloadModel model = random_model(1, 25, 8, true);
    const Trace trace = model.generate(123);
    const auto path = temp_file("pcs_rt.csv");
    save_trace_csv(trace, path.string());
    const Trace loaded = load_trace(path.string(), TraceFormat::Csv);
    REQUIRE(loaded.jobs.size() == trace.jobs.size());
    for (std::size_t i = 0; i < trace.jobs.size(); ++i) {
        CHECK(loaded.jobs[i].id == trace.jobs[i].id);
        CHECK(loaded.jobs[i].size == trace.jobs[i].size);
        CHECK(loaded.jobs[i].max_alloc() == trace.jobs[i].max_alloc());
        for (int g = 1; g <= trace.jobs[i].max_alloc(); ++g)
            CHECK(loaded.jobs[i].demand->speedup(g) ==
                  doctest::Approx(trace.jobs[i].demand->speedup(g)).epsilon(1e-12));
    }
}

TEST_CASE("json trace round-trips through save/load") {
    const WorkloadModel model = random_model(2, 30, 8, true);
    const Trace trace = model.generate(99);
    const auto path = temp_file("pcs_t8.json");
    save_trace_json(trace, path.string());
    const Trace loaded = load_trace(path.string(), TraceFormat::Json);
    REQUIRE(loaded.jobs.size() == trace.jobs.size());
    for (std::size_t i = 0; i < trace.jobs.size(); ++i) {
        CHECK(loaded.jobs[i].id == trace.jobs[i].id);
        CHECK(loaded.jobs[i].arrival == trace.jobs[i].arrival);
        CHECK(loaded.jobs[i].size == trace.jobs[i].size);
        CHECK(loaded.jobs[i].max_alloc() == trace.jobs[i].max_alloc());
    }
}

TEST_CASE("duplicate ids are rejected") {
    const auto path = temp_file("pcs_t9.csv");
    write_file(path, "job_id,arrival,size,max_gpus\nj1,0.0,10.0,1\nj1,1.0,5.0,1\n");
    CHECK_THROWS_AS(load_trace(path.string(), TraceFormat::Csv), ValidationError);
}

TEST_CASE("sidecar with increasing exec times is a validation error") {
    const auto sidecar = temp_file("pcs_bad_speedup.json");
    write_file(sidecar, R"({"j1": {"1": 50.0, "2": 80.0}})");
    const auto path = temp_file("pcs_t10.csv");
    write_file(path, "job_id,arrival,size,max_gpus,speedup_file\n"
                     "j1,0.0,100.0,2,pcs_bad_speedup.json\n");
    CHECK_THROWS_WITH_AS(load_trace(path.string(), TraceFormat::Csv),
                         doctest::Contains("exec_time increases"), ValidationError);
}

TEST_CASE("synthetic: job count and non-negative arrivals") {
    WorkloadModel model = random_model(0, 1, 4);
    model.n_jobs = 1;
    const Trace trace = model.generate(7);
    REQUIRE(trace.jobs.size() == 1);
    CHECK(trace.jobs[0].arrival >= 0.0);
    CHECK(trace.jobs[0].size > 0.0);
}

TEST_CASE("synthetic: identical seeds give identical traces") {
    const WorkloadModel model = random_model(1, 200, 16, true);
    const Trace a = model.generate(42);
    const Trace b = model.generate(42);
    REQUIRE(a.jobs.size() == b.jobs.size());
    for (std::size_t i = 0; i < a.jobs.size(); ++i) {
        CHECK(a.jobs[i].id == b.jobs[i].id);
        CHECK(a.jobs[i].arrival == b.jobs[i].arrival);
        CHECK(a.jobs[i].size == b.jobs[i].size);
        CHECK(a.jobs[i].max_alloc() == b.jobs[i].max_alloc());
    }
    const Trace c = model.generate(43);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.jobs.size() && i < c.jobs.size(); ++i)
        if (a.jobs[i].size != c.jobs[i].size)
            any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("synthetic: heavy-tailed sizes have high variation") {
    WorkloadModel model;
    model.n_jobs = 1000;
    model.load = 0.8;
    model.capacity = 64;
    model.size_dist = SizeDist::heavy_tailed(1.5, 1.0);
    model.max_alloc_dist = MaxAllocDist::power_of_two(16);
    const Trace trace = model.generate(1);
    std::vector<double> sizes;
    for (const auto& job : trace.jobs)
        sizes.push_back(job.size);
    CHECK(sample_c2(sizes) > 1.0);
}

TEST_CASE("synthetic: arrival rate tracks the requested load") {
    WorkloadModel model;
    model.n_jobs = 4000;
    model.load = 0.6;
    model.capacity = 32;
    model.size_dist = SizeDist::light_tailed(50.0);
    model.max_alloc_dist = MaxAllocDist::constant(2);
    const Trace trace = model.generate(11);
    double work = 0.0;
    for (const auto& job : trace.jobs)
        work += job.size; // linear jobs: resource-time == size
    const double span = trace.jobs.back().arrival;
    const double offered = work / (span * model.capacity);
    CHECK(offered == doctest::Approx(0.6).epsilon(0.10));
}

TEST_CASE("synthetic: invalid parameters are rejected") {
    WorkloadModel model = random_model(0);
    model.load = 1.5;
    CHECK_THROWS_AS(model.generate(1), ValidationError);
    CHECK_THROWS_AS(SizeDist::heavy_tailed(0.9, 1.0), ValidationError);
    CHECK_THROWS_AS(SizeDist::bimodal(1.4, 1.0, 2.0), ValidationError);
    CHECK_THROWS_AS(MaxAllocDist::uniform_int(4, 2), ValidationError);
}

TEST_CASE("size error injection: zero error is the identity") {
    const Trace trace = random_model(2, 50, 8).generate(5);
    const Trace noisy = inject_size_error(trace, 0.0, 17);
    for (std::size_t i = 0; i < trace.jobs.size(); ++i)
        CHECK(noisy.jobs[i].size == trace.jobs[i].size);
}

TEST_CASE("size error injection: bounded, seeded, keeps true sizes") {
    const Trace trace = random_model(0, 80, 8).generate(5);
    const Trace a = inject_size_error(trace, 0.2, 17);
    const Trace b = inject_size_error(trace, 0.2, 17);
    bool any_changed = false;
    for (std::size_t i = 0; i < trace.jobs.size(); ++i) {
        CHECK(a.jobs[i].size >= trace.jobs[i].true_size * 0.8 - 1e-12);
        CHECK(a.jobs[i].size <= trace.jobs[i].true_size * 1.2 + 1e-12);
        CHECK(a.jobs[i].true_size == trace.jobs[i].true_size);
        CHECK(a.jobs[i].size == b.jobs[i].size); // deterministic per seed
        if (a.jobs[i].size != trace.jobs[i].size)
            any_changed = true;
    }
    CHECK(any_changed);
}

TEST_CASE("arrival ties sort by id") {
    Trace trace = make_trace({make_job("b", 1.0, 5.0), make_job("a", 1.0, 4.0),
                              make_job("c", 0.5, 3.0)});
    CHECK(trace.jobs[0].id == "c");
    CHECK(trace.jobs[1].id == "a");
    CHECK(trace.jobs[2].id == "b");
}
