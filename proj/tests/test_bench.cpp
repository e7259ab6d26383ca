#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "efl/bench.hpp"
#include "efl/rng.hpp"

using namespace efl;

namespace {

BenchmarkRecord fake_record(int L, OrderingKind ord, std::uint64_t seed, double deviation) {
    BenchmarkRecord r;
    r.L = L;
    r.ordering = ord;
    r.seed = seed;
    r.params = HubbardParams::half_filling(L, 1.0, 8.0);
    r.deviation = deviation;
    // keep the record self-consistent: energy matching the deviation
    r.final_energy = (deviation + bethe_energy_density(8.0)) * L * 1.0;
    r.trace.final_energy = r.final_energy;
    r.trace.final_depth = 1;
    r.trace.best_energy = {r.final_energy};
    StageRecord s;
    s.depth = 1;
    s.energy = r.final_energy;
    r.trace.stages.push_back(s);
    return r;
}

}  // namespace

TEST_CASE("measurement budget reproduces the published anchors") {
    auto p = HubbardParams::half_filling(2, 1.0, 8.0);
    auto b = measurement_budget(p, 1e-2, 5000.0);
    CHECK(b.shots_rounded == 45000);
    CHECK(b.wall_seconds == doctest::Approx(9.0).epsilon(1e-12));
    auto b2 = measurement_budget(p, 1e-3, 5000.0);
    CHECK(b2.shots_rounded == 4500000);
    CHECK(b2.wall_seconds == doctest::Approx(900.0).epsilon(1e-12));
    // allocation: basis shares are proportional to sqrt(sum c^2)
    CHECK(b.shots_x == doctest::Approx(b.shots_y));
    CHECK(b.shots_x + b.shots_y + b.shots_z == doctest::Approx(b.shots));
    CHECK_THROWS_AS(measurement_budget(p, -1.0, 5000.0), std::invalid_argument);
}

TEST_CASE("per-density shot count follows the 1/(L eps^2) trend within factor two") {
    double lo = 1e300, hi = 0.0;
    for (int L : {2, 4, 8, 16}) {
        auto p = HubbardParams::half_filling(L, 1.0, 8.0);
        const double eps = 1e-2;
        const double scaled = measurement_budget(p, eps, 5000.0).shots * L * eps * eps;
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
    }
    CHECK(hi / lo <= 2.0);
    // total shots grow sub-quadratically in L at fixed density accuracy
    auto shots_of = [](int L) {
        return measurement_budget(HubbardParams::half_filling(L, 1.0, 8.0), 1e-2, 5000.0).shots;
    };
    CHECK(shots_of(16) / shots_of(2) < (16.0 * 16.0) / (2.0 * 2.0));
}

TEST_CASE("efl extraction: argmin with smaller-L tie break") {
    std::vector<BenchmarkRecord> recs;
    recs.push_back(fake_record(2, OrderingKind::Interleaved, 0, 0.09));
    recs.push_back(fake_record(4, OrderingKind::Interleaved, 0, 0.05));
    recs.push_back(fake_record(6, OrderingKind::Interleaved, 0, 0.03));
    recs.push_back(fake_record(8, OrderingKind::Interleaved, 0, 0.15));
    auto curve = extract_efl(recs);
    CHECK(curve.L_star == 6);
    REQUIRE(curve.points.size() == 4);
    CHECK(curve.points[0].L == 2);

    // monotone decreasing -> largest L wins
    std::vector<BenchmarkRecord> mono;
    for (int L : {2, 4, 6}) mono.push_back(fake_record(L, OrderingKind::Vertical, 0, 1.0 / L));
    CHECK(extract_efl(mono).L_star == 6);

    // exact tie -> smaller L
    std::vector<BenchmarkRecord> tie;
    tie.push_back(fake_record(2, OrderingKind::Vertical, 0, 0.25));
    tie.push_back(fake_record(4, OrderingKind::Vertical, 0, 0.25));
    CHECK(extract_efl(tie).L_star == 2);

    // fewer than two lengths is an error
    std::vector<BenchmarkRecord> one{fake_record(2, OrderingKind::Vertical, 0, 0.1)};
    CHECK_THROWS_AS(extract_efl(one), std::invalid_argument);

    // best over seeds/orderings per L
    std::vector<BenchmarkRecord> multi;
    multi.push_back(fake_record(2, OrderingKind::Interleaved, 0, 0.30));
    multi.push_back(fake_record(2, OrderingKind::Vertical, 1, 0.10));
    multi.push_back(fake_record(4, OrderingKind::Interleaved, 0, 0.20));
    auto c2 = extract_efl(multi);
    CHECK(c2.points[0].best_deviation == doctest::Approx(0.10));
    CHECK(c2.L_star == 2);
}

TEST_CASE("efl argmin property against a brute-force oracle on random curves") {
    RngStream rng(909);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform(0, 5));
        std::vector<BenchmarkRecord> recs;
        std::vector<std::pair<int, double>> pts;
        for (int i = 0; i < n; ++i) {
            const int L = 2 * (i + 1);
            // quantized deviations so exact ties occur regularly
            const double dev = std::floor(rng.uniform(0, 5)) / 8.0 + 0.01;
            recs.push_back(fake_record(L, OrderingKind::Interleaved, 0, dev));
            pts.push_back({L, dev});
        }
        auto curve = extract_efl(recs);
        int want = pts[0].first;
        double best = pts[0].second;
        for (const auto& [L, dev] : pts)
            if (dev < best) {
                best = dev;
                want = L;
            }
        CHECK(curve.L_star == want);
    }
}

TEST_CASE("record json round-trip and self-consistency guard") {
    auto rec = fake_record(2, OrderingKind::Horizontal, 7, 0.125);
    const std::string text = rec.to_json();
    auto back = BenchmarkRecord::from_json(text);
    CHECK(back.L == rec.L);
    CHECK(back.seed == rec.seed);
    CHECK(back.ordering == rec.ordering);
    CHECK(back.deviation == rec.deviation);
    CHECK(back.final_energy == rec.final_energy);
    CHECK(back.trace.stages.size() == rec.trace.stages.size());
    CHECK(back.to_json() == text);

    // corrupt the stored deviation: loading must fail the consistency check
    std::string bad = text;
    const std::string needle = "\"deviation\":";
    const auto pos = bad.find(needle);
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, needle.size() + 6, "\"deviation\": 9.9");
    CHECK_THROWS_AS(BenchmarkRecord::from_json(bad), std::runtime_error);
}

TEST_CASE("plot emission: header-only for empty input, one row per record, parse-back") {
    CHECK(plot_csv({}) == "inv_L,deviation,L,ordering,seed\n");
    const std::string empty_svg = plot_svg({}, nullptr);
    CHECK(empty_svg.find("<svg") != std::string::npos);

    // one point -> exactly one data row
    const std::string single = plot_csv({fake_record(2, OrderingKind::Interleaved, 0, 0.5)});
    CHECK(std::count(single.begin(), single.end(), '\n') == 2);

    std::vector<BenchmarkRecord> recs;
    recs.push_back(fake_record(2, OrderingKind::Interleaved, 3, 0.25));
    recs.push_back(fake_record(4, OrderingKind::Vertical, 1, 0.125));
    const std::string csv = plot_csv(recs);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    auto back = parse_plot_csv_records(csv);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].L == recs[i].L);
        CHECK(back[i].deviation == recs[i].deviation);
        CHECK(back[i].ordering == recs[i].ordering);
        CHECK(back[i].seed == recs[i].seed);
    }
    // byte stability
    CHECK(plot_csv(recs) == csv);
    auto curve = extract_efl(recs);
    CHECK(plot_svg(recs, &curve) == plot_svg(recs, &curve));
}

TEST_CASE("sweep config json round-trip") {
    SweepConfig cfg;
    cfg.lengths = {2, 4};
    cfg.seeds = {0, 1, 2};
    cfg.train.n_stages = 3;
    cfg.train.depth_cap = 9;
    cfg.jobs = 2;
    auto back = SweepConfig::from_json(cfg.to_json());
    CHECK(back.lengths == cfg.lengths);
    CHECK(back.seeds == cfg.seeds);
    CHECK(back.train.n_stages == 3);
    CHECK(back.train.depth_cap == 9);
    CHECK(back.jobs == 2);
    CHECK(back.to_json() == cfg.to_json());
}

TEST_CASE("small sweep: determinism, ordering independence of scheduling, skips") {
    SweepConfig cfg;
    cfg.lengths = {2};
    cfg.seeds = {0, 1};
    cfg.orderings = {OrderingKind::Interleaved, OrderingKind::Vertical};
    cfg.train.n_stages = 1;
    cfg.train.max_iters_per_stage = 25;
    cfg.jobs = 2;
    auto a = run_benchmark(cfg);
    auto b = run_benchmark(cfg);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].to_json() == b[i].to_json());
    cfg.jobs = 1;
    auto c = run_benchmark(cfg);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].to_json() == c[i].to_json());
    for (const auto& r : a) {
        CHECK_FALSE(r.skipped);
        CHECK(r.deviation == doctest::Approx(energy_density_deviation(r.final_energy, r.params)));
    }

    // incompatible layout is recorded, not thrown: interleaved on a 4x4 grid
    SweepConfig bad;
    bad.lengths = {8};
    bad.seeds = {0};
    bad.orderings = {OrderingKind::Interleaved};
    bad.train.n_stages = 0;
    auto skipped = run_benchmark(bad);
    REQUIRE(skipped.size() == 1);
    CHECK(skipped[0].skipped);
    CHECK(!skipped[0].skip_reason.empty());
}
