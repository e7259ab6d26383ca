#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "efl/ansatz.hpp"
#include "efl/model.hpp"
#include "efl/vqe.hpp"

namespace efl {

// Shot budget for estimating the energy density to epsilon_density, grouping
// the energy terms into the three product measurement bases. Per-term
// variance is bounded by 1 with zero intra-group covariance; shots are split
// across bases proportionally to sqrt(sum of squared coefficients), which
// gives total = (sum_b sqrt(sum_b c^2))^2 / (eps_density L t)^2.
struct BudgetEstimate {
    double shots = 0.0;
    std::int64_t shots_rounded = 0;
    double wall_seconds = 0.0;
    double shots_x = 0.0, shots_y = 0.0, shots_z = 0.0;
};

BudgetEstimate measurement_budget(const HubbardParams& p, double epsilon_density,
                                  double sample_rate_hz);

struct GridSpec {
    int rows = 2;
    int cols = 2;
};

struct SweepConfig {
    std::vector<int> lengths{2, 4, 6, 8};
    std::map<int, GridSpec> grids{{2, {2, 2}}, {4, {2, 4}}, {6, {2, 6}}, {8, {4, 4}}};
    std::vector<OrderingKind> orderings{OrderingKind::Interleaved, OrderingKind::Vertical,
                                        OrderingKind::Horizontal};
    std::vector<std::uint64_t> seeds{0};
    double t = 1.0;
    double U = 8.0;
    TrainConfig train;  // seed field is overridden per sweep point
    int jobs = 0;       // 0: hardware concurrency

    std::string to_json() const;
    static SweepConfig from_json(const std::string& text);
};

struct BenchmarkRecord {
    int schema = 1;
    int L = 0;
    GridSpec grid;
    OrderingKind ordering = OrderingKind::Interleaved;
    std::uint64_t seed = 0;
    int depth_cap = 33;
    HubbardParams params;
    TrainTrace trace;
    double final_energy = 0.0;
    double deviation = 0.0;
    bool skipped = false;
    std::string skip_reason;

    std::string to_json() const;
    // Re-derives the deviation from the stored energy and parameters and
    // fails if it disagrees with the stored value beyond 1e-12.
    static BenchmarkRecord from_json(const std::string& text);
};

// One record per (L, ordering, seed); incompatible layouts are recorded as
// skipped. Points run on a small thread pool; results are ordered by sweep
// point, independent of scheduling.
std::vector<BenchmarkRecord> run_benchmark(const SweepConfig& cfg);

// Single sweep point (used by the CLI vqe subcommand).
BenchmarkRecord run_single(const SweepConfig& cfg, int L, OrderingKind ordering,
                           std::uint64_t seed);

struct EflPoint {
    int L = 0;
    double best_deviation = 0.0;
};

struct EflCurve {
    std::vector<EflPoint> points;  // ascending L
    int L_star = 0;

    std::string to_json() const;
};

// Best deviation per chain length; L_star is the argmin with ties resolved
// toward the smaller L. Needs at least two distinct lengths.
EflCurve extract_efl(const std::vector<BenchmarkRecord>& records);

// CSV (inv_L, deviation, L, ordering, seed) plus an SVG rendering of the
// deviation-vs-1/L scatter with the per-L envelope. Byte-stable for fixed
// input.
std::string plot_csv(const std::vector<BenchmarkRecord>& records);
std::string plot_svg(const std::vector<BenchmarkRecord>& records, const EflCurve* curve);
void emit_plot_data(const std::vector<BenchmarkRecord>& records, const EflCurve* curve,
                    const std::string& csv_path, const std::string& svg_path);

std::vector<BenchmarkRecord> parse_plot_csv_records(const std::string& csv);

}  // namespace efl
