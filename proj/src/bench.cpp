#include "efl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace efl {

using nlohmann::json;

BudgetEstimate measurement_budget(const HubbardParams& p, double epsilon_density,
                                  double sample_rate_hz) {
    p.validate();
    if (epsilon_density <= 0.0)
        throw std::invalid_argument("measurement_budget: epsilon must be > 0");
    if (sample_rate_hz <= 0.0)
        throw std::invalid_argument("measurement_budget: sample rate must be > 0");
    const double hop = 2.0 * (p.L - 1);
    const double sx = std::sqrt(hop * (p.t / 2.0) * (p.t / 2.0));
    const double sy = sx;
    const double sz = std::sqrt(static_cast<double>(p.L) * (p.U / 4.0) * (p.U / 4.0));
    const double s = sx + sy + sz;
    const double eps_energy = epsilon_density * p.L * p.t;
    BudgetEstimate b;
    b.shots = (s * s) / (eps_energy * eps_energy);
    b.shots_rounded = std::llround(b.shots);
    b.wall_seconds = b.shots / sample_rate_hz;
    if (s > 0.0) {
        b.shots_x = b.shots * sx / s;
        b.shots_y = b.shots * sy / s;
        b.shots_z = b.shots * sz / s;
    }
    return b;
}

namespace {

json train_config_json(const TrainConfig& t) {
    json j;
    j["initial_layers"] = t.initial_layers;
    j["layers_per_stage"] = t.layers_per_stage;
    j["n_stages"] = t.n_stages;
    j["init_low_first"] = t.init_low_first;
    j["init_high_first"] = t.init_high_first;
    j["init_low_new"] = t.init_low_new;
    j["init_high_new"] = t.init_high_new;
    j["max_iters_per_stage"] = t.max_iters_per_stage;
    j["max_evals_per_stage"] = t.max_evals_per_stage;
    j["depth_cap"] = t.depth_cap;
    j["energy_tol"] = t.energy_tol;
    j["constraint_tol"] = t.constraint_tol;
    j["step_tol"] = t.step_tol;
    std::string cycle;
    for (Pattern pat : t.pattern_cycle) cycle.push_back(pattern_name(pat));
    j["pattern_cycle"] = cycle;
    return j;
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig t;
    t.initial_layers = j.value("initial_layers", t.initial_layers);
    t.layers_per_stage = j.value("layers_per_stage", t.layers_per_stage);
    t.n_stages = j.value("n_stages", t.n_stages);
    t.init_low_first = j.value("init_low_first", t.init_low_first);
    t.init_high_first = j.value("init_high_first", t.init_high_first);
    t.init_low_new = j.value("init_low_new", t.init_low_new);
    t.init_high_new = j.value("init_high_new", t.init_high_new);
    t.max_iters_per_stage = j.value("max_iters_per_stage", t.max_iters_per_stage);
    t.max_evals_per_stage = j.value("max_evals_per_stage", t.max_evals_per_stage);
    t.depth_cap = j.value("depth_cap", t.depth_cap);
    t.energy_tol = j.value("energy_tol", t.energy_tol);
    t.constraint_tol = j.value("constraint_tol", t.constraint_tol);
    t.step_tol = j.value("step_tol", t.step_tol);
    if (j.contains("pattern_cycle")) {
        t.pattern_cycle.clear();
        for (char c : j["pattern_cycle"].get<std::string>())
            t.pattern_cycle.push_back(pattern_from_name(c));
    }
    return t;
}

}  // namespace

std::string SweepConfig::to_json() const {
    json j;
    j["lengths"] = lengths;
    j["grids"] = json::object();
    for (const auto& [L, g] : grids)
        j["grids"][std::to_string(L)] = {{"rows", g.rows}, {"cols", g.cols}};
    std::vector<std::string> ords;
    for (auto o : orderings) ords.push_back(ordering_name(o));
    j["orderings"] = ords;
    j["seeds"] = seeds;
    j["t"] = t;
    j["U"] = U;
    j["train"] = train_config_json(train);
    j["jobs"] = jobs;
    return j.dump(2);
}

SweepConfig SweepConfig::from_json(const std::string& text) {
    const json j = json::parse(text);
    SweepConfig c;
    if (j.contains("lengths")) c.lengths = j["lengths"].get<std::vector<int>>();
    if (j.contains("grids")) {
        c.grids.clear();
        for (auto it = j["grids"].begin(); it != j["grids"].end(); ++it)
            c.grids[std::stoi(it.key())] = {it.value()["rows"].get<int>(),
                                            it.value()["cols"].get<int>()};
    }
    if (j.contains("orderings")) {
        c.orderings.clear();
        for (const auto& s : j["orderings"]) c.orderings.push_back(ordering_from_name(s));
    }
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    c.t = j.value("t", c.t);
    c.U = j.value("U", c.U);
    if (j.contains("train")) c.train = train_config_from_json(j["train"]);
    c.jobs = j.value("jobs", c.jobs);
    return c;
}

std::string BenchmarkRecord::to_json() const {
    json j;
    j["schema"] = schema;
    j["L"] = L;
    j["grid"] = {{"rows", grid.rows}, {"cols", grid.cols}};
    j["ordering"] = ordering_name(ordering);
    j["seed"] = seed;
    j["depth_cap"] = depth_cap;
    j["params"] = {{"L", params.L}, {"t", params.t}, {"U", params.U}, {"mu", params.mu}};
    j["skipped"] = skipped;
    if (skipped) {
        j["skip_reason"] = skip_reason;
    } else {
        j["trace"] = json::parse(trace.to_json());
        j["final_energy"] = final_energy;
        j["deviation"] = deviation;
    }
    return j.dump(2);
}

BenchmarkRecord BenchmarkRecord::from_json(const std::string& text) {
    const json j = json::parse(text);
    BenchmarkRecord r;
    r.schema = j.value("schema", 1);
    r.L = j.at("L").get<int>();
    r.grid = {j.at("grid").at("rows").get<int>(), j.at("grid").at("cols").get<int>()};
    r.ordering = ordering_from_name(j.at("ordering").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.depth_cap = j.value("depth_cap", 33);
    r.params = {j.at("params").at("L").get<int>(), j.at("params").at("t").get<double>(),
                j.at("params").at("U").get<double>(), j.at("params").at("mu").get<double>()};
    r.skipped = j.value("skipped", false);
    if (r.skipped) {
        r.skip_reason = j.value("skip_reason", "");
        return r;
    }
    r.final_energy = j.at("final_energy").get<double>();
    r.deviation = j.at("deviation").get<double>();
    const json& tr = j.at("trace");
    r.trace.depth_cap_hit = tr.value("depth_cap_hit", false);
    r.trace.final_energy = tr.at("final_energy").get<double>();
    r.trace.final_depth = tr.at("final_depth").get<int>();
    r.trace.final_params = tr.at("final_params").get<std::vector<double>>();
    r.trace.best_energy = tr.at("best_energy").get<std::vector<double>>();
    for (const auto& js : tr.at("stages")) {
        StageRecord s;
        s.depth = js.at("depth").get<int>();
        s.iters = js.at("iters").get<int>();
        s.evals = js.at("evals").get<long>();
        s.energy = js.at("energy").get<double>();
        s.n_residual = js.at("n_residual").get<double>();
        s.params = js.at("params").get<std::vector<double>>();
        r.trace.stages.push_back(std::move(s));
    }
    const double recomputed = energy_density_deviation(r.final_energy, r.params);
    if (std::abs(recomputed - r.deviation) > 1e-12)
        throw std::runtime_error("BenchmarkRecord: stored deviation disagrees with recomputation");
    return r;
}

BenchmarkRecord run_single(const SweepConfig& cfg, int L, OrderingKind ordering,
                           std::uint64_t seed) {
    BenchmarkRecord rec;
    rec.L = L;
    rec.ordering = ordering;
    rec.seed = seed;
    rec.depth_cap = cfg.train.depth_cap;
    rec.params = HubbardParams::half_filling(L, cfg.t, cfg.U);
    const auto git = cfg.grids.find(L);
    rec.grid = git != cfg.grids.end() ? git->second : GridSpec{2, L};
    try {
        DeviceGraph graph = build_grid(rec.grid.rows, rec.grid.cols);
        CircuitOrdering ord = make_ordering(ordering, L, graph);
        VqeProblem problem(rec.params, graph, ord);
        TrainConfig train = cfg.train;
        train.seed = seed;
        rec.trace = layer_by_layer_train(train, problem);
        rec.final_energy = rec.trace.final_energy;
        rec.deviation = energy_density_deviation(rec.final_energy, rec.params);
    } catch (const topology_error& e) {
        rec.skipped = true;
        rec.skip_reason = e.what();
    }
    return rec;
}

std::vector<BenchmarkRecord> run_benchmark(const SweepConfig& cfg) {
    struct Point {
        int L;
        OrderingKind ordering;
        std::uint64_t seed;
    };
    std::vector<Point> points;
    for (int L : cfg.lengths)
        for (OrderingKind o : cfg.orderings)
            for (std::uint64_t s : cfg.seeds) points.push_back({L, o, s});

    std::vector<BenchmarkRecord> records(points.size());
    std::atomic<std::size_t> next{0};
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned jobs = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs) : hw;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            records[i] = run_single(cfg, points[i].L, points[i].ordering, points[i].seed);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < jobs && w < points.size(); ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return records;
}

std::string EflCurve::to_json() const {
    json j;
    j["L_star"] = L_star;
    j["points"] = json::array();
    for (const auto& p : points) {
        j["points"].push_back({{"L", p.L},
                               {"inv_L", 1.0 / p.L},
                               {"best_deviation", p.best_deviation}});
    }
    return j.dump(2);
}

EflCurve extract_efl(const std::vector<BenchmarkRecord>& records) {
    std::map<int, double> best;
    for (const auto& r : records) {
        if (r.skipped) continue;
        auto it = best.find(r.L);
        if (it == best.end() || r.deviation < it->second) best[r.L] = r.deviation;
    }
    if (best.size() < 2)
        throw std::invalid_argument("extract_efl: need at least two distinct chain lengths");
    EflCurve curve;
    for (const auto& [L, dev] : best) curve.points.push_back({L, dev});
    curve.L_star = curve.points.front().L;
    double lowest = curve.points.front().best_deviation;
    for (const auto& p : curve.points) {
        if (p.best_deviation < lowest) {  // strict: ties keep the smaller L
            lowest = p.best_deviation;
            curve.L_star = p.L;
        }
    }
    return curve;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string plot_csv(const std::vector<BenchmarkRecord>& records) {
    std::ostringstream os;
    os << "inv_L,deviation,L,ordering,seed\n";
    for (const auto& r : records) {
        if (r.skipped) continue;
        os << fmt(1.0 / r.L) << ',' << fmt(r.deviation) << ',' << r.L << ','
           << ordering_name(r.ordering) << ',' << r.seed << '\n';
    }
    return os.str();
}

std::vector<BenchmarkRecord> parse_plot_csv_records(const std::string& csv) {
    std::vector<BenchmarkRecord> out;
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        BenchmarkRecord r;
        std::getline(ls, tok, ',');
        std::getline(ls, tok, ',');
        r.deviation = std::stod(tok);
        std::getline(ls, tok, ',');
        r.L = std::stoi(tok);
        std::getline(ls, tok, ',');
        r.ordering = ordering_from_name(tok);
        std::getline(ls, tok, ',');
        r.seed = std::stoull(tok);
        out.push_back(std::move(r));
    }
    return out;
}

std::string plot_svg(const std::vector<BenchmarkRecord>& records, const EflCurve* curve) {
    const int width = 640, height = 440, m = 60;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << height - m << "\" x2=\"" << width - m << "\" y2=\""
       << height - m << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << height - m
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 16
       << "\" text-anchor=\"middle\" font-size=\"13\">1 / L</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 " << height / 2
       << ")\">energy density deviation</text>\n";

    double xmax = 0.0, ymax = 0.0;
    for (const auto& r : records) {
        if (r.skipped) continue;
        xmax = std::max(xmax, 1.0 / r.L);
        ymax = std::max(ymax, r.deviation);
    }
    if (xmax <= 0.0) xmax = 1.0;
    if (ymax <= 0.0) ymax = 1.0;
    xmax *= 1.1;
    ymax *= 1.15;
    auto px = [&](double x) { return m + x / xmax * (width - 2 * m); };
    auto py = [&](double y) { return height - m - std::max(0.0, y) / ymax * (height - 2 * m); };

    if (curve && curve->points.size() > 1) {
        os << "<polyline fill=\"none\" stroke=\"#267\" stroke-width=\"1.5\" points=\"";
        for (auto it = curve->points.rbegin(); it != curve->points.rend(); ++it)
            os << fmt(px(1.0 / it->L)) << ',' << fmt(py(it->best_deviation)) << ' ';
        os << "\"/>\n";
    }
    for (const auto& r : records) {
        if (r.skipped) continue;
        os << "<circle cx=\"" << fmt(px(1.0 / r.L)) << "\" cy=\"" << fmt(py(r.deviation))
           << "\" r=\"3.5\" fill=\"#d62\" fill-opacity=\"0.7\"/>\n";
    }
    if (curve) {
        for (const auto& p : curve->points) {
            if (p.L != curve->L_star) continue;
            os << "<circle cx=\"" << fmt(px(1.0 / p.L)) << "\" cy=\"" << fmt(py(p.best_deviation))
               << "\" r=\"7\" fill=\"none\" stroke=\"#267\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << fmt(px(1.0 / p.L) + 10) << "\" y=\""
               << fmt(py(p.best_deviation) - 10) << "\" font-size=\"13\">L* = " << p.L
               << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

void emit_plot_data(const std::vector<BenchmarkRecord>& records, const EflCurve* curve,
                    const std::string& csv_path, const std::string& svg_path) {
    auto write = [](const std::string& path, const std::string& content) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("emit_plot_data: cannot open " + path);
        f << content;
        if (!f) throw std::runtime_error("emit_plot_data: write failed for " + path);
    };
    if (!csv_path.empty()) write(csv_path, plot_csv(records));
    if (!svg_path.empty()) write(svg_path, plot_svg(records, curve));
}

}  // namespace efl
