// eflbench: command-line front end for the Fermi-Hubbard effective-length
// benchmark toolkit. Subcommands mirror the pipeline stages: Hamiltonian and
// layout generation, reference energies, exact diagonalization, single VQE
// runs, benchmark sweeps, curve extraction, shot budgets and the invariant
// self-check.
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "efl/bench.hpp"
#include "efl/gaussian.hpp"
#include "efl/model.hpp"
#include "efl/selfcheck.hpp"
#include "efl/vqe.hpp"

namespace fs = std::filesystem;
using namespace efl;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct PhysicalArgs {
    int L = 2;
    double t = 1.0;
    double U = 8.0;
    double mu = 4.0;
    bool half_filling = false;

    HubbardParams params() const {
        return half_filling ? HubbardParams::half_filling(L, t, U) : HubbardParams{L, t, U, mu};
    }
};

void add_physical_options(CLI::App* cmd, PhysicalArgs& phys) {
    cmd->add_option("--L", phys.L, "chain length (sites)")->check(CLI::PositiveNumber);
    cmd->add_option("--t", phys.t, "hopping energy");
    cmd->add_option("--U", phys.U, "on-site interaction");
    cmd->add_option("--mu", phys.mu, "chemical potential");
    cmd->add_flag("--half-filling", phys.half_filling, "set mu = U/2");
}

std::string output_root() {
    if (const char* env = std::getenv("EFLBENCH_OUT")) return env;
    return ".";
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto dots = tok.find("..");
        if (dots != std::string::npos) {
            const std::uint64_t lo = std::stoull(tok.substr(0, dots));
            const std::uint64_t hi = std::stoull(tok.substr(dots + 2));
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        } else if (!tok.empty()) {
            seeds.push_back(std::stoull(tok));
        }
    }
    return seeds;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

std::string record_filename(const BenchmarkRecord& r) {
    return "record_L" + std::to_string(r.L) + "_" + ordering_name(r.ordering) + "_seed" +
           std::to_string(r.seed) + ".json";
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    f << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_records(const fs::path& dir, const std::vector<BenchmarkRecord>& records,
                   const SweepConfig& cfg) {
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["schema"] = 1;
    manifest["created"] = static_cast<long long>(std::time(nullptr));
    manifest["config"] = nlohmann::json::parse(cfg.to_json());
    manifest["records"] = nlohmann::json::array();
    for (const auto& r : records) {
        const std::string name = record_filename(r);
        write_file(dir / name, r.to_json());
        manifest["records"].push_back(name);
    }
    write_file(dir / "manifest.json", manifest.dump(2));
}

std::vector<BenchmarkRecord> load_records(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("record_", 0) == 0 && e.path().extension() == ".json")
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<BenchmarkRecord> records;
    for (const auto& f : files) records.push_back(BenchmarkRecord::from_json(read_file(f)));
    return records;
}

int cmd_hamiltonian(const PhysicalArgs& phys, bool prune, const std::string& out) {
    auto h = build_hamiltonian(phys.params());
    const std::string text = h.to_text(prune);
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    return 0;
}

int cmd_bethe(const std::vector<double>& ratios) {
    for (double u : ratios) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g %.6f", u, bethe_energy_density(u));
        std::cout << buf << '\n';
    }
    return 0;
}

int cmd_ed(const PhysicalArgs& phys, int n_particles) {
    const HubbardParams p = phys.params();
    const int n = n_particles < 0 ? p.target_particles() : n_particles;
    auto g = exact_ground_energy(p, n);
    const double density = g.energy / (p.L * p.t);
    std::cout << "L=" << p.L << " N=" << n << "\n";
    std::cout << "energy " << g.energy << "\n";
    std::cout << "density " << density << "\n";
    std::cout << "deviation " << energy_density_deviation(g.energy, p) << "\n";
    return 0;
}

int cmd_layout(const std::string& kind, int L, int rows, int cols) {
    DeviceGraph g = build_grid(rows, cols);
    CircuitOrdering ord = make_ordering(ordering_from_name(kind), L, g);
    nlohmann::json j;
    j["graph"] = nlohmann::json::parse(g.to_json());
    j["ordering"] = nlohmann::json::parse(ord.to_json(g));
    j["max_interaction_distance"] = ord.max_interaction_distance(g);
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_budget(const PhysicalArgs& phys, double eps, double rate) {
    auto b = measurement_budget(phys.params(), eps, rate);
    std::cout << "shots " << b.shots_rounded << " (" << b.shots << ")\n";
    std::cout << "wall_seconds " << b.wall_seconds << "\n";
    std::cout << "per_basis x " << b.shots_x << " y " << b.shots_y << " z " << b.shots_z << "\n";
    return 0;
}

int cmd_vqe(const SweepConfig& cfg, int L, const std::string& ordering, std::uint64_t seed,
            const std::string& out_dir) {
    SweepConfig one = cfg;
    one.lengths = {L};
    one.seeds = {seed};
    one.orderings = {ordering_from_name(ordering)};
    BenchmarkRecord rec = run_single(one, L, ordering_from_name(ordering), seed);
    const fs::path dir = out_dir.empty() ? fs::path(output_root()) / "eflbench-out" : fs::path(out_dir);
    write_records(dir, {rec}, one);
    if (rec.skipped) {
        std::cerr << "run skipped: " << rec.skip_reason << "\n";
        return kExitNumerical;
    }
    std::cout << "record " << (dir / record_filename(rec)).string() << "\n";
    std::cout << "final_energy " << rec.final_energy << "\n";
    std::cout << "deviation " << rec.deviation << "\n";
    std::cout << "final_depth " << rec.trace.final_depth << "\n";
    if (rec.trace.depth_cap_hit) {
        std::cerr << "depth cap " << rec.depth_cap << " reached after "
                  << rec.trace.stages.size() << " stages (bounded-depth limit)\n";
        return kExitNumerical;
    }
    return 0;
}

int cmd_bench(const SweepConfig& cfg, const std::string& out_dir, const std::string& csv,
              const std::string& svg) {
    const fs::path dir = out_dir.empty() ? fs::path(output_root()) / "eflbench-out" : fs::path(out_dir);
    auto records = run_benchmark(cfg);
    write_records(dir, records, cfg);
    int usable = 0;
    for (const auto& r : records) {
        if (r.skipped) {
            std::cout << "L=" << r.L << " " << ordering_name(r.ordering) << " seed=" << r.seed
                      << " skipped: " << r.skip_reason << "\n";
            continue;
        }
        ++usable;
        std::cout << "L=" << r.L << " " << ordering_name(r.ordering) << " seed=" << r.seed
                  << " energy=" << r.final_energy << " deviation=" << r.deviation << "\n";
    }
    std::cout << "records " << usable << " written to " << dir.string() << "\n";
    std::set<int> lengths;
    for (const auto& r : records)
        if (!r.skipped) lengths.insert(r.L);
    if (lengths.size() >= 2) {
        auto curve = extract_efl(records);
        std::cout << curve.to_json() << "\n";
        std::cout << "L_star " << curve.L_star << "\n";
        emit_plot_data(records, &curve, csv.empty() ? (dir / "curve.csv").string() : csv,
                       svg.empty() ? (dir / "curve.svg").string() : svg);
    }
    return 0;
}

int cmd_efl(const std::string& dir, const std::string& csv, const std::string& svg) {
    auto records = load_records(dir);
    if (records.empty()) {
        std::cerr << "no records found in " << dir << "\n";
        return kExitUsage;
    }
    auto curve = extract_efl(records);
    std::cout << curve.to_json() << "\n";
    std::cout << "L_star " << curve.L_star << "\n";
    if (!csv.empty() || !svg.empty()) emit_plot_data(records, &curve, csv, svg);
    return 0;
}

int cmd_check() {
    auto results = run_selfcheck();
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
        std::cout << "\n";
        all = all && r.pass;
    }
    return all ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D Fermi-Hubbard effective-length benchmark toolkit"};
    app.require_subcommand(1);

    // hamiltonian
    PhysicalArgs ham_phys;
    bool ham_prune = false;
    std::string ham_out;
    auto* ham = app.add_subcommand("hamiltonian", "print the qubit Hamiltonian, one term per line");
    add_physical_options(ham, ham_phys);
    ham->add_flag("--prune", ham_prune, "drop zero-coefficient terms");
    ham->add_option("-o,--out", ham_out, "write to file instead of stdout");

    // bethe
    std::vector<double> bethe_ratios;
    auto* bet = app.add_subcommand("bethe", "infinite-chain energy density per U/t value");
    bet->add_option("ratios", bethe_ratios, "U/t values")->required()->expected(-1);

    // ed
    PhysicalArgs ed_phys;
    int ed_n = -1;
    auto* ed = app.add_subcommand("ed", "exact diagonalization in a particle-number sector");
    add_physical_options(ed, ed_phys);
    ed->add_option("--N", ed_n, "particle number (default: half filling)");

    // layout
    std::string lay_kind = "interleaved";
    int lay_L = 2, lay_rows = 2, lay_cols = 2;
    auto* lay = app.add_subcommand("layout", "grid, edge patterns and the orbital-to-qubit map");
    lay->add_option("--kind", lay_kind, "interleaved | vertical | horizontal");
    lay->add_option("--L", lay_L, "chain length");
    lay->add_option("--rows", lay_rows, "grid rows");
    lay->add_option("--cols", lay_cols, "grid cols");

    // budget
    PhysicalArgs bud_phys;
    double bud_eps = 1e-2, bud_rate = 5000.0;
    auto* bud = app.add_subcommand("budget", "shot budget for a target energy-density accuracy");
    add_physical_options(bud, bud_phys);
    bud->add_option("--eps", bud_eps, "target energy density accuracy")->check(CLI::PositiveNumber);
    bud->add_option("--rate", bud_rate, "sample rate in Hz")->check(CLI::PositiveNumber);

    // shared sweep/config options for vqe and bench
    std::string cfg_file, out_dir, csv_path, svg_path;
    SweepConfig sweep;
    std::string lengths_arg, seeds_arg, orderings_arg;
    int stages = -1, iters = -1, depth_cap = -1, jobs = -1;
    double t_arg = -1, u_arg = -1;

    auto add_sweep_options = [&](CLI::App* cmd) {
        cmd->add_option("--config", cfg_file, "JSON config file (flags override its values)");
        cmd->add_option("--out", out_dir, "output directory (default $EFLBENCH_OUT/eflbench-out)");
        cmd->add_option("--lengths", lengths_arg, "comma-separated chain lengths");
        cmd->add_option("--seeds", seeds_arg, "seed list: 0,1,2 or 0..4");
        cmd->add_option("--orderings", orderings_arg, "comma-separated ordering kinds");
        cmd->add_option("--stages", stages, "extension stages after the first layer");
        cmd->add_option("--iters", iters, "optimizer iterations per stage");
        cmd->add_option("--depth-cap", depth_cap, "maximum ansatz depth (bounded-depth proxy)");
        cmd->add_option("--jobs", jobs, "worker threads");
        cmd->add_option("--t", t_arg, "hopping energy");
        cmd->add_option("--U", u_arg, "on-site interaction");
    };
    auto apply_sweep_flags = [&]() {
        if (!cfg_file.empty()) sweep = SweepConfig::from_json(read_file(cfg_file));
        if (!lengths_arg.empty()) sweep.lengths = parse_int_list(lengths_arg);
        if (!seeds_arg.empty()) sweep.seeds = parse_seed_list(seeds_arg);
        if (!orderings_arg.empty()) {
            sweep.orderings.clear();
            std::stringstream ss(orderings_arg);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) sweep.orderings.push_back(ordering_from_name(tok));
        }
        if (stages >= 0) sweep.train.n_stages = stages;
        if (iters >= 0) sweep.train.max_iters_per_stage = iters;
        if (depth_cap >= 0) sweep.train.depth_cap = depth_cap;
        if (jobs >= 0) sweep.jobs = jobs;
        if (t_arg > 0) sweep.t = t_arg;
        if (u_arg >= 0) sweep.U = u_arg;
    };

    // vqe
    int vqe_L = 2;
    std::string vqe_ordering = "interleaved";
    std::uint64_t vqe_seed = 0;
    int vqe_rows = -1, vqe_cols = -1;
    auto* vqe = app.add_subcommand("vqe", "one layer-by-layer training run, written as a record");
    vqe->add_option("--L", vqe_L, "chain length");
    vqe->add_option("--ordering", vqe_ordering, "interleaved | vertical | horizontal");
    vqe->add_option("--seed", vqe_seed, "run seed");
    vqe->add_option("--rows", vqe_rows, "grid rows (default: the sweep grid for L)");
    vqe->add_option("--cols", vqe_cols, "grid cols");
    add_sweep_options(vqe);

    // bench
    auto* ben = app.add_subcommand("bench", "benchmark sweep over lengths, orderings and seeds");
    add_sweep_options(ben);
    ben->add_option("--csv", csv_path, "curve CSV output path");
    ben->add_option("--svg", svg_path, "curve SVG output path");

    // efl
    std::string efl_dir;
    auto* efl = app.add_subcommand("efl", "extract the effective-length curve from a results dir");
    efl->add_option("--dir", efl_dir, "results directory")->required();
    efl->add_option("--csv", csv_path, "curve CSV output path");
    efl->add_option("--svg", svg_path, "curve SVG output path");

    // check
    auto* chk = app.add_subcommand("check", "run the invariant self-check suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (ham->parsed()) return cmd_hamiltonian(ham_phys, ham_prune, ham_out);
        if (bet->parsed()) return cmd_bethe(bethe_ratios);
        if (ed->parsed()) return cmd_ed(ed_phys, ed_n);
        if (lay->parsed()) return cmd_layout(lay_kind, lay_L, lay_rows, lay_cols);
        if (bud->parsed()) return cmd_budget(bud_phys, bud_eps, bud_rate);
        if (vqe->parsed()) {
            apply_sweep_flags();
            if (vqe_rows > 0 && vqe_cols > 0) sweep.grids[vqe_L] = {vqe_rows, vqe_cols};
            return cmd_vqe(sweep, vqe_L, vqe_ordering, vqe_seed, out_dir);
        }
        if (ben->parsed()) {
            apply_sweep_flags();
            return cmd_bench(sweep, out_dir, csv_path, svg_path);
        }
        if (efl->parsed()) return cmd_efl(efl_dir, csv_path, svg_path);
        if (chk->parsed()) return cmd_check();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
