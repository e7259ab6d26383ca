#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "efl/rng.hpp"
#include "efl/vqe.hpp"

using namespace efl;

namespace {

VqeProblem two_site_problem() {
    auto p = HubbardParams::half_filling(2, 1.0, 8.0);
    DeviceGraph g = build_grid(2, 2);
    CircuitOrdering ord = make_ordering(OrderingKind::Interleaved, 2, g);
    return VqeProblem(p, g, ord);
}

constexpr double kTwoSiteGround = -0.47213595499957939;

}  // namespace

TEST_CASE("objective at zero parameters is the fully occupied energy") {
    auto prob = two_site_problem();
    LayeredAnsatz ansatz(prob.graph, 1);
    CircuitEvaluator eval(ansatz, prob);
    CHECK(eval.energy(std::vector<double>(ansatz.n_params(), 0.0)) ==
          doctest::Approx(16.0).epsilon(1e-12));  // U L with every orbital filled
    CHECK(eval.n_residual(std::vector<double>(ansatz.n_params(), 0.0)) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("objective is invariant under swapping disjoint edges of a layer") {
    auto prob = two_site_problem();
    LayeredAnsatz ansatz(prob.graph, 1);  // pattern A: two disjoint vertical edges
    REQUIRE(ansatz.n_params() == 12);
    CircuitEvaluator eval(ansatz, prob);
    RngStream rng(8);
    std::vector<double> x(12);
    for (auto& v : x) v = rng.uniform(-2, 2);
    std::vector<double> swapped(12);
    for (int i = 0; i < 6; ++i) {
        swapped[i] = x[6 + i];
        swapped[6 + i] = x[i];
    }
    CHECK(eval.energy(x) == doctest::Approx(eval.energy(swapped)).epsilon(1e-12));
}

TEST_CASE("shift-rule gradient on a one-qubit analytic case") {
    // circuit RZ(a) |+>, observable X: <X>(a) = cos 2a, d/da = -2 sin 2a
    auto p = HubbardParams::half_filling(1, 1.0, 8.0);
    DeviceGraph g = build_grid(2, 1);
    CircuitOrdering ord = make_ordering(OrderingKind::Interleaved, 1, g);
    VqeProblem prob(p, g, ord);
    LayeredAnsatz ansatz(prob.graph, 1);  // one vertical edge, 6 params
    CircuitEvaluator eval(ansatz, prob);
    // park theta_x1 at pi/4 so qubit 0 reaches |+>-like support, then vary z1
    // simpler: observable has a known trig dependence; check shift vs fd
    PauliSum x0(2);
    x0.add_term(1.0, {{0, PauliOp::X}});
    RngStream rng(3);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> x(6);
        for (auto& v : x) v = rng.uniform(-2, 2);
        auto gs = eval.gradient_shift(x0, x);
        auto gf = eval.gradient_fd(x0, x, 1e-5);
        for (int i = 0; i < 6; ++i) CHECK(std::abs(gs[i] - gf[i]) < 1e-7);
    }
    // constant observable has zero gradient
    PauliSum c(2);
    c.add_identity(3.5);
    auto gz = eval.gradient_shift(c, std::vector<double>(6, 0.3));
    for (double v : gz) CHECK(v == 0.0);
}

TEST_CASE("explicit RZ derivative value") {
    // d<X>/dz at the point where the state is |+> on the derivative qubit:
    // set theta_x1 = -pi/4 (e^{i a X}), giving |+i>-like support; full check
    // against central differences at a non-trivial point
    auto prob = two_site_problem();
    LayeredAnsatz ansatz(prob.graph, 2);
    CircuitEvaluator eval(ansatz, prob);
    RngStream rng(17);
    std::vector<double> x(ansatz.n_params());
    for (auto& v : x) v = rng.uniform(-3, 3);
    auto gs = eval.gradient_shift(prob.energy_obs, x);
    auto gf = eval.gradient_fd(prob.energy_obs, x, 1e-5);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(gs[i] - gf[i]) < 1e-7);
}

TEST_CASE("the particle-number residual is differentiable") {
    auto prob = two_site_problem();
    LayeredAnsatz ansatz(prob.graph, 2);
    CircuitEvaluator eval(ansatz, prob);
    RngStream rng(41);
    std::vector<double> x(ansatz.n_params());
    for (auto& v : x) v = rng.uniform(-2, 2);
    auto gs = eval.gradient_shift(prob.number_obs, x);
    auto gf = eval.gradient_fd(prob.number_obs, x, 1e-5);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(gs[i] - gf[i]) < 1e-7);
}

TEST_CASE("gradient engines agree at random points across system sizes") {
    RngStream rng(1234);
    for (int L : {1, 2, 3, 4}) {
        auto p = HubbardParams::half_filling(L, 1.0, 8.0);
        DeviceGraph g = build_grid(2, L);
        CircuitOrdering ord = make_ordering(OrderingKind::Interleaved, L, g);
        VqeProblem prob(p, g, ord);
        LayeredAnsatz ansatz(g, 2);
        CircuitEvaluator eval(ansatz, prob);
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<double> x(ansatz.n_params());
            for (auto& v : x) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
            auto gs = eval.gradient_shift(prob.energy_obs, x);
            auto gf = eval.gradient_fd(prob.energy_obs, x, 1e-4);
            for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(gs[i] - gf[i]) < 1e-6);
        }
    }
}

TEST_CASE("sqp solves the textbook equality-constrained quadratic") {
    ScalarFn f = [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; };
    ScalarFn c = [](const std::vector<double>& x) { return x[0] + x[1] - 1.0; };
    GradFn gf = [](const std::vector<double>& x) { return std::vector<double>{2 * x[0], 2 * x[1]}; };
    GradFn gc = [](const std::vector<double>&) { return std::vector<double>{1.0, 1.0}; };
    SqpOptions opt;
    opt.f_tol = 1e-12;
    opt.constraint_tol = 1e-9;
    auto r = sqp_minimize(f, c, gf, gc, {3.0, -7.0}, opt);
    CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(r.x[1] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(r.f == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(std::abs(r.c) < 1e-8);
}

TEST_CASE("sqp matches a grid-refinement oracle on constrained rosenbrock") {
    // minimize (1-x)^2 + 100 (y - x^2)^2 subject to x + y = 1
    auto ros = [](double x, double y) {
        return (1 - x) * (1 - x) + 100.0 * (y - x * x) * (y - x * x);
    };
    // independent oracle: refine a 1D grid over the constraint line y = 1 - x
    double lo = -2.0, hi = 2.0;
    double best_x = 0;
    for (int round = 0; round < 6; ++round) {
        best_x = lo;
        double best = 1e300;
        const double step = (hi - lo) / 400.0;
        for (int k = 0; k <= 400; ++k) {
            const double x = lo + k * step;
            const double v = ros(x, 1 - x);
            if (v < best) {
                best = v;
                best_x = x;
            }
        }
        lo = best_x - step;
        hi = best_x + step;
    }
    const double oracle_x = best_x, oracle_f = ros(best_x, 1 - best_x);

    ScalarFn f = [&](const std::vector<double>& v) { return ros(v[0], v[1]); };
    ScalarFn c = [](const std::vector<double>& v) { return v[0] + v[1] - 1.0; };
    GradFn gf = [&](const std::vector<double>& v) {
        const double x = v[0], y = v[1];
        return std::vector<double>{-2 * (1 - x) - 400 * x * (y - x * x), 200 * (y - x * x)};
    };
    GradFn gc = [](const std::vector<double>&) { return std::vector<double>{1.0, 1.0}; };
    SqpOptions opt;
    opt.max_iters = 200;
    opt.f_tol = 1e-14;
    opt.constraint_tol = 1e-10;
    auto r = sqp_minimize(f, c, gf, gc, {0.0, 1.0}, opt);
    CHECK(std::abs(r.x[0] - oracle_x) < 1e-4);
    CHECK(std::abs(r.f - oracle_f) < 1e-6);
    CHECK(std::abs(r.c) < 1e-8);
}

TEST_CASE("unconstrained minimization works without a constraint callback") {
    ScalarFn f = [](const std::vector<double>& x) {
        return (x[0] - 2) * (x[0] - 2) + 3 * (x[1] + 1) * (x[1] + 1);
    };
    GradFn gf = [](const std::vector<double>& x) {
        return std::vector<double>{2 * (x[0] - 2), 6 * (x[1] + 1)};
    };
    SqpOptions opt;
    opt.f_tol = 1e-13;
    auto r = sqp_minimize(f, nullptr, gf, nullptr, {5.0, 5.0}, opt);
    CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r.x[1] == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("a vqe stage from a feasible start respects the variational bound") {
    auto prob = two_site_problem();
    LayeredAnsatz ansatz(prob.graph, 5);
    CircuitEvaluator eval(ansatz, prob);
    RngStream rng(5150);
    std::vector<double> x0(ansatz.n_params());
    for (auto& v : x0) v = rng.uniform(-0.3, 0.3);
    SqpOptions opt;
    opt.max_iters = 120;
    auto r = optimize_stage(eval, prob, x0, opt);
    CHECK(r.f >= kTwoSiteGround - 1e-9);
    CHECK(std::abs(r.c) <= 1e-4);
    CHECK(r.f < 0.0);  // made real progress from the fully occupied start
}

TEST_CASE("planned depths follow the staged schedule") {
    TrainConfig cfg;
    CHECK(planned_depths(cfg) == std::vector<int>{1, 5, 9, 13, 17, 21, 25, 29, 33});
    cfg.depth_cap = 9;
    CHECK(planned_depths(cfg) == std::vector<int>{1, 5, 9});
}

TEST_CASE("layer-by-layer training on the two-site chain") {
    auto prob = two_site_problem();
    TrainConfig cfg;
    cfg.n_stages = 3;
    cfg.max_iters_per_stage = 60;
    cfg.seed = 11;
    auto trace = layer_by_layer_train(cfg, prob);
    REQUIRE(!trace.stages.empty());
    // best-so-far sequence is non-increasing
    for (std::size_t i = 1; i < trace.best_energy.size(); ++i)
        CHECK(trace.best_energy[i] <= trace.best_energy[i - 1] + 1e-12);
    // stage depths follow the plan
    for (std::size_t i = 0; i < trace.stages.size(); ++i)
        CHECK(trace.stages[i].depth == 1 + 4 * static_cast<int>(i));
    // the two-site problem is easy at this depth
    CHECK(trace.final_energy >= kTwoSiteGround - 1e-9);
    CHECK(trace.final_energy < kTwoSiteGround + 0.05);
    CHECK(std::abs(trace.stages.back().n_residual) <= 1e-4);

    // determinism: identical seeds give identical traces
    auto again = layer_by_layer_train(cfg, prob);
    CHECK(again.to_json() == trace.to_json());
    // different seeds explore different starts
    cfg.seed = 12;
    auto other = layer_by_layer_train(cfg, prob);
    CHECK(other.to_json() != trace.to_json());
}

TEST_CASE("depth cap is a recorded signal, not a crash") {
    auto prob = two_site_problem();
    TrainConfig cfg;
    cfg.depth_cap = 3;
    cfg.n_stages = 8;
    cfg.max_iters_per_stage = 10;
    cfg.seed = 4;
    auto trace = layer_by_layer_train(cfg, prob);
    CHECK(trace.depth_cap_hit);
    CHECK(trace.stages.size() == 1);
    CHECK(trace.stages[0].depth == 1);
}

TEST_CASE("advanced trainer: zero gradient means zero step") {
    // U = 0 at half filling, theta = 0: the fully occupied reference is an
    // eigenstate of the hopping Hamiltonian, so the cost is stationary
    HubbardParams p{1, 1.0, 0.0, 0.0};
    DeviceGraph g = build_grid(2, 1);
    CircuitOrdering ord = make_ordering(OrderingKind::Interleaved, 1, g);
    VqeProblem prob(p, g, ord);
    LayeredAnsatz ansatz(g, 1);
    AdvancedConfig cfg;
    cfg.optimize_theta = false;
    cfg.max_iters = 5;
    auto trace = advanced_newton_train(ansatz, std::vector<double>(ansatz.n_params(), 0.0),
                                       GaussianRotation::identity(4),
                                       std::vector<double>(advanced_phi_count(1), 0.0), prob, cfg);
    CHECK(trace.final_omega == doctest::Approx(0.0));
    CHECK(trace.omega.size() == 1);  // no accepted steps: already stationary
    for (double v : trace.phi) CHECK(v == 0.0);
}

TEST_CASE("advanced trainer: phi-only optimization reaches the tight-binding mean field") {
    // U = 0, L = 2: Gaussian minimum = fill the two negative orbitals = -2t
    HubbardParams p{2, 1.0, 0.0, 0.0};
    DeviceGraph g = build_grid(2, 2);
    CircuitOrdering ord = make_ordering(OrderingKind::Interleaved, 2, g);
    VqeProblem prob(p, g, ord);
    LayeredAnsatz ansatz(g, 1);
    AdvancedConfig cfg;
    cfg.optimize_theta = false;
    cfg.max_iters = 200;
    RngStream rng(substream(99, "phi0").next_u64());
    std::vector<double> phi0(advanced_phi_count(2));
    for (auto& v : phi0) v = rng.uniform(-0.05, 0.05);
    auto trace = advanced_newton_train(ansatz, std::vector<double>(ansatz.n_params(), 0.0),
                                       GaussianRotation::identity(8), phi0, prob, cfg);
    CHECK(std::abs(trace.final_omega - (-2.0)) < 1e-6);
    CHECK(std::abs(trace.final_omega - mean_field_energy(p)) < 1e-6);
    // accepted costs are non-increasing
    for (std::size_t i = 1; i < trace.omega.size(); ++i)
        CHECK(trace.omega[i] <= trace.omega[i - 1] + 1e-15);
}

TEST_CASE("advanced trainer with frozen phi matches the sqp result on L=1") {
    auto p = HubbardParams::half_filling(1, 1.0, 8.0);
    DeviceGraph g = build_grid(2, 1);
    CircuitOrdering ord = make_ordering(OrderingKind::Interleaved, 1, g);
    VqeProblem prob(p, g, ord);
    LayeredAnsatz ansatz(g, 2);  // layers A and B; B is empty on 2x1

    CircuitEvaluator eval(ansatz, prob);
    RngStream rng(77);
    std::vector<double> x0(ansatz.n_params());
    for (auto& v : x0) v = rng.uniform(-0.4, 0.4);
    SqpOptions sopt;
    sopt.max_iters = 200;
    sopt.f_tol = 1e-12;
    auto sqp = optimize_stage(eval, prob, x0, sopt);

    AdvancedConfig cfg;
    cfg.optimize_phi = false;
    cfg.max_iters = 200;
    auto trace = advanced_newton_train(ansatz, x0, GaussianRotation::identity(4),
                                       std::vector<double>(advanced_phi_count(1), 0.0), prob, cfg);
    CHECK(std::abs(trace.final_energy - sqp.f) < 1e-6);
}

TEST_CASE("advanced trainer from the mean-field rotation never rises above it") {
    auto p = HubbardParams::half_filling(2, 1.0, 8.0);
    DeviceGraph g = build_grid(2, 2);
    CircuitOrdering ord = make_ordering(OrderingKind::Interleaved, 2, g);
    VqeProblem prob(p, g, ord);
    LayeredAnsatz ansatz(g, 1);
    auto mf = mean_field_state(p);
    AdvancedConfig cfg;
    cfg.max_iters = 25;
    auto trace = advanced_newton_train(ansatz, std::vector<double>(ansatz.n_params(), 0.0),
                                       mf.rotation, std::vector<double>(advanced_phi_count(2), 0.0),
                                       prob, cfg);
    CHECK(trace.omega.front() == doctest::Approx(mf.grand_energy).epsilon(1e-9));
    CHECK(trace.final_omega <= mf.grand_energy + 1e-12);
    // the exact grand-canonical ground value is a lower bound
    const double exact_grand = exact_ground_energy(p, 2).energy - p.mu * 2;
    CHECK(trace.final_omega >= exact_grand - 1e-9);
}
