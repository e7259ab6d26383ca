#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "efl/ansatz.hpp"
#include "efl/gaussian.hpp"
#include "efl/model.hpp"

namespace efl {

struct optimizer_stall_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem bundle: physical parameters plus the observables relabeled from
// Jordan-Wigner chain positions to the grid register the circuits run on.
struct VqeProblem {
    HubbardParams params;
    DeviceGraph graph;
    CircuitOrdering ordering;
    PauliSum energy_obs;  // <H> + mu <N> functional on register qubits
    PauliSum number_obs;  // N on register qubits

    VqeProblem(const HubbardParams& p, const DeviceGraph& g, const CircuitOrdering& ord);
    int n_register() const { return graph.n_nodes(); }
};

// Runs the ansatz circuit and evaluates observables; counts every state
// preparation as one evaluation.
class CircuitEvaluator {
public:
    CircuitEvaluator(const LayeredAnsatz& ansatz, const VqeProblem& problem);

    double energy(const std::vector<double>& x) const;
    double n_residual(const std::vector<double>& x) const;  // <N> - L
    std::pair<double, double> energy_and_residual(const std::vector<double>& x) const;
    double observable(const PauliSum& obs, const std::vector<double>& x) const;

    // d<obs>/dx via the parameter-shift rule applied per primitive gate
    // (each primitive is e^{i beta P}; the exchange angle feeds two of them
    // and the chain rule sums their contributions).
    std::vector<double> gradient_shift(const PauliSum& obs, const std::vector<double>& x) const;
    // central finite differences
    std::vector<double> gradient_fd(const PauliSum& obs, const std::vector<double>& x,
                                    double h = 1e-4) const;

    long evals() const { return evals_; }
    void reset_evals() { evals_ = 0; }
    int n_params() const { return n_params_; }

    StateVector prepare(const std::vector<double>& x) const;

private:
    std::vector<PrimGate> circuit_;
    const VqeProblem* problem_;
    int n_params_;
    mutable long evals_ = 0;
};

// Sequential quadratic programming with damped BFGS curvature, a single
// linearized equality constraint and an l1 merit line search.
struct SqpOptions {
    int max_iters = 100;
    long max_evals = 0;  // 0: no evaluation budget
    double step_tol = 1e-8;
    double f_tol = 1e-6;
    double constraint_tol = 1e-4;
};

struct SqpResult {
    std::vector<double> x;
    double f = 0.0;
    double c = 0.0;
    int iters = 0;
    long evals = 0;  // objective evaluations observed through the callbacks
    bool converged = false;
};

using ScalarFn = std::function<double(const std::vector<double>&)>;
using GradFn = std::function<std::vector<double>(const std::vector<double>&)>;

// constraint/grad_c may be empty for unconstrained minimization.
SqpResult sqp_minimize(const ScalarFn& f, const ScalarFn& c, const GradFn& grad_f,
                       const GradFn& grad_c, std::vector<double> x0, const SqpOptions& opt);

// One optimization stage on the VQE problem: minimize the energy subject to
// <N> = L with the parameter-shift gradient engine.
SqpResult optimize_stage(const CircuitEvaluator& eval, const VqeProblem& problem,
                         std::vector<double> x0, const SqpOptions& opt);

struct TrainConfig {
    int initial_layers = 1;
    int layers_per_stage = 4;
    int n_stages = 8;
    double init_low_first = 0.0;
    double init_high_first = 2.0 * std::numbers::pi;
    double init_low_new = -std::numbers::pi / 10.0;
    double init_high_new = std::numbers::pi / 10.0;
    int max_iters_per_stage = 100;  // optimizer iterations ("optimization steps")
    long max_evals_per_stage = 0;   // optional cap on objective evaluations
    int depth_cap = 33;
    double energy_tol = 1e-6;
    double constraint_tol = 1e-4;
    double step_tol = 1e-8;
    std::uint64_t seed = 0;
    std::vector<Pattern> pattern_cycle{Pattern::A, Pattern::B, Pattern::C, Pattern::D};
};

// Ansatz depth after each stage of the schedule.
std::vector<int> planned_depths(const TrainConfig& cfg);

struct StageRecord {
    int depth = 0;
    int iters = 0;
    long evals = 0;
    double energy = 0.0;
    double n_residual = 0.0;
    std::vector<double> params;
};

struct TrainTrace {
    std::vector<StageRecord> stages;
    std::vector<double> best_energy;  // best-so-far after each stage (non-increasing)
    bool depth_cap_hit = false;
    double final_energy = 0.0;
    int final_depth = 0;
    std::vector<double> final_params;

    std::string to_json() const;
};

// Layer-by-layer training: optimize the initial layers from a wide random
// start, then repeatedly append near-identity layers (retaining the old
// parameters) and re-optimize everything. Stops after n_stages, when the
// inter-stage improvement drops below energy_tol, or at the depth cap (the
// cap is recorded in the trace, not thrown).
TrainTrace layer_by_layer_train(const TrainConfig& cfg, const VqeProblem& problem);

// Newton trainer over circuit parameters theta and a classically conjugated
// Gaussian frame phi (one angle per mode plane, R_k = e^{4 phi_k h_k},
// composed left to right onto a base rotation). The cost is the
// grand-canonical expectation tr(K(phi) rho(theta)) with K the full
// Hamiltonian including the chemical potential.
struct AdvancedConfig {
    int max_iters = 60;
    double lambda0 = 1e-3;
    double lambda_max = 1e12;
    double grad_tol = 1e-9;
    double theta_fd_step = 1e-4;
    bool optimize_theta = true;
    bool optimize_phi = true;
};

struct AdvancedTrace {
    std::vector<double> omega;  // accepted cost sequence (non-increasing)
    double final_omega = 0.0;   // grand-canonical cost
    double final_energy = 0.0;  // final_omega + mu <N>
    double final_n = 0.0;
    std::vector<double> theta, phi;
    int iters = 0;
};

AdvancedTrace advanced_newton_train(const LayeredAnsatz& ansatz, std::vector<double> theta0,
                                    const GaussianRotation& base, std::vector<double> phi0,
                                    const VqeProblem& problem, const AdvancedConfig& cfg);

// Number of phi angles for a register of 2L Jordan-Wigner positions.
int advanced_phi_count(int L);

}  // namespace efl
