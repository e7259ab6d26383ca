#include "efl/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "efl/rng.hpp"

namespace efl {

namespace {
constexpr double kShift = std::numbers::pi / 4.0;
}

VqeProblem::VqeProblem(const HubbardParams& p, const DeviceGraph& g, const CircuitOrdering& ord)
    : params(p), graph(g), ordering(ord) {
    if (ord.L() != p.L) throw std::invalid_argument("VqeProblem: ordering L mismatch");
    const auto map = jw_to_register_map(ord);
    energy_obs = build_energy_functional(p).relabeled(map, graph.n_nodes());
    number_obs = build_number_operator(p.L).relabeled(map, graph.n_nodes());
}

CircuitEvaluator::CircuitEvaluator(const LayeredAnsatz& ansatz, const VqeProblem& problem)
    : circuit_(ansatz.prim_circuit()), problem_(&problem), n_params_(ansatz.n_params()) {}

StateVector CircuitEvaluator::prepare(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_params_)
        throw std::invalid_argument("CircuitEvaluator: parameter count mismatch");
    ++evals_;
    StateVector s = new_zero_state(problem_->n_register());
    run_circuit(s, circuit_, x);
    return s;
}

double CircuitEvaluator::energy(const std::vector<double>& x) const {
    return expectation(prepare(x), problem_->energy_obs);
}

double CircuitEvaluator::n_residual(const std::vector<double>& x) const {
    return expectation(prepare(x), problem_->number_obs) - problem_->params.L;
}

std::pair<double, double> CircuitEvaluator::energy_and_residual(const std::vector<double>& x) const {
    const StateVector s = prepare(x);
    return {expectation(s, problem_->energy_obs),
            expectation(s, problem_->number_obs) - problem_->params.L};
}

double CircuitEvaluator::observable(const PauliSum& obs, const std::vector<double>& x) const {
    return expectation(prepare(x), obs);
}

std::vector<double> CircuitEvaluator::gradient_shift(const PauliSum& obs,
                                                     const std::vector<double>& x) const {
    std::vector<double> grad(x.size(), 0.0);
    // walk the circuit once, keeping the prefix state; each differentiated
    // gate only re-runs its suffix at the two shifted angles
    StateVector prefix = new_zero_state(problem_->n_register());
    for (std::size_t i = 0; i < circuit_.size(); ++i) {
        const PrimGate& g = circuit_[i];
        const double angle = prim_angle(g, x);
        if (g.param_slot >= 0) {
            double pm[2];
            for (int sgn = 0; sgn < 2; ++sgn) {
                StateVector s = prefix;
                apply_prim(s, g, angle + (sgn == 0 ? kShift : -kShift));
                for (std::size_t j = i + 1; j < circuit_.size(); ++j)
                    apply_prim(s, circuit_[j], prim_angle(circuit_[j], x));
                ++evals_;
                pm[sgn] = expectation(s, obs);
            }
            grad[g.param_slot] += g.scale * (pm[0] - pm[1]);
        }
        apply_prim(prefix, g, angle);
    }
    return grad;
}

std::vector<double> CircuitEvaluator::gradient_fd(const PauliSum& obs, const std::vector<double>& x,
                                                  double h) const {
    std::vector<double> grad(x.size(), 0.0);
    std::vector<double> xs = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xs[i] = x[i] + h;
        const double fp = observable(obs, xs);
        xs[i] = x[i] - h;
        const double fm = observable(obs, xs);
        xs[i] = x[i];
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_inf(const std::vector<double>& a) {
    double s = 0;
    for (double v : a) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace

SqpResult sqp_minimize(const ScalarFn& f, const ScalarFn& c, const GradFn& grad_f,
                       const GradFn& grad_c, std::vector<double> x0, const SqpOptions& opt) {
    const std::size_t n = x0.size();
    const bool constrained = static_cast<bool>(c);
    long evals = 0;
    auto fval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    SqpResult res;
    res.x = std::move(x0);
    linalg::Matrix b = linalg::Matrix::identity(n);
    double fx = fval(res.x);
    double cx = constrained ? c(res.x) : 0.0;
    std::vector<double> g = grad_f(res.x);
    std::vector<double> a = constrained ? grad_c(res.x) : std::vector<double>(n, 0.0);
    double rho = 1.0;

    for (int iter = 0; iter < opt.max_iters; ++iter) {
        if (opt.max_evals > 0 && evals >= opt.max_evals) break;
        // QP subproblem: d = -B^{-1}(g + lambda a), lambda from a^T d = -c
        std::vector<double> u, v;
        {
            linalg::CholeskyFactor chol;
            double jitter = 0.0;
            for (;;) {
                linalg::Matrix breg = b;
                for (std::size_t i = 0; i < n; ++i) breg(i, i) += jitter;
                if (chol.factor(std::move(breg))) break;
                jitter = jitter == 0.0 ? 1e-8 : jitter * 100;
                if (jitter > 1e6) {
                    b = linalg::Matrix::identity(n);
                    jitter = 0.0;
                }
            }
            u = chol.solve(g);
            if (constrained) v = chol.solve(a);
        }
        double lambda = 0.0;
        if (constrained) {
            const double av = dot(a, v);
            lambda = std::abs(av) > 1e-14 ? (cx - dot(a, u)) / av : 0.0;
        }
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i)
            d[i] = -(u[i] + (constrained ? lambda * v[i] : 0.0));

        const double dnorm = std::sqrt(dot(d, d));
        if (dnorm < opt.step_tol && std::abs(cx) <= opt.constraint_tol) {
            res.converged = true;
            break;
        }

        // l1 merit line search
        rho = std::max(rho, 2.0 * std::abs(lambda) + 1e-3);
        const double merit0 = fx + rho * std::abs(cx);
        const double dmerit = dot(g, d) - rho * std::abs(cx);
        double t = 1.0;
        double ft = 0.0, ct = 0.0;
        std::vector<double> xt(n);
        bool step_ok = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t i = 0; i < n; ++i) xt[i] = res.x[i] + t * d[i];
            ft = fval(xt);
            ct = constrained ? c(xt) : 0.0;
            if (!std::isfinite(ft)) throw std::runtime_error("sqp_minimize: non-finite objective");
            if (ft + rho * std::abs(ct) <= merit0 + 1e-4 * t * std::min(dmerit, 0.0)) {
                step_ok = true;
                break;
            }
            t *= 0.5;
            if (opt.max_evals > 0 && evals >= opt.max_evals) break;
        }
        if (!step_ok) {
            // stale curvature; restart it and take no step this iteration
            b = linalg::Matrix::identity(n);
            ++res.iters;
            continue;
        }

        std::vector<double> g_new = grad_f(xt);
        std::vector<double> a_new = constrained ? grad_c(xt) : std::vector<double>(n, 0.0);

        // damped BFGS on the Lagrangian gradient difference
        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xt[i] - res.x[i];
            y[i] = (g_new[i] + lambda * a_new[i]) - (g[i] + lambda * a[i]);
        }
        std::vector<double> bs(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) bs[i] += b(i, j) * s[j];
        const double sbs = dot(s, bs);
        const double sy = dot(s, y);
        if (sbs > 1e-300) {
            const double theta = sy >= 0.2 * sbs ? 1.0 : (0.8 * sbs) / (sbs - sy);
            std::vector<double> r(n);
            for (std::size_t i = 0; i < n; ++i) r[i] = theta * y[i] + (1.0 - theta) * bs[i];
            const double sr = dot(s, r);
            if (sr > 1e-300) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        b(i, j) += r[i] * r[j] / sr - bs[i] * bs[j] / sbs;
            }
        }

        const double f_change = std::abs(ft - fx);
        res.x = xt;
        fx = ft;
        cx = ct;
        g = std::move(g_new);
        a = std::move(a_new);
        ++res.iters;
        if (f_change < opt.f_tol && std::abs(cx) <= opt.constraint_tol && iter > 0) {
            res.converged = true;
            break;
        }
    }
    // Restoration phase: the main loop accepts |c| up to constraint_tol, but
    // a residual of 1e-6 already lets the objective dip measurably below the
    // constrained optimum (the constraint buys energy at a linear rate).
    // Newton steps on the scalar constraint along its own gradient drive the
    // residual to ~1e-11 while moving the objective by O(|c|).
    if (constrained) {
        for (int k = 0; k < 8 && std::abs(cx) > 1e-11; ++k) {
            a = grad_c(res.x);
            const double n2 = dot(a, a);
            if (n2 < 1e-18) break;
            const double scale = cx / n2;
            for (std::size_t i = 0; i < n; ++i) res.x[i] -= scale * a[i];
            cx = c(res.x);
        }
        fx = fval(res.x);
    }
    res.f = fx;
    res.c = cx;
    res.evals = evals;
    return res;
}

SqpResult optimize_stage(const CircuitEvaluator& eval, const VqeProblem& problem,
                         std::vector<double> x0, const SqpOptions& opt) {
    const double target = problem.params.L;
    ScalarFn f = [&](const std::vector<double>& x) { return eval.energy(x); };
    ScalarFn c = [&](const std::vector<double>& x) {
        return eval.observable(problem.number_obs, x) - target;
    };
    GradFn gf = [&](const std::vector<double>& x) {
        return eval.gradient_shift(problem.energy_obs, x);
    };
    GradFn gc = [&](const std::vector<double>& x) {
        return eval.gradient_shift(problem.number_obs, x);
    };
    return sqp_minimize(f, c, gf, gc, std::move(x0), opt);
}

std::vector<int> planned_depths(const TrainConfig& cfg) {
    std::vector<int> depths{cfg.initial_layers};
    for (int s = 1; s < cfg.n_stages + 1; ++s) {
        const int next = cfg.initial_layers + s * cfg.layers_per_stage;
        if (next > cfg.depth_cap) break;
        depths.push_back(next);
    }
    return depths;
}

std::string TrainTrace::to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["depth_cap_hit"] = depth_cap_hit;
    j["final_energy"] = final_energy;
    j["final_depth"] = final_depth;
    j["final_params"] = final_params;
    j["best_energy"] = best_energy;
    j["stages"] = nlohmann::json::array();
    for (const auto& s : stages) {
        nlohmann::json js;
        js["depth"] = s.depth;
        js["iters"] = s.iters;
        js["evals"] = s.evals;
        js["energy"] = s.energy;
        js["n_residual"] = s.n_residual;
        js["params"] = s.params;
        j["stages"].push_back(js);
    }
    return j.dump();
}

TrainTrace layer_by_layer_train(const TrainConfig& cfg, const VqeProblem& problem) {
    if (cfg.initial_layers < 1 || cfg.layers_per_stage < 1 || cfg.n_stages < 0)
        throw std::invalid_argument("layer_by_layer_train: bad schedule");
    TrainTrace trace;
    LayeredAnsatz ansatz(problem.graph, cfg.initial_layers, cfg.pattern_cycle, cfg.depth_cap);

    std::vector<double> params(ansatz.n_params());
    {
        RngStream rng = substream(cfg.seed, "init", 0);
        for (auto& v : params) v = rng.uniform(cfg.init_low_first, cfg.init_high_first);
    }

    SqpOptions opt;
    opt.max_iters = cfg.max_iters_per_stage;
    opt.max_evals = cfg.max_evals_per_stage;
    opt.step_tol = cfg.step_tol;
    opt.f_tol = cfg.energy_tol;
    opt.constraint_tol = cfg.constraint_tol;

    double best = std::numeric_limits<double>::infinity();
    for (int stage = 0; stage <= cfg.n_stages; ++stage) {
        if (stage > 0) {
            if (ansatz.depth() + cfg.layers_per_stage > cfg.depth_cap) {
                trace.depth_cap_hit = true;
                break;
            }
            ansatz.extend(cfg.layers_per_stage);
            RngStream rng = substream(cfg.seed, "init", static_cast<std::uint64_t>(stage));
            const int old_count = static_cast<int>(params.size());
            params.resize(ansatz.n_params());
            for (int i = old_count; i < ansatz.n_params(); ++i)
                params[i] = rng.uniform(cfg.init_low_new, cfg.init_high_new);
        }
        CircuitEvaluator eval(ansatz, problem);
        SqpResult r = optimize_stage(eval, problem, params, opt);
        params = r.x;

        StageRecord rec;
        rec.depth = ansatz.depth();
        rec.iters = r.iters;
        rec.evals = r.evals;
        rec.energy = r.f;
        rec.n_residual = r.c;
        rec.params = params;
        trace.stages.push_back(std::move(rec));

        const double prev_best = best;
        best = std::min(best, r.f);
        trace.best_energy.push_back(best);
        trace.final_energy = best;
        trace.final_depth = ansatz.depth();
        trace.final_params = params;
        if (stage > 0 && prev_best - best < cfg.energy_tol) break;
    }
    return trace;
}

int advanced_phi_count(int L) {
    const int n_modes = 4 * L;
    return n_modes * (n_modes - 1) / 2;
}

namespace {

struct PhiBasis {
    std::vector<std::pair<int, int>> planes;
};

PhiBasis phi_basis(int n_modes) {
    PhiBasis basis;
    for (int a = 0; a < n_modes; ++a)
        for (int b = a + 1; b < n_modes; ++b) basis.planes.push_back({a, b});
    return basis;
}

linalg::Matrix plane_rotation(int n, int a, int b, double angle) {
    linalg::Matrix r = linalg::Matrix::identity(n);
    r(a, a) = std::cos(angle);
    r(b, b) = std::cos(angle);
    r(a, b) = std::sin(angle);
    r(b, a) = -std::sin(angle);
    return r;
}

}  // namespace

AdvancedTrace advanced_newton_train(const LayeredAnsatz& ansatz, std::vector<double> theta0,
                                    const GaussianRotation& base, std::vector<double> phi0,
                                    const VqeProblem& problem, const AdvancedConfig& cfg) {
    const int L = problem.params.L;
    const int n_modes = 4 * L;
    const PhiBasis basis = phi_basis(n_modes);
    const int np = static_cast<int>(basis.planes.size());
    const int nt = ansatz.n_params();
    if (static_cast<int>(phi0.size()) != np)
        throw std::invalid_argument("advanced_newton_train: phi size mismatch");
    if (static_cast<int>(theta0.size()) != nt)
        throw std::invalid_argument("advanced_newton_train: theta size mismatch");
    if (base.n_modes() != n_modes)
        throw std::invalid_argument("advanced_newton_train: base rotation size mismatch");

    const MajoranaPolynomial k_maj = build_majorana_hamiltonian(problem.params);
    const auto reg_map = jw_to_register_map(problem.ordering);
    const int n_reg = problem.n_register();
    CircuitEvaluator eval(ansatz, problem);

    auto compose = [&](const std::vector<double>& phi) {
        // O(phi) = O_0 ... O_{P-1} R_base with O_k = e^{4 phi_k h_k}
        linalg::Matrix o = base.r;
        for (int k = np - 1; k >= 0; --k) {
            const auto [a, b] = basis.planes[k];
            o = plane_rotation(n_modes, a, b, 4.0 * phi[k]) * o;
        }
        return o;
    };
    auto prefixes = [&](const std::vector<double>& phi) {
        // pre_k = O_0 ... O_{k-1}
        std::vector<linalg::Matrix> pre(np + 1);
        pre[0] = linalg::Matrix::identity(n_modes);
        for (int k = 0; k < np; ++k) {
            const auto [a, b] = basis.planes[k];
            pre[k + 1] = pre[k] * plane_rotation(n_modes, a, b, 4.0 * phi[k]);
        }
        return pre;
    };
    auto replace_gen = [&](const linalg::Matrix& pre, int k) {
        // B_k = 4 pre h_k pre^T as a dense antisymmetric matrix
        const auto [a, b] = basis.planes[k];
        linalg::Matrix bk(n_modes, n_modes);
        for (int i = 0; i < n_modes; ++i)
            for (int j = 0; j < n_modes; ++j)
                bk(i, j) = 4.0 * (pre(i, a) * pre(j, b) - pre(i, b) * pre(j, a));
        return bk;
    };
    auto to_register = [&](const MajoranaPolynomial& poly) {
        return poly.to_pauli().relabeled(reg_map, n_reg);
    };

    auto omega_value = [&](const std::vector<double>& phi, const std::vector<double>& theta) {
        const auto k_phi = k_maj.substituted(compose(phi));
        StateVector s = eval.prepare(theta);
        return expectation(s, to_register(k_phi));
    };

    AdvancedTrace trace;
    std::vector<double> phi = std::move(phi0), theta = std::move(theta0);
    double omega = omega_value(phi, theta);
    trace.omega.push_back(omega);
    double lambda = cfg.lambda0;

    const int dim = (cfg.optimize_phi ? np : 0) + (cfg.optimize_theta ? nt : 0);
    if (dim == 0) throw std::invalid_argument("advanced_newton_train: nothing to optimize");
    bool done = false;

    for (int iter = 0; iter < cfg.max_iters && !done; ++iter) {
        const auto pre = prefixes(phi);
        const auto k_phi = k_maj.substituted(pre[np] * base.r);
        const PauliSum k_obs = to_register(k_phi);
        const StateVector rho = eval.prepare(theta);

        // gradient and Hessian blocks
        std::vector<linalg::Matrix> bmats(np);
        std::vector<MajoranaPolynomial> dks(np);
        std::vector<double> grad(dim, 0.0);
        linalg::Matrix hess(dim, dim);

        if (cfg.optimize_phi) {
            for (int k = 0; k < np; ++k) {
                bmats[k] = replace_gen(pre[k], k);
                dks[k] = k_phi.replaced(bmats[k]);
                grad[k] = expectation(rho, to_register(dks[k]));
            }
            for (int j = 0; j < np; ++j) {
                for (int k = j; k < np; ++k) {
                    MajoranaPolynomial second = dks[j].replaced(bmats[k]);
                    double val = expectation(rho, to_register(second));
                    if (j != k) {
                        // derivative of B_k with respect to phi_j: [B_j, B_k]
                        linalg::Matrix comm = bmats[j] * bmats[k] - bmats[k] * bmats[j];
                        val += expectation(rho, to_register(k_phi.replaced(comm)));
                    }
                    hess(j, k) = hess(k, j) = val;
                }
            }
        }
        if (cfg.optimize_theta) {
            const int off = cfg.optimize_phi ? np : 0;
            const std::vector<double> gt = eval.gradient_shift(k_obs, theta);
            for (int i = 0; i < nt; ++i) grad[off + i] = gt[i];
            // theta-theta block: central differences of the shift-rule
            // gradient, then symmetrized
            linalg::Matrix raw(nt, nt);
            std::vector<double> ts = theta;
            for (int i = 0; i < nt; ++i) {
                ts[i] = theta[i] + cfg.theta_fd_step;
                const auto gp = eval.gradient_shift(k_obs, ts);
                ts[i] = theta[i] - cfg.theta_fd_step;
                const auto gm = eval.gradient_shift(k_obs, ts);
                ts[i] = theta[i];
                for (int l = 0; l < nt; ++l)
                    raw(i, l) = (gp[l] - gm[l]) / (2.0 * cfg.theta_fd_step);
            }
            for (int i = 0; i < nt; ++i)
                for (int l = 0; l < nt; ++l)
                    hess(off + i, off + l) = 0.5 * (raw(i, l) + raw(l, i));
            if (cfg.optimize_phi) {
                for (int k = 0; k < np; ++k) {
                    const auto gmix = eval.gradient_shift(to_register(dks[k]), theta);
                    for (int i = 0; i < nt; ++i) hess(k, off + i) = hess(off + i, k) = gmix[i];
                }
            }
        }

        if (norm_inf(grad) < cfg.grad_tol) break;

        // Levenberg loop: damp until the step is solvable and decreases the cost
        bool accepted = false;
        while (!accepted) {
            linalg::Matrix damped = hess;
            for (int i = 0; i < dim; ++i) damped(i, i) += lambda;
            std::vector<double> step;
            std::vector<double> neg_grad(dim);
            for (int i = 0; i < dim; ++i) neg_grad[i] = -grad[i];
            if (!linalg::solve_spd(damped, neg_grad, step)) {
                lambda *= 10.0;
                if (lambda > cfg.lambda_max)
                    throw optimizer_stall_error("advanced_newton_train: damped Hessian stayed singular");
                continue;
            }
            std::vector<double> phi_t = phi, theta_t = theta;
            int off = 0;
            if (cfg.optimize_phi) {
                for (int k = 0; k < np; ++k) phi_t[k] += step[k];
                off = np;
            }
            if (cfg.optimize_theta)
                for (int i = 0; i < nt; ++i) theta_t[i] += step[off + i];
            const double omega_t = omega_value(phi_t, theta_t);
            if (omega_t < omega - 1e-15) {
                phi = std::move(phi_t);
                theta = std::move(theta_t);
                omega = omega_t;
                trace.omega.push_back(omega);
                lambda = std::max(1e-12, lambda / 10.0);
                accepted = true;
            } else {
                lambda *= 10.0;
                if (lambda > cfg.lambda_max) {
                    accepted = true;  // no improving direction left; stop outer loop
                    done = true;
                }
            }
        }
        trace.iters = iter + 1;
    }

    trace.final_omega = omega;
    const StateVector s = eval.prepare(theta);
    trace.final_n = expectation(s, problem.number_obs);
    trace.final_energy = omega + problem.params.mu * trace.final_n;
    trace.theta = std::move(theta);
    trace.phi = std::move(phi);
    return trace;
}

}  // namespace efl
