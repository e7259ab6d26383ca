#include "efl/selfcheck.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "efl/bench.hpp"
#include "efl/gaussian.hpp"
#include "efl/model.hpp"
#include "efl/rng.hpp"
#include "efl/vqe.hpp"

namespace efl {

namespace {

CheckResult check(const std::string& name, bool pass, const std::string& detail = "") {
    return {name, pass, detail};
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::vector<CheckResult> run_selfcheck() {
    std::vector<CheckResult> out;

    {  // infinite-chain reference energies
        const double v0 = bethe_energy_density(0.0);
        const double v8 = bethe_energy_density(8.0);
        const bool ok = std::abs(v0 + 4.0 / std::numbers::pi) < 1e-7 &&
                        std::abs(v0 + 1.27324) < 1e-5 && std::abs(v8 + 0.327531) < 1e-5;
        out.push_back(check("bethe reference energies", ok, "u=0 -> " + num(v0)));
    }
    {  // diagonalization oracle vs the two-site closed form
        auto p = HubbardParams::half_filling(2, 1.0, 8.0);
        const double e = exact_ground_energy(p, 2).energy;
        const double closed = 4.0 - 2.0 * std::sqrt(5.0);
        out.push_back(check("two-site ground energy", std::abs(e - closed) < 1e-9, num(e)));
    }
    {  // symbolic commutator and locality
        bool ok = true;
        for (int L : {2, 4, 8}) {
            auto p = HubbardParams::half_filling(L, 1.0, 8.0);
            auto h = build_hamiltonian(p);
            ok = ok && h.commutator(build_number_operator(L)).terms().empty();
            ok = ok && h.max_weight() <= 2;
        }
        out.push_back(check("[H, N] = 0 and weight <= 2 up to L = 8", ok));
    }
    {  // gradient engines agree
        auto p = HubbardParams::half_filling(2, 1.0, 8.0);
        DeviceGraph g = build_grid(2, 2);
        VqeProblem prob(p, g, make_ordering(OrderingKind::Interleaved, 2, g));
        LayeredAnsatz ansatz(g, 3);
        CircuitEvaluator eval(ansatz, prob);
        RngStream rng(substream(2718, "selfcheck-grad").next_u64());
        double worst = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> x(ansatz.n_params());
            for (auto& v : x) v = rng.uniform(-std::numbers::pi, std::numbers::pi);
            auto gs = eval.gradient_shift(prob.energy_obs, x);
            auto gf = eval.gradient_fd(prob.energy_obs, x, 1e-4);
            for (std::size_t i = 0; i < x.size(); ++i)
                worst = std::max(worst, std::abs(gs[i] - gf[i]));
        }
        out.push_back(check("parameter-shift vs finite differences", worst < 1e-6, num(worst)));
    }
    {  // holographic covariance transport on 4 qubits
        RngStream rng(substream(2718, "selfcheck-matchgate").next_u64());
        double worst = 0.0;
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<PrimGate> circ;
            std::vector<double> params;
            for (int i = 0; i < 10; ++i) {
                const int pick = static_cast<int>(rng.uniform(0, 5));
                const int slot = static_cast<int>(params.size());
                params.push_back(rng.uniform(-2, 2));
                if (pick == 0)
                    circ.push_back({PrimKind::RZ, static_cast<int>(rng.uniform(0, 4)), -1, slot, 1.0, 0.0});
                else {
                    const int q = static_cast<int>(rng.uniform(0, 3));
                    const PrimKind kind = pick == 1 ? PrimKind::XX
                                        : pick == 2 ? PrimKind::YY
                                        : pick == 3 ? PrimKind::XY
                                                    : PrimKind::YX;
                    circ.push_back({kind, q, q + 1, slot, 1.0, 0.0});
                }
            }
            StateVector psi = new_zero_state(4);
            auto gamma = covariance_from_state(psi);
            StateVector vpsi = psi;
            run_circuit(vpsi, circ, params);
            auto gamma_v = covariance_from_state(vpsi);
            auto r = rotation_from_circuit(circ, params, 4);
            auto want = r.r * gamma.gamma * r.r.transposed();
            worst = std::max(worst, linalg::max_abs(gamma_v.gamma - want));
        }
        out.push_back(check("matchgate covariance transport", worst < 1e-10, num(worst)));
    }
    {  // the six generator identities, symbolically through the Pauli algebra
        const cplx I(0, 1);
        auto jw = [&](int mode) { return jw_majorana(mode, 2).terms()[0]; };
        auto word = [&](std::map<int, PauliOp> ops) {
            PauliSum s(2);
            s.add_term(1.0, ops);
            return s.terms()[0];
        };
        auto eq = [&](PauliTerm a, cplx scale, PauliTerm b) {
            b.coeff *= scale;
            return a.x == b.x && a.z == b.z && std::abs(a.coeff - b.coeff) < 1e-12;
        };
        const bool ok =
            eq(word({{0, PauliOp::X}, {1, PauliOp::X}}), -I, pauli_mul(jw(1), jw(2))) &&
            eq(word({{0, PauliOp::X}, {1, PauliOp::Y}}), -I, pauli_mul(jw(1), jw(3))) &&
            eq(word({{0, PauliOp::Y}, {1, PauliOp::X}}), I, pauli_mul(jw(0), jw(2))) &&
            eq(word({{0, PauliOp::Y}, {1, PauliOp::Y}}), I, pauli_mul(jw(0), jw(3))) &&
            eq(word({{0, PauliOp::Z}}), -I, pauli_mul(jw(0), jw(1))) &&
            eq(word({{1, PauliOp::Z}}), -I, pauli_mul(jw(2), jw(3)));
        out.push_back(check("matchgate generator identities", ok));
    }
    {  // measurement budget anchors
        auto p = HubbardParams::half_filling(2, 1.0, 8.0);
        auto b1 = measurement_budget(p, 1e-2, 5000.0);
        auto b2 = measurement_budget(p, 1e-3, 5000.0);
        const bool ok = b1.shots_rounded == 45000 && std::abs(b1.wall_seconds - 9.0) < 1e-9 &&
                        b2.shots_rounded == 4500000 && std::abs(b2.wall_seconds - 900.0) < 1e-6;
        out.push_back(check("measurement budget anchors", ok,
                            num(b1.shots) + " shots at eps = 1e-2"));
    }
    {  // norm preservation and exchange/dispersive commutation
        RngStream rng(substream(2718, "selfcheck-gates").next_u64());
        StateVector s = new_zero_state(4);
        bool ok = true;
        for (int step = 0; step < 20; ++step) {
            FGateParams fp{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3),
                           rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
            int q1 = static_cast<int>(rng.uniform(0, 4));
            int q2 = (q1 + 1 + static_cast<int>(rng.uniform(0, 3))) % 4;
            apply_f_gate(s, q1, q2, fp);
            ok = ok && std::abs(s.norm_sq() - 1.0) < 1e-12;
        }
        out.push_back(check("norm preservation", ok, num(s.norm_sq() - 1.0)));
    }
    return out;
}

}  // namespace efl
