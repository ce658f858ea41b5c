#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "jdhedge/black_scholes.hpp"
#include "jdhedge/model.hpp"
#include "jdhedge/quadrature.hpp"

namespace jdhedge {

struct PortfolioState {
    double v = 0.0;   // portfolio value after costs
    double pi = 0.0;  // risky holding, units of asset
    int index = 0;    // grid index the state refers to
};

enum class HedgeMethod { Cmh, Clh };
enum class InfeasiblePolicy { Report, FallbackNoTrade };
enum class Position { Long, Short };

using PayoffFn = std::function<double(double)>;

struct GenericPayoff {
    PayoffFn payoff;
};

struct HedgeConfig {
    double kappa = 0.1;  // proportional cost, in (0, 1)
    HedgeMethod method = HedgeMethod::Clh;
    std::variant<CallContract, GenericPayoff> payoff{CallContract{}};
    InfeasiblePolicy infeasible_policy = InfeasiblePolicy::Report;
    QuadratureSpec quadrature{};

    void validate() const;
};

// Conditional quantities entering one rebalance decision at t_i, all closed
// over F_{t_i}. theta_n/theta_pi drive the CMH recursion, ell_n/ell_pi and
// their difference u drive the CLH trade test.
struct StepDiagnostics {
    double hat_s = 0.0;     // E[S_{t_{i+1}} | F_{t_i}]
    double hat_s2 = 0.0;    // E[S^2_{t_{i+1}} | F_{t_i}]
    double hat_v = 0.0;     // E[V^pi_{t_{i+1}} | F_{t_i}]
    double hat_sv = 0.0;    // E[S_{t_{i+1}} V^pi_{t_{i+1}} | F_{t_i}]
    double theta_n = 0.0;   // v + pi (hat_s - s)
    double theta_pi = 0.0;  // hat_v
    double ell_n = 0.0;     // (v - pi s) hat_s + pi hat_s2
    double ell_pi = 0.0;    // hat_sv
    double u = 0.0;         // ell_n - ell_pi
};

enum class DecisionKind { NoTrade, Long, Short, InfeasibleCmh };

struct HedgeDecision {
    DecisionKind kind = DecisionKind::NoTrade;
    double delta_pi = 0.0;  // unsigned trade size, >= 0
    double deficit = 0.0;   // positive when kind == InfeasibleCmh

    static HedgeDecision no_trade() { return {}; }
    static HedgeDecision long_trade(double q) { return {DecisionKind::Long, q, 0.0}; }
    static HedgeDecision short_trade(double q) { return {DecisionKind::Short, q, 0.0}; }
    static HedgeDecision infeasible(double deficit) {
        return {DecisionKind::InfeasibleCmh, 0.0, deficit};
    }

    // Holding after applying this decision to the current one.
    double new_pi(double pi) const;

    bool trades() const noexcept {
        return kind == DecisionKind::Long || kind == DecisionKind::Short;
    }
};

// Long/short choice per decision step; the methods leave it to the trader.
class PositionPolicy {
public:
    static PositionPolicy always_long();
    static PositionPolicy always_short();
    static PositionPolicy sequence(std::vector<Position> positions);

    Position at(int step) const;

    enum class Kind { AlwaysLong, AlwaysShort, Sequence };
    Kind kind() const noexcept { return kind_; }
    const std::vector<Position>& positions() const noexcept { return seq_; }

    bool operator==(const PositionPolicy&) const = default;

private:
    PositionPolicy(Kind kind, std::vector<Position> seq) : kind_(kind), seq_(std::move(seq)) {}
    Kind kind_;
    std::vector<Position> seq_;
};

// Minimize f(x) = a (x - x0)^2 + b |x - x0| + c over the reals, a > 0.
// b >= 0: unique minimizer x0 with value c. b < 0: two minimizers
// x0 -+ b/(2a), symmetric about x0, with value c - b^2/(4a) (below c, and
// negative whenever b^2 > 4ac).
std::pair<std::vector<double>, double> piecewise_quadratic_min(double a, double b,
                                                               double c, double x0);

// Diagnostics for the decision at grid index state.index. Requires
// state.index <= n_intervals - 2: the final interval carries no trade, so the
// value function is always evaluated strictly before maturity.
StepDiagnostics cmh_diagnostics(const PortfolioState& state, const ModelParams& params,
                                double s_ti, double s_bs_ti, const RebalanceGrid& grid,
                                const HedgeConfig& config);
StepDiagnostics clh_diagnostics(const PortfolioState& state, const ModelParams& params,
                                double s_ti, double s_bs_ti, const RebalanceGrid& grid,
                                const HedgeConfig& config);

// CMH recursion: trade size q = (theta_n - theta_pi) / (kappa hat_s), applied
// long or short. q < 0 means the conditional-mean equation has no solution;
// the step is reported infeasible (or degrades to no-trade under
// FallbackNoTrade).
HedgeDecision cmh_step(const PortfolioState& state, const StepDiagnostics& diag,
                       Position position, double kappa,
                       InfeasiblePolicy policy = InfeasiblePolicy::Report);

// CLH recursion: no trade when u <= 0, else trade u / (kappa hat_s2) long or
// short.
HedgeDecision clh_step(const PortfolioState& state, const StepDiagnostics& diag,
                       Position position, double kappa);

// Closed form of E[S_{t_{i+1}} g_call(t_{i+1}, S^BS_{t_{i+1}}) | F_{t_i}] for
// the zero-rate call value g_call. With delta = t_ip1 - t_i, tau = T - t_ip1,
//   a = sigma delta / sqrt(tau),  c = sqrt(delta / tau),
//   b+ = [ln(s_bs/K) + (mu - sigma^2/2) delta + sigma^2 tau / 2] / (sigma sqrt(tau)),
//   b- = b+ - sigma sqrt(tau):
//   s e^{(mu + lambda eps_1) delta} [ s_bs e^{(mu + sigma^2) delta}
//       Phi((2a + b+)/sqrt(1 + c^2)) - K Phi((a + b-)/sqrt(1 + c^2)) ].
// Singular at t_ip1 = T; requires 0 <= t_i < t_ip1 < T.
double ell_call_closed(const ModelParams& params, double s_ti, double s_bs_ti,
                       double strike, double t_i, double t_ip1, double horizon);

// Portfolio update across (t_i, t_{i+1}]: gain pi * delta_s on the held
// amount, then the proportional cost kappa s_tip1 |new_pi - pi| of moving to
// new_pi at the t_{i+1} price.
PortfolioState apply_rebalance(const PortfolioState& state, double delta_s,
                               double s_tip1, double new_pi, double kappa);

// Black-Scholes hedge at t_0 on the shadow price: pi = hedge ratio, v = value,
// no entry cost. Generic payoffs price by quadrature and take a central
// finite-difference hedge ratio.
PortfolioState initial_hedge_state(const ModelParams& params, const HedgeConfig& config,
                                   double s_bs0, double horizon);

struct TrajectoryStep {
    PortfolioState state;  // at t_i, before the trade decided here
    StepDiagnostics diag;
    HedgeDecision decision;
};

enum class TrajectoryStatus { Completed, StoppedInfeasible };

struct Trajectory {
    std::vector<TrajectoryStep> steps;       // one per decision, i = 0 .. N-2
    std::vector<PortfolioState> states;      // per grid index (truncated on a stop)
    PortfolioState final_state;              // == states.back()
    TrajectoryStatus status = TrajectoryStatus::Completed;
    double realized_payoff = 0.0;  // payoff(S_T); 0 when stopped early
};

// Runs the per-step recursion along one simulated path. Starts from the
// Black-Scholes hedge at t_0 (pi = delta, v = price, no initial charge),
// decides at t_0 .. t_{N-2}, and carries the final interval without trading.
// An InfeasibleCmh decision under the Report policy stops the trajectory.
Trajectory run_hedge(const ModelParams& params, const SamplePath& path,
                     const RebalanceGrid& grid, const HedgeConfig& config,
                     const PositionPolicy& policy);

}  // namespace jdhedge
