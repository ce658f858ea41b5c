#include "jdhedge/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jdhedge {

void HedgeConfig::validate() const {
    if (!std::isfinite(kappa) || kappa <= 0.0 || kappa >= 1.0)
        throw std::invalid_argument("kappa must lie in (0,1)");
    quadrature.validate();
    if (std::holds_alternative<CallContract>(payoff)) {
        std::get<CallContract>(payoff).validate();
    } else if (!std::get<GenericPayoff>(payoff).payoff) {
        throw std::invalid_argument("generic payoff must be callable");
    }
}

double HedgeDecision::new_pi(double pi) const {
    switch (kind) {
        case DecisionKind::Long:
            return pi + delta_pi;
        case DecisionKind::Short:
            return pi - delta_pi;
        case DecisionKind::NoTrade:
        case DecisionKind::InfeasibleCmh:
            return pi;
    }
    return pi;
}

PositionPolicy PositionPolicy::always_long() { return {Kind::AlwaysLong, {}}; }
PositionPolicy PositionPolicy::always_short() { return {Kind::AlwaysShort, {}}; }
PositionPolicy PositionPolicy::sequence(std::vector<Position> positions) {
    if (positions.empty())
        throw std::invalid_argument("position sequence must not be empty");
    return {Kind::Sequence, std::move(positions)};
}

Position PositionPolicy::at(int step) const {
    switch (kind_) {
        case Kind::AlwaysLong:
            return Position::Long;
        case Kind::AlwaysShort:
            return Position::Short;
        case Kind::Sequence:
            if (step < 0 || step >= static_cast<int>(seq_.size()))
                throw std::invalid_argument("position sequence too short for this grid");
            return seq_[static_cast<std::size_t>(step)];
    }
    throw std::logic_error("unreachable");
}

std::pair<std::vector<double>, double> piecewise_quadratic_min(double a, double b,
                                                               double c, double x0) {
    if (!std::isfinite(a) || a <= 0.0)
        throw std::invalid_argument("piecewise_quadratic_min: a must be positive");
    if (!std::isfinite(b) || !std::isfinite(c) || !std::isfinite(x0))
        throw std::invalid_argument("piecewise_quadratic_min: inputs must be finite");
    if (b >= 0.0) return {{x0}, c};
    const double offset = b / (2.0 * a);  // negative here
    return {{x0 + offset, x0 - offset}, c - b * b / (4.0 * a)};
}

namespace {

// Value function x -> g(t, x) of the hedged claim at time-to-maturity tau.
std::function<double(double)> value_function(const HedgeConfig& config,
                                             const ModelParams& params, double tau) {
    if (std::holds_alternative<CallContract>(config.payoff)) {
        const CallContract contract = std::get<CallContract>(config.payoff);
        const double sigma = params.sigma;
        return [contract, sigma, tau](double x) {
            return call_price(x, contract.strike, sigma, tau);
        };
    }
    const GenericPayoff& generic = std::get<GenericPayoff>(config.payoff);
    const double sigma = params.sigma;
    const QuadratureSpec spec = config.quadrature;
    return [payoff = generic.payoff, sigma, tau, spec](double x) {
        return vanilla_price(payoff, x, sigma, tau, spec);
    };
}

void check_maturity(const HedgeConfig& config, const RebalanceGrid& grid) {
    if (std::holds_alternative<CallContract>(config.payoff)) {
        const CallContract& contract = std::get<CallContract>(config.payoff);
        if (contract.maturity != grid.horizon())
            throw std::invalid_argument("contract maturity must equal the grid horizon");
    }
}

StepDiagnostics step_diagnostics(const PortfolioState& state, const ModelParams& params,
                                 double s_ti, double s_bs_ti, const RebalanceGrid& grid,
                                 const HedgeConfig& config) {
    params.validate();
    config.validate();
    check_maturity(config, grid);
    if (!(s_ti > 0.0) || !(s_bs_ti > 0.0))
        throw std::invalid_argument("step_diagnostics: prices must be positive");
    if (!std::isfinite(state.v) || !std::isfinite(state.pi))
        throw std::invalid_argument("step_diagnostics: portfolio state must be finite");
    const int n = grid.n_intervals();
    if (state.index < 0 || state.index > n - 2)
        throw std::invalid_argument(
            "step_diagnostics: no decision on the final interval or beyond");

    const int i = state.index;
    const double t_i = grid.times()[static_cast<std::size_t>(i)];
    const double t_ip1 = grid.times()[static_cast<std::size_t>(i) + 1];
    const double dt = t_ip1 - t_i;
    const double tau_next = grid.horizon() - t_ip1;  // > 0 because i + 1 <= n - 1

    StepDiagnostics d;
    d.hat_s = conditional_moment(params, s_ti, 1, dt, true);
    d.hat_s2 = conditional_moment(params, s_ti, 2, dt, true);

    const auto vfn = value_function(config, params, tau_next);
    d.hat_v = conditional_value_bs(params, s_bs_ti, dt, vfn, config.quadrature);
    if (std::holds_alternative<CallContract>(config.payoff)) {
        const CallContract& contract = std::get<CallContract>(config.payoff);
        d.hat_sv = ell_call_closed(params, s_ti, s_bs_ti, contract.strike, t_i, t_ip1,
                                   grid.horizon());
    } else {
        d.hat_sv = conditional_price_times_value(params, s_ti, s_bs_ti, dt, vfn,
                                                 config.quadrature);
    }

    d.theta_n = state.v + state.pi * (d.hat_s - s_ti);
    d.theta_pi = d.hat_v;
    d.ell_n = (state.v - state.pi * s_ti) * d.hat_s + state.pi * d.hat_s2;
    d.ell_pi = d.hat_sv;
    d.u = d.ell_n - d.ell_pi;
    return d;
}

void check_kappa(double kappa) {
    if (!std::isfinite(kappa) || kappa <= 0.0 || kappa >= 1.0)
        throw std::invalid_argument("kappa must lie in (0,1)");
}

}  // namespace

StepDiagnostics cmh_diagnostics(const PortfolioState& state, const ModelParams& params,
                                double s_ti, double s_bs_ti, const RebalanceGrid& grid,
                                const HedgeConfig& config) {
    return step_diagnostics(state, params, s_ti, s_bs_ti, grid, config);
}

StepDiagnostics clh_diagnostics(const PortfolioState& state, const ModelParams& params,
                                double s_ti, double s_bs_ti, const RebalanceGrid& grid,
                                const HedgeConfig& config) {
    return step_diagnostics(state, params, s_ti, s_bs_ti, grid, config);
}

HedgeDecision cmh_step(const PortfolioState&, const StepDiagnostics& diag,
                       Position position, double kappa, InfeasiblePolicy policy) {
    check_kappa(kappa);
    const double q = (diag.theta_n - diag.theta_pi) / (kappa * diag.hat_s);
    if (q < 0.0) {
        if (policy == InfeasiblePolicy::FallbackNoTrade) return HedgeDecision::no_trade();
        return HedgeDecision::infeasible(-q);
    }
    return position == Position::Long ? HedgeDecision::long_trade(q)
                                      : HedgeDecision::short_trade(q);
}

HedgeDecision clh_step(const PortfolioState&, const StepDiagnostics& diag,
                       Position position, double kappa) {
    check_kappa(kappa);
    if (!(diag.hat_s2 > 0.0))
        throw std::invalid_argument("clh_step: hat_s2 must be positive");
    if (diag.u <= 0.0) return HedgeDecision::no_trade();
    const double delta = diag.u / (kappa * diag.hat_s2);
    return position == Position::Long ? HedgeDecision::long_trade(delta)
                                      : HedgeDecision::short_trade(delta);
}

double ell_call_closed(const ModelParams& params, double s_ti, double s_bs_ti,
                       double strike, double t_i, double t_ip1, double horizon) {
    params.validate();
    if (!(s_ti > 0.0) || !(s_bs_ti > 0.0))
        throw std::invalid_argument("ell_call_closed: prices must be positive");
    if (!std::isfinite(strike) || strike <= 0.0)
        throw std::invalid_argument("ell_call_closed: strike must be positive");
    if (!(t_i >= 0.0) || !(t_ip1 > t_i) || !(t_ip1 < horizon))
        throw std::invalid_argument("ell_call_closed: need 0 <= t_i < t_ip1 < horizon");

    const double sigma = params.sigma;
    const double delta = t_ip1 - t_i;
    const double tau = horizon - t_ip1;
    const double sqrt_tau = std::sqrt(tau);
    const double a = sigma * delta / sqrt_tau;
    const double c = std::sqrt(delta / tau);
    const double b_plus = (std::log(s_bs_ti / strike) + (params.mu - 0.5 * sigma * sigma) * delta +
                           0.5 * sigma * sigma * tau) /
                          (sigma * sqrt_tau);
    const double b_minus = b_plus - sigma * sqrt_tau;
    const double denom = std::sqrt(1.0 + c * c);
    const double eps1 = params.jump.moment(1);

    return s_ti * std::exp((params.mu + params.lambda * eps1) * delta) *
           (s_bs_ti * std::exp((params.mu + sigma * sigma) * delta) *
                normal_cdf((2.0 * a + b_plus) / denom) -
            strike * normal_cdf((a + b_minus) / denom));
}

PortfolioState apply_rebalance(const PortfolioState& state, double delta_s, double s_tip1,
                               double new_pi, double kappa) {
    check_kappa(kappa);
    if (!std::isfinite(s_tip1) || s_tip1 <= 0.0)
        throw std::invalid_argument("apply_rebalance: s_tip1 must be positive");
    if (!std::isfinite(delta_s) || !std::isfinite(new_pi))
        throw std::invalid_argument("apply_rebalance: inputs must be finite");
    PortfolioState next;
    next.v = state.v + state.pi * delta_s - kappa * s_tip1 * std::abs(new_pi - state.pi);
    next.pi = new_pi;
    next.index = state.index + 1;
    return next;
}

PortfolioState initial_hedge_state(const ModelParams& params, const HedgeConfig& config,
                                   double s_bs0, double horizon) {
    params.validate();
    config.validate();
    if (!(s_bs0 > 0.0))
        throw std::invalid_argument("initial_hedge_state: s_bs0 must be positive");
    PortfolioState state;
    state.index = 0;
    if (std::holds_alternative<CallContract>(config.payoff)) {
        const CallContract& contract = std::get<CallContract>(config.payoff);
        state.pi = call_delta(s_bs0, contract.strike, params.sigma, horizon);
        state.v = call_price(s_bs0, contract.strike, params.sigma, horizon);
    } else {
        const auto& payoff = std::get<GenericPayoff>(config.payoff).payoff;
        state.v = vanilla_price(payoff, s_bs0, params.sigma, horizon, config.quadrature);
        const double bump = 1e-5;
        state.pi = (vanilla_price(payoff, s_bs0 * (1.0 + bump), params.sigma, horizon,
                                  config.quadrature) -
                    vanilla_price(payoff, s_bs0 * (1.0 - bump), params.sigma, horizon,
                                  config.quadrature)) /
                   (2.0 * bump * s_bs0);
    }
    return state;
}

Trajectory run_hedge(const ModelParams& params, const SamplePath& path,
                     const RebalanceGrid& grid, const HedgeConfig& config,
                     const PositionPolicy& policy) {
    params.validate();
    config.validate();
    check_maturity(config, grid);
    const int n = grid.n_intervals();
    const std::size_t last_fine = static_cast<std::size_t>(path.rebalance_index(n));
    if (path.times.size() <= last_fine)
        throw std::invalid_argument("run_hedge: path does not cover the rebalance grid");
    for (int i = 0; i <= n; ++i)
        if (path.times[static_cast<std::size_t>(path.rebalance_index(i))] !=
            grid.times()[static_cast<std::size_t>(i)])
            throw std::invalid_argument("run_hedge: path grid does not match rebalance dates");

    Trajectory traj;
    PortfolioState state = initial_hedge_state(params, config, path.s_bs.front(), grid.horizon());
    traj.states.push_back(state);

    for (int i = 0; i <= n - 2; ++i) {
        const double s_ti = path.s[static_cast<std::size_t>(path.rebalance_index(i))];
        const double s_bs_ti = path.s_bs[static_cast<std::size_t>(path.rebalance_index(i))];
        const StepDiagnostics diag =
            step_diagnostics(state, params, s_ti, s_bs_ti, grid, config);
        const Position position = policy.at(i);
        const HedgeDecision decision =
            config.method == HedgeMethod::Cmh
                ? cmh_step(state, diag, position, config.kappa, config.infeasible_policy)
                : clh_step(state, diag, position, config.kappa);
        traj.steps.push_back({state, diag, decision});
        if (decision.kind == DecisionKind::InfeasibleCmh) {
            traj.status = TrajectoryStatus::StoppedInfeasible;
            traj.final_state = state;
            return traj;
        }
        const double s_tip1 = path.s[static_cast<std::size_t>(path.rebalance_index(i + 1))];
        state = apply_rebalance(state, s_tip1 - s_ti, s_tip1, decision.new_pi(state.pi),
                                config.kappa);
        traj.states.push_back(state);
    }

    // Final interval: hold through maturity, no trade and no cost.
    const double s_last = path.s[static_cast<std::size_t>(path.rebalance_index(n - 1))];
    const double s_terminal = path.s[last_fine];
    state = apply_rebalance(state, s_terminal - s_last, s_terminal, state.pi, config.kappa);
    traj.states.push_back(state);
    traj.final_state = state;
    traj.status = TrajectoryStatus::Completed;
    if (std::holds_alternative<CallContract>(config.payoff)) {
        const CallContract& contract = std::get<CallContract>(config.payoff);
        traj.realized_payoff = std::max(s_terminal - contract.strike, 0.0);
    } else {
        traj.realized_payoff = std::get<GenericPayoff>(config.payoff).payoff(s_terminal);
    }
    return traj;
}

}  // namespace jdhedge
