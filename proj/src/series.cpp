#include "jdhedge/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "jdhedge/black_scholes.hpp"

namespace jdhedge {

namespace {

std::string g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

const char* kind_name(DecisionKind kind) {
    switch (kind) {
        case DecisionKind::NoTrade:
            return "no-trade";
        case DecisionKind::Long:
            return "long";
        case DecisionKind::Short:
            return "short";
        case DecisionKind::InfeasibleCmh:
            return "infeasible-cmh";
    }
    return "?";
}

}  // namespace

void write_series_csv(std::ostream& out, const SamplePath& path, const RebalanceGrid& grid,
                      const Trajectory& traj, const CallContract& contract,
                      const ModelParams& params) {
    contract.validate();
    params.validate();
    if (traj.states.empty()) throw std::invalid_argument("write_series_csv: empty trajectory");
    const std::size_t last_fine = static_cast<std::size_t>(path.rebalance_index(grid.n_intervals()));
    if (path.times.size() <= last_fine)
        throw std::invalid_argument("write_series_csv: path does not cover the grid");

    const double horizon = grid.horizon();
    const int last_state = static_cast<int>(traj.states.size()) - 1;

    out << "t,s,s_bs,w,n_jumps,bs_price,bs_delta,pi_n,v_pi_n\n";
    for (std::size_t k = 0; k <= last_fine; ++k) {
        const double t = path.times[k];
        const double s = path.s[k];
        const double s_bs = path.s_bs[k];
        const double tau = horizon - t;
        const double price = call_price(s_bs, contract.strike, params.sigma, std::max(tau, 0.0));
        const double delta = tau > 0.0
                                 ? call_delta(s_bs, contract.strike, params.sigma, tau)
                                 : (s_bs > contract.strike ? 1.0 : 0.0);

        // Holding is step-constant from the last grid date with a recorded
        // state; a trajectory stopped infeasible stays frozen from the stop.
        const int grid_idx = std::min(static_cast<int>(k) / path.refinement, last_state);
        const PortfolioState& anchor = traj.states[static_cast<std::size_t>(grid_idx)];
        const double s_anchor = path.s[static_cast<std::size_t>(path.rebalance_index(grid_idx))];
        const double v = anchor.v + anchor.pi * (s - s_anchor);

        out << g12(t) << ',' << g12(s) << ',' << g12(s_bs) << ',' << g12(path.w[k]) << ','
            << path.n_count[k] << ',' << g12(price) << ',' << g12(delta) << ','
            << g12(anchor.pi) << ',' << g12(v) << '\n';
    }
}

std::string series_csv(const SamplePath& path, const RebalanceGrid& grid,
                       const Trajectory& traj, const CallContract& contract,
                       const ModelParams& params) {
    std::ostringstream out;
    write_series_csv(out, path, grid, traj, contract, params);
    return out.str();
}

void write_decision_log(std::ostream& out, const Trajectory& traj, const SamplePath& path,
                        const RebalanceGrid& grid) {
    if (traj.states.empty()) throw std::invalid_argument("write_decision_log: empty trajectory");
    const PortfolioState& init = traj.states.front();
    out << "init t=0 s=" << g12(path.s.front()) << " s_bs=" << g12(path.s_bs.front())
        << " pi=" << g12(init.pi) << " v=" << g12(init.v) << '\n';
    for (std::size_t i = 0; i < traj.steps.size(); ++i) {
        const TrajectoryStep& step = traj.steps[i];
        const int idx = step.state.index;
        const std::size_t fine = static_cast<std::size_t>(path.rebalance_index(idx));
        out << "step i=" << idx << " t=" << g12(grid.times()[static_cast<std::size_t>(idx)])
            << " s=" << g12(path.s[fine]) << " s_bs=" << g12(path.s_bs[fine])
            << " pi=" << g12(step.state.pi) << " v=" << g12(step.state.v)
            << " hat_s=" << g12(step.diag.hat_s) << " hat_s2=" << g12(step.diag.hat_s2)
            << " hat_v=" << g12(step.diag.hat_v) << " hat_sv=" << g12(step.diag.hat_sv)
            << " theta_n=" << g12(step.diag.theta_n) << " theta_pi=" << g12(step.diag.theta_pi)
            << " ell_n=" << g12(step.diag.ell_n) << " ell_pi=" << g12(step.diag.ell_pi)
            << " u=" << g12(step.diag.u) << " decision=" << kind_name(step.decision.kind);
        if (step.decision.kind == DecisionKind::InfeasibleCmh)
            out << " deficit=" << g12(step.decision.deficit);
        else
            out << " delta_pi=" << g12(step.decision.delta_pi)
                << " new_pi=" << g12(step.decision.new_pi(step.state.pi));
        out << '\n';
    }
    if (traj.status == TrajectoryStatus::Completed) {
        out << "terminal t=" << g12(grid.horizon()) << " s=" << g12(path.s.back())
            << " pi=" << g12(traj.final_state.pi) << " v=" << g12(traj.final_state.v)
            << " payoff=" << g12(traj.realized_payoff)
            << " shortfall=" << g12(traj.final_state.v - traj.realized_payoff) << '\n';
        out << "status completed\n";
    } else {
        out << "status stopped-infeasible at index " << traj.final_state.index << '\n';
    }
}

std::string decision_log(const Trajectory& traj, const SamplePath& path,
                         const RebalanceGrid& grid) {
    std::ostringstream out;
    write_decision_log(out, traj, path, grid);
    return out.str();
}

}  // namespace jdhedge
