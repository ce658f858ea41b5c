#pragma once

#include <iosfwd>
#include <string>

#include "jdhedge/hedging.hpp"

namespace jdhedge {

// CSV with header t,s,s_bs,w,n_jumps,bs_price,bs_delta,pi_n,v_pi_n and one row
// per fine-grid point. bs_price/bs_delta are the background Black-Scholes
// value and hedge ratio on the shadow price; pi_n is step-constant between
// rebalances; v_pi_n is marked to market, with each trade's cost hitting at
// its rebalance date. Numbers carry 12 significant digits. For a trajectory
// stopped infeasible the holding stays frozen from the stop onward.
void write_series_csv(std::ostream& out, const SamplePath& path, const RebalanceGrid& grid,
                      const Trajectory& traj, const CallContract& contract,
                      const ModelParams& params);

std::string series_csv(const SamplePath& path, const RebalanceGrid& grid,
                       const Trajectory& traj, const CallContract& contract,
                       const ModelParams& params);

// Per-step decision log: one line per rebalance decision with the full
// diagnostics, plus initial and terminal summary lines.
void write_decision_log(std::ostream& out, const Trajectory& traj, const SamplePath& path,
                        const RebalanceGrid& grid);

std::string decision_log(const Trajectory& traj, const SamplePath& path,
                         const RebalanceGrid& grid);

}  // namespace jdhedge
