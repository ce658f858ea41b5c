#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "jdhedge/hedging.hpp"
#include "jdhedge/tree.hpp"

namespace jdhedge {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value run description. Schema (defaults in brackets):
//   mu, sigma, lambda, s0          model parameters
//   jump                           constant:<c> | discrete:<v>:<p>,<v>:<p>,...
//   strike, T                      call contract (T is also the grid horizon)
//   n_rebalances                   rebalance decisions; the grid has
//                                  n_rebalances + 1 uniform intervals
//   refinement [20]                sub-steps per interval, plotting resolution
//   kappa                          proportional cost in (0, 1)
//   method [clh]                   cmh | clh
//   policy [long]                  long | short | sequence:<LS...>
//   infeasible [report]            report | fallback
//   seed                           unsigned integer
//   out_series [series.csv]        series output path
//   out_tree [tree.txt]            tree output path
//   tree_format [ascii]            ascii | dot | structured
// Unknown and duplicate keys are rejected with their line number.
struct RunConfig {
    ModelParams model;
    double horizon = 0.0;
    int n_rebalances = 0;
    int refinement = 20;
    double strike = 0.0;
    double kappa = 0.0;
    HedgeMethod method = HedgeMethod::Clh;
    PositionPolicy policy = PositionPolicy::always_long();
    InfeasiblePolicy infeasible = InfeasiblePolicy::Report;
    std::uint64_t seed = 0;
    std::string out_series = "series.csv";
    std::string out_tree = "tree.txt";
    TreeFormat tree_format = TreeFormat::Ascii;

    void validate() const;  // throws ConfigError naming the offending field

    RebalanceGrid make_grid() const;
    CallContract contract() const { return {strike, horizon}; }
    HedgeConfig make_hedge_config() const;

    bool operator==(const RunConfig&) const = default;
};

RunConfig load_config(std::istream& in);
RunConfig load_config_file(const std::string& path);

// Emits every key in schema order; load_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace jdhedge
