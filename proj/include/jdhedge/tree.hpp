#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "jdhedge/hedging.hpp"

namespace jdhedge {

struct TreeBudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One node of the enumerated strategy tree. `decision` is the decision applied
// at the parent to reach this node (NoTrade for the root). `halt` carries the
// InfeasibleCmh annotation when the branch was pruned here under the Report
// policy. Children are ordered long before short.
struct HedgeNode {
    int index = 0;
    double pi = 0.0;
    double v = 0.0;
    HedgeDecision decision;
    std::optional<StepDiagnostics> diag;
    std::optional<HedgeDecision> halt;
    std::vector<std::unique_ptr<HedgeNode>> children;
};

struct DecisionTree {
    std::unique_ptr<HedgeNode> root;
    HedgeMethod method = HedgeMethod::Clh;
    std::uint64_t path_seed = 0;
    HedgeConfig config;
    int node_count = 0;
};

enum class TreeFormat { Ascii, Dot, Structured };

// Breadth-first enumeration of every long/short branch over the rebalance
// grid; portfolio accounting is independent per branch. Leaves sit at grid
// index n_intervals - 1. Throws TreeBudgetError once max_nodes is exceeded.
DecisionTree enumerate_tree(const ModelParams& params, const SamplePath& path,
                            const RebalanceGrid& grid, const HedgeConfig& config,
                            int max_nodes = 8191);

// ascii: indented branch listing; dot: plain directed graph with quoted
// labels; structured: JSON mirroring HedgeNode, round-trippable. All exports
// are deterministic (breadth-first node numbering).
std::string export_tree(const DecisionTree& tree, TreeFormat format);

}  // namespace jdhedge
