#include "jdhedge/tree.hpp"

#include <cstdio>
#include <deque>
#include <map>

#include <json.hpp>

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

std::string node_label(const HedgeNode& node) {
    std::string label =
        "t" + std::to_string(node.index) + " pi=" + g12(node.pi) + " v=" + g12(node.v);
    if (node.halt) label += " [infeasible: deficit=" + g12(node.halt->deficit) + "]";
    return label;
}

void ascii_walk(const HedgeNode& node, int depth, std::string& out) {
    for (int i = 0; i < depth; ++i) out += "  ";
    if (depth > 0) {
        out += kind_name(node.decision.kind);
        out += " -> ";
    }
    out += node_label(node);
    out += '\n';
    for (const auto& child : node.children) ascii_walk(*child, depth + 1, out);
}

std::string export_ascii(const DecisionTree& tree) {
    std::string out;
    out += tree.method == HedgeMethod::Cmh ? "cmh" : "clh";
    out += " tree, seed=" + std::to_string(tree.path_seed) +
           ", kappa=" + g12(tree.config.kappa) + ", nodes=" + std::to_string(tree.node_count) +
           "\n";
    ascii_walk(*tree.root, 0, out);
    return out;
}

std::string export_dot(const DecisionTree& tree) {
    // Breadth-first ids; plain digraph, no layout hints.
    std::map<const HedgeNode*, int> ids;
    std::deque<const HedgeNode*> queue{tree.root.get()};
    std::vector<const HedgeNode*> order;
    while (!queue.empty()) {
        const HedgeNode* node = queue.front();
        queue.pop_front();
        ids.emplace(node, static_cast<int>(order.size()));
        order.push_back(node);
        for (const auto& child : node->children) queue.push_back(child.get());
    }
    std::string out = "digraph hedge_tree {\n";
    for (const HedgeNode* node : order)
        out += "  n" + std::to_string(ids[node]) + " [label=\"" + node_label(*node) + "\"];\n";
    for (const HedgeNode* node : order)
        for (const auto& child : node->children)
            out += "  n" + std::to_string(ids[node]) + " -> n" + std::to_string(ids[child.get()]) +
                   " [label=\"" + kind_name(child->decision.kind) + "\"];\n";
    out += "}\n";
    return out;
}

nlohmann::ordered_json decision_json(const HedgeDecision& decision) {
    return {{"kind", kind_name(decision.kind)},
            {"delta_pi", decision.delta_pi},
            {"deficit", decision.deficit}};
}

nlohmann::ordered_json diagnostics_json(const StepDiagnostics& diag) {
    return {{"hat_s", diag.hat_s},     {"hat_s2", diag.hat_s2}, {"hat_v", diag.hat_v},
            {"hat_sv", diag.hat_sv},   {"theta_n", diag.theta_n}, {"theta_pi", diag.theta_pi},
            {"ell_n", diag.ell_n},     {"ell_pi", diag.ell_pi},   {"u", diag.u}};
}

nlohmann::ordered_json node_json(const HedgeNode& node) {
    nlohmann::ordered_json j;
    j["index"] = node.index;
    j["pi"] = node.pi;
    j["v"] = node.v;
    j["decision"] = decision_json(node.decision);
    j["diagnostics"] = node.diag ? diagnostics_json(*node.diag) : nlohmann::ordered_json();
    j["halt"] = node.halt ? decision_json(*node.halt) : nlohmann::ordered_json();
    auto children = nlohmann::ordered_json::array();
    for (const auto& child : node.children) children.push_back(node_json(*child));
    j["children"] = std::move(children);
    return j;
}

std::string export_structured(const DecisionTree& tree) {
    nlohmann::ordered_json j;
    j["method"] = tree.method == HedgeMethod::Cmh ? "cmh" : "clh";
    j["path_seed"] = tree.path_seed;
    j["kappa"] = tree.config.kappa;
    j["node_count"] = tree.node_count;
    j["root"] = node_json(*tree.root);
    return j.dump(2) + "\n";
}

}  // namespace

DecisionTree enumerate_tree(const ModelParams& params, const SamplePath& path,
                            const RebalanceGrid& grid, const HedgeConfig& config,
                            int max_nodes) {
    params.validate();
    config.validate();
    if (max_nodes < 1) throw std::invalid_argument("enumerate_tree: max_nodes must be >= 1");

    DecisionTree tree;
    tree.method = config.method;
    tree.path_seed = path.seed;
    tree.config = config;

    const int n = grid.n_intervals();
    const std::size_t last_fine = static_cast<std::size_t>(path.rebalance_index(n));
    if (path.times.size() <= last_fine)
        throw std::invalid_argument("enumerate_tree: path does not cover the rebalance grid");

    const PortfolioState root_state =
        initial_hedge_state(params, config, path.s_bs.front(), grid.horizon());

    tree.root = std::make_unique<HedgeNode>();
    tree.root->index = 0;
    tree.root->pi = root_state.pi;
    tree.root->v = root_state.v;
    tree.node_count = 1;

    std::deque<HedgeNode*> queue{tree.root.get()};
    while (!queue.empty()) {
        HedgeNode* node = queue.front();
        queue.pop_front();
        if (node->index >= n - 1) continue;  // leaf level: final interval has no decision

        const int i = node->index;
        const double s_ti = path.s[static_cast<std::size_t>(path.rebalance_index(i))];
        const double s_bs_ti = path.s_bs[static_cast<std::size_t>(path.rebalance_index(i))];
        const double s_tip1 = path.s[static_cast<std::size_t>(path.rebalance_index(i + 1))];
        const PortfolioState state{node->v, node->pi, i};
        const StepDiagnostics diag =
            config.method == HedgeMethod::Cmh
                ? cmh_diagnostics(state, params, s_ti, s_bs_ti, grid, config)
                : clh_diagnostics(state, params, s_ti, s_bs_ti, grid, config);
        node->diag = diag;

        std::vector<HedgeDecision> decisions;
        if (config.method == HedgeMethod::Clh) {
            if (diag.u <= 0.0) {
                decisions.push_back(clh_step(state, diag, Position::Long, config.kappa));
            } else {
                decisions.push_back(clh_step(state, diag, Position::Long, config.kappa));
                decisions.push_back(clh_step(state, diag, Position::Short, config.kappa));
            }
        } else {
            const HedgeDecision probe_long =
                cmh_step(state, diag, Position::Long, config.kappa, config.infeasible_policy);
            if (probe_long.kind == DecisionKind::InfeasibleCmh) {
                node->halt = probe_long;  // pruned branch, annotated terminal node
                continue;
            }
            if (probe_long.kind == DecisionKind::NoTrade) {
                decisions.push_back(probe_long);  // FallbackNoTrade policy
            } else {
                decisions.push_back(probe_long);
                decisions.push_back(
                    cmh_step(state, diag, Position::Short, config.kappa,
                             config.infeasible_policy));
            }
        }

        for (const HedgeDecision& decision : decisions) {
            const PortfolioState next = apply_rebalance(
                state, s_tip1 - s_ti, s_tip1, decision.new_pi(state.pi), config.kappa);
            if (tree.node_count + 1 > max_nodes)
                throw TreeBudgetError("enumerate_tree: node budget exceeded");
            auto child = std::make_unique<HedgeNode>();
            child->index = next.index;
            child->pi = next.pi;
            child->v = next.v;
            child->decision = decision;
            queue.push_back(child.get());
            node->children.push_back(std::move(child));
            ++tree.node_count;
        }
    }
    return tree;
}

std::string export_tree(const DecisionTree& tree, TreeFormat format) {
    if (!tree.root) throw std::invalid_argument("export_tree: empty tree");
    switch (format) {
        case TreeFormat::Ascii:
            return export_ascii(tree);
        case TreeFormat::Dot:
            return export_dot(tree);
        case TreeFormat::Structured:
            return export_structured(tree);
    }
    throw std::invalid_argument("export_tree: unknown format");
}

}  // namespace jdhedge
