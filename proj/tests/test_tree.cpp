#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "jdhedge/tree.hpp"

using namespace jdhedge;

namespace {

ModelParams experiment_params(double xi) {
    ModelParams p;
    p.mu = 0.15;
    p.sigma = 0.25;
    p.lambda = 0.3;
    p.jump = JumpLaw::constant(xi);
    p.s0 = 100.0;
    return p;
}

HedgeConfig call_config(HedgeMethod method, double maturity,
                        InfeasiblePolicy policy = InfeasiblePolicy::Report) {
    HedgeConfig config;
    config.kappa = 0.1;
    config.method = method;
    config.payoff = CallContract{100.0, maturity};
    config.infeasible_policy = policy;
    return config;
}

int count_nodes(const HedgeNode& node) {
    int total = 1;
    for (const auto& child : node.children) total += count_nodes(*child);
    return total;
}

void check_structure(const HedgeNode& node, HedgeMethod method) {
    if (!node.children.empty()) {
        REQUIRE(node.diag.has_value());
        if (method == HedgeMethod::Clh) {
            if (node.diag->u > 0.0) {
                CHECK(node.children.size() == 2);
            } else {
                CHECK(node.children.size() == 1);
                CHECK(node.children[0]->decision.kind == DecisionKind::NoTrade);
            }
        }
        if (node.children.size() == 2) {
            CHECK(node.children[0]->decision.kind == DecisionKind::Long);
            CHECK(node.children[1]->decision.kind == DecisionKind::Short);
            // children symmetric about the parent holding
            const double up = node.children[0]->pi - node.pi;
            const double down = node.pi - node.children[1]->pi;
            CHECK(up == doctest::Approx(down).epsilon(1e-12));
        }
    }
    for (const auto& child : node.children) check_structure(*child, method);
}

}  // namespace

TEST_CASE("single-interval grid yields a single-node tree") {
    const ModelParams p = experiment_params(0.5);
    const RebalanceGrid grid = RebalanceGrid::uniform(12.0, 1);
    const SamplePath path = simulate_path(p, grid, 4, 5);
    const DecisionTree tree = enumerate_tree(p, path, grid, call_config(HedgeMethod::Clh, 12.0));
    CHECK(tree.node_count == 1);
    CHECK(tree.root->children.empty());

    const std::string dot = export_tree(tree, TreeFormat::Dot);
    std::size_t node_statements = 0;
    std::size_t edges = 0;
    for (std::size_t pos = 0; (pos = dot.find("label=", pos)) != std::string::npos; ++pos)
        ++node_statements;
    for (std::size_t pos = 0; (pos = dot.find("->", pos)) != std::string::npos; ++pos) ++edges;
    CHECK(node_statements == 1);
    CHECK(edges == 0);
}

TEST_CASE("one CLH decision with u <= 0 gives root plus a single no-trade child") {
    // Two intervals -> one decision. A deep out-of-the-money start drives
    // ell_n below ell_pi (checked below), so the step holds.
    ModelParams p = experiment_params(-0.5);
    p.lambda = 0.0;
    p.s0 = 40.0;
    const RebalanceGrid grid = RebalanceGrid::uniform(12.0, 2);
    const SamplePath path = simulate_path(p, grid, 4, 11);
    const DecisionTree tree = enumerate_tree(p, path, grid, call_config(HedgeMethod::Clh, 12.0));
    REQUIRE(tree.root->diag.has_value());
    REQUIRE(tree.root->diag->u <= 0.0);
    CHECK(tree.node_count == 2);
    REQUIRE(tree.root->children.size() == 1);
    CHECK(tree.root->children[0]->decision.kind == DecisionKind::NoTrade);
    CHECK(tree.root->children[0]->pi == tree.root->pi);
}

TEST_CASE("all-feasible CMH enumerates the full binary tree") {
    // Zero drift makes the discrete hedge a conditional-mean match up to
    // realized tracking error; on this seed the time decay dominates the
    // convexity gap at every node, so all three decisions stay feasible.
    ModelParams p = experiment_params(-0.5);
    p.mu = 0.0;
    p.lambda = 0.0;
    const RebalanceGrid grid = RebalanceGrid::uniform(12.0, 4);
    const SamplePath path = simulate_path(p, grid, 4, 0);
    const DecisionTree tree = enumerate_tree(p, path, grid, call_config(HedgeMethod::Cmh, 12.0));
    CHECK(tree.node_count == 15);  // 1 + 2 + 4 + 8
    check_structure(*tree.root, HedgeMethod::Cmh);
}

TEST_CASE("CLH branching follows the sign of u") {
    const ModelParams p = experiment_params(0.5);
    const RebalanceGrid grid = RebalanceGrid::uniform(12.0, 6);
    const SamplePath path = simulate_path(p, grid, 20, 42);
    const DecisionTree tree = enumerate_tree(p, path, grid, call_config(HedgeMethod::Clh, 12.0));
    CHECK(tree.node_count == count_nodes(*tree.root));
    check_structure(*tree.root, HedgeMethod::Clh);
}

TEST_CASE("the always-long trajectory appears verbatim as a tree branch") {
    const ModelParams p = experiment_params(0.5);
    const RebalanceGrid grid = RebalanceGrid::uniform(12.0, 6);
    const SamplePath path = simulate_path(p, grid, 20, 42);
    const HedgeConfig config = call_config(HedgeMethod::Clh, 12.0);
    const DecisionTree tree = enumerate_tree(p, path, grid, config);
    const Trajectory traj = run_hedge(p, path, grid, config, PositionPolicy::always_long());

    const HedgeNode* node = tree.root.get();
    for (std::size_t level = 0; level + 1 < traj.states.size() - 1; ++level) {
        CHECK(node->pi == traj.states[level].pi);
        CHECK(node->v == traj.states[level].v);
        REQUIRE(!node->children.empty());
        node = node->children.front().get();  // long child first, or the single no-trade child
    }
    CHECK(node->index == grid.n_intervals() - 1);
}

TEST_CASE("CMH infeasibility prunes with an annotated terminal node") {
    const ModelParams neg = experiment_params(-0.5);
    const RebalanceGrid grid = RebalanceGrid::uniform(12.0, 6);
    const SamplePath path = simulate_path(neg, grid, 20, 42);
    const DecisionTree tree = enumerate_tree(neg, path, grid, call_config(HedgeMethod::Cmh, 12.0));
    // The Black-Scholes start is infeasible here, so the root halts.
    REQUIRE(tree.root->halt.has_value());
    CHECK(tree.root->halt->kind == DecisionKind::InfeasibleCmh);
    CHECK(tree.root->halt->deficit > 0.0);
    CHECK(tree.root->children.empty());
    CHECK(tree.node_count == 1);

    const std::string ascii = export_tree(tree, TreeFormat::Ascii);
    CHECK(ascii.find("infeasible") != std::string::npos);

    const DecisionTree fallback = enumerate_tree(
        neg, path, grid, call_config(HedgeMethod::Cmh, 12.0, InfeasiblePolicy::FallbackNoTrade));
    CHECK(fallback.node_count > 1);
}

TEST_CASE("exports are deterministic and ordered long before short") {
    const ModelParams p = experiment_params(0.5);
    const RebalanceGrid grid = RebalanceGrid::uniform(12.0, 6);
    const SamplePath path = simulate_path(p, grid, 20, 42);
    const HedgeConfig config = call_config(HedgeMethod::Clh, 12.0);
    const DecisionTree tree = enumerate_tree(p, path, grid, config);

    const std::string ascii = export_tree(tree, TreeFormat::Ascii);
    const std::string dot = export_tree(tree, TreeFormat::Dot);
    CHECK(ascii == export_tree(enumerate_tree(p, path, grid, config), TreeFormat::Ascii));
    CHECK(dot == export_tree(enumerate_tree(p, path, grid, config), TreeFormat::Dot));

    const auto long_pos = ascii.find("long ->");
    const auto short_pos = ascii.find("short ->");
    REQUIRE(long_pos != std::string::npos);
    REQUIRE(short_pos != std::string::npos);
    CHECK(long_pos < short_pos);

    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("[label=\"long\"]") != std::string::npos);
}

TEST_CASE("structured export round-trips node count and holdings bit-exactly") {
    const ModelParams p = experiment_params(0.5);
    const RebalanceGrid grid = RebalanceGrid::uniform(12.0, 6);
    const SamplePath path = simulate_path(p, grid, 20, 42);
    const DecisionTree tree = enumerate_tree(p, path, grid, call_config(HedgeMethod::Clh, 12.0));
    const std::string text = export_tree(tree, TreeFormat::Structured);

    const nlohmann::json parsed = nlohmann::json::parse(text);
    CHECK(parsed.at("node_count").get<int>() == tree.node_count);
    CHECK(parsed.at("path_seed").get<std::uint64_t>() == 42);

    // walk both trees in lockstep comparing holdings bit for bit
    int visited = 0;
    const std::function<void(const HedgeNode&, const nlohmann::json&)> walk =
        [&](const HedgeNode& node, const nlohmann::json& j) {
            ++visited;
            CHECK(j.at("index").get<int>() == node.index);
            CHECK(j.at("pi").get<double>() == node.pi);
            CHECK(j.at("v").get<double>() == node.v);
            const auto& children = j.at("children");
            REQUIRE(children.size() == node.children.size());
            for (std::size_t i = 0; i < node.children.size(); ++i)
                walk(*node.children[i], children[i]);
        };
    walk(*tree.root, parsed.at("root"));
    CHECK(visited == tree.node_count);
}

TEST_CASE("node budget is enforced") {
    const ModelParams p = experiment_params(0.5);
    const RebalanceGrid grid = RebalanceGrid::uniform(12.0, 6);
    const SamplePath path = simulate_path(p, grid, 20, 42);
    CHECK_THROWS_AS(enumerate_tree(p, path, grid, call_config(HedgeMethod::Clh, 12.0), 3),
                    TreeBudgetError);
}
