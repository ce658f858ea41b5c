#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "jdhedge/config.hpp"
#include "jdhedge/series.hpp"

using namespace jdhedge;

namespace {

const char* kExperimentConfig =
    "# one-year experiment, five rebalances\n"
    "mu = 0.15\n"
    "sigma = 0.25\n"
    "lambda = 0.3\n"
    "jump = constant:-0.5\n"
    "s0 = 100\n"
    "strike = 100\n"
    "T = 12\n"
    "n_rebalances = 5\n"
    "kappa = 0.1\n"
    "seed = 42\n";

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return load_config(in);
}

}  // namespace

TEST_CASE("the experiment config parses with documented defaults") {
    const RunConfig cfg = parse(kExperimentConfig);
    CHECK(cfg.model.mu == 0.15);
    CHECK(cfg.model.sigma == 0.25);
    CHECK(cfg.model.lambda == 0.3);
    CHECK(cfg.model.jump.kind() == JumpLaw::Kind::Constant);
    CHECK(cfg.model.jump.moment(1) == -0.5);
    CHECK(cfg.horizon == 12.0);
    CHECK(cfg.n_rebalances == 5);
    CHECK(cfg.kappa == 0.1);
    CHECK(cfg.seed == 42);
    // defaults
    CHECK(cfg.refinement == 20);
    CHECK(cfg.tree_format == TreeFormat::Ascii);
    CHECK(cfg.method == HedgeMethod::Clh);
    CHECK(cfg.policy == PositionPolicy::always_long());
    CHECK(cfg.infeasible == InfeasiblePolicy::Report);
    CHECK(cfg.make_grid().n_intervals() == 6);
    CHECK(cfg.contract().strike == 100.0);
    CHECK(cfg.contract().maturity == 12.0);
}

TEST_CASE("round trip: serialize then load reproduces the config") {
    RunConfig cfg = parse(kExperimentConfig);
    cfg.model.jump = JumpLaw::discrete({-0.2, 0.4}, {0.5, 0.5});
    cfg.policy = PositionPolicy::sequence(
        {Position::Long, Position::Short, Position::Long, Position::Long, Position::Short});
    cfg.method = HedgeMethod::Cmh;
    cfg.infeasible = InfeasiblePolicy::FallbackNoTrade;
    cfg.tree_format = TreeFormat::Structured;
    cfg.seed = 1234567890123ULL;
    const RunConfig again = parse(serialize_config(cfg));
    CHECK(again == cfg);
    CHECK(serialize_config(again) == serialize_config(cfg));
}

TEST_CASE("config errors carry lines and field names") {
    SUBCASE("missing sigma") {
        std::string text;
        for (const std::string line : {"mu = 0.15", "lambda = 0.3", "jump = constant:-0.5",
                                       "s0 = 100", "strike = 100", "T = 12",
                                       "n_rebalances = 5", "kappa = 0.1", "seed = 1"})
            text += line + "\n";
        CHECK_THROWS_WITH_AS(parse(text), "missing required key 'sigma'", ConfigError);
    }
    SUBCASE("kappa outside (0,1)") {
        std::string text = kExperimentConfig;
        text.replace(text.find("kappa = 0.1"), 11, "kappa = 1.5");
        CHECK_THROWS_WITH_AS(parse(text), "kappa must lie in (0,1)", ConfigError);
    }
    SUBCASE("unknown key names its line") {
        const std::string text = std::string(kExperimentConfig) + "volatility = 0.3\n";
        CHECK_THROWS_WITH_AS(parse(text), "line 12: unknown key 'volatility'", ConfigError);
    }
    SUBCASE("duplicate key rejected") {
        const std::string text = std::string(kExperimentConfig) + "mu = 0.2\n";
        CHECK_THROWS_WITH_AS(parse(text), "line 12: duplicate key 'mu'", ConfigError);
    }
    SUBCASE("malformed values") {
        std::string text = kExperimentConfig;
        text.replace(text.find("sigma = 0.25"), 12, "sigma = fast");
        CHECK_THROWS_AS(parse(text), ConfigError);
        CHECK_THROWS_AS(parse(std::string(kExperimentConfig) + "jump\n"), ConfigError);
    }
    SUBCASE("invalid jump support") {
        std::string text = kExperimentConfig;
        text.replace(text.find("jump = constant:-0.5"), 20, "jump = constant:-1.5");
        CHECK_THROWS_AS(parse(text), ConfigError);
    }
    SUBCASE("policy sequence must match the rebalance count") {
        const std::string text = std::string(kExperimentConfig) + "policy = sequence:LS\n";
        CHECK_THROWS_WITH_AS(parse(text), "policy sequence length must equal n_rebalances",
                             ConfigError);
    }
    SUBCASE("discrete jump syntax") {
        std::string text = kExperimentConfig;
        text.replace(text.find("jump = constant:-0.5"), 20,
                     "jump = discrete:-0.2:0.5,0.4:0.5");
        const RunConfig cfg = parse(text);
        CHECK(cfg.model.jump.kind() == JumpLaw::Kind::Discrete);
        CHECK(cfg.model.jump.values().size() == 2);
    }
}

TEST_CASE("series CSV layout and degeneracies") {
    RunConfig cfg = parse(kExperimentConfig);
    cfg.refinement = 4;
    const RebalanceGrid grid = cfg.make_grid();
    const SamplePath path = simulate_path(cfg.model, grid, cfg.refinement, cfg.seed);
    const Trajectory traj =
        run_hedge(cfg.model, path, grid, cfg.make_hedge_config(), cfg.policy);
    const std::string csv = series_csv(path, grid, traj, cfg.contract(), cfg.model);

    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "t,s,s_bs,w,n_jumps,bs_price,bs_delta,pi_n,v_pi_n");

    std::string first;
    std::getline(lines, first);
    CHECK(first.rfind("0,100,100,0,0,", 0) == 0);

    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == grid.n_intervals() * cfg.refinement);  // plus the first row above

    SUBCASE("lambda = 0 makes the price columns identical") {
        RunConfig flat = cfg;
        flat.model.lambda = 0.0;
        const SamplePath p2 = simulate_path(flat.model, grid, flat.refinement, 7);
        const Trajectory t2 =
            run_hedge(flat.model, p2, grid, flat.make_hedge_config(), flat.policy);
        const std::string csv2 = series_csv(p2, grid, t2, flat.contract(), flat.model);
        std::istringstream in2(csv2);
        std::string row;
        std::getline(in2, row);  // header
        while (std::getline(in2, row)) {
            const auto c1 = row.find(',');
            const auto c2 = row.find(',', c1 + 1);
            const auto c3 = row.find(',', c2 + 1);
            CHECK(row.substr(c1 + 1, c2 - c1 - 1) == row.substr(c2 + 1, c3 - c2 - 1));
        }
    }
}

TEST_CASE("decision log records every step and the terminal settlement") {
    const RunConfig cfg = parse(kExperimentConfig);
    const RebalanceGrid grid = cfg.make_grid();
    const SamplePath path = simulate_path(cfg.model, grid, cfg.refinement, cfg.seed);
    const Trajectory traj =
        run_hedge(cfg.model, path, grid, cfg.make_hedge_config(), cfg.policy);
    const std::string log = decision_log(traj, path, grid);
    CHECK(log.rfind("init t=0 ", 0) == 0);
    for (std::size_t i = 0; i < traj.steps.size(); ++i)
        CHECK(log.find("step i=" + std::to_string(i) + " ") != std::string::npos);
    CHECK(log.find("status completed") != std::string::npos);
    CHECK(log.find("payoff=") != std::string::npos);
}
