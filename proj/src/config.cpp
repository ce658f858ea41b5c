#include "jdhedge/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace jdhedge {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& text, int line, const std::string& key) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        fail(line, "invalid numeric value for '" + key + "'");
    return value;
}

template <typename Int>
Int parse_int(const std::string& text, int line, const std::string& key) {
    Int value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        fail(line, "invalid integer value for '" + key + "'");
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

JumpLaw parse_jump(const std::string& text, int line) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        fail(line, "jump must be constant:<c> or discrete:<v>:<p>,...");
    const std::string tag = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    try {
        if (tag == "constant") return JumpLaw::constant(parse_double(rest, line, "jump"));
        if (tag == "discrete") {
            std::vector<double> values;
            std::vector<double> probs;
            for (const std::string& atom : split(rest, ',')) {
                const auto parts = split(atom, ':');
                if (parts.size() != 2) fail(line, "discrete jump atoms must be <v>:<p>");
                values.push_back(parse_double(trim(parts[0]), line, "jump"));
                probs.push_back(parse_double(trim(parts[1]), line, "jump"));
            }
            return JumpLaw::discrete(std::move(values), std::move(probs));
        }
    } catch (const std::invalid_argument& e) {
        fail(line, std::string("jump: ") + e.what());
    }
    fail(line, "unknown jump kind '" + tag + "'");
}

PositionPolicy parse_policy(const std::string& text, int line) {
    if (text == "long") return PositionPolicy::always_long();
    if (text == "short") return PositionPolicy::always_short();
    const std::string prefix = "sequence:";
    if (text.rfind(prefix, 0) == 0) {
        std::vector<Position> seq;
        for (const char c : text.substr(prefix.size())) {
            if (c == 'L')
                seq.push_back(Position::Long);
            else if (c == 'S')
                seq.push_back(Position::Short);
            else
                fail(line, "policy sequence may contain only 'L' and 'S'");
        }
        if (seq.empty()) fail(line, "policy sequence must not be empty");
        return PositionPolicy::sequence(std::move(seq));
    }
    fail(line, "policy must be long, short or sequence:<LS...>");
}

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

const std::set<std::string> kKnownKeys = {
    "mu",        "sigma",      "lambda",     "jump",       "s0",       "strike",
    "T",         "n_rebalances", "refinement", "kappa",    "method",   "policy",
    "infeasible", "seed",      "out_series", "out_tree",   "tree_format"};

const std::set<std::string> kRequiredKeys = {"mu",     "sigma", "lambda", "jump",  "s0",
                                             "strike", "T",     "n_rebalances", "kappa", "seed"};

}  // namespace

void RunConfig::validate() const {
    auto require = [](bool ok, const char* message) {
        if (!ok) throw ConfigError(message);
    };
    require(std::isfinite(model.mu), "mu must be finite");
    require(std::isfinite(model.sigma) && model.sigma > 0.0, "sigma must be positive");
    require(std::isfinite(model.lambda) && model.lambda >= 0.0, "lambda must be nonnegative");
    require(std::isfinite(model.s0) && model.s0 > 0.0, "s0 must be positive");
    require(std::isfinite(strike) && strike > 0.0, "strike must be positive");
    require(std::isfinite(horizon) && horizon > 0.0, "T must be positive");
    require(n_rebalances >= 1, "n_rebalances must be >= 1");
    require(refinement >= 1, "refinement must be >= 1");
    require(std::isfinite(kappa) && kappa > 0.0 && kappa < 1.0, "kappa must lie in (0,1)");
    if (policy.kind() == PositionPolicy::Kind::Sequence)
        require(static_cast<int>(policy.positions().size()) == n_rebalances,
                "policy sequence length must equal n_rebalances");
    require(!out_series.empty(), "out_series must not be empty");
    require(!out_tree.empty(), "out_tree must not be empty");
}

RebalanceGrid RunConfig::make_grid() const {
    // n_rebalances decisions at t_0 .. t_{R-1}; the extra final interval
    // [t_R, T] carries the position into maturity without a trade.
    return RebalanceGrid::uniform(horizon, n_rebalances + 1);
}

HedgeConfig RunConfig::make_hedge_config() const {
    HedgeConfig hedge;
    hedge.kappa = kappa;
    hedge.method = method;
    hedge.payoff = contract();
    hedge.infeasible_policy = infeasible;
    return hedge;
}

RunConfig load_config(std::istream& in) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto comment = raw.find('#');
        if (comment != std::string::npos) raw.erase(comment);
        const std::string text = trim(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (!kKnownKeys.count(key)) fail(line, "unknown key '" + key + "'");
        if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
        if (value.empty()) fail(line, "empty value for '" + key + "'");

        if (key == "mu")
            cfg.model.mu = parse_double(value, line, key);
        else if (key == "sigma")
            cfg.model.sigma = parse_double(value, line, key);
        else if (key == "lambda")
            cfg.model.lambda = parse_double(value, line, key);
        else if (key == "jump")
            cfg.model.jump = parse_jump(value, line);
        else if (key == "s0")
            cfg.model.s0 = parse_double(value, line, key);
        else if (key == "strike")
            cfg.strike = parse_double(value, line, key);
        else if (key == "T")
            cfg.horizon = parse_double(value, line, key);
        else if (key == "n_rebalances")
            cfg.n_rebalances = parse_int<int>(value, line, key);
        else if (key == "refinement")
            cfg.refinement = parse_int<int>(value, line, key);
        else if (key == "kappa")
            cfg.kappa = parse_double(value, line, key);
        else if (key == "method") {
            if (value == "cmh")
                cfg.method = HedgeMethod::Cmh;
            else if (value == "clh")
                cfg.method = HedgeMethod::Clh;
            else
                fail(line, "method must be cmh or clh");
        } else if (key == "policy")
            cfg.policy = parse_policy(value, line);
        else if (key == "infeasible") {
            if (value == "report")
                cfg.infeasible = InfeasiblePolicy::Report;
            else if (value == "fallback")
                cfg.infeasible = InfeasiblePolicy::FallbackNoTrade;
            else
                fail(line, "infeasible must be report or fallback");
        } else if (key == "seed")
            cfg.seed = parse_int<std::uint64_t>(value, line, key);
        else if (key == "out_series")
            cfg.out_series = value;
        else if (key == "out_tree")
            cfg.out_tree = value;
        else if (key == "tree_format") {
            if (value == "ascii")
                cfg.tree_format = TreeFormat::Ascii;
            else if (value == "dot")
                cfg.tree_format = TreeFormat::Dot;
            else if (value == "structured")
                cfg.tree_format = TreeFormat::Structured;
            else
                fail(line, "tree_format must be ascii, dot or structured");
        }
    }
    for (const std::string& key : kRequiredKeys)
        if (!seen.count(key)) throw ConfigError("missing required key '" + key + "'");
    cfg.validate();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return load_config(in);
}

std::string serialize_config(const RunConfig& config) {
    std::ostringstream out;
    out << "mu = " << g17(config.model.mu) << '\n';
    out << "sigma = " << g17(config.model.sigma) << '\n';
    out << "lambda = " << g17(config.model.lambda) << '\n';
    out << "jump = ";
    if (config.model.jump.kind() == JumpLaw::Kind::Constant) {
        out << "constant:" << g17(config.model.jump.values().front());
    } else {
        out << "discrete:";
        const auto& values = config.model.jump.values();
        const auto& probs = config.model.jump.probs();
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i > 0) out << ',';
            out << g17(values[i]) << ':' << g17(probs[i]);
        }
    }
    out << '\n';
    out << "s0 = " << g17(config.model.s0) << '\n';
    out << "strike = " << g17(config.strike) << '\n';
    out << "T = " << g17(config.horizon) << '\n';
    out << "n_rebalances = " << config.n_rebalances << '\n';
    out << "refinement = " << config.refinement << '\n';
    out << "kappa = " << g17(config.kappa) << '\n';
    out << "method = " << (config.method == HedgeMethod::Cmh ? "cmh" : "clh") << '\n';
    out << "policy = ";
    switch (config.policy.kind()) {
        case PositionPolicy::Kind::AlwaysLong:
            out << "long";
            break;
        case PositionPolicy::Kind::AlwaysShort:
            out << "short";
            break;
        case PositionPolicy::Kind::Sequence:
            out << "sequence:";
            for (const Position p : config.policy.positions())
                out << (p == Position::Long ? 'L' : 'S');
            break;
    }
    out << '\n';
    out << "infeasible = "
        << (config.infeasible == InfeasiblePolicy::Report ? "report" : "fallback") << '\n';
    out << "seed = " << config.seed << '\n';
    out << "out_series = " << config.out_series << '\n';
    out << "out_tree = " << config.out_tree << '\n';
    out << "tree_format = ";
    switch (config.tree_format) {
        case TreeFormat::Ascii:
            out << "ascii";
            break;
        case TreeFormat::Dot:
            out << "dot";
            break;
        case TreeFormat::Structured:
            out << "structured";
            break;
    }
    out << '\n';
    return out.str();
}

}  // namespace jdhedge
