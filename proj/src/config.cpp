#include "diqpq/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

namespace diqpq {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& origin, int line, const std::string& v) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') fail(origin, line, "expected a number, got '" + v + "'");
    return d;
}

std::uint64_t parse_u64(const std::string& origin, int line, const std::string& v) {
    char* end = nullptr;
    const unsigned long long d = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') {
        fail(origin, line, "expected a nonnegative integer, got '" + v + "'");
    }
    return d;
}

}  // namespace

RunSpec ExperimentConfig::run_spec() const {
    RunSpec spec;
    spec.params = params;
    spec.method = method;
    spec.threshold_mode = threshold_mode;
    spec.biased_source = source == "biased";
    spec.source_eps = source_eps;
    spec.adversarial_clicks = clicks == "adversarial";
    spec.agreed_eps = agreed_eps;
    if (spec.biased_source) {
        // The biased supplier also skews her basis coin to alpha^2.
        spec.alice_policy.p_basis1 = 0.5 + source_eps;
    }
    return spec;
}

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
    ExperimentConfig cfg;
    cfg.params.angles = BellAngles{std::numbers::pi / 2, std::numbers::pi / 4,
                                   3 * std::numbers::pi / 4};
    cfg.params.pairs = 100000;

    bool versioned = false;
    std::string line;
    int lineno = 0;
    int constraint_line = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail(origin, lineno, "expected 'key = value'");
        constraint_line = lineno;

        if (key == "version") {
            if (value != "1") fail(origin, lineno, "unsupported config version '" + value + "'");
            versioned = true;
        } else if (key == "theta_rad") {
            cfg.params.angles.theta = parse_double(origin, lineno, value);
        } else if (key == "psi1_rad") {
            cfg.params.angles.psi1 = parse_double(origin, lineno, value);
        } else if (key == "psi2_rad") {
            cfg.params.angles.psi2 = parse_double(origin, lineno, value);
        } else if (key == "gamma") {
            cfg.params.gamma = parse_double(origin, lineno, value);
        } else if (key == "pairs") {
            cfg.params.pairs = parse_u64(origin, lineno, value);
        } else if (key == "eta") {
            cfg.params.detector.eta = parse_double(origin, lineno, value);
        } else if (key == "eps_chsh") {
            cfg.params.eps_chsh = parse_double(origin, lineno, value);
        } else if (key == "eps_qpq") {
            cfg.params.eps_qpq = parse_double(origin, lineno, value);
        } else if (key == "loss") {
            cfg.params.loss = parse_double(origin, lineno, value);
        } else if (key == "seed") {
            cfg.params.seed = parse_u64(origin, lineno, value);
        } else if (key == "method") {
            if (value == "game") cfg.method = CertMethod::Game;
            else if (value == "test") cfg.method = CertMethod::Test;
            else fail(origin, lineno, "method must be 'game' or 'test'");
        } else if (key == "threshold") {
            if (value == "ideal") cfg.threshold_mode = ThresholdMode::Ideal;
            else if (value == "eta") cfg.threshold_mode = ThresholdMode::EtaCorrected;
            else fail(origin, lineno, "threshold must be 'eta' or 'ideal'");
        } else if (key == "source") {
            if (value != "honest" && value != "biased") {
                fail(origin, lineno, "source must be 'honest' or 'biased'");
            }
            cfg.source = value;
        } else if (key == "source_epsilon") {
            cfg.source_eps = parse_double(origin, lineno, value);
        } else if (key == "clicks") {
            if (value != "honest" && value != "adversarial") {
                fail(origin, lineno, "clicks must be 'honest' or 'adversarial'");
            }
            cfg.clicks = value;
        } else if (key == "agreed_epsilon") {
            cfg.agreed_eps = parse_double(origin, lineno, value);
        } else if (key == "repetitions") {
            cfg.repetitions = parse_u64(origin, lineno, value);
            if (cfg.repetitions == 0) fail(origin, lineno, "repetitions must be positive");
        } else {
            fail(origin, lineno, "unknown key '" + key + "'");
        }
    }
    if (!versioned) {
        throw ConfigError(origin + ": missing 'version = 1' field");
    }
    try {
        validate_params(cfg.params);
        if (cfg.source == "biased" || cfg.source_eps != 0.0) {
            if (!(std::abs(cfg.source_eps) < 0.5)) {
                throw std::domain_error("source_epsilon must lie in (-1/2, 1/2)");
            }
        }
        if (!(std::abs(cfg.agreed_eps) < 0.5)) {
            throw std::domain_error("agreed_epsilon must lie in (-1/2, 1/2)");
        }
    } catch (const std::domain_error& e) {
        fail(origin, constraint_line, e.what());
    }
    return cfg;
}

ExperimentConfig parse_config_string(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    return parse_config(in, origin);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    return parse_config(in, path);
}

}  // namespace diqpq
