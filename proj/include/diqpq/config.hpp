#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "diqpq/protocol.hpp"

namespace diqpq {

// Parsed experiment configuration; mirrors ProtocolParams plus source,
// click-policy and adversary selection. All angles are radians.
struct ExperimentConfig {
    ProtocolParams params;
    CertMethod method = CertMethod::Test;
    ThresholdMode threshold_mode = ThresholdMode::EtaCorrected;
    std::string source = "honest";  // "honest" | "biased"
    double source_eps = 0.0;
    std::string clicks = "honest";  // "honest" | "adversarial"
    double agreed_eps = 0.0;
    std::uint64_t repetitions = 1;

    RunSpec run_spec() const;
};

// Versioned key = value plain text; '#' starts a comment. Unknown keys,
// bad values and violated parameter constraints are reported with the
// offending line number.
ExperimentConfig parse_config(std::istream& in, const std::string& origin = "<config>");
ExperimentConfig parse_config_string(const std::string& text,
                                     const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace diqpq
