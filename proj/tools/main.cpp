#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "diqpq/adversary.hpp"
#include "diqpq/bell.hpp"
#include "diqpq/config.hpp"
#include "diqpq/detector.hpp"
#include "diqpq/figures.hpp"
#include "diqpq/finite_stats.hpp"
#include "diqpq/protocol.hpp"
#include "diqpq/quantum.hpp"
#include "diqpq/transcript.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAbort = 2;
constexpr int kExitConfig = 64;
constexpr int kExitIo = 74;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

void require_readable(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
}

diqpq::Database load_database(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open database file: " + path);
    std::string line;
    std::getline(in, line);
    diqpq::Database db;
    for (char c : line) {
        if (c == '0' || c == '1') {
            db.items.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (c == '\r' || c == ' ') {
            continue;
        } else {
            throw diqpq::ConfigError(path + ": database items must be '0' or '1'");
        }
    }
    if (db.items.empty()) throw diqpq::ConfigError(path + ": empty database");
    return db;
}

void apply_method(diqpq::ExperimentConfig& cfg, const std::string& method) {
    if (method.empty()) return;
    if (method == "game") {
        cfg.method = diqpq::CertMethod::Game;
    } else if (method == "test") {
        cfg.method = diqpq::CertMethod::Test;
    } else {
        throw diqpq::ConfigError("--method must be 'game' or 'test'");
    }
}

diqpq::Transcript certification_transcript(const diqpq::ExperimentConfig& cfg) {
    const auto& p = cfg.params;
    diqpq::StateSource source = cfg.source == "biased"
                                    ? diqpq::biased_source(p.angles.theta, cfg.source_eps)
                                    : diqpq::honest_source(p.angles.theta);
    std::unique_ptr<diqpq::ClickPolicy> clicks;
    if (cfg.clicks == "adversarial") {
        diqpq::TwoQubitState state = diqpq::make_biased_state(p.angles.theta, cfg.source_eps);
        clicks = std::make_unique<diqpq::AdversarialClickPolicy>(p.detector.eta, state, p.angles);
    } else {
        clicks = std::make_unique<diqpq::HonestClickPolicy>(p.detector.eta);
    }
    diqpq::CertificationResult result = diqpq::run_certification(
        p, source, *clicks, cfg.method, cfg.threshold_mode, false, cfg.agreed_eps);

    diqpq::Transcript transcript;
    transcript.params = p;
    transcript.method = cfg.method;
    transcript.threshold_mode = cfg.threshold_mode;
    transcript.source_kind = cfg.source;
    transcript.source_eps = cfg.source_eps;
    transcript.click_kind = cfg.clicks;
    transcript.agreed_eps = cfg.agreed_eps;
    transcript.verdict = result.verdict;
    transcript.abort_reason = result.reason;
    transcript.observed_stat = result.observed;
    transcript.reference_stat = result.reference;
    transcript.margin = result.margin;
    transcript.chsh_records = std::move(result.records);
    return transcript;
}

int cmd_certify(const std::string& config_path, std::optional<std::uint64_t> seed,
                const std::string& method, const std::string& out_path,
                std::uint64_t repetitions) {
    require_readable(config_path);
    diqpq::ExperimentConfig cfg = diqpq::load_config(config_path);
    if (seed) cfg.params.seed = *seed;
    apply_method(cfg, method);
    if (repetitions == 0) repetitions = cfg.repetitions;

    if (repetitions > 1) {
        double fraction = diqpq::validate_concentration(cfg.params, repetitions);
        std::cout << "repetitions " << repetitions << "\n";
        std::cout << "deviation_fraction " << fraction << "\n";
        std::cout << "eps_chsh " << cfg.params.eps_chsh << "\n";
        return kExitOk;
    }

    diqpq::Transcript transcript = certification_transcript(cfg);
    write_text(out_path, diqpq::serialize_transcript(transcript));
    std::cerr << (transcript.verdict == diqpq::Verdict::Proceed ? "proceed" : "abort")
              << " observed=" << transcript.observed_stat
              << " reference=" << transcript.reference_stat << " margin=" << transcript.margin
              << "\n";
    return transcript.verdict == diqpq::Verdict::Proceed ? kExitOk : kExitAbort;
}

int cmd_protocol(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& method, const std::string& out_path,
                 const std::string& db_path, std::uint64_t alice_index) {
    require_readable(config_path);
    diqpq::ExperimentConfig cfg = diqpq::load_config(config_path);
    if (seed) cfg.params.seed = *seed;
    apply_method(cfg, method);
    diqpq::Database db = load_database(db_path);
    if (alice_index >= db.items.size()) {
        throw diqpq::ConfigError("--index out of range for the database size");
    }
    diqpq::Transcript transcript = diqpq::run_full_protocol(cfg.run_spec(), db, alice_index);
    write_text(out_path, diqpq::serialize_transcript(transcript));
    if (transcript.verdict != diqpq::Verdict::Proceed) {
        std::cerr << "abort observed=" << transcript.observed_stat
                  << " reference=" << transcript.reference_stat << "\n";
        return kExitAbort;
    }
    std::cerr << "proceed item[" << alice_index
              << "]=" << transcript.query->retrieved_bit << "\n";
    return kExitOk;
}

int cmd_figure(int figure_id, const std::string& out_path) {
    write_text(out_path, diqpq::figure_csv(figure_id));
    return kExitOk;
}

int cmd_attack_scan(double theta, double psi1, double psi2, double eps_min, double eps_max,
                    double eta_min, double eta_max, int resolution,
                    const std::string& out_path) {
    diqpq::BellAngles angles{theta, psi1, psi2};
    diqpq::validate_angles(angles);
    write_text(out_path,
               diqpq::attack_scan_csv(angles, eps_min, eps_max, eta_min, eta_max, resolution));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detection-aware private query simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string method;
    std::optional<std::uint64_t> seed;
    std::uint64_t repetitions = 0;

    auto* certify = app.add_subcommand("certify", "Run the certification phase");
    certify->add_option("--config", config_path, "experiment config file")->required();
    certify->add_option("--seed", seed, "override the config seed");
    certify->add_option("--method", method, "statistic: game or test");
    certify->add_option("--out", out_path, "transcript output path ('-' = stdout)");
    certify->add_option("--repetitions", repetitions,
                        "run R honest repetitions and report the deviation fraction");

    std::string db_path;
    std::uint64_t alice_index = 0;
    auto* protocol = app.add_subcommand("protocol", "Run certification, key phase and query");
    protocol->add_option("--config", config_path, "experiment config file")->required();
    protocol->add_option("--seed", seed, "override the config seed");
    protocol->add_option("--method", method, "statistic: game or test");
    protocol->add_option("--out", out_path, "transcript output path ('-' = stdout)");
    protocol->add_option("--db", db_path, "database file, one line of '0'/'1'")->required();
    protocol->add_option("--index", alice_index, "item Alice retrieves");

    int figure_id = 0;
    auto* figure = app.add_subcommand("figure", "Emit a threshold CSV");
    figure->add_option("--figure", figure_id, "figure id")
        ->required()
        ->check(CLI::IsMember({3, 4, 5}));
    figure->add_option("--out", out_path, "CSV output path ('-' = stdout)");

    double theta = std::numbers::pi / 2.0;
    double psi1 = std::numbers::pi / 4.0;
    double psi2 = 3.0 * std::numbers::pi / 4.0;
    double eps_min = -0.49, eps_max = 0.49;
    double eta_min = 0.71, eta_max = 1.0;
    int resolution = 200;
    auto* scan = app.add_subcommand("attack-scan", "Classify the (eps, eta) grid");
    scan->add_option("--theta", theta, "state angle (radians)");
    scan->add_option("--psi1", psi1, "first test angle (radians)");
    scan->add_option("--psi2", psi2, "second test angle (radians)");
    scan->add_option("--eps-min", eps_min, "bias grid start");
    scan->add_option("--eps-max", eps_max, "bias grid end");
    scan->add_option("--eta-min", eta_min, "efficiency grid start");
    scan->add_option("--eta-max", eta_max, "efficiency grid end");
    scan->add_option("--resolution", resolution, "grid points per axis");
    scan->add_option("--out", out_path, "CSV output path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (certify->parsed()) return cmd_certify(config_path, seed, method, out_path, repetitions);
        if (protocol->parsed())
            return cmd_protocol(config_path, seed, method, out_path, db_path, alice_index);
        if (figure->parsed()) return cmd_figure(figure_id, out_path);
        return cmd_attack_scan(theta, psi1, psi2, eps_min, eps_max, eta_min, eta_max, resolution,
                               out_path);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const diqpq::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
