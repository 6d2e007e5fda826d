#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "diqpq/adversary.hpp"
#include "diqpq/bell.hpp"
#include "diqpq/config.hpp"
#include "diqpq/detector.hpp"
#include "diqpq/figures.hpp"
#include "diqpq/finite_stats.hpp"
#include "diqpq/protocol.hpp"
#include "diqpq/quantum.hpp"
#include "diqpq/transcript.hpp"

namespace py = pybind11;
using namespace diqpq;

namespace {

py::dict outcome_to_dict(const AttackOutcome& o) {
    py::dict d;
    const char* region = o.region == AttackRegion::Case1   ? "case1"
                         : o.region == AttackRegion::Case2 ? "case2"
                                                           : "none";
    d["region"] = region;
    d["certification_passed"] = o.certification_passed;
    d["observed_i"] = o.observed_i;
    d["target_i"] = o.target_i;
    d["alice_known_fraction"] = o.alice_known_fraction;
    d["analytic_guess_rate"] = o.analytic_guess_rate;
    return d;
}

py::dict transcript_to_dict(const Transcript& t) {
    py::dict d;
    d["verdict"] = t.verdict == Verdict::Proceed ? "proceed" : "abort";
    d["method"] = t.method == CertMethod::Game ? "game" : "test";
    d["observed"] = t.observed_stat;
    d["reference"] = t.reference_stat;
    d["margin"] = t.margin;
    d["key_attempts"] = t.key_attempts;
    if (t.final_key) {
        d["final_key_bits"] = t.final_key->bob_bits;
        d["block_size"] = t.final_key->block_size;
    }
    if (t.query) {
        d["shift"] = t.query->shift;
        d["retrieved_bit"] = t.query->retrieved_bit;
    }
    d["transcript"] = serialize_transcript(t);
    return d;
}

}  // namespace

PYBIND11_MODULE(_diqpq, m) {
    m.doc() = "Detection-aware private query simulator core";

    py::class_<BellAngles>(m, "BellAngles")
        .def(py::init<double, double, double>(), py::arg("theta"), py::arg("psi1"),
             py::arg("psi2"))
        .def_readwrite("theta", &BellAngles::theta)
        .def_readwrite("psi1", &BellAngles::psi1)
        .def_readwrite("psi2", &BellAngles::psi2);

    m.attr("LOOPHOLE_CLOSING_ETA") = loophole_closing_eta();

    m.def("game_threshold", &game_threshold, py::arg("angles"));
    m.def("chsh_ideal", &chsh_ideal, py::arg("angles"));
    m.def("threshold_with_eta", &threshold_with_eta, py::arg("angles"), py::arg("eta"));
    m.def("biased_game_value", &biased_game_value, py::arg("angles"), py::arg("eps"));
    m.def("biased_chsh_value", &biased_chsh_value, py::arg("angles"), py::arg("eps"));
    m.def("attack_chsh_value", &attack_chsh_value, py::arg("angles"), py::arg("eps"),
          py::arg("eta"));
    m.def("delta_lower_bound", &delta_lower_bound, py::arg("eta"));
    m.def("chsh_bound_given_delta", &chsh_bound_given_delta, py::arg("s"), py::arg("delta"));
    m.def("case2_eps_bound", &case2_eps_bound, py::arg("angles"), py::arg("eta"));
    m.def(
        "classify_attack_region",
        [](const BellAngles& angles, double eta, double eps) {
            AttackRegion r = classify_attack_region(angles, eps, eta);
            return r == AttackRegion::Case1 ? "case1" : r == AttackRegion::Case2 ? "case2" : "none";
        },
        py::arg("angles"), py::arg("eta"), py::arg("eps"));

    m.def(
        "joint_distribution",
        [](double theta, double eps, double bob_angle, double alice_angle) {
            TwoQubitState state = make_biased_state(theta, eps);
            auto d = joint_distribution(state, QubitBasis(bob_angle), QubitBasis(alice_angle));
            return std::vector<double>(d.begin(), d.end());
        },
        py::arg("theta"), py::arg("eps"), py::arg("bob_angle"), py::arg("alice_angle"));

    m.def("xi", &xi, py::arg("gamma"), py::arg("n"), py::arg("eps_chsh"),
          py::arg("range") = kGameStatRange);
    m.def("nu", &nu, py::arg("gamma"), py::arg("n"), py::arg("eps_qpq"),
          py::arg("range") = kGameStatRange);

    m.def("alice_guess_success", &alice_guess_success, py::arg("theta"), py::arg("eps"));
    m.def("attack_advantage", &attack_advantage, py::arg("theta"), py::arg("eps"));
    m.def("dilution_block_size", &dilution_block_size, py::arg("final_bits"), py::arg("p_known"),
          py::arg("target_known") = 1.0);

    m.def(
        "evaluate_attack",
        [](const BellAngles& angles, double eta, double eps, double gamma, std::uint64_t pairs,
           std::uint64_t seed, std::uint64_t key_rounds) {
            ProtocolParams params;
            params.angles = angles;
            params.gamma = gamma;
            params.pairs = pairs;
            params.detector.eta = eta;
            params.seed = seed;
            return outcome_to_dict(evaluate_attack(params, eps, key_rounds));
        },
        py::arg("angles"), py::arg("eta"), py::arg("eps"), py::arg("gamma") = 0.5,
        py::arg("pairs") = 200000, py::arg("seed") = 1, py::arg("key_rounds") = 100000);

    m.def(
        "run_protocol",
        [](const std::string& config_text, const std::string& database, std::uint64_t index) {
            ExperimentConfig cfg = parse_config_string(config_text);
            Database db;
            for (char c : database) {
                if (c == '0' || c == '1') db.items.push_back(static_cast<std::uint8_t>(c - '0'));
            }
            if (db.items.empty()) throw std::invalid_argument("empty database");
            return transcript_to_dict(run_full_protocol(cfg.run_spec(), db, index));
        },
        py::arg("config_text"), py::arg("database"), py::arg("index") = 0);

    m.def(
        "parse_transcript",
        [](const std::string& text) { return transcript_to_dict(parse_transcript_string(text)); },
        py::arg("text"));

    m.def("figure_csv", &figure_csv, py::arg("figure_id"));
    m.def("attack_scan_csv", &attack_scan_csv, py::arg("angles"), py::arg("eps_min"),
          py::arg("eps_max"), py::arg("eta_min"), py::arg("eta_max"), py::arg("resolution"));
}
