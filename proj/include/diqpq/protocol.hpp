#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diqpq/bell.hpp"
#include "diqpq/detector.hpp"
#include "diqpq/quantum.hpp"

namespace diqpq {

enum class CertMethod { Game, Test };

// Which analytic reference the certification verdict compares against.
// EtaCorrected is the efficiency-aware threshold; Ideal is the
// perfect-detector reference (the check the biased-state attack targets).
enum class ThresholdMode { EtaCorrected, Ideal };

struct ProtocolParams {
    BellAngles angles{0.0, 0.0, 0.0};
    double gamma = 0.5;        // certification fraction
    std::uint64_t pairs = 0;   // N
    DetectorSpec detector{};   // eta
    double eps_chsh = 1e-6;
    double eps_qpq = 1e-6;
    double loss = 0.0;         // transmission loss in the key phase
    std::uint64_t seed = 0;

    std::uint64_t cert_rounds() const;  // ceil(gamma N)
    std::uint64_t qpq_rounds() const;   // floor((1 - gamma) N)
};

void validate_params(const ProtocolParams& params);

// State source for one run; called once per round.
using StateSource = std::function<TwoQubitState()>;

StateSource honest_source(double theta);
StateSource biased_source(double theta, double eps);

enum class Verdict { Proceed, Abort };

enum class AbortReason { None, StatisticBelowThreshold, InsufficientData };

struct CertificationResult {
    Verdict verdict = Verdict::Abort;
    AbortReason reason = AbortReason::None;
    CertMethod method = CertMethod::Test;
    double observed = 0.0;   // I or Y
    double reference = 0.0;  // analytic threshold before the margin
    double margin = 0.0;     // xi
    std::vector<TrialRecord> records;
    TestStats test_stats{};
    GameStats game_stats{};
};

// Runs ceil(gamma N) Bell rounds with uniform settings, scores them with
// the chosen statistical method and compares against the analytic
// reference minus the finite-statistics margin. Under eta < 1 the test
// statistic is the conditional (subensemble) form; set zero_fill to use
// the chi-indicator form instead.
CertificationResult run_certification(const ProtocolParams& params, const StateSource& source,
                                      ClickPolicy& clicks, CertMethod method,
                                      ThresholdMode mode = ThresholdMode::EtaCorrected,
                                      bool zero_fill = false, double agreed_eps = 0.0);

enum class AliceKnowledge : std::uint8_t { Inconclusive = 0, Zero = 1, One = 2 };

struct RawKey {
    std::vector<std::uint8_t> bob_bits;
    std::vector<AliceKnowledge> alice_known;
};

// Alice's per-round basis choice: probability of picking the
// {phi1, phi1_perp} basis. 0.5 is the honest fair coin; the biased-state
// adversary skews it to alpha^2 so her conclusive rate reaches
// (1/2 + 2 eps^2) sin^2(theta).
struct AliceBasisPolicy {
    double p_basis1 = 0.5;
};

struct QpqRoundResult {
    int bob_bit = 0;
    AliceKnowledge alice_status = AliceKnowledge::Inconclusive;
};

// One key-establishment round: Bob measures computationally, Alice in
// {phi0, phi0_perp} or {phi1, phi1_perp}; phi0_perp is conclusive One,
// phi1_perp conclusive Zero.
QpqRoundResult qpq_round(const TwoQubitState& state, double theta,
                         const AliceBasisPolicy& policy, RoundRng& rng);

// Probability that Alice ends a key round knowing Bob's bit:
// (1/2 + 2 eps^2) sin^2(theta).
double alice_guess_success(double theta, double eps);

struct FinalKey {
    std::vector<std::uint8_t> bob_bits;
    std::vector<std::uint8_t> alice_knows;  // 1 where Alice knows the bit
    std::uint64_t block_size = 0;
};

// Disjoint-block XOR dilution. final_bits consecutive blocks of
// block_size raw bits each are XOR-folded; Alice knows a final bit iff
// she knows every raw bit of its block. Returns nullopt when Alice ends
// with zero known final bits (protocol restart).
std::optional<FinalKey> dilute_key(const RawKey& raw, std::uint64_t final_bits,
                                   std::uint64_t block_size);

// Smallest block size k with final_bits * p_known^k <= target_known.
std::uint64_t dilution_block_size(std::uint64_t final_bits, double p_known,
                                  double target_known = 1.0);

struct Database {
    std::vector<std::uint8_t> items;  // single-bit items
};

struct QueryResult {
    std::uint64_t known_position = 0;  // j, Alice's known final-key bit
    std::uint64_t shift = 0;           // announced s = j - index (mod M)
    int retrieved_bit = 0;
};

// Shift-based oblivious retrieval: Alice announces s = j - index (mod M),
// Bob one-time-pads the database with the shifted final key.
QueryResult execute_query(const FinalKey& key, const Database& database,
                          std::uint64_t alice_index);

struct Transcript {
    ProtocolParams params;
    CertMethod method = CertMethod::Test;
    ThresholdMode threshold_mode = ThresholdMode::EtaCorrected;
    std::string source_kind = "honest";  // "honest" | "biased"
    double source_eps = 0.0;
    std::string click_kind = "honest";  // "honest" | "adversarial"
    double agreed_eps = 0.0;            // eps-close variant; 0 = plain protocol
    Verdict verdict = Verdict::Abort;
    AbortReason abort_reason = AbortReason::None;
    double observed_stat = 0.0;
    double reference_stat = 0.0;
    double margin = 0.0;
    std::vector<TrialRecord> chsh_records;
    std::optional<RawKey> raw_key;
    std::optional<FinalKey> final_key;
    std::uint64_t key_attempts = 0;
    std::optional<QueryResult> query;
    std::optional<std::uint64_t> alice_index;
};

struct RunSpec {
    ProtocolParams params;
    CertMethod method = CertMethod::Test;
    ThresholdMode threshold_mode = ThresholdMode::EtaCorrected;
    bool biased_source = false;
    double source_eps = 0.0;
    bool adversarial_clicks = false;
    double agreed_eps = 0.0;  // eps-close agreed state; threshold & dilution sizing
    AliceBasisPolicy alice_policy{};
    std::uint64_t max_key_attempts = 100;
};

// Certification, then (on Proceed) key establishment on floor((1-gamma)N)
// pairs, block-XOR dilution sized to the database, and the oblivious
// query. Deterministic given params.seed.
Transcript run_full_protocol(const RunSpec& spec, const Database& database,
                             std::uint64_t alice_index);

// Threshold of the eps-close agreed-state variant; algebraically equal to
// attack_chsh_value(angles, eps, eta).
double epsilon_close_threshold(const BellAngles& angles, double eta, double eps);

}  // namespace diqpq
