#include "diqpq/protocol.hpp"

#include <cmath>
#include <stdexcept>

#include "diqpq/finite_stats.hpp"

namespace diqpq {

namespace {

// Basis amplitudes for the four certification measurements, precomputed so
// the round loop stays trig-free.
struct CertBases {
    // [x][outcome][component] for Bob, [y][outcome][component] for Alice.
    double bob[2][2][2];
    double alice[2][2][2];

    explicit CertBases(const BellAngles& angles) {
        const QubitBasis bob0 = QubitBasis::computational();
        const QubitBasis bob1 = QubitBasis::hadamard();
        const QubitBasis alice0(angles.psi1);
        const QubitBasis alice1(angles.psi2);
        for (int o = 0; o < 2; ++o) {
            for (int c = 0; c < 2; ++c) {
                bob[0][o][c] = bob0.vector(o)[c].real();
                bob[1][o][c] = bob1.vector(o)[c].real();
                alice[0][o][c] = alice0.vector(o)[c].real();
                alice[1][o][c] = alice1.vector(o)[c].real();
            }
        }
    }

    JointDistribution distribution(const TwoQubitState& state, int x, int y) const {
        JointDistribution dist{};
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                Complex amp = 0.0;
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        amp += bob[x][a][i] * alice[y][b][j] * state.amp(i, j);
                    }
                }
                dist[a * 2 + b] = std::norm(amp);
            }
        }
        return dist;
    }
};

double certification_reference(const ProtocolParams& params, CertMethod method,
                               ThresholdMode mode, double agreed_eps) {
    const BellAngles& angles = params.angles;
    const double eta = params.detector.eta;
    if (method == CertMethod::Game) {
        return agreed_eps == 0.0 ? game_threshold(angles)
                                 : biased_game_value(angles, agreed_eps);
    }
    if (mode == ThresholdMode::Ideal) {
        return agreed_eps == 0.0 ? chsh_ideal(angles) : biased_chsh_value(angles, agreed_eps);
    }
    if (eta == 1.0) {
        return agreed_eps == 0.0 ? chsh_ideal(angles) : biased_chsh_value(angles, agreed_eps);
    }
    return agreed_eps == 0.0 ? threshold_with_eta(angles, eta)
                             : epsilon_close_threshold(angles, eta, agreed_eps);
}

}  // namespace

std::uint64_t ProtocolParams::cert_rounds() const {
    return static_cast<std::uint64_t>(std::ceil(gamma * static_cast<double>(pairs)));
}

std::uint64_t ProtocolParams::qpq_rounds() const {
    return static_cast<std::uint64_t>(std::floor((1.0 - gamma) * static_cast<double>(pairs)));
}

void validate_params(const ProtocolParams& params) {
    validate_angles(params.angles);
    if (!(params.gamma > 0.0 && params.gamma < 1.0)) {
        throw std::domain_error("gamma must lie in (0, 1)");
    }
    if (params.pairs < 4) {
        throw std::domain_error("pair count must be at least 4");
    }
    if (!(params.detector.eta > 0.0 && params.detector.eta <= 1.0)) {
        throw std::domain_error("eta must lie in (0, 1]");
    }
    if (!(params.eps_chsh > 0.0 && params.eps_chsh <= 1.0)) {
        throw std::domain_error("eps_chsh must lie in (0, 1]");
    }
    if (!(params.eps_qpq > 0.0 && params.eps_qpq <= 1.0)) {
        throw std::domain_error("eps_qpq must lie in (0, 1]");
    }
    if (!(params.loss >= 0.0 && params.loss < 1.0)) {
        throw std::domain_error("loss must lie in [0, 1)");
    }
}

StateSource honest_source(double theta) {
    const TwoQubitState state = make_honest_state(theta);
    return [state] { return state; };
}

StateSource biased_source(double theta, double eps) {
    const TwoQubitState state = make_biased_state(theta, eps);
    return [state] { return state; };
}

CertificationResult run_certification(const ProtocolParams& params, const StateSource& source,
                                      ClickPolicy& clicks, CertMethod method, ThresholdMode mode,
                                      bool zero_fill, double agreed_eps) {
    validate_params(params);
    const std::uint64_t n = params.cert_rounds();
    const CertBases bases(params.angles);

    CertificationResult result;
    result.method = method;
    result.records.reserve(n);

    std::uint64_t game_sum = 0;
    if (method == CertMethod::Game) result.game_stats.per_round_scores.reserve(n);

    for (std::uint64_t i = 0; i < n; ++i) {
        RoundRng rng(params.seed, kStreamCertification, i);
        TrialRecord trial;
        trial.index = i;
        trial.x = rng.next_bool() ? 1 : 0;
        trial.y = rng.next_bool() ? 1 : 0;
        const TwoQubitState state = source();
        const auto dist = bases.distribution(state, trial.x, trial.y);
        const auto [a, b] = sample_outcome(dist, rng);
        trial.a = a;
        trial.b = b;
        const auto [bob_click, alice_click] = clicks.decide(trial, rng);
        if (!bob_click) trial.a = kNoClick;
        if (!alice_click) trial.b = kNoClick;
        if (method == CertMethod::Game) {
            // A silent detector cannot win the round.
            const int score = trial.both_clicked() ? game_score(trial.a, trial.b, trial.x, trial.y) : 0;
            result.game_stats.per_round_scores.push_back(score);
            game_sum += static_cast<std::uint64_t>(score);
        }
        result.records.push_back(trial);
    }

    const double reference = certification_reference(params, method, mode, agreed_eps);
    result.reference = reference;

    if (method == CertMethod::Game) {
        result.game_stats.y = static_cast<double>(game_sum) / static_cast<double>(n);
        result.game_stats.y_bar = reference;
        result.observed = result.game_stats.y;
        result.margin = xi(params.gamma, params.pairs, params.eps_chsh, kGameStatRange);
    } else {
        result.margin = xi(params.gamma, params.pairs, params.eps_chsh, kTestStatRange);
        try {
            result.observed =
                zero_fill ? zero_fill_chsh(result.records) : conditional_chsh(result.records);
        } catch (const std::runtime_error&) {
            result.verdict = Verdict::Abort;
            result.reason = AbortReason::InsufficientData;
            return result;
        }
        result.test_stats.i = result.observed;
        result.test_stats.i_hat = chsh_ideal(params.angles);
        result.test_stats.i_bar = eta_corrected_value_unchecked(params.angles, params.detector.eta);
    }

    if (result.observed >= reference - result.margin) {
        result.verdict = Verdict::Proceed;
    } else {
        result.verdict = Verdict::Abort;
        result.reason = AbortReason::StatisticBelowThreshold;
    }
    return result;
}

QpqRoundResult qpq_round(const TwoQubitState& state, double theta,
                         const AliceBasisPolicy& policy, RoundRng& rng) {
    const bool basis1 = rng.bernoulli(policy.p_basis1);
    const QubitBasis bob = QubitBasis::computational();
    const QubitBasis alice(basis1 ? -theta : theta);
    const auto dist = joint_distribution(state, bob, alice);
    const auto [a, b] = sample_outcome(dist, rng);
    QpqRoundResult result;
    result.bob_bit = a;
    if (b == 1) {
        // phi0_perp reveals Bob's 1, phi1_perp reveals Bob's 0.
        result.alice_status = basis1 ? AliceKnowledge::Zero : AliceKnowledge::One;
    }
    return result;
}

double alice_guess_success(double theta, double eps) {
    if (!(std::abs(eps) < 0.5)) {
        throw std::domain_error("eps must lie in (-1/2, 1/2)");
    }
    const double s = std::sin(theta);
    return (0.5 + 2.0 * eps * eps) * s * s;
}

std::uint64_t dilution_block_size(std::uint64_t final_bits, double p_known,
                                  double target_known) {
    if (final_bits == 0) throw std::domain_error("final key must be nonempty");
    if (!(p_known > 0.0 && p_known < 1.0)) return 1;
    std::uint64_t k = 1;
    double known = static_cast<double>(final_bits) * p_known;
    while (known > target_known && k < 4096) {
        ++k;
        known *= p_known;
    }
    return k;
}

std::optional<FinalKey> dilute_key(const RawKey& raw, std::uint64_t final_bits,
                                   std::uint64_t block_size) {
    if (block_size == 0) throw std::domain_error("block size must be positive");
    if (raw.bob_bits.size() < final_bits * block_size) {
        throw std::domain_error("raw key too short for requested dilution");
    }
    FinalKey key;
    key.block_size = block_size;
    key.bob_bits.resize(final_bits);
    key.alice_knows.resize(final_bits);
    bool any_known = false;
    for (std::uint64_t i = 0; i < final_bits; ++i) {
        std::uint8_t bit = 0;
        bool known = true;
        for (std::uint64_t j = 0; j < block_size; ++j) {
            const std::uint64_t pos = i * block_size + j;
            bit ^= raw.bob_bits[pos];
            known = known && raw.alice_known[pos] != AliceKnowledge::Inconclusive;
        }
        key.bob_bits[i] = bit;
        key.alice_knows[i] = known ? 1 : 0;
        any_known = any_known || known;
    }
    if (!any_known) return std::nullopt;
    return key;
}

QueryResult execute_query(const FinalKey& key, const Database& database,
                          std::uint64_t alice_index) {
    const std::uint64_t m = database.items.size();
    if (m == 0) throw std::domain_error("database must be nonempty");
    if (key.bob_bits.size() != m) {
        throw std::domain_error("final key length must equal database length");
    }
    if (alice_index >= m) throw std::domain_error("query index out of range");

    std::uint64_t j = m;
    for (std::uint64_t i = 0; i < m; ++i) {
        if (key.alice_knows[i]) {
            j = i;
            break;
        }
    }
    if (j == m) throw std::runtime_error("Alice knows no final key bit");

    QueryResult result;
    result.known_position = j;
    result.shift = (j + m - alice_index) % m;
    // Bob: encrypted[i] = item[i] xor key[(i + s) mod m]; Alice decrypts
    // her index with the one key bit she knows.
    std::vector<std::uint8_t> encrypted(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        encrypted[i] = database.items[i] ^ key.bob_bits[(i + result.shift) % m];
    }
    result.retrieved_bit = encrypted[alice_index] ^ key.bob_bits[j];
    return result;
}

double epsilon_close_threshold(const BellAngles& angles, double eta, double eps) {
    if (!(eta > loophole_closing_eta() && eta <= 1.0)) {
        throw std::domain_error("eta leaves the detection loophole open");
    }
    return attack_chsh_value(angles, eps, eta);
}

Transcript run_full_protocol(const RunSpec& spec, const Database& database,
                             std::uint64_t alice_index) {
    validate_params(spec.params);
    const ProtocolParams& params = spec.params;
    const double theta = params.angles.theta;
    const std::uint64_t m = database.items.size();
    if (m == 0) throw std::domain_error("database must be nonempty");
    if (alice_index >= m) throw std::domain_error("query index out of range");

    Transcript t;
    t.params = params;
    t.method = spec.method;
    t.threshold_mode = spec.threshold_mode;
    t.source_kind = spec.biased_source ? "biased" : "honest";
    t.source_eps = spec.source_eps;
    t.click_kind = spec.adversarial_clicks ? "adversarial" : "honest";
    t.agreed_eps = spec.agreed_eps;
    t.alice_index = alice_index;

    const TwoQubitState state = spec.biased_source
                                    ? make_biased_state(theta, spec.source_eps)
                                    : make_honest_state(theta);
    const StateSource source = [state] { return state; };

    HonestClickPolicy honest_clicks(params.detector.eta);
    AdversarialClickPolicy adv_clicks(params.detector.eta, state, params.angles);
    ClickPolicy& clicks = spec.adversarial_clicks
                              ? static_cast<ClickPolicy&>(adv_clicks)
                              : static_cast<ClickPolicy&>(honest_clicks);

    CertificationResult cert = run_certification(params, source, clicks, spec.method,
                                                 spec.threshold_mode, false, spec.agreed_eps);
    t.verdict = cert.verdict;
    t.abort_reason = cert.reason;
    t.observed_stat = cert.observed;
    t.reference_stat = cert.reference;
    t.margin = cert.margin;
    t.chsh_records = std::move(cert.records);
    if (t.verdict == Verdict::Abort) return t;

    // Bob sizes the dilution from the agreed state's conclusive rate.
    const double p_known = alice_guess_success(theta, spec.agreed_eps);
    const std::uint64_t block = dilution_block_size(m, p_known);
    const std::uint64_t n_qpq = params.qpq_rounds();
    if (n_qpq < m * block) {
        throw std::domain_error("too few key-phase pairs for this database size");
    }

    // A run where Alice ends with zero conclusive final bits restarts the
    // key phase on fresh pairs; each attempt draws disjoint round streams.
    for (std::uint64_t attempt = 0; attempt < spec.max_key_attempts; ++attempt) {
        RawKey raw;
        raw.bob_bits.reserve(n_qpq);
        raw.alice_known.reserve(n_qpq);
        for (std::uint64_t i = 0; i < n_qpq; ++i) {
            RoundRng rng(params.seed, kStreamKeyPhase, attempt * n_qpq + i);
            if (params.loss > 0.0 && rng.bernoulli(params.loss)) continue;  // lost particle
            const auto round = qpq_round(state, theta, spec.alice_policy, rng);
            raw.bob_bits.push_back(static_cast<std::uint8_t>(round.bob_bit));
            raw.alice_known.push_back(round.alice_status);
        }
        if (raw.bob_bits.size() < m * block) continue;
        auto final_key = dilute_key(raw, m, block);
        t.key_attempts = attempt + 1;
        if (!final_key) continue;
        t.raw_key = std::move(raw);
        t.final_key = std::move(final_key);
        t.query = execute_query(*t.final_key, database, alice_index);
        return t;
    }
    throw std::runtime_error("key phase exhausted restart attempts without a conclusive bit");
}

}  // namespace diqpq
