#include "diqpq/adversary.hpp"

#include <cmath>
#include <stdexcept>

namespace diqpq {

double BiasedSourceSpec::alpha() const { return std::sqrt(0.5 + eps); }
double BiasedSourceSpec::beta() const { return std::sqrt(0.5 - eps); }

double attack_advantage(double theta, double eps) {
    if (!(std::abs(eps) < 0.5)) {
        throw std::domain_error("eps must lie in (-1/2, 1/2)");
    }
    const double s = std::sin(theta);
    return 2.0 * eps * eps * s * s;
}

AliceBasisPolicy biased_alice_policy(double eps) {
    // Conclusive Zero comes from the phi1 basis with weight alpha^2 and
    // conclusive One from the phi0 basis with weight beta^2; matching the
    // coin to the bias maximizes the conclusive rate.
    return AliceBasisPolicy{0.5 + eps};
}

AttackOutcome evaluate_attack(const ProtocolParams& params, double eps,
                              std::uint64_t key_rounds) {
    validate_params(params);
    AttackOutcome outcome;
    outcome.region = classify_attack_region(params.angles, eps, params.detector.eta);
    outcome.analytic_guess_rate = alice_guess_success(params.angles.theta, eps);

    const TwoQubitState state = make_biased_state(params.angles.theta, eps);
    const StateSource source = [state] { return state; };
    AdversarialClickPolicy clicks(params.detector.eta, state, params.angles);
    outcome.target_i = clicks.target_i();

    const auto cert = run_certification(params, source, clicks, CertMethod::Test,
                                        ThresholdMode::Ideal);
    outcome.certification_passed = cert.verdict == Verdict::Proceed;
    outcome.observed_i = cert.observed;

    const AliceBasisPolicy policy = biased_alice_policy(eps);
    std::uint64_t known = 0;
    for (std::uint64_t i = 0; i < key_rounds; ++i) {
        RoundRng rng(params.seed, kStreamKeyPhase, i);
        const auto round = qpq_round(state, params.angles.theta, policy, rng);
        if (round.alice_status != AliceKnowledge::Inconclusive) ++known;
    }
    outcome.alice_known_fraction =
        key_rounds == 0 ? 0.0 : static_cast<double>(known) / static_cast<double>(key_rounds);
    return outcome;
}

}  // namespace diqpq
