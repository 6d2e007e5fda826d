#pragma once

#include <cstdint>

#include "diqpq/bell.hpp"
#include "diqpq/protocol.hpp"

namespace diqpq {

struct BiasedSourceSpec {
    double theta = 0.0;
    double eps = 0.0;

    double alpha() const;  // sqrt(1/2 + eps)
    double beta() const;   // sqrt(1/2 - eps)
};

struct AttackOutcome {
    AttackRegion region = AttackRegion::NoAttack;
    bool certification_passed = false;
    double observed_i = 0.0;
    double target_i = 0.0;  // the reported statistic the attack aims for
    double alice_known_fraction = 0.0;
    double analytic_guess_rate = 0.0;  // (1/2 + 2 eps^2) sin^2(theta)
};

// Runs the biased-source attack against the perfect-detector certification
// check: classifies the (eps, eta) point, simulates certification with the
// biased source and detector-exploiting clicks, then measures Alice's
// conclusive fraction in the key phase under her skewed basis coin.
AttackOutcome evaluate_attack(const ProtocolParams& params, double eps,
                              std::uint64_t key_rounds = 100000);

// Alice's extra known raw-key fraction: 2 eps^2 sin^2(theta).
double attack_advantage(double theta, double eps);

// Basis coin the biased-source Alice uses: picking {phi1, phi1_perp} with
// probability alpha^2 lifts her conclusive rate to (1/2 + 2 eps^2) sin^2(theta).
AliceBasisPolicy biased_alice_policy(double eps);

}  // namespace diqpq
