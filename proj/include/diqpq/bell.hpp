#pragma once

#include <vector>

#include "diqpq/quantum.hpp"

namespace diqpq {

// Detection efficiency below which the CHSH detection loophole stays open:
// 2 / (1 + sqrt2).
double loophole_closing_eta();

// Measurement angles of the certification rounds. psi1 in (0, pi/2),
// psi2 in (pi/2, pi), psi1 + psi2 = pi; theta in (0, pi/2].
struct BellAngles {
    double theta;
    double psi1;
    double psi2;
};

void validate_angles(const BellAngles& angles);

// Geometry constants of the attack region (A, B) and the derived C.
struct AttackRegionParams {
    double a;  // sin(theta) (sin(psi1) + sin(psi2))
    double b;  // cos(psi1) - cos(psi2)
    double c;  // (8 - 2A + B) eta - 8 + 2A
};

AttackRegionParams attack_region_params(const BellAngles& angles, double eta);

enum class AttackRegion { NoAttack, Case1, Case2 };

// Per-round game score: 1 iff a xor b == x and y.
int game_score(int a, int b, int x, int y);

// Mean winning probability of the honest state in the CHSH game.
double game_threshold(const BellAngles& angles);

// E(X_x Y_y) = sum_{a',b' in {+-1}} a' b' p(a', b') from the Born rule.
double correlator(const TwoQubitState& state, int x, int y, const BellAngles& angles);

// Ideal-detector CHSH value of the honest state:
// sin(theta)(sin(psi1) + sin(psi2)) + cos(psi1) - cos(psi2).
double chsh_ideal(const BellAngles& angles);

// Expected game value for the biased source (perfect detectors).
double biased_game_value(const BellAngles& angles, double eps);

// Expected CHSH value for the biased source (perfect detectors); strictly
// below chsh_ideal whenever eps != 0.
double biased_chsh_value(const BellAngles& angles, double eps);

// Efficiency-corrected certification threshold:
// -8 + 3S + (8 - 2S)/eta with S = chsh_ideal. Requires eta above the
// loophole-closing bound.
double threshold_with_eta(const BellAngles& angles, double eta);

// Same expression without the domain gate, for sweep/CSV output.
double eta_corrected_value_unchecked(const BellAngles& angles, double eta);

// CHSH statistic the biased source plus detector post-selection reports:
// (8 - 2S')/eta + 3S' - 8 with S' = biased_chsh_value.
double attack_chsh_value(const BellAngles& angles, double eps, double eta);

// Region classification. Boundary points classify as NoAttack.
AttackRegion classify_attack_region(const BellAngles& angles, double eps, double eta);

// Largest admissible |eps| of Case 2 at this eta:
// sqrt((3 eta - 2)^2 B^2 - C^2) / (2 (3 eta - 2) B).
double case2_eps_bound(const BellAngles& angles, double eta);

// Minimal conditional overlap with the all-clicked ensemble: 3 - 2/eta.
double delta_lower_bound(double eta);

// Post-selection ceiling on the observed CHSH value: 4 + (S - 4) delta.
double chsh_bound_given_delta(double s, double delta);

// Aggregated game statistic over one certification block.
struct GameStats {
    std::vector<int> per_round_scores;
    double y = 0.0;      // observed mean score
    double y_bar = 0.0;  // analytic reference
};

// Aggregated test statistic over one certification block.
struct TestStats {
    double i = 0.0;      // observed correlator combination
    double i_hat = 0.0;  // ideal-detector analytic value
    double i_bar = 0.0;  // eta-corrected analytic value
};

}  // namespace diqpq
