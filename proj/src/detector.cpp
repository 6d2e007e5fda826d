#include "diqpq/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace diqpq {

namespace {

int pair_sign(int x, int y) { return (x == 1 && y == 1) ? -1 : 1; }

int outcome_sign(int a, int b) { return ((a ^ b) == 0) ? 1 : -1; }

}  // namespace

HonestClickPolicy::HonestClickPolicy(double eta) : eta_(eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("eta must lie in (0, 1]");
    }
}

std::pair<bool, bool> HonestClickPolicy::decide(const TrialRecord&, RoundRng& rng) {
    const bool bob = eta_ >= 1.0 || rng.bernoulli(eta_);
    const bool alice = eta_ >= 1.0 || rng.bernoulli(eta_);
    return {bob, alice};
}

AdversarialClickPolicy::AdversarialClickPolicy(double eta, const TwoQubitState& state,
                                               const BellAngles& angles)
    : eta_(eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw std::domain_error("eta must lie in (0, 1]");
    }
    const double delta = 3.0 - 2.0 / eta;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const double e = correlator(state, x, y, angles);
            true_e_[x][y] = e;
            const int s = pair_sign(x, y);
            // Conditional correlator that saturates the delta bound per pair.
            double target = std::clamp(s * (1.0 - delta) + delta * e, -1.0, 1.0);
            // Fraction of this pair's rounds to discard, and the share of
            // bad-outcome rounds that fraction corresponds to.
            const double bad = (1.0 - s * e) / 2.0;
            double q;
            if (s > 0) {
                q = (target - e) / (1.0 + target);
            } else {
                q = (e - target) / (1.0 - target);
            }
            q = std::clamp(q, 0.0, bad);
            target_e_[x][y] = target;
            suppress_prob_[x][y] = (bad > 0.0) ? std::min(1.0, q / bad) : 0.0;
        }
    }
}

double AdversarialClickPolicy::target_i() const {
    return target_e_[0][0] + target_e_[0][1] + target_e_[1][0] - target_e_[1][1];
}

std::pair<bool, bool> AdversarialClickPolicy::decide(const TrialRecord& trial, RoundRng& rng) {
    ++bob_seen_[trial.x];
    ++alice_seen_[trial.y];
    const int s = pair_sign(trial.x, trial.y);
    const bool bad = outcome_sign(trial.a, trial.b) != s;
    if (!bad || eta_ >= 1.0) return {true, true};
    if (!rng.bernoulli(suppress_prob_[trial.x][trial.y])) return {true, true};

    const double budget = 1.0 - eta_;
    const auto bob_ok = [&] {
        return static_cast<double>(bob_suppressed_[trial.x] + 1) <=
               budget * static_cast<double>(bob_seen_[trial.x]);
    };
    const auto alice_ok = [&] {
        return static_cast<double>(alice_suppressed_[trial.y] + 1) <=
               budget * static_cast<double>(alice_seen_[trial.y]);
    };
    const bool prefer_bob = (flip_++ & 1) == 0;
    if (prefer_bob && bob_ok()) {
        ++bob_suppressed_[trial.x];
        return {false, true};
    }
    if (alice_ok()) {
        ++alice_suppressed_[trial.y];
        return {true, false};
    }
    if (bob_ok()) {
        ++bob_suppressed_[trial.x];
        return {false, true};
    }
    return {true, true};  // budgets exhausted, click honestly
}

double conditional_chsh(const std::vector<TrialRecord>& records) {
    const auto stats = subensemble_stats(records);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            if (stats.pair_clicked[x][y] == 0) {
                throw std::runtime_error("no fully-clicked trials for setting (x=" +
                                         std::to_string(x) + ", y=" + std::to_string(y) + ")");
            }
        }
    }
    return stats.conditional_e[0][0] + stats.conditional_e[0][1] +
           stats.conditional_e[1][0] - stats.conditional_e[1][1];
}

double zero_fill_chsh(const std::vector<TrialRecord>& records) {
    if (records.empty()) {
        throw std::runtime_error("zero_fill_chsh: empty record set");
    }
    double sum = 0.0;
    for (const auto& r : records) {
        if (!r.both_clicked()) continue;
        const double weight = 4.0;  // uniform settings, 1/p(x,y)
        sum += weight * outcome_sign(r.a, r.b) * pair_sign(r.x, r.y);
    }
    return sum / static_cast<double>(records.size());
}

double estimate_eta(const std::vector<TrialRecord>& records) {
    if (records.empty()) {
        throw std::runtime_error("estimate_eta: empty record set");
    }
    std::array<std::uint64_t, 2> bx{}, bx_click{}, ay{}, ay_click{};
    for (const auto& r : records) {
        ++bx[r.x];
        ++ay[r.y];
        if (r.bob_clicked()) ++bx_click[r.x];
        if (r.alice_clicked()) ++ay_click[r.y];
    }
    double eta = 1.0;
    for (int j = 0; j < 2; ++j) {
        if (bx[j] > 0) eta = std::min(eta, static_cast<double>(bx_click[j]) / bx[j]);
        if (ay[j] > 0) eta = std::min(eta, static_cast<double>(ay_click[j]) / ay[j]);
    }
    return eta;
}

SubensembleStats subensemble_stats(const std::vector<TrialRecord>& records) {
    SubensembleStats stats{};
    std::array<std::array<std::int64_t, 2>, 2> signed_sum{};
    for (const auto& r : records) {
        ++stats.pair_total[r.x][r.y];
        if (!r.both_clicked()) continue;
        ++stats.pair_clicked[r.x][r.y];
        signed_sum[r.x][r.y] += outcome_sign(r.a, r.b);
    }
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            stats.conditional_e[x][y] =
                stats.pair_clicked[x][y] == 0
                    ? 0.0
                    : static_cast<double>(signed_sum[x][y]) /
                          static_cast<double>(stats.pair_clicked[x][y]);
        }
    }
    stats.estimated_eta = records.empty() ? 0.0 : estimate_eta(records);
    return stats;
}

}  // namespace diqpq
