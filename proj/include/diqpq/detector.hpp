#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "diqpq/bell.hpp"
#include "diqpq/quantum.hpp"
#include "diqpq/rng.hpp"

namespace diqpq {

inline constexpr int kNoClick = -1;

struct DetectorSpec {
    double eta = 1.0;  // click probability per measured particle
};

// One Bell round. a/b hold the outcome in {0,1}, or kNoClick when the
// corresponding detector stayed silent.
struct TrialRecord {
    std::uint64_t index = 0;
    int x = 0;
    int y = 0;
    int a = 0;
    int b = 0;

    bool bob_clicked() const { return a != kNoClick; }
    bool alice_clicked() const { return b != kNoClick; }
    bool both_clicked() const { return bob_clicked() && alice_clicked(); }
};

// Per-setting click bookkeeping reconstructed from a record set.
struct SubensembleStats {
    std::array<std::array<std::uint64_t, 2>, 2> pair_total{};    // [x][y]
    std::array<std::array<std::uint64_t, 2>, 2> pair_clicked{};  // both sides
    std::array<std::array<double, 2>, 2> conditional_e{};        // E(XY | both clicked)
    double estimated_eta = 0.0;  // min per-side click rate over settings
};

class ClickPolicy {
  public:
    virtual ~ClickPolicy() = default;
    // Returns (bob clicks, alice clicks) for one round.
    virtual std::pair<bool, bool> decide(const TrialRecord& trial, RoundRng& rng) = 0;
};

// Each side clicks independently with probability eta, regardless of
// setting and outcome.
class HonestClickPolicy final : public ClickPolicy {
  public:
    explicit HonestClickPolicy(double eta);
    std::pair<bool, bool> decide(const TrialRecord& trial, RoundRng& rng) override;

  private:
    double eta_;
};

// Greedy discard realizing the post-selection of the biased-state attack.
// Outcomes that lower the conditional correlator are suppressed (one side
// withholds its click) with per-setting-pair rates tuned so the conditional
// correlators approach s_xy (1 - delta) + delta E_true with delta = 3 - 2/eta,
// i.e. the reported CHSH statistic targets the post-selection ceiling.
// Suppression alternates sides and is capped so every per-side per-setting
// click rate stays >= eta; with no feasible budget (eta = 1) the policy
// degenerates to honest all-click behavior.
class AdversarialClickPolicy final : public ClickPolicy {
  public:
    AdversarialClickPolicy(double eta, const TwoQubitState& state, const BellAngles& angles);

    std::pair<bool, bool> decide(const TrialRecord& trial, RoundRng& rng) override;

    // Conditional correlator each setting pair is steered towards.
    double target_e(int x, int y) const { return target_e_[x][y]; }
    // CHSH value of the steering target.
    double target_i() const;

  private:
    double eta_;
    std::array<std::array<double, 2>, 2> true_e_{};
    std::array<std::array<double, 2>, 2> target_e_{};
    std::array<std::array<double, 2>, 2> suppress_prob_{};  // given a bad outcome
    // Budget audit counters, one per (side, setting).
    std::array<std::uint64_t, 2> bob_seen_{};
    std::array<std::uint64_t, 2> bob_suppressed_{};
    std::array<std::uint64_t, 2> alice_seen_{};
    std::array<std::uint64_t, 2> alice_suppressed_{};
    std::uint64_t flip_ = 0;
};

// Conditional CHSH statistic per Lambda subensembles: each correlator is
// estimated over the rounds where both sides clicked for that setting pair.
// Throws std::runtime_error naming the setting when a subensemble is empty.
double conditional_chsh(const std::vector<TrialRecord>& records);

// Zero-fill variant: silent rounds contribute 0 through the chi indicator,
// every observed round contributes (-1)^(a+b+xy)/p(x,y) with p = 1/4.
double zero_fill_chsh(const std::vector<TrialRecord>& records);

// Minimum, over sides and settings, of the empirical click rate.
double estimate_eta(const std::vector<TrialRecord>& records);

SubensembleStats subensemble_stats(const std::vector<TrialRecord>& records);

}  // namespace diqpq
