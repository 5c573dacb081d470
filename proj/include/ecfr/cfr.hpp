#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ecfr/game.hpp"

namespace ecfr {

// Regret matching: positive parts normalized, uniform when none positive.
void regret_matching_row(const double* regrets, double* out, int actions);
std::vector<double> regret_matching(std::span<const double> cumulative);

// Positive-truncation inequality [(a+b)_+]^2 <= (a_+)^2 + 2 a_+ b + b^2.
bool lemma1_check(double a, double b);

// ---------------------------------------------------------------------------
// Exact object-layer computations (small games; used by tests and lemmas).

struct StrategyProfile {
  virtual ~StrategyProfile() = default;
  // Action probabilities at the infoset, ordered like legal_actions.
  virtual std::vector<double> probs(const Game& game, const InfoSetKey& key) const = 0;
};

struct UniformProfile : StrategyProfile {
  std::vector<double> probs(const Game& game, const InfoSetKey& key) const override;
};

// Deterministic pseudo-random distributions keyed by infoset text.
struct SeededRandomProfile : StrategyProfile {
  std::uint64_t seed = 1;
  explicit SeededRandomProfile(std::uint64_t s) : seed(s) {}
  std::vector<double> probs(const Game& game, const InfoSetKey& key) const override;
};

struct CounterfactualValue {
  double value = 0;                      // v(I) under the profile
  std::vector<double> per_action;       // v(I -> a)
};

// Exact enumeration over all terminals reachable from the infoset, weighting
// by opponent+chance reach only. v(I) is computed directly, not as the
// sigma-weighted sum of per-action values.
CounterfactualValue counterfactual_value(const Game& game, const StrategyProfile& profile,
                                         const InfoSetKey& target);

// |v(I) - sum_a sigma(I,a) v(I->a)| from two independent computations.
double lemma2_residual(const Game& game, const StrategyProfile& profile, const InfoSetKey& target);

std::vector<InfoSetKey> enumerate_infosets(const Game& game, int player);

// ---------------------------------------------------------------------------
// Dense per-block storage shared by the solvers and the evaluator.

/// One contiguous array per (player, block), `entries(block) * actions(block)`
/// values. Used with entries = canonical classes (flat strategies, regret
/// deltas) or entries = storage rows (tables).
struct BlockArrays {
  const Game* game = nullptr;
  std::array<std::vector<double>, 2> buf;
  std::array<std::vector<std::size_t>, 2> offset;  // per player: block -> start
  std::array<std::vector<int>, 2> entries;         // per player: block -> rows

  void init(const Game& g, const std::vector<int>& rows_per_round);
  double* row(int player, int block, int idx) {
    const int a = actions(player, block);
    return buf[player].data() + offset[player][block] + static_cast<std::size_t>(idx) * a;
  }
  const double* row(int player, int block, int idx) const {
    const int a = actions(player, block);
    return buf[player].data() + offset[player][block] + static_cast<std::size_t>(idx) * a;
  }
  int actions(int player, int block) const {
    return game->tree.nodes[game->tree.blocks[player][block]].num_actions;
  }
  int round_of(int player, int block) const {
    return game->tree.nodes[game->tree.blocks[player][block]].round;
  }
  void zero();
};

/// How canonical classes map onto storage rows, per round. Identity = one row
/// per class (lossless); bucketed rounds share rows.
struct RowSpec {
  std::vector<int> rows;                     // per round
  std::vector<std::vector<int>> row_of;      // per round: class -> row; empty = identity

  static RowSpec identity(const Game& game);
  int map(int round, int cls) const {
    return row_of[round].empty() ? cls : row_of[round][cls];
  }
};

struct SamplingSpec {
  enum Mode { kFullEnumeration, kSampledDeals };
  Mode mode = kFullEnumeration;
  std::int64_t budget = 0;  // deals per iteration in sampled mode
};

// ---------------------------------------------------------------------------
// Traversal core: one data-collection pass for `hero` over `deals`.
// Reads per-class strategies from `sigma`, adds per-class immediate-regret
// contributions (weighted by `deal_weight` and opponent reach) into `G`, and,
// when `avg` is non-null, own-reach-weighted strategy sums into it.
// Deals are processed in fixed order within hero round-1 class groups, so
// results do not depend on the worker count.
void collect_pass(const Game& game, const BlockArrays& sigma, int hero,
                  std::span<const Deal> deals, double deal_weight, BlockArrays* G,
                  BlockArrays* avg);

// Deals for one iteration: the full enumeration or `budget` seeded draws.
std::vector<Deal> iteration_deals(const Game& game, const SamplingSpec& sampling,
                                  std::mt19937_64& rng);

// ---------------------------------------------------------------------------

/// Tabular CFR with simultaneous updates and reach-weighted averaging.
/// Cumulative regrets follow the time-averaged convention: tables store
/// running sums and divide by T on read. With an identity RowSpec this is
/// vanilla CFR; with a bucketed RowSpec every class in a bucket shares rows.
class TabularCfr {
 public:
  TabularCfr(const Game& game, RowSpec rows, SamplingSpec sampling, std::uint64_t seed);

  void iterate();
  int iterations() const { return T_; }
  const Game& game() const { return *game_; }
  const RowSpec& rows() const { return rows_; }

  // Time-averaged cumulative regret R^T(I, a) (sums / T).
  std::vector<double> cumulative_regret(int player, int block, int cls) const;
  std::vector<double> current_strategy(int player, int block, int cls) const;
  std::vector<double> average_strategy(int player, int block, int cls) const;

  // Per-class snapshots for evaluation.
  BlockArrays flat_current() const;
  BlockArrays flat_average() const;

  // sum over infosets of max_a R^T(I,a)_+ for the regret-decay trend check.
  double max_positive_regret(int player) const;

  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  void fill_sigma();

  const Game* game_;
  RowSpec rows_;
  SamplingSpec sampling_;
  std::mt19937_64 rng_;
  int T_ = 0;
  BlockArrays regret_sum_;  // row layout
  BlockArrays avg_num_;     // row layout
  BlockArrays sigma_;       // class layout (current strategy, refreshed per iteration)
  BlockArrays g_, avg_buf_;  // class-layout accumulation buffers
};

// ECFRTAB1 table checkpoint (keys in canonical text form).
void save_tables(const std::string& path, const Game& game, const RowSpec& rows,
                 const BlockArrays& regret_sum, const BlockArrays& avg_num);
void load_tables(const std::string& path, const Game& game, const RowSpec& rows,
                 BlockArrays* regret_sum, BlockArrays* avg_num);

}  // namespace ecfr
