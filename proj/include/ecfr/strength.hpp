#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "ecfr/game.hpp"

namespace ecfr {

// [lose, draw, win] frequencies; sums to 1.
using OutcomeVec = std::array<double, 3>;

// Outcome of `hole` at the final round against every card-legal opponent
// hole sharing `board` (uniform card-removal range, no strategy weighting).
OutcomeVec terminal_outcome_vector(const Game& game, std::span<const Card> hole,
                                   std::span<const Card> board);

/// Exact per-round outcome rows for every canonical class, computed by
/// exhaustive rollout: terminal rows by direct comparison, earlier rows by
/// uniformly averaging the terminal rows of all board completions.
class StrengthLibrary {
 public:
  explicit StrengthLibrary(const Game& game, bool parallel = true);

  const Game& game() const { return *game_; }
  const OutcomeVec& row(int round, int cls) const { return rows_[round][cls]; }

  // Strength tensor of a round-`round` class: one row per round 0..round,
  // row j describing the class's round-j prefix.
  std::vector<OutcomeVec> tensor(int round, int cls) const;

  // CSV: canonical_hand_id, round, w_l, w_d, w_w (1-based rounds).
  void export_csv(std::ostream& os) const;

 private:
  OutcomeVec rollout(int round, int cls) const;

  const Game* game_;
  std::vector<std::vector<OutcomeVec>> rows_;
};

}  // namespace ecfr
