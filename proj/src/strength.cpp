#include "ecfr/strength.hpp"

#include <functional>
#include <ostream>

#include "ecfr/kernels.hpp"

namespace ecfr {

OutcomeVec terminal_outcome_vector(const Game& game, std::span<const Card> hole,
                                   std::span<const Card> board) {
  const GameConfig& cfg = game.cfg;
  const int D = cfg.deck_size();
  std::vector<bool> used(D, false);
  for (Card c : hole) used[c] = true;
  for (Card c : board) used[c] = true;
  const std::uint32_t own = game.showdown_code(game.indexer.hole_index(hole), board);
  double l = 0, d = 0, w = 0;
  if (cfg.num_hole_cards == 1) {
    for (Card c = 0; c < D; ++c) {
      if (used[c]) continue;
      const Card opp[1] = {c};
      const std::uint32_t code = game.showdown_code(game.indexer.hole_index(opp), board);
      (own < code ? l : own == code ? d : w) += 1.0;
    }
  } else {
    for (Card a = 0; a < D; ++a) {
      if (used[a]) continue;
      for (Card b = a + 1; b < D; ++b) {
        if (used[b]) continue;
        const Card opp[2] = {a, b};
        const std::uint32_t code = game.showdown_code(game.indexer.hole_index(opp), board);
        (own < code ? l : own == code ? d : w) += 1.0;
      }
    }
  }
  const double total = l + d + w;
  return {l / total, d / total, w / total};
}

StrengthLibrary::StrengthLibrary(const Game& game, bool parallel) : game_(&game) {
  const int rounds = game.num_rounds();
  rows_.resize(rounds);
  for (int r = rounds - 1; r >= 0; --r) {
    const int n = game.indexer.num_classes(r);
    rows_[r].resize(n);
    auto fill = [&](int cls) {
      if (r == rounds - 1) {
        const CanonicalHand& rep = game.indexer.representative(r, cls);
        std::vector<Card> board;
        for (size_t s = 1; s < rep.segments.size(); ++s)
          board.insert(board.end(), rep.segments[s].begin(), rep.segments[s].end());
        rows_[r][cls] = terminal_outcome_vector(game, rep.segments[0], board);
      } else {
        rows_[r][cls] = rollout(r, cls);
      }
    };
    if (parallel) {
      parallel_groups(n, fill);
    } else {
      for (int cls = 0; cls < n; ++cls) fill(cls);
    }
  }
}

// Uniform average of terminal-round rows over every completion of the board.
OutcomeVec StrengthLibrary::rollout(int round, int cls) const {
  const Game& game = *game_;
  const GameConfig& cfg = game.cfg;
  const int D = cfg.deck_size();
  const int last = game.num_rounds() - 1;
  const CanonicalHand& rep = game.indexer.representative(round, cls);
  std::vector<bool> used(D, false);
  for (Card c : rep.all_cards()) used[c] = true;
  const int hole_idx = game.indexer.hole_index(rep.segments[0]);

  std::vector<Card> board;
  for (size_t s = 1; s < rep.segments.size(); ++s)
    board.insert(board.end(), rep.segments[s].begin(), rep.segments[s].end());
  const size_t base = board.size();
  board.resize(cfg.community_at_round(last));

  OutcomeVec sum = {0, 0, 0};
  std::int64_t count = 0;
  // Depth-first over future reveal rounds, ascending within each round.
  std::function<void(int, size_t)> rec = [&](int r, size_t pos) {
    if (r == last) {
      const int tcls = game.indexer.class_of(last, hole_idx, board);
      const OutcomeVec& v = rows_[last][tcls];
      sum[0] += v[0];
      sum[1] += v[1];
      sum[2] += v[2];
      count += 1;
      return;
    }
    const int k = cfg.community_per_round[r];
    std::function<void(int, Card)> pick = [&](int i, Card lo) {
      if (i == k) {
        rec(r + 1, pos + k);
        return;
      }
      for (Card c = lo; c < D; ++c) {
        if (used[c]) continue;
        used[c] = true;
        board[pos + i] = c;
        pick(i + 1, c + 1);
        used[c] = false;
      }
    };
    pick(0, 0);
  };
  rec(round, base);
  return {sum[0] / count, sum[1] / count, sum[2] / count};
}

std::vector<OutcomeVec> StrengthLibrary::tensor(int round, int cls) const {
  std::vector<OutcomeVec> rows(round + 1);
  int c = cls;
  for (int r = round; r >= 0; --r) {
    rows[r] = rows_[r][c];
    c = game_->indexer.parent_class(r, c);
  }
  return rows;
}

void StrengthLibrary::export_csv(std::ostream& os) const {
  os << "canonical_hand_id,round,w_lose,w_draw,w_win\n";
  char buf[128];
  for (size_t r = 0; r < rows_.size(); ++r)
    for (size_t cls = 0; cls < rows_[r].size(); ++cls) {
      const OutcomeVec& v = rows_[r][cls];
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%.17g\n", cls, r + 1, v[0], v[1], v[2]);
      os << buf;
    }
}

}  // namespace ecfr
