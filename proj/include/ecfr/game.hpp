#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ecfr/canonical.hpp"
#include "ecfr/cards.hpp"
#include "ecfr/hand_eval.hpp"

namespace ecfr {

enum class Action : int { kFold = 0, kCall = 1, kRaise = 2 };

char action_char(Action a);

/// A complete assignment of chance outcomes for one play of the game:
/// both players' hole cards plus every community card in reveal order.
struct Deal {
  std::array<std::array<Card, kMaxHoleCards>, 2> hole{};
  std::array<Card, kMaxBoardCards> community{};

  std::span<const Card> hole_of(int player, int n) const {
    return {hole[player].data(), static_cast<size_t>(n)};
  }
  std::span<const Card> board(int n) const { return {community.data(), static_cast<size_t>(n)}; }
};

/// Uniform chance model: enumerates every legal deal exactly once in a fixed
/// mixed-radix order (supports disjoint range splitting) and draws seeded
/// uniform samples by index.
class DealEnumerator {
 public:
  explicit DealEnumerator(const GameConfig& cfg);

  std::int64_t count() const { return count_; }
  double probability() const { return 1.0 / static_cast<double>(count_); }
  Deal get(std::int64_t index) const;
  Deal sample(std::mt19937_64& rng) const;
  // Closed-form product of binomials; equals count() by construction of the
  // radix, asserted in tests against explicit enumeration.
  std::int64_t closed_form_count() const { return count_; }

 private:
  GameConfig cfg_;
  std::vector<std::int64_t> radix_;  // digits: hole0, hole1, one per community round
  std::vector<int> comb_sizes_;      // cards chosen per digit
  std::int64_t count_ = 0;
};

/// The deal-independent betting structure, flattened: decision nodes with
/// action-indexed children and terminal records. Every decision node is one
/// info-block of the player to act (same non-chance trace = same block).
struct BettingTree {
  struct Node {
    int round = 0;
    int to_act = 0;
    int num_actions = 0;
    std::array<Action, 3> actions{};
    std::array<int, 3> children{};  // >= 0: node index, < 0: ~terminal index
    int block = -1;                 // index into blocks[to_act]
    std::array<int, 2> contrib{};   // chips committed on entry
    std::string trace;
  };
  struct Terminal {
    bool showdown = false;
    int folder = -1;
    std::array<int, 2> contrib{};
    int round = 0;
    std::string trace;
  };

  std::vector<Node> nodes;
  std::vector<Terminal> terminals;
  std::array<std::vector<int>, 2> blocks;  // per player: decision node ids

  static BettingTree build(const GameConfig& cfg);

  int num_blocks(int player) const { return static_cast<int>(blocks[player].size()); }
  int max_utility_spread(const GameConfig& cfg) const;
};

/// Everything derived from a GameConfig that solvers and evaluators share:
/// the betting tree, canonical hand indexing, the chance model, and packed
/// showdown ranks for every (hole, board) view at the final round.
struct Game {
  GameConfig cfg;
  BettingTree tree;
  HandIndexer indexer;
  DealEnumerator deals;
  std::vector<std::uint32_t> showdown_codes;  // indexed like the final-round class table

  explicit Game(const GameConfig& config);

  int num_rounds() const { return cfg.num_rounds(); }
  std::uint32_t showdown_code(int hole_idx, std::span<const Card> board) const;
  // Signed chips for `player` at a terminal under `deal`. Zero-sum, exact.
  int terminal_utility(const Deal& deal, int terminal_idx, int player) const;
  int class_of(int round, int player, const Deal& deal) const;
};

/// Identifies what a player knows when acting: own cards (canonicalized),
/// revealed board, and the betting trace. Equal keys = indistinguishable.
struct InfoSetKey {
  int player = 0;
  int round = 0;
  int hand_class = 0;
  std::string trace;

  std::string text() const;
  friend bool operator==(const InfoSetKey&, const InfoSetKey&) = default;
};

/// The chance-erased key: betting trace only. All infosets sharing it have
/// the same action space and form one block.
struct InfoBlockKey {
  int player = 0;
  int round = 0;
  std::string trace;

  std::string text() const;
  friend bool operator==(const InfoBlockKey&, const InfoBlockKey&) = default;
};

/// One position in the full game tree under a fixed deal. Chance turns
/// reveal the deal's predetermined community cards.
struct HistoryNode {
  const Game* game = nullptr;
  Deal deal;
  int node = 0;       // betting node when acting
  int terminal = -1;  // >= 0 once the game ended
  bool chance = false;  // community reveal pending before `node`
  int revealed = 0;     // community cards revealed so far

  static HistoryNode root(const Game& game, const Deal& deal);

  bool is_terminal() const { return terminal >= 0; }
  bool chance_to_act() const { return chance; }
  int player_to_act() const;
  int round() const;
};

std::vector<Action> legal_actions(const HistoryNode& node);
HistoryNode apply_action(const HistoryNode& node, Action a);
// Reveals the deal's next community card(s); only legal at chance turns.
HistoryNode advance_chance(const HistoryNode& node);
int utility(const HistoryNode& node, int player);
InfoSetKey infoset_key(const HistoryNode& node, int player);
InfoBlockKey infoblock_key(const InfoSetKey& key);

}  // namespace ecfr
