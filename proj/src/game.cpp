#include "ecfr/game.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecfr {

char action_char(Action a) {
  switch (a) {
    case Action::kFold: return 'f';
    case Action::kCall: return 'c';
    case Action::kRaise: return 'r';
  }
  return '?';
}

// ---------------------------------------------------------------------------
// DealEnumerator

namespace {

std::int64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// Lexicographic unranking of a k-combination out of n positions.
void comb_unrank(std::int64_t rank, int n, int k, int* out) {
  int x = 0;
  for (int i = 0; i < k; ++i) {
    while (choose(n - 1 - x, k - 1 - i) <= rank) {
      rank -= choose(n - 1 - x, k - 1 - i);
      ++x;
    }
    out[i] = x;
    ++x;
  }
}

}  // namespace

DealEnumerator::DealEnumerator(const GameConfig& cfg) : cfg_(cfg) {
  int remaining = cfg_.deck_size();
  radix_.push_back(choose(remaining, cfg_.num_hole_cards));
  comb_sizes_.push_back(cfg_.num_hole_cards);
  remaining -= cfg_.num_hole_cards;
  radix_.push_back(choose(remaining, cfg_.num_hole_cards));
  comb_sizes_.push_back(cfg_.num_hole_cards);
  remaining -= cfg_.num_hole_cards;
  for (int c : cfg_.community_per_round) {
    radix_.push_back(choose(remaining, c));
    comb_sizes_.push_back(c);
    remaining -= c;
  }
  count_ = 1;
  for (std::int64_t r : radix_) count_ *= r;
}

Deal DealEnumerator::get(std::int64_t index) const {
  if (index < 0 || index >= count_) throw std::out_of_range("deal index out of range");
  std::vector<std::int64_t> digits(radix_.size());
  for (int i = static_cast<int>(radix_.size()) - 1; i >= 0; --i) {
    digits[i] = index % radix_[i];
    index /= radix_[i];
  }
  const int D = cfg_.deck_size();
  std::vector<Card> remaining(D);
  for (int i = 0; i < D; ++i) remaining[i] = i;
  Deal deal;
  int community_pos = 0;
  int positions[4];
  for (size_t d = 0; d < radix_.size(); ++d) {
    const int k = comb_sizes_[d];
    comb_unrank(digits[d], static_cast<int>(remaining.size()), k, positions);
    Card chosen[4];
    for (int i = 0; i < k; ++i) chosen[i] = remaining[positions[i]];
    for (int i = k - 1; i >= 0; --i) remaining.erase(remaining.begin() + positions[i]);
    if (d < 2) {
      for (int i = 0; i < k; ++i) deal.hole[d][i] = chosen[i];
    } else {
      for (int i = 0; i < k; ++i) deal.community[community_pos++] = chosen[i];
    }
  }
  return deal;
}

Deal DealEnumerator::sample(std::mt19937_64& rng) const {
  // Partial Fisher-Yates; sorting each drawn group makes the draw uniform
  // over the combination-structured deal space.
  std::array<Card, 64> deck;
  const int D = cfg_.deck_size();
  for (int i = 0; i < D; ++i) deck[i] = i;
  int remaining = D;
  auto draw = [&](int k, Card* out) {
    for (int i = 0; i < k; ++i) {
      std::uniform_int_distribution<int> dist(0, remaining - 1);
      const int j = dist(rng);
      out[i] = deck[j];
      deck[j] = deck[remaining - 1];
      --remaining;
    }
    std::sort(out, out + k);
  };
  Deal deal;
  draw(cfg_.num_hole_cards, deal.hole[0].data());
  draw(cfg_.num_hole_cards, deal.hole[1].data());
  int pos = 0;
  for (int c : cfg_.community_per_round) {
    draw(c, deal.community.data() + pos);
    pos += c;
  }
  return deal;
}

// ---------------------------------------------------------------------------
// BettingTree

namespace {

struct BuildState {
  int round;
  int pos;  // actions taken this round
  int bets;
  bool outstanding;
  std::array<int, 2> contrib;
  int to_act;
  std::string trace;
};

struct TreeBuilder {
  const GameConfig& cfg;
  BettingTree tree;

  int build(BuildState s) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    {
      BettingTree::Node& n = tree.nodes[id];
      n.round = s.round;
      n.to_act = s.to_act;
      n.contrib = s.contrib;
      n.trace = s.trace;
      n.block = static_cast<int>(tree.blocks[s.to_act].size());
    }
    tree.blocks[s.to_act].push_back(id);

    std::vector<Action> acts;
    if (s.outstanding) {
      acts.push_back(Action::kFold);
      acts.push_back(Action::kCall);
      if (s.bets < cfg.max_raises) acts.push_back(Action::kRaise);
    } else {
      acts.push_back(Action::kCall);  // check
      if (s.bets < cfg.max_raises) acts.push_back(Action::kRaise);  // bet
    }

    for (size_t i = 0; i < acts.size(); ++i) {
      const Action a = acts[i];
      BuildState ns = s;
      ns.trace = s.trace + action_char(a);
      ns.to_act = 1 - s.to_act;
      ns.pos = s.pos + 1;
      int child;
      if (a == Action::kFold) {
        child = ~make_terminal(ns, /*showdown=*/false, s.to_act);
      } else if (a == Action::kRaise) {
        ns.contrib[s.to_act] = s.contrib[1 - s.to_act] + cfg.bet_size_per_round[s.round];
        ns.bets += 1;
        ns.outstanding = true;
        child = build(ns);
      } else {  // check or call
        ns.contrib[s.to_act] = s.contrib[1 - s.to_act];
        const bool closes = s.outstanding || s.pos > 0;
        if (!closes) {
          child = build(ns);
        } else if (s.round + 1 == cfg.num_rounds()) {
          child = ~make_terminal(ns, /*showdown=*/true, -1);
        } else {
          ns.round += 1;
          ns.pos = 0;
          ns.bets = 0;
          ns.outstanding = false;
          ns.to_act = 0;
          ns.trace += '/';
          child = build(ns);
        }
      }
      BettingTree::Node& n = tree.nodes[id];
      n.actions[n.num_actions] = a;
      n.children[n.num_actions] = child;
      n.num_actions += 1;
    }
    return id;
  }

  int make_terminal(const BuildState& s, bool showdown, int folder) {
    BettingTree::Terminal t;
    t.showdown = showdown;
    t.folder = folder;
    t.contrib = s.contrib;
    t.round = s.round;
    t.trace = s.trace;
    tree.terminals.push_back(t);
    return static_cast<int>(tree.terminals.size()) - 1;
  }
};

}  // namespace

BettingTree BettingTree::build(const GameConfig& cfg) {
  TreeBuilder b{cfg, {}};
  BuildState s;
  s.round = 0;
  s.pos = 0;
  s.bets = 0;
  s.outstanding = false;
  s.contrib = {cfg.ante, cfg.ante};
  s.to_act = 0;
  b.build(s);
  return std::move(b.tree);
}

int BettingTree::max_utility_spread(const GameConfig&) const {
  int max_c = 0;
  for (const Terminal& t : terminals) max_c = std::max({max_c, t.contrib[0], t.contrib[1]});
  return 2 * max_c;
}

// ---------------------------------------------------------------------------
// Game

Game::Game(const GameConfig& config)
    : cfg(config), tree(BettingTree::build(config)), indexer(config), deals(config) {
  cfg.validate();
  // Packed showdown ranks for every final-round view.
  const int last = cfg.num_rounds() - 1;
  const int D = cfg.deck_size();
  const int boards = cfg.community_at_round(last);
  std::int64_t stride = 1;
  for (int i = 0; i < boards; ++i) stride *= D;
  showdown_codes.assign(indexer.num_holes() * stride, 0);
  std::vector<Card> cards;
  std::vector<Card> board(boards);
  std::vector<int> idx(boards, 0);
  for (int h = 0; h < indexer.num_holes(); ++h) {
    const auto& hole = indexer.hole_cards(h);
    // iterate all board tuples (including illegal ones; those stay 0)
    std::int64_t total = stride;
    for (std::int64_t bi = 0; bi < total; ++bi) {
      std::int64_t v = bi;
      bool ok = true;
      for (int i = boards - 1; i >= 0; --i) {
        board[i] = static_cast<Card>(v % D);
        v /= D;
      }
      for (int i = 0; i < boards && ok; ++i) {
        for (int j = i + 1; j < boards; ++j)
          if (board[i] == board[j]) ok = false;
        for (Card c : hole)
          if (c == board[i]) ok = false;
      }
      if (!ok) continue;
      cards.assign(hole.begin(), hole.end());
      cards.insert(cards.end(), board.begin(), board.end());
      showdown_codes[h * stride + bi] = rank_hand(cards, cfg).code();
    }
  }
}

std::uint32_t Game::showdown_code(int hole_idx, std::span<const Card> board) const {
  const int D = cfg.deck_size();
  std::int64_t idx = hole_idx;
  for (Card c : board) idx = idx * D + c;
  return showdown_codes[idx];
}

int Game::terminal_utility(const Deal& deal, int terminal_idx, int player) const {
  const BettingTree::Terminal& t = tree.terminals[terminal_idx];
  if (!t.showdown) {
    const int winner = 1 - t.folder;
    const int won = t.contrib[t.folder];
    return player == winner ? won : -won;
  }
  const int boards = cfg.community_at_round(cfg.num_rounds() - 1);
  const std::uint32_t c0 = showdown_code(indexer.hole_index(deal.hole_of(0, cfg.num_hole_cards)),
                                         deal.board(boards));
  const std::uint32_t c1 = showdown_code(indexer.hole_index(deal.hole_of(1, cfg.num_hole_cards)),
                                         deal.board(boards));
  if (c0 == c1) return 0;  // split pot; contributions match at showdown
  const int winner = c0 > c1 ? 0 : 1;
  const int won = t.contrib[1 - winner];
  return player == winner ? won : -won;
}

int Game::class_of(int round, int player, const Deal& deal) const {
  return indexer.class_of(round, indexer.hole_index(deal.hole_of(player, cfg.num_hole_cards)),
                          deal.board(cfg.community_at_round(round)));
}

// ---------------------------------------------------------------------------
// HistoryNode layer

HistoryNode HistoryNode::root(const Game& game, const Deal& deal) {
  HistoryNode h;
  h.game = &game;
  h.deal = deal;
  h.node = 0;
  h.revealed = 0;
  return h;
}

int HistoryNode::player_to_act() const {
  if (is_terminal() || chance) return -1;
  return game->tree.nodes[node].to_act;
}

int HistoryNode::round() const {
  if (terminal >= 0) return game->tree.terminals[terminal].round;
  return game->tree.nodes[node].round;
}

std::vector<Action> legal_actions(const HistoryNode& h) {
  if (h.is_terminal()) throw std::logic_error("legal_actions: node is terminal");
  if (h.chance) throw std::logic_error("legal_actions: chance to act");
  const BettingTree::Node& n = h.game->tree.nodes[h.node];
  return std::vector<Action>(n.actions.begin(), n.actions.begin() + n.num_actions);
}

HistoryNode apply_action(const HistoryNode& h, Action a) {
  if (h.is_terminal()) throw std::logic_error("apply_action: node is terminal");
  if (h.chance) throw std::logic_error("apply_action: chance to act, use advance_chance");
  const BettingTree::Node& n = h.game->tree.nodes[h.node];
  int child = -1;
  for (int i = 0; i < n.num_actions; ++i)
    if (n.actions[i] == a) child = n.children[i];
  if (child == -1)
    throw std::invalid_argument(std::string("illegal action '") + action_char(a) + "' at trace '" +
                                n.trace + "'");
  HistoryNode out = h;
  if (child < 0) {
    out.terminal = ~child;
    out.node = -1;
    return out;
  }
  out.node = child;
  const int next_round = h.game->tree.nodes[child].round;
  if (next_round != n.round && h.game->cfg.community_per_round[n.round] > 0) out.chance = true;
  return out;
}

HistoryNode advance_chance(const HistoryNode& h) {
  if (!h.chance) throw std::logic_error("advance_chance: no chance pending");
  HistoryNode out = h;
  out.revealed += h.game->cfg.community_per_round[h.game->tree.nodes[h.node].round - 1];
  out.chance = false;
  return out;
}

int utility(const HistoryNode& h, int player) {
  if (!h.is_terminal()) throw std::logic_error("utility: node not terminal");
  return h.game->terminal_utility(h.deal, h.terminal, player);
}

InfoSetKey infoset_key(const HistoryNode& h, int player) {
  if (h.player_to_act() != player) throw std::logic_error("infoset_key: player not to act");
  const BettingTree::Node& n = h.game->tree.nodes[h.node];
  InfoSetKey key;
  key.player = player;
  key.round = n.round;
  key.hand_class = h.game->class_of(n.round, player, h.deal);
  key.trace = n.trace;
  return key;
}

InfoBlockKey infoblock_key(const InfoSetKey& key) {
  return InfoBlockKey{key.player, key.round, key.trace};
}

std::string InfoSetKey::text() const {
  return "p" + std::to_string(player + 1) + "|r" + std::to_string(round + 1) + "|h" +
         std::to_string(hand_class) + "|" + trace;
}

std::string InfoBlockKey::text() const {
  return "p" + std::to_string(player + 1) + "|r" + std::to_string(round + 1) + "|" + trace;
}

}  // namespace ecfr
