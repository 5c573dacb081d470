#include "ecfr/cfr.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <unordered_map>

#include "ecfr/kernels.hpp"

namespace ecfr {

void regret_matching_row(const double* regrets, double* out, int actions) {
  double pos = 0;
  for (int i = 0; i < actions; ++i)
    if (regrets[i] > 0) pos += regrets[i];
  if (pos > 0) {
    for (int i = 0; i < actions; ++i) out[i] = regrets[i] > 0 ? regrets[i] / pos : 0.0;
  } else {
    for (int i = 0; i < actions; ++i) out[i] = 1.0 / actions;
  }
}

std::vector<double> regret_matching(std::span<const double> cumulative) {
  std::vector<double> out(cumulative.size());
  regret_matching_row(cumulative.data(), out.data(), static_cast<int>(cumulative.size()));
  return out;
}

bool lemma1_check(double a, double b) {
  const double ap = a > 0 ? a : 0;
  const double lhs = std::max(a + b, 0.0) * std::max(a + b, 0.0);
  const double rhs = ap * ap + 2 * ap * b + b * b;
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return lhs <= rhs + 1e-12 * scale;
}

// ---------------------------------------------------------------------------
// Object-layer profiles and exact counterfactual values

namespace {

int actions_at(const Game& game, const InfoSetKey& key) {
  for (int node : game.tree.blocks[key.player])
    if (game.tree.nodes[node].trace == key.trace) return game.tree.nodes[node].num_actions;
  throw std::invalid_argument("unknown infoset trace: " + key.text());
}

}  // namespace

std::vector<double> UniformProfile::probs(const Game& game, const InfoSetKey& key) const {
  const int a = actions_at(game, key);
  return std::vector<double>(a, 1.0 / a);
}

std::vector<double> SeededRandomProfile::probs(const Game& game, const InfoSetKey& key) const {
  const int a = actions_at(game, key);
  std::mt19937_64 rng(fnv1a64(key.text()) ^ seed);
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  std::vector<double> p(a);
  double sum = 0;
  for (double& x : p) {
    x = dist(rng);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

namespace {

// Expected utility for `player` from history `h` under the full profile.
double expected_value_below(const HistoryNode& h, const StrategyProfile& profile, int player) {
  if (h.is_terminal()) return utility(h, player);
  if (h.chance_to_act()) return expected_value_below(advance_chance(h), profile, player);
  const int actor = h.player_to_act();
  const InfoSetKey key = infoset_key(h, actor);
  const std::vector<double> p = profile.probs(*h.game, key);
  const std::vector<Action> acts = legal_actions(h);
  double v = 0;
  for (size_t i = 0; i < acts.size(); ++i)
    v += p[i] * expected_value_below(apply_action(h, acts[i]), profile, player);
  return v;
}

struct CfAccumulator {
  const StrategyProfile& profile;
  const InfoSetKey& target;
  CounterfactualValue out;

  void walk(const HistoryNode& h, double reach_minus) {
    if (h.is_terminal()) return;
    if (h.chance_to_act()) {
      walk(advance_chance(h), reach_minus);
      return;
    }
    const int actor = h.player_to_act();
    const InfoSetKey key = infoset_key(h, actor);
    const std::vector<Action> acts = legal_actions(h);
    if (actor == target.player && key == target) {
      for (size_t i = 0; i < acts.size(); ++i)
        out.per_action[i] += reach_minus * expected_value_below(apply_action(h, acts[i]), profile, target.player);
      out.value += reach_minus * expected_value_below(h, profile, target.player);
      return;  // perfect recall: the infoset is never crossed twice on a path
    }
    const std::vector<double> p = profile.probs(*h.game, key);
    for (size_t i = 0; i < acts.size(); ++i)
      walk(apply_action(h, acts[i]), actor == target.player ? reach_minus : reach_minus * p[i]);
  }
};

}  // namespace

CounterfactualValue counterfactual_value(const Game& game, const StrategyProfile& profile,
                                         const InfoSetKey& target) {
  CfAccumulator acc{profile, target, {}};
  acc.out.per_action.assign(actions_at(game, target), 0.0);
  const std::int64_t n = game.deals.count();
  const double w = game.deals.probability();
  for (std::int64_t i = 0; i < n; ++i) {
    HistoryNode root = HistoryNode::root(game, game.deals.get(i));
    acc.walk(root, w);
  }
  return acc.out;
}

double lemma2_residual(const Game& game, const StrategyProfile& profile,
                       const InfoSetKey& target) {
  const CounterfactualValue cf = counterfactual_value(game, profile, target);
  const std::vector<double> p = profile.probs(game, target);
  double mix = 0;
  for (size_t i = 0; i < p.size(); ++i) mix += p[i] * cf.per_action[i];
  return std::abs(cf.value - mix);
}

std::vector<InfoSetKey> enumerate_infosets(const Game& game, int player) {
  std::vector<InfoSetKey> out;
  std::vector<std::string> seen;
  std::function<void(const HistoryNode&)> walk = [&](const HistoryNode& h) {
    if (h.is_terminal()) return;
    if (h.chance_to_act()) {
      walk(advance_chance(h));
      return;
    }
    if (h.player_to_act() == player) {
      InfoSetKey key = infoset_key(h, player);
      const std::string text = key.text();
      if (std::find(seen.begin(), seen.end(), text) == seen.end()) {
        seen.push_back(text);
        out.push_back(std::move(key));
      }
    }
    for (Action a : legal_actions(h)) walk(apply_action(h, a));
  };
  const std::int64_t n = game.deals.count();
  for (std::int64_t i = 0; i < n; ++i) {
    HistoryNode root = HistoryNode::root(game, game.deals.get(i));
    walk(root);
  }
  return out;
}

// ---------------------------------------------------------------------------
// BlockArrays / RowSpec

void BlockArrays::init(const Game& g, const std::vector<int>& rows_per_round) {
  game = &g;
  for (int pl = 0; pl < 2; ++pl) {
    const auto& blocks = g.tree.blocks[pl];
    offset[pl].assign(blocks.size() + 1, 0);
    entries[pl].assign(blocks.size(), 0);
    std::size_t total = 0;
    for (size_t b = 0; b < blocks.size(); ++b) {
      const auto& node = g.tree.nodes[blocks[b]];
      offset[pl][b] = total;
      entries[pl][b] = rows_per_round[node.round];
      total += static_cast<std::size_t>(entries[pl][b]) * node.num_actions;
    }
    offset[pl][blocks.size()] = total;
    buf[pl].assign(total, 0.0);
  }
}

void BlockArrays::zero() {
  for (int pl = 0; pl < 2; ++pl) std::fill(buf[pl].begin(), buf[pl].end(), 0.0);
}

RowSpec RowSpec::identity(const Game& game) {
  RowSpec spec;
  const int rounds = game.num_rounds();
  spec.rows.resize(rounds);
  spec.row_of.resize(rounds);
  for (int r = 0; r < rounds; ++r) spec.rows[r] = game.indexer.num_classes(r);
  return spec;
}

// ---------------------------------------------------------------------------
// Traversal core

namespace {

struct WalkCtx {
  const Game* game;
  const BlockArrays* sigma;
  BlockArrays* G;
  BlockArrays* avg;
  int hero;
  double wdeal;
  std::array<std::array<int, kMaxRounds>, 2> cls;
  int sd_sign;

  double terminal_value(int t) const {
    const BettingTree::Terminal& term = game->tree.terminals[t];
    if (!term.showdown) {
      const int winner = 1 - term.folder;
      const int won = term.contrib[term.folder];
      return hero == winner ? won : -won;
    }
    return static_cast<double>(sd_sign) * term.contrib[0];
  }

  double walk(int node_id, double pi_me, double pi_opp) {
    const BettingTree::Node& n = game->tree.nodes[node_id];
    const int c = cls[n.to_act][n.round];
    const double* srow = sigma->row(n.to_act, n.block, c);
    double v = 0;
    if (n.to_act == hero) {
      double va[3];
      for (int i = 0; i < n.num_actions; ++i) {
        const int child = n.children[i];
        va[i] = child < 0 ? terminal_value(~child) : walk(child, pi_me * srow[i], pi_opp);
        v += srow[i] * va[i];
      }
      double* grow = G->row(hero, n.block, c);
      const double w = wdeal * pi_opp;
      for (int i = 0; i < n.num_actions; ++i) grow[i] += w * (va[i] - v);
      if (avg) {
        double* arow = avg->row(hero, n.block, c);
        for (int i = 0; i < n.num_actions; ++i) arow[i] += pi_me * srow[i];
      }
    } else {
      for (int i = 0; i < n.num_actions; ++i) {
        const int child = n.children[i];
        const double cv =
            child < 0 ? terminal_value(~child) : walk(child, pi_me, pi_opp * srow[i]);
        v += srow[i] * cv;
      }
    }
    return v;
  }
};

}  // namespace

void collect_pass(const Game& game, const BlockArrays& sigma, int hero,
                  std::span<const Deal> deals, double deal_weight, BlockArrays* G,
                  BlockArrays* avg) {
  // Group deals by the hero's first-round class. A class at any round
  // determines its first-round prefix class, so groups write disjoint rows
  // of G/avg and any parallel schedule gives identical sums.
  const int n0 = game.indexer.num_classes(0);
  std::vector<std::vector<int>> groups(n0);
  const int hole_n = game.cfg.num_hole_cards;
  for (size_t d = 0; d < deals.size(); ++d) {
    const int hidx = game.indexer.hole_index(deals[d].hole_of(hero, hole_n));
    groups[game.indexer.class_of(0, hidx, {})].push_back(static_cast<int>(d));
  }
  const int rounds = game.num_rounds();
  const int last_board = game.cfg.community_at_round(rounds - 1);
  parallel_groups(n0, [&](int g) {
    WalkCtx ctx;
    ctx.game = &game;
    ctx.sigma = &sigma;
    ctx.G = G;
    ctx.avg = avg;
    ctx.hero = hero;
    ctx.wdeal = deal_weight;
    for (int d : groups[g]) {
      const Deal& deal = deals[d];
      std::array<int, 2> hidx;
      for (int pl = 0; pl < 2; ++pl) {
        hidx[pl] = game.indexer.hole_index(deal.hole_of(pl, hole_n));
        for (int r = 0; r < rounds; ++r)
          ctx.cls[pl][r] = game.indexer.class_of(r, hidx[pl], deal.board(game.cfg.community_at_round(r)));
      }
      const std::uint32_t ch = game.showdown_code(hidx[hero], deal.board(last_board));
      const std::uint32_t co = game.showdown_code(hidx[1 - hero], deal.board(last_board));
      ctx.sd_sign = ch > co ? 1 : ch < co ? -1 : 0;
      ctx.walk(0, 1.0, 1.0);
    }
  });
}

std::vector<Deal> iteration_deals(const Game& game, const SamplingSpec& sampling,
                                  std::mt19937_64& rng) {
  std::vector<Deal> deals;
  if (sampling.mode == SamplingSpec::kFullEnumeration) {
    const std::int64_t n = game.deals.count();
    deals.reserve(n);
    for (std::int64_t i = 0; i < n; ++i) deals.push_back(game.deals.get(i));
  } else {
    deals.reserve(sampling.budget);
    for (std::int64_t i = 0; i < sampling.budget; ++i) deals.push_back(game.deals.sample(rng));
  }
  return deals;
}

// ---------------------------------------------------------------------------
// TabularCfr

TabularCfr::TabularCfr(const Game& game, RowSpec rows, SamplingSpec sampling, std::uint64_t seed)
    : game_(&game), rows_(std::move(rows)), sampling_(sampling), rng_(seed) {
  regret_sum_.init(game, rows_.rows);
  avg_num_.init(game, rows_.rows);
  const RowSpec ident = RowSpec::identity(game);
  sigma_.init(game, ident.rows);
  g_.init(game, ident.rows);
  avg_buf_.init(game, ident.rows);
}

void TabularCfr::fill_sigma() {
  for (int pl = 0; pl < 2; ++pl) {
    const int nb = game_->tree.num_blocks(pl);
    parallel_groups(nb, [&](int b) {
      const int round = sigma_.round_of(pl, b);
      const int a = sigma_.actions(pl, b);
      const int nrows = rows_.rows[round];
      std::vector<double> strat(static_cast<size_t>(nrows) * a);
      for (int r = 0; r < nrows; ++r)
        regret_matching_row(regret_sum_.row(pl, b, r), strat.data() + static_cast<size_t>(r) * a, a);
      const int ncls = game_->indexer.num_classes(round);
      for (int c = 0; c < ncls; ++c) {
        const double* src = strat.data() + static_cast<size_t>(rows_.map(round, c)) * a;
        std::copy(src, src + a, sigma_.row(pl, b, c));
      }
    });
  }
}

void TabularCfr::iterate() {
  fill_sigma();
  g_.zero();
  avg_buf_.zero();
  const std::vector<Deal> deals = iteration_deals(*game_, sampling_, rng_);
  const double w = sampling_.mode == SamplingSpec::kFullEnumeration
                       ? game_->deals.probability()
                       : 1.0 / static_cast<double>(deals.size());
  for (int hero = 0; hero < 2; ++hero)
    collect_pass(*game_, sigma_, hero, deals, w, &g_, &avg_buf_);
  // Fold class-level sums onto storage rows in fixed class order.
  for (int pl = 0; pl < 2; ++pl) {
    const int nb = game_->tree.num_blocks(pl);
    parallel_groups(nb, [&](int b) {
      const int round = sigma_.round_of(pl, b);
      const int a = sigma_.actions(pl, b);
      const int ncls = game_->indexer.num_classes(round);
      for (int c = 0; c < ncls; ++c) {
        const int row = rows_.map(round, c);
        const double* gsrc = g_.row(pl, b, c);
        const double* asrc = avg_buf_.row(pl, b, c);
        double* rdst = regret_sum_.row(pl, b, row);
        double* adst = avg_num_.row(pl, b, row);
        for (int i = 0; i < a; ++i) {
          rdst[i] += gsrc[i];
          adst[i] += asrc[i];
        }
      }
    });
  }
  ++T_;
}

std::vector<double> TabularCfr::cumulative_regret(int player, int block, int cls) const {
  const int a = regret_sum_.actions(player, block);
  const int round = regret_sum_.round_of(player, block);
  const double* row = regret_sum_.row(player, block, rows_.map(round, cls));
  std::vector<double> out(row, row + a);
  if (T_ > 0)
    for (double& x : out) x /= T_;
  return out;
}

std::vector<double> TabularCfr::current_strategy(int player, int block, int cls) const {
  const int round = regret_sum_.round_of(player, block);
  const int a = regret_sum_.actions(player, block);
  const double* row = regret_sum_.row(player, block, rows_.map(round, cls));
  std::vector<double> out(a);
  regret_matching_row(row, out.data(), a);
  return out;
}

std::vector<double> TabularCfr::average_strategy(int player, int block, int cls) const {
  const int round = regret_sum_.round_of(player, block);
  const int a = regret_sum_.actions(player, block);
  const double* row = avg_num_.row(player, block, rows_.map(round, cls));
  std::vector<double> out(row, row + a);
  double sum = 0;
  for (double x : out) sum += x;
  if (sum > 0) {
    for (double& x : out) x /= sum;
  } else {
    for (double& x : out) x = 1.0 / a;
  }
  return out;
}

BlockArrays TabularCfr::flat_current() const {
  BlockArrays flat;
  flat.init(*game_, RowSpec::identity(*game_).rows);
  for (int pl = 0; pl < 2; ++pl) {
    const int nb = game_->tree.num_blocks(pl);
    for (int b = 0; b < nb; ++b) {
      const int round = flat.round_of(pl, b);
      const int ncls = game_->indexer.num_classes(round);
      const int a = flat.actions(pl, b);
      for (int c = 0; c < ncls; ++c)
        regret_matching_row(regret_sum_.row(pl, b, rows_.map(round, c)), flat.row(pl, b, c), a);
    }
  }
  return flat;
}

BlockArrays TabularCfr::flat_average() const {
  BlockArrays flat;
  flat.init(*game_, RowSpec::identity(*game_).rows);
  for (int pl = 0; pl < 2; ++pl) {
    const int nb = game_->tree.num_blocks(pl);
    for (int b = 0; b < nb; ++b) {
      const int round = flat.round_of(pl, b);
      const int ncls = game_->indexer.num_classes(round);
      const int a = flat.actions(pl, b);
      for (int c = 0; c < ncls; ++c) {
        const double* row = avg_num_.row(pl, b, rows_.map(round, c));
        double sum = 0;
        for (int i = 0; i < a; ++i) sum += row[i];
        double* dst = flat.row(pl, b, c);
        for (int i = 0; i < a; ++i) dst[i] = sum > 0 ? row[i] / sum : 1.0 / a;
      }
    }
  }
  return flat;
}

double TabularCfr::max_positive_regret(int player) const {
  double total = 0;
  const int nb = game_->tree.num_blocks(player);
  for (int b = 0; b < nb; ++b) {
    const int round = regret_sum_.round_of(player, b);
    const int a = regret_sum_.actions(player, b);
    const int ncls = game_->indexer.num_classes(round);
    for (int c = 0; c < ncls; ++c) {
      const double* row = regret_sum_.row(player, b, rows_.map(round, c));
      double mx = 0;
      for (int i = 0; i < a; ++i) mx = std::max(mx, row[i]);
      total += T_ > 0 ? mx / T_ : mx;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// ECFRTAB1 checkpoint: magic, u32 entry count, then per entry:
// u32 key length, key bytes ("p<i>|r<j>|h<row>|<trace>"), u32 action count,
// then 2*A little-endian doubles: cumulative regret sums, average numerators.

namespace {

void write_u32le(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64le(std::ostream& os, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

double read_f64le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double x;
  std::memcpy(&x, &bits, 8);
  return x;
}

std::string row_key_text(const Game& game, int player, int block, int row) {
  const auto& node = game.tree.nodes[game.tree.blocks[player][block]];
  return "p" + std::to_string(player + 1) + "|r" + std::to_string(node.round + 1) + "|h" +
         std::to_string(row) + "|" + node.trace;
}

}  // namespace

void save_tables(const std::string& path, const Game& game, const RowSpec& rows,
                 const BlockArrays& regret_sum, const BlockArrays& avg_num) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write table checkpoint: " + path);
  os.write("ECFRTAB1", 8);
  std::uint32_t count = 0;
  for (int pl = 0; pl < 2; ++pl)
    for (size_t b = 0; b < game.tree.blocks[pl].size(); ++b)
      count += rows.rows[regret_sum.round_of(pl, static_cast<int>(b))];
  write_u32le(os, count);
  for (int pl = 0; pl < 2; ++pl) {
    const int nb = game.tree.num_blocks(pl);
    for (int b = 0; b < nb; ++b) {
      const int round = regret_sum.round_of(pl, b);
      const int a = regret_sum.actions(pl, b);
      for (int r = 0; r < rows.rows[round]; ++r) {
        const std::string key = row_key_text(game, pl, b, r);
        write_u32le(os, static_cast<std::uint32_t>(key.size()));
        os.write(key.data(), static_cast<std::streamsize>(key.size()));
        write_u32le(os, static_cast<std::uint32_t>(a));
        for (int i = 0; i < a; ++i) write_f64le(os, regret_sum.row(pl, b, r)[i]);
        for (int i = 0; i < a; ++i) write_f64le(os, avg_num.row(pl, b, r)[i]);
      }
    }
  }
  if (!os) throw std::runtime_error("short write on table checkpoint: " + path);
}

void load_tables(const std::string& path, const Game& game, const RowSpec& rows,
                 BlockArrays* regret_sum, BlockArrays* avg_num) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open table checkpoint: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != "ECFRTAB1")
    throw std::runtime_error("bad magic in table checkpoint: " + path);
  regret_sum->init(game, rows.rows);
  avg_num->init(game, rows.rows);
  const std::uint32_t count = read_u32le(is);
  // Index rows by key text for order-independent loading.
  std::unordered_map<std::string, std::pair<double*, double*>> index;
  for (int pl = 0; pl < 2; ++pl) {
    const int nb = game.tree.num_blocks(pl);
    for (int b = 0; b < nb; ++b) {
      const int round = regret_sum->round_of(pl, b);
      for (int r = 0; r < rows.rows[round]; ++r)
        index[row_key_text(game, pl, b, r)] = {regret_sum->row(pl, b, r), avg_num->row(pl, b, r)};
    }
  }
  for (std::uint32_t e = 0; e < count; ++e) {
    const std::uint32_t klen = read_u32le(is);
    std::string key(klen, '\0');
    is.read(key.data(), klen);
    const std::uint32_t a = read_u32le(is);
    auto it = index.find(key);
    if (it == index.end()) throw std::runtime_error("unknown table key '" + key + "' in " + path);
    for (std::uint32_t i = 0; i < a; ++i) it->second.first[i] = read_f64le(is);
    for (std::uint32_t i = 0; i < a; ++i) it->second.second[i] = read_f64le(is);
  }
  if (!is) throw std::runtime_error("truncated table checkpoint: " + path);
}

void TabularCfr::save(const std::string& path) const {
  save_tables(path, *game_, rows_, regret_sum_, avg_num_);
}

void TabularCfr::load(const std::string& path) {
  load_tables(path, *game_, rows_, &regret_sum_, &avg_num_);
}

}  // namespace ecfr
