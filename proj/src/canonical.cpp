#include "ecfr/canonical.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace ecfr {

std::uint64_t CanonicalHand::key() const {
  std::uint64_t k = 0;
  for (size_t s = 0; s < segments.size(); ++s)
    for (Card c : segments[s]) k = (k << 8) | (static_cast<std::uint64_t>(s) << 6) | static_cast<std::uint64_t>(c);
  return k;
}

std::string CanonicalHand::text(const GameConfig& cfg) const {
  std::string out;
  for (size_t s = 0; s < segments.size(); ++s) {
    if (s) out.push_back('|');
    for (Card c : segments[s]) out += cfg.card_text(c);
  }
  return out;
}

std::vector<Card> CanonicalHand::all_cards() const {
  std::vector<Card> out;
  for (const auto& seg : segments) out.insert(out.end(), seg.begin(), seg.end());
  return out;
}

std::vector<std::vector<Card>> CanonicalHand::prefix(int upto) const {
  return std::vector<std::vector<Card>>(segments.begin(), segments.begin() + upto + 1);
}

CanonicalHand canonicalize(const std::vector<std::vector<Card>>& segments, const GameConfig& cfg) {
  const int R = cfg.num_ranks;
  const int S = cfg.num_suits;
  struct Sig {
    int suit = 0;
    int count = 0;
    std::vector<std::vector<int>> seg_ranks;
  };
  std::vector<Sig> sigs(S);
  for (int s = 0; s < S; ++s) {
    sigs[s].suit = s;
    sigs[s].seg_ranks.resize(segments.size());
  }
  for (size_t i = 0; i < segments.size(); ++i)
    for (Card c : segments[i]) {
      Sig& sig = sigs[card_suit(c, R)];
      sig.count += 1;
      sig.seg_ranks[i].push_back(card_rank(c, R));
    }
  for (auto& sig : sigs)
    for (auto& v : sig.seg_ranks) std::sort(v.begin(), v.end(), std::greater<int>());
  std::stable_sort(sigs.begin(), sigs.end(), [](const Sig& a, const Sig& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.seg_ranks > b.seg_ranks;
  });
  CanonicalHand out;
  for (int pos = 0; pos < S; ++pos) out.suit_perm[sigs[pos].suit] = pos;
  out.segments.resize(segments.size());
  for (size_t i = 0; i < segments.size(); ++i) {
    for (Card c : segments[i])
      out.segments[i].push_back(make_card(card_rank(c, R), out.suit_perm[card_suit(c, R)], R));
    std::sort(out.segments[i].begin(), out.segments[i].end());
  }
  return out;
}

HandIndexer::HandIndexer(const GameConfig& cfg) : cfg_(cfg) {
  const int D = cfg_.deck_size();
  if (cfg_.num_hole_cards == 1) {
    for (Card c = 0; c < D; ++c) holes_.push_back({c});
  } else {
    hole_pair_index_.assign(D * D, -1);
    for (Card a = 0; a < D; ++a)
      for (Card b = a + 1; b < D; ++b) {
        hole_pair_index_[a * D + b] = static_cast<int>(holes_.size());
        hole_pair_index_[b * D + a] = static_cast<int>(holes_.size());
        holes_.push_back({a, b});
      }
  }
  fast_ = true;
  for (int c : cfg_.community_per_round)
    if (c != 1) fast_ = false;
  const int rounds = cfg_.num_rounds();
  reps_.resize(rounds);
  raw_counts_.assign(rounds, 0);
  parent_.resize(rounds);
  table_.resize(rounds);
  by_key_.resize(rounds);
  for (int r = 0; r < rounds; ++r) enumerate_round(r);
}

void HandIndexer::enumerate_round(int round) {
  const int D = cfg_.deck_size();
  const int boards = cfg_.community_at_round(round);
  if (fast_) {
    std::int64_t stride = 1;
    for (int i = 0; i < boards; ++i) stride *= D;
    table_[round].assign(holes_.size() * stride, -1);
  }
  std::vector<Card> board(boards);
  std::vector<std::vector<Card>> segments(round + 1);
  std::function<void(int, int)> rec = [&](int hole_idx, int depth) {
    if (depth == boards) {
      raw_counts_[round] += 1;
      segments[0] = holes_[hole_idx];
      int pos = 0;
      for (int r = 1; r <= round; ++r) {
        segments[r].assign(board.begin() + pos, board.begin() + pos + cfg_.community_per_round[r - 1]);
        pos += cfg_.community_per_round[r - 1];
      }
      CanonicalHand ch = canonicalize(segments, cfg_);
      auto [it, inserted] = by_key_[round].try_emplace(ch.key(), static_cast<int>(reps_[round].size()));
      if (inserted) {
        reps_[round].push_back(ch);
        if (round == 0) {
          parent_[round].push_back(-1);
        } else {
          parent_[round].push_back(lookup_slow(round - 1, segments[0],
                                               std::span<const Card>(board.data(), pos - cfg_.community_per_round[round - 1])));
        }
      }
      if (fast_) {
        std::int64_t idx = hole_idx;
        for (int i = 0; i < boards; ++i) idx = idx * D + board[i];
        table_[round][idx] = it->second;
      }
      return;
    }
    // Reveal cards for the next round: a combination from the remaining deck.
    int begin = depth, count = cfg_.community_per_round[0];
    // locate which community round `depth` belongs to and whether this card
    // starts a new combination (enforce ascending order within a round).
    int seen = 0, r = 0;
    for (r = 0; r < static_cast<int>(cfg_.community_per_round.size()); ++r) {
      if (depth < seen + cfg_.community_per_round[r]) break;
      seen += cfg_.community_per_round[r];
    }
    begin = seen;
    count = cfg_.community_per_round[r];
    Card lo = (depth > begin) ? board[depth - 1] + 1 : 0;
    (void)count;
    for (Card c = lo; c < D; ++c) {
      bool used = false;
      for (Card h : holes_[hole_idx])
        if (h == c) used = true;
      for (int i = 0; i < depth && !used; ++i)
        if (board[i] == c) used = true;
      if (used) continue;
      board[depth] = c;
      rec(hole_idx, depth + 1);
    }
  };
  for (int h = 0; h < static_cast<int>(holes_.size()); ++h) rec(h, 0);
}

int HandIndexer::hole_index(std::span<const Card> hole) const {
  if (cfg_.num_hole_cards == 1) return hole[0];
  return hole_pair_index_[hole[0] * cfg_.deck_size() + hole[1]];
}

int HandIndexer::class_of(int round, int hole_idx, std::span<const Card> board) const {
  if (fast_) {
    const int D = cfg_.deck_size();
    std::int64_t idx = hole_idx;
    for (int i = 0; i < cfg_.community_at_round(round); ++i) idx = idx * D + board[i];
    return table_[round][idx];
  }
  return lookup_slow(round, holes_[hole_idx], board.subspan(0, cfg_.community_at_round(round)));
}

int HandIndexer::class_of_cards(int round, std::span<const Card> hole, std::span<const Card> board) const {
  return class_of(round, hole_index(hole), board);
}

int HandIndexer::lookup_slow(int round, std::span<const Card> hole, std::span<const Card> board) const {
  std::vector<std::vector<Card>> segments(round + 1);
  segments[0].assign(hole.begin(), hole.end());
  int pos = 0;
  for (int r = 1; r <= round; ++r) {
    segments[r].assign(board.begin() + pos, board.begin() + pos + cfg_.community_per_round[r - 1]);
    pos += cfg_.community_per_round[r - 1];
  }
  CanonicalHand ch = canonicalize(segments, cfg_);
  auto it = by_key_[round].find(ch.key());
  if (it == by_key_[round].end()) throw std::logic_error("HandIndexer: view not enumerated");
  return it->second;
}

int count_isomorphism_classes(const GameConfig& cfg, int round) {
  HandIndexer idx(cfg);
  return idx.num_classes(round);
}

}  // namespace ecfr
