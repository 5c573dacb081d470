#include "ecfr/hand_eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecfr {

namespace {

HandRank rank_single(Card c, const GameConfig& cfg) {
  HandRank r;
  r.category = kHighCard;
  r.tiebreak = {card_rank(c, cfg.num_ranks), -1, -1};
  return r;
}

HandRank rank_three(Card a, Card b, Card c, const GameConfig& cfg) {
  const int R = cfg.num_ranks;
  int rk[3] = {card_rank(a, R), card_rank(b, R), card_rank(c, R)};
  std::sort(rk, rk + 3, std::greater<int>());
  const bool flush = card_suit(a, R) == card_suit(b, R) && card_suit(b, R) == card_suit(c, R);
  const bool straight = rk[0] == rk[1] + 1 && rk[1] == rk[2] + 1;
  const bool trips = rk[0] == rk[2];
  HandRank out;
  if (straight && flush) {
    out.category = kStraightFlush;
    out.tiebreak = {rk[0], -1, -1};
  } else if (trips) {
    out.category = kThreeOfAKind;
    out.tiebreak = {rk[0], -1, -1};
  } else if (straight) {
    out.category = kStraight;
    out.tiebreak = {rk[0], -1, -1};
  } else if (flush) {
    out.category = kFlush;
    out.tiebreak = {rk[0], rk[1], rk[2]};
  } else if (rk[0] == rk[1] || rk[1] == rk[2]) {
    out.category = kPair;
    const int pair = rk[0] == rk[1] ? rk[0] : rk[1];
    const int kicker = rk[0] == rk[1] ? rk[2] : rk[0];
    out.tiebreak = {pair, kicker, -1};
  } else {
    out.category = kHighCard;
    out.tiebreak = {rk[0], rk[1], rk[2]};
  }
  return out;
}

}  // namespace

HandRank rank_hand(std::span<const Card> cards, const GameConfig& cfg) {
  const int n = static_cast<int>(cards.size());
  if (n < cfg.hand_size)
    throw std::invalid_argument("rank_hand: need at least " + std::to_string(cfg.hand_size) +
                                " cards, got " + std::to_string(n));
  if (cfg.hand_size == 1) {
    HandRank best = rank_single(cards[0], cfg);
    for (int i = 1; i < n; ++i) best = std::max(best, rank_single(cards[i], cfg));
    return best;
  }
  // hand_size == 3: max over all 3-card subsets.
  HandRank best;
  bool first = true;
  for (int i = 0; i < n - 2; ++i)
    for (int j = i + 1; j < n - 1; ++j)
      for (int k = j + 1; k < n; ++k) {
        HandRank r = rank_three(cards[i], cards[j], cards[k], cfg);
        if (first || r > best) best = r;
        first = false;
      }
  return best;
}

Outcome compare(const HandRank& a, const HandRank& b) {
  if (a.code() > b.code()) return Outcome::kWin;
  if (a.code() < b.code()) return Outcome::kLose;
  return Outcome::kDraw;
}

std::string category_name(int category) {
  switch (category) {
    case kHighCard: return "high card";
    case kPair: return "pair";
    case kFlush: return "flush";
    case kStraight: return "straight";
    case kThreeOfAKind: return "three of a kind";
    case kStraightFlush: return "straight flush";
  }
  return "?";
}

}  // namespace ecfr
