#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "ecfr/cards.hpp"

namespace ecfr {

enum class Outcome : int { kLose = -1, kDraw = 0, kWin = 1 };

// Three-card categories, ascending strength. Trips beat straights and
// straights beat flushes in this family of games.
enum HandCategory : int {
  kHighCard = 0,
  kPair = 1,
  kFlush = 2,
  kStraight = 3,
  kThreeOfAKind = 4,
  kStraightFlush = 5,
};

/// Total-order rank of a showdown hand: category ordinal plus a
/// lexicographic tie-break vector of card ranks (highest significance first).
struct HandRank {
  int category = 0;
  std::array<int, 3> tiebreak = {-1, -1, -1};

  // Packed code, monotone in hand strength. Assumes ranks < 16.
  std::uint32_t code() const {
    std::uint32_t v = static_cast<std::uint32_t>(category);
    for (int t : tiebreak) v = (v << 4) | static_cast<std::uint32_t>(t + 1);
    return v;
  }
  friend bool operator==(const HandRank& a, const HandRank& b) { return a.code() == b.code(); }
  friend auto operator<=>(const HandRank& a, const HandRank& b) { return a.code() <=> b.code(); }
};

// Best rank over all hand_size-card subsets of `cards`. Throws if fewer than
// hand_size cards are supplied.
HandRank rank_hand(std::span<const Card> cards, const GameConfig& cfg);

Outcome compare(const HandRank& a, const HandRank& b);

std::string category_name(int category);

}  // namespace ecfr
