#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ecfr/cards.hpp"

namespace ecfr {

/// A player's view of their cards with suits relabeled into canonical order.
/// Segment 0 holds the hole cards; segment r holds the community cards
/// revealed before betting round r. Suit-isomorphic views share one form.
struct CanonicalHand {
  std::vector<std::vector<Card>> segments;
  std::array<int, kMaxSuits> suit_perm = {0, 1, 2, 3};  // old suit -> new suit

  std::uint64_t key() const;
  std::string text(const GameConfig& cfg) const;
  std::vector<Card> all_cards() const;
  // Cards visible through segment `upto` inclusive (prefix view).
  std::vector<std::vector<Card>> prefix(int upto) const;
};

// Suits are ordered by card count, ties broken by segment-wise rank content
// (higher ranks in earlier segments first). Suits with identical content are
// interchangeable, so any stable order yields the same canonical form.
CanonicalHand canonicalize(const std::vector<std::vector<Card>>& segments, const GameConfig& cfg);

/// Enumerates every view a player can hold at each round and assigns dense
/// class ids to the distinct canonical forms. Lookup tables cover the
/// single-card-reveal games used here; other shapes fall back to hashing.
class HandIndexer {
 public:
  explicit HandIndexer(const GameConfig& cfg);

  const GameConfig& config() const { return cfg_; }
  int num_rounds() const { return cfg_.num_rounds(); }
  int num_classes(int round) const { return static_cast<int>(reps_[round].size()); }
  // Count of raw (non-canonicalized) views for one player at `round`.
  std::int64_t num_raw_views(int round) const { return raw_counts_[round]; }
  const CanonicalHand& representative(int round, int cls) const { return reps_[round][cls]; }

  int num_holes() const { return static_cast<int>(holes_.size()); }
  const std::vector<Card>& hole_cards(int hole_idx) const { return holes_[hole_idx]; }
  int hole_index(std::span<const Card> hole) const;

  // Class of the view (hole, board[0..community_at_round(round))).
  int class_of(int round, int hole_idx, std::span<const Card> board) const;
  int class_of_cards(int round, std::span<const Card> hole, std::span<const Card> board) const;

  // Stable class id of the round-(round-1) prefix of a round-`round` class.
  int parent_class(int round, int cls) const { return parent_[round][cls]; }

 private:
  void enumerate_round(int round);
  int lookup_slow(int round, std::span<const Card> hole, std::span<const Card> board) const;

  GameConfig cfg_;
  std::vector<std::vector<Card>> holes_;
  std::vector<int> hole_pair_index_;  // deck*deck -> hole idx (2 hole cards)
  std::vector<std::vector<CanonicalHand>> reps_;
  std::vector<std::int64_t> raw_counts_;
  std::vector<std::vector<int>> parent_;
  bool fast_ = false;                      // all reveals are single cards
  std::vector<std::vector<int>> table_;    // per round: dense class lookup
  std::vector<std::unordered_map<std::uint64_t, int>> by_key_;
};

// Distinct canonical classes for one player's view at `round`.
int count_isomorphism_classes(const GameConfig& cfg, int round);

}  // namespace ecfr
