#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ecfr {

// A card is an integer id: suit * num_ranks + rank. Rank 0 is the lowest.
using Card = int;

inline int card_rank(Card c, int num_ranks) { return c % num_ranks; }
inline int card_suit(Card c, int num_ranks) { return c / num_ranks; }
inline Card make_card(int rank, int suit, int num_ranks) { return suit * num_ranks + rank; }

constexpr int kMaxSuits = 4;
constexpr int kMaxRounds = 4;
constexpr int kMaxHoleCards = 2;
constexpr int kMaxBoardCards = 4;

/// Rule description for a two-player limit poker game: deck shape, deal
/// structure, betting sizes and caps. Presets cover the games used by the
/// experiments; arbitrary reduced decks load from key=value text.
struct GameConfig {
  std::string name = "custom";
  int num_ranks = 0;
  int num_suits = 0;
  int num_hole_cards = 0;
  // Community cards revealed before betting round r+1 (empty = single-round game).
  std::vector<int> community_per_round;
  int ante = 0;
  std::vector<int> bet_size_per_round;
  int max_raises = 0;   // bets + raises allowed per round, total
  int blind_unit = 1;   // normalizer for mb/g exploitability
  int hand_size = 1;    // cards forming a showdown hand (best-of selection)
  // Rank display characters, lowest first. Defaults to the "23456789TA" ladder.
  std::string rank_chars;

  int num_rounds() const { return static_cast<int>(community_per_round.size()) + 1; }
  int deck_size() const { return num_ranks * num_suits; }
  int total_community() const {
    int n = 0;
    for (int c : community_per_round) n += c;
    return n;
  }
  // Community cards visible at the start of betting round r (0-based).
  int community_at_round(int r) const {
    int n = 0;
    for (int i = 0; i < r; ++i) n += community_per_round[i];
    return n;
  }

  char rank_char(int rank) const;
  char suit_char(int suit) const;
  std::string card_text(Card c) const;
  Card parse_card(const std::string& text) const;

  // Canonical key=value rendering; stable, used for config hashing.
  std::string to_text() const;

  void validate() const;  // throws std::invalid_argument with a diagnostic
};

GameConfig kuhn_config();
GameConfig numeral211_config();
// Reduced-deck variant of numeral211: `ranks` ranks x 4 suits, same betting.
GameConfig numeral_reduced_config(int ranks);

// Parses key=value lines (ranks, suits, hole_cards, community, ante, bets,
// max_raises, blind_unit, hand_size, rank_chars, name). '#' starts a comment.
GameConfig parse_game_config(const std::string& text);
GameConfig load_game_config_file(const std::string& path);

// Named preset or path to a config file.
GameConfig resolve_game(const std::string& name_or_path);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace ecfr
