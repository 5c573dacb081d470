#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "ecfr/cards.hpp"
#include "ecfr/hand_eval.hpp"

using namespace ecfr;

namespace {

Card card(const GameConfig& cfg, const std::string& text) { return cfg.parse_card(text); }

}  // namespace

TEST_CASE("config presets validate and round-trip through text") {
  for (const auto& name : {"kuhn", "numeral211", "numeral20"}) {
    GameConfig g = resolve_game(name);
    GameConfig back = parse_game_config(g.to_text());
    CHECK(back.to_text() == g.to_text());
    CHECK(back.num_ranks == g.num_ranks);
  }
  GameConfig n211 = numeral211_config();
  CHECK(n211.num_rounds() == 3);
  CHECK(n211.deck_size() == 40);
  CHECK(n211.num_hole_cards == 2);
  CHECK(n211.ante == 5);
  CHECK(n211.bet_size_per_round == std::vector<int>{10, 20, 20});
  CHECK(n211.max_raises == 4);
}

TEST_CASE("card text notation matches rank+suit characters") {
  GameConfig g = numeral211_config();
  CHECK(g.card_text(card(g, "Ts")) == "Ts");
  CHECK(g.card_text(card(g, "Ah")) == "Ah");
  CHECK(g.card_text(card(g, "2c")) == "2c");
  CHECK(card_rank(card(g, "As"), g.num_ranks) == 9);
  CHECK(card_suit(card(g, "Ad"), g.num_ranks) == 2);
  GameConfig k = kuhn_config();
  CHECK(k.card_text(0) == "J");
  CHECK(k.card_text(2) == "K");
  CHECK_THROWS(k.parse_card("A"));
}

TEST_CASE("three-card categories from the rank table") {
  GameConfig g = numeral211_config();
  auto rank = [&](const char* a, const char* b, const char* c) {
    std::vector<Card> cards = {card(g, a), card(g, b), card(g, c)};
    return rank_hand(cards, g);
  };
  CHECK(rank("Ts", "9s", "8s").category == kStraightFlush);
  CHECK(rank("Ts", "Th", "Tc").category == kThreeOfAKind);
  CHECK(rank("Ts", "9h", "8c").category == kStraight);
  CHECK(rank("Ts", "8s", "6s").category == kFlush);
  CHECK(rank("Ts", "Th", "8c").category == kPair);
  CHECK(rank("Ts", "Th", "8c").tiebreak[0] == 8);  // pair of tens
  CHECK(rank("Ts", "Th", "8c").tiebreak[1] == 6);  // kicker 8
  CHECK(rank("Ts", "8h", "6c").category == kHighCard);

  CHECK(compare(rank("Ts", "9s", "8s"), rank("Ts", "Th", "Tc")) == Outcome::kWin);
  CHECK(compare(rank("Ts", "Th", "9c"), rank("Ts", "Th", "8c")) == Outcome::kWin);
  CHECK(compare(rank("Ts", "Th", "8c"), rank("Td", "Tc", "8h")) == Outcome::kDraw);
  // trips beat straights, straights beat flushes in the 3-card hierarchy
  CHECK(compare(rank("8s", "8h", "8c"), rank("Ts", "9h", "8d")) == Outcome::kWin);
  CHECK(compare(rank("4s", "3h", "2c"), rank("As", "Ts", "8s")) == Outcome::kWin);
}

TEST_CASE("best-of-4 equals the max over all 3-card subsets") {
  GameConfig g = numeral211_config();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Card> deck(g.deck_size());
    for (int i = 0; i < g.deck_size(); ++i) deck[i] = i;
    std::shuffle(deck.begin(), deck.end(), rng);
    std::vector<Card> cards(deck.begin(), deck.begin() + 4);
    HandRank best;
    bool first = true;
    for (int skip = 0; skip < 4; ++skip) {
      std::vector<Card> sub;
      for (int i = 0; i < 4; ++i)
        if (i != skip) sub.push_back(cards[i]);
      HandRank r = rank_hand(sub, g);
      if (first || r > best) best = r;
      first = false;
    }
    CHECK(rank_hand(cards, g).code() == best.code());
  }
}

TEST_CASE("rank comparison is a total order on random pairs") {
  GameConfig g = numeral211_config();
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, g.deck_size() - 1);
  auto random_rank = [&]() {
    std::vector<Card> cards;
    while (cards.size() < 3) {
      Card c = pick(rng);
      if (std::find(cards.begin(), cards.end(), c) == cards.end()) cards.push_back(c);
    }
    return rank_hand(cards, g);
  };
  for (int i = 0; i < 100000; ++i) {
    HandRank a = random_rank(), b = random_rank(), c = random_rank();
    // antisymmetry
    CHECK(static_cast<int>(compare(a, b)) == -static_cast<int>(compare(b, a)));
    // transitivity via the packed code ordering
    if (a.code() <= b.code() && b.code() <= c.code()) CHECK(a.code() <= c.code());
  }
  HandRank a = random_rank();
  CHECK(compare(a, a) == Outcome::kDraw);
}

TEST_CASE("kuhn single-card ranks follow J < Q < K") {
  GameConfig k = kuhn_config();
  std::vector<Card> j = {0}, q = {1}, kk = {2};
  CHECK(compare(rank_hand(kk, k), rank_hand(q, k)) == Outcome::kWin);
  CHECK(compare(rank_hand(j, k), rank_hand(q, k)) == Outcome::kLose);
}

TEST_CASE("rank_hand rejects too few cards") {
  GameConfig g = numeral211_config();
  std::vector<Card> two = {0, 1};
  CHECK_THROWS(rank_hand(two, g));
}
