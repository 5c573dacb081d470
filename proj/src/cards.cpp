#include "ecfr/cards.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ecfr {

namespace {

const char kSuitChars[] = "shdc";

std::string default_rank_chars(int num_ranks) {
  static const std::string ladder = "23456789TA";
  if (num_ranks <= static_cast<int>(ladder.size())) return ladder.substr(0, num_ranks);
  std::string out;
  for (int i = 0; i < num_ranks; ++i) out.push_back(static_cast<char>('a' + i));
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

char GameConfig::rank_char(int rank) const {
  const std::string chars = rank_chars.empty() ? default_rank_chars(num_ranks) : rank_chars;
  return chars.at(rank);
}

char GameConfig::suit_char(int suit) const { return kSuitChars[suit]; }

std::string GameConfig::card_text(Card c) const {
  std::string out;
  out.push_back(rank_char(card_rank(c, num_ranks)));
  if (num_suits > 1) out.push_back(suit_char(card_suit(c, num_ranks)));
  return out;
}

Card GameConfig::parse_card(const std::string& text) const {
  if (text.empty()) throw std::invalid_argument("empty card text");
  const std::string chars = rank_chars.empty() ? default_rank_chars(num_ranks) : rank_chars;
  auto rpos = chars.find(text[0]);
  if (rpos == std::string::npos) throw std::invalid_argument("bad rank char in card '" + text + "'");
  int suit = 0;
  if (text.size() > 1) {
    const char* spos = nullptr;
    for (int i = 0; i < 4; ++i)
      if (kSuitChars[i] == text[1]) spos = &kSuitChars[i];
    if (!spos) throw std::invalid_argument("bad suit char in card '" + text + "'");
    suit = static_cast<int>(spos - kSuitChars);
  }
  if (suit >= num_suits) throw std::invalid_argument("suit out of range in card '" + text + "'");
  return make_card(static_cast<int>(rpos), suit, num_ranks);
}

std::string GameConfig::to_text() const {
  std::ostringstream os;
  os << "name = " << name << "\n";
  os << "ranks = " << num_ranks << "\n";
  os << "suits = " << num_suits << "\n";
  os << "hole_cards = " << num_hole_cards << "\n";
  os << "community = " << join_ints(community_per_round) << "\n";
  os << "ante = " << ante << "\n";
  os << "bets = " << join_ints(bet_size_per_round) << "\n";
  os << "max_raises = " << max_raises << "\n";
  os << "blind_unit = " << blind_unit << "\n";
  os << "hand_size = " << hand_size << "\n";
  if (!rank_chars.empty()) os << "rank_chars = " << rank_chars << "\n";
  return os.str();
}

void GameConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("game config: " + msg); };
  if (num_ranks < 1) fail("ranks must be >= 1");
  if (num_suits < 1 || num_suits > kMaxSuits) fail("suits must be in 1..4");
  if (num_hole_cards < 1 || num_hole_cards > kMaxHoleCards) fail("hole_cards must be 1 or 2");
  if (num_rounds() > kMaxRounds) fail("too many betting rounds");
  for (int c : community_per_round)
    if (c < 0) fail("community counts must be >= 0");
  if (total_community() > kMaxBoardCards) fail("too many community cards");
  if (static_cast<int>(bet_size_per_round.size()) != num_rounds())
    fail("bets list length must equal betting rounds");
  for (int b : bet_size_per_round)
    if (b <= 0) fail("bet sizes must be > 0");
  if (ante < 1) fail("ante must be >= 1");
  if (max_raises < 1) fail("max_raises must be >= 1");
  if (blind_unit < 1) fail("blind_unit must be >= 1");
  if (hand_size != 1 && hand_size != 3) fail("hand_size must be 1 or 3");
  if (hand_size > num_hole_cards + total_community()) fail("hand_size exceeds visible cards");
  if (2 * num_hole_cards + total_community() > deck_size()) fail("total cards dealt exceed deck");
  if (!rank_chars.empty() && static_cast<int>(rank_chars.size()) != num_ranks)
    fail("rank_chars length must equal ranks");
}

GameConfig kuhn_config() {
  GameConfig g;
  g.name = "kuhn";
  g.num_ranks = 3;
  g.num_suits = 1;
  g.num_hole_cards = 1;
  g.community_per_round = {};
  g.ante = 1;
  g.bet_size_per_round = {1};
  g.max_raises = 1;
  g.blind_unit = 1;
  g.hand_size = 1;
  g.rank_chars = "JQK";
  g.validate();
  return g;
}

GameConfig numeral211_config() {
  GameConfig g;
  g.name = "numeral211";
  g.num_ranks = 10;
  g.num_suits = 4;
  g.num_hole_cards = 2;
  g.community_per_round = {1, 1};
  g.ante = 5;
  g.bet_size_per_round = {10, 20, 20};
  g.max_raises = 4;
  g.blind_unit = 5;
  g.hand_size = 3;
  g.validate();
  return g;
}

GameConfig numeral_reduced_config(int ranks) {
  GameConfig g = numeral211_config();
  g.name = "numeral" + std::to_string(ranks * 4);
  g.num_ranks = ranks;
  g.rank_chars.clear();
  g.validate();
  return g;
}

GameConfig parse_game_config(const std::string& text) {
  GameConfig g;
  bool saw_blind = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "name") g.name = val;
    else if (key == "ranks") g.num_ranks = std::stoi(val);
    else if (key == "suits") g.num_suits = std::stoi(val);
    else if (key == "hole_cards") g.num_hole_cards = std::stoi(val);
    else if (key == "community") g.community_per_round = parse_int_list(val);
    else if (key == "ante") g.ante = std::stoi(val);
    else if (key == "bets") g.bet_size_per_round = parse_int_list(val);
    else if (key == "max_raises") g.max_raises = std::stoi(val);
    else if (key == "blind_unit") { g.blind_unit = std::stoi(val); saw_blind = true; }
    else if (key == "hand_size") g.hand_size = std::stoi(val);
    else if (key == "rank_chars") g.rank_chars = val;
    else throw std::invalid_argument("unknown game config key '" + key + "'");
  }
  if (!saw_blind) g.blind_unit = g.ante;
  g.validate();
  return g;
}

GameConfig load_game_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open game config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_game_config(ss.str());
}

GameConfig resolve_game(const std::string& name_or_path) {
  if (name_or_path == "kuhn") return kuhn_config();
  if (name_or_path == "numeral211") return numeral211_config();
  if (name_or_path.rfind("numeral", 0) == 0) {
    int cards = std::stoi(name_or_path.substr(7));
    if (cards % 4 == 0 && cards >= 12 && cards <= 40) return numeral_reduced_config(cards / 4);
  }
  return load_game_config_file(name_or_path);
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace ecfr
