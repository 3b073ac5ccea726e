#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace actfloor {

enum class Outcome { AWins, BWins, Draw };

/// Score credited to player A: win 1, loss 0, draw 0.5.
double score_of(Outcome o);

/// Expected scores (e_a, e_b) with e_b = 1 - e_a.
std::pair<double, double> elo_expected(double rating_a, double rating_b);

struct EloMatch {
  std::string player_a;
  std::string player_b;
  Outcome outcome = Outcome::Draw;
  double delta_a = 0.0;  // delta_b is always -delta_a
};

/// Ratings are value-in/value-out: elo_update returns a new table.
struct EloTable {
  double k_factor = 84.0;  // two players x 42
  double initial_rating = 1000.0;
  std::map<std::string, double> ratings;
  std::vector<EloMatch> history;

  bool has(const std::string& player) const { return ratings.contains(player); }
  double rating(const std::string& player) const;
  /// Registers a player at the initial rating; no-op for known players.
  EloTable with_player(const std::string& player) const;
};

/// Throws UnknownPlayer unless both players are registered. Takes the table
/// by value; move it in when applying a long match log.
EloTable elo_update(EloTable table, const std::string& a, const std::string& b, Outcome outcome);

}  // namespace actfloor
