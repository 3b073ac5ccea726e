#include "actfloor/elo.hpp"

#include <cmath>

#include "actfloor/error.hpp"

namespace actfloor {

double score_of(Outcome o) {
  switch (o) {
    case Outcome::AWins: return 1.0;
    case Outcome::BWins: return 0.0;
    case Outcome::Draw: return 0.5;
  }
  return 0.5;
}

std::pair<double, double> elo_expected(double rating_a, double rating_b) {
  if (!std::isfinite(rating_a) || !std::isfinite(rating_b))
    fail(ErrorCode::NonFiniteInput, "Elo ratings must be finite");
  const double e_a = 1.0 / (1.0 + std::pow(10.0, (rating_b - rating_a) / 400.0));
  return {e_a, 1.0 - e_a};
}

double EloTable::rating(const std::string& player) const {
  const auto it = ratings.find(player);
  if (it == ratings.end()) fail(ErrorCode::UnknownPlayer, "unknown player '" + player + "'");
  return it->second;
}

EloTable EloTable::with_player(const std::string& player) const {
  EloTable out = *this;
  out.ratings.try_emplace(player, initial_rating);
  return out;
}

EloTable elo_update(EloTable table, const std::string& a, const std::string& b, Outcome outcome) {
  if (!(table.k_factor > 0.0)) fail(ErrorCode::InvalidArgument, "k_factor must be positive");
  if (a == b) fail(ErrorCode::InvalidArgument, "a player cannot play against itself");
  const double ra = table.rating(a);
  const double rb = table.rating(b);
  const auto [e_a, e_b] = elo_expected(ra, rb);
  (void)e_b;
  const double delta = table.k_factor * (score_of(outcome) - e_a);

  table.ratings[a] = ra + delta;
  table.ratings[b] = rb - delta;
  table.history.push_back({a, b, outcome, delta});
  return table;
}

}  // namespace actfloor
