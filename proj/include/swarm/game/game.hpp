#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "swarm/core/error.hpp"

namespace swarm {

// The two sides of a contradiction face each other in a 2x2 game.
// Competing strengthens the player's own side; cooperating weakens it.
enum class strategy_choice { compete = 0, cooperate = 1 };

struct payoff {
  double pos = 0.0;  // payoff of the positive side
  double neg = 0.0;  // payoff of the negative side
};

// cells[row][col]: row is the positive side's choice, col the negative
// side's, index 0 = compete, 1 = cooperate.
struct game_2x2 {
  std::array<std::array<payoff, 2>, 2> cells{};

  const payoff& at(strategy_choice pos_choice, strategy_choice neg_choice) const {
    return cells[static_cast<int>(pos_choice)][static_cast<int>(neg_choice)];
  }
};

using strategy_pair = std::pair<strategy_choice, strategy_choice>;

// Mixed profile: probability each side plays compete.  `degenerate` marks
// the uniform fallback used when the indifference system has no valid
// solution.
struct mixed_strategy {
  double p_pos_compete = 0.5;
  double p_neg_compete = 0.5;
  bool degenerate = false;
};

// Every pure equilibrium, in row-major cell order.  Ties count: a cell is
// an equilibrium whenever neither side gains by a unilateral deviation.
inline std::vector<strategy_pair> pure_nash(const game_2x2& g) {
  std::vector<strategy_pair> out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const bool pos_ok = g.cells[r][c].pos >= g.cells[1 - r][c].pos;
      const bool neg_ok = g.cells[r][c].neg >= g.cells[r][1 - c].neg;
      if (pos_ok && neg_ok)
        out.emplace_back(static_cast<strategy_choice>(r), static_cast<strategy_choice>(c));
    }
  }
  return out;
}

// Mixed equilibrium via the usual indifference conditions.  Intended for
// games without a pure equilibrium; a degenerate system (denominator ~ 0
// or probabilities escaping [0,1]) falls back to uniform play with the
// degenerate flag set rather than failing the run.
inline mixed_strategy mixed_nash(const game_2x2& g) {
  const double p00 = g.cells[0][0].pos, p01 = g.cells[0][1].pos;
  const double p10 = g.cells[1][0].pos, p11 = g.cells[1][1].pos;
  const double n00 = g.cells[0][0].neg, n01 = g.cells[0][1].neg;
  const double n10 = g.cells[1][0].neg, n11 = g.cells[1][1].neg;

  // p makes the negative side indifferent, q the positive side.
  const double denom_p = n00 - n01 - n10 + n11;
  const double denom_q = p00 - p10 - p01 + p11;

  mixed_strategy m;
  constexpr double eps = 1e-12;
  if (std::abs(denom_p) < eps || std::abs(denom_q) < eps) {
    m.degenerate = true;
    return m;
  }
  const double p = (n11 - n10) / denom_p;
  const double q = (p11 - p01) / denom_q;
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    m.degenerate = true;
    return m;
  }
  m.p_pos_compete = p;
  m.p_neg_compete = q;
  return m;
}

// Equilibrium summary used by the behavior layer: the admissible pure
// pairs, or a mixed profile when no pure equilibrium exists.
struct equilibrium_result {
  std::vector<strategy_pair> pure;
  std::optional<mixed_strategy> mixed;
};

inline equilibrium_result solve(const game_2x2& g) {
  equilibrium_result r;
  r.pure = pure_nash(g);
  if (r.pure.empty()) r.mixed = mixed_nash(g);
  return r;
}

}  // namespace swarm
