#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "swarm/game/game.hpp"

namespace swarm {

// Pheromone levels of the candidate cells an ant can currently see.
struct pheromone_context {
  std::vector<double> concentrations;
};

struct forage_payoff_params {
  // Concentration (after saturation to [0,1)) below which a trail counts
  // as stale: moving onto it makes finding the old food source less likely.
  double stale_threshold = 0.1;
  // Steepness of the logistic response to concentration.
  double gain = 6.0;
  // Scale of the exploration payoff (random walk finding a new source).
  double explore_gain = 0.5;
  // Scale of the trail payoff (a strong trail transports the ant to the
  // active frontier, where branching off still finds new cells).
  double follow_gain = 0.5;
};

// Payoff matrix of the explore/exploit contradiction, built from local
// pheromone.  Row player is the explore side (compete = random walk,
// cooperate = walk the trail); column player is the exploit side (compete
// = step toward high concentration, cooperate = toward low).  Payoffs are
// probability shifts: the explore side scores the change in the chance of
// finding a new food source, the exploit side the change in the chance of
// reaching the already known one.
inline game_2x2 ant_forage_payoffs(const pheromone_context& ctx,
                                   const forage_payoff_params& params = {}) {
  game_2x2 g;  // zero payoffs when there is nothing to sense
  if (ctx.concentrations.empty()) return g;

  const double raw_hi =
      *std::max_element(ctx.concentrations.begin(), ctx.concentrations.end());
  const double raw_lo =
      *std::min_element(ctx.concentrations.begin(), ctx.concentrations.end());

  double dp_new_random = params.explore_gain;
  double dp_new_follow = 0.0;
  double dp_old_high = 0.0;
  double dp_old_low = 0.0;

  if (raw_hi > 0.0) {
    // Saturating normalization into [0,1).
    const double hi = raw_hi / (raw_hi + 1.0);
    const double lo = raw_lo / (raw_lo + 1.0);
    const auto logistic = [&](double x) { return 1.0 / (1.0 + std::exp(-params.gain * x)); };
    // Rescaled to (-1,1): negative below the staleness threshold.
    dp_old_high = 2.0 * logistic(hi - params.stale_threshold) - 1.0;
    dp_old_low = 2.0 * logistic(lo - params.stale_threshold) - 1.0;
    // Well-marked ground is already mapped; random walking there finds
    // little, while following a strong trail pays.
    dp_new_random = params.explore_gain * (1.0 - hi);
    dp_new_follow = params.follow_gain * hi;
  }

  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      g.cells[r][c].pos = (r == 0) ? dp_new_random : dp_new_follow;
      g.cells[r][c].neg = (c == 0) ? dp_old_high : dp_old_low;
    }
  }
  return g;
}

}  // namespace swarm
