#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarm/core/rng.hpp"
#include "swarm/game/game.hpp"
#include "swarm/metrics/swarm_metrics.hpp"

namespace swarm::pd {

// Population of agents scattered on a grid, each carrying one
// contradiction between the will to cooperate and the will to defect,
// expressed as an integer intention.  Every round each agent plays one
// prisoner's dilemma with every adjacent agent, then nudges its intention
// by comparing cooperation's whole track record (realized plus foregone
// payoffs) against defection's, or by siding with the local majority.
struct pd_config {
  int grid = 100;
  int population = 1000;
  bool mobility = false;
  int intention_max = 10;  // intention clamps to [-intention_max, intention_max]
  int init_lo = -3;        // initial intention range, inclusive
  int init_hi = 3;
  // Interaction and migration adjacency: all eight surrounding cells, or
  // only the four orthogonal ones.
  std::string neighborhood = "moore";

  // Payoff table, (row = own action, col = opponent action).
  double both_defect = 1.0;
  double defect_vs_coop = 5.0;
  double coop_vs_defect = 0.0;
  double both_coop = 3.0;

  void validate() const {
    if (grid < 2) throw std::invalid_argument("grid too small");
    if (population < 1 || population > grid * grid)
      throw std::invalid_argument("population must fit on the grid");
    if (intention_max < 1) throw std::invalid_argument("intention_max must be positive");
    if (init_lo > init_hi || init_lo < -intention_max || init_hi > intention_max)
      throw std::invalid_argument("bad initial intention range");
    if (neighborhood != "moore" && neighborhood != "von_neumann")
      throw std::invalid_argument("neighborhood must be moore or von_neumann");
  }
};

// The dilemma as a 2x2 game in compete/cooperate form: compete = defect
// (strengthen one's own case), cooperate = hold out together.
inline game_2x2 dilemma_game(const pd_config& cfg = {}) {
  game_2x2 g;
  g.cells[0][0] = {cfg.both_defect, cfg.both_defect};
  g.cells[0][1] = {cfg.defect_vs_coop, cfg.coop_vs_defect};
  g.cells[1][0] = {cfg.coop_vs_defect, cfg.defect_vs_coop};
  g.cells[1][1] = {cfg.both_coop, cfg.both_coop};
  return g;
}

struct pd_agent {
  int intention = 0;
  int x = 0;
  int y = 0;
  // Cumulative payoff bookkeeping, never decayed: realized while
  // cooperating / defecting, and the foregone payoff of the opposite
  // action under the same opponents.
  double gain_coop = 0.0;
  double gain_defect = 0.0;
  double regret_coop = 0.0;   // what cooperating would have paid when it defected
  double regret_defect = 0.0; // what defecting would have paid when it cooperated

  bool cooperates() const { return intention > 0; }
  // Neutral intention still counts as willing when neighbors take stock
  // of the local mood.
  bool willing() const { return intention >= 0; }
};

// One intention update, exposed for direct testing: +1 when cooperation's
// track record wins or the willing locally outnumber the unwilling.
inline int intention_shift(double gain_coop, double regret_defect, double gain_defect,
                           double regret_coop, int willing_neighbors, int unwilling_neighbors) {
  const bool record_favors_coop = gain_coop + regret_defect > gain_defect + regret_coop;
  const bool crowd_favors_coop = willing_neighbors > unwilling_neighbors;
  return (record_favors_coop || crowd_favors_coop) ? 1 : -1;
}

class pd_world {
 public:
  pd_world(const pd_config& cfg, std::uint64_t seed) : cfg_(cfg), rand_(seed) {
    cfg_.validate();
    moore_ = cfg_.neighborhood == "moore";
    occupant_.assign(static_cast<std::size_t>(cfg_.grid) * cfg_.grid, -1);
    agents_.reserve(cfg_.population);
    for (int i = 0; i < cfg_.population; ++i) {
      pd_agent a;
      a.intention = static_cast<int>(rand_.uniform_int(cfg_.init_lo, cfg_.init_hi));
      // Rejection sampling onto a free cell.
      for (;;) {
        const int x = static_cast<int>(rand_.below(static_cast<std::uint64_t>(cfg_.grid)));
        const int y = static_cast<int>(rand_.below(static_cast<std::uint64_t>(cfg_.grid)));
        if (occupant_[index(x, y)] == -1) {
          a.x = x;
          a.y = y;
          occupant_[index(x, y)] = i;
          break;
        }
      }
      agents_.push_back(a);
    }
  }

  const pd_config& config() const { return cfg_; }
  const std::vector<pd_agent>& agents() const { return agents_; }
  long round_count() const { return rounds_; }

  double cooperation_fraction() const {
    int n = 0;
    for (const auto& a : agents_)
      if (a.cooperates()) ++n;
    return static_cast<double>(n) / static_cast<double>(agents_.size());
  }

  void round() {
    const int n = static_cast<int>(agents_.size());

    // Actions and willingness are frozen for the whole round.
    std::vector<char> coop(n), willing(n);
    for (int i = 0; i < n; ++i) {
      coop[i] = agents_[i].cooperates();
      willing[i] = agents_[i].willing();
    }

    const auto pay = [&](bool own_coop, bool other_coop) {
      if (own_coop) return other_coop ? cfg_.both_coop : cfg_.coop_vs_defect;
      return other_coop ? cfg_.defect_vs_coop : cfg_.both_defect;
    };

    std::vector<int> shift(n, 0);
    for (int i = 0; i < n; ++i) {
      pd_agent& a = agents_[i];
      int willing_n = 0, unwilling_n = 0, neighbors = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!moore_ && dx != 0 && dy != 0) continue;
          const int x = a.x + dx, y = a.y + dy;
          if (x < 0 || x >= cfg_.grid || y < 0 || y >= cfg_.grid) continue;
          const int j = occupant_[index(x, y)];
          if (j == -1) continue;
          ++neighbors;
          (willing[j] ? willing_n : unwilling_n) += 1;
          const double realized = pay(coop[i], coop[j]);
          const double foregone = pay(!coop[i], coop[j]);
          if (coop[i]) {
            a.gain_coop += realized;
            a.regret_defect += foregone;
          } else {
            a.gain_defect += realized;
            a.regret_coop += foregone;
          }
        }
      }
      // No encounter, no update.
      if (neighbors > 0)
        shift[i] = intention_shift(a.gain_coop, a.regret_defect, a.gain_defect, a.regret_coop,
                                   willing_n, unwilling_n);
    }

    for (int i = 0; i < n; ++i)
      agents_[i].intention =
          std::clamp(agents_[i].intention + shift[i], -cfg_.intention_max, cfg_.intention_max);

    if (cfg_.mobility) migrate();
    ++rounds_;
  }

  // Sharpness of the cooperation contradiction: intention over its bound.
  swarm_snapshot snapshot() const {
    swarm_snapshot snap;
    snap.step = rounds_;
    for (int i = 0; i < static_cast<int>(agents_.size()); ++i)
      snap.add(i, "cooperation",
               static_cast<double>(agents_[i].intention) / cfg_.intention_max);
    return snap;
  }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * cfg_.grid + x;
  }

  // Each agent hops to a uniformly drawn free adjacent cell; agents move
  // one at a time in a seeded order, so the first claim wins.
  void migrate() {
    const auto order = rand_.permutation(agents_.size());
    std::array<int, 8> free_x{}, free_y{};
    for (std::size_t oi : order) {
      pd_agent& a = agents_[oi];
      int options = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!moore_ && dx != 0 && dy != 0) continue;
          const int x = a.x + dx, y = a.y + dy;
          if (x < 0 || x >= cfg_.grid || y < 0 || y >= cfg_.grid) continue;
          if (occupant_[index(x, y)] != -1) continue;
          free_x[options] = x;
          free_y[options] = y;
          ++options;
        }
      }
      if (options == 0) continue;
      const int pick = static_cast<int>(rand_.below(static_cast<std::uint64_t>(options)));
      occupant_[index(a.x, a.y)] = -1;
      a.x = free_x[pick];
      a.y = free_y[pick];
      occupant_[index(a.x, a.y)] = static_cast<int>(oi);
    }
  }

  pd_config cfg_;
  rng rand_;
  bool moore_ = true;
  std::vector<pd_agent> agents_;
  std::vector<int> occupant_;
  long rounds_ = 0;
};

}  // namespace swarm::pd
