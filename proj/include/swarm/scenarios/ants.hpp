#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarm/core/individual.hpp"
#include "swarm/core/rng.hpp"
#include "swarm/engine/selection.hpp"
#include "swarm/env/grid_world.hpp"
#include "swarm/game/ant_payoffs.hpp"
#include "swarm/metrics/swarm_metrics.hpp"

namespace swarm::ants {

// Foraging colony on a bounded grid.  Each ant carries two contradictions:
// c1 explore/exploit (find new food vs. work the known trails) and c2
// safety/collision (keep clear of crowds vs. push through).  Laden ants
// deposit pheromone and head home; unladen ants either wander or follow
// trails outward, depending on where their c1 game lands.
struct ant_config {
  int grid = 50;
  int food_sources = 3;
  double units_per_source = 30.0;
  int ants = 60;
  double evaporation = 0.02;
  double deposit = 1.0;
  // A target cell with at least this many adjacent ants counts as a
  // collision risk when the ant is in its avoidance stance.
  int crowd_threshold = 3;
  int view_radius = 1;
  int bins = 21;
  double scarcity_threshold = 0.8;
  // Initial per-side force spread; keeps early sharpness dispersed.
  double init_force_lo = 0.5;
  double init_force_hi = 2.0;
  // Minimum Chebyshev distance from nest to any food source; 0 means grid/3.
  int min_source_distance = 0;
  forage_payoff_params payoffs{};

  void validate() const {
    if (grid < 10) throw std::invalid_argument("ant grid must be at least 10");
    if (food_sources < 1 || units_per_source < 1.0)
      throw std::invalid_argument("need at least one source with at least one unit");
    if (ants < 1) throw std::invalid_argument("need at least one ant");
    if (!(evaporation >= 0.0 && evaporation <= 1.0))
      throw std::invalid_argument("evaporation rate in [0,1]");
    if (!(init_force_lo > 0.0 && init_force_hi >= init_force_lo))
      throw std::invalid_argument("bad initial force range");
  }
};

struct ant {
  individual ind{0};
  cell pos;
  bool laden = false;
  cell picked_source;
  // Cells visited since the ant last left the nest's side (or since spawn).
  std::vector<cell> route;
};

// Route quality against the colony's discovered sources: the best ratio of
// a shortest nest-source path to the walked route, clamped to (0,1].
inline double ant_utility(const std::vector<cell>& route, const std::vector<cell>& known_sources,
                          const grid_world& world) {
  if (route.empty() || known_sources.empty()) return 0.0;
  double best = 0.0;
  for (const cell& fs : known_sources)
    best = std::max(best,
                    static_cast<double>(chebyshev(world.nest(), fs)) / route.size());
  return std::min(best, 1.0);
}

class ant_world {
 public:
  ant_world(const ant_config& cfg, std::uint64_t seed)
      : cfg_(cfg), rand_(seed), world_(cfg.grid, cfg.grid, {cfg.grid / 2, cfg.grid / 2}) {
    cfg_.validate();
    place_food();
    place_ants();
  }

  ant_world(const ant_world&) = delete;
  ant_world& operator=(const ant_world&) = delete;

  const ant_config& config() const { return cfg_; }
  const grid_world& world() const { return world_; }
  const std::vector<ant>& colony() const { return ants_; }
  const std::vector<cell>& known_sources() const { return known_sources_; }
  long step_count() const { return steps_; }

  int laden_count() const {
    int n = 0;
    for (const auto& a : ants_)
      if (a.laden) ++n;
    return n;
  }

  // picked = delivered + in transit, exactly, at every step.
  bool conservation_ok() const {
    return world_.picked_total() == world_.nest_store() + static_cast<double>(laden_count());
  }

  // Route efficiency of every currently laden ant (this step's samples).
  const std::vector<double>& laden_efficiencies() const { return laden_efficiencies_; }

  double mean_route_efficiency() const {
    if (laden_efficiencies_.empty()) return 0.0;
    double s = 0.0;
    for (double v : laden_efficiencies_) s += v;
    return s / static_cast<double>(laden_efficiencies_.size());
  }

  void step() {
    const std::size_t n = ants_.size();
    const auto order = rand_.permutation(n);

    // Phase 1: everyone decides against the same frozen world.
    std::vector<decision> decisions(n);
    for (std::size_t oi : order) decisions[oi] = decide(static_cast<int>(oi));

    // Phase 2: apply in the same seeded order; first mover wins a cell.
    for (std::size_t oi : order) apply(static_cast<int>(oi), decisions[oi]);

    world_.evaporate(cfg_.evaporation);
    refresh_crowd_forces();

    laden_efficiencies_.clear();
    for (const auto& a : ants_)
      if (a.laden) laden_efficiencies_.push_back(ant_utility(a.route, known_sources_, world_));

    ++steps_;
  }

  swarm_snapshot snapshot() const {
    swarm_snapshot snap;
    snap.step = steps_;
    for (int i = 0; i < static_cast<int>(ants_.size()); ++i) {
      snap.add(i, "c1", sharpness(ants_[i].ind.state_of("c1")));
      snap.add(i, "c2", sharpness(ants_[i].ind.state_of("c2")));
    }
    return snap;
  }

 private:
  struct decision {
    cell target;
    bool move = false;
    bool field_seen = false;
    pair_choice c1;
  };

  void place_food() {
    const int min_dist =
        cfg_.min_source_distance > 0 ? cfg_.min_source_distance : cfg_.grid / 3;
    int placed = 0;
    while (placed < cfg_.food_sources) {
      const cell c{static_cast<int>(rand_.below(static_cast<std::uint64_t>(cfg_.grid))),
                   static_cast<int>(rand_.below(static_cast<std::uint64_t>(cfg_.grid)))};
      if (chebyshev(c, world_.nest()) < min_dist) continue;
      if (world_.food_at(c) > 0.0) continue;
      world_.add_food(c, cfg_.units_per_source);
      source_cells_.push_back(c);
      ++placed;
    }
  }

  void place_ants() {
    ants_.reserve(cfg_.ants);
    int next_id = 0;
    for (int radius = 1; next_id < cfg_.ants; ++radius) {
      if (radius > cfg_.grid) throw std::invalid_argument("too many ants for the grid");
      // The ring at this Chebyshev radius around the nest, row-major, then
      // shuffled so colonies differ across seeds.
      std::vector<cell> ring;
      const cell nest = world_.nest();
      for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
          if (std::max(std::abs(dx), std::abs(dy)) != radius) continue;
          const cell c{nest.x + dx, nest.y + dy};
          if (world_.in_bounds(c)) ring.push_back(c);
        }
      rand_.shuffle(ring);
      for (const cell& c : ring) {
        if (next_id >= cfg_.ants) break;
        if (!world_.try_occupy(next_id, c)) continue;
        ants_.push_back(make_ant(next_id, c));
        ++next_id;
      }
    }
  }

  ant make_ant(int id, const cell& at) {
    ant a;
    a.pos = at;
    a.ind = individual(id);

    action_quadruple c1_actions;
    // Every c1 pair contains exactly one positive-side action, so tying the
    // cell claim to that side prices each behavior at one cell.
    c1_actions.strengthen_pos.needs = {{"cell", 1.0}};
    c1_actions.weaken_pos.needs = {{"cell", 1.0}};

    a.ind.add_contradiction({{"c1", "explore", "exploit"},
                             rand_.uniform(cfg_.init_force_lo, cfg_.init_force_hi),
                             rand_.uniform(cfg_.init_force_lo, cfg_.init_force_hi)},
                            c1_actions);
    a.ind.add_contradiction({{"c2", "safety", "collision"},
                             rand_.uniform(cfg_.init_force_lo, cfg_.init_force_hi),
                             rand_.uniform(cfg_.init_force_lo, cfg_.init_force_hi)});
    a.ind.set_utility([this, id](const individual&) {
      const ant& self = ants_[static_cast<std::size_t>(id)];
      return ant_utility(self.route, known_sources_, world_);
    });
    return a;
  }

  // Occupied cells adjacent to `c`, ignoring the moving ant's own cell.
  int crowding(const cell& c, const cell& self_pos) const {
    int n = 0;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const cell nb{c.x + dx, c.y + dy};
        if (!world_.in_bounds(nb) || nb == self_pos) continue;
        if (world_.occupant_at(nb) != -1) ++n;
      }
    return n;
  }

  // Crowding game for c2: avoiding pays in proportion to how full the
  // neighborhood is, pushing in pays in proportion to how empty.
  static game_2x2 crowd_game(double occupied_fraction) {
    game_2x2 g;
    const double w = occupied_fraction;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        g.cells[r][c].pos = (r == 0) ? w : 1.0 - w;
        g.cells[r][c].neg = (c == 0) ? 1.0 - w : w;
      }
    return g;
  }

  decision decide(int i) {
    ant& a = ants_[static_cast<std::size_t>(i)];
    decision d{a.pos, false, false, {}};

    const auto view = neighborhood(world_, a.pos, cfg_.view_radius, [this](int id) {
      const ant& other = ants_[static_cast<std::size_t>(id)];
      return std::map<std::string, double>{{"c1", sharpness(other.ind.state_of("c1"))},
                                           {"c2", sharpness(other.ind.state_of("c2"))}};
    });
    if (view.cells.empty()) return d;

    static const interaction_binding bindings[] = {
        {"c2", "cell", interaction_trigger::neighbors_present},
        {"c1", "pheromone", interaction_trigger::field_signal},
    };
    const auto contexts = build_interactions(view, i, bindings);
    d.field_seen = view.max_pheromone() > 0.0;

    const double occupied = static_cast<double>(view.occupied_cells());
    const double capacity = static_cast<double>(view.cells.size());
    const std::vector<game_2x2> games{
        ant_forage_payoffs({view.pheromone_levels()}, cfg_.payoffs),
        crowd_game(occupied / capacity)};
    const std::vector<resource_claim> claims{{"cell", occupied, capacity}};

    // Collision avoidance outranks foraging whenever the ant is laden or a
    // trail is in view; pure search otherwise.
    a.ind.importance().clear();
    if (a.laden || view.max_pheromone() > 0.0)
      a.ind.importance().declare("c2", "c1");
    else
      a.ind.importance().declare("c1", "c2");

    const potential_policy policy{cfg_.scarcity_threshold, cfg_.bins};
    const selection_result sel =
        select_with_potential(a.ind, games, claims, contexts, policy, rand_);
    d.c1 = sel.chosen.pairs[0];
    if (sel.infeasible_fallback) return d;  // boxed in: stay put

    d.target = resolve_move(a, view, sel.chosen);
    d.move = !(d.target == a.pos);
    return d;
  }

  cell resolve_move(const ant& a, const neighborhood_view& view, const behavior& chosen) {
    const pair_choice c1 = chosen.pairs[0];
    const pair_choice c2 = chosen.pairs[1];
    const cell nest = world_.nest();
    const int here = chebyshev(a.pos, nest);

    const bool trail_walking = c1.pos == strategy_choice::cooperate;
    const bool toward_high = c1.neg == strategy_choice::compete;
    // Avoidance stance: strengthened safety side plus c2 outranking c1
    // drops risky targets when an alternative exists.
    const bool avoid = c2.pos == strategy_choice::compete &&
                       a.ind.importance().prefers("c2", "c1");

    const auto keep_calm = [&](std::vector<viewed_cell>& cells) {
      if (!avoid) return;
      std::vector<viewed_cell> calm;
      for (const auto& vc : cells)
        if (crowding(vc.pos, a.pos) < cfg_.crowd_threshold) calm.push_back(vc);
      if (!calm.empty()) cells = calm;
    };
    // Strongest (or, when the exploit side yields, weakest) pheromone; ties
    // prefer outward progress, then calmer ground in avoidance stance.
    const auto marked = [&](const std::vector<viewed_cell>& cells) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < cells.size(); ++k) {
        const double delta = cells[k].pheromone - cells[best].pheromone;
        if ((toward_high && delta > 0.0) || (!toward_high && delta < 0.0)) {
          best = k;
        } else if (delta == 0.0) {
          const int gain_k = chebyshev(cells[k].pos, nest);
          const int gain_b = chebyshev(cells[best].pos, nest);
          if (gain_k > gain_b)
            best = k;
          else if (gain_k == gain_b && avoid &&
                   crowding(cells[k].pos, a.pos) < crowding(cells[best].pos, a.pos))
            best = k;
        }
      }
      return best;
    };

    // Food in sight beats everything for an empty-handed ant.
    if (!a.laden) {
      const viewed_cell* meal = nullptr;
      for (const auto& vc : view.cells)
        if (vc.occupant == -1 && vc.food > 0.0 && (meal == nullptr || vc.food > meal->food))
          meal = &vc;
      if (meal != nullptr) return meal->pos;
    }

    // Outbound trail walk keeps the trail's outward direction so the
    // shuttle runs nest -> source -> nest.  The marked cell ahead may be
    // taken; queueing on the spot keeps the walked route tight, so this
    // branch looks at occupied cells too and waits when the pick is taken.
    if (trail_walking && !a.laden) {
      std::vector<viewed_cell> ahead;
      for (const auto& vc : view.cells)
        if (chebyshev(vc.pos, nest) >= here) ahead.push_back(vc);
      keep_calm(ahead);
      if (!ahead.empty()) {
        const viewed_cell& pick = ahead[marked(ahead)];
        return pick.occupant == -1 ? pick.pos : a.pos;
      }
    }

    // Free cells only from here on; aiming at a standing ant wastes the
    // step.  Laden ants work toward the nest.
    std::vector<viewed_cell> open;
    for (const auto& vc : view.cells)
      if (vc.occupant == -1) open.push_back(vc);
    if (open.empty()) return a.pos;

    std::vector<viewed_cell> pool;
    if (a.laden) {
      for (const auto& vc : open)
        if (chebyshev(vc.pos, nest) < here) pool.push_back(vc);
      if (pool.empty())
        for (const auto& vc : open)
          if (chebyshev(vc.pos, nest) == here) pool.push_back(vc);
    }
    if (pool.empty()) pool = open;
    keep_calm(pool);

    if (trail_walking) return pool[marked(pool)].pos;  // laden: trail home
    return pool[static_cast<std::size_t>(rand_.below(pool.size()))].pos;
  }

  void apply(int i, const decision& d) {
    ant& a = ants_[static_cast<std::size_t>(i)];

    bool moved = false;
    if (d.move) {
      moved = world_.move_agent(i, a.pos, d.target);
      if (moved) {
        a.pos = d.target;
        // The return leg is not part of the walk under judgment, and a
        // visit home re-anchors the next walk.
        if (!a.laden) a.route.push_back(d.target);
      }
    }
    if (!a.laden && chebyshev(a.pos, world_.nest()) <= 1) a.route.clear();

    // The c1 forces move only when the step was won and a trail was in
    // view; unmarked ground teaches nothing about explore versus exploit.
    if (moved && d.field_seen) {
      const claimed_resources granted{{{"cell", 1.0}}};
      apply_action(a.ind, "c1", d.c1.pos_action(), granted);
      apply_action(a.ind, "c1", d.c1.neg_action(), granted);
    }

    if (a.laden) {
      world_.deposit_pheromone(a.pos, cfg_.deposit);
      if (chebyshev(a.pos, world_.nest()) <= 1) {
        world_.deliver_to_nest(1.0);
        a.laden = false;
        a.route.clear();  // next walk starts from the nest's side
      }
    } else if (world_.food_at(a.pos) >= 1.0 && world_.take_food(a.pos, 1.0)) {
      a.laden = true;
      a.picked_source = a.pos;
      // Mark the source itself so trails reach all the way to the food.
      world_.deposit_pheromone(a.pos, cfg_.deposit);
      if (std::find(known_sources_.begin(), known_sources_.end(), a.pos) ==
          known_sources_.end())
        known_sources_.push_back(a.pos);
    }
  }

  // c2 forces track how boxed in each ant currently is.
  void refresh_crowd_forces() {
    for (auto& a : ants_) {
      const int n = crowding(a.pos, a.pos);
      a.ind.set_forces("c2", 1.0 + (8.0 - n), 1.0 + n);
    }
  }

  ant_config cfg_;
  rng rand_;
  grid_world world_;
  std::vector<ant> ants_;
  std::vector<cell> source_cells_;
  std::vector<cell> known_sources_;
  std::vector<double> laden_efficiencies_;
  long steps_ = 0;
};

}  // namespace swarm::ants
