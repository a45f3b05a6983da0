#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarm/engine/selection.hpp"
#include "swarm/env/resource.hpp"

namespace swarm {

// Pheromone below this level evaporates to exactly zero, so abandoned
// trails disappear instead of lingering as denormals.
inline constexpr double k_pheromone_floor = 1e-6;

struct cell {
  int x = 0;
  int y = 0;
  bool operator==(const cell& o) const { return x == o.x && y == o.y; }
  bool operator<(const cell& o) const { return x != o.x ? x < o.x : y < o.y; }
};

// Moves on the grid are 8-connected, so the shortest path length between
// two cells (no obstacles) is the Chebyshev distance.
inline int chebyshev(const cell& a, const cell& b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

// ---------------------------------------------------------------------------
// A bounded grid with exclusive cell occupancy, consumable food stocks, a
// shared pheromone field and a nest that swallows deliveries.  The nest
// cell itself is terrain: agents walk around it, never onto it.
// ---------------------------------------------------------------------------
class grid_world {
 public:
  grid_world(int width, int height, cell nest)
      : width_(width), height_(height), nest_(nest) {
    if (width < 2 || height < 2) throw std::invalid_argument("grid too small");
    if (!in_bounds(nest)) throw std::invalid_argument("nest outside the grid");
    occupant_.assign(static_cast<std::size_t>(width) * height, -1);
    food_.assign(occupant_.size(), 0.0);
    pheromone_.assign(occupant_.size(), 0.0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  const cell& nest() const { return nest_; }

  bool in_bounds(const cell& c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }

  int occupant_at(const cell& c) const { return occupant_[index(c)]; }
  double food_at(const cell& c) const { return food_[index(c)]; }
  double pheromone_at(const cell& c) const { return pheromone_[index(c)]; }

  // --- exclusive occupancy ---------------------------------------------
  bool try_occupy(int agent, const cell& c) {
    if (!in_bounds(c) || c == nest_) return false;
    int& slot = occupant_[index(c)];
    if (slot != -1 && slot != agent) return false;
    slot = agent;
    return true;
  }

  void vacate(const cell& c) { occupant_[index(c)] = -1; }

  // Atomic move; on a refused destination the origin stays occupied.
  bool move_agent(int agent, const cell& from, const cell& to) {
    if (occupant_[index(from)] != agent)
      throw std::invalid_argument("agent is not where the move starts");
    if (from == to) return true;
    if (!try_occupy(agent, to)) return false;
    occupant_[index(from)] = -1;
    return true;
  }

  // --- consumable food ---------------------------------------------------
  void add_food(const cell& c, double qty) { food_[index(c)] += qty; }

  bool take_food(const cell& c, double qty = 1.0) {
    double& stock = food_[index(c)];
    if (stock < qty) return false;
    stock -= qty;
    picked_total_ += qty;
    return true;
  }

  // --- shared sinks and fields -------------------------------------------
  void deliver_to_nest(double qty) { nest_store_ += qty; }
  double nest_store() const { return nest_store_; }
  double picked_total() const { return picked_total_; }
  double remaining_food() const {
    double total = 0.0;
    for (double f : food_) total += f;
    return total;
  }

  void deposit_pheromone(const cell& c, double amount) { pheromone_[index(c)] += amount; }

  void evaporate(double rate) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("evaporation rate in [0,1]");
    for (double& level : pheromone_) {
      level *= (1.0 - rate);
      if (level < k_pheromone_floor) level = 0.0;
    }
  }

  // --- taxonomy-driven claims ---------------------------------------------
  // Exclusive renewables are cell occupancy, exclusive consumables are
  // stock decrements, shared resources are granted without any change.
  bool claim(int agent, const resource_spec& spec, const cell& where, double qty = 1.0) {
    if (spec.access == resource_access::shared) return true;
    if (spec.lifecycle == resource_lifecycle::consumable) return take_food(where, qty);
    return try_occupy(agent, where);
  }

 private:
  std::size_t index(const cell& c) const {
    if (!in_bounds(c)) throw std::out_of_range("cell outside the grid");
    return static_cast<std::size_t>(c.y) * width_ + c.x;
  }

  int width_;
  int height_;
  cell nest_;
  std::vector<int> occupant_;
  std::vector<double> food_;
  std::vector<double> pheromone_;
  double nest_store_ = 0.0;
  double picked_total_ = 0.0;
};

// ---------------------------------------------------------------------------
// Local views and interactions.
// ---------------------------------------------------------------------------
struct viewed_cell {
  cell pos;
  int occupant = -1;
  double pheromone = 0.0;
  double food = 0.0;
};

struct neighbor_agent {
  int id = -1;
  cell pos;
  std::map<std::string, double> lambdas;  // sharpness per contradiction
};

struct neighborhood_view {
  cell center;
  int radius = 1;
  std::vector<viewed_cell> cells;  // ring around the center, row-major, nest excluded
  std::vector<neighbor_agent> agents;

  std::vector<double> pheromone_levels() const {
    std::vector<double> out;
    out.reserve(cells.size());
    for (const auto& vc : cells) out.push_back(vc.pheromone);
    return out;
  }
  double max_pheromone() const {
    double m = 0.0;
    for (const auto& vc : cells) m = std::max(m, vc.pheromone);
    return m;
  }
  int occupied_cells() const {
    int n = 0;
    for (const auto& vc : cells)
      if (vc.occupant != -1) ++n;
    return n;
  }
};

// Snapshot of the Moore neighborhood around `center`.  The optional lookup
// supplies each visible agent's sharpness so interaction contexts can carry
// the local distribution.
inline neighborhood_view neighborhood(
    const grid_world& world, const cell& center, int radius = 1,
    const std::function<std::map<std::string, double>(int)>& lambda_lookup = {}) {
  if (radius < 1) throw std::invalid_argument("radius must be at least 1");
  neighborhood_view view;
  view.center = center;
  view.radius = radius;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const cell c{center.x + dx, center.y + dy};
      if (!world.in_bounds(c) || c == world.nest()) continue;
      viewed_cell vc{c, world.occupant_at(c), world.pheromone_at(c), world.food_at(c)};
      view.cells.push_back(vc);
      if (vc.occupant != -1) {
        neighbor_agent na;
        na.id = vc.occupant;
        na.pos = c;
        if (lambda_lookup) na.lambdas = lambda_lookup(vc.occupant);
        view.agents.push_back(na);
      }
    }
  }
  return view;
}

// What turns a (contradiction, resource) pair into a live interaction.
enum class interaction_trigger { neighbors_present, field_signal };

struct interaction_binding {
  std::string contradiction;
  std::string resource;
  interaction_trigger trigger = interaction_trigger::neighbors_present;
};

// One interaction context per binding whose trigger fires in the view.
// Contexts carry the neighborhood's sharpness on the focal contradiction,
// taken from every visible agent that reports one.
inline std::vector<interaction_context> build_interactions(
    const neighborhood_view& view, int self, std::span<const interaction_binding> bindings) {
  std::vector<interaction_context> out;
  for (const auto& binding : bindings) {
    const bool fires = binding.trigger == interaction_trigger::neighbors_present
                           ? !view.agents.empty()
                           : view.max_pheromone() > 0.0;
    if (!fires) continue;
    interaction_context ctx;
    ctx.focal_contradiction = binding.contradiction;
    ctx.contested.push_back(binding.resource);
    ctx.participants.push_back(self);
    for (const auto& agent : view.agents) {
      ctx.participants.push_back(agent.id);
      auto it = agent.lambdas.find(binding.contradiction);
      if (it != agent.lambdas.end()) ctx.neighbor_lambdas.push_back(it->second);
    }
    out.push_back(std::move(ctx));
  }
  return out;
}

}  // namespace swarm
