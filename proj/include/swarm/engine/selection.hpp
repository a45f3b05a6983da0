#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "swarm/core/rng.hpp"
#include "swarm/engine/behavior.hpp"
#include "swarm/game/game.hpp"
#include "swarm/metrics/swarm_metrics.hpp"

namespace swarm {

// One contested resource: how much of it is already claimed around the
// agent and how much exists at all.
struct resource_claim {
  std::string resource;
  double claimed = 0.0;   // |e|
  double capacity = 0.0;  // e_max
};

// One interaction: a focal contradiction, who is involved, which resources
// are contested, and the sharpness the neighborhood currently shows on the
// focal contradiction.
struct interaction_context {
  std::string focal_contradiction;
  std::vector<int> participants;
  std::vector<std::string> contested;
  std::vector<double> neighbor_lambdas;
};

struct potential_policy {
  double scarcity_threshold = 0.8;  // claimed fraction at which the agent deviates
  int bins = 21;
};

// Optional hook run on the predicted copy so scenario physics can feed the
// utility evaluation (e.g. the gap a goose would fly at after the move).
using property_predictor = std::function<void(individual&, const behavior&)>;

struct selection_result {
  behavior chosen;
  bool used_mixed_draw = false;      // some game had no pure equilibrium
  bool infeasible_fallback = false;  // all equilibrium behaviors over capacity
  bool potential_skipped = false;    // no usable neighborhood distribution
};

namespace detail {

inline void validate_claims(const std::vector<resource_claim>& claims) {
  for (const auto& c : claims) {
    if (!(c.capacity > 0.0))
      throw std::invalid_argument("resource capacity must be positive: " + c.resource);
    if (c.claimed < 0.0 || c.claimed > c.capacity)
      throw std::invalid_argument("claimed amount outside [0, capacity]: " + c.resource);
  }
}

// Total quantity of each resource the behavior's actions would need.
inline std::map<std::string, double> behavior_needs(const individual& ind, const behavior& b) {
  std::map<std::string, double> needs;
  const auto& gamma = ind.contradictions();
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const auto& quad = ind.actions_of(gamma[i].id.name);
    for (const action_spec* spec : {&quad.get(b.pairs[i].pos_action()),
                                    &quad.get(b.pairs[i].neg_action())})
      for (const auto& need : spec->needs) needs[need.resource] += need.quantity;
  }
  return needs;
}

enum class selection_mode { isolated, in_swarm, with_potential };

inline selection_result select(const individual& ind, const std::vector<game_2x2>& games,
                               const std::vector<resource_claim>& claims,
                               const std::vector<interaction_context>& contexts,
                               const potential_policy& policy, selection_mode mode, rng& rand,
                               const property_predictor& predict = {}) {
  const auto& gamma = ind.contradictions();
  if (games.size() != gamma.size())
    throw std::invalid_argument("one game per contradiction required");
  if (gamma.size() > k_max_enumerable_contradictions)
    throw std::length_error("behavior space too large: 4^" + std::to_string(gamma.size()));
  validate_claims(claims);

  selection_result result;

  // Equilibrium filter: the admissible pairs of each contradiction.  A
  // game without pure equilibria contributes the one pure pair realized
  // from its mixed profile by a seeded draw.
  std::vector<std::vector<pair_choice>> admissible(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const equilibrium_result eq = solve(games[i]);
    if (!eq.pure.empty()) {
      for (const auto& [p, n] : eq.pure) admissible[i].push_back({p, n});
    } else {
      const mixed_strategy& m = *eq.mixed;
      pair_choice realized;
      realized.pos = rand.bernoulli(m.p_pos_compete) ? strategy_choice::compete
                                                     : strategy_choice::cooperate;
      realized.neg = rand.bernoulli(m.p_neg_compete) ? strategy_choice::compete
                                                     : strategy_choice::cooperate;
      admissible[i].push_back(realized);
      result.used_mixed_draw = true;
    }
  }

  // Cartesian product of the admissible pairs, first contradiction most
  // significant, pairs in their equilibrium enumeration order.
  std::vector<behavior> candidates;
  behavior scratch;
  scratch.pairs.resize(gamma.size());
  const std::function<void(std::size_t)> expand = [&](std::size_t level) {
    if (level == gamma.size()) {
      candidates.push_back(scratch);
      return;
    }
    for (const auto& pc : admissible[level]) {
      scratch.pairs[level] = pc;
      expand(level + 1);
    }
  };
  expand(0);

  // Feasibility: a behavior fits if its needs still fit beside what is
  // already claimed.  Resources not listed as contested are unconstrained.
  std::vector<double> fraction(candidates.size(), 0.0);
  std::vector<bool> feasible(candidates.size(), true);
  if (mode != selection_mode::isolated && !claims.empty()) {
    for (std::size_t bi = 0; bi < candidates.size(); ++bi) {
      const auto needs = behavior_needs(ind, candidates[bi]);
      for (const auto& claim : claims) {
        auto it = needs.find(claim.resource);
        if (it == needs.end()) continue;
        fraction[bi] += it->second / claim.capacity;
        if (it->second > claim.capacity - claim.claimed) feasible[bi] = false;
      }
    }
    if (std::none_of(feasible.begin(), feasible.end(), [](bool f) { return f; })) {
      // Nothing fits; fall back to the least resource-hungry equilibrium
      // behavior and report it.
      result.infeasible_fallback = true;
      std::size_t best = 0;
      for (std::size_t bi = 1; bi < candidates.size(); ++bi)
        if (fraction[bi] < fraction[best]) best = bi;
      result.chosen = candidates[best];
      return result;
    }
  }

  // Conform-or-deviate stance for the potential key: each interaction
  // votes by the scarcity of its contested resources, weighted by how much
  // resource is at stake; ties conform.
  bool deviate = false;
  std::vector<const interaction_context*> usable;
  if (mode == selection_mode::with_potential) {
    double conform_weight = 0.0, deviate_weight = 0.0;
    for (const auto& ctx : contexts) {
      if (ctx.neighbor_lambdas.empty()) continue;
      usable.push_back(&ctx);
      double scarcity = 0.0, weight = 0.0;
      for (const auto& name : ctx.contested) {
        for (const auto& claim : claims) {
          if (claim.resource != name) continue;
          scarcity += claim.claimed / claim.capacity;
          weight += claim.capacity;
        }
      }
      if (weight == 0.0) weight = 1.0;
      (scarcity >= policy.scarcity_threshold ? deviate_weight : conform_weight) += weight;
    }
    deviate = deviate_weight > conform_weight;
    if (usable.empty()) result.potential_skipped = true;
  }

  // Pre-binned neighborhood distributions of the usable interactions.
  std::vector<binned_distribution> crowd;
  crowd.reserve(usable.size());
  for (const auto* ctx : usable)
    crowd.push_back(bin_sharpness(ctx->neighbor_lambdas, policy.bins));

  // Lexicographic ranking: utility, then claimed-resource fraction, then
  // alignment with the neighborhood potential.  Exact float ties survive to
  // a seeded uniform draw.
  struct key_t {
    double utility = 0.0;
    double fraction = 0.0;
    double potential = 0.0;
  };
  std::vector<std::size_t> best;
  key_t best_key;
  for (std::size_t bi = 0; bi < candidates.size(); ++bi) {
    if (!feasible[bi]) continue;
    individual next = predict_forces(ind, candidates[bi]);
    if (predict) predict(next, candidates[bi]);

    key_t key;
    key.utility = next.utility();
    if (mode != selection_mode::isolated) key.fraction = fraction[bi];
    if (mode == selection_mode::with_potential && !usable.empty()) {
      double rp_sum = 0.0;
      for (std::size_t ci = 0; ci < usable.size(); ++ci) {
        const double lambda = sharpness(next.state_of(usable[ci]->focal_contradiction));
        rp_sum += relative_potential(lambda, crowd[ci]);
      }
      const double rp_mean = rp_sum / static_cast<double>(usable.size());
      key.potential = deviate ? rp_mean : -rp_mean;
    }

    const auto as_tuple = [](const key_t& k) {
      return std::array<double, 3>{k.utility, k.fraction, k.potential};
    };
    if (best.empty() || as_tuple(key) > as_tuple(best_key)) {
      best.assign(1, bi);
      best_key = key;
    } else if (as_tuple(key) == as_tuple(best_key)) {
      best.push_back(bi);
    }
  }

  result.chosen = candidates[best[static_cast<std::size_t>(rand.below(best.size()))]];
  return result;
}

}  // namespace detail

// Best admissible behavior of an agent on its own: equilibrium play,
// ranked by utility.
inline selection_result select_isolated(const individual& ind, const std::vector<game_2x2>& games,
                                        rng& rand, const property_predictor& predict = {}) {
  return detail::select(ind, games, {}, {}, {}, detail::selection_mode::isolated, rand, predict);
}

// As select_isolated, but behaviors whose resource needs no longer fit are
// filtered out and remaining ties prefer the behavior claiming the larger
// share of the contested resources.
inline selection_result select_in_swarm(const individual& ind, const std::vector<game_2x2>& games,
                                        const std::vector<resource_claim>& claims, rng& rand,
                                        const property_predictor& predict = {}) {
  return detail::select(ind, games, claims, {}, {}, detail::selection_mode::in_swarm, rand,
                        predict);
}

// Full selection: on top of select_in_swarm, remaining ties align the
// agent with (or, under scarcity, against) the neighborhood's potential.
inline selection_result select_with_potential(const individual& ind,
                                              const std::vector<game_2x2>& games,
                                              const std::vector<resource_claim>& claims,
                                              const std::vector<interaction_context>& contexts,
                                              const potential_policy& policy, rng& rand,
                                              const property_predictor& predict = {}) {
  return detail::select(ind, games, claims, contexts, policy,
                        detail::selection_mode::with_potential, rand, predict);
}

}  // namespace swarm
