#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "swarm/core/individual.hpp"
#include "swarm/game/game.hpp"

namespace swarm {

// Behavior spaces grow as 4^N; enumeration refuses beyond this many
// contradictions per individual.
inline constexpr std::size_t k_max_enumerable_contradictions = 8;

// What the two sides of one contradiction play.  The canonical index is
// 2 * pos + neg with compete = 0, giving the fixed order
// <compete,compete>, <compete,cooperate>, <cooperate,compete>,
// <cooperate,cooperate>.
struct pair_choice {
  strategy_choice pos = strategy_choice::compete;
  strategy_choice neg = strategy_choice::compete;

  int canonical_index() const {
    return 2 * static_cast<int>(pos) + static_cast<int>(neg);
  }
  static pair_choice from_index(int idx) {
    return {static_cast<strategy_choice>(idx / 2), static_cast<strategy_choice>(idx % 2)};
  }

  action_kind pos_action() const {
    return pos == strategy_choice::compete ? action_kind::strengthen_pos
                                           : action_kind::weaken_pos;
  }
  action_kind neg_action() const {
    return neg == strategy_choice::compete ? action_kind::strengthen_neg
                                           : action_kind::weaken_neg;
  }

  bool operator==(const pair_choice& o) const { return pos == o.pos && neg == o.neg; }
};

// One pair choice per contradiction, aligned with the individual's
// contradiction list.
struct behavior {
  std::vector<pair_choice> pairs;

  bool operator==(const behavior& o) const { return pairs == o.pairs; }
};

// All 4^N behaviors in a fixed order: the first contradiction is the most
// significant digit, pair choices cycle in canonical index order.
inline std::vector<behavior> enumerate_behaviors(std::size_t n_contradictions) {
  if (n_contradictions > k_max_enumerable_contradictions)
    throw std::length_error("behavior space too large: 4^" + std::to_string(n_contradictions));
  std::size_t total = 1;
  for (std::size_t i = 0; i < n_contradictions; ++i) total *= 4;

  std::vector<behavior> out;
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    behavior b;
    b.pairs.resize(n_contradictions);
    std::size_t rest = code;
    for (std::size_t i = n_contradictions; i-- > 0;) {
      b.pairs[i] = pair_choice::from_index(static_cast<int>(rest % 4));
      rest /= 4;
    }
    out.push_back(std::move(b));
  }
  return out;
}

// Executes a behavior: both sides of every contradiction play their
// action.  Actions whose resource needs are not covered are rejected
// individually (their contribution to the delta is zero).
inline delta_gamma apply_behavior(individual& ind, const behavior& b,
                                  const claimed_resources& claimed = {}) {
  const auto& gamma = ind.contradictions();
  if (b.pairs.size() != gamma.size())
    throw std::invalid_argument("behavior does not match contradiction count");
  delta_gamma dg;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const std::string name = gamma[i].id.name;
    force_delta total;
    if (auto d = apply_action(ind, name, b.pairs[i].pos_action(), claimed)) {
      total.d_pos += d->d_pos;
      total.d_neg += d->d_neg;
    }
    if (auto d = apply_action(ind, name, b.pairs[i].neg_action(), claimed)) {
      total.d_pos += d->d_pos;
      total.d_neg += d->d_neg;
    }
    dg[name] = total;
  }
  return dg;
}

// One-step force prediction: a copy of the individual after the behavior's
// force deltas, resource checks waived.  Used to rank candidate behaviors.
inline individual predict_forces(const individual& ind, const behavior& b) {
  individual next = ind;
  const auto& gamma = next.contradictions();
  if (b.pairs.size() != gamma.size())
    throw std::invalid_argument("behavior does not match contradiction count");
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const std::string name = gamma[i].id.name;
    const auto& quad = next.actions_of(name);
    double pos = gamma[i].force_pos;
    double neg = gamma[i].force_neg;
    pos += (b.pairs[i].pos == strategy_choice::compete ? quad.strengthen_pos.magnitude
                                                       : -quad.weaken_pos.magnitude);
    neg += (b.pairs[i].neg == strategy_choice::compete ? quad.strengthen_neg.magnitude
                                                       : -quad.weaken_neg.magnitude);
    next.set_forces(name, pos, neg);
  }
  return next;
}

}  // namespace swarm
