#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "swarm/core/contradiction.hpp"
#include "swarm/core/error.hpp"

namespace swarm {

// ---------------------------------------------------------------------------
// Importance: a strict partial order over contradiction names.  Scenario
// rules rewrite it as circumstances change (e.g. collision avoidance
// outranks foraging while carrying food).
// ---------------------------------------------------------------------------
class importance_order {
 public:
  void clear() { pairs_.clear(); }

  // Declares a > b.  Rejects reflexive pairs and anything that would close
  // a cycle through the pairs already present.
  void declare(const std::string& more, const std::string& less) {
    if (more == less)
      throw model_violation("importance order must be irreflexive: " + more);
    if (prefers(less, more))
      throw model_violation("importance order must stay acyclic: " + more + " vs " + less);
    if (!prefers(more, less)) pairs_.emplace_back(more, less);
  }

  // Transitive query: does a outrank b?
  bool prefers(const std::string& a, const std::string& b) const {
    if (a == b) return false;
    std::vector<std::string> stack{a};
    std::vector<std::string> seen{a};
    while (!stack.empty()) {
      const std::string cur = stack.back();
      stack.pop_back();
      for (const auto& [hi, lo] : pairs_) {
        if (hi != cur) continue;
        if (lo == b) return true;
        if (std::find(seen.begin(), seen.end(), lo) == seen.end()) {
          seen.push_back(lo);
          stack.push_back(lo);
        }
      }
    }
    return false;
  }

  const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }

 private:
  // (more important, less important)
  std::vector<std::pair<std::string, std::string>> pairs_;
};

// ---------------------------------------------------------------------------
// Actions.  Each contradiction owns four handles: strengthen or weaken
// either side.  An action may require resources; an execution attempt
// without them is rejected and leaves the state untouched.
// ---------------------------------------------------------------------------
enum class action_kind { strengthen_pos, weaken_pos, strengthen_neg, weaken_neg };

struct resource_need {
  std::string resource;
  double quantity = 0.0;
};

struct action_spec {
  double magnitude = 1.0;
  std::vector<resource_need> needs;
};

struct action_quadruple {
  action_spec strengthen_pos;
  action_spec weaken_pos;
  action_spec strengthen_neg;
  action_spec weaken_neg;

  const action_spec& get(action_kind k) const {
    switch (k) {
      case action_kind::strengthen_pos: return strengthen_pos;
      case action_kind::weaken_pos: return weaken_pos;
      case action_kind::strengthen_neg: return strengthen_neg;
      default: return weaken_neg;
    }
  }
};

// Resources actually granted for one action attempt.
struct claimed_resources {
  std::map<std::string, double> amounts;

  bool satisfies(const std::vector<resource_need>& needs) const {
    for (const auto& need : needs) {
      auto it = amounts.find(need.resource);
      if (it == amounts.end() || it->second < need.quantity) return false;
    }
    return true;
  }
};

// Realized force change of one contradiction in one step.
struct force_delta {
  double d_pos = 0.0;
  double d_neg = 0.0;
};

// Per-contradiction force changes, keyed by contradiction name.  Property
// dynamics receive this so properties can react to how the internal state
// moved.
using delta_gamma = std::map<std::string, force_delta>;

// Scenario-defined observable state.
using property_bag = std::map<std::string, double>;

class individual;

// Utility evaluator over resources and properties, range [0, 1].
using utility_fn = std::function<double(const individual&)>;

// Property update rule: p' = f(p, contradictions, importance, force deltas).
using property_dynamics = std::function<property_bag(
    const property_bag&, const std::vector<contradiction_state>&, const importance_order&,
    const delta_gamma&)>;

// ---------------------------------------------------------------------------
// One agent: contradictions, importance order, resource needs, action
// repertoire, observable properties and a utility evaluator.
// ---------------------------------------------------------------------------
class individual {
 public:
  explicit individual(int id = 0) : id_(id) {}

  int id() const { return id_; }

  void add_contradiction(contradiction_state state, action_quadruple actions = {}) {
    state.validate();
    if (find(state.id.name))
      throw model_violation("duplicate contradiction: " + state.id.name);
    contradictions_.push_back(std::move(state));
    actions_.push_back(std::move(actions));
  }

  const std::vector<contradiction_state>& contradictions() const { return contradictions_; }

  std::size_t index_of(const std::string& name) const {
    if (const auto idx = find(name)) return *idx;
    throw std::out_of_range("unknown contradiction: " + name);
  }

  const contradiction_state& state_of(const std::string& name) const {
    return contradictions_[index_of(name)];
  }

  void set_forces(const std::string& name, double pos, double neg) {
    auto& c = contradictions_[index_of(name)];
    c.force_pos = std::max(pos, k_force_floor);
    c.force_neg = std::max(neg, k_force_floor);
  }

  const action_quadruple& actions_of(const std::string& name) const {
    return actions_[index_of(name)];
  }
  void set_actions(const std::string& name, action_quadruple q) {
    actions_[index_of(name)] = std::move(q);
  }

  importance_order& importance() { return importance_; }
  const importance_order& importance() const { return importance_; }

  std::vector<resource_need>& needs() { return needs_; }
  const std::vector<resource_need>& needs() const { return needs_; }

  property_bag& properties() { return properties_; }
  const property_bag& properties() const { return properties_; }
  double property(const std::string& key, double fallback = 0.0) const {
    auto it = properties_.find(key);
    return it == properties_.end() ? fallback : it->second;
  }

  void set_utility(utility_fn fn) { utility_ = std::move(fn); }
  bool has_utility() const { return static_cast<bool>(utility_); }

  // Evaluates the utility handle and enforces its [0, 1] contract.
  double utility() const {
    if (!utility_) return 0.0;
    const double u = utility_(*this);
    if (!(u >= 0.0 && u <= 1.0))
      throw model_violation("utility outside [0,1]: " + std::to_string(u));
    return u;
  }

  void set_dynamics(property_dynamics fn) { dynamics_ = std::move(fn); }

  // Applies the scenario's property update rule; identity when none is set.
  void step_properties(const delta_gamma& dg) {
    if (dynamics_) properties_ = dynamics_(properties_, contradictions_, importance_, dg);
  }

 private:
  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < contradictions_.size(); ++i)
      if (contradictions_[i].id.name == name) return i;
    return std::nullopt;
  }

  int id_ = 0;
  std::vector<contradiction_state> contradictions_;
  std::vector<action_quadruple> actions_;  // aligned with contradictions_
  importance_order importance_;
  std::vector<resource_need> needs_;
  property_bag properties_;
  utility_fn utility_;
  property_dynamics dynamics_;
};

// Executes one action.  The targeted force moves by the action's signed
// magnitude and is clamped at the force floor.  Returns the realized delta,
// or nullopt (state untouched) when the claimed resources do not cover the
// action's needs.  Unknown contradictions throw.
inline std::optional<force_delta> apply_action(individual& ind, const std::string& contradiction,
                                               action_kind kind,
                                               const claimed_resources& claimed = {}) {
  const auto& state = ind.state_of(contradiction);
  const action_spec& spec = ind.actions_of(contradiction).get(kind);
  if (!claimed.satisfies(spec.needs)) return std::nullopt;

  double pos = state.force_pos;
  double neg = state.force_neg;
  switch (kind) {
    case action_kind::strengthen_pos: pos += spec.magnitude; break;
    case action_kind::weaken_pos: pos -= spec.magnitude; break;
    case action_kind::strengthen_neg: neg += spec.magnitude; break;
    case action_kind::weaken_neg: neg -= spec.magnitude; break;
  }
  pos = std::max(pos, k_force_floor);
  neg = std::max(neg, k_force_floor);

  force_delta delta{pos - state.force_pos, neg - state.force_neg};
  ind.set_forces(contradiction, pos, neg);
  return delta;
}

}  // namespace swarm
