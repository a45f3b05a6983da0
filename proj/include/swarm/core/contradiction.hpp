#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "swarm/core/error.hpp"

namespace swarm {

// Forces are clamped away from zero so that relative shares stay defined
// and sharpness stays strictly inside (-1, 1).
inline constexpr double k_force_floor = 1e-6;

// Identity of one internal contradiction: a name plus labels for its two
// opposing sides ("explore"/"exploit", "safety"/"collision", ...).
struct contradiction_id {
  std::string name;
  std::string positive_label;
  std::string negative_label;

  void validate() const {
    if (name.empty() || positive_label.empty() || negative_label.empty())
      throw model_violation("contradiction labels must be non-empty");
    if (positive_label == negative_label)
      throw model_violation("contradiction sides must carry distinct labels: " + name);
  }
};

// Absolute force of each side.  Both values stay strictly positive; all
// mutation goes through set_forces / the action layer, which enforce the
// floor.
struct contradiction_state {
  contradiction_id id;
  double force_pos = 1.0;
  double force_neg = 1.0;

  void validate() const {
    id.validate();
    if (!(force_pos > 0.0) || !(force_neg > 0.0))
      throw model_violation("forces must be strictly positive: " + id.name);
  }
};

// Shares of the two sides; they sum to 1 by construction.
inline std::pair<double, double> relative_forces(const contradiction_state& c) {
  c.validate();
  const double total = c.force_pos + c.force_neg;
  return {c.force_pos / total, c.force_neg / total};
}

// Sharpness: positive share minus negative share, strictly inside (-1, 1)
// for positive forces.  +1 would mean the positive side fully dominant.
inline double sharpness(const contradiction_state& c) {
  const auto [p, n] = relative_forces(c);
  return p - n;
}

}  // namespace swarm
