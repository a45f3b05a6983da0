#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "swarm/metrics/distribution.hpp"

namespace swarm {

// Entropy (and potential magnitude) floor that keeps the ratios below
// finite when a distribution collapses into a single bin.
inline constexpr double k_entropy_floor = 1e-9;

// Swarm potential: mean sharpness over entropy, clamped to [-1, 1].  A
// crowd that leans hard one way in near-lockstep scores near +/-1; a
// scattered or undecided crowd scores near 0.
inline double swarm_potential(double mean_sharpness, double shannon_entropy) {
  const double h = std::max(shannon_entropy, k_entropy_floor);
  return std::clamp(mean_sharpness / h, -1.0, 1.0);
}

inline double swarm_potential(const binned_distribution& d) {
  return swarm_potential(expectation(d), entropy(d));
}

// Relative potential of one agent against a crowd: how far the agent's
// sharpness sits from the crowd mean, amplified when the crowd's potential
// is weak.  Clamped to [0, 1]; 0 means fully in line with the crowd.
inline double relative_potential(double lambda, const binned_distribution& d) {
  const double e = expectation(d);
  const double denom = std::abs(e) + std::abs(lambda);
  if (denom == 0.0) return 0.0;
  const double contrast = std::abs(e - lambda) / denom;
  const double pot = std::max(std::abs(swarm_potential(d)), k_entropy_floor);
  return std::clamp(contrast / pot, 0.0, 1.0);
}

// Swarm intelligence of one contradiction: order of the crowd relative to
// the fully disordered case, in [0, 1].  Needs at least two samples.
inline double si_local(const binned_distribution& d) {
  if (d.samples < 2) throw std::invalid_argument("si_local needs at least 2 samples");
  const double log_m = std::log(static_cast<double>(d.samples));
  return std::clamp((log_m - entropy(d)) / log_m, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Snapshots: per-agent sharpness samples at one step.
// ---------------------------------------------------------------------------
struct sharpness_sample {
  int agent = 0;
  std::string contradiction;
  double lambda = 0.0;
};

struct swarm_snapshot {
  long step = 0;
  std::vector<sharpness_sample> samples;

  void add(int agent, const std::string& contradiction, double lambda) {
    samples.push_back({agent, contradiction, lambda});
  }

  // All sharpness values of one contradiction, in insertion order.
  std::vector<double> values_of(const std::string& contradiction) const {
    std::vector<double> out;
    for (const auto& s : samples)
      if (s.contradiction == contradiction) out.push_back(s.lambda);
    return out;
  }

  // At most one sample per (agent, contradiction).
  void validate() const {
    std::map<std::pair<int, std::string>, int> seen;
    for (const auto& s : samples)
      if (++seen[{s.agent, s.contradiction}] > 1)
        throw std::invalid_argument("duplicate sample for agent " + std::to_string(s.agent) +
                                    ", contradiction " + s.contradiction);
  }
};

// Joint entropy over the per-agent vectors of binned sharpness, one
// dimension per listed contradiction.  Every agent that appears must carry
// a sample for each listed contradiction.
inline double joint_entropy(const swarm_snapshot& snap,
                            const std::vector<std::string>& contradictions, int bins) {
  if (contradictions.empty()) throw std::invalid_argument("no contradictions listed");
  snap.validate();

  std::map<int, std::map<std::string, double>> by_agent;
  for (const auto& s : snap.samples) by_agent[s.agent][s.contradiction] = s.lambda;
  if (by_agent.empty()) throw std::invalid_argument("empty snapshot");

  std::map<std::vector<int>, std::size_t> counts;
  for (const auto& [agent, lambdas] : by_agent) {
    std::vector<int> key;
    key.reserve(contradictions.size());
    for (const auto& name : contradictions) {
      auto it = lambdas.find(name);
      if (it == lambdas.end())
        throw std::invalid_argument("agent " + std::to_string(agent) +
                                    " lacks a sample for contradiction " + name);
      key.push_back(sharpness_bin(it->second, bins));
    }
    ++counts[key];
  }

  const double m = static_cast<double>(by_agent.size());
  double h = 0.0;
  for (const auto& [key, n] : counts) {
    const double q = static_cast<double>(n) / m;
    h -= q * std::log(q);
  }
  return h;
}

// Swarm intelligence over all listed contradictions at once, in [0, 1].
inline double si_global(const swarm_snapshot& snap,
                        const std::vector<std::string>& contradictions, int bins) {
  std::map<int, int> agents;
  for (const auto& s : snap.samples) ++agents[s.agent];
  if (agents.size() < 2) throw std::invalid_argument("si_global needs at least 2 agents");
  const double n = static_cast<double>(contradictions.size());
  const double log_m = std::log(static_cast<double>(agents.size()));
  const double h = joint_entropy(snap, contradictions, bins);
  return std::clamp((n * log_m - h) / (n * log_m), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Co-monotonicity check: across a series of distributions, whenever the
// mean stays put (within e_tolerance) the potential magnitude and the
// swarm intelligence must move in the same direction.
// ---------------------------------------------------------------------------
struct comonotonicity_pair {
  std::size_t index = 0;  // compares series[index] with series[index + 1]
  bool skipped = false;   // mean moved, pair not comparable
  double d_expectation = 0.0;
  double d_abs_potential = 0.0;
  double d_si = 0.0;
  bool ok = true;
};

struct comonotonicity_report {
  std::vector<comonotonicity_pair> pairs;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  bool pass = true;  // vacuously true when nothing was comparable
};

inline comonotonicity_report assertion1_report(const std::vector<binned_distribution>& series,
                                               double e_tolerance = 1e-6) {
  comonotonicity_report report;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    comonotonicity_pair pair;
    pair.index = i;
    pair.d_expectation = expectation(series[i + 1]) - expectation(series[i]);
    if (std::abs(pair.d_expectation) > e_tolerance) {
      pair.skipped = true;
      ++report.skipped;
    } else {
      pair.d_abs_potential =
          std::abs(swarm_potential(series[i + 1])) - std::abs(swarm_potential(series[i]));
      pair.d_si = si_local(series[i + 1]) - si_local(series[i]);
      const bool same_sign = (pair.d_abs_potential > 0.0 && pair.d_si > 0.0) ||
                             (pair.d_abs_potential < 0.0 && pair.d_si < 0.0) ||
                             (pair.d_abs_potential == 0.0 && pair.d_si == 0.0);
      pair.ok = same_sign;
      ++report.checked;
      if (!same_sign) {
        ++report.violations;
        report.pass = false;
      }
    }
    report.pairs.push_back(pair);
  }
  return report;
}

}  // namespace swarm
