#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarm {

// Empirical distribution of sharpness values over uniform bins spanning
// [-1, 1].  Probabilities are stored for every bin (zeros included) and
// sum to 1 up to rounding.
struct binned_distribution {
  int bins = 0;
  std::size_t samples = 0;
  std::vector<double> p;

  double width() const { return 2.0 / bins; }
  double midpoint(int k) const { return -1.0 + (k + 0.5) * width(); }

  int occupied() const {
    int n = 0;
    for (double q : p)
      if (q > 0.0) ++n;
    return n;
  }

  void validate() const {
    if (bins < 2) throw std::invalid_argument("need at least 2 bins");
    if (p.size() != static_cast<std::size_t>(bins))
      throw std::invalid_argument("probability vector does not match bin count");
    double total = 0.0;
    for (double q : p) {
      if (q < 0.0) throw std::invalid_argument("negative bin probability");
      total += q;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("bin probabilities must sum to 1, got " + std::to_string(total));
  }
};

// Maps a sharpness value to its bin.  A value exactly on an interior edge
// belongs to the higher bin; the closed top edge +1 lands in the last bin.
inline int sharpness_bin(double lambda, int bins) {
  if (bins < 2) throw std::invalid_argument("need at least 2 bins");
  if (!(lambda >= -1.0 && lambda <= 1.0))
    throw std::invalid_argument("sharpness outside [-1,1]: " + std::to_string(lambda));
  const int idx = static_cast<int>(std::floor((lambda + 1.0) / (2.0 / bins)));
  return idx >= bins ? bins - 1 : idx;
}

inline binned_distribution bin_sharpness(const std::vector<double>& values, int bins) {
  if (values.empty()) throw std::invalid_argument("no sharpness values to bin");
  binned_distribution d;
  d.bins = bins;
  d.samples = values.size();
  d.p.assign(bins, 0.0);
  for (double v : values) d.p[sharpness_bin(v, bins)] += 1.0;
  for (double& q : d.p) q /= static_cast<double>(values.size());
  return d;
}

// Mean sharpness under the binned distribution, taken at bin midpoints.
inline double expectation(const binned_distribution& d) {
  d.validate();
  double e = 0.0;
  for (int k = 0; k < d.bins; ++k) e += d.midpoint(k) * d.p[k];
  return e;
}

// Shannon entropy in nats over the occupied bins.
inline double entropy(const binned_distribution& d) {
  d.validate();
  double h = 0.0;
  for (double q : d.p)
    if (q > 0.0) h -= q * std::log(q);
  return h;
}

}  // namespace swarm
