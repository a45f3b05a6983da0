#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "swarm/core/individual.hpp"
#include "swarm/core/rng.hpp"
#include "swarm/engine/selection.hpp"
#include "swarm/metrics/swarm_metrics.hpp"

namespace swarm::geese {

// A migrating flock on an open 2D plane, heading +x.  The frontmost bird
// leads at constant speed; every other bird trades off two contradictions
// against the bird ahead of it: keeping a safe following distance versus
// saving effort by drafting close (c1), and staying near the formation
// axis versus keeping clear of it (c2).
struct goose_config {
  int flock = 12;  // valid range [10, 20]

  double ideal_gap = 10.0;  // preferred distance to the bird ahead
  double min_gap = 6.0;     // gap band; also normalizes the gap error
  double max_gap = 14.0;

  double ideal_lateral = 4.0;  // preferred offset from the leader's track
  double lateral_band = 4.0;   // normalizes the lateral error

  double base_speed = 1.0;  // leader's cruise speed
  double speed_min = 0.5;
  double speed_max = 2.0;
  double accel = 0.25;         // speed change limit per adjustment
  double lateral_step = 0.5;   // sideways shift limit per adjustment
  double dt = 1.0;
  // Gap control: target speed = predecessor speed + gap_gain * gap error,
  // rate-limited by accel.  Errors inside the deadband count as zero, so a
  // settled bird reads a perfectly balanced contradiction.
  double gap_gain = 2.0;
  double deadband = 0.02;

  double view_radius = 30.0;   // neighbors considered part of the local crowd
  double slot_capacity = 8.0;  // comfortable local density for the airspace claim

  double init_depth = 30.0;  // initial scatter behind the front
  double init_width = 15.0;

  int bins = 21;
  double scarcity_threshold = 0.8;

  void validate() const {
    if (flock < 10 || flock > 20) throw std::invalid_argument("flock size must be in [10, 20]");
    if (!(min_gap < ideal_gap && ideal_gap < max_gap))
      throw std::invalid_argument("gap band must satisfy min < ideal < max");
    if (!(speed_min < speed_max) || !(accel > 0.0) || !(dt > 0.0))
      throw std::invalid_argument("bad kinematic parameters");
    if (!(lateral_band > 0.0) || !(ideal_lateral >= 0.0))
      throw std::invalid_argument("bad lateral parameters");
    if (!(gap_gain > 0.0) || !(deadband >= 0.0))
      throw std::invalid_argument("bad control parameters");
  }
};

// Normalized, clamped gap error: positive when trailing too far (safe but
// wasteful), negative when drafting dangerously close.
inline double gap_error(double gap, const goose_config& cfg) {
  return std::clamp((gap - cfg.ideal_gap) / (cfg.max_gap - cfg.min_gap), -1.0, 1.0);
}

// Normalized, clamped lateral error: positive when too far off the axis,
// negative when too close to it.
inline double lateral_error(double lateral_offset, const goose_config& cfg) {
  return std::clamp((std::abs(lateral_offset) - cfg.ideal_lateral) / cfg.lateral_band, -1.0, 1.0);
}

// Error-tracking game: the deficient side's strengthening action pays.
// With error e the equilibrium lands on the pair that corrects e, and at
// e = 0 every cell ties, leaving the choice to the utility ranking.
inline game_2x2 error_game(double e) {
  game_2x2 g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      g.cells[r][c].pos = (r == 0) ? -e : e;
      g.cells[r][c].neg = (c == 0) ? e : -e;
    }
  return g;
}

struct goose {
  individual ind{0};
  double x = 0.0;
  double y = 0.0;
  double speed = 1.0;
};

class flock {
 public:
  flock(const goose_config& cfg, std::uint64_t seed) : cfg_(cfg), rand_(seed) {
    cfg_.validate();
    birds_.reserve(cfg_.flock);
    for (int i = 0; i < cfg_.flock; ++i) {
      goose b;
      b.ind = individual(i);
      b.ind.add_contradiction({{"c1", "safety", "effort"}, 1.0, 1.0});
      b.ind.add_contradiction({{"c2", "apart", "close"}, 1.0, 1.0});
      b.x = rand_.uniform(0.0, cfg_.init_depth);
      b.y = rand_.uniform(-cfg_.init_width, cfg_.init_width);
      b.speed = rand_.uniform(cfg_.speed_min, cfg_.speed_max);
      birds_.push_back(std::move(b));
    }
    refresh_errors();
  }

  const goose_config& config() const { return cfg_; }
  const std::vector<goose>& birds() const { return birds_; }

  // Frontmost bird; earlier index wins exact ties.
  int leader() const {
    int lead = 0;
    for (int i = 1; i < static_cast<int>(birds_.size()); ++i)
      if (birds_[i].x > birds_[lead].x) lead = i;
    return lead;
  }

  void step() {
    const int lead = leader();
    const int n = static_cast<int>(birds_.size());

    // Frozen view of this step.
    std::vector<double> xs(n), ys(n), speeds(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = birds_[i].x;
      ys[i] = birds_[i].y;
      speeds[i] = birds_[i].speed;
    }
    const double axis_y = ys[lead];

    struct decision {
      double dv = 0.0;
      double dlat = 0.0;
    };
    std::vector<decision> decisions(n);

    const auto order = rand_.permutation(static_cast<std::size_t>(n));
    for (std::size_t oi : order) {
      const int i = static_cast<int>(oi);
      if (i == lead) continue;  // the leader holds course

      const int ahead = predecessor(i, xs);
      const double gap = xs[ahead] - xs[i];
      const double lat = ys[i] - axis_y;
      const double e1_raw = gap_error(gap, cfg_);
      const double e2_raw = lateral_error(lat, cfg_);
      const double e1 = snap(e1_raw);
      const double e2 = snap(e2_raw);

      const std::vector<game_2x2> games{error_game(e1), error_game(e2)};

      // Local crowd: everyone within view radius.
      std::vector<double> crowd_c1, crowd_c2;
      int close_neighbors = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double d = std::hypot(xs[j] - xs[i], ys[j] - ys[i]);
        if (d > cfg_.view_radius) continue;
        ++close_neighbors;
        if (j != lead) {
          crowd_c1.push_back(sharpness(birds_[j].ind.state_of("c1")));
          crowd_c2.push_back(sharpness(birds_[j].ind.state_of("c2")));
        }
      }
      const double claimed =
          std::min(static_cast<double>(close_neighbors), cfg_.slot_capacity);
      const std::vector<resource_claim> claims{{"slot", claimed, cfg_.slot_capacity}};
      std::vector<interaction_context> contexts;
      if (!crowd_c1.empty())
        contexts.push_back({"c1", {}, {"slot"}, crowd_c1});
      if (!crowd_c2.empty())
        contexts.push_back({"c2", {}, {"slot"}, crowd_c2});

      // Utility prefers the move that lands both errors nearest zero.
      const double pred_speed = speeds[ahead];
      individual agent = birds_[i].ind;
      agent.set_utility([](const individual& me) {
        return 1.0 - (std::abs(me.property("gap_err")) + std::abs(me.property("lat_err"))) / 2.0;
      });
      const property_predictor predict = [&](individual& next, const behavior& b) {
        const auto [dv, dlat] = kinematics(b, e1_raw, lat, speeds[i], pred_speed);
        const double v = std::clamp(speeds[i] + dv, cfg_.speed_min, cfg_.speed_max);
        const double gap_next = gap + (pred_speed - v) * cfg_.dt;
        next.properties()["gap_err"] = gap_error(gap_next, cfg_);
        next.properties()["lat_err"] = lateral_error(lat + dlat, cfg_);
      };

      potential_policy policy{cfg_.scarcity_threshold, cfg_.bins};
      const selection_result sel =
          select_with_potential(agent, games, claims, contexts, policy, rand_, predict);
      const auto [dv, dlat] = kinematics(sel.chosen, e1_raw, lat, speeds[i], pred_speed);
      decisions[i] = {dv, dlat};
    }

    // Apply: no contested space, so every decision lands.
    for (int i = 0; i < n; ++i) {
      if (i == lead) {
        birds_[i].speed = cfg_.base_speed;
      } else {
        birds_[i].speed =
            std::clamp(birds_[i].speed + decisions[i].dv, cfg_.speed_min, cfg_.speed_max);
        birds_[i].y += decisions[i].dlat;
      }
      birds_[i].x += birds_[i].speed * cfg_.dt;
    }
    refresh_errors();
    ++step_count_;
  }

  // Sharpness of every follower; the leader sits outside the contradiction
  // model while it holds the front.
  swarm_snapshot snapshot() const {
    swarm_snapshot snap;
    snap.step = step_count_;
    const int lead = leader();
    for (int i = 0; i < static_cast<int>(birds_.size()); ++i) {
      if (i == lead) continue;
      snap.add(i, "c1", sharpness(birds_[i].ind.state_of("c1")));
      snap.add(i, "c2", sharpness(birds_[i].ind.state_of("c2")));
    }
    return snap;
  }

  long step_count() const { return step_count_; }

 private:
  // The nearest bird strictly ahead; falls back to the leader for birds
  // sharing the front line.
  int predecessor(int i, const std::vector<double>& xs) const {
    int best = -1;
    for (int j = 0; j < static_cast<int>(xs.size()); ++j) {
      if (j == i || xs[j] <= xs[i]) continue;
      if (best == -1 || xs[j] < xs[best]) best = j;
    }
    return best == -1 ? leader() : best;
  }

  double snap(double e) const { return std::abs(e) < cfg_.deadband ? 0.0 : e; }

  // Behavior to physics.  c1 chases the target speed pred + gap_gain * e,
  // rate-limited by accel: <cooperate,compete> may only speed up toward it,
  // <compete,cooperate> only slow down, agreeing pairs match the
  // predecessor.  c2: <compete,cooperate> shifts away from the axis,
  // <cooperate,compete> toward it, both capped so the bird lands exactly on
  // the ideal offset instead of stepping across it.
  std::pair<double, double> kinematics(const behavior& b, double e1, double lat, double speed,
                                       double pred_speed) const {
    const double chase = pred_speed + cfg_.gap_gain * e1 - speed;
    double dv;
    if (b.pairs[0].pos == strategy_choice::cooperate &&
        b.pairs[0].neg == strategy_choice::compete)
      dv = std::clamp(chase, 0.0, cfg_.accel);
    else if (b.pairs[0].pos == strategy_choice::compete &&
             b.pairs[0].neg == strategy_choice::cooperate)
      dv = std::clamp(chase, -cfg_.accel, 0.0);
    else
      dv = std::clamp(pred_speed - speed, -cfg_.accel, cfg_.accel);

    const double out = lat >= 0.0 ? 1.0 : -1.0;
    double dlat = 0.0;
    if (b.pairs[1].pos == strategy_choice::compete &&
        b.pairs[1].neg == strategy_choice::cooperate)
      dlat = out * std::min(cfg_.lateral_step, std::max(0.0, cfg_.ideal_lateral - std::abs(lat)));
    else if (b.pairs[1].pos == strategy_choice::cooperate &&
             b.pairs[1].neg == strategy_choice::compete)
      dlat = -out * std::min(cfg_.lateral_step, std::max(0.0, std::abs(lat) - cfg_.ideal_lateral));
    return {dv, dlat};
  }

  // Forces mirror the formation errors, so sharpness equals the clamped
  // normalized error on both contradictions (zero inside the deadband).
  void refresh_errors() {
    const int lead = leader();
    const int n = static_cast<int>(birds_.size());
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = birds_[i].x;
    const double axis_y = birds_[lead].y;
    for (int i = 0; i < n; ++i) {
      double e1 = 0.0, e2 = 0.0;
      if (i != lead) {
        const int ahead = predecessor(i, xs);
        e1 = snap(gap_error(xs[ahead] - xs[i], cfg_));
        e2 = snap(lateral_error(birds_[i].y - axis_y, cfg_));
      }
      birds_[i].ind.set_forces("c1", 1.0 + e1, 1.0 - e1);
      birds_[i].ind.set_forces("c2", 1.0 + e2, 1.0 - e2);
      birds_[i].ind.properties()["gap_err"] = e1;
      birds_[i].ind.properties()["lat_err"] = e2;
    }
  }

  goose_config cfg_;
  rng rand_;
  std::vector<goose> birds_;
  long step_count_ = 0;
};

}  // namespace swarm::geese
