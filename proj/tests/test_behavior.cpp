#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "swarm/core/rng.hpp"
#include "swarm/engine/behavior.hpp"
#include "swarm/engine/selection.hpp"

namespace {

using namespace swarm;

game_2x2 from_rows(std::array<std::array<double, 2>, 2> pos,
                   std::array<std::array<double, 2>, 2> neg) {
  game_2x2 g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) g.cells[r][c] = {pos[r][c], neg[r][c]};
  return g;
}

game_2x2 flat_game() { return from_rows({{{1, 1}, {1, 1}}}, {{{1, 1}, {1, 1}}}); }

// Unique pure equilibrium at (compete, compete).
game_2x2 dominant_game() { return from_rows({{{2, 2}, {1, 1}}}, {{{2, 1}, {2, 1}}}); }

// No pure equilibrium.
game_2x2 cycle_game() { return from_rows({{{1, -1}, {-1, 1}}}, {{{-1, 1}, {1, -1}}}); }

individual one_contradiction(double pos = 1.0, double neg = 1.0, action_quadruple quad = {}) {
  individual ind(0);
  ind.add_contradiction({{"c1", "up", "down"}, pos, neg}, std::move(quad));
  return ind;
}

TEST(behavior_space, enumeration_counts_and_order) {
  EXPECT_EQ(enumerate_behaviors(0).size(), 1u);

  const auto one = enumerate_behaviors(1);
  ASSERT_EQ(one.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(one[i].pairs[0].canonical_index(), i);

  const auto two = enumerate_behaviors(2);
  ASSERT_EQ(two.size(), 16u);
  for (int i = 0; i < 16; ++i) {
    EXPECT_EQ(two[i].pairs[0].canonical_index(), i / 4);
    EXPECT_EQ(two[i].pairs[1].canonical_index(), i % 4);
  }
}

TEST(behavior_space, refuses_oversized_enumerations) {
  EXPECT_THROW(enumerate_behaviors(9), std::length_error);
  EXPECT_NO_THROW(enumerate_behaviors(8));
}

TEST(behavior_space, pair_choice_round_trip_and_action_mapping) {
  for (int i = 0; i < 4; ++i) EXPECT_EQ(pair_choice::from_index(i).canonical_index(), i);
  const pair_choice cc{strategy_choice::compete, strategy_choice::cooperate};
  EXPECT_EQ(cc.pos_action(), action_kind::strengthen_pos);
  EXPECT_EQ(cc.neg_action(), action_kind::weaken_neg);
  const pair_choice oc{strategy_choice::cooperate, strategy_choice::compete};
  EXPECT_EQ(oc.pos_action(), action_kind::weaken_pos);
  EXPECT_EQ(oc.neg_action(), action_kind::strengthen_neg);
}

TEST(behavior_application, moves_both_sides_and_reports_deltas) {
  individual ind = one_contradiction(2.0, 2.0);
  behavior b;
  b.pairs = {{strategy_choice::compete, strategy_choice::compete}};
  const auto dg = apply_behavior(ind, b);
  EXPECT_DOUBLE_EQ(ind.state_of("c1").force_pos, 3.0);
  EXPECT_DOUBLE_EQ(ind.state_of("c1").force_neg, 3.0);
  EXPECT_DOUBLE_EQ(dg.at("c1").d_pos, 1.0);
  EXPECT_DOUBLE_EQ(dg.at("c1").d_neg, 1.0);
}

TEST(behavior_application, starved_actions_contribute_nothing) {
  action_quadruple quad;
  quad.strengthen_pos.needs = {{"cell", 1.0}};
  individual ind = one_contradiction(2.0, 2.0, quad);
  behavior b;
  b.pairs = {{strategy_choice::compete, strategy_choice::compete}};
  const auto dg = apply_behavior(ind, b);  // no resources claimed
  EXPECT_DOUBLE_EQ(dg.at("c1").d_pos, 0.0);
  EXPECT_DOUBLE_EQ(dg.at("c1").d_neg, 1.0);
  EXPECT_DOUBLE_EQ(ind.state_of("c1").force_pos, 2.0);
}

TEST(behavior_application, size_mismatch_throws) {
  individual ind = one_contradiction();
  behavior b;  // empty
  EXPECT_THROW(apply_behavior(ind, b), std::invalid_argument);
}

TEST(force_prediction, leaves_the_original_untouched) {
  individual ind = one_contradiction(2.0, 2.0);
  behavior b;
  b.pairs = {{strategy_choice::cooperate, strategy_choice::cooperate}};
  const individual next = predict_forces(ind, b);
  EXPECT_DOUBLE_EQ(next.state_of("c1").force_pos, 1.0);
  EXPECT_DOUBLE_EQ(next.state_of("c1").force_neg, 1.0);
  EXPECT_DOUBLE_EQ(ind.state_of("c1").force_pos, 2.0);
}

TEST(force_prediction, respects_the_force_floor) {
  individual ind = one_contradiction(0.5, 0.5);
  behavior b;
  b.pairs = {{strategy_choice::cooperate, strategy_choice::cooperate}};
  const individual next = predict_forces(ind, b);
  EXPECT_DOUBLE_EQ(next.state_of("c1").force_pos, k_force_floor);
}

// --- selection ----------------------------------------------------------------

TEST(selection, equilibrium_constraint_dominates_utility) {
  individual ind = one_contradiction();
  // Utility would love <cooperate, cooperate>, but it is not an equilibrium.
  ind.set_utility([](const individual& me) {
    return me.state_of("c1").force_pos < 1.0 ? 1.0 : 0.0;
  });
  rng rand(1);
  const auto sel = select_isolated(ind, {dominant_game()}, rand);
  EXPECT_EQ(sel.chosen.pairs[0].pos, strategy_choice::compete);
  EXPECT_EQ(sel.chosen.pairs[0].neg, strategy_choice::compete);
  EXPECT_FALSE(sel.used_mixed_draw);
}

TEST(selection, two_unique_equilibria_force_the_product_behavior) {
  individual ind(0);
  ind.add_contradiction({{"c1", "a", "b"}, 1.0, 1.0});
  ind.add_contradiction({{"c2", "x", "y"}, 1.0, 1.0});
  rng rand(2);
  const auto sel = select_isolated(ind, {dominant_game(), dominant_game()}, rand);
  for (const auto& pc : sel.chosen.pairs) {
    EXPECT_EQ(pc.pos, strategy_choice::compete);
    EXPECT_EQ(pc.neg, strategy_choice::compete);
  }
}

TEST(selection, utility_ranks_between_equilibria) {
  individual ind = one_contradiction(2.0, 2.0);
  // All four cells tie, so the whole space is admissible; the utility
  // prefers the behavior pushing sharpness up the hardest.
  ind.set_utility([](const individual& me) {
    return (sharpness(me.state_of("c1")) + 1.0) / 2.0;
  });
  rng rand(3);
  const auto sel = select_isolated(ind, {flat_game()}, rand);
  EXPECT_EQ(sel.chosen.pairs[0].pos, strategy_choice::compete);
  EXPECT_EQ(sel.chosen.pairs[0].neg, strategy_choice::cooperate);
}

TEST(selection, exact_ties_break_by_seed_reproducibly) {
  individual ind = one_contradiction();
  std::vector<int> first_run, second_run;
  for (int trial = 0; trial < 20; ++trial) {
    rng r1(900 + trial), r2(900 + trial);
    first_run.push_back(select_isolated(ind, {flat_game()}, r1).chosen.pairs[0].canonical_index());
    second_run.push_back(select_isolated(ind, {flat_game()}, r2).chosen.pairs[0].canonical_index());
  }
  EXPECT_EQ(first_run, second_run);
  // All four tied behaviors stay reachable across seeds.
  std::vector<int> seen(4, 0);
  for (int idx : first_run) seen[idx] = 1;
  EXPECT_GE(seen[0] + seen[1] + seen[2] + seen[3], 2);
}

TEST(selection, games_without_pure_equilibrium_use_a_seeded_draw) {
  individual ind = one_contradiction();
  rng r1(7), r2(7);
  const auto a = select_isolated(ind, {cycle_game()}, r1);
  const auto b = select_isolated(ind, {cycle_game()}, r2);
  EXPECT_TRUE(a.used_mixed_draw);
  EXPECT_EQ(a.chosen.pairs[0].canonical_index(), b.chosen.pairs[0].canonical_index());
}

TEST(selection, infeasible_behaviors_are_filtered) {
  action_quadruple quad;
  quad.strengthen_pos.needs = {{"cell", 1.0}};
  individual ind = one_contradiction(1.0, 1.0, quad);
  rng rand(4);
  // The one available cell is already claimed, so strengthening the
  // positive side cannot be paid for.
  const auto sel = select_in_swarm(ind, {flat_game()}, {{"cell", 1.0, 1.0}}, rand);
  EXPECT_EQ(sel.chosen.pairs[0].pos, strategy_choice::cooperate);
  EXPECT_FALSE(sel.infeasible_fallback);
}

TEST(selection, all_infeasible_falls_back_to_the_cheapest) {
  action_quadruple quad;
  quad.strengthen_pos.needs = {{"cell", 2.0}};
  quad.weaken_pos.needs = {{"cell", 1.0}};
  quad.strengthen_neg.needs = {{"cell", 2.0}};
  quad.weaken_neg.needs = {{"cell", 1.0}};
  individual ind = one_contradiction(1.0, 1.0, quad);
  rng rand(5);
  const auto sel = select_in_swarm(ind, {flat_game()}, {{"cell", 1.0, 1.0}}, rand);
  EXPECT_TRUE(sel.infeasible_fallback);
  // <cooperate, cooperate> needs 2 units, every other pair needs 3 or 4.
  EXPECT_EQ(sel.chosen.pairs[0].pos, strategy_choice::cooperate);
  EXPECT_EQ(sel.chosen.pairs[0].neg, strategy_choice::cooperate);
}

TEST(selection, greedier_claims_win_utility_ties) {
  action_quadruple quad;
  quad.strengthen_pos.needs = {{"cell", 1.0}};
  individual ind = one_contradiction(1.0, 1.0, quad);
  rng rand(6);
  const auto sel = select_in_swarm(ind, {flat_game()}, {{"cell", 0.0, 8.0}}, rand);
  EXPECT_EQ(sel.chosen.pairs[0].pos, strategy_choice::compete);
}

TEST(selection, resource_constraint_never_improves_the_optimum) {
  rng seeds(8);
  for (int trial = 0; trial < 100; ++trial) {
    action_quadruple quad;
    quad.strengthen_pos.needs = {{"cell", seeds.uniform(0.0, 2.0)}};
    quad.weaken_neg.needs = {{"cell", seeds.uniform(0.0, 2.0)}};
    individual ind = one_contradiction(seeds.uniform(0.5, 3.0), seeds.uniform(0.5, 3.0), quad);
    ind.set_utility([](const individual& me) {
      return (sharpness(me.state_of("c1")) + 1.0) / 2.0;
    });
    game_2x2 g;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) g.cells[r][c] = {seeds.uniform(-1.0, 1.0), seeds.uniform(-1.0, 1.0)};

    rng r1(4000 + trial), r2(4000 + trial);
    const auto unconstrained = select_isolated(ind, {g}, r1);
    const auto constrained =
        select_in_swarm(ind, {g}, {{"cell", seeds.uniform(0.0, 1.0), 1.0}}, r2);
    const double u_free = predict_forces(ind, unconstrained.chosen).utility();
    const double u_tight = predict_forces(ind, constrained.chosen).utility();
    EXPECT_GE(u_free, u_tight - 1e-12);
  }
}

TEST(selection, empty_contexts_reduce_to_resource_selection) {
  individual ind = one_contradiction();
  rng r1(9), r2(9);
  const auto with = select_with_potential(ind, {flat_game()}, {{"cell", 0.0, 4.0}}, {},
                                          potential_policy{}, r1);
  const auto without = select_in_swarm(ind, {flat_game()}, {{"cell", 0.0, 4.0}}, r2);
  EXPECT_TRUE(with.potential_skipped);
  EXPECT_EQ(with.chosen.pairs[0].canonical_index(), without.chosen.pairs[0].canonical_index());
}

// Crowd leaning hard positive on c1; the agent's action magnitudes let one
// pair match it and the others miss it.
interaction_context crowd_context(std::vector<double> lambdas) {
  interaction_context ctx;
  ctx.focal_contradiction = "c1";
  ctx.contested = {"slot"};
  ctx.neighbor_lambdas = std::move(lambdas);
  return ctx;
}

individual big_swing_agent() {
  action_quadruple quad;
  quad.strengthen_pos.magnitude = 4.0;
  quad.weaken_pos.magnitude = 4.0;
  quad.strengthen_neg.magnitude = 4.0;
  quad.weaken_neg.magnitude = 4.0;
  return one_contradiction(1.0, 1.0, quad);
}

TEST(selection, abundance_conforms_to_the_crowd) {
  individual ind = big_swing_agent();
  rng rand(10);
  const auto sel = select_with_potential(ind, {flat_game()}, {{"slot", 1.0, 8.0}},
                                         {crowd_context({0.8, 0.8, 0.8})}, potential_policy{}, rand);
  EXPECT_FALSE(sel.potential_skipped);
  // Only <compete, cooperate> lands near the crowd's sharpness.
  EXPECT_EQ(sel.chosen.pairs[0].pos, strategy_choice::compete);
  EXPECT_EQ(sel.chosen.pairs[0].neg, strategy_choice::cooperate);
}

TEST(selection, scarcity_deviates_from_the_crowd) {
  individual ind = big_swing_agent();
  rng rand(11);
  const auto sel = select_with_potential(ind, {flat_game()}, {{"slot", 7.0, 8.0}},
                                         {crowd_context({0.8, 0.8, 0.8})}, potential_policy{}, rand);
  const double predicted = sharpness(predict_forces(ind, sel.chosen).state_of("c1"));
  EXPECT_GT(std::abs(predicted - 0.8), 0.5);
}

TEST(selection, interactions_vote_weighted_by_capacity) {
  individual ind = big_swing_agent();
  rng rand(12);
  auto scarce = crowd_context({0.8, 0.8});
  scarce.contested = {"big"};
  auto abundant = crowd_context({0.8, 0.8});
  abundant.contested = {"small"};
  const std::vector<resource_claim> claims{{"big", 9.5, 10.0}, {"small", 0.0, 1.0}};
  const auto sel = select_with_potential(ind, {flat_game()}, claims, {scarce, abundant},
                                         potential_policy{}, rand);
  // The scarce interaction outweighs the abundant one, so the agent breaks
  // away from the crowd instead of joining it.
  const double predicted = sharpness(predict_forces(ind, sel.chosen).state_of("c1"));
  EXPECT_GT(std::abs(predicted - 0.8), 0.5);
}

TEST(selection, malformed_inputs_throw) {
  individual ind = one_contradiction();
  rng rand(13);
  EXPECT_THROW(select_in_swarm(ind, {flat_game()}, {{"cell", -0.5, 1.0}}, rand),
               std::invalid_argument);
  EXPECT_THROW(select_in_swarm(ind, {flat_game()}, {{"cell", 2.0, 1.0}}, rand),
               std::invalid_argument);
  EXPECT_THROW(select_in_swarm(ind, {flat_game()}, {{"cell", 0.0, 0.0}}, rand),
               std::invalid_argument);
  EXPECT_THROW(select_isolated(ind, {}, rand), std::invalid_argument);
}

}  // namespace
