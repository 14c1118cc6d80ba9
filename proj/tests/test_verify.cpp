//------------------------------------------------------------------------------
//
//   Copyright 2026 The NRMF Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------


#include <gtest/gtest.h>

#include <random>

#include "nrmf/json_io.hpp"
#include "nrmf/verify.hpp"
#include "support/oracles.hpp"

using namespace nrmf;

namespace {

ReportProfile fixture(std::string const &name)
{
  return ingest(std::string(NRMF_TEST_DATA) + "/" + name);
}

/// All trees with `n` agents and for each one value assignment from `values`.
std::vector<Instance> tree_instances(std::size_t max_n, std::vector<std::vector<int>> const &assignments)
{
  std::vector<Instance> out;
  for (std::size_t n = 1; n <= max_n; ++n)
  {
    int shape = 0;
    for (auto const &parents : oracle::rooted_trees(n))
    {
      for (std::size_t a = 0; a < assignments.size(); ++a)
      {
        std::vector<Money> v;
        for (std::size_t i = 0; i < n; ++i)
        {
          v.emplace_back(assignments[a][i % assignments[a].size()]);
        }
        out.push_back({"n" + std::to_string(n) + "_t" + std::to_string(shape) + "_v" + std::to_string(a),
                       oracle::tree_profile(parents, v)});
      }
      ++shape;
    }
  }
  return out;
}

Mechanism overcharging()
{
  return {"overcharge", [](ReportProfile const &p) {
            auto o = vcg(p);
            if (o.winner != kNoAgent)
            {
              o.payment[o.winner] = p.value(o.winner) + 1;
              o.surplus = o.payment[o.winner];
            }
            return o;
          }};
}

Mechanism paying_out()
{
  return {"giveaway", [](ReportProfile const &p) {
            AuctionOutcome o(p.size());
            if (p.size() > 0)
            {
              o.payment[0] = -1;
              o.surplus = -1;
            }
            return o;
          }};
}

}  // namespace

TEST(Grid, ContainsZeroValuesStepsAndMidpoints)
{
  auto grid = order_statistic_grid(oracle::star({Money(2), Money(5)}));
  std::vector<Money> expected;
  for (int twice : {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12})
  {
    expected.push_back(Money(twice, 2));
    expected.back().canonicalize();
  }
  EXPECT_EQ(grid, expected);
}

TEST(CheckIr, NrmfIdmOnSmallTrees)
{
  auto inst = tree_instances(5, {{0, 1, 2, 3, 4, 5}, {5, 3, 4, 1, 2}, {2, 2, 2, 2, 2}});
  auto r = check_ir(nrmf_mechanism(Idm{}), inst);
  EXPECT_TRUE(r.pass) << (r.witness ? r.witness->description : "");
  EXPECT_EQ(r.instances, inst.size());
}

TEST(CheckIr, CatchesAnOverchargingMechanism)
{
  std::vector<Instance> inst{{"star", oracle::star({Money(2), Money(3)})}};
  auto m = overcharging();
  auto r = check_ir(m, inst);
  ASSERT_FALSE(r.pass);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->delta, Money(-1));
  EXPECT_EQ(replay(m, *r.witness), r.witness->delta);
}

TEST(CheckIr, EmptyListIsAVacuousPass)
{
  auto r = check_ir(nrmf_mechanism(Idm{}), std::vector<Instance>{});
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.warnings.size(), 1U);
}

TEST(CheckIc, CavalloFailsOnFigureTwo)
{
  std::vector<Instance> inst{{"figure2", fixture("figure2.json")}};
  auto m = cavallo_mechanism();
  auto r = check_ic(m, inst);
  ASSERT_FALSE(r.pass);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->description, "C withholds D");
  EXPECT_EQ(r.witness->delta, Money(1, 6));
  EXPECT_EQ(replay(m, *r.witness), Money(1, 6));
}

TEST(CheckIc, VcgIsNotDiffusionIncentiveCompatible)
{
  std::vector<Instance> inst{{"figure2", fixture("figure2.json")}, {"figure5", fixture("figure5.json")}};
  auto m = auction_mechanism(Vcg{});
  auto r = check_ic(m, inst);
  ASSERT_FALSE(r.pass);
  EXPECT_EQ(replay(m, *r.witness), r.witness->delta);
}

TEST(CheckIc, NrmfOverIdmAndTnmOnSmallTrees)
{
  auto inst = tree_instances(5, {{0, 1, 2, 3, 4}, {4, 2, 3, 1, 0}, {1, 1, 3, 3, 2}});
  for (auto m : {nrmf_mechanism(Idm{}), nrmf_mechanism(Tnm{})})
  {
    auto r = check_ic(m, inst);
    EXPECT_TRUE(r.pass) << m.name << ": " << (r.witness ? r.witness->instance + " " + r.witness->description : "");
  }
}

TEST(CheckIc, AuctionsOnRandomDigraphs)
{
  std::mt19937_64 rng(61);
  std::vector<Instance> inst;
  for (int k = 0; k < 40; ++k)
  {
    inst.push_back({"g" + std::to_string(k), oracle::random_digraph(rng, 6, 0.25, 0.35, 5)});
  }
  for (auto m : {auction_mechanism(Idm{}), auction_mechanism(Tnm{}), nrmf_mechanism(Idm{}), nrmf_mechanism(Tnm{})})
  {
    auto r = check_ic(m, inst);
    EXPECT_TRUE(r.pass) << m.name << ": " << (r.witness ? r.witness->instance + " " + r.witness->description : "");
  }
}

TEST(CheckNd, PassesForNrmfAndVcg)
{
  std::mt19937_64 rng(67);
  std::vector<Instance> inst;
  for (int k = 0; k < 100; ++k)
  {
    inst.push_back({"g" + std::to_string(k), oracle::random_digraph(rng, 8, 0.2, 0.3, 9)});
  }
  EXPECT_TRUE(check_nd(nrmf_mechanism(Idm{}), inst).pass);
  EXPECT_TRUE(check_nd(nrmf_mechanism(Tnm{}), inst).pass);
  EXPECT_TRUE(check_nd(auction_mechanism(Vcg{}), inst).pass);
}

TEST(CheckNd, CatchesAPayingMechanism)
{
  std::vector<Instance> inst{{"star", oracle::star({Money(1)})}};
  auto m = paying_out();
  auto r = check_nd(m, inst);
  ASSERT_FALSE(r.pass);
  EXPECT_EQ(replay(m, *r.witness), Money(-1));
}

TEST(RevenueMonotonic, ReflexivePairPasses)
{
  auto p = fixture("figure5.json");
  std::vector<InstancePair> pairs{{"same", p, p}};
  EXPECT_TRUE(check_revenue_monotonic(auction_mechanism(Idm{}), pairs).pass);
}

TEST(RevenueMonotonic, VcgOnGrowingStars)
{
  std::vector<InstancePair> pairs;
  std::mt19937_64 rng(71);
  for (int k = 0; k < 200; ++k)
  {
    std::vector<Money> v;
    for (int i = 0; i < 6; ++i)
    {
      v.emplace_back(std::uniform_int_distribution<int>(0, 9)(rng));
    }
    auto big = oracle::star(v);
    std::vector<AgentIndex> fewer{0, 1, 2};
    pairs.push_back({"star" + std::to_string(k), big.with_sponsor_neighbors(fewer), big});
  }
  EXPECT_TRUE(check_revenue_monotonic(auction_mechanism(Vcg{}), pairs).pass);
}

TEST(RevenueMonotonic, MalformedPairsAreSkipped)
{
  auto p = fixture("figure5.json");
  auto changed = p.with_report(p.index_of("B"), Money(1), {});
  std::vector<InstancePair> pairs{{"bad", p, changed}};
  auto r = check_revenue_monotonic(auction_mechanism(Idm{}), pairs);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.skipped, 1U);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(RevenueMonotonic, IdmAndTnmOverEdgeAndLeafRemovals)
{
  auto shapes = tree_instances(6, {{3, 1, 4, 1, 5, 9}, {2, 7, 1, 8, 2, 8}});
  std::mt19937_64 rng(73);
  for (int k = 0; k < 60; ++k)
  {
    shapes.push_back({"g" + std::to_string(k), oracle::random_digraph(rng, 6, 0.25, 0.35, 6)});
  }
  std::vector<InstancePair> pairs;
  for (auto const &inst : shapes)
  {
    for (auto &pr : edge_removal_pairs(inst))
    {
      pairs.push_back(std::move(pr));
    }
    for (auto &pr : leaf_removal_pairs(inst))
    {
      pairs.push_back(std::move(pr));
    }
  }
  for (auto m : {auction_mechanism(Idm{}), auction_mechanism(Tnm{})})
  {
    auto r = check_revenue_monotonic(m, pairs);
    EXPECT_TRUE(r.pass) << m.name << ": " << (r.witness ? r.witness->description : "");
    if (!r.pass)
    {
      EXPECT_EQ(replay(m, *r.witness), r.witness->delta);
    }
  }
}

TEST(RevenueInvariant, LowLeavesLeaveRevenueUnchanged)
{
  auto shapes = tree_instances(5, {{3, 1, 4, 1, 5}, {6, 2, 7, 2, 3}});
  std::vector<InstancePair> pairs;
  for (auto const &inst : shapes)
  {
    pairs.push_back(append_leaf_pair(inst, kNoAgent, Money(0)));
    for (AgentIndex h = 0; h < inst.truth.size(); ++h)
    {
      pairs.push_back(append_leaf_pair(inst, h, Money(0)));
    }
  }
  for (auto m : {auction_mechanism(Idm{}), auction_mechanism(Tnm{})})
  {
    auto r = check_revenue_invariant(m, pairs);
    EXPECT_TRUE(r.pass) << m.name << ": " << (r.witness ? r.witness->description : "");
    EXPECT_GT(r.instances, 0U);
  }
}

TEST(RevenueInvariant, NewWinnerPairsAreFiltered)
{
  Instance inst{"star", oracle::star({Money(2), Money(3)})};
  auto pair = append_leaf_pair(inst, 0, Money(10));
  auto m = auction_mechanism(Idm{});
  EXPECT_FALSE(no_new_potential_winner(m, pair));
  std::vector<InstancePair> pairs{pair};
  auto r = check_revenue_invariant(m, pairs);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.skipped, 1U);
}

TEST(Subsets, SampledAboveTheDegreeCap)
{
  std::vector<AgentIndex> many(10);
  for (AgentIndex i = 0; i < 10; ++i)
  {
    many[i] = i + 1;
  }
  DeviationSpace space;
  space.sampled_subsets = 20;
  auto subsets = detail::neighbor_subsets(many, space, 0);
  EXPECT_EQ(subsets.size(), 22U);
  EXPECT_TRUE(subsets.front().empty());
  EXPECT_EQ(subsets.back(), many);
  EXPECT_EQ(detail::neighbor_subsets(std::vector<AgentIndex>{1, 2, 3}, space, 0).size(), 8U);
}
