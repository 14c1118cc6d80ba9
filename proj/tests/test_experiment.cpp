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

#include "nrmf/experiment.hpp"
#include "support/oracles.hpp"

using namespace nrmf;

TEST(Median, OddAndEven)
{
  EXPECT_EQ(median({Money(3), Money(1), Money(2)}), Money(2));
  EXPECT_EQ(median({Money(4), Money(1), Money(2), Money(3)}), Money(5, 2));
  EXPECT_EQ(median({}), Money(0));
}

TEST(Abb, EvenlyGrowingSurplusFalls)
{
  GrowthModel m;
  m.seed = 1;
  auto r = abb_experiment(Idm{}, m, {50, 400}, 10);
  ASSERT_EQ(r.summaries.size(), 2U);
  EXPECT_EQ(r.summaries[0].runs, 10U);
  EXPECT_LT(r.summaries[1].median_surplus, r.summaries[0].median_surplus);
  EXPECT_EQ(r.records.size(), 20U);
  for (auto const &rec : r.records)
  {
    EXPECT_GE(sgn(rec.surplus), 0);
  }
}

TEST(Abb, BranchIndependentRespectsTheBound)
{
  GrowthModel m;
  m.kind = GrowthKind::branch_independent;
  m.initial_branches = 5;
  m.seed = 2;
  auto r = abb_experiment(Tnm{}, m, {20, 100}, 5);
  EXPECT_TRUE(r.pass);
  for (auto const &rec : r.records)
  {
    ASSERT_TRUE(rec.bound);
    EXPECT_EQ(*rec.bound, Money(40));
  }
}

TEST(Abb, SingleBranchBoundIsSlack)
{
  GrowthModel m;
  m.kind = GrowthKind::branch_independent;
  m.initial_branches = 1;
  auto r = abb_experiment(Idm{}, m, {30}, 5);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(*r.records.front().bound, Money(200));
}

TEST(Bb, TwoBuyerBranchesGiveZeroSurplus)
{
  GrowthModel m;
  m.kind = GrowthKind::branch_independent;
  m.initial_branches = 3;
  m.seed = 4;
  auto r = bb_experiment(Money(50), m, {10, 30}, 10);
  EXPECT_TRUE(r.pass);
  std::size_t qualifying = 0;
  for (auto const &rec : r.records)
  {
    if (rec.qualifying)
    {
      ++qualifying;
      EXPECT_EQ(rec.surplus, Money(0));
    }
  }
  EXPECT_GT(qualifying, 0U);
}

TEST(Bb, SingleBuyerBranchKeepsTheBranchShare)
{
  // Root branches {A, B->D}; only D can afford 5. The branch of B earns
  // nothing when blocked, the other branch earns the price.
  ReportProfile p({"A", "B"}, {{"A", {Money(1), {}}}, {"B", {Money(1), {"D"}}}, {"D", {Money(6), {}}}});
  auto o = run_nrmf(FixedPrice{Money(5)}, p);
  auto const t = critical_tree(p);
  EXPECT_FALSE(has_two_buyer_branches(p, t, Money(5)));
  EXPECT_EQ(o.auction_surplus, Money(5));
  EXPECT_EQ(o.branch_revenues, (std::vector<Money>{Money(5), Money(0)}));
  EXPECT_EQ(o.surplus, Money(5) - Money(5) * o.omega[p.index_of("A")]);
}

TEST(Bb, NoBuyerNoSurplus)
{
  auto p = oracle::star({Money(1), Money(2)});
  auto o = run_nrmf(FixedPrice{Money(50)}, p);
  EXPECT_EQ(o.surplus, Money(0));
}
