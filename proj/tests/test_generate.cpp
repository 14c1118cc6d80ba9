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

#include "nrmf/generate.hpp"

using namespace nrmf;

TEST(Generate, SingleAgentIsASponsorNeighbour)
{
  GrowthModel m;
  auto p = generate(m, 1);
  ASSERT_EQ(p.size(), 1U);
  EXPECT_EQ(p.sponsor_neighbors().size(), 1U);
  EXPECT_THROW(generate(m, 0), ValidationError);
}

TEST(Generate, SameSeedSameProfile)
{
  for (auto kind : {GrowthKind::evenly_growing, GrowthKind::branch_independent})
  {
    GrowthModel m;
    m.kind = kind;
    m.initial_branches = 3;
    m.seed = 99;
    EXPECT_EQ(generate(m, 300), generate(m, 300));
    GrowthModel other = m;
    other.seed = 100;
    EXPECT_FALSE(generate(m, 300) == generate(other, 300));
  }
}

TEST(Generate, CriticalTreeIsTheGeneratedTree)
{
  GrowthModel m;
  m.seed = 5;
  std::seed_seq seq{1, 2, 3};
  std::mt19937_64 rng(seq);
  auto parents = grow_tree(m, 200, rng);
  std::vector<Money> values(200, Money(1));
  auto p = profile_from_tree(parents, values);
  auto t = critical_tree(p);
  for (AgentIndex i = 0; i < 200; ++i)
  {
    EXPECT_EQ(t.parent(i), parents[i]);
  }
}

TEST(Generate, ValuesStayOnTheGrid)
{
  GrowthModel m;
  m.seed = 8;
  auto p = generate(m, 500);
  for (AgentIndex i = 0; i < p.size(); ++i)
  {
    EXPECT_GE(p.value(i), Money(0));
    EXPECT_LE(p.value(i), Money(100));
    EXPECT_EQ(Money(p.value(i) * 100).get_den(), 1);
  }
}

TEST(Generate, BranchIndependentFractionsNearUniform)
{
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL})
  {
    GrowthModel m;
    m.kind = GrowthKind::branch_independent;
    m.initial_branches = 4;
    m.seed = seed;
    auto p = generate(m, 10000);
    auto t = critical_tree(p);
    ASSERT_EQ(t.root_branches().size(), 4U);
    for (auto const &f : branch_fractions(t))
    {
      EXPECT_NEAR(to_double(f), 0.25, 0.05) << "seed " << seed;
    }
  }
}

TEST(Generate, EvenlyGrowingLargestBranchShrinks)
{
  auto median_top = [](std::size_t n) {
    std::vector<double> tops;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
      GrowthModel m;
      m.seed = seed;
      auto f = branch_fractions(critical_tree(generate(m, n)));
      tops.push_back(to_double(*std::max_element(f.begin(), f.end())));
    }
    std::sort(tops.begin(), tops.end());
    return tops[10];
  };
  double const small = median_top(50);
  double const mid = median_top(500);
  double const large = median_top(5000);
  EXPECT_GT(small, mid);
  EXPECT_GT(mid, large);
}

TEST(Generate, PaddedIdsSortInCreationOrder)
{
  auto ids = padded_ids(120);
  EXPECT_EQ(ids.front().value, "a000");
  EXPECT_EQ(ids.back().value, "a119");
  EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
}

TEST(Generate, RejectsBadModels)
{
  GrowthModel m;
  m.kind = GrowthKind::branch_independent;
  m.initial_branches = 0;
  EXPECT_THROW(generate(m, 5), ValidationError);
  m.initial_branches = 6;
  EXPECT_THROW(generate(m, 5), ValidationError);
  EXPECT_THROW(parse_growth_kind("preferential"), ParseError);
}
