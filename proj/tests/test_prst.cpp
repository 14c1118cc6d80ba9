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
#include "nrmf/prst.hpp"
#include "support/oracles.hpp"

using namespace nrmf;

namespace {

Rational sum(std::vector<Rational> const &v)
{
  Rational s(0);
  for (auto const &x : v)
  {
    s += x;
  }
  return s;
}

Rational random_alpha(std::mt19937_64 &rng)
{
  unsigned long den = std::uniform_int_distribution<unsigned long>(2, 1000)(rng);
  unsigned long num = std::uniform_int_distribution<unsigned long>(1, den - 1)(rng);
  Rational a(num, den);
  a.canonicalize();
  return a;
}

}  // namespace

TEST(Prst, FigureThreeCoefficients)
{
  auto p = ingest(std::string(NRMF_TEST_DATA) + "/figure3.json");
  ASSERT_EQ(p.size(), 18U);
  auto s = prst(critical_tree(p), SharingParams{Rational(1, 2), Money(1)});
  EXPECT_EQ(s.omega[p.index_of("A")], Rational(8, 39));
  EXPECT_EQ(s.omega[p.index_of("B")], Rational(7, 117));
  EXPECT_EQ(s.omega_pass[p.index_of("A")], Rational(5, 39));
  EXPECT_EQ(share_totals(s), Money(1));
}

TEST(Prst, StarSharesEqually)
{
  for (auto alpha : {Rational(1, 10), Rational(1, 2), Rational(9, 10)})
  {
    auto s = prst(critical_tree(oracle::star(std::vector<Money>(5, Money(1)))), SharingParams{alpha, Money(1)});
    for (auto const &w : s.omega)
    {
      EXPECT_EQ(w, Rational(1, 5));
    }
  }
}

TEST(Prst, ChainGivesEverythingToTheTop)
{
  auto t = CriticalTree::from_parents({3, 0, 1});
  for (auto alpha : {Rational(1, 4), Rational(3, 4)})
  {
    auto s = prst(t, SharingParams{alpha, Money(1)});
    EXPECT_EQ(s.omega[0], Rational(1));
    EXPECT_EQ(s.omega[1], Rational(0));
    EXPECT_EQ(s.omega[2], Rational(0));
    EXPECT_EQ(s.omega_pass[0], Rational(0));
  }
}

TEST(Prst, ZeroRewardSharesNothing)
{
  auto s = prst(CriticalTree::from_parents({2, 0}), SharingParams{Rational(1, 2), Money(0)});
  EXPECT_EQ(share_totals(s), Money(0));
}

TEST(Prst, SharesScaleWithReward)
{
  auto t = CriticalTree::from_parents({4, 0, 0, 4});
  auto s = prst(t, SharingParams{Rational(1, 3), Money(7)});
  for (AgentIndex i = 0; i < 4; ++i)
  {
    EXPECT_EQ(s.share[i], s.omega[i] * 7);
  }
  EXPECT_EQ(share_totals(s), Money(7));
}

TEST(Prst, RejectsInvalidParameters)
{
  auto t = CriticalTree::from_parents({1});
  EXPECT_THROW(prst(t, SharingParams{Rational(0), Money(1)}), ValidationError);
  EXPECT_THROW(prst(t, SharingParams{Rational(1), Money(1)}), ValidationError);
  EXPECT_THROW(prst(t, SharingParams{Rational(1, 2), Money(-1)}), ValidationError);
  EXPECT_THROW(prst(CriticalTree::from_parents({kNoAgent}), SharingParams{}), ValidationError);
}

TEST(Prst, ExactUnitTotalOnRandomTrees)
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial)
  {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    auto parents = oracle::random_parents(rng, n);
    auto s = prst(CriticalTree::from_parents(parents), SharingParams{random_alpha(rng), Money(1)});
    ASSERT_EQ(sum(s.omega), Rational(1)) << "trial " << trial;
  }
}

TEST(Prst, AgreesWithDirectRecursion)
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial)
  {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
    auto parents = oracle::random_parents(rng, n);
    Rational alpha = random_alpha(rng);
    auto s = prst(CriticalTree::from_parents(parents), SharingParams{alpha, Money(1)});
    EXPECT_EQ(s.omega, oracle::shares(parents, alpha));
  }
}

TEST(Prst, NonNegativeAndSubtreeIdentity)
{
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial)
  {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
    auto t = CriticalTree::from_parents(oracle::random_parents(rng, n));
    auto s = prst(t, SharingParams{random_alpha(rng), Money(1)});
    for (AgentIndex i = 0; i < n; ++i)
    {
      EXPECT_GE(sgn(s.omega[i]), 0);
      EXPECT_GE(sgn(s.omega_pass[i]), 0);
      Rational block = s.omega[i];
      for (AgentIndex j : t.subtree(i))
      {
        block += s.omega[j];
      }
      AgentIndex const p = t.parent(i);
      Rational const pass = p == t.sponsor() ? Rational(1) : s.omega_pass[p];
      Rational frac(static_cast<unsigned long>(t.descendant_count(i) + 1),
                    static_cast<unsigned long>(t.descendant_count(p)));
      frac.canonicalize();
      EXPECT_EQ(block, pass * frac);
    }
  }
}

TEST(Prst, StrictlyIncreasingInAlphaAwayFromTheSplit)
{
  std::mt19937_64 rng(21);
  std::vector<Rational> alphas{Rational(1, 10), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(9, 10)};
  for (int trial = 0; trial < 100; ++trial)
  {
    std::size_t n = std::uniform_int_distribution<std::size_t>(2, 25)(rng);
    auto t = CriticalTree::from_parents(oracle::random_parents(rng, n));
    std::vector<ShareVector> runs;
    for (auto const &a : alphas)
    {
      runs.push_back(prst(t, SharingParams{a, Money(1)}));
    }
    // Root branches hold a fixed pass-down mass of one, so their coefficient
    // is affine in alpha with slope total - base.
    for (AgentIndex i : t.root_branches())
    {
      std::size_t const ci = t.descendant_count(i);
      std::size_t const cs = t.descendant_count(t.sponsor());
      Rational total(static_cast<unsigned long>(ci + 1), static_cast<unsigned long>(cs));
      total.canonicalize();
      Rational const base(1UL, static_cast<unsigned long>(cs - ci));
      if (total > base)
      {
        for (std::size_t k = 1; k < alphas.size(); ++k)
        {
          EXPECT_GT(runs[k].omega[i], runs[k - 1].omega[i]);
        }
      }
    }
  }
}

TEST(Prst, BlockingNeverRaisesAnAncestor)
{
  for (std::size_t n = 1; n <= 6; ++n)
  {
    for (auto const &parents : oracle::rooted_trees(n))
    {
      for (auto alpha : {Rational(1, 4), Rational(1, 2), Rational(3, 4)})
      {
        EXPECT_EQ(oracle::blocking_violation(parents, alpha), "");
      }
    }
  }
}

TEST(Prst, RootedTreeCounts)
{
  std::vector<std::size_t> expected{1, 1, 2, 4, 9, 20, 48, 115};
  for (std::size_t n = 0; n < expected.size(); ++n)
  {
    EXPECT_EQ(oracle::rooted_trees(n).size(), expected[n]) << n;
  }
}
