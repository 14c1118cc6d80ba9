#pragma once
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

// Surplus of the redistribution mechanism on growing random trees.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nrmf/auctions.hpp"
#include "nrmf/framework.hpp"
#include "nrmf/generate.hpp"
#include "nrmf/network.hpp"
#include "nrmf/rational.hpp"

namespace nrmf {

struct ExperimentRecord
{
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Money surplus{0};
  /// Largest reported value in the instance.
  Money max_value{0};
  std::optional<Money> bound;
  std::vector<Rational> branch_fractions;
  /// bb only: at least two root branches hold a buyer with value >= p.
  bool qualifying = false;
};

struct SizeSummary
{
  std::size_t n = 0;
  std::size_t runs = 0;
  Money median_surplus{0};
  Money mean_surplus{0};
  Money max_surplus{0};
  Rational median_max_branch_fraction{0};
  std::size_t exactly_zero = 0;
};

struct ExperimentResult
{
  std::string kind;
  std::string mechanism;
  GrowthModel model;
  Rational alpha{1, 2};
  /// The distribution's upper value, v-bar.
  Money value_cap{0};
  std::vector<ExperimentRecord> records;
  std::vector<SizeSummary> summaries;
  bool pass = true;
  std::vector<std::string> notes;
};

inline Money median(std::vector<Money> values)
{
  if (values.empty())
  {
    return Money(0);
  }
  std::sort(values.begin(), values.end());
  std::size_t const mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : Money((values[mid - 1] + values[mid]) / 2);
}

inline Rational median_rational(std::vector<Rational> values)
{
  return median(std::move(values));
}

namespace detail {

inline std::uint64_t run_seed(std::uint64_t base, std::uint64_t index)
{
  // splitmix64 step so neighbouring seeds give unrelated streams.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Money max_value(ReportProfile const &p)
{
  Money m(0);
  for (AgentIndex i = 0; i < p.size(); ++i)
  {
    m = std::max(m, p.value(i));
  }
  return m;
}

inline void summarise(ExperimentResult &result)
{
  std::sort(result.records.begin(), result.records.end(),
            [](auto const &a, auto const &b) { return a.n != b.n ? a.n < b.n : a.seed < b.seed; });
  for (std::size_t lo = 0; lo < result.records.size();)
  {
    std::size_t hi = lo;
    SizeSummary s;
    s.n = result.records[lo].n;
    std::vector<Money> surpluses;
    std::vector<Rational> fractions;
    Money total(0);
    while (hi < result.records.size() && result.records[hi].n == s.n)
    {
      auto const &r = result.records[hi];
      surpluses.push_back(r.surplus);
      total += r.surplus;
      s.max_surplus = hi == lo ? r.surplus : std::max(s.max_surplus, r.surplus);
      if (sgn(r.surplus) == 0)
      {
        ++s.exactly_zero;
      }
      fractions.push_back(r.branch_fractions.empty()
                            ? Rational(0)
                            : *std::max_element(r.branch_fractions.begin(), r.branch_fractions.end()));
      ++hi;
    }
    s.runs = hi - lo;
    s.median_surplus = median(surpluses);
    s.mean_surplus = total / Money(static_cast<unsigned long>(s.runs));
    s.median_max_branch_fraction = median_rational(fractions);
    result.summaries.push_back(s);
    lo = hi;
  }
}

}  // namespace detail

/// For evenly growing trees the median surplus at the largest size must fall
/// below the median at the smallest and below 5% of v-bar. For
/// branch-independent trees every surplus must respect (2/K) * v-bar.
inline ExperimentResult abb_experiment(MechanismId const &mechanism, GrowthModel const &model,
                                       std::vector<std::size_t> sizes, std::size_t seeds,
                                       Rational const &alpha = Rational(1, 2))
{
  model.validate();
  std::sort(sizes.begin(), sizes.end());
  ExperimentResult result;
  result.kind = "abb";
  result.mechanism = "nrmf(" + to_string(mechanism) + ")";
  result.model = model;
  result.alpha = alpha;
  result.value_cap = model.values.hi;

  std::optional<Money> bound;
  if (model.kind == GrowthKind::branch_independent)
  {
    bound = Money(2) / Money(static_cast<unsigned long>(model.initial_branches)) * model.values.hi;
  }
  for (std::size_t n : sizes)
  {
    for (std::size_t k = 0; k < seeds; ++k)
    {
      GrowthModel m = model;
      m.seed = detail::run_seed(model.seed, k);
      ReportProfile profile = generate(m, n);
      RedistributionOutcome out = run_nrmf(mechanism, profile, alpha);
      ExperimentRecord r;
      r.n = n;
      r.seed = m.seed;
      r.surplus = out.surplus;
      r.max_value = detail::max_value(profile);
      r.bound = bound;
      r.branch_fractions = branch_fractions(critical_tree(profile));
      if (bound && r.surplus > *bound)
      {
        result.pass = false;
        result.notes.push_back("n=" + std::to_string(n) + " seed=" + std::to_string(m.seed) + ": surplus " +
                               to_exact(r.surplus) + " exceeds " + to_exact(*bound));
      }
      result.records.push_back(std::move(r));
    }
  }
  detail::summarise(result);

  if (model.kind == GrowthKind::evenly_growing && !result.summaries.empty())
  {
    auto const &first = result.summaries.front();
    auto const &last = result.summaries.back();
    Money const tolerance = model.values.hi / 20;
    if (result.summaries.size() > 1 && !(last.median_surplus < first.median_surplus))
    {
      result.pass = false;
      result.notes.push_back("median surplus does not fall from n=" + std::to_string(first.n) + " to n=" +
                             std::to_string(last.n));
    }
    if (!(last.median_surplus < tolerance))
    {
      result.pass = false;
      result.notes.push_back("median surplus at n=" + std::to_string(last.n) + " is not below " +
                             to_exact(tolerance));
    }
    for (std::size_t k = 1; k < result.summaries.size(); ++k)
    {
      if (result.summaries[k].median_surplus > result.summaries[k - 1].median_surplus)
      {
        result.notes.push_back("median surplus rises between n=" + std::to_string(result.summaries[k - 1].n) +
                               " and n=" + std::to_string(result.summaries[k].n));
      }
    }
  }
  return result;
}

/// True when at least two root branches contain an agent with value >= price.
inline bool has_two_buyer_branches(ReportProfile const &profile, CriticalTree const &tree, Money const &price)
{
  std::vector<bool> seen(tree.root_branches().size(), false);
  std::size_t count = 0;
  for (AgentIndex i : tree.preorder())
  {
    std::size_t const k = tree.branch_of(i);
    if (!seen[k] && profile.value(i) >= price)
    {
      seen[k] = true;
      ++count;
    }
  }
  return count >= 2;
}

/// NRMF over the fixed-price auction. Passes when every qualifying instance
/// has surplus exactly zero.
inline ExperimentResult bb_experiment(Money const &price, GrowthModel const &model, std::vector<std::size_t> sizes,
                                      std::size_t seeds, Rational const &alpha = Rational(1, 2))
{
  model.validate();
  std::sort(sizes.begin(), sizes.end());
  ExperimentResult result;
  result.kind = "bb";
  result.mechanism = "nrmf(" + to_string(MechanismId{FixedPrice{price}}) + ")";
  result.model = model;
  result.alpha = alpha;
  result.value_cap = model.values.hi;
  for (std::size_t n : sizes)
  {
    for (std::size_t k = 0; k < seeds; ++k)
    {
      GrowthModel m = model;
      m.seed = detail::run_seed(model.seed, k);
      ReportProfile profile = generate(m, n);
      auto const tree = critical_tree(profile);
      RedistributionOutcome out = run_nrmf(FixedPrice{price}, profile, alpha);
      ExperimentRecord r;
      r.n = n;
      r.seed = m.seed;
      r.surplus = out.surplus;
      r.max_value = detail::max_value(profile);
      r.branch_fractions = branch_fractions(tree);
      r.qualifying = has_two_buyer_branches(profile, tree, price);
      if (r.qualifying && sgn(r.surplus) != 0)
      {
        result.pass = false;
        result.notes.push_back("n=" + std::to_string(n) + " seed=" + std::to_string(m.seed) +
                               ": qualifying instance with surplus " + to_exact(r.surplus));
      }
      result.records.push_back(std::move(r));
    }
  }
  detail::summarise(result);
  return result;
}

}  // namespace nrmf
