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

// Random invitation trees.
//
// Both generators grow a tree one agent at a time and realise it with
// invitation edges only, so the induced graph is the tree and its critical
// tree is the tree itself.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "nrmf/error.hpp"
#include "nrmf/network.hpp"
#include "nrmf/rational.hpp"

namespace nrmf {

enum class GrowthKind
{
  /// Each newcomer joins the sponsor with probability q, otherwise a
  /// uniformly random existing agent.
  evenly_growing,
  /// A fixed set of root branches; a newcomer picks a branch uniformly and
  /// then a uniformly random member of it.
  branch_independent,
};

inline std::string to_string(GrowthKind kind)
{
  return kind == GrowthKind::evenly_growing ? "evenly_growing" : "branch_independent";
}

inline GrowthKind parse_growth_kind(std::string_view text)
{
  if (text == "evenly_growing" || text == "evenly" || text == "even")
  {
    return GrowthKind::evenly_growing;
  }
  if (text == "branch_independent" || text == "branch")
  {
    return GrowthKind::branch_independent;
  }
  throw ParseError("unknown growth model \"" + std::string(text) + "\"");
}

/// Uniform over {lo, lo + 1/d, ..., hi}.
struct ValueDistribution
{
  Money lo{0};
  Money hi{100};
  unsigned long denominator = 100;
};

struct GrowthModel
{
  GrowthKind kind = GrowthKind::evenly_growing;
  std::size_t initial_branches = 1;
  ValueDistribution values;
  std::uint64_t seed = 0;
  Rational sponsor_probability{1, 4};

  void validate() const
  {
    if (kind == GrowthKind::branch_independent && initial_branches == 0)
    {
      throw ValidationError("branch_independent growth needs at least one branch");
    }
    if (values.denominator == 0 || sgn(values.lo) < 0 || values.hi < values.lo)
    {
      throw ValidationError("invalid value distribution");
    }
    if (sgn(sponsor_probability) < 0 || sponsor_probability > 1)
    {
      throw ValidationError("sponsor probability must lie in [0, 1]");
    }
  }
};

/// Fixed-width ids so that id order equals creation order.
inline std::vector<AgentId> padded_ids(std::size_t n, std::string_view prefix = "a")
{
  std::size_t width = 1;
  for (std::size_t m = n > 0 ? n - 1 : 0; m >= 10; m /= 10)
  {
    ++width;
  }
  std::vector<AgentId> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    std::string digits = std::to_string(i);
    ids.emplace_back(std::string(prefix) + std::string(width - digits.size(), '0') + digits);
  }
  return ids;
}

/// Profile realising the tree `parents` (sponsor = parents.size()).
inline ReportProfile profile_from_tree(std::vector<AgentIndex> const &parents, std::vector<Money> values)
{
  std::size_t const n = parents.size();
  std::vector<std::vector<AgentIndex>> children(n);
  std::vector<AgentIndex> sponsor;
  for (AgentIndex i = 0; i < n; ++i)
  {
    if (parents[i] == n)
    {
      sponsor.push_back(i);
    }
    else
    {
      children.at(parents[i]).push_back(i);
    }
  }
  return ReportProfile::from_indices(padded_ids(n), std::move(values), std::move(children), std::move(sponsor));
}

inline Money draw_value(ValueDistribution const &dist, std::mt19937_64 &rng)
{
  Money const lo_scaled = dist.lo * dist.denominator;
  Money const hi_scaled = dist.hi * dist.denominator;
  mpz_class const lo = lo_scaled.get_num() / lo_scaled.get_den();
  mpz_class const hi = hi_scaled.get_num() / hi_scaled.get_den();
  std::uniform_int_distribution<unsigned long> pick(lo.get_ui(), hi.get_ui());
  Money v(pick(rng), dist.denominator);
  v.canonicalize();
  return v;
}

/// Parent vector of a tree with n agents grown under `model`.
inline std::vector<AgentIndex> grow_tree(GrowthModel const &model, std::size_t n, std::mt19937_64 &rng)
{
  model.validate();
  if (n == 0)
  {
    throw ValidationError("cannot generate an empty network");
  }
  std::vector<AgentIndex> parents;
  parents.reserve(n);
  if (model.kind == GrowthKind::evenly_growing)
  {
    double const q = to_double(model.sponsor_probability);
    std::bernoulli_distribution to_sponsor(q);
    parents.push_back(n);
    for (AgentIndex i = 1; i < n; ++i)
    {
      if (to_sponsor(rng))
      {
        parents.push_back(n);
      }
      else
      {
        parents.push_back(std::uniform_int_distribution<AgentIndex>(0, i - 1)(rng));
      }
    }
    return parents;
  }

  std::size_t const k = model.initial_branches;
  if (n < k)
  {
    throw ValidationError("branch_independent growth needs n >= " + std::to_string(k));
  }
  std::vector<std::vector<AgentIndex>> members(k);
  for (AgentIndex i = 0; i < k; ++i)
  {
    parents.push_back(n);
    members[i].push_back(i);
  }
  std::uniform_int_distribution<std::size_t> branch(0, k - 1);
  for (AgentIndex i = k; i < n; ++i)
  {
    auto &m = members[branch(rng)];
    parents.push_back(m[std::uniform_int_distribution<std::size_t>(0, m.size() - 1)(rng)]);
    m.push_back(i);
  }
  return parents;
}

/// Reproducible from (model.seed, n).
inline ReportProfile generate(GrowthModel const &model, std::size_t n)
{
  std::seed_seq seq{static_cast<std::uint32_t>(model.seed), static_cast<std::uint32_t>(model.seed >> 32),
                    static_cast<std::uint32_t>(n)};
  std::mt19937_64 rng(seq);
  auto parents = grow_tree(model, n, rng);
  std::vector<Money> values;
  values.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    values.push_back(draw_value(model.values, rng));
  }
  return profile_from_tree(parents, std::move(values));
}

/// |T_{m_k}| / |D_s| for each root branch.
inline std::vector<Rational> branch_fractions(CriticalTree const &tree)
{
  std::vector<Rational> out;
  if (tree.empty())
  {
    return out;
  }
  for (AgentIndex root : tree.root_branches())
  {
    Rational f(static_cast<unsigned long>(tree.descendant_count(root) + 1), static_cast<unsigned long>(tree.size()));
    f.canonicalize();
    out.push_back(f);
  }
  return out;
}

}  // namespace nrmf
