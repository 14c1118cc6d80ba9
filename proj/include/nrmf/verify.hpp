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

// Brute-force property audits of a mechanism over a finite deviation space.
//
// Instances carry true types: each is a truthful profile, and agent i deviates
// unilaterally to (v', r') with r' a subset of her true neighbours. Checks are
// exhaustive within the space; the first failure in canonical order (agents by
// id, valuation candidates with the true value first then ascending, neighbour
// subsets by bitmask with the empty set first) becomes the witness.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nrmf/auctions.hpp"
#include "nrmf/error.hpp"
#include "nrmf/framework.hpp"
#include "nrmf/network.hpp"
#include "nrmf/rational.hpp"

namespace nrmf {

/// Any mechanism over report profiles, seen through its allocation, payments
/// and surplus.
struct Mechanism
{
  std::string name;
  std::function<AuctionOutcome(ReportProfile const &)> run;

  AuctionOutcome operator()(ReportProfile const &profile) const
  {
    return run(profile);
  }
};

inline Mechanism auction_mechanism(MechanismId const &id)
{
  return {to_string(id), [id](ReportProfile const &p) {
            auto graph = induce_graph(p);
            if (graph.reachable_agents().empty())
            {
              return AuctionOutcome(p.size());
            }
            return run_auction(id, p, graph, critical_tree(graph));
          }};
}

inline Mechanism nrmf_mechanism(MechanismId const &id, Rational const &alpha = Rational(1, 2))
{
  return {"nrmf(" + to_string(id) + ")",
          [id, alpha](ReportProfile const &p) { return run_nrmf(id, p, alpha).as_auction(); }};
}

inline Mechanism cavallo_mechanism()
{
  return {"cavallo", [](ReportProfile const &p) {
            if (induce_graph(p).reachable_agents().empty())
            {
              return AuctionOutcome(p.size());
            }
            return cavallo(p).as_auction();
          }};
}

/// `vcg | idm | tnm | fixed:<p> | cavallo`; auctions are wrapped by the
/// framework unless `auction_only` is set. Cavallo is never wrapped.
inline Mechanism make_mechanism(std::string_view name, Rational const &alpha, bool auction_only)
{
  if (name == "cavallo")
  {
    return cavallo_mechanism();
  }
  MechanismId id = parse_mechanism(name);
  return auction_only ? auction_mechanism(id) : nrmf_mechanism(id, alpha);
}

enum class Property
{
  ir,
  ic,
  nd,
  revenue_monotonic,
  revenue_invariant,
  abb_trend,
};

inline std::string to_string(Property p)
{
  switch (p)
  {
  case Property::ir:
    return "IR";
  case Property::ic:
    return "IC";
  case Property::nd:
    return "ND";
  case Property::revenue_monotonic:
    return "RevenueMonotonic";
  case Property::revenue_invariant:
    return "RevenueInvariant";
  case Property::abb_trend:
    return "ABB-trend";
  }
  return "unknown";
}

inline Property parse_property(std::string_view text)
{
  if (text == "ir")
  {
    return Property::ir;
  }
  if (text == "ic")
  {
    return Property::ic;
  }
  if (text == "nd")
  {
    return Property::nd;
  }
  if (text == "rev-mono")
  {
    return Property::revenue_monotonic;
  }
  if (text == "rev-inv")
  {
    return Property::revenue_invariant;
  }
  throw ParseError("unknown property \"" + std::string(text) + "\"");
}

struct Instance
{
  std::string name;
  ReportProfile truth;
};

struct InstancePair
{
  std::string name;
  ReportProfile smaller;  // theta'
  ReportProfile larger;   // theta''
};

struct DeviationSpace
{
  /// Explicit valuation candidates; when empty, `order_statistic_grid` is
  /// derived per instance.
  std::vector<Money> valuation_grid;
  Money step{1};
  /// Neighbour sets up to this size are enumerated in full.
  std::size_t max_full_degree = 8;
  std::size_t sampled_subsets = 256;
  std::uint64_t seed = 0;
};

/// {0} together with every distinct value v, v - step and v + step (negatives
/// dropped), plus the midpoint of each pair of consecutive points.
inline std::vector<Money> order_statistic_grid(ReportProfile const &profile, Money const &step = Money(1))
{
  std::set<Money> points{Money(0)};
  for (AgentIndex i = 0; i < profile.size(); ++i)
  {
    Money const &v = profile.value(i);
    points.insert(v);
    points.insert(v + step);
    if (v >= step)
    {
      points.insert(v - step);
    }
  }
  std::vector<Money> grid(points.begin(), points.end());
  std::vector<Money> out;
  out.reserve(grid.size() * 2);
  for (std::size_t k = 0; k < grid.size(); ++k)
  {
    if (k > 0)
    {
      out.push_back((grid[k - 1] + grid[k]) / 2);
    }
    out.push_back(grid[k]);
  }
  return out;
}

struct Witness
{
  Property property = Property::ic;
  std::string instance;
  AgentIndex agent = kNoAgent;
  std::string description;
  /// The profile the failure was observed against (truthful for deviations,
  /// theta' for pairs) and the deviating report or theta''.
  ReportProfile base;
  std::optional<ReportProfile> other;
  std::optional<AgentType> deviation;
  /// Utility gain (IC), utility (IR), surplus (ND) or S'' - S' (pairs).
  Money delta{0};
};

struct PropertyReport
{
  Property property = Property::ic;
  std::string mechanism;
  bool pass = true;
  std::optional<Witness> witness;
  std::size_t instances = 0;
  std::size_t cases = 0;
  std::size_t skipped = 0;
  std::string space;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::vector<AgentIndex>> neighbor_subsets(std::span<AgentIndex const> neighbors,
                                                             DeviationSpace const &space, AgentIndex agent)
{
  std::size_t const d = neighbors.size();
  auto subset = [&](std::uint64_t mask) {
    std::vector<AgentIndex> r;
    for (std::size_t b = 0; b < d; ++b)
    {
      if ((mask >> b) & 1U)
      {
        r.push_back(neighbors[b]);
      }
    }
    return r;
  };
  std::vector<std::vector<AgentIndex>> out;
  if (d <= space.max_full_degree)
  {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask)
    {
      out.push_back(subset(mask));
    }
    return out;
  }
  std::mt19937_64 rng(space.seed ^ (0x9e3779b97f4a7c15ULL * (agent + 1)));
  std::bernoulli_distribution coin(0.5);
  out.push_back({});
  for (std::size_t k = 0; k < space.sampled_subsets; ++k)
  {
    std::vector<AgentIndex> r;
    for (AgentIndex j : neighbors)
    {
      if (coin(rng))
      {
        r.push_back(j);
      }
    }
    out.push_back(std::move(r));
  }
  out.emplace_back(neighbors.begin(), neighbors.end());
  return out;
}

inline Money utility_of(AuctionOutcome const &outcome, AgentIndex i, Money const &true_value)
{
  return outcome.allocation[i] != 0 ? Money(true_value - outcome.payment[i]) : Money(-outcome.payment[i]);
}

inline std::string describe_deviation(ReportProfile const &truth, AgentIndex i, Money const &value,
                                      std::vector<AgentIndex> const &neighbors)
{
  std::string const &who = truth.id(i).value;
  std::vector<std::string> withheld;
  for (AgentIndex j : truth.neighbors(i))
  {
    if (!std::binary_search(neighbors.begin(), neighbors.end(), j))
    {
      withheld.push_back(truth.id(j).value);
    }
  }
  std::string out = who;
  bool const misreports = value != truth.value(i);
  if (misreports)
  {
    out += " reports value " + to_exact(value);
  }
  if (!withheld.empty())
  {
    out += misreports ? " and withholds " : " withholds ";
    for (std::size_t k = 0; k < withheld.size(); ++k)
    {
      out += (k > 0 ? "," : "") + withheld[k];
    }
  }
  if (!misreports && withheld.empty())
  {
    out += " reports truthfully";
  }
  return out;
}

inline std::string describe_space(DeviationSpace const &space)
{
  std::string grid = space.valuation_grid.empty() ? "order-statistic grid (step " + to_exact(space.step) + ")"
                                                  : std::to_string(space.valuation_grid.size()) + "-point grid";
  return grid + " x neighbour subsets (powerset up to degree " + std::to_string(space.max_full_degree) + ", " +
         std::to_string(space.sampled_subsets) + " samples above)";
}

inline void warn_if_vacuous(PropertyReport &report)
{
  if (report.instances == 0)
  {
    report.warnings.push_back("no instances: vacuous pass");
  }
}

}  // namespace detail

/// Truthful valuation with every subset of true neighbours yields u_i >= 0.
inline PropertyReport check_ir(Mechanism const &mechanism, std::span<Instance const> instances,
                               DeviationSpace const &space = {})
{
  PropertyReport report;
  report.property = Property::ir;
  report.mechanism = mechanism.name;
  report.space = "true valuation x neighbour subsets";
  for (Instance const &inst : instances)
  {
    ++report.instances;
    ReportProfile const &truth = inst.truth;
    for (AgentIndex i = 0; i < truth.size(); ++i)
    {
      for (auto &subset : detail::neighbor_subsets(truth.neighbors(i), space, i))
      {
        ++report.cases;
        ReportProfile reported = truth.with_report(i, truth.value(i), subset);
        Money const u = detail::utility_of(mechanism(reported), i, truth.value(i));
        if (sgn(u) < 0)
        {
          Witness w;
          w.property = Property::ir;
          w.instance = inst.name;
          w.agent = i;
          w.description = detail::describe_deviation(truth, i, truth.value(i), subset);
          w.base = truth;
          w.deviation = reported.report(i);
          w.delta = u;
          report.pass = false;
          report.witness = std::move(w);
          return report;
        }
      }
    }
  }
  detail::warn_if_vacuous(report);
  return report;
}

/// No unilateral deviation in the space beats the truthful report.
inline PropertyReport check_ic(Mechanism const &mechanism, std::span<Instance const> instances,
                               DeviationSpace const &space = {})
{
  PropertyReport report;
  report.property = Property::ic;
  report.mechanism = mechanism.name;
  report.space = detail::describe_space(space);
  for (Instance const &inst : instances)
  {
    ++report.instances;
    ReportProfile const &truth = inst.truth;
    AuctionOutcome const honest = mechanism(truth);
    std::vector<Money> const grid =
      space.valuation_grid.empty() ? order_statistic_grid(truth, space.step) : space.valuation_grid;
    for (AgentIndex i = 0; i < truth.size(); ++i)
    {
      Money const &v = truth.value(i);
      Money const truthful_u = detail::utility_of(honest, i, v);
      std::vector<Money> candidates{v};
      for (Money const &g : grid)
      {
        if (g != v)
        {
          candidates.push_back(g);
        }
      }
      auto const subsets = detail::neighbor_subsets(truth.neighbors(i), space, i);
      std::vector<AgentIndex> const full(truth.neighbors(i).begin(), truth.neighbors(i).end());
      for (Money const &value : candidates)
      {
        for (auto const &subset : subsets)
        {
          if (value == v && subset == full)
          {
            continue;
          }
          ++report.cases;
          ReportProfile reported = truth.with_report(i, value, subset);
          Money const gain = detail::utility_of(mechanism(reported), i, v) - truthful_u;
          if (sgn(gain) > 0)
          {
            Witness w;
            w.property = Property::ic;
            w.instance = inst.name;
            w.agent = i;
            w.description = detail::describe_deviation(truth, i, value, subset);
            w.base = truth;
            w.deviation = reported.report(i);
            w.delta = gain;
            report.pass = false;
            report.witness = std::move(w);
            return report;
          }
        }
      }
    }
  }
  detail::warn_if_vacuous(report);
  return report;
}

/// Surplus is non-negative on every truthful profile.
inline PropertyReport check_nd(Mechanism const &mechanism, std::span<Instance const> instances)
{
  PropertyReport report;
  report.property = Property::nd;
  report.mechanism = mechanism.name;
  report.space = "truthful profiles";
  for (Instance const &inst : instances)
  {
    ++report.instances;
    ++report.cases;
    Money const s = mechanism(inst.truth).surplus;
    if (sgn(s) < 0)
    {
      Witness w;
      w.property = Property::nd;
      w.instance = inst.name;
      w.description = "surplus " + to_exact(s) + " on " + inst.name;
      w.base = inst.truth;
      w.delta = s;
      report.pass = false;
      report.witness = std::move(w);
      return report;
    }
  }
  detail::warn_if_vacuous(report);
  return report;
}

/// Well-formed pair: same agents, D_s(theta') within D_s(theta''), agents of
/// D_s(theta') keep their values, and r'_i is a subset of r''_i for everyone.
inline std::optional<std::string> pair_problem(InstancePair const &pair)
{
  ReportProfile const &a = pair.smaller;
  ReportProfile const &b = pair.larger;
  if (!std::ranges::equal(a.ids(), b.ids()))
  {
    return "profiles have different agents";
  }
  auto const ga = induce_graph(a);
  auto const gb = induce_graph(b);
  for (AgentIndex i : ga.reachable_agents())
  {
    if (!gb.reachable(i))
    {
      return "agent \"" + a.id(i).value + "\" participates only in the smaller profile";
    }
    if (a.value(i) != b.value(i))
    {
      return "agent \"" + a.id(i).value + "\" changes value";
    }
  }
  for (AgentIndex i = 0; i < a.size(); ++i)
  {
    if (!std::ranges::includes(b.neighbors(i), a.neighbors(i)))
    {
      return "agent \"" + a.id(i).value + "\" drops neighbours in the larger profile";
    }
  }
  return std::nullopt;
}

/// New participants of theta'' cannot win theta'' even after the winner of
/// theta' and all her critical ancestors are removed.
inline bool no_new_potential_winner(Mechanism const &mechanism, InstancePair const &pair)
{
  auto const ga = induce_graph(pair.smaller);
  auto const gb = induce_graph(pair.larger);
  auto is_new = [&](AgentIndex i) { return i != kNoAgent && gb.reachable(i) && !ga.reachable(i); };
  if (is_new(mechanism(pair.larger).winner))
  {
    return false;
  }
  AgentIndex const w = mechanism(pair.smaller).winner;
  if (w == kNoAgent)
  {
    return true;
  }
  std::vector<AgentIndex> removed = critical_tree(gb).path_to(w);
  return !is_new(mechanism(without_agents(pair.larger, removed)).winner);
}

namespace detail {

inline PropertyReport check_pairs(Property property, Mechanism const &mechanism, std::span<InstancePair const> pairs)
{
  PropertyReport report;
  report.property = property;
  report.mechanism = mechanism.name;
  report.space = property == Property::revenue_monotonic ? "S(theta') <= S(theta'')"
                                                         : "S(theta') == S(theta'') on qualifying pairs";
  for (InstancePair const &pair : pairs)
  {
    if (auto problem = pair_problem(pair))
    {
      ++report.skipped;
      report.warnings.push_back(pair.name + ": skipped, " + *problem);
      continue;
    }
    if (property == Property::revenue_invariant && !no_new_potential_winner(mechanism, pair))
    {
      ++report.skipped;
      continue;
    }
    ++report.instances;
    ++report.cases;
    Money const delta = mechanism(pair.larger).surplus - mechanism(pair.smaller).surplus;
    bool const bad = property == Property::revenue_monotonic ? sgn(delta) < 0 : sgn(delta) != 0;
    if (bad)
    {
      Witness w;
      w.property = property;
      w.instance = pair.name;
      w.description = "S(theta'') - S(theta') = " + to_exact(delta) + " on " + pair.name;
      w.base = pair.smaller;
      w.other = pair.larger;
      w.delta = delta;
      report.pass = false;
      report.witness = std::move(w);
      return report;
    }
  }
  warn_if_vacuous(report);
  return report;
}

}  // namespace detail

inline PropertyReport check_revenue_monotonic(Mechanism const &mechanism, std::span<InstancePair const> pairs)
{
  return detail::check_pairs(Property::revenue_monotonic, mechanism, pairs);
}

inline PropertyReport check_revenue_invariant(Mechanism const &mechanism, std::span<InstancePair const> pairs)
{
  return detail::check_pairs(Property::revenue_invariant, mechanism, pairs);
}

/// Re-executes a witness and returns the recomputed delta.
inline Money replay(Mechanism const &mechanism, Witness const &w)
{
  switch (w.property)
  {
  case Property::ir:
  case Property::ic: {
    ReportProfile const &truth = w.base;
    Money const &v = truth.value(w.agent);
    std::vector<AgentIndex> neighbors;
    for (auto const &ref : w.deviation->neighbors)
    {
      neighbors.push_back(truth.index_of(ref));
    }
    Money const deviating = detail::utility_of(mechanism(truth.with_report(w.agent, w.deviation->value, neighbors)),
                                               w.agent, v);
    if (w.property == Property::ir)
    {
      return deviating;
    }
    return deviating - detail::utility_of(mechanism(truth), w.agent, v);
  }
  case Property::nd:
    return mechanism(w.base).surplus;
  case Property::revenue_monotonic:
  case Property::revenue_invariant:
    return mechanism(*w.other).surplus - mechanism(w.base).surplus;
  case Property::abb_trend:
    break;
  }
  throw ValidationError("witness kind cannot be replayed");
}

/// theta' from theta'' by deleting one invitation edge (sponsor edges too).
inline std::vector<InstancePair> edge_removal_pairs(Instance const &inst)
{
  std::vector<InstancePair> out;
  ReportProfile const &p = inst.truth;
  auto const sponsor = p.sponsor_neighbors();
  for (std::size_t k = 0; k < sponsor.size(); ++k)
  {
    std::vector<AgentIndex> rest(sponsor.begin(), sponsor.end());
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
    out.push_back({inst.name + " -(s," + p.id(sponsor[k]).value + ")", p.with_sponsor_neighbors(rest), p});
  }
  for (AgentIndex i = 0; i < p.size(); ++i)
  {
    auto const adj = p.neighbors(i);
    for (std::size_t k = 0; k < adj.size(); ++k)
    {
      std::vector<AgentIndex> rest(adj.begin(), adj.end());
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      out.push_back({inst.name + " -(" + p.id(i).value + "," + p.id(adj[k]).value + ")",
                     p.with_report(i, p.value(i), rest), p});
    }
  }
  return out;
}

/// theta' from theta'' by cutting off one critical-tree leaf.
inline std::vector<InstancePair> leaf_removal_pairs(Instance const &inst)
{
  std::vector<InstancePair> out;
  ReportProfile const &p = inst.truth;
  auto const tree = critical_tree(p);
  for (AgentIndex i : tree.preorder())
  {
    if (tree.children(i).empty())
    {
      out.push_back({inst.name + " -leaf " + p.id(i).value, without_agents(p, {i}), p});
    }
  }
  return out;
}

/// theta'' from theta' by letting `host` invite a silent agent reporting
/// `value`; the agent is present in both profiles but unreachable in theta'.
inline InstancePair append_leaf_pair(Instance const &inst, AgentIndex host, Money const &value)
{
  ReportProfile const &p = inst.truth;
  std::vector<AgentId> ids(p.ids().begin(), p.ids().end());
  std::string leaf = "~";
  while (std::ranges::find(ids, AgentId(leaf)) != ids.end())
  {
    leaf += "~";
  }
  std::map<AgentId, AgentType> reports = p.reports();
  reports.emplace(AgentId(leaf), AgentType{value, {}});
  auto const sponsor = p.sponsor_neighbor_ids();
  ReportProfile smaller(sponsor, reports);
  if (host == kNoAgent)
  {
    auto larger_sponsor = sponsor;
    larger_sponsor.emplace_back(leaf);
    return {inst.name + " +leaf@s", smaller, ReportProfile(larger_sponsor, reports)};
  }
  reports.at(p.id(host)).neighbors.emplace_back(leaf);
  return {inst.name + " +leaf@" + p.id(host).value, smaller, ReportProfile(sponsor, reports)};
}

}  // namespace nrmf
