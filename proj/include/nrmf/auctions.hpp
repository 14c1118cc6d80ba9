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

// Single-item diffusion auctions.
//
// Every mechanism only looks at agents reachable from the sponsor; everybody
// else gets allocation 0 and payment 0. Argmax ties go to the lowest AgentId.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nrmf/error.hpp"
#include "nrmf/network.hpp"
#include "nrmf/rational.hpp"

namespace nrmf {

/// Second-price auction over D_s.
struct Vcg
{
  friend bool operator==(Vcg, Vcg) = default;
};

/// Information diffusion mechanism.
struct Idm
{
  friend bool operator==(Idm, Idm) = default;
};

/// Threshold neighbourhood mechanism.
struct Tnm
{
  friend bool operator==(Tnm, Tnm) = default;
};

/// Posted price p, offered to the shallowest willing buyer.
struct FixedPrice
{
  Money price;
  friend bool operator==(FixedPrice const &, FixedPrice const &) = default;
};

using MechanismId = std::variant<Vcg, Idm, Tnm, FixedPrice>;

/// One money flow; `to` (or `from`) equal to the agent count denotes the sponsor.
struct Transfer
{
  AgentIndex from;
  AgentIndex to;
  Money amount;
};

struct AuctionOutcome
{
  std::vector<std::uint8_t> allocation;
  /// Net payment: positive pays the sponsor side, negative receives.
  std::vector<Money> payment;
  Money surplus;
  AgentIndex winner = kNoAgent;
  std::vector<Transfer> transfers;

  explicit AuctionOutcome(std::size_t n = 0)
    : allocation(n, 0)
    , payment(n, Money(0))
    , surplus(0)
  {}
};

inline MechanismId parse_mechanism(std::string_view text)
{
  if (text == "vcg")
  {
    return Vcg{};
  }
  if (text == "idm")
  {
    return Idm{};
  }
  if (text == "tnm")
  {
    return Tnm{};
  }
  constexpr std::string_view kFixed = "fixed:";
  if (text.starts_with(kFixed))
  {
    Money price = parse_rational(text.substr(kFixed.size()));
    if (sgn(price) < 0)
    {
      throw ValidationError("fixed price must be non-negative");
    }
    return FixedPrice{price};
  }
  throw ParseError("unknown mechanism \"" + std::string(text) + "\" (expected vcg, idm, tnm or fixed:<price>)");
}

inline std::string to_string(MechanismId const &m)
{
  struct Visitor
  {
    std::string operator()(Vcg) const
    {
      return "vcg";
    }
    std::string operator()(Idm) const
    {
      return "idm";
    }
    std::string operator()(Tnm) const
    {
      return "tnm";
    }
    std::string operator()(FixedPrice const &f) const
    {
      return "fixed:" + (is_terminating_decimal(f.price) ? to_exact_decimal(f.price) : to_exact(f.price));
    }
  };
  return std::visit(Visitor{}, m);
}

namespace detail {

struct Best
{
  Money value{0};
  AgentIndex agent = kNoAgent;
};

inline void consider(Best &best, AgentIndex i, Money const &v)
{
  // Agents arrive in ascending index order, so strict improvement keeps the
  // lowest id among maximizers.
  if (best.agent == kNoAgent || v > best.value)
  {
    best.value = v;
    best.agent = i;
  }
}

inline Best maximum(ReportProfile const &profile, std::vector<AgentIndex> const &agents)
{
  Best best;
  for (AgentIndex i : agents)
  {
    consider(best, i, profile.value(i));
  }
  return best;
}

/// Highest report among D_s minus the subtree rooted at `root` (root removed too).
inline Best maximum_outside(ReportProfile const &profile, InducedGraph const &graph, CriticalTree const &tree,
                            AgentIndex root)
{
  Best best;
  for (AgentIndex i : graph.reachable_agents())
  {
    if (!tree.in_subtree(root, i))
    {
      consider(best, i, profile.value(i));
    }
  }
  return best;
}

inline void record(AuctionOutcome &out, AgentIndex from, AgentIndex to, Money const &amount)
{
  std::size_t const n = out.payment.size();
  out.payment[from] += amount;
  if (to != n)
  {
    out.payment[to] -= amount;
  }
  out.transfers.push_back(Transfer{from, to, amount});
}

inline void finish(AuctionOutcome &out)
{
  out.surplus = 0;
  for (auto const &x : out.payment)
  {
    out.surplus += x;
  }
}

struct CriticalPath
{
  std::vector<AgentIndex> agents;  // c_1 .. c_L
  std::vector<Money> threshold;    // t_k = max over D_s \ T_{c_k}
  std::vector<AgentIndex> threshold_agent;
};

inline CriticalPath critical_path(ReportProfile const &profile, InducedGraph const &graph, CriticalTree const &tree,
                                  AgentIndex top)
{
  CriticalPath path;
  path.agents = tree.path_to(top);
  for (AgentIndex c : path.agents)
  {
    Best b = maximum_outside(profile, graph, tree, c);
    path.threshold.push_back(b.value);
    path.threshold_agent.push_back(b.agent);
  }
  return path;
}

// True when `agent` is the lowest-id maximizer of {agent} together with D_s
// minus the subtree rooted at `root`.
inline bool beats_outside(ReportProfile const &profile, AgentIndex agent, Money const &outside_max,
                          AgentIndex outside_argmax)
{
  Money const &v = profile.value(agent);
  return v > outside_max || (v == outside_max && agent < outside_argmax);
}

}  // namespace detail

inline AuctionOutcome vcg(ReportProfile const &profile, InducedGraph const &graph)
{
  AuctionOutcome out(profile.size());
  auto const &reachable = graph.reachable_agents();
  if (reachable.empty())
  {
    return out;
  }
  detail::Best top = detail::maximum(profile, reachable);
  detail::Best second;
  for (AgentIndex i : reachable)
  {
    if (i != top.agent)
    {
      detail::consider(second, i, profile.value(i));
    }
  }
  out.winner = top.agent;
  out.allocation[top.agent] = 1;
  detail::record(out, top.agent, profile.size(), second.value);
  detail::finish(out);
  return out;
}

inline AuctionOutcome vcg(ReportProfile const &profile)
{
  return vcg(profile, induce_graph(profile));
}

/// IDM: walk the critical path of the highest bidder w*; c_k keeps the item
/// when she is the top bid once the next path agent's critical subtree is
/// removed. Each c_k up to the winner pays t_k to her critical parent, so the
/// net payments are t_k - t_{k+1} for intermediaries, t_m for the winner and
/// the sponsor collects t_1.
inline AuctionOutcome idm(ReportProfile const &profile, InducedGraph const &graph, CriticalTree const &tree)
{
  auto const &reachable = graph.reachable_agents();
  if (reachable.empty())
  {
    throw ValidationError("idm: no agent is reachable from the sponsor");
  }
  AuctionOutcome out(profile.size());
  detail::Best const top = detail::maximum(profile, reachable);
  detail::CriticalPath const path = detail::critical_path(profile, graph, tree, top.agent);
  std::size_t const length = path.agents.size();

  std::size_t winner = length - 1;
  for (std::size_t k = 0; k + 1 < length; ++k)
  {
    std::size_t const next = k + 1;
    // D_s \ T_{c_{k+1}} contains c_k, so its maximum is at least v_{c_k}.
    if (path.threshold_agent[next] == path.agents[k])
    {
      winner = k;
      break;
    }
  }

  std::size_t const n = profile.size();
  for (std::size_t k = 0; k <= winner; ++k)
  {
    AgentIndex const payer = path.agents[k];
    AgentIndex const payee = k == 0 ? n : path.agents[k - 1];
    detail::record(out, payer, payee, path.threshold[k]);
  }
  out.winner = path.agents[winner];
  out.allocation[out.winner] = 1;
  detail::finish(out);
  return out;
}

inline AuctionOutcome idm(ReportProfile const &profile)
{
  auto graph = induce_graph(profile);
  return idm(profile, graph, critical_tree(graph));
}

/// TNM: same critical path as IDM, but c_k keeps the item when she is the top
/// bid once all of her critical descendants are removed. Gross payments match
/// IDM; a parent only receives the top bid outside her own descendants and
/// the residual goes to the sponsor.
inline AuctionOutcome tnm(ReportProfile const &profile, InducedGraph const &graph, CriticalTree const &tree)
{
  auto const &reachable = graph.reachable_agents();
  if (reachable.empty())
  {
    throw ValidationError("tnm: no agent is reachable from the sponsor");
  }
  AuctionOutcome out(profile.size());
  detail::Best const top = detail::maximum(profile, reachable);
  detail::CriticalPath const path = detail::critical_path(profile, graph, tree, top.agent);
  std::size_t const length = path.agents.size();

  std::size_t winner = length - 1;
  for (std::size_t k = 0; k + 1 < length; ++k)
  {
    if (detail::beats_outside(profile, path.agents[k], path.threshold[k], path.threshold_agent[k]))
    {
      winner = k;
      break;
    }
  }

  std::size_t const n = profile.size();
  for (std::size_t k = 0; k <= winner; ++k)
  {
    AgentIndex const payer = path.agents[k];
    Money const &gross = path.threshold[k];
    if (k == 0)
    {
      detail::record(out, payer, n, gross);
      continue;
    }
    AgentIndex const parent = path.agents[k - 1];
    Money parent_share = path.threshold[k - 1];
    if (profile.value(parent) > parent_share)
    {
      parent_share = profile.value(parent);
    }
    if (parent_share > gross)
    {
      parent_share = gross;
    }
    detail::record(out, payer, parent, parent_share);
    Money const residual = gross - parent_share;
    if (sgn(residual) != 0)
    {
      detail::record(out, payer, n, residual);
    }
  }
  out.winner = path.agents[winner];
  out.allocation[out.winner] = 1;
  detail::finish(out);
  return out;
}

inline AuctionOutcome tnm(ReportProfile const &profile)
{
  auto graph = induce_graph(profile);
  return tnm(profile, graph, critical_tree(graph));
}

inline AuctionOutcome fixed_price(ReportProfile const &profile, InducedGraph const &graph, CriticalTree const &tree,
                                  Money const &price)
{
  if (sgn(price) < 0)
  {
    throw ValidationError("fixed price must be non-negative");
  }
  AuctionOutcome out(profile.size());
  AgentIndex best = kNoAgent;
  for (AgentIndex i : graph.reachable_agents())
  {
    if (profile.value(i) >= price && (best == kNoAgent || tree.depth(i) < tree.depth(best)))
    {
      best = i;
    }
  }
  if (best == kNoAgent)
  {
    return out;
  }
  out.winner = best;
  out.allocation[best] = 1;
  detail::record(out, best, profile.size(), price);
  detail::finish(out);
  return out;
}

inline AuctionOutcome fixed_price(ReportProfile const &profile, Money const &price)
{
  auto graph = induce_graph(profile);
  return fixed_price(profile, graph, critical_tree(graph), price);
}

/// Dispatch with a precomputed graph and tree of `profile`.
inline AuctionOutcome run_auction(MechanismId const &mechanism, ReportProfile const &profile,
                                  InducedGraph const &graph, CriticalTree const &tree)
{
  struct Visitor
  {
    ReportProfile const &profile;
    InducedGraph const &graph;
    CriticalTree const &tree;

    AuctionOutcome operator()(Vcg) const
    {
      return vcg(profile, graph);
    }
    AuctionOutcome operator()(Idm) const
    {
      return idm(profile, graph, tree);
    }
    AuctionOutcome operator()(Tnm) const
    {
      return tnm(profile, graph, tree);
    }
    AuctionOutcome operator()(FixedPrice const &f) const
    {
      return fixed_price(profile, graph, tree, f.price);
    }
  };
  return std::visit(Visitor{profile, graph, tree}, mechanism);
}

inline AuctionOutcome run_auction(MechanismId const &mechanism, ReportProfile const &profile)
{
  auto graph = induce_graph(profile);
  return run_auction(mechanism, profile, graph, critical_tree(graph));
}

inline AuctionOutcome run_auction(std::string_view mechanism, ReportProfile const &profile)
{
  return run_auction(parse_mechanism(mechanism), profile);
}

}  // namespace nrmf
