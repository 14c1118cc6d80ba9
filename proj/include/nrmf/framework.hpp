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

// Network-based redistribution on top of an arbitrary diffusion auction, plus
// Cavallo's classical VCG redistribution as a baseline.
//
// The auction runs once on the reported profile. Then every root branch
// T_{m_k} of the critical tree is blocked in turn (its agents report (0, {}))
// and the auction is simulated again; that revenue B_k is shared inside the
// branch with the tree-sharing coefficients, R_i = omega_i * B_k.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nrmf/auctions.hpp"
#include "nrmf/error.hpp"
#include "nrmf/network.hpp"
#include "nrmf/prst.hpp"
#include "nrmf/rational.hpp"

namespace nrmf {

struct RedistributionOutcome
{
  std::string mechanism;
  Rational alpha;
  std::vector<std::uint8_t> allocation;
  std::vector<Money> auction_payment;
  std::vector<Money> redistribution;
  std::vector<Money> final_payment;
  std::vector<Rational> omega;
  /// m_1..m_K and B_1..B_K.
  std::vector<AgentIndex> branch_roots;
  std::vector<Money> branch_revenues;
  /// Branch index k per agent, kNoAgent outside D_s.
  std::vector<std::size_t> branch_of;
  Money auction_surplus{0};
  Money surplus{0};
  AgentIndex winner = kNoAgent;
  std::vector<Transfer> transfers;

  /// The redistribution mechanism seen as a plain auction (final payments).
  AuctionOutcome as_auction() const
  {
    AuctionOutcome out(allocation.size());
    out.allocation = allocation;
    out.payment = final_payment;
    out.surplus = surplus;
    out.winner = winner;
    return out;
  }
};

/// u_i = pi_i * v_i - x_i for the given valuations.
inline std::vector<Money> utilities(std::span<std::uint8_t const> allocation, std::span<Money const> payment,
                                    std::span<Money const> values)
{
  std::vector<Money> u(payment.size());
  for (std::size_t i = 0; i < payment.size(); ++i)
  {
    u[i] = allocation[i] != 0 ? Money(values[i] - payment[i]) : Money(-payment[i]);
  }
  return u;
}

inline std::vector<Money> utilities(RedistributionOutcome const &outcome, std::span<Money const> values)
{
  return utilities(outcome.allocation, outcome.final_payment, values);
}

inline std::vector<Money> reported_values(ReportProfile const &profile)
{
  std::vector<Money> v;
  v.reserve(profile.size());
  for (AgentIndex i = 0; i < profile.size(); ++i)
  {
    v.push_back(profile.value(i));
  }
  return v;
}

namespace detail {

inline Money revenue_or_zero(MechanismId const &mechanism, ReportProfile const &profile)
{
  auto graph = induce_graph(profile);
  if (graph.reachable_agents().empty())
  {
    return Money(0);
  }
  return run_auction(mechanism, profile, graph, critical_tree(graph)).surplus;
}

inline RedistributionOutcome empty_outcome(MechanismId const &mechanism, std::size_t n, Rational const &alpha)
{
  RedistributionOutcome out;
  out.mechanism = to_string(mechanism);
  out.alpha = alpha;
  out.allocation.assign(n, 0);
  out.auction_payment.assign(n, Money(0));
  out.redistribution.assign(n, Money(0));
  out.final_payment.assign(n, Money(0));
  out.omega.assign(n, Rational(0));
  out.branch_of.assign(n, kNoAgent);
  return out;
}

}  // namespace detail

/// Wraps `mechanism` into a redistribution mechanism. `params.reward` is not
/// used: the tree shares are always computed for a unit reward.
inline RedistributionOutcome run_nrmf(MechanismId const &mechanism, ReportProfile const &profile,
                                      SharingParams const &params)
{
  SharingParams unit{params.alpha, Money(1)};
  unit.validate();
  std::size_t const n = profile.size();
  RedistributionOutcome out = detail::empty_outcome(mechanism, n, params.alpha);

  auto const graph = induce_graph(profile);
  if (graph.reachable_agents().empty())
  {
    return out;
  }
  auto const tree = critical_tree(graph);

  AuctionOutcome auction = run_auction(mechanism, profile, graph, tree);
  out.allocation = auction.allocation;
  out.auction_payment = auction.payment;
  out.auction_surplus = auction.surplus;
  out.winner = auction.winner;
  out.transfers = std::move(auction.transfers);

  ShareVector const shares = prst(tree, unit);
  out.omega = shares.omega;

  auto const roots = tree.root_branches();
  out.branch_roots.assign(roots.begin(), roots.end());
  for (AgentIndex root : roots)
  {
    out.branch_revenues.push_back(detail::revenue_or_zero(mechanism, restrict_profile(profile, tree, root)));
  }

  out.surplus = out.auction_surplus;
  for (AgentIndex i : graph.reachable_agents())
  {
    std::size_t const k = tree.branch_of(i);
    out.branch_of[i] = k;
    out.redistribution[i] = out.omega[i] * out.branch_revenues[k];
    out.final_payment[i] = out.auction_payment[i] - out.redistribution[i];
    out.surplus -= out.redistribution[i];
  }
  return out;
}

inline RedistributionOutcome run_nrmf(MechanismId const &mechanism, ReportProfile const &profile,
                                      Rational const &alpha = Rational(1, 2))
{
  return run_nrmf(mechanism, profile, SharingParams{alpha, Money(1)});
}

/// Cavallo's mechanism over D_s, ignoring the network beyond reachability:
/// the top bidder wins at the second price and every participant is rebated
/// 1/n of the VCG revenue computed without her.
inline RedistributionOutcome cavallo(ReportProfile const &profile)
{
  std::size_t const n = profile.size();
  auto const graph = induce_graph(profile);
  auto const &agents = graph.reachable_agents();
  if (agents.empty())
  {
    throw ValidationError("cavallo: no participating agents");
  }
  RedistributionOutcome out = detail::empty_outcome(Vcg{}, n, Rational(0));
  out.mechanism = "cavallo";

  AuctionOutcome const auction = vcg(profile, graph);
  out.allocation = auction.allocation;
  out.auction_payment = auction.payment;
  out.auction_surplus = auction.surplus;
  out.winner = auction.winner;
  out.transfers = auction.transfers;

  // Sorted by value descending, ties by ascending id.
  std::vector<AgentIndex> order = agents;
  std::stable_sort(order.begin(), order.end(),
                   [&](AgentIndex a, AgentIndex b) { return profile.value(a) > profile.value(b); });
  auto second_without = [&](AgentIndex removed) {
    std::size_t seen = 0;
    for (AgentIndex i : order)
    {
      if (i == removed)
      {
        continue;
      }
      if (++seen == 2)
      {
        return profile.value(i);
      }
    }
    return Money(0);
  };

  Money const participants(static_cast<unsigned long>(agents.size()));
  out.surplus = out.auction_surplus;
  for (AgentIndex i : agents)
  {
    out.redistribution[i] = second_without(i) / participants;
    out.final_payment[i] = out.auction_payment[i] - out.redistribution[i];
    out.surplus -= out.redistribution[i];
  }
  return out;
}

inline bool is_star(ReportProfile const &profile)
{
  if (profile.sponsor_neighbors().size() != profile.size())
  {
    return false;
  }
  for (AgentIndex i = 0; i < profile.size(); ++i)
  {
    if (!profile.neighbors(i).empty())
    {
      return false;
    }
  }
  return true;
}

/// On a star, NRMF(vcg) and Cavallo must charge identical final payments.
inline bool check_cavallo_equivalence(ReportProfile const &profile, Rational const &alpha = Rational(1, 2))
{
  if (!is_star(profile))
  {
    throw ValidationError("cavallo equivalence is only defined on star profiles");
  }
  return run_nrmf(Vcg{}, profile, alpha).final_payment == cavallo(profile).final_payment;
}

}  // namespace nrmf
