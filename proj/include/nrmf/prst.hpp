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

// Proportional reward sharing over a rooted tree.
//
// Walking the tree top-down with pass-down mass Omega_s = 1, an agent i with
// parent p receives
//
//   total = (|C_i| + 1) / |C_p|,  base = 1 / (|C_p| - |C_i|)
//   omega_i = Omega_p * (base + (total - base) * alpha)
//   Omega_i = Omega_p * (total - base) * (1 - alpha)
//
// and the coefficients of all agents sum to exactly one.

#include <vector>

#include "nrmf/error.hpp"
#include "nrmf/network.hpp"
#include "nrmf/rational.hpp"

namespace nrmf {

struct SharingParams
{
  Rational alpha{1, 2};
  Money reward{1};

  void validate() const
  {
    if (!(sgn(alpha) > 0 && alpha < 1))
    {
      throw ValidationError("alpha must lie strictly between 0 and 1, got " + to_exact(alpha));
    }
    if (sgn(reward) < 0)
    {
      throw ValidationError("reward must be non-negative, got " + to_exact(reward));
    }
  }
};

/// Per-agent coefficients; agents outside the tree hold zeros.
struct ShareVector
{
  std::vector<Rational> omega;
  std::vector<Rational> omega_pass;
  std::vector<Money> share;
  std::vector<bool> in_tree;
  Money reward;
};

inline ShareVector prst(CriticalTree const &tree, SharingParams const &params)
{
  params.validate();
  if (tree.empty())
  {
    throw ValidationError("cannot share a reward over an empty tree");
  }
  std::size_t const n = tree.agent_count();
  ShareVector out;
  out.omega.assign(n, Rational(0));
  out.omega_pass.assign(n, Rational(0));
  out.share.assign(n, Money(0));
  out.in_tree.assign(n, false);
  out.reward = params.reward;

  Rational const one_minus_alpha = 1 - params.alpha;
  Rational const root_pass(1);
  for (AgentIndex i : tree.preorder())
  {
    AgentIndex const p = tree.parent(i);
    Rational const &pass = p == tree.sponsor() ? root_pass : out.omega_pass[p];
    auto const below_parent = tree.descendant_count(p);
    auto const below_self = tree.descendant_count(i);
    Rational total(static_cast<unsigned long>(below_self + 1), static_cast<unsigned long>(below_parent));
    total.canonicalize();
    Rational const base(1UL, static_cast<unsigned long>(below_parent - below_self));
    Rational const diffusion = total - base;
    out.omega[i] = pass * (base + diffusion * params.alpha);
    out.omega_pass[i] = pass * diffusion * one_minus_alpha;
    out.share[i] = out.omega[i] * params.reward;
    out.in_tree[i] = true;
  }
  return out;
}

/// Sum of b_i; equals the reward exactly.
inline Money share_totals(ShareVector const &shares)
{
  Money sum(0);
  for (auto const &b : shares.share)
  {
    sum += b;
  }
  return sum;
}

}  // namespace nrmf
