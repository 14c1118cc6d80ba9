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

// Agents, report profiles, the induced invitation graph and its critical
// (immediate-dominator) tree rooted at the sponsor.
//
// Agents are stored in canonical AgentId order and addressed by their dense
// position in that order (AgentIndex). "Lowest AgentId" therefore always means
// "lowest index". The sponsor is vertex `agent_count()` of the induced graph.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nrmf/error.hpp"
#include "nrmf/rational.hpp"

namespace nrmf {

using AgentIndex = std::size_t;

inline constexpr AgentIndex kNoAgent = std::numeric_limits<AgentIndex>::max();

/// Reserved identifier of the sponsor.
inline constexpr std::string_view kSponsorId = "s";

struct AgentId
{
  std::string value;

  AgentId() = default;
  AgentId(std::string v)
    : value(std::move(v))
  {}
  AgentId(char const *v)
    : value(v)
  {}

  friend auto operator<=>(AgentId const &, AgentId const &) = default;
  friend bool operator==(AgentId const &, AgentId const &) = default;
};

/// A (possibly misreported) type: valuation and invited neighbours.
struct AgentType
{
  Money value;
  std::vector<AgentId> neighbors;

  friend bool operator==(AgentType const &, AgentType const &) = default;
};

class ReportProfile
{
public:
  ReportProfile() = default;

  /// Validates and canonicalises a profile keyed by id.
  ReportProfile(std::vector<AgentId> const &sponsor_neighbors, std::map<AgentId, AgentType> const &reports)
  {
    auto ids = std::make_shared<std::vector<AgentId>>();
    ids->reserve(reports.size());
    for (auto const &[id, type] : reports)
    {
      if (id.value.empty())
      {
        throw ValidationError("agent id must not be empty");
      }
      if (id.value == kSponsorId)
      {
        throw ValidationError("agent id \"s\" is reserved for the sponsor");
      }
      ids->push_back(id);
    }
    ids_ = std::move(ids);

    auto resolve = [this](AgentId const &ref, std::string const &context) {
      auto idx = find(ref);
      if (!idx)
      {
        throw ValidationError(context + " references unknown agent \"" + ref.value + "\"");
      }
      return *idx;
    };

    for (auto const &ref : sponsor_neighbors)
    {
      if (ref.value == kSponsorId)
      {
        throw ValidationError("sponsor cannot invite itself");
      }
      sponsor_neighbors_.push_back(resolve(ref, "sponsor_neighbors"));
    }
    canonicalise(sponsor_neighbors_);

    values_.reserve(reports.size());
    neighbors_.reserve(reports.size());
    for (auto const &[id, type] : reports)
    {
      if (sgn(type.value) < 0)
      {
        throw ValidationError("agent \"" + id.value + "\" has a negative value");
      }
      values_.push_back(type.value);
      std::vector<AgentIndex> adj;
      for (auto const &ref : type.neighbors)
      {
        if (ref == id)
        {
          throw ValidationError("agent \"" + id.value + "\" lists itself as a neighbour");
        }
        // Edges back to the sponsor never change reachability.
        if (ref.value == kSponsorId)
        {
          continue;
        }
        adj.push_back(resolve(ref, "agent \"" + id.value + "\""));
      }
      canonicalise(adj);
      neighbors_.push_back(std::move(adj));
    }
  }

  /// Index-based construction; `ids` must be strictly increasing.
  static ReportProfile from_indices(std::vector<AgentId> ids, std::vector<Money> values,
                                    std::vector<std::vector<AgentIndex>> neighbors,
                                    std::vector<AgentIndex> sponsor_neighbors)
  {
    std::size_t const n = ids.size();
    if (values.size() != n || neighbors.size() != n)
    {
      throw ValidationError("profile arrays have mismatched lengths");
    }
    for (std::size_t i = 0; i < n; ++i)
    {
      if (ids[i].value.empty() || ids[i].value == kSponsorId)
      {
        throw ValidationError("invalid agent id \"" + ids[i].value + "\"");
      }
      if (i > 0 && !(ids[i - 1] < ids[i]))
      {
        throw ValidationError("agent ids must be unique and sorted");
      }
      if (sgn(values[i]) < 0)
      {
        throw ValidationError("agent \"" + ids[i].value + "\" has a negative value");
      }
      for (AgentIndex j : neighbors[i])
      {
        if (j >= n || j == i)
        {
          throw ValidationError("agent \"" + ids[i].value + "\" has an invalid neighbour index");
        }
      }
      canonicalise(neighbors[i]);
    }
    for (AgentIndex j : sponsor_neighbors)
    {
      if (j >= n)
      {
        throw ValidationError("sponsor neighbour index out of range");
      }
    }
    canonicalise(sponsor_neighbors);

    ReportProfile p;
    p.ids_ = std::make_shared<std::vector<AgentId> const>(std::move(ids));
    p.values_ = std::move(values);
    p.neighbors_ = std::move(neighbors);
    p.sponsor_neighbors_ = std::move(sponsor_neighbors);
    return p;
  }

  std::size_t size() const
  {
    return values_.size();
  }

  AgentId const &id(AgentIndex i) const
  {
    return (*ids_)[i];
  }

  std::span<AgentId const> ids() const
  {
    if (!ids_)
    {
      return {};
    }
    return *ids_;
  }

  std::optional<AgentIndex> find(AgentId const &ref) const
  {
    if (!ids_)
    {
      return std::nullopt;
    }
    auto it = std::lower_bound(ids_->begin(), ids_->end(), ref);
    if (it == ids_->end() || *it != ref)
    {
      return std::nullopt;
    }
    return static_cast<AgentIndex>(it - ids_->begin());
  }

  AgentIndex index_of(AgentId const &ref) const
  {
    auto idx = find(ref);
    if (!idx)
    {
      throw ValidationError("unknown agent \"" + ref.value + "\"");
    }
    return *idx;
  }

  Money const &value(AgentIndex i) const
  {
    return values_[i];
  }

  std::span<AgentIndex const> neighbors(AgentIndex i) const
  {
    return neighbors_[i];
  }

  std::span<AgentIndex const> sponsor_neighbors() const
  {
    return sponsor_neighbors_;
  }

  AgentType report(AgentIndex i) const
  {
    AgentType t{values_[i], {}};
    for (AgentIndex j : neighbors_[i])
    {
      t.neighbors.push_back(id(j));
    }
    return t;
  }

  std::map<AgentId, AgentType> reports() const
  {
    std::map<AgentId, AgentType> out;
    for (AgentIndex i = 0; i < size(); ++i)
    {
      out.emplace(id(i), report(i));
    }
    return out;
  }

  std::vector<AgentId> sponsor_neighbor_ids() const
  {
    std::vector<AgentId> out;
    for (AgentIndex j : sponsor_neighbors_)
    {
      out.push_back(id(j));
    }
    return out;
  }

  /// Copy of this profile with agent `i`'s report replaced.
  ReportProfile with_report(AgentIndex i, Money value, std::vector<AgentIndex> neighbors) const
  {
    if (i >= size())
    {
      throw ValidationError("agent index out of range");
    }
    if (sgn(value) < 0)
    {
      throw ValidationError("agent \"" + id(i).value + "\" has a negative value");
    }
    for (AgentIndex j : neighbors)
    {
      if (j >= size() || j == i)
      {
        throw ValidationError("agent \"" + id(i).value + "\" has an invalid neighbour index");
      }
    }
    canonicalise(neighbors);
    ReportProfile copy = *this;
    copy.values_[i] = std::move(value);
    copy.neighbors_[i] = std::move(neighbors);
    return copy;
  }

  /// Copy of this profile where every listed agent reports (0, {}).
  ReportProfile with_cleared(std::span<AgentIndex const> agents) const
  {
    ReportProfile copy = *this;
    for (AgentIndex i : agents)
    {
      copy.values_.at(i) = 0;
      copy.neighbors_.at(i).clear();
    }
    return copy;
  }

  ReportProfile with_sponsor_neighbors(std::vector<AgentIndex> sponsor_neighbors) const
  {
    for (AgentIndex j : sponsor_neighbors)
    {
      if (j >= size())
      {
        throw ValidationError("sponsor neighbour index out of range");
      }
    }
    canonicalise(sponsor_neighbors);
    ReportProfile copy = *this;
    copy.sponsor_neighbors_ = std::move(sponsor_neighbors);
    return copy;
  }

  friend bool operator==(ReportProfile const &a, ReportProfile const &b)
  {
    if (a.size() != b.size())
    {
      return false;
    }
    if (a.ids_ != b.ids_ && !std::ranges::equal(a.ids(), b.ids()))
    {
      return false;
    }
    return a.values_ == b.values_ && a.neighbors_ == b.neighbors_ && a.sponsor_neighbors_ == b.sponsor_neighbors_;
  }

private:
  static void canonicalise(std::vector<AgentIndex> &v)
  {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::shared_ptr<std::vector<AgentId> const> ids_;
  std::vector<Money> values_;
  std::vector<std::vector<AgentIndex>> neighbors_;
  std::vector<AgentIndex> sponsor_neighbors_;
};

/// Directed graph G(theta') over the agents plus the sponsor vertex.
class InducedGraph
{
public:
  InducedGraph() = default;

  explicit InducedGraph(ReportProfile const &profile)
    : agent_count_(profile.size())
  {
    std::size_t const n = agent_count_;
    offsets_.assign(n + 2, 0);
    for (AgentIndex i = 0; i < n; ++i)
    {
      offsets_[i + 1] = offsets_[i] + profile.neighbors(i).size();
    }
    offsets_[n + 1] = offsets_[n] + profile.sponsor_neighbors().size();
    targets_.reserve(offsets_[n + 1]);
    for (AgentIndex i = 0; i < n; ++i)
    {
      auto adj = profile.neighbors(i);
      targets_.insert(targets_.end(), adj.begin(), adj.end());
    }
    auto sp = profile.sponsor_neighbors();
    targets_.insert(targets_.end(), sp.begin(), sp.end());

    reachable_.assign(n, false);
    std::vector<AgentIndex> queue(sp.begin(), sp.end());
    for (AgentIndex j : queue)
    {
      reachable_[j] = true;
    }
    for (std::size_t head = 0; head < queue.size(); ++head)
    {
      for (AgentIndex j : successors(queue[head]))
      {
        if (!reachable_[j])
        {
          reachable_[j] = true;
          queue.push_back(j);
        }
      }
    }
    for (AgentIndex i = 0; i < n; ++i)
    {
      if (reachable_[i])
      {
        reachable_agents_.push_back(i);
      }
    }
  }

  std::size_t agent_count() const
  {
    return agent_count_;
  }

  AgentIndex sponsor() const
  {
    return agent_count_;
  }

  /// Out-neighbours of vertex `v` (an agent or the sponsor), ascending.
  std::span<AgentIndex const> successors(AgentIndex v) const
  {
    return std::span<AgentIndex const>(targets_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
  }

  bool reachable(AgentIndex i) const
  {
    return reachable_[i];
  }

  /// D_s in ascending index order.
  std::vector<AgentIndex> const &reachable_agents() const &
  {
    return reachable_agents_;
  }

  std::vector<AgentIndex> reachable_agents() &&
  {
    return std::move(reachable_agents_);
  }

  std::vector<std::pair<AgentIndex, AgentIndex>> edges() const
  {
    // Sponsor edges first, then agents in index order.
    std::vector<std::pair<AgentIndex, AgentIndex>> out;
    for (std::size_t k = 0; k <= agent_count_; ++k)
    {
      AgentIndex const v = k == 0 ? agent_count_ : k - 1;
      for (AgentIndex j : successors(v))
      {
        out.emplace_back(v, j);
      }
    }
    return out;
  }

private:
  std::size_t agent_count_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<AgentIndex> targets_;
  std::vector<bool> reachable_;
  std::vector<AgentIndex> reachable_agents_;
};

inline InducedGraph induce_graph(ReportProfile const &profile)
{
  return InducedGraph(profile);
}

/// Diffusion critical tree: the immediate-dominator tree of the induced graph
/// rooted at the sponsor, restricted to the reachable agents.
///
/// Queries taking a vertex accept `sponsor()` wherever the sponsor is a
/// meaningful argument (children, descendant_count, in_subtree).
class CriticalTree
{
public:
  CriticalTree() = default;

  std::size_t agent_count() const
  {
    return parent_.size();
  }

  AgentIndex sponsor() const
  {
    return parent_.size();
  }

  /// Number of agents in the tree, i.e. |D_s| = |C_s|.
  std::size_t size() const
  {
    return preorder_.size();
  }

  bool empty() const
  {
    return preorder_.empty();
  }

  bool contains(AgentIndex i) const
  {
    return i < parent_.size() && parent_[i] != kNoAgent;
  }

  /// Critical parent p_i; `sponsor()` for root branches, kNoAgent when absent.
  AgentIndex parent(AgentIndex i) const
  {
    return parent_[i];
  }

  std::span<AgentIndex const> children(AgentIndex v) const
  {
    return children_[v];
  }

  /// |C_v|: descendants of v excluding v.
  std::size_t descendant_count(AgentIndex v) const
  {
    return descendants_[v];
  }

  /// r-hat_s: the sponsor's children m_1..m_K in ascending order.
  std::span<AgentIndex const> root_branches() const
  {
    return children_[sponsor()];
  }

  /// k such that i belongs to T_{m_k}.
  std::size_t branch_of(AgentIndex i) const
  {
    return branch_[i];
  }

  /// Depth below the sponsor; root branches have depth 1.
  std::size_t depth(AgentIndex i) const
  {
    return depth_[i];
  }

  /// True when v lies in the subtree rooted at `root` (root included).
  bool in_subtree(AgentIndex root, AgentIndex v) const
  {
    if (root == sponsor())
    {
      return contains(v);
    }
    if (!contains(v) || !contains(root))
    {
      return false;
    }
    return enter_[root] <= enter_[v] && enter_[v] <= enter_[root] + descendants_[root];
  }

  /// C_v in preorder.
  std::vector<AgentIndex> subtree(AgentIndex v) const
  {
    if (v == sponsor())
    {
      return preorder_;
    }
    auto first = preorder_.begin() + static_cast<std::ptrdiff_t>(enter_[v]) + 1;
    return {first, first + static_cast<std::ptrdiff_t>(descendants_[v])};
  }

  /// Critical ancestors of i from the root branch down to i itself.
  std::vector<AgentIndex> path_to(AgentIndex i) const
  {
    std::vector<AgentIndex> path;
    for (AgentIndex v = i; v != sponsor(); v = parent_[v])
    {
      path.push_back(v);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  /// Agents with every parent listed before its children.
  std::vector<AgentIndex> const &preorder() const
  {
    return preorder_;
  }

  /// Builds the tree from an immediate-dominator array (kNoAgent = unreachable,
  /// `parents.size()` = sponsor).
  static CriticalTree from_parents(std::vector<AgentIndex> parents)
  {
    CriticalTree t;
    std::size_t const n = parents.size();
    t.parent_ = std::move(parents);
    t.children_.assign(n + 1, {});
    for (AgentIndex i = 0; i < n; ++i)
    {
      if (t.parent_[i] != kNoAgent)
      {
        t.children_[t.parent_[i]].push_back(i);
      }
    }
    t.descendants_.assign(n + 1, 0);
    t.depth_.assign(n, 0);
    t.branch_.assign(n, kNoAgent);
    t.enter_.assign(n, 0);

    // Iterative preorder from the sponsor; children are already ascending.
    std::vector<std::pair<AgentIndex, std::size_t>> stack;
    stack.emplace_back(n, 0);
    while (!stack.empty())
    {
      auto &[v, next] = stack.back();
      if (next == t.children_[v].size())
      {
        AgentIndex const done = v;
        stack.pop_back();
        if (!stack.empty())
        {
          t.descendants_[stack.back().first] += t.descendants_[done] + 1;
        }
        continue;
      }
      AgentIndex const c = t.children_[v][next++];
      t.enter_[c] = t.preorder_.size();
      t.preorder_.push_back(c);
      t.depth_[c] = v == n ? 1 : t.depth_[v] + 1;
      stack.emplace_back(c, 0);
    }
    if (t.preorder_.size() != static_cast<std::size_t>(std::count_if(t.parent_.begin(), t.parent_.end(), [](AgentIndex p) {
          return p != kNoAgent;
        })))
    {
      throw ValidationError("parent array does not describe a tree rooted at the sponsor");
    }
    auto const &roots = t.children_[n];
    for (std::size_t k = 0; k < roots.size(); ++k)
    {
      t.branch_[roots[k]] = k;
    }
    for (AgentIndex v : t.preorder_)
    {
      if (t.parent_[v] != n)
      {
        t.branch_[v] = t.branch_[t.parent_[v]];
      }
    }
    return t;
  }

private:
  std::vector<AgentIndex> parent_;
  std::vector<std::vector<AgentIndex>> children_;
  std::vector<std::size_t> descendants_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> branch_;
  std::vector<std::size_t> enter_;
  std::vector<AgentIndex> preorder_;
};

namespace detail {

// Cooper, Harvey and Kennedy's iterative dominance algorithm over the
// reachable part of the graph, visited in reverse postorder.
inline std::vector<AgentIndex> immediate_dominators(InducedGraph const &graph)
{
  std::size_t const n = graph.agent_count();
  AgentIndex const root = graph.sponsor();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> postorder_number(n + 1, kUnvisited);
  std::vector<AgentIndex> postorder;
  postorder.reserve(n + 1);
  {
    std::vector<bool> seen(n + 1, false);
    std::vector<std::pair<AgentIndex, std::size_t>> stack;
    stack.emplace_back(root, 0);
    seen[root] = true;
    while (!stack.empty())
    {
      auto &[v, next] = stack.back();
      auto succ = graph.successors(v);
      if (next == succ.size())
      {
        postorder_number[v] = postorder.size();
        postorder.push_back(v);
        stack.pop_back();
        continue;
      }
      AgentIndex const w = succ[next++];
      if (!seen[w])
      {
        seen[w] = true;
        stack.emplace_back(w, 0);
      }
    }
  }

  std::vector<std::vector<AgentIndex>> preds(n + 1);
  for (AgentIndex v : postorder)
  {
    for (AgentIndex w : graph.successors(v))
    {
      preds[w].push_back(v);
    }
  }

  std::vector<AgentIndex> idom(n + 1, kNoAgent);
  idom[root] = root;
  auto intersect = [&](AgentIndex a, AgentIndex b) {
    while (a != b)
    {
      while (postorder_number[a] < postorder_number[b])
      {
        a = idom[a];
      }
      while (postorder_number[b] < postorder_number[a])
      {
        b = idom[b];
      }
    }
    return a;
  };

  bool changed = true;
  while (changed)
  {
    changed = false;
    for (auto it = postorder.rbegin(); it != postorder.rend(); ++it)
    {
      AgentIndex const v = *it;
      if (v == root)
      {
        continue;
      }
      AgentIndex candidate = kNoAgent;
      for (AgentIndex p : preds[v])
      {
        if (idom[p] == kNoAgent)
        {
          continue;
        }
        candidate = candidate == kNoAgent ? p : intersect(p, candidate);
      }
      if (idom[v] != candidate)
      {
        idom[v] = candidate;
        changed = true;
      }
    }
  }
  idom.pop_back();
  return idom;
}

}  // namespace detail

inline CriticalTree critical_tree(InducedGraph const &graph)
{
  return CriticalTree::from_parents(detail::immediate_dominators(graph));
}

inline CriticalTree critical_tree(ReportProfile const &profile)
{
  return critical_tree(induce_graph(profile));
}

/// theta'': every agent of the branch rooted at `branch_root` reports (0, {}).
inline ReportProfile restrict_profile(ReportProfile const &profile, CriticalTree const &tree, AgentIndex branch_root)
{
  auto roots = tree.root_branches();
  if (branch_root >= profile.size() || std::find(roots.begin(), roots.end(), branch_root) == roots.end())
  {
    std::string const name = branch_root < profile.size() ? profile.id(branch_root).value : std::to_string(branch_root);
    throw ValidationError("\"" + name + "\" is not a root branch of the critical tree");
  }
  std::vector<AgentIndex> blocked = tree.subtree(branch_root);
  blocked.push_back(branch_root);
  return profile.with_cleared(blocked);
}

inline ReportProfile restrict_profile(ReportProfile const &profile, AgentId const &blocked_branch)
{
  auto idx = profile.find(blocked_branch);
  if (!idx)
  {
    throw ValidationError("unknown branch \"" + blocked_branch.value + "\"");
  }
  return restrict_profile(profile, critical_tree(profile), *idx);
}

/// Deletes `removed` agents from the network: their reports become (0, {}) and
/// every invitation pointing at them, the sponsor's included, is dropped.
inline ReportProfile without_agents(ReportProfile const &profile, std::vector<AgentIndex> const &removed)
{
  std::vector<bool> gone(profile.size(), false);
  for (AgentIndex i : removed)
  {
    gone.at(i) = true;
  }
  auto keep = [&](std::span<AgentIndex const> adj) {
    std::vector<AgentIndex> out;
    for (AgentIndex j : adj)
    {
      if (!gone[j])
      {
        out.push_back(j);
      }
    }
    return out;
  };
  std::vector<AgentId> ids(profile.ids().begin(), profile.ids().end());
  std::vector<Money> values;
  std::vector<std::vector<AgentIndex>> neighbors;
  for (AgentIndex i = 0; i < profile.size(); ++i)
  {
    values.push_back(gone[i] ? Money(0) : profile.value(i));
    neighbors.push_back(gone[i] ? std::vector<AgentIndex>{} : keep(profile.neighbors(i)));
  }
  return ReportProfile::from_indices(std::move(ids), std::move(values), std::move(neighbors),
                                     keep(profile.sponsor_neighbors()));
}

}  // namespace nrmf
