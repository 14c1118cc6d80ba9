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

// JSON network files and result emission (JSON, CSV, plain tables).
//
// Network file:
//   {"sponsor_neighbors": ["A"], "agents": [{"id": "A", "value": "3.5", "neighbors": []}]}
// Values are decimal strings so that they convert to exact rationals.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrmf/error.hpp"
#include "nrmf/experiment.hpp"
#include "nrmf/framework.hpp"
#include "nrmf/network.hpp"
#include "nrmf/prst.hpp"
#include "nrmf/rational.hpp"
#include "nrmf/verify.hpp"

namespace nrmf {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::vector<AgentId> id_list(Json const &node, std::string const &where)
{
  if (!node.is_array())
  {
    throw ParseError(where + ": expected an array of agent ids");
  }
  std::vector<AgentId> out;
  for (std::size_t k = 0; k < node.size(); ++k)
  {
    if (!node[k].is_string())
    {
      throw ParseError(where + "[" + std::to_string(k) + "]: expected a string id");
    }
    out.emplace_back(node[k].get<std::string>());
  }
  return out;
}

}  // namespace detail

inline ReportProfile profile_from_json(Json const &doc)
{
  if (!doc.is_object())
  {
    throw ParseError("network: expected a JSON object");
  }
  if (!doc.contains("sponsor_neighbors"))
  {
    throw ParseError("network: missing \"sponsor_neighbors\"");
  }
  if (!doc.contains("agents") || !doc["agents"].is_array())
  {
    throw ParseError("network: missing \"agents\" array");
  }
  auto sponsor = detail::id_list(doc["sponsor_neighbors"], "sponsor_neighbors");
  std::map<AgentId, AgentType> reports;
  auto const &agents = doc["agents"];
  for (std::size_t k = 0; k < agents.size(); ++k)
  {
    std::string const where = "agents[" + std::to_string(k) + "]";
    auto const &a = agents[k];
    if (!a.is_object() || !a.contains("id") || !a["id"].is_string())
    {
      throw ParseError(where + ": expected an object with a string \"id\"");
    }
    if (!a.contains("value") || !a["value"].is_string())
    {
      throw ParseError(where + ".value: expected a decimal string");
    }
    AgentType type;
    try
    {
      type.value = parse_decimal(a["value"].get<std::string>());
    }
    catch (ParseError const &e)
    {
      throw ParseError(where + ".value: " + e.what());
    }
    if (a.contains("neighbors"))
    {
      type.neighbors = detail::id_list(a["neighbors"], where + ".neighbors");
    }
    AgentId id(a["id"].get<std::string>());
    if (!reports.emplace(id, std::move(type)).second)
    {
      throw ParseError(where + ": duplicate agent id \"" + id.value + "\"");
    }
  }
  try
  {
    return ReportProfile(sponsor, reports);
  }
  catch (ValidationError const &e)
  {
    throw ParseError(std::string("network: ") + e.what());
  }
}

inline ReportProfile parse_profile(std::string const &text)
{
  Json doc;
  try
  {
    doc = Json::parse(text);
  }
  catch (Json::parse_error const &e)
  {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return profile_from_json(doc);
}

inline ReportProfile ingest(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open \"" + path.string() + "\"");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try
  {
    return parse_profile(buffer.str());
  }
  catch (ParseError const &e)
  {
    throw ParseError(path.string() + ": " + e.what());
  }
}

/// Values must have finite decimal expansions.
inline Json profile_to_json(ReportProfile const &p)
{
  Json doc;
  doc["sponsor_neighbors"] = Json::array();
  for (AgentIndex j : p.sponsor_neighbors())
  {
    doc["sponsor_neighbors"].push_back(p.id(j).value);
  }
  doc["agents"] = Json::array();
  for (AgentIndex i = 0; i < p.size(); ++i)
  {
    Json a;
    a["id"] = p.id(i).value;
    a["value"] = to_exact_decimal(p.value(i));
    a["neighbors"] = Json::array();
    for (AgentIndex j : p.neighbors(i))
    {
      a["neighbors"].push_back(p.id(j).value);
    }
    doc["agents"].push_back(std::move(a));
  }
  return doc;
}

inline void emit(ReportProfile const &p, std::filesystem::path const &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot write \"" + path.string() + "\"");
  }
  out << profile_to_json(p).dump(2) << '\n';
}

/// Every *.json network in `dir`, sorted by file name.
inline std::vector<Instance> load_instances(std::filesystem::path const &dir)
{
  if (!std::filesystem::is_directory(dir))
  {
    throw ParseError("\"" + dir.string() + "\" is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (auto const &entry : std::filesystem::directory_iterator(dir))
  {
    if (entry.is_regular_file() && entry.path().extension() == ".json")
    {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Instance> out;
  for (auto const &f : files)
  {
    out.push_back({f.stem().string(), ingest(f)});
  }
  return out;
}

// --- emission --------------------------------------------------------------

enum class OutputFormat
{
  json,
  csv,
  table,
};

inline OutputFormat parse_output_format(std::string_view text)
{
  if (text == "json")
  {
    return OutputFormat::json;
  }
  if (text == "csv")
  {
    return OutputFormat::csv;
  }
  if (text == "table")
  {
    return OutputFormat::table;
  }
  throw ParseError("unknown output format \"" + std::string(text) + "\"");
}

/// Rows of decimal strings with a header; the common form behind CSV and
/// table output.
struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string to_csv(Table const &t)
{
  auto line = [](std::vector<std::string> const &cells) {
    std::string out;
    for (std::size_t k = 0; k < cells.size(); ++k)
    {
      bool const quote = cells[k].find_first_of(",\"\n") != std::string::npos;
      std::string cell = cells[k];
      if (quote)
      {
        std::string escaped;
        for (char c : cell)
        {
          escaped += c == '"' ? std::string("\"\"") : std::string(1, c);
        }
        cell = "\"" + escaped + "\"";
      }
      out += (k > 0 ? "," : "") + cell;
    }
    return out + "\n";
  };
  std::string out = line(t.header);
  for (auto const &r : t.rows)
  {
    out += line(r);
  }
  return out;
}

inline std::string to_text_table(Table const &t)
{
  std::vector<std::size_t> width(t.header.size(), 0);
  auto measure = [&](std::vector<std::string> const &cells) {
    for (std::size_t k = 0; k < cells.size() && k < width.size(); ++k)
    {
      width[k] = std::max(width[k], cells[k].size());
    }
  };
  measure(t.header);
  for (auto const &r : t.rows)
  {
    measure(r);
  }
  auto line = [&](std::vector<std::string> const &cells) {
    std::ostringstream os;
    for (std::size_t k = 0; k < cells.size(); ++k)
    {
      os << (k > 0 ? "  " : "") << std::left << std::setw(static_cast<int>(width[k])) << cells[k];
    }
    std::string s = os.str();
    s.erase(s.find_last_not_of(' ') + 1);
    return s + "\n";
  };
  std::string out = line(t.header);
  std::string rule;
  for (std::size_t k = 0; k < width.size(); ++k)
  {
    rule += (k > 0 ? "  " : "") + std::string(width[k], '-');
  }
  out += rule + "\n";
  for (auto const &r : t.rows)
  {
    out += line(r);
  }
  return out;
}

inline std::string render(Table const &t, OutputFormat format)
{
  return format == OutputFormat::csv ? to_csv(t) : to_text_table(t);
}

inline std::string agent_label(ReportProfile const &p, AgentIndex i)
{
  return i == kNoAgent ? std::string() : i == p.size() ? std::string(kSponsorId) : p.id(i).value;
}

/// `true_values`, when given, replaces the reported values in utilities.
inline Json outcome_to_json(ReportProfile const &p, RedistributionOutcome const &o, int precision,
                            std::optional<std::vector<Money>> const &true_values = std::nullopt)
{
  std::vector<Money> const values = true_values ? *true_values : reported_values(p);
  auto const u = utilities(o, values);
  Json doc;
  doc["mechanism"] = o.mechanism;
  doc["alpha"] = to_exact(o.alpha);
  doc["winner"] = o.winner == kNoAgent ? Json(nullptr) : Json(p.id(o.winner).value);
  doc["auction_surplus"] = to_decimal(o.auction_surplus, precision);
  doc["surplus"] = to_decimal(o.surplus, precision);
  doc["surplus_exact"] = to_exact(o.surplus);
  doc["utilities_against"] = true_values ? "true values" : "reported values";
  doc["branches"] = Json::array();
  for (std::size_t k = 0; k < o.branch_roots.size(); ++k)
  {
    doc["branches"].push_back({{"root", p.id(o.branch_roots[k]).value},
                               {"revenue", to_decimal(o.branch_revenues[k], precision)},
                               {"revenue_exact", to_exact(o.branch_revenues[k])}});
  }
  doc["agents"] = Json::array();
  for (AgentIndex i = 0; i < p.size(); ++i)
  {
    doc["agents"].push_back({{"id", p.id(i).value},
                             {"participates", o.branch_of[i] != kNoAgent || o.allocation[i] != 0},
                             {"allocation", static_cast<int>(o.allocation[i])},
                             {"omega", to_exact(o.omega[i])},
                             {"auction_payment", to_decimal(o.auction_payment[i], precision)},
                             {"redistribution", to_decimal(o.redistribution[i], precision)},
                             {"final_payment", to_decimal(o.final_payment[i], precision)},
                             {"utility", to_decimal(u[i], precision)},
                             {"utility_exact", to_exact(u[i])}});
  }
  doc["transfers"] = Json::array();
  for (auto const &t : o.transfers)
  {
    doc["transfers"].push_back({{"from", agent_label(p, t.from)},
                                {"to", agent_label(p, t.to)},
                                {"amount", to_decimal(t.amount, precision)}});
  }
  return doc;
}

inline Table outcome_table(ReportProfile const &p, RedistributionOutcome const &o, int precision,
                           std::optional<std::vector<Money>> const &true_values = std::nullopt)
{
  std::vector<Money> const values = true_values ? *true_values : reported_values(p);
  auto const u = utilities(o, values);
  Table t{{"agent", "allocation", "omega", "auction_payment", "redistribution", "final_payment", "utility"}, {}};
  for (AgentIndex i = 0; i < p.size(); ++i)
  {
    t.rows.push_back({p.id(i).value, std::to_string(o.allocation[i]), to_exact(o.omega[i]),
                      to_decimal(o.auction_payment[i], precision), to_decimal(o.redistribution[i], precision),
                      to_decimal(o.final_payment[i], precision), to_decimal(u[i], precision)});
  }
  return t;
}

inline Json shares_to_json(ReportProfile const &p, ShareVector const &s, int precision)
{
  Json doc = Json::array();
  for (AgentIndex i = 0; i < p.size(); ++i)
  {
    if (s.in_tree[i])
    {
      doc.push_back({{"agent", p.id(i).value},
                     {"omega", to_exact(s.omega[i])},
                     {"share", to_decimal(s.share[i], precision)}});
    }
  }
  return doc;
}

inline Table shares_table(ReportProfile const &p, ShareVector const &s, int precision)
{
  Table t{{"agent", "omega", "omega_pass", "share"}, {}};
  for (AgentIndex i = 0; i < p.size(); ++i)
  {
    if (s.in_tree[i])
    {
      t.rows.push_back({p.id(i).value, to_exact(s.omega[i]), to_exact(s.omega_pass[i]),
                        to_decimal(s.share[i], precision)});
    }
  }
  return t;
}

inline Json tree_to_json(ReportProfile const &p, CriticalTree const &tree)
{
  Json doc;
  doc["root_branches"] = Json::array();
  for (AgentIndex r : tree.root_branches())
  {
    doc["root_branches"].push_back(p.id(r).value);
  }
  doc["nodes"] = Json::array();
  for (AgentIndex i : tree.preorder())
  {
    Json children = Json::array();
    for (AgentIndex c : tree.children(i))
    {
      children.push_back(p.id(c).value);
    }
    doc["nodes"].push_back({{"id", p.id(i).value},
                            {"parent", agent_label(p, tree.parent(i))},
                            {"depth", tree.depth(i)},
                            {"subtree_size", tree.descendant_count(i)},
                            {"branch", p.id(tree.root_branches()[tree.branch_of(i)]).value},
                            {"children", std::move(children)}});
  }
  Json outside = Json::array();
  for (AgentIndex i = 0; i < p.size(); ++i)
  {
    if (!tree.contains(i))
    {
      outside.push_back(p.id(i).value);
    }
  }
  doc["unreachable"] = std::move(outside);
  return doc;
}

inline Table tree_table(ReportProfile const &p, CriticalTree const &tree)
{
  Table t{{"agent", "parent", "depth", "subtree_size", "branch"}, {}};
  for (AgentIndex i : tree.preorder())
  {
    t.rows.push_back({p.id(i).value, agent_label(p, tree.parent(i)), std::to_string(tree.depth(i)),
                      std::to_string(tree.descendant_count(i)),
                      p.id(tree.root_branches()[tree.branch_of(i)]).value});
  }
  return t;
}

inline Json report_to_json(PropertyReport const &r)
{
  Json doc;
  doc["property"] = to_string(r.property);
  doc["mechanism"] = r.mechanism;
  doc["verdict"] = r.pass ? "pass" : "fail";
  doc["instances"] = r.instances;
  doc["cases"] = r.cases;
  doc["skipped"] = r.skipped;
  doc["space"] = r.space;
  doc["warnings"] = r.warnings;
  if (r.witness)
  {
    auto const &w = *r.witness;
    Json wj;
    wj["instance"] = w.instance;
    wj["description"] = w.description;
    wj["delta"] = to_exact(w.delta);
    if (w.agent != kNoAgent)
    {
      wj["agent"] = w.base.id(w.agent).value;
    }
    if (w.deviation)
    {
      Json neighbors = Json::array();
      for (auto const &n : w.deviation->neighbors)
      {
        neighbors.push_back(n.value);
      }
      wj["deviation"] = {{"value", to_exact(w.deviation->value)}, {"neighbors", std::move(neighbors)}};
    }
    wj["profile"] = profile_to_json(w.base);
    if (w.other)
    {
      wj["other_profile"] = profile_to_json(*w.other);
    }
    doc["witness"] = std::move(wj);
  }
  return doc;
}

inline Json experiment_to_json(ExperimentResult const &r, int precision)
{
  Json doc;
  doc["experiment"] = r.kind;
  doc["mechanism"] = r.mechanism;
  doc["model"] = {{"kind", to_string(r.model.kind)},
                  {"initial_branches", r.model.initial_branches},
                  {"seed", r.model.seed},
                  {"value_cap", to_decimal(r.value_cap, precision)}};
  doc["alpha"] = to_exact(r.alpha);
  doc["verdict"] = r.pass ? "pass" : "fail";
  doc["notes"] = r.notes;
  doc["summaries"] = Json::array();
  for (auto const &s : r.summaries)
  {
    doc["summaries"].push_back({{"n", s.n},
                                {"runs", s.runs},
                                {"median_surplus", to_decimal(s.median_surplus, precision)},
                                {"mean_surplus", to_decimal(s.mean_surplus, precision)},
                                {"max_surplus", to_decimal(s.max_surplus, precision)},
                                {"median_max_branch_fraction", to_decimal(s.median_max_branch_fraction, precision)},
                                {"exactly_zero", s.exactly_zero}});
  }
  doc["records"] = Json::array();
  for (auto const &rec : r.records)
  {
    Json fractions = Json::array();
    for (auto const &f : rec.branch_fractions)
    {
      fractions.push_back(to_decimal(f, precision));
    }
    Json j{{"n", rec.n},
           {"seed", rec.seed},
           {"surplus", to_decimal(rec.surplus, precision)},
           {"max_value", to_decimal(rec.max_value, precision)},
           {"bound", rec.bound ? Json(to_decimal(*rec.bound, precision)) : Json(nullptr)},
           {"branch_fractions", std::move(fractions)}};
    if (r.kind == "bb")
    {
      j["qualifying"] = rec.qualifying;
    }
    doc["records"].push_back(std::move(j));
  }
  return doc;
}

inline Table experiment_table(ExperimentResult const &r, int precision)
{
  Table t{{"n", "seed", "surplus", "max_value", "bound", "max_branch_fraction"}, {}};
  for (auto const &rec : r.records)
  {
    Rational const top = rec.branch_fractions.empty()
                           ? Rational(0)
                           : *std::max_element(rec.branch_fractions.begin(), rec.branch_fractions.end());
    t.rows.push_back({std::to_string(rec.n), std::to_string(rec.seed), to_decimal(rec.surplus, precision),
                      to_decimal(rec.max_value, precision), rec.bound ? to_decimal(*rec.bound, precision) : "",
                      to_decimal(top, precision)});
  }
  return t;
}

}  // namespace nrmf
