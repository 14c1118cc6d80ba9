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

// nrmf: run, audit and benchmark redistribution mechanisms on networks.
//
// Exit codes: 0 success, 1 property failure, 2 input error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nrmf/nrmf.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Globals
{
  std::string alpha = "1/2";
  std::uint64_t seed = 0;
  int precision = nrmf::kDefaultPrecision;
  std::string output = "json";

  nrmf::Rational alpha_value() const
  {
    return nrmf::parse_rational(alpha);
  }
  nrmf::OutputFormat format() const
  {
    return nrmf::parse_output_format(output);
  }
};

void print(nrmf::Json const &doc)
{
  std::cout << doc.dump(2) << '\n';
}

std::vector<nrmf::Money> true_values_for(nrmf::ReportProfile const &reported, std::string const &path)
{
  nrmf::ReportProfile const truth = nrmf::ingest(path);
  if (!std::ranges::equal(truth.ids(), reported.ids()))
  {
    throw nrmf::ParseError(path + ": true-value file must list the same agents as the input");
  }
  return nrmf::reported_values(truth);
}

nrmf::RedistributionOutcome from_auction(nrmf::MechanismId const &id, nrmf::ReportProfile const &p)
{
  nrmf::Mechanism const m = nrmf::auction_mechanism(id);
  nrmf::AuctionOutcome a = m(p);
  nrmf::RedistributionOutcome out;
  out.mechanism = nrmf::to_string(id);
  out.alpha = 0;
  out.allocation = a.allocation;
  out.auction_payment = a.payment;
  out.final_payment = a.payment;
  out.redistribution.assign(p.size(), nrmf::Money(0));
  out.omega.assign(p.size(), nrmf::Rational(0));
  out.branch_of.assign(p.size(), nrmf::kNoAgent);
  auto const graph = nrmf::induce_graph(p);
  for (nrmf::AgentIndex i : graph.reachable_agents())
  {
    out.branch_of[i] = 0;
  }
  out.auction_surplus = a.surplus;
  out.surplus = a.surplus;
  out.winner = a.winner;
  out.transfers = std::move(a.transfers);
  return out;
}

std::vector<std::size_t> parse_sizes(std::string const &text)
{
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    try
    {
      std::size_t used = 0;
      unsigned long long v = std::stoull(item, &used);
      if (used != item.size() || v == 0)
      {
        throw std::invalid_argument(item);
      }
      out.push_back(static_cast<std::size_t>(v));
    }
    catch (std::exception const &)
    {
      throw nrmf::ParseError("invalid size \"" + item + "\"");
    }
  }
  if (out.empty())
  {
    throw nrmf::ParseError("no sizes given");
  }
  return out;
}

struct ModelOptions
{
  std::string kind = "evenly_growing";
  std::size_t branches = 1;
  std::string vmax = "100";
  std::string sponsor_probability = "1/4";

  void add(CLI::App *cmd)
  {
    cmd->add_option("--model", kind, "evenly_growing | branch_independent");
    cmd->add_option("--branches", branches, "Root branches for branch_independent");
    cmd->add_option("--vmax", vmax, "Upper end of the value distribution");
    cmd->add_option("--sponsor-prob", sponsor_probability, "Sponsor attachment probability (evenly_growing)");
  }

  nrmf::GrowthModel build(std::uint64_t seed) const
  {
    nrmf::GrowthModel m;
    m.kind = nrmf::parse_growth_kind(kind);
    m.initial_branches = branches;
    m.values.hi = nrmf::parse_decimal(vmax);
    m.sponsor_probability = nrmf::parse_rational(sponsor_probability);
    m.seed = seed;
    m.validate();
    return m;
  }
};

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Network-based redistribution mechanisms on diffusion auctions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--alpha", g.alpha, "Sharing parameter in (0,1), decimal or p/q");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--precision", g.precision, "Decimal digits in output")->check(CLI::Range(0, 60));
  app.add_option("--output", g.output, "json | csv | table");

  // run
  auto *run = app.add_subcommand("run", "Run a mechanism on a network file");
  std::string input;
  std::string mechanism = "idm";
  std::string true_values;
  bool auction_only = false;
  run->add_option("--input,-i", input, "Network JSON file")->required();
  run->add_option("--mechanism,-m", mechanism, "vcg | idm | tnm | fixed:<p> | cavallo");
  run->add_option("--true-values", true_values, "Network JSON file with the agents' true values");
  run->add_flag("--auction-only", auction_only, "Run the bare auction without redistribution");

  // verify
  auto *verify = app.add_subcommand("verify", "Audit a property over a directory of instances");
  std::string property;
  std::string instances;
  std::string step = "1";
  verify->add_option("--property,-p", property, "ir | ic | nd | rev-mono | rev-inv")->required();
  verify->add_option("--mechanism,-m", mechanism, "vcg | idm | tnm | fixed:<p> | cavallo");
  verify->add_option("--instances", instances, "Directory of network JSON files")->required();
  verify->add_option("--step", step, "Valuation grid step");
  verify->add_flag("--auction-only", auction_only, "Audit the bare auction");

  // generate
  auto *generate = app.add_subcommand("generate", "Generate a random invitation tree");
  ModelOptions gen_model;
  std::size_t n = 10;
  std::string out_path;
  gen_model.add(generate);
  generate->add_option("--n", n, "Number of agents")->required();
  generate->add_option("--out", out_path, "Write the network here instead of stdout");

  // experiment
  auto *experiment = app.add_subcommand("experiment", "Surplus experiments on growing trees");
  experiment->require_subcommand(1);
  auto *abb = experiment->add_subcommand("abb", "Asymptotic budget balance");
  auto *bb = experiment->add_subcommand("bb", "Fixed-price budget balance");
  ModelOptions exp_model;
  std::string sizes = "50,200,1000";
  std::size_t seeds = 20;
  std::string price = "50";
  exp_model.add(abb);
  abb->add_option("--mechanism,-m", mechanism, "idm | tnm");
  abb->add_option("--sizes", sizes, "Comma-separated sizes");
  abb->add_option("--seeds", seeds, "Runs per size");
  exp_model.add(bb);
  bb->add_option("--price", price, "Fixed price");
  bb->add_option("--sizes", sizes, "Comma-separated sizes");
  bb->add_option("--seeds", seeds, "Runs per size");

  // tree / shares
  auto *tree = app.add_subcommand("tree", "Print the critical tree");
  tree->add_option("--input,-i", input, "Network JSON file")->required();
  auto *shares = app.add_subcommand("shares", "Print the tree-sharing coefficients");
  std::string reward = "1";
  shares->add_option("--input,-i", input, "Network JSON file")->required();
  shares->add_option("--reward", reward, "Reward B to share");

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::CallForAllHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::ParseError const &e)
  {
    app.exit(e);
    return kExitInput;
  }

  try
  {
    nrmf::OutputFormat const format = g.format();
    nrmf::Rational const alpha = g.alpha_value();
    nrmf::SharingParams{alpha, nrmf::Money(1)}.validate();

    if (run->parsed())
    {
      nrmf::ReportProfile const p = nrmf::ingest(input);
      std::optional<std::vector<nrmf::Money>> truth;
      if (!true_values.empty())
      {
        truth = true_values_for(p, true_values);
      }
      nrmf::RedistributionOutcome outcome;
      if (mechanism == "cavallo")
      {
        outcome = nrmf::cavallo(p);
      }
      else if (auction_only)
      {
        outcome = from_auction(nrmf::parse_mechanism(mechanism), p);
      }
      else
      {
        outcome = nrmf::run_nrmf(nrmf::parse_mechanism(mechanism), p, alpha);
      }
      if (format == nrmf::OutputFormat::json)
      {
        print(nrmf::outcome_to_json(p, outcome, g.precision, truth));
      }
      else
      {
        std::cout << nrmf::render(nrmf::outcome_table(p, outcome, g.precision, truth), format);
        if (format == nrmf::OutputFormat::table)
        {
          std::cout << "winner: " << nrmf::agent_label(p, outcome.winner)
                    << "\nauction surplus: " << nrmf::to_decimal(outcome.auction_surplus, g.precision)
                    << "\nsurplus: " << nrmf::to_decimal(outcome.surplus, g.precision) << '\n';
        }
      }
      return 0;
    }

    if (verify->parsed())
    {
      nrmf::Property const prop = nrmf::parse_property(property);
      nrmf::Mechanism const m = nrmf::make_mechanism(mechanism, alpha, auction_only);
      std::vector<nrmf::Instance> const list = nrmf::load_instances(instances);
      nrmf::DeviationSpace space;
      space.step = nrmf::parse_rational(step);
      space.seed = g.seed;
      nrmf::PropertyReport report;
      if (prop == nrmf::Property::ir)
      {
        report = nrmf::check_ir(m, list, space);
      }
      else if (prop == nrmf::Property::ic)
      {
        report = nrmf::check_ic(m, list, space);
      }
      else if (prop == nrmf::Property::nd)
      {
        report = nrmf::check_nd(m, list);
      }
      else
      {
        std::vector<nrmf::InstancePair> pairs;
        for (auto const &inst : list)
        {
          if (prop == nrmf::Property::revenue_monotonic)
          {
            for (auto &pair : nrmf::edge_removal_pairs(inst))
            {
              pairs.push_back(std::move(pair));
            }
            for (auto &pair : nrmf::leaf_removal_pairs(inst))
            {
              pairs.push_back(std::move(pair));
            }
          }
          else
          {
            pairs.push_back(nrmf::append_leaf_pair(inst, nrmf::kNoAgent, nrmf::Money(0)));
            for (nrmf::AgentIndex h = 0; h < inst.truth.size(); ++h)
            {
              pairs.push_back(nrmf::append_leaf_pair(inst, h, nrmf::Money(0)));
            }
          }
        }
        report = prop == nrmf::Property::revenue_monotonic ? nrmf::check_revenue_monotonic(m, pairs)
                                                           : nrmf::check_revenue_invariant(m, pairs);
      }
      if (format == nrmf::OutputFormat::json)
      {
        print(nrmf::report_to_json(report));
      }
      else
      {
        nrmf::Table t{{"property", "mechanism", "verdict", "instances", "cases", "witness"}, {}};
        t.rows.push_back({nrmf::to_string(report.property), report.mechanism, report.pass ? "pass" : "fail",
                          std::to_string(report.instances), std::to_string(report.cases),
                          report.witness ? report.witness->description : ""});
        std::cout << nrmf::render(t, format);
      }
      return report.pass ? 0 : kExitFail;
    }

    if (generate->parsed())
    {
      nrmf::ReportProfile const p = nrmf::generate(gen_model.build(g.seed), n);
      if (out_path.empty())
      {
        print(nrmf::profile_to_json(p));
      }
      else
      {
        nrmf::emit(p, out_path);
      }
      return 0;
    }

    if (abb->parsed() || bb->parsed())
    {
      nrmf::GrowthModel const model = exp_model.build(g.seed);
      nrmf::ExperimentResult const result =
        abb->parsed() ? nrmf::abb_experiment(nrmf::parse_mechanism(mechanism), model, parse_sizes(sizes), seeds, alpha)
                      : nrmf::bb_experiment(nrmf::parse_decimal(price), model, parse_sizes(sizes), seeds, alpha);
      if (format == nrmf::OutputFormat::json)
      {
        print(nrmf::experiment_to_json(result, g.precision));
      }
      else
      {
        std::cout << nrmf::render(nrmf::experiment_table(result, g.precision), format);
      }
      return result.pass ? 0 : kExitFail;
    }

    if (tree->parsed())
    {
      nrmf::ReportProfile const p = nrmf::ingest(input);
      auto const t = nrmf::critical_tree(p);
      if (format == nrmf::OutputFormat::json)
      {
        print(nrmf::tree_to_json(p, t));
      }
      else
      {
        std::cout << nrmf::render(nrmf::tree_table(p, t), format);
      }
      return 0;
    }

    if (shares->parsed())
    {
      nrmf::ReportProfile const p = nrmf::ingest(input);
      auto const s = nrmf::prst(nrmf::critical_tree(p), nrmf::SharingParams{alpha, nrmf::parse_rational(reward)});
      if (format == nrmf::OutputFormat::json)
      {
        print(nrmf::shares_to_json(p, s, g.precision));
      }
      else
      {
        std::cout << nrmf::render(nrmf::shares_table(p, s, g.precision), format);
      }
      return 0;
    }
  }
  catch (nrmf::Error const &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
