// SPDX-License-Identifier: Apache-2.0
//
// cellloc - Bayesian location estimation of mobile devices from cell plans
// Copyright (C) 2026 The cellloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "cellloc/cli.hpp"

#include "cellloc/config.hpp"
#include "cellloc/io.hpp"
#include "cellloc/pipeline.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

namespace cellloc::cli
{

namespace fs = std::filesystem;

namespace
{

struct Options
{
  std::string config;
  std::string out;
  int threads = 0;
  std::string prior;
  std::string pi;
  std::string likelihood;
  std::optional<int> tau;
  std::optional<int> merge;
  std::string cell;
  std::optional<double> shift;
};

// Logs progress and timing of each stage to stderr.
class Stage
{
public:
  Stage(std::ostream& err, std::string name)
      : err_(err), name_(std::move(name)), start_(std::chrono::steady_clock::now())
  {
  }
  ~Stage()
  {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_);
    err_ << "[cellloc] " << name_ << ": " << ms.count() << " ms\n";
  }

private:
  std::ostream& err_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

class ValidationFailed : public Error
{
public:
  using Error::Error;
};

MixtureWeights parse_pi(const std::string& s)
{
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
  {
    try
    {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size())
        throw std::invalid_argument(tok);
    }
    catch (const std::logic_error&)
    {
      throw ConfigError("--pi: '" + tok + "' is not a number");
    }
  }
  if (v.size() != 3)
    throw ConfigError("--pi needs three comma-separated weights");
  MixtureWeights pi{v[0], v[1], v[2]};
  pi.check();
  return pi;
}

// Lazily computed artifacts shared by the subcommands of one invocation.
class Session
{
public:
  Session(RunConfig config, int threads, std::ostream& out, std::ostream& err)
      : cfg_(std::move(config)), threads_(threads), out_(out), err_(err)
  {
    Stage s(err_, "load");
    ds_.emplace(load_dataset(cfg_));
    plan_ = apply_defaults(ds_->raw_plan, cfg_.cell_defaults);
    report_ = cellloc::validate(plan_, grid());
  }

  const RunConfig& config() const { return cfg_; }
  const Grid& grid() const { return ds_->grid; }
  const CellPlan& plan() const { return plan_; }

  void write(const std::string& name, const std::string& content)
  {
    const auto path = cfg_.output_dir / name;
    io::write_file_atomic(path, content);
    err_ << "[cellloc] wrote " << path.string() << '\n';
  }

  // Compute stages refuse an invalid plan.
  void require_valid()
  {
    if (report_.ok())
      return;
    for (const auto& f : report_.findings)
      if (f.severity == Severity::error)
        err_ << "error: " << (f.cell.empty() ? "<plan>" : f.cell) << ": " << f.rule << '\n';
    throw ValidationFailed("cell plan validation failed; run 'validate' for the full report");
  }

  void validate()
  {
    Stage s(err_, "validate");
    const auto& report = report_;
    std::string csv = "severity,cell_id,rule,message\n";
    for (const auto& f : report.findings)
    {
      const char* sev = f.severity == Severity::error ? "error" : "warning";
      csv += std::string(sev) + ',' + f.cell + ',' + f.rule + ',' + f.message + '\n';
      out_ << sev << ": " << (f.cell.empty() ? "<plan>" : f.cell) << ": " << f.rule << ": "
           << f.message << '\n';
    }
    out_ << plan_.cells.size() << " cells, " << report.error_count() << " errors, "
         << report.warning_count() << " warnings\n";
    write("validation.csv", csv);
    if (!report.ok())
      throw ValidationFailed("cell plan validation failed");
  }

  const Fields& fields()
  {
    if (!fields_)
    {
      require_valid();
      Stage s(err_, "strength");
      fields_ = compute_fields(plan_, grid(), cfg_.dominance, cfg_.patterns, threads_);
    }
    return *fields_;
  }

  const TileDistribution& prior(PriorKind kind)
  {
    auto it = priors_.find(kind);
    if (it == priors_.end())
    {
      const bool needs_field = kind == PriorKind::network ||
                               (kind == PriorKind::composite && cfg_.pi.network > 0.0);
      const SparseField empty;
      const auto& dom = needs_field ? fields().dominance : empty;
      Stage s(err_, std::string("prior ") + to_string(kind));
      auto p = make_prior(kind, cfg_.pi, grid(), ds_->landuse, dom);
      check_distribution(p, to_string(kind));
      it = priors_.emplace(kind, std::move(p)).first;
    }
    return it->second;
  }

  const LikelihoodField& likelihood(LikelihoodKind kind)
  {
    auto it = likelihoods_.find(kind);
    if (it == likelihoods_.end())
    {
      require_valid();
      const Fields empty;
      const auto& f = kind == LikelihoodKind::strength ? fields() : empty;
      Stage s(err_, std::string("likelihood ") + to_string(kind));
      auto l = make_likelihood(kind, f, plan_, grid(), cfg_.voronoi_shift, threads_);
      check_likelihood(l);
      it = likelihoods_.emplace(kind, std::move(l)).first;
    }
    return it->second;
  }

  const Posterior& posterior(PriorKind p, LikelihoodKind l)
  {
    auto it = posteriors_.find({p, l});
    if (it == posteriors_.end())
    {
      const auto& prior_ = prior(p);
      const auto& llh = likelihood(l);
      Stage s(err_, std::string("posterior ") + to_string(p) + "/" + to_string(l));
      auto post = cellloc::posterior(prior_, llh, threads_);
      check_posterior(post);
      for (const auto& cp : post.cells)
        if (cp.empty)
          err_ << "[cellloc] cell " << cp.cell << " has an empty posterior\n";
      it = posteriors_.emplace(std::pair{p, l}, std::move(post)).first;
    }
    return it->second;
  }

  bool landuse_available() const { return ds_->landuse.has_value(); }
  std::ostream& log() { return err_; }

private:
  RunConfig cfg_;
  int threads_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<Dataset> ds_;
  CellPlan plan_;
  ValidationReport report_;
  std::optional<Fields> fields_;
  std::map<PriorKind, TileDistribution> priors_;
  std::map<LikelihoodKind, LikelihoodField> likelihoods_;
  std::map<std::pair<PriorKind, LikelihoodKind>, Posterior> posteriors_;
};

void run_ta(Session& s)
{
  const auto& cfg = s.config();
  if (!cfg.ta)
    throw ConfigError("no Timing Advance settings: pass --tau or add a 'ta' section");
  const auto& post = s.posterior(cfg.prior, cfg.likelihood);
  const auto results = ta_update_all(post, *cfg.ta, s.grid(), s.plan());
  for (const auto& r : results)
    if (r.empty)
      s.log() << "[cellloc] cell " << r.cell << ": no posterior mass inside TA annulus " << r.tau
                << '\n';
  s.write("posterior_ta.csv", io::write_output(results));
}

using Action = std::function<void(Session&)>;

const std::map<std::string, std::pair<std::string, Action>>& commands()
{
  static const std::map<std::string, std::pair<std::string, Action>> table = {
      {"validate", {"Validate the cell plan against the grid", [](Session& s) { s.validate(); }}},
      {"strength",
       {"Compute signal strength and dominance fields",
        [](Session& s) { s.write("fields.csv", io::write_fields(s.fields())); }}},
      {"best-server",
       {"Best server tessellation from the strength model",
        [](Session& s) {
          const auto tess = best_server(s.fields().strength);
          s.write("best_server.csv", io::write_tessellation(tess));
          s.write("best_server.geojson", io::tessellation_geojson(tess, s.grid()));
        }}},
      {"voronoi",
       {"Shifted-seed Voronoi tessellation with small-cell carve-out",
        [](Session& s) {
          s.require_valid();
          const auto tess = voronoi_assign(s.plan(), s.grid(), s.config().voronoi_shift);
          s.write("voronoi.csv", io::write_tessellation(tess));
          s.write("voronoi.geojson", io::tessellation_geojson(tess, s.grid()));
        }}},
      {"prior",
       {"Location prior",
        [](Session& s) {
          const auto kind = s.config().prior;
          s.write(std::string("prior_") + to_string(kind) + ".csv", io::write_prior(s.prior(kind)));
        }}},
      {"likelihood",
       {"Connection likelihood",
        [](Session& s) {
          const auto kind = s.config().likelihood;
          s.write(std::string("likelihood_") + to_string(kind) + ".csv",
                  io::write_likelihood(s.likelihood(kind)));
        }}},
      {"posterior",
       {"Location posterior",
        [](Session& s) {
          s.write("posterior.csv",
                  io::write_output(s.posterior(s.config().prior, s.config().likelihood)));
        }}},
      {"ta", {"Posterior updated with a Timing Advance value", run_ta}},
      {"run-all",
       {"validate, strength, priors, likelihood, posteriors (and ta when configured)",
        [](Session& s) {
          const auto& cfg = s.config();
          s.validate();
          s.write("fields.csv", io::write_fields(s.fields()));

          std::vector<PriorKind> kinds{PriorKind::uniform};
          if (s.landuse_available())
            kinds.push_back(PriorKind::landuse);
          kinds.push_back(PriorKind::network);
          if (cfg.prior == PriorKind::composite)
            kinds.push_back(PriorKind::composite);
          std::vector<std::pair<std::string, const TileDistribution*>> columns;
          for (const auto k : kinds)
            columns.emplace_back(to_string(k), &s.prior(k));
          s.write("priors.csv", io::write_priors(columns));
          s.write(std::string("prior_") + to_string(cfg.prior) + ".csv",
                  io::write_prior(s.prior(cfg.prior)));

          s.write(std::string("likelihood_") + to_string(cfg.likelihood) + ".csv",
                  io::write_likelihood(s.likelihood(cfg.likelihood)));
          for (const auto k : kinds)
            s.write(std::string("posterior_") + to_string(k) + ".csv",
                    io::write_output(s.posterior(k, cfg.likelihood)));
          s.write("posterior.csv", io::write_output(s.posterior(cfg.prior, cfg.likelihood)));
          if (cfg.ta)
            run_ta(s);
        }}},
  };
  return table;
}

RunConfig load_config(const Options& o)
{
  std::string path = o.config;
  if (path.empty())
    if (const char* env = std::getenv("CELLLOC_CONFIG"))
      path = env;
  if (path.empty())
    throw ConfigError("no config: pass a config path or set CELLLOC_CONFIG");
  auto cfg = RunConfig::load(path);

  if (!o.out.empty())
    cfg.output_dir = o.out;
  try
  {
    if (!o.pi.empty())
      cfg.pi = parse_pi(o.pi);
    if (!o.prior.empty())
      cfg.prior = parse_prior_kind(o.prior);
    if (!o.likelihood.empty())
      cfg.likelihood = parse_likelihood_kind(o.likelihood);
    if (cfg.prior == PriorKind::composite)
      cfg.pi.check();
  }
  catch (const DomainError& e)
  {
    throw ConfigError(e.what());
  }
  if (o.shift)
    cfg.voronoi_shift = *o.shift;
  if (o.tau || o.merge || !o.cell.empty())
  {
    TaSettings ta = cfg.ta.value_or(TaSettings{});
    if (o.tau)
      ta.tau = *o.tau;
    else if (!cfg.ta)
      throw ConfigError("--b/--cell need --tau");
    if (o.merge)
      ta.merge = *o.merge;
    if (!o.cell.empty())
      ta.cell = o.cell;
    try
    {
      TimingAdvanceSpec{ta.tau, ta.band_width, ta.merge}.check();
    }
    catch (const Error& e)
    {
      throw ConfigError(e.what());
    }
    cfg.ta = ta;
  }
  return cfg;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Bayesian location estimation of mobile devices from cell plans", "cellloc"};
  app.require_subcommand(1, 1);
  Options o;
  std::string selected;

  for (const auto& [name, entry] : commands())
  {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->add_option("config", o.config, "Run configuration (JSON); defaults to $CELLLOC_CONFIG");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--threads", o.threads, "Worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
    sub->add_option("--prior", o.prior, "uniform | landuse | network | composite");
    sub->add_option("--pi", o.pi, "Composite weights u,l,n");
    sub->add_option("--likelihood", o.likelihood, "strength | voronoi");
    sub->add_option("--tau", o.tau, "Timing Advance value");
    sub->add_option("--b", o.merge, "Annuli merged on each side of tau");
    sub->add_option("--cell", o.cell, "Restrict the TA update to one cell");
    sub->add_option("--shift", o.shift, "Voronoi seed shift in meters");
    sub->callback([&selected, n = name] { selected = n; });
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty())
    rev.pop_back();
  try
  {
    app.parse(rev);
  }
  catch (const CLI::CallForHelp&)
  {
    out << app.help();
    return exit_ok;
  }
  catch (const CLI::ParseError& e)
  {
    err << "cellloc: " << e.what() << '\n';
    return exit_config;
  }

  try
  {
    const auto cfg = load_config(o);
    Stage total(err, selected);
    Session session(cfg, o.threads, out, err);
    commands().at(selected).second(session);
    return exit_ok;
  }
  catch (const ConfigError& e)
  {
    err << "cellloc: config: " << e.what() << '\n';
    return exit_config;
  }
  catch (const ValidationFailed& e)
  {
    err << "cellloc: " << e.what() << '\n';
    return exit_invalid_input;
  }
  catch (const ParseError& e)
  {
    err << "cellloc: input: " << e.what() << '\n';
    return exit_invalid_input;
  }
  catch (const InvariantError& e)
  {
    err << "cellloc: invariant: " << e.what() << '\n';
    return exit_invariant;
  }
  catch (const DegeneratePriorError& e)
  {
    err << "cellloc: invariant: " << e.what() << '\n';
    return exit_invariant;
  }
  catch (const Error& e)
  {
    err << "cellloc: " << e.what() << '\n';
    return exit_invalid_input;
  }
  catch (const std::exception& e)
  {
    err << "cellloc: internal error: " << e.what() << '\n';
    return exit_invariant;
  }
}

} // namespace cellloc::cli
