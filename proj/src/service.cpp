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


#include "cellloc/service.hpp"

#include "cellloc/io.hpp"
#include "cellloc/pipeline.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace cellloc::service
{

using nlohmann::json;

namespace
{

// Client input rejected with status 400, naming the offending field.
class BadRequest : public Error
{
public:
  BadRequest(std::string field, const std::string& what)
      : Error(what), field_(std::move(field))
  {
  }
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

class NotFound : public Error
{
public:
  using Error::Error;
};

Response json_response(int status, const json& body)
{
  return {status, body.dump(), "application/json"};
}

Response error_response(int status, const std::string& message, const char* key = nullptr,
                        const std::string& value = {})
{
  json body{{"error", message}};
  if (key)
    body[key] = value;
  return json_response(status, body);
}

// Round-trip exact text for a double.
std::string exact(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

json grid_json(const Grid& g)
{
  return {{"origin", {g.origin().x, g.origin().y}},
          {"tile_size", g.tile_size()},
          {"n_cols", g.n_cols()},
          {"n_rows", g.n_rows()}};
}

json values_json(const std::vector<FieldEntry>& entries)
{
  json v = json::array();
  for (const auto& e : entries)
    v.push_back({e.tile, e.value});
  return v;
}

std::optional<std::string> query(const Request& r, const std::string& key)
{
  const auto it = r.query.find(key);
  if (it == r.query.end() || it->second.empty())
    return std::nullopt;
  return it->second;
}

std::string required(const Request& r, const std::string& key)
{
  auto v = query(r, key);
  if (!v)
    throw BadRequest(key, "missing query parameter '" + key + "'");
  return *v;
}

long parse_int(const std::string& field, const std::string& s)
{
  std::size_t pos = 0;
  long v = 0;
  try
  {
    v = std::stol(s, &pos);
  }
  catch (const std::exception&)
  {
    throw BadRequest(field, "'" + field + "' must be an integer");
  }
  if (pos != s.size())
    throw BadRequest(field, "'" + field + "' must be an integer");
  return v;
}

double parse_double(const std::string& field, const std::string& s)
{
  std::size_t pos = 0;
  double v = 0;
  try
  {
    v = std::stod(s, &pos);
  }
  catch (const std::exception&)
  {
    throw BadRequest(field, "'" + field + "' must be a number");
  }
  if (pos != s.size() || !std::isfinite(v))
    throw BadRequest(field, "'" + field + "' must be a finite number");
  return v;
}

PriorKind prior_kind(const Request& r, const char* key, PriorKind fallback)
{
  const auto v = query(r, key);
  if (!v)
    return fallback;
  try
  {
    return parse_prior_kind(*v);
  }
  catch (const Error& e)
  {
    throw BadRequest(key, e.what());
  }
}

LikelihoodKind likelihood_kind(const Request& r, LikelihoodKind fallback)
{
  const auto v = query(r, "likelihood");
  if (!v)
    return fallback;
  try
  {
    return parse_likelihood_kind(*v);
  }
  catch (const Error& e)
  {
    throw BadRequest("likelihood", e.what());
  }
}

MixtureWeights mixture(const Request& r, const MixtureWeights& fallback)
{
  const auto v = query(r, "pi");
  if (!v)
    return fallback;
  std::vector<double> parts;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ','))
    parts.push_back(parse_double("pi", item));
  if (parts.size() != 3)
    throw BadRequest("pi", "'pi' needs three comma-separated weights");
  MixtureWeights w{parts[0], parts[1], parts[2]};
  try
  {
    w.check();
  }
  catch (const Error& e)
  {
    throw BadRequest("pi", e.what());
  }
  return w;
}

// Field named in a DominanceParams::check message ("S_mid: ...").
std::string field_of(const std::string& message)
{
  const auto colon = message.find(':');
  return colon == std::string::npos ? std::string{} : message.substr(0, colon);
}

json cell_json(const Cell& c)
{
  json j{{"id", c.id},
         {"x", c.x},
         {"y", c.y},
         {"height", c.height.value_or(0.0)},
         {"directional", c.is_directional()},
         {"power", c.power.value_or(0.0)},
         {"path_loss_exp", c.path_loss_exponent.value_or(0.0)},
         {"small", c.is_small()}};
  if (c.azimuth)
    j["azimuth"] = *c.azimuth;
  if (c.is_directional())
  {
    j["tilt"] = c.tilt.value_or(0.0);
    j["beam_h"] = c.beam_h.value_or(0.0);
    j["beam_v"] = c.beam_v.value_or(0.0);
  }
  return j;
}

json params_json(const ModelParams& p)
{
  return {{"S_mid", p.dominance.s_mid},
          {"S_steep", p.dominance.s_steep},
          {"min_dominance", p.dominance.min_dominance},
          {"gamma_default", p.path_loss_default},
          {"azimuth_max_loss", p.patterns.azimuth_max_loss},
          {"elevation_max_loss", p.patterns.elevation_max_loss}};
}

} // namespace

Service::Service(RunConfig config, Dataset dataset, int threads)
    : config_(std::move(config)), dataset_(std::move(dataset)), threads_(threads)
{
  params_.dominance = config_.dominance;
  params_.patterns = config_.patterns;
  params_.path_loss_default = config_.cell_defaults.path_loss_exponent;
}

ModelParams Service::params() const
{
  std::shared_lock lock(params_mutex_);
  return params_;
}

Service::CacheStats Service::stats() const
{
  return {strength_computations_.load(), dominance_computations_.load()};
}

CellPlan Service::effective_plan() const
{
  CellDefaults d = config_.cell_defaults;
  d.path_loss_exponent = params_.path_loss_default;
  return apply_defaults(dataset_.raw_plan, d);
}

std::string Service::strength_key_locked() const
{
  // Everything the strength field depends on, in exact text.
  std::string key = "grid:" + exact(grid().origin().x) + "," + exact(grid().origin().y) + "," +
                    exact(grid().tile_size()) + "," + std::to_string(grid().n_cols()) + "," +
                    std::to_string(grid().n_rows()) + ";";
  key += "patterns:" + exact(params_.patterns.azimuth_max_loss) + "," +
         exact(params_.patterns.elevation_max_loss) + ";";
  for (const auto& c : effective_plan().cells)
  {
    key += c.id + ":" + exact(c.x) + "," + exact(c.y) + "," + exact(*c.height) + "," +
           (*c.directional ? "d" : "o") + "," + exact(c.azimuth.value_or(0.0)) + "," +
           exact(*c.tilt) + "," + exact(*c.beam_h) + "," + exact(*c.beam_v) + "," +
           exact(*c.power) + "," + exact(*c.path_loss_exponent) + "," + (*c.small ? "s" : "m") +
           ";";
  }
  return key;
}

std::string Service::dominance_key_locked() const
{
  return strength_key_locked() + "dominance:" + exact(params_.dominance.s_mid) + "," +
         exact(params_.dominance.s_steep) + "," + exact(params_.dominance.min_dominance);
}

std::string Service::strength_key() const
{
  std::shared_lock lock(params_mutex_);
  return strength_key_locked();
}

std::string Service::dominance_key() const
{
  std::shared_lock lock(params_mutex_);
  return dominance_key_locked();
}

// Caller holds params_mutex_ (shared or exclusive).
const Fields& Service::fields_locked()
{
  std::lock_guard lock(cache_mutex_);
  const auto skey = strength_key_locked();
  const auto dkey = dominance_key_locked();
  if (fields_cache_ && dominance_cache_key_ == dkey)
    return *fields_cache_;
  if (!strength_cache_ || strength_cache_key_ != skey)
  {
    strength_cache_.reset();
    fields_cache_.reset();
    strength_cache_ = std::make_shared<const StrengthMatrix>(
        compute_strength(effective_plan(), grid(), params_.patterns, threads_));
    strength_cache_key_ = skey;
    ++strength_computations_;
  }
  fields_cache_ = std::make_shared<const Fields>(
      threshold_fields(*strength_cache_, params_.dominance, threads_));
  dominance_cache_key_ = dkey;
  ++dominance_computations_;
  return *fields_cache_;
}

Response Service::post_params(const Request& request)
{
  json body;
  try
  {
    body = json::parse(request.body);
  }
  catch (const json::parse_error&)
  {
    throw BadRequest("body", "request body is not valid JSON");
  }
  if (!body.is_object())
    throw BadRequest("body", "request body must be a JSON object");

  std::unique_lock lock(params_mutex_);
  ModelParams next = params_;
  for (const auto& [key, value] : body.items())
  {
    if (!value.is_number())
      throw BadRequest(key, "'" + key + "' must be a number");
    const double v = value.get<double>();
    if (key == "S_mid")
      next.dominance.s_mid = v;
    else if (key == "S_steep")
      next.dominance.s_steep = v;
    else if (key == "min_dominance")
      next.dominance.min_dominance = v;
    else if (key == "gamma_default")
      next.path_loss_default = v;
    else if (key == "azimuth_max_loss")
      next.patterns.azimuth_max_loss = v;
    else if (key == "elevation_max_loss")
      next.patterns.elevation_max_loss = v;
    else
      throw BadRequest(key, "unknown parameter '" + key + "'");
  }
  try
  {
    next.dominance.check();
  }
  catch (const Error& e)
  {
    throw BadRequest(field_of(e.what()), e.what());
  }
  if (!(next.path_loss_default > 0.0))
    throw BadRequest("gamma_default", "gamma_default must be positive");
  for (const auto& [name, c] : {std::pair{"azimuth_max_loss", next.patterns.azimuth_max_loss},
                                {"elevation_max_loss", next.patterns.elevation_max_loss}})
    if (!(c > 3.0) || !std::isfinite(c))
      throw BadRequest(name, std::string(name) + " must exceed 3 dB");

  params_ = next;
  // Keys absorb the change; entries under stale keys are dropped here.
  {
    std::lock_guard cache_lock(cache_mutex_);
    if (strength_cache_ && strength_cache_key_ != strength_key_locked())
    {
      strength_cache_.reset();
      fields_cache_.reset();
    }
    if (fields_cache_ && dominance_cache_key_ != dominance_key_locked())
      fields_cache_.reset();
  }
  return json_response(200, params_json(params_));
}

Response Service::route(const Request& r)
{
  if (r.method == "POST" && r.path == "/params")
    return post_params(r);
  if (r.method != "GET")
    return error_response(405, "method not allowed");

  std::shared_lock lock(params_mutex_);
  const Grid& g = grid();

  if (r.path == "/params")
    return json_response(200, params_json(params_));

  if (r.path == "/cells")
  {
    json cells = json::array();
    for (const auto& c : effective_plan().cells)
      cells.push_back(cell_json(c));
    return json_response(200, {{"grid", grid_json(g)}, {"cells", cells}});
  }

  const auto find_cell = [&](const std::string& id) {
    if (!dataset_.raw_plan.find(id))
      throw NotFound("unknown cell '" + id + "'");
    return id;
  };

  if (r.path == "/tessellation")
  {
    const auto kind = query(r, "kind").value_or("voronoi");
    Tessellation tess;
    if (kind == "voronoi")
      tess = voronoi_assign(effective_plan(), g, config_.voronoi_shift, threads_);
    else if (kind == "bestserver")
      tess = best_server(fields_locked().strength);
    else
      throw BadRequest("kind", "kind must be 'voronoi' or 'bestserver'");
    json values = json::array();
    for (TileId t = 0; t < tess.n_tiles(); ++t)
    {
      const auto o = tess.owner[static_cast<std::size_t>(t)];
      values.push_back({t, o == Tessellation::unassigned ? json(nullptr)
                                                         : json(tess.cell_ids[static_cast<std::size_t>(o)])});
    }
    return json_response(200, {{"grid", grid_json(g)}, {"kind", kind}, {"values", values}});
  }

  if (r.path == "/field")
  {
    const auto kind = query(r, "kind").value_or("strength");
    if (kind != "strength" && kind != "dominance")
      throw BadRequest("kind", "kind must be 'strength' or 'dominance'");
    const auto cell = find_cell(required(r, "cell"));
    const auto& f = fields_locked();
    const auto& field = kind == "strength" ? f.strength : f.dominance;
    return json_response(200, {{"grid", grid_json(g)},
                               {"kind", kind},
                               {"cell", cell},
                               {"values", values_json(field.columns[field.column_of(cell)])}});
  }

  const auto build_prior = [&](PriorKind kind, const MixtureWeights& pi) {
    const bool needs_field =
        kind == PriorKind::network || (kind == PriorKind::composite && pi.network > 0.0);
    const bool needs_landuse =
        kind == PriorKind::landuse || (kind == PriorKind::composite && pi.landuse > 0.0);
    if (needs_landuse && !dataset_.landuse)
      throw BadRequest("prior", "the dataset has no land-use data");
    const SparseField empty{g.size(), {}, {}};
    return make_prior(kind, pi, g, dataset_.landuse, needs_field ? fields_locked().dominance : empty);
  };

  const auto build_likelihood = [&](LikelihoodKind kind) {
    const Fields empty;
    const auto& f = kind == LikelihoodKind::strength ? fields_locked() : empty;
    return make_likelihood(kind, f, effective_plan(), g, config_.voronoi_shift, threads_);
  };

  if (r.path == "/prior")
  {
    const auto kind = prior_kind(r, "kind", config_.prior);
    const auto pi = mixture(r, config_.pi);
    const auto prior = build_prior(kind, pi);
    check_distribution(prior, "prior");
    json values = json::array();
    for (TileId t = 0; t < g.size(); ++t)
      if (prior[t] > 0.0)
        values.push_back({t, prior[t]});
    return json_response(200,
                         {{"grid", grid_json(g)}, {"kind", to_string(kind)}, {"values", values}});
  }

  if (r.path == "/likelihood")
  {
    const auto kind = likelihood_kind(r, config_.likelihood);
    const auto cell = find_cell(required(r, "cell"));
    const auto llh = build_likelihood(kind);
    check_likelihood(llh);
    return json_response(200,
                         {{"grid", grid_json(g)},
                          {"kind", to_string(kind)},
                          {"cell", cell},
                          {"values", values_json(llh.field.columns[llh.field.column_of(cell)])}});
  }

  if (r.path == "/posterior" || r.path == "/posterior_ta")
  {
    const auto pkind = prior_kind(r, "prior", config_.prior);
    const auto lkind = likelihood_kind(r, config_.likelihood);
    const auto pi = mixture(r, config_.pi);
    const auto cell = find_cell(required(r, "cell"));

    std::optional<TimingAdvanceSpec> ta;
    if (r.path == "/posterior_ta")
    {
      const auto tau = parse_int("tau", required(r, "tau"));
      if (tau < 0 || tau > max_timing_advance)
        throw BadRequest("tau", "tau must be in [0, " + std::to_string(max_timing_advance) + "]");
      const auto b = query(r, "b") ? parse_int("b", *query(r, "b")) : 1;
      if (b < 0)
        throw BadRequest("b", "b must be non-negative");
      ta = TimingAdvanceSpec{static_cast<int>(tau), default_ta_band_width, static_cast<int>(b)};
    }

    const auto prior = build_prior(pkind, pi);
    const auto llh = build_likelihood(lkind);
    const auto post = posterior(prior, llh, threads_);
    check_posterior(post);

    json out{{"grid", grid_json(g)},
             {"prior", to_string(pkind)},
             {"likelihood", to_string(lkind)},
             {"cell", cell}};
    if (!ta)
    {
      const auto& cp = post.of(cell);
      out["empty"] = cp.empty;
      out["values"] = values_json(cp.probs);
    }
    else
    {
      const auto res = ta_update(post, cell, *ta, g, effective_plan());
      out["tau"] = ta->tau;
      out["b"] = ta->merge;
      out["empty"] = res.empty;
      out["values"] = values_json(res.probs);
    }
    return json_response(200, out);
  }

  return error_response(404, "no route for " + r.path);
}

Response Service::handle(const Request& request)
{
  try
  {
    return route(request);
  }
  catch (const BadRequest& e)
  {
    return error_response(400, e.what(), "field", e.field());
  }
  catch (const NotFound& e)
  {
    return error_response(404, e.what());
  }
  catch (const InvariantError& e)
  {
    return error_response(500, e.what(), "invariant", "normalization");
  }
  catch (const DegeneratePriorError& e)
  {
    return error_response(500, e.what(), "invariant", "prior-mass");
  }
  catch (const Error& e)
  {
    return error_response(400, e.what(), "field", "");
  }
  catch (const std::exception& e)
  {
    return error_response(500, e.what(), "invariant", "internal");
  }
}

struct HttpFrontend::Impl
{
  httplib::Server server;
};

HttpFrontend::HttpFrontend(Service& service) : impl_(std::make_unique<Impl>())
{
  const auto cors = [](httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  };
  const auto forward = [&service, cors](const httplib::Request& req, httplib::Response& res) {
    Request r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params)
      r.query.emplace(k, v);
    r.body = req.body;
    const auto out = service.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
    cors(res);
  };
  auto& server = impl_->server;
  server.Get(R"(/.*)", forward);
  server.Post(R"(/.*)", forward);
  server.Options(R"(/.*)", [cors](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    cors(res);
  });
}

HttpFrontend::~HttpFrontend() = default;

int HttpFrontend::bind(const std::string& host, int port)
{
  if (port == 0)
    return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpFrontend::run()
{
  return impl_->server.listen_after_bind();
}

void HttpFrontend::stop()
{
  impl_->server.stop();
}

} // namespace cellloc::service
