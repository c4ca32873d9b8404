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


#pragma once

#include "cellloc/bayes.hpp"
#include "cellloc/config.hpp"
#include "cellloc/propagation.hpp"
#include "cellloc/voronoi.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

namespace cellloc::service
{

struct Request
{
  std::string method = "GET";
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response
{
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Parameters the explorer may change at run time.
struct ModelParams
{
  DominanceParams dominance;
  PatternParams patterns;
  double path_loss_default = 3.75;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// JSON service over one dataset. Reads run concurrently; POST /params
// serializes against them. Every response is a pure function of the
// dataset, the current parameters and the query.
class Service
{
public:
  Service(RunConfig config, Dataset dataset, int threads = 0);

  Response handle(const Request& request);

  ModelParams params() const;

  // Number of strength / dominance recomputations so far.
  struct CacheStats
  {
    int strength = 0;
    int dominance = 0;
  };
  CacheStats stats() const;

  // Cache keys for the current parameters.
  std::string strength_key() const;
  std::string dominance_key() const;

  const Grid& grid() const noexcept { return dataset_.grid; }

private:
  Response route(const Request& request);
  Response post_params(const Request& request);

  // Throw on invalid input; `handle` maps them onto status codes.
  const Fields& fields_locked();
  CellPlan effective_plan() const;
  std::string strength_key_locked() const;
  std::string dominance_key_locked() const;

  RunConfig config_;
  Dataset dataset_;
  int threads_;

  mutable std::shared_mutex params_mutex_;
  ModelParams params_;

  std::mutex cache_mutex_;
  std::string strength_cache_key_;
  std::shared_ptr<const StrengthMatrix> strength_cache_;
  std::string dominance_cache_key_;
  std::shared_ptr<const Fields> fields_cache_;
  std::atomic<int> strength_computations_{0};
  std::atomic<int> dominance_computations_{0};
};

// HTTP binding of a Service with CORS headers on every response.
class HttpFrontend
{
public:
  explicit HttpFrontend(Service& service);
  ~HttpFrontend();
  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Binds host:port; port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Serves until stop(); requires a successful bind().
  bool run();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace cellloc::service
