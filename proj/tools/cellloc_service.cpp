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


#include "cellloc/config.hpp"
#include "cellloc/service.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv)
{
  CLI::App app{"cellloc-service: JSON API over one dataset"};
  std::string config;
  std::string listen = "127.0.0.1:8080";
  int threads = 0;
  app.add_option("config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--listen", listen, "host:port to bind");
  app.add_option("--threads", threads, "Worker threads for field computation, 0 = default")
      ->check(CLI::NonNegativeNumber);
  CLI11_PARSE(app, argc, argv);

  const auto colon = listen.rfind(':');
  if (colon == std::string::npos)
  {
    std::cerr << "error: --listen expects host:port\n";
    return 2;
  }
  const std::string host = listen.substr(0, colon);
  const int port = std::atoi(listen.c_str() + colon + 1);

  try
  {
    auto cfg = cellloc::RunConfig::load(config);
    auto ds = cellloc::load_dataset(cfg);
    cellloc::service::Service service(std::move(cfg), std::move(ds), threads);
    cellloc::service::HttpFrontend http(service);
    const int bound = http.bind(host, port);
    if (bound < 0)
    {
      std::cerr << "error: cannot bind " << listen << '\n';
      return 1;
    }
    std::cerr << "listening on " << host << ':' << bound << '\n';
    if (!http.run())
      return 1;
  }
  catch (const cellloc::ConfigError& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
