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

#include <ostream>
#include <string>
#include <vector>

namespace cellloc::cli
{

// Exit codes of the `cellloc` command.
enum ExitCode : int
{
  exit_ok = 0,
  exit_invalid_input = 1, // validation errors or malformed data files
  exit_config = 2,        // config missing or unreadable
  exit_invariant = 3      // internal invariant breach
};

// Runs one `cellloc` invocation. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cellloc::cli
