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

#include <stdexcept>
#include <string>

namespace cellloc
{

// Base class of all errors raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Index or identifier outside the valid range (tile id, tau, unknown cell).
class RangeError : public Error
{
public:
  using Error::Error;
};

// Argument outside the mathematical domain of a formula (log of zero power, ...).
class DomainError : public Error
{
public:
  using Error::Error;
};

// Constraint set without a solution, e.g. a radiation pattern whose maximum
// loss cannot reach the 3 dB half-power point.
class InfeasibleError : public Error
{
public:
  using Error::Error;
};

// A prior with zero total mass.
class DegeneratePriorError : public Error
{
public:
  using Error::Error;
};

// Malformed input file. Carries the location of the offending field.
class ParseError : public Error
{
public:
  ParseError(const std::string& what, std::size_t row = 0, std::string column = {})
      : Error(format(what, row, column)), row_(row), column_(std::move(column))
  {
  }

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

private:
  static std::string format(const std::string& what, std::size_t row, const std::string& column)
  {
    std::string out;
    if (row > 0)
      out += "row " + std::to_string(row) + ": ";
    if (!column.empty())
      out += "column '" + column + "': ";
    return out + what;
  }

  std::size_t row_;
  std::string column_;
};

// Two inputs that must describe the same grid do not.
class MismatchError : public Error
{
public:
  using Error::Error;
};

} // namespace cellloc
