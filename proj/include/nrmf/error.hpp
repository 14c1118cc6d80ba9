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

#include <stdexcept>
#include <string>

namespace nrmf {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A profile, parameter set or argument violates its documented invariants.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// Text or JSON input could not be parsed.
class ParseError : public Error
{
public:
  using Error::Error;
};

}  // namespace nrmf
