// Copyright 2026 The qnnmi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace qnnmi {

// Precondition violations on library calls throw std::invalid_argument or
// std::out_of_range. The classes below are the failure kinds the CLI maps to
// distinct exit codes.

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitData = 3,
    kExitNumerical = 4,
};

}  // namespace qnnmi
