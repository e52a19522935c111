// SPDX-License-Identifier: Apache-2.0
//
// mcmimo - multi-cell massive MIMO uplink simulation library
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

#ifndef MCMIMO_ERRORS_HPP
#define MCMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mcmimo {

// Invalid configuration or malformed input file. CLI exit code 1.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

// Numerical failure (singular system, PSD violation, ...). CLI exit code 2.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string &msg) : std::runtime_error(msg) {}
};

// Filesystem failure. CLI exit code 3.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace mcmimo

#endif
