// Copyright 2026 The orbitfl Authors
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

namespace orbitfl {

//! Raised for configuration parse or range failures.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string &what)
      : std::runtime_error(what), key_(std::move(key)) {}

  //! Offending key, empty when the failure is not tied to one key.
  const std::string &key() const { return key_; }

 private:
  std::string key_;
};

//! Raised by the wire codec on malformed input.
class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Raised on file read/write failures and malformed data files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orbitfl
