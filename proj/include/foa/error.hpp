/*
Copyright 2026 The Foakit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef FOA_ERROR_HPP_
#define FOA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace foa {

// Error taxonomy mirrors the CLI exit codes: bad configuration/arguments,
// filesystem or serialization failures, and data-integrity violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

enum class ExitCode : int {
  kOk = 0,
  kFailure = 1,  // unexpected internal error
  kConfig = 2,
  kIo = 3,
  kData = 4,
};

}  // namespace foa

#endif  // FOA_ERROR_HPP_
