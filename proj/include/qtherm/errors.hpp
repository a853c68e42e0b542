// Copyright 2026 The qtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qtherm {

/// Malformed input: wrong dimensions, colliding indices, non-Hermitian
/// matrices, invalid parameters. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A register would exceed the dense-storage cap. The CLI maps this to exit code 3.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A composite gate without a registered decomposition rule was counted or
/// executed under noise.
class UnregisteredComposite : public std::runtime_error {
 public:
  explicit UnregisteredComposite(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qtherm
