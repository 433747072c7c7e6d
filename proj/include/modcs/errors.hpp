/*  Copyright 2026 the modcs authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.  */

#ifndef MODCS_ERRORS_HPP
#define MODCS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace modcs {

/// Invalid argument / configuration (dimension mismatch, bad sizes, ...).
struct parameter_error : std::invalid_argument {
  explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A combinatorial enumeration would exceed the subset budget.
struct budget_error : std::runtime_error {
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

/// A formula's hypothesis fails (e.g. non-positive denominator in a
/// restricted-isometry coefficient).
struct condition_violated : std::runtime_error {
  explicit condition_violated(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace modcs

#endif
