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

#ifndef MODCS_SUPPORTS_HPP
#define MODCS_SUPPORTS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "modcs/linalg.hpp"
#include "modcs/rng.hpp"

namespace modcs {

/// Index sets are sorted ascending and duplicate-free, 0-based.
using IndexSet = std::vector<std::size_t>;

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
bool set_contains(const IndexSet& a, std::size_t v);
IndexSet complement(const IndexSet& a, std::size_t n);

/// Partially known support of an n-length sparse vector: the prior set
/// `known` may miss some true-support indices (`missed`, disjoint from
/// `known`) and may contain indices that are actually zero (`spurious`,
/// a subset of `known`). The true support is known + missed - spurious.
struct SupportModel {
  std::size_t n = 0;
  IndexSet known;     // prior support estimate
  IndexSet missed;    // true-support indices absent from `known`
  IndexSet spurious;  // members of `known` that are not in the true support

  SupportModel() = default;
  SupportModel(std::size_t n, IndexSet known, IndexSet missed, IndexSet spurious);

  IndexSet true_support() const;
  std::size_t known_size() const { return known.size(); }
  std::size_t missed_size() const { return missed.size(); }
  std::size_t spurious_size() const { return spurious.size(); }
  std::size_t support_size() const {
    return known.size() + missed.size() - spurious.size();
  }
};

/// {i : x_i^2 > alpha}, sorted. alpha >= 0; the comparison is strict.
IndexSet estimate_support(const Vec& x, double alpha);

/// Smallest set of indices, taken in descending order of x_i^2 (ties broken
/// by lower index), whose energy reaches percent% of ||x||_2^2.
/// percent in (0, 100]; throws on an all-zero input.
IndexSet energy_support(const Vec& x, double percent);

/// (additions, removals) between a current and a previous support.
std::pair<std::size_t, std::size_t> support_change(const IndexSet& curr,
                                                   const IndexSet& prev);

/// Draw `missed_count` indices uniformly from the true support and
/// `spurious_count` uniformly from its complement; the prior set is then
/// support + spurious - missed.
SupportModel make_support_model(std::size_t n, const IndexSet& support,
                                std::size_t missed_count,
                                std::size_t spurious_count, Rng& rng);

}  // namespace modcs

#endif
