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

#include "modcs/supports.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "modcs/errors.hpp"

namespace modcs {

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

bool set_contains(const IndexSet& a, std::size_t v) {
  return std::binary_search(a.begin(), a.end(), v);
}

IndexSet complement(const IndexSet& a, std::size_t n) {
  IndexSet out;
  out.reserve(n - a.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (k < a.size() && a[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

namespace {

void require_sorted_in_range(const IndexSet& s, std::size_t n, const char* name) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= n) throw parameter_error(std::string(name) + ": index out of range");
    if (i > 0 && s[i] <= s[i - 1])
      throw parameter_error(std::string(name) + ": indices must be sorted and unique");
  }
}

}  // namespace

SupportModel::SupportModel(std::size_t n_, IndexSet known_, IndexSet missed_,
                           IndexSet spurious_)
    : n(n_), known(std::move(known_)), missed(std::move(missed_)),
      spurious(std::move(spurious_)) {
  require_sorted_in_range(known, n, "known");
  require_sorted_in_range(missed, n, "missed");
  require_sorted_in_range(spurious, n, "spurious");
  if (!set_intersection(missed, known).empty())
    throw parameter_error("SupportModel: missed set must be disjoint from known");
  if (set_difference(spurious, known) != IndexSet{})
    throw parameter_error("SupportModel: spurious set must be a subset of known");
}

IndexSet SupportModel::true_support() const {
  return set_difference(set_union(known, missed), spurious);
}

IndexSet estimate_support(const Vec& x, double alpha) {
  if (alpha < 0) throw parameter_error("estimate_support: alpha must be >= 0");
  IndexSet out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] * x[i] > alpha) out.push_back(i);
  return out;
}

IndexSet energy_support(const Vec& x, double percent) {
  if (percent <= 0.0 || percent > 100.0)
    throw parameter_error("energy_support: percent must be in (0, 100]");
  double total = 0.0;
  for (double v : x) total += v * v;
  if (total == 0.0)
    throw parameter_error("energy_support: zero signal has no energy support");

  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return x[i] * x[i] > x[j] * x[j];
  });
  const double target = (percent / 100.0) * total;
  IndexSet out;
  double cum = 0.0;
  for (std::size_t idx : order) {
    out.push_back(idx);
    cum += x[idx] * x[idx];
    if (cum >= target) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<std::size_t, std::size_t> support_change(const IndexSet& curr,
                                                   const IndexSet& prev) {
  return {set_difference(curr, prev).size(), set_difference(prev, curr).size()};
}

SupportModel make_support_model(std::size_t n, const IndexSet& support,
                                std::size_t missed_count,
                                std::size_t spurious_count, Rng& rng) {
  require_sorted_in_range(support, n, "support");
  if (missed_count > support.size())
    throw parameter_error("make_support_model: missed_count exceeds support size");
  if (spurious_count > n - support.size())
    throw parameter_error(
        "make_support_model: spurious_count exceeds complement size");
  IndexSet missed = rng.sample_without_replacement(support, missed_count);
  IndexSet spurious =
      rng.sample_without_replacement(complement(support, n), spurious_count);
  IndexSet known = set_difference(set_union(support, spurious), missed);
  return SupportModel(n, std::move(known), std::move(missed), std::move(spurious));
}

}  // namespace modcs
