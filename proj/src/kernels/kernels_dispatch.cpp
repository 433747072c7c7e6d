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

#include "modcs/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace modcs::kernels {

namespace {

bool cpu_has(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend pick_default() {
  if (const char* env = std::getenv("MODCS_BACKEND")) {
    if (!std::strcmp(env, "scalar")) return Backend::scalar;
    if (!std::strcmp(env, "avx2") && cpu_has(Backend::avx2)) return Backend::avx2;
    if (!std::strcmp(env, "neon") && cpu_has(Backend::neon)) return Backend::neon;
  }
  if (cpu_has(Backend::avx2)) return Backend::avx2;
  if (cpu_has(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

std::atomic<Backend>& active_slot() {
  static std::atomic<Backend> slot{pick_default()};
  return slot;
}

const KernelTable* table_for(Backend b) {
  switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
      return &detail::avx2_table;
#endif
#if defined(__aarch64__)
    case Backend::neon:
      return &detail::neon_table;
#endif
    default:
      return &detail::scalar_table;
  }
}

}  // namespace

Backend active() { return active_slot().load(std::memory_order_relaxed); }

bool supported(Backend b) { return cpu_has(b); }

bool set_active(Backend b) {
  if (!cpu_has(b)) return false;
  active_slot().store(b, std::memory_order_relaxed);
  return true;
}

std::string name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "?";
}

namespace detail {
const KernelTable& current() { return *table_for(active()); }
}  // namespace detail

}  // namespace modcs::kernels
