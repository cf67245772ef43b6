// Copyright 2026 The tesh authors
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

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tesh {

/// Raised when an internal numerical consistency check fails (as opposed to
/// a caller passing invalid arguments, which raises std::invalid_argument).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Exact binomial coefficient in 64-bit integer arithmetic.
/// Safe for every (n, k) arising here (n <= 20 by construction).
inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

/// Calls `fn` once for each size-k subset of {0,...,n-1}, passing the subset
/// as a strictly increasing index list. Subsets are visited in lexicographic
/// order of that list, which fixes the reduction order everywhere subsets
/// are aggregated.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) throw std::invalid_argument("for_each_subset: bad subset size");
  std::vector<int> subset(k);
  for (int i = 0; i < k; ++i) subset[i] = i;
  while (true) {
    fn(const_cast<const std::vector<int>&>(subset));
    int i = k - 1;
    while (i >= 0 && subset[i] == n - k + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
}

/// SplitMix64 mix step; used to derive independent per-task seeds from a
/// master seed without correlations between consecutive indices.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Reads the thread-count override from the environment (TESH_THREADS).
/// Returns `fallback` when unset or unparsable.
inline int thread_count(int fallback = 1) {
  const char* env = std::getenv("TESH_THREADS");
  if (!env) return fallback;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || v < 1 || v > 256) return fallback;
  return static_cast<int>(v);
}

}  // namespace tesh
