// Copyright 2026 The qutrit-ccphase Authors
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

#include <algorithm>
#include <cstdint>
#include <exception>
#include <initializer_list>
#include <random>
#include <span>
#include <thread>
#include <vector>

namespace ccphase {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed derived from a master seed and a task coordinate, so results do
// not depend on execution order or worker count.
inline std::uint64_t stream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = splitmix64(master);
  for (auto c : coords) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
  return Rng(stream_seed(master, coords));
}

inline long sample_binomial(Rng& rng, long trials, double p) {
  p = std::clamp(p, 0.0, 1.0);
  std::binomial_distribution<long> dist(trials, p);
  return dist(rng);
}

// Multinomial counts via sequential conditional binomials.
inline std::vector<long> sample_multinomial(Rng& rng, long trials, std::span<const double> probs) {
  std::vector<long> counts(probs.size(), 0);
  double remaining_p = 0.0;
  for (double p : probs) remaining_p += std::max(0.0, p);
  long remaining = trials;
  for (std::size_t k = 0; k < probs.size() && remaining > 0; ++k) {
    const double p = std::max(0.0, probs[k]);
    if (k + 1 == probs.size() || remaining_p <= 0.0) {
      counts[k] = remaining;
      remaining = 0;
      break;
    }
    const long c = sample_binomial(rng, remaining, p / remaining_p);
    counts[k] = c;
    remaining -= c;
    remaining_p -= p;
  }
  return counts;
}

// Runs fn(i) for i in [0, count) on up to `workers` threads. Each index is
// processed exactly once; callers write results into per-index slots.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const std::size_t nthreads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(nthreads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < count; i += nthreads) fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ccphase
