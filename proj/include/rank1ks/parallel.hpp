#pragma once

// Deterministic parallel helpers.
//
// Work is always split into a fixed number of chunks that depends only on the
// problem size, never on the thread count, and every chunk draws from its own
// seeded stream. Reductions are performed in chunk order, so results are
// bit-identical for any degree of parallelism.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace rank1ks {

/// Number of worker threads: hardware concurrency capped by RANK1KS_THREADS.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RANK1KS_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (...) {
      // ignore malformed values
    }
  }
  return n;
}

/// SplitMix64 finalizer; used to derive independent per-chunk seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(stream_seed(seed, stream));
}

/// Uniform double in [0, 1) from 53 random bits; platform independent.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1).
inline double uniform_open01(Rng& rng) {
  double u;
  do {
    u = uniform01(rng);
  } while (u == 0.0);
  return u;
}

/// Runs body(i) for i in [0, n) on the worker pool. body must only write to
/// slots owned by index i.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Maps chunk results in parallel, then returns them in chunk order.
template <class Result, class Body>
std::vector<Result> parallel_map(std::size_t n, Body&& body) {
  std::vector<Result> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = body(i); });
  return out;
}

/// Splits [0, total) into fixed-size chunks. The chunking depends only on
/// total and chunk_size.
struct ChunkPlan {
  std::uint64_t total;
  std::uint64_t chunk_size;

  std::size_t count() const {
    return static_cast<std::size_t>((total + chunk_size - 1) / chunk_size);
  }
  std::uint64_t begin(std::size_t c) const { return c * chunk_size; }
  std::uint64_t end(std::size_t c) const {
    return std::min<std::uint64_t>(total, (c + 1) * chunk_size);
  }
};

}  // namespace rank1ks
