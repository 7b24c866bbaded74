#pragma once

// Work is split into a fixed number of chunks that does not depend on the
// thread count; per-chunk results are combined in chunk order, so output is
// identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ffdioph/errors.hpp"

namespace ffdioph {

/// Explicit request, else FFDIOPH_THREADS, else 1.
inline unsigned resolve_threads(std::optional<unsigned> requested) {
  if (requested) return std::max(1u, *requested);
  if (const char* env = std::getenv("FFDIOPH_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw DomainError(std::string("FFDIOPH_THREADS must be a positive integer, got \"") + env + "\"");
  }
  return 1;
}

struct ChunkRange {
  std::uint64_t begin = 0, end = 0;
  std::size_t index = 0;
};

inline std::vector<ChunkRange> make_chunks(std::uint64_t total, std::size_t max_chunks = 256) {
  std::vector<ChunkRange> out;
  if (total == 0) return out;
  const std::uint64_t n = std::min<std::uint64_t>(total, max_chunks);
  for (std::uint64_t c = 0; c < n; ++c)
    out.push_back({total * c / n, total * (c + 1) / n, static_cast<std::size_t>(c)});
  return out;
}

/// Runs fn(chunk) for every chunk of [0, total) on `threads` workers and
/// returns the results in chunk order.
template <class Result, class Fn>
std::vector<Result> map_chunks(std::uint64_t total, unsigned threads, Fn fn, std::size_t max_chunks = 256) {
  const auto chunks = make_chunks(total, max_chunks);
  std::vector<Result> results(chunks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks.size()) return;
      try {
        results[c] = fn(chunks[c]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// splitmix64 finalizer; stream i of seed s is mix(s, i).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based generator: the j-th draw of sample i depends only on (seed, i, j).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(splitmix64(seed ^ splitmix64(stream))) {}
  std::uint64_t next() { return splitmix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }
  std::uint32_t below(std::uint32_t bound) { return static_cast<std::uint32_t>(next() % bound); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ffdioph
