#pragma once

// Ordered parallel map: chunks are claimed dynamically by workers, but the
// results come back indexed by chunk, so any reduction done afterwards in
// index order is independent of the thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace pslab {

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class Fn>
auto ordered_parallel_map(std::size_t chunks, unsigned threads, Fn&& fn) {
  using result_t = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<std::optional<result_t>> slots(chunks);
  std::vector<std::exception_ptr> failures(chunks);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), chunks));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < chunks; i = next.fetch_add(1)) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  // The lowest failing chunk wins so the reported error is deterministic too.
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  std::vector<result_t> out;
  out.reserve(chunks);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace pslab
