#pragma once

// Segmented sieve of Eratosthenes over odd numbers. The base primes below
// 2^20 (enough for any range up to 2^40) are computed once per process.

#include <cmath>
#include <cstdint>
#include <iterator>
#include <mutex>
#include <string>
#include <vector>

#include "pslab/errors.hpp"
#include "pslab/parallel.hpp"

namespace pslab {

inline constexpr std::uint64_t sieve_limit = 1ull << 40;
inline constexpr std::uint64_t default_segment_size = 1ull << 20;

inline const std::vector<std::uint32_t>& base_primes() {
  static std::vector<std::uint32_t> primes;
  static std::once_flag once;
  std::call_once(once, [] {
    constexpr std::uint32_t n = 1u << 20;
    std::vector<bool> composite(n, false);
    for (std::uint32_t i = 2; i < n; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j < n; j += i) composite[j] = true;
    }
  });
  return primes;
}

namespace detail {

inline void check_sieve_range(std::uint64_t lo, std::uint64_t hi) {
  if (hi > sieve_limit)
    throw range_too_large("prime range upper end " + std::to_string(hi) + " exceeds 2^40");
  if (lo > hi) throw parameter_range("prime range has lo > hi");
}

}  // namespace detail

/// Appends the primes in [lo, hi) to `out`; the range should not be much
/// longer than a segment since the flag buffer covers all of it.
inline void sieve_segment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t>& out) {
  detail::check_sieve_range(lo, hi);
  if (lo < 2) lo = 2;
  if (lo >= hi) return;
  if (lo == 2) {
    out.push_back(2);
    lo = 3;
    if (lo >= hi) return;
  }
  // odd candidates lo' + 2i
  const std::uint64_t first = lo | 1;
  if (first >= hi) return;
  const std::uint64_t count = (hi - first + 1) / 2;
  std::vector<std::uint8_t> composite(count, 0);
  for (std::uint32_t p : base_primes()) {
    if (p == 2) continue;
    const std::uint64_t pp = std::uint64_t{p} * p;
    if (pp >= hi) break;
    std::uint64_t start = pp >= first ? pp : ((first + p - 1) / p) * p;
    if ((start & 1) == 0) start += p;
    for (std::uint64_t j = (start - first) / 2; j < count; j += p) composite[j] = 1;
  }
  for (std::uint64_t i = 0; i < count; ++i)
    if (!composite[i]) out.push_back(first + 2 * i);
}

/// Lazily enumerated primes in [lo, hi), one segment in memory at a time.
class prime_range {
 public:
  prime_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment = default_segment_size)
      : next_lo_(lo < 2 ? 2 : lo), hi_(hi), segment_(segment == 0 ? default_segment_size : segment) {
    detail::check_sieve_range(lo, hi);
  }

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = std::uint64_t;
    using difference_type = std::ptrdiff_t;
    using pointer = const std::uint64_t*;
    using reference = const std::uint64_t&;

    iterator() = default;
    explicit iterator(prime_range* owner) : owner_(owner) { owner_->refill(); }

    reference operator*() const { return owner_->buffer_[owner_->pos_]; }
    iterator& operator++() {
      if (++owner_->pos_ >= owner_->buffer_.size()) owner_->refill();
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) {
      return it.owner_ == nullptr || it.owner_->exhausted();
    }

   private:
    prime_range* owner_ = nullptr;
  };

  iterator begin() { return iterator(this); }
  std::default_sentinel_t end() const { return {}; }
  bool exhausted() const { return pos_ >= buffer_.size(); }

 private:

  void refill() {
    buffer_.clear();
    pos_ = 0;
    while (buffer_.empty() && next_lo_ < hi_) {
      const std::uint64_t seg_hi = hi_ - next_lo_ > segment_ ? next_lo_ + segment_ : hi_;
      sieve_segment(next_lo_, seg_hi, buffer_);
      next_lo_ = seg_hi;
    }
  }

  std::uint64_t next_lo_;
  std::uint64_t hi_;
  std::uint64_t segment_;
  std::vector<std::uint64_t> buffer_;
  std::size_t pos_ = 0;
};

inline prime_range primes_in_range(std::uint64_t lo, std::uint64_t hi) { return prime_range(lo, hi); }

/// Splits [lo, hi) into segment-sized pieces, sieves them on `threads`
/// workers and returns fn(segment_lo, segment_hi, primes) per segment, in
/// segment order.
template <class Fn>
auto map_prime_segments(std::uint64_t lo, std::uint64_t hi, unsigned threads, Fn&& fn,
                        std::uint64_t segment = default_segment_size) {
  detail::check_sieve_range(lo, hi);
  const std::uint64_t span = hi > lo ? hi - lo : 0;
  const std::size_t chunks = static_cast<std::size_t>((span + segment - 1) / segment);
  return ordered_parallel_map(chunks, threads, [&](std::size_t i) {
    const std::uint64_t s_lo = lo + i * segment;
    const std::uint64_t s_hi = std::min(hi, s_lo + segment);
    std::vector<std::uint64_t> primes;
    sieve_segment(s_lo, s_hi, primes);
    return fn(s_lo, s_hi, primes);
  });
}

inline std::uint64_t count_primes(std::uint64_t lo, std::uint64_t hi, unsigned threads = 0) {
  const auto parts = map_prime_segments(lo, hi, threads, [](std::uint64_t, std::uint64_t,
                                                            const std::vector<std::uint64_t>& p) {
    return static_cast<std::uint64_t>(p.size());
  });
  std::uint64_t total = 0;
  for (auto c : parts) total += c;
  return total;
}

}  // namespace pslab
