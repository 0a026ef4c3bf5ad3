#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace ppx {

namespace detail {
inline std::atomic<int>& thread_knob() {
  static std::atomic<int> threads{0};  // 0 = hardware concurrency
  return threads;
}
}  // namespace detail

inline void set_threads(int t) { detail::thread_knob().store(t < 0 ? 0 : t); }

inline int resolved_threads() {
  int t = detail::thread_knob().load();
  if (t == 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    t = hc == 0 ? 1 : static_cast<int>(hc);
  }
  return t;
}

// Runs fn(i) for i in [0, count). Each call writes only to its own result
// slot, and callers reduce over slots sequentially afterwards, so the output
// is byte-identical for every thread count.
template <class Fn>
void for_each_index(long long count, Fn&& fn) {
  const int threads = resolved_threads();
  if (threads <= 1 || count < 2) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  constexpr long long kChunk = 8;
  auto worker = [&] {
    for (;;) {
      const long long begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const long long end = begin + kChunk < count ? begin + kChunk : count;
      for (long long i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace ppx
