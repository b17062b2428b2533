#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace cwl {

// Split [begin, end) into at most `threads` contiguous blocks and evaluate
// fn(lo, hi) for each, one thread per block. Results come back in block
// order, so a fold over them is independent of the thread count whenever
// the merge is associative and exact.
template <class Fn>
auto run_blocks(std::uint64_t begin, std::uint64_t end, unsigned threads, Fn&& fn)
    -> std::vector<decltype(fn(begin, end))> {
  using Partial = decltype(fn(begin, end));
  const std::uint64_t n = end > begin ? end - begin : 0;
  const std::uint64_t blocks = std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, n));
  std::vector<Partial> out(blocks);
  if (blocks == 1) {
    out[0] = fn(begin, end);
    return out;
  }
  std::vector<std::exception_ptr> errors(blocks);
  std::vector<std::thread> pool;
  pool.reserve(blocks);
  for (std::uint64_t i = 0; i < blocks; ++i) {
    const std::uint64_t lo = begin + n * i / blocks;
    const std::uint64_t hi = begin + n * (i + 1) / blocks;
    pool.emplace_back([&, i, lo, hi] {
      try {
        out[i] = fn(lo, hi);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace cwl
