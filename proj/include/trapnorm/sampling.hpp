#ifndef TRAPNORM_SAMPLING_HPP
#define TRAPNORM_SAMPLING_HPP

#include <trapnorm/bigreal.hpp>

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <thread>
#include <vector>

namespace trapnorm {

/// Evaluates fn(0..count-1) with up to `workers` threads. Indices are split
/// into contiguous blocks; the caller always sees the samples in index order.
template <class Fn>
std::vector<Real> sample_indexed(std::size_t count, unsigned workers, const Fn& fn) {
  std::vector<Real> out(count);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::size_t block = (count + workers - 1) / workers;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t begin = w * block;
      std::size_t end = std::min(count, begin + block);
      pool.emplace_back([&, w, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Sequential sum in ascending index order.
inline Real ordered_sum(std::span<const Real> terms, Digits d) {
  Real acc(d);
  for (const Real& t : terms) acc += t;
  return acc;
}

}  // namespace trapnorm

#endif  // TRAPNORM_SAMPLING_HPP
