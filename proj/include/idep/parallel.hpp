#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <numeric>
#include <thread>
#include <vector>

namespace idep
{

/// Splits [0, n) into at most `threads` contiguous blocks and runs
/// `body(begin, end)` on each, one std::thread per block beyond the first.
/// The first exception thrown by any block is rethrown after all join.
/// threads == 0 uses the hardware concurrency.
inline void parallel_blocks(std::size_t n, unsigned threads,
                            const std::function<void(std::size_t, std::size_t)> &body)
{
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1)
    {
      body(0, n);
      return;
    }
  std::vector<std::thread>           pool;
  std::vector<std::exception_ptr>    errors(workers);
  const std::size_t                  chunk = (n + workers - 1) / workers;
  auto guarded = [&](std::size_t w, std::size_t b, std::size_t e) {
    try
      {
        body(b, e);
      }
    catch (...)
      {
        errors[w] = std::current_exception();
      }
  };
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w)
    {
      const std::size_t b = w * chunk, e = std::min(n, b + chunk);
      if (b < e)
        pool.emplace_back(guarded, w, b, e);
    }
  guarded(0, 0, std::min(n, chunk));
  for (auto &t : pool)
    t.join();
  for (const auto &err : errors)
    if (err)
      std::rethrow_exception(err);
}

/// Sum of `term(p)` over p in [0, n). Partial sums are kept per index and
/// added in index order, so the result does not depend on `threads`.
inline double parallel_sum(std::size_t n, unsigned threads,
                           const std::function<double(std::size_t)> &term)
{
  std::vector<double> partial(n, 0.0);
  parallel_blocks(n, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p)
      partial[p] = term(p);
  });
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

} // namespace idep
