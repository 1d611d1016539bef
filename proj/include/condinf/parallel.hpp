#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace condinf {

//! Worker count from CONDINF_WORKERS, defaulting to 1.
int default_workers();

//! Runs body(i) for i in [0, count) on up to `workers` threads. Callers
//! write results into slot i and reduce afterwards in index order, which
//! keeps outputs independent of the worker count. The first exception
//! thrown by any task is rethrown after all threads join.
template<class Body>
void
parallel_for(std::size_t count, int workers, Body&& body)
{
  std::size_t threads =
    std::min<std::size_t>(count, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count)
        return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error)
          error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back(run);
  for (auto& th : pool)
    th.join();
  if (error)
    std::rethrow_exception(error);
}

} // namespace condinf
