#include "fts/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace fts {

namespace {

std::atomic<std::size_t> override_threads{ 0 };
thread_local bool inside_parallel = false;

std::size_t env_threads()
{
  const char* env = std::getenv("FTS_THREADS");
  if (env == nullptr || *env == '\0')
    return 0;
  try {
    const long value = std::stol(env);
    return value > 0 ? static_cast<std::size_t>(value) : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

} // namespace

std::size_t max_threads()
{
  std::size_t threads = override_threads.load();
  if (threads == 0)
    threads = env_threads();
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}

void set_max_threads(std::size_t threads)
{
  override_threads.store(threads);
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body,
                  std::size_t min_parallel)
{
  const std::size_t threads =
    inside_parallel ? 1 : std::min(max_threads(), count);
  if (threads <= 1 || count < min_parallel) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }

  std::vector<std::exception_ptr> failures(threads);
  auto run_chunk = [&](std::size_t chunk) {
    inside_parallel = true;
    const std::size_t begin = chunk * count / threads;
    const std::size_t end = (chunk + 1) * count / threads;
    try {
      for (std::size_t i = begin; i < end; ++i)
        body(i);
    } catch (...) {
      failures[chunk] = std::current_exception();
    }
    inside_parallel = false;
  };

  {
    std::vector<std::jthread> workers;
    workers.reserve(threads - 1);
    for (std::size_t chunk = 1; chunk < threads; ++chunk)
      workers.emplace_back(run_chunk, chunk);
    run_chunk(0);
  }

  for (const auto& failure : failures)
    if (failure)
      std::rethrow_exception(failure);
}

} // namespace fts
