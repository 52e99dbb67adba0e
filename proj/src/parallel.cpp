#include "telegraph/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace telegraph {

namespace {
std::atomic<int> g_max_threads{1};
}

int max_threads() { return g_max_threads.load(); }

void set_max_threads(int n) {
  if (n < 1) n = 1;
  g_max_threads.store(n);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t want = static_cast<std::size_t>(g_max_threads.load());
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t k = std::min({want, hw, n});
  if (k <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(k);
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t begin = n * t / k;
    const std::size_t end = n * (t + 1) / k;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace telegraph
