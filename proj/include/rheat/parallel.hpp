#pragma once

#include <future>
#include <thread>
#include <vector>

namespace rheat {

/// Run fn(i) for i in [0, count) on up to hardware_concurrency threads.
/// Tasks must be independent; results are written by index, so the outcome
/// does not depend on the thread count.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (count <= 1 || hw <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futs;
  futs.reserve(count);
  for (int i = 0; i < count; ++i)
    futs.push_back(std::async(std::launch::async, [i, &fn] { fn(i); }));
  for (auto& f : futs) f.get();
}

}  // namespace rheat
