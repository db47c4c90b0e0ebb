#pragma once
// Range splitting across std::thread workers; each worker owns its partial result.

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace par {

int default_workers();
void set_default_workers(int w);

// fn(begin, end, worker_index) over [0, n)
template <class Fn>
void for_chunks(size_t n, int workers, Fn&& fn)
{
    if (workers <= 0) workers = default_workers();
    workers = int(std::min<size_t>(size_t(workers), std::max<size_t>(n, 1)));
    if (workers <= 1) { fn(size_t(0), n, 0); return; }
    std::vector<std::thread> th;
    size_t step = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        size_t b = std::min(n, w * step), e = std::min(n, b + step);
        th.emplace_back([&, b, e, w] { fn(b, e, w); });
    }
    for (auto& t : th) t.join();
}

}  // namespace par
