#include "frobkit/par.hpp"

#include <atomic>

namespace par {

namespace {
std::atomic<int> g_workers{0};
}

int default_workers()
{
    int w = g_workers.load();
    if (w > 0) return w;
    unsigned h = std::thread::hardware_concurrency();
    return h ? int(h) : 1;
}

void set_default_workers(int w) { g_workers.store(w); }

}  // namespace par
