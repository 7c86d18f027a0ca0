#ifndef WAVEFRONT_SWEEP_HPP
#define WAVEFRONT_SWEEP_HPP

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "wavefront/common.hpp"

// Bounded worker pool for parameter sweeps. Cells are pulled from a shared
// counter, results land in index-ordered slots, and a single writer emits
// them after the join — output bytes do not depend on scheduling. A failed
// cell is recorded, never aborts the sweep.

namespace wavefront {

inline unsigned worker_count() {
    if (const char* env = std::getenv("WAVEFRONT_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min(hw, 8u);
}

template <class Result>
struct SweepCell {
    bool ok = false;
    std::string error;
    Result result{};
};

/// Runs fn(i) for i in [0, n) on `workers` threads; exceptions become failed
/// cells. Results are returned in index order.
template <class Result>
std::vector<SweepCell<Result>> run_cells(std::size_t n, const std::function<Result(std::size_t)>& fn,
                                         unsigned workers = worker_count()) {
    std::vector<SweepCell<Result>> cells(n);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                cells[i].result = fn(i);
                cells[i].ok = true;
            } catch (const std::exception& e) {
                cells[i].ok = false;
                cells[i].error = e.what();
            }
        }
    };
    if (workers <= 1 || n <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        const unsigned nw = std::min<unsigned>(workers, static_cast<unsigned>(n));
        pool.reserve(nw);
        for (unsigned t = 0; t < nw; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return cells;
}

}  // namespace wavefront

#endif
