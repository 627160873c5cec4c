#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "dhl/stats.hpp"

namespace dhl {

// Sharded Monte Carlo reduction. The shard count is fixed up front and
// per-sample work is keyed by the global sample index, so the merged
// result is bit-identical for any worker count; shards are merged in
// index order.
inline RunningStat sharded_stat(
    std::uint64_t samples, unsigned workers,
    const std::function<void(std::uint64_t begin, std::uint64_t end, RunningStat&)>& body,
    unsigned shards = 128) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    if (shards == 0) shards = 1;
    if (samples < shards) shards = unsigned(samples ? samples : 1);

    std::vector<RunningStat> parts(shards);
    std::atomic<unsigned> next{0};
    auto run = [&]() {
        for (;;) {
            unsigned sh = next.fetch_add(1);
            if (sh >= shards) return;
            std::uint64_t begin = samples * sh / shards;
            std::uint64_t end = samples * (sh + 1) / shards;
            body(begin, end, parts[sh]);
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    RunningStat total;
    for (const RunningStat& p : parts) total.merge(p);
    return total;
}

}  // namespace dhl
