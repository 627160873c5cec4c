// Acceptance battery: one line per criterion, nonzero exit on any failure.
// Pass "fast" for the trimmed Monte Carlo sizes.

#include <cstdio>
#include <cstring>
#include <string>

#include "dhl/verify.hpp"

int main(int argc, char** argv) {
    auto level = dhl::verify::Level::full;
    unsigned workers = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "fast") == 0) level = dhl::verify::Level::fast;
        if (std::strncmp(argv[i], "--workers=", 10) == 0) workers = unsigned(std::atoi(argv[i] + 10));
    }
    auto results = dhl::verify::run_acceptance(level, workers);
    int fails = 0;
    for (const auto& r : results) {
        std::puts(dhl::verify::format_result(r).c_str());
        if (!r.pass) ++fails;
    }
    if (fails) std::printf("%d of %zu criteria failed\n", fails, results.size());
    return fails == 0 ? 0 : 1;
}
