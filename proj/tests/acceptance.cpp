// Acceptance suite: runs every verification criterion at its full bound and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.
#include <cstdio>
#include <exception>

#include "dendro/verify.hpp"

int main() {
    using namespace dendro;
    VerifyOptions opts;
    opts.quick = false;
    opts.timings = true;

    int failed = 0;
    try {
        VerifyReport report = run_verification_battery(opts);
        for (const auto& c : report.checks) {
            bool ok = c.status == "pass";
            if (!ok) ++failed;
            std::printf("[%s] %-32s (%lld ms) %s\n", ok ? "PASS" : "FAIL", c.name.c_str(),
                        c.millis, c.counts.is_null() ? "" : c.counts.dump().c_str());
        }
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance suite threw: %s\n", e.what());
        return 1;
    }
    if (failed) {
        std::printf("%d criteria FAILED\n", failed);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
