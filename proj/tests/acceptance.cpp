#include "suites.hpp"

#include <cstdio>
#include <exception>

int main(int argc, char** argv) {
    using namespace vir::suites;
    std::vector<int> ids;
    try {
        ids = select_suites(argc > 1 ? argv[1] : "all");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }
    bool ok = true;
    double total = 0;
    for (int id : ids) {
        SuiteResult r = run_suite(id);
        total += r.seconds;
        ok = ok && r.pass;
        std::printf("%s %2d %-15s %8.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%s total %.2fs\n", ok ? "PASS" : "FAIL", total);
    return ok ? 0 : 1;
}
