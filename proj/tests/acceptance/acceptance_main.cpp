#include "tzl_cli/acceptance.hpp"

#include "tzl/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria 1-14: one pass/fail line each"};
    std::vector<int> ids;
    int threads = 0;
    app.add_option("--criterion", ids, "criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 14));
    app.add_option("--threads", threads, "worker threads (0: TZL_THREADS or all cores)");
    CLI11_PARSE(app, argc, argv);
    if (ids.empty())
        for (int i = 1; i <= 14; ++i) ids.push_back(i);
    const int t = tzl::resolve_threads(threads);
    bool all = true;
    for (int id : ids) {
        const auto r = tzl::cli::run_criterion(id, t);
        std::cout << tzl::cli::format_result(r) << std::endl;
        all = all && r.passed;
    }
    return all ? 0 : 1;
}
