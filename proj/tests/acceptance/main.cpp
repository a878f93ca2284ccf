#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>

#include "criteria.hpp"

namespace acceptance {

const std::vector<Criterion>& all_criteria() {
    static const std::vector<Criterion> list{
        {1, "formula unit suite", 1.0, formula_suite},
        {2, "marginal validity", 30.0, marginal_validity},
        {3, "BCP degeneration", 5.0, bcp_degeneration},
        {4, "conditional convergence", 10.0, conditional_convergence},
        {5, "K* oracle", 1.0, optimal_k_oracle},
        {6, "progressive anomaly recognition", 10.0, progressive_recognition},
        {7, "synthetic U-curve", 60.0, synthetic_u_curve},
        {8, "return-series directionality", 180.0, table_directionality},
        {9, "determinism", 0.0, determinism},
    };
    return list;
}

}  // namespace acceptance

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : acceptance::all_criteria()) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        acceptance::Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = out.pass;
        // the determinism check bounds its own runtime against the plan
        if (c.time_limit_s > 0.0 && secs >= c.time_limit_s) {
            pass = false;
            out.detail += "; over the time limit";
        }
        std::printf("criterion %d %s: %s (%s; %.2f s)\n", c.id, c.title, pass ? "PASS" : "FAIL", out.detail.c_str(),
                    secs);
        std::fflush(stdout);
        failed += !pass;
    }
    return failed == 0 ? 0 : 1;
}
