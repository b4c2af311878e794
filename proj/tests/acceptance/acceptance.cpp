// Acceptance runner: one line per criterion, exit status 0 only if every
// requested criterion passed.
//   qbm_acceptance            all criteria
//   qbm_acceptance 3 5        selected criteria

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "qbm/validation.hpp"

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty())
        for (int k = 1; k <= 8; ++k) which.push_back(k);
    bool all = true;
    for (int k : which) {
        const qbm::CheckResult r = qbm::run_criterion(k);
        const bool pass = r.status == qbm::CheckStatus::Pass;
        all = all && pass;
        std::printf("criterion %d: %s | %s | measured %.6g, tolerance %.3g | %.2f s | %s\n", k, pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.measured, r.tolerance, r.seconds, r.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
