// Acceptance gate: every headline claim of the library checked against its
// independent route, one verdict line per claim. Exits nonzero if any line
// fails, so this binary is the single switch CI flips on.

#include <cstdio>
#include <vector>

#include "sconst/verify.hpp"

int main() {
    using namespace sconst::verify;
    const VerifyOptions opt;  // pinned seed and scope; tolerances live in the checks

    const std::vector<AcceptanceLine> gate = acceptance_gate(opt);
    int passed = 0;
    for (std::size_t i = 0; i < gate.size(); ++i) {
        const AcceptanceLine& line = gate[i];
        const bool ok = line.passed();
        if (ok) ++passed;
        std::printf("[%s] %zu. %s\n", ok ? "PASS" : "FAIL", i + 1,
                    line.label.c_str());
        for (const CheckReport& part : line.parts)
            std::printf("        %-24s dev %.3e  tol %.1e  %6.1fs  %s\n",
                        part.name.c_str(), part.max_dev, part.tol, part.seconds,
                        part.detail.c_str());
    }
    const int total = static_cast<int>(gate.size());
    std::printf("%s: %d/%d criteria passed\n",
                passed == total ? "ACCEPTED" : "REJECTED", passed, total);
    return passed == total ? 0 : 1;
}
