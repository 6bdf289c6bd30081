#include <cstdio>

#include "polyelast/checks.hpp"

int main() {
    int failed = 0;
    for (const auto& r : polyelast::run_acceptance_suite()) {
        std::printf("%s\n", polyelast::format_check_line(r).c_str());
        if (!r.pass) ++failed;
    }
    std::printf("%d of 10 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
