#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include "wfg/acceptance.hpp"

// Usage: wfg_acceptance [criterion ids...]
int main(int argc, char** argv) {
    wfg::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) opt.only.insert(std::atoi(argv[i]));
    const auto res = wfg::run_acceptance(std::cout, opt);
    for (const auto& r : res)
        if (!r.pass) return 1;
    return 0;
}
