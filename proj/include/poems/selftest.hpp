#pragma once

#include <string>
#include <vector>

namespace poems {

struct SelfCheck {
    std::string name;
    bool passed;
    std::string detail;
};

// Closed-form limit and identity checks across every module; needs no config.
std::vector<SelfCheck> run_selftest();

}  // namespace poems
