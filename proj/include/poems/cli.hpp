#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace poems {

enum class SweepVariable { bandwidth, loss, channel_noise, signal_power, frequency };

struct SweepSpec {
    SweepVariable variable;
    double start;
    double stop;
    std::size_t n_points;
    bool log_spacing = false;

    void validate() const;
    std::vector<double> grid() const;
};

SweepVariable parse_sweep_variable(const std::string& name);

// Entry point of the `poems` command. Returns the process exit status:
// 0 success, 2 usage, 3 config, 4 numeric, 5 I/O.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poems
