#pragma once

#include <functional>
#include <string>

namespace poems {

// Non-fatal model-validity warnings. The default handler writes to stderr.
using WarningHandler = std::function<void(const std::string&)>;

void warn(const std::string& message);

// Returns the previous handler. Passing an empty function restores the default.
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace poems
