#pragma once

#include <iosfwd>
#include <string_view>

namespace litiscope {

/// Line-oriented run log. Defaults to std::clog; nullptr silences it.
void set_log_stream(std::ostream* stream);
void log_line(std::string_view message);

} // namespace litiscope
