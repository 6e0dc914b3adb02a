#include "litiscope/log.hpp"

#include <iostream>

namespace litiscope {

namespace {
std::ostream* g_log = &std::clog;
}

void set_log_stream(std::ostream* stream) { g_log = stream; }

void log_line(std::string_view message) {
    if (g_log) *g_log << "[litiscope] " << message << '\n' << std::flush;
}

} // namespace litiscope
