#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "litiscope/pipeline.hpp"

namespace litiscope {

inline constexpr std::string_view kModelHeader = "#litiscope-model v1";

/// Header line, then one JSON document. Doubles are written in shortest round-trip form;
/// non-finite values are written as the strings "inf", "-inf" and "nan". Reading back yields a
/// pipeline equal to the one written.
void write_model(std::ostream& out, const TrainedPipeline& model);
TrainedPipeline read_model(std::istream& in);

void save_model(const std::string& path, const TrainedPipeline& model);
/// Throws DataError for a missing file, a wrong header or a malformed body.
TrainedPipeline load_model(const std::string& path);

} // namespace litiscope
