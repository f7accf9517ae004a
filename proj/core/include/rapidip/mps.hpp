#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rapidip/model.hpp"

namespace rapidip {

struct ParseWarning {
  std::size_t line = 0;
  std::string message;
};

struct ParseDiagnostics {
  std::string source;
  std::vector<ParseWarning> warnings;
};

struct ParsedModel {
  Instance instance;
  ParseDiagnostics diagnostics;
};

enum class MpsFormat { Free, Fixed };

/// Reads an MPS model. Integer columns declared between INTORG/INTEND markers
/// get the bounds [0, 1] unless a BOUNDS entry mentions them; in that case the
/// default upper bound becomes +inf, which is rejected for integers unless the
/// BOUNDS section also sets it. Errors are thrown as rapidip::Error with the
/// offending line number in the message.
ParsedModel parse_mps(std::string_view text, std::string source = "<input>",
                      MpsFormat format = MpsFormat::Free);

ParsedModel read_mps_file(const std::string& path, MpsFormat format = MpsFormat::Free);

/// Free-format MPS text that parse_mps reads back to an equivalent instance.
std::string to_mps(const Instance& instance);

/// Throws Error(Io) naming the path when the file cannot be written.
void write_mps(const Instance& instance, const std::string& path);

}  // namespace rapidip
