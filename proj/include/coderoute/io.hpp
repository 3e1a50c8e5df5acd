#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "coderoute/protocol.hpp"
#include "coderoute/span_program.hpp"

namespace coderoute {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// {"p", "num_inputs", "target", "rows": [{"coeffs", "input", "epsilon"}]}
std::string span_program_to_json(const SpanProgram& sp);
SpanProgram span_program_from_json(std::string_view text);

/// Span-program object with an extra "decomposition" key carrying the
/// sizes and the map g.
std::string decomposition_to_json(const DecompositionResult& result);

struct LoadedProgram {
  SpanProgram program;
  std::optional<DecompositionResult> decomposition;  // present if the file carried one
};
LoadedProgram load_program_file(std::string_view text);

std::string tape_to_json(const ProtocolTape& tape);
ProtocolTape tape_from_json(std::string_view text);

}  // namespace coderoute
