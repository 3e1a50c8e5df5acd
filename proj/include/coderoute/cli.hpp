#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace coderoute {

/// Runs one CLI invocation (arguments without the program name). Exit
/// codes: 0 success, 1 usage or I/O error, 2 validation error, 3
/// capability error.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

struct BenchRow {
  std::string name;
  std::string formula;
  std::size_t left_bits;
  std::size_t formula_size;
  std::size_t span_size;
  std::size_t msp_size;
  long long e_general;  // worst case over all inputs
  long long e_formula;
  std::optional<long long> e_garden_hose;
};

std::vector<BenchRow> bench_library();

}  // namespace coderoute
