#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "wavetrans/types.hpp"

namespace wavetrans {

/// Shortest round-trip decimal form; deterministic across runs.
std::string format_double(double value);

/// CSV emitter with a provenance comment line (tool version, config hash, seed).
class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::string& provenance);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& values);

private:
  std::ofstream out_;
};

std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace wavetrans
