#include "wavetrans/csv.hpp"

#include <charconv>

namespace wavetrans {

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::string& provenance) : out_(path) {
  require(out_.good(), errc::config_invalid, "cannot open output file " + path);
  out_ << "# " << provenance << "\n";
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    out_ << names[i] << (i + 1 < names.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << values[i] << (i + 1 < values.size() ? "," : "\n");
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

}  // namespace wavetrans
