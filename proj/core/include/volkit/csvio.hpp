#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace volkit::csv {

/// One parsed CSV record plus the 1-based line number where it started.
/// A record spans several physical lines when a quoted field embeds newlines.
struct Record {
  std::vector<std::string> fields;
  std::int64_t line = 0;
};

/// Streaming RFC-4180 reader.
///
/// Handles quoted fields, escaped quotes ("") and newlines inside quotes.
/// Accepts both \n and \r\n line endings. A trailing newline at end of
/// input does not produce an empty final record.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record. Returns false at end of input.
  /// Throws Error{"csv-malformed-row"} on an unterminated quoted field.
  bool next(Record& out);

  /// Line number the next record will start on.
  std::int64_t line() const { return line_; }

 private:
  std::istream& in_;
  std::int64_t line_ = 1;
};

/// Splits a header line and returns the index of `name`, or nullopt.
/// Comparison is exact (case-sensitive, no trimming of interior space).
std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::string_view name);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Strict full-string numeric parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<std::int64_t> parse_int(std::string_view s) noexcept;

/// Quotes a field per RFC 4180 when it contains a comma, quote or newline.
std::string escape_field(std::string_view s);

}  // namespace volkit::csv
