#include "volkit/csvio.hpp"

#include <charconv>

#include "volkit/errors.hpp"

namespace volkit::csv {

bool Reader::next(Record& out) {
  out.fields.clear();
  out.line = line_;

  int c = in_.get();
  if (c == std::istream::traits_type::eof()) return false;

  std::string field;
  bool in_quotes = false;
  bool any_char = false;

  auto push_field = [&] {
    out.fields.push_back(std::move(field));
    field.clear();
  };

  while (true) {
    if (c == std::istream::traits_type::eof()) {
      if (in_quotes) {
        fail("csv-malformed-row",
             "unterminated quoted field starting near line " + std::to_string(out.line));
      }
      push_field();
      return true;
    }
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        const int peek = in_.peek();
        if (peek == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty() && !any_char) {
      in_quotes = true;
    } else if (ch == ',') {
      push_field();
      any_char = false;
      c = in_.get();
      continue;
    } else if (ch == '\n') {
      ++line_;
      push_field();
      return true;
    } else if (ch == '\r') {
      const int peek = in_.peek();
      if (peek == '\n') {
        in_.get();
        ++line_;
        push_field();
        return true;
      }
      field.push_back(ch);
    } else {
      field.push_back(ch);
    }
    any_char = true;
    c = in_.get();
  }
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       std::string_view name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) fail("io-error", "failed to format double");
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view s) noexcept {
  if (s.empty()) return std::nullopt;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view s) noexcept {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string escape_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace volkit::csv
