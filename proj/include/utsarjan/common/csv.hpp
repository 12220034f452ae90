#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace utsarjan::csv {

using Row = std::vector<std::string>;

struct Document {
  Row header;
  std::vector<Row> rows;

  friend bool operator==(const Document&, const Document&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("csv line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// RFC 4180 field: quoted when it contains a comma, quote, CR or LF.
std::string escape_field(std::string_view field);

/// Rows are terminated with CRLF, including the last one.
std::string write(const Document& doc);

/// Accepts CRLF or LF record separators. A leading UTF-8 BOM is skipped.
/// Every row must have as many fields as the header.
Document parse(std::string_view text);

/// Index of `name` in the header, or throws ParseError.
std::size_t column(const Document& doc, std::string_view name);

/// Throws ParseError unless the header equals `expected` exactly.
void require_header(const Document& doc, const Row& expected);

Document read_file(const std::string& path);

}  // namespace utsarjan::csv
