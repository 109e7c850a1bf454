#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "linflow/linalg.hpp"

namespace linflow {

/// Malformed matrix input, with a 1-based position.
class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  /// Message without the position prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_, column_;
  std::string detail_;
};

/// Parses one scalar token: "2", "-1.5e3", "i", "-i", "2i", "1+2i", "1-0.5i".
/// Returns nullopt for anything else.
std::optional<Scalar> parse_scalar(std::string_view token);

/// Plain text: one row per line, whitespace-separated entries, '#' starts
/// a comment. Bracket form on one line is also accepted: "[1 2; 3 4]",
/// "[[1,2],[3,4]]", "[i]". The field is complex when `field` says so or any
/// entry has an imaginary part.
Mat parse_matrix_text(std::string_view text, std::optional<Field> field = std::nullopt);

/// {"field": "real"|"complex", "rows": [[...], ...]}; complex entries are
/// [re, im] pairs. A bare array of rows is accepted too.
Mat parse_matrix_json(std::string_view text, std::optional<Field> field = std::nullopt);

/// JSON when the first non-blank character is '{', text otherwise.
Mat parse_matrix(std::string_view text, std::optional<Field> field = std::nullopt);

/// Reads `source` as a file when it exists, else parses it as an inline
/// matrix.
Mat load_matrix(const std::string& source, std::optional<Field> field = std::nullopt);

/// Canonical text form (shortest round-tripping decimals); parse ∘ emit is
/// the identity.
std::string format_scalar(Scalar z, Field field);
std::string emit_matrix_text(const Mat& a);
nlohmann::json matrix_to_json(const Mat& a);

}  // namespace linflow
