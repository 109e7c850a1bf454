#include "linflow/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace linflow {

namespace {

std::string located(const std::string& what, std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
}

std::optional<double> parse_real(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : InvalidArgument(located(what, line, column)), line_(line), column_(column), detail_(what) {}

std::optional<Scalar> parse_scalar(std::string_view t) {
  if (t.empty()) return std::nullopt;
  const char last = t.back();
  if (last != 'i' && last != 'j') {
    auto r = parse_real(t);
    if (!r) return std::nullopt;
    return Scalar(*r, 0.0);
  }
  t.remove_suffix(1);
  // split at the last sign that is not leading and not an exponent sign
  std::size_t split = std::string_view::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  std::string_view re_part = split == std::string_view::npos ? std::string_view{} : t.substr(0, split);
  std::string_view im_part = split == std::string_view::npos ? t : t.substr(split);
  double im = 0.0;
  if (im_part.empty() || im_part == "+") {
    im = 1.0;
  } else if (im_part == "-") {
    im = -1.0;
  } else {
    auto v = parse_real(im_part);
    if (!v) return std::nullopt;
    im = *v;
  }
  double re = 0.0;
  if (!re_part.empty()) {
    auto v = parse_real(re_part);
    if (!v) return std::nullopt;
    re = *v;
  }
  return Scalar(re, im);
}

namespace {

struct Token {
  std::string text;
  std::size_t line, column;
};

Mat assemble(const std::vector<std::vector<Token>>& rows, std::optional<Field> field) {
  if (rows.empty()) throw ParseError("no matrix entries found", 1, 1);
  std::vector<std::vector<Scalar>> values;
  bool complex = field == Field::complex;
  for (const auto& row : rows) {
    if (row.size() != rows.front().size()) {
      std::ostringstream os;
      os << "row has " << row.size() << " entries, expected " << rows.front().size();
      throw ParseError(os.str(), row.front().line, row.front().column);
    }
    std::vector<Scalar> vr;
    for (const auto& tok : row) {
      auto v = parse_scalar(tok.text);
      if (!v) throw ParseError("cannot parse entry '" + tok.text + "'", tok.line, tok.column);
      if (!std::isfinite(v->real()) || !std::isfinite(v->imag()))
        throw ParseError("entry '" + tok.text + "' is not finite", tok.line, tok.column);
      if (v->imag() != 0.0) {
        if (field == Field::real)
          throw ParseError("complex entry '" + tok.text + "' in a real matrix", tok.line, tok.column);
        complex = true;
      }
      vr.push_back(*v);
    }
    values.push_back(std::move(vr));
  }
  return Mat::from_rows(values, complex ? Field::complex : Field::real);
}

// "[1 2; 3 4]", "[[1,2],[3,4]]", "[i]" on a single logical line.
Mat parse_bracketed(std::string_view text, std::size_t line0, std::optional<Field> field) {
  std::vector<std::vector<Token>> rows;
  std::vector<Token> row;
  std::string cur;
  std::size_t cur_col = 0, depth = 0, line = line0, col = 0;
  bool nested = false;
  auto flush_token = [&] {
    if (!cur.empty()) row.push_back({cur, line, cur_col});
    cur.clear();
  };
  auto flush_row = [&] {
    flush_token();
    if (!row.empty()) rows.push_back(row);
    row.clear();
  };
  for (char c : text) {
    ++col;
    if (c == '\n') {
      ++line;
      col = 0;
    }
    if (c == '[') {
      flush_token();
      ++depth;
      if (depth == 2) nested = true;
      if (depth > 2) throw ParseError("brackets nested too deeply", line, col);
    } else if (c == ']') {
      if (depth == 0) throw ParseError("unbalanced ']'", line, col);
      --depth;
      if (depth == 1 && nested) flush_row();
      if (depth == 0) flush_row();
    } else if (c == ';') {
      if (nested) throw ParseError("';' inside nested brackets", line, col);
      flush_row();
    } else if (c == ',' || blank(c)) {
      flush_token();
    } else {
      if (depth == 0) throw ParseError("text outside brackets", line, col);
      if (cur.empty()) cur_col = col;
      cur.push_back(c);
    }
  }
  if (depth != 0) throw ParseError("unbalanced '['", line, col);
  return assemble(rows, field);
}

}  // namespace

Mat parse_matrix_text(std::string_view text, std::optional<Field> field) {
  std::size_t first = 0;
  std::size_t line = 1;
  while (first < text.size() && blank(text[first])) {
    if (text[first] == '\n') ++line;
    ++first;
  }
  if (first < text.size() && text[first] == '[') return parse_bracketed(text.substr(first), line, field);
  std::vector<std::vector<Token>> rows;
  std::istringstream in{std::string(text)};
  std::string raw;
  line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::vector<Token> row;
    std::size_t k = 0;
    while (k < raw.size()) {
      while (k < raw.size() && blank(raw[k])) ++k;
      if (k >= raw.size()) break;
      const std::size_t start = k;
      while (k < raw.size() && !blank(raw[k])) ++k;
      row.push_back({raw.substr(start, k - start), line, start + 1});
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return assemble(rows, field);
}

namespace {

// nlohmann reports byte offsets; convert to line/column.
std::pair<std::size_t, std::size_t> position(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Mat parse_matrix_json(std::string_view text, std::optional<Field> field) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [l, c] = position(text, e.byte);
    throw ParseError("invalid JSON", l, c);
  }
  const nlohmann::json* rows = &doc;
  std::optional<Field> declared = field;
  if (doc.is_object()) {
    if (doc.contains("field")) {
      const auto& f = doc["field"];
      if (!f.is_string() || (f != "real" && f != "complex"))
        throw ParseError("\"field\" must be \"real\" or \"complex\"", 1, 1);
      const Field df = f == "real" ? Field::real : Field::complex;
      if (field && *field != df)
        throw ParseError(std::string("document field is ") + to_string(df) + " but " +
                             to_string(*field) + " was requested",
                         1, 1);
      declared = df;
    }
    if (!doc.contains("rows")) throw ParseError("missing \"rows\"", 1, 1);
    rows = &doc["rows"];
  }
  if (!rows->is_array() || rows->empty()) throw ParseError("\"rows\" must be a non-empty array", 1, 1);
  std::vector<std::vector<Scalar>> values;
  bool complex = declared == Field::complex;
  for (std::size_t r = 0; r < rows->size(); ++r) {
    const auto& row = (*rows)[r];
    if (!row.is_array()) throw ParseError("row " + std::to_string(r + 1) + " is not an array", 1, 1);
    if (row.size() != (*rows)[0].size())
      throw ParseError("row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string((*rows)[0].size()),
                       1, 1);
    std::vector<Scalar> vr;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& e = row[c];
      const std::string where = "entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")";
      Scalar v;
      if (e.is_number()) {
        v = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        v = {e[0].get<double>(), e[1].get<double>()};
      } else if (e.is_string()) {
        auto p = parse_scalar(e.get<std::string>());
        if (!p) throw ParseError(where + " is not a number", 1, 1);
        v = *p;
      } else {
        throw ParseError(where + " must be a number or a [re, im] pair", 1, 1);
      }
      if (v.imag() != 0.0) {
        if (declared == Field::real) throw ParseError(where + " is complex in a real matrix", 1, 1);
        complex = true;
      }
      vr.push_back(v);
    }
    values.push_back(std::move(vr));
  }
  return Mat::from_rows(values, complex ? Field::complex : Field::real);
}

Mat parse_matrix(std::string_view text, std::optional<Field> field) {
  for (char c : text) {
    if (blank(c)) continue;
    if (c == '{') return parse_matrix_json(text, field);
    break;
  }
  return parse_matrix_text(text, field);
}

Mat load_matrix(const std::string& source, std::optional<Field> field) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) {
    std::ifstream in(source);
    if (!in) throw InvalidArgument("cannot read " + source);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      return parse_matrix(ss.str(), field);
    } catch (const ParseError& e) {
      throw ParseError(source + ": " + e.detail(), e.line(), e.column());
    }
  }
  std::string_view s = source;
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  if (s.empty() || (s.front() != '[' && s.front() != '{'))
    throw InvalidArgument("no such file: " + source);
  return parse_matrix(s, field);
}

namespace {

std::string shortest(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

std::string format_scalar(Scalar z, Field field) {
  if (field == Field::real) return shortest(z.real());
  // complex entries always carry both parts so the field survives a round trip
  const char* sign = std::signbit(z.imag()) ? "-" : "+";
  return shortest(z.real()) + sign + shortest(std::abs(z.imag())) + "i";
}

std::string emit_matrix_text(const Mat& a) {
  std::string out;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (c) out += ' ';
      out += format_scalar(a(r, c), a.field());
    }
    out += '\n';
  }
  return out;
}

nlohmann::json matrix_to_json(const Mat& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (a.field() == Field::real)
        row.push_back(a(r, c).real());
      else
        row.push_back({a(r, c).real(), a(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return {{"field", to_string(a.field())}, {"rows", std::move(rows)}};
}

}  // namespace linflow
