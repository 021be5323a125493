#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "yaf/errors.hpp"

namespace yaf::minitoml {

/**
 * Strict parser for the TOML subset the configuration files actually use:
 *
 *   - `#` comments (full-line and trailing),
 *   - `[section]` headers with bare names,
 *   - `key = value` pairs inside a section,
 *   - values: quoted strings (escapes \" \\ \n \t \r), booleans, integers,
 *     floats, and single-line arrays of homogeneous scalars.
 *
 * Everything outside that subset -- dotted keys, nested arrays or tables,
 * multi-line strings, dates -- is rejected.  The parser does not stop at the
 * first problem: it records every malformed line and throws one ConfigError
 * listing all of them, so a user fixes a file in one round trip.
 */

enum class Kind { string, boolean, integer, floating, array };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::string: return "string";
    case Kind::boolean: return "boolean";
    case Kind::integer: return "integer";
    case Kind::floating: return "float";
    case Kind::array: return "array";
  }
  return "?";
}

struct Value {
  Kind kind = Kind::string;
  std::string str;
  bool boolean = false;
  long long integer = 0;
  double floating = 0.0;
  std::vector<Value> items;  ///< array elements; scalars only
  std::size_t line = 0;      ///< 1-based source line, for diagnostics

  bool is_number() const { return kind == Kind::integer || kind == Kind::floating; }
  double as_double() const {
    return kind == Kind::integer ? static_cast<double>(integer) : floating;
  }
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<std::pair<std::string, Value>> entries;  ///< insertion order

  const Value* find(std::string_view key) const {
    for (const auto& [k, v] : entries) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

struct Document {
  std::vector<Section> sections;  ///< insertion order

  const Section* find(std::string_view name) const {
    for (const auto& s : sections) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }
  Section* find(std::string_view name) {
    for (auto& s : sections) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }
};

namespace detail {

inline bool is_ws(char c) { return c == ' ' || c == '\t'; }

inline bool is_bare_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '-';
}

inline void skip_ws(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && is_ws(s[pos])) ++pos;
}

/// True when the rest of the line is whitespace or a trailing comment.
inline bool only_trailing(std::string_view s, std::size_t pos) {
  skip_ws(s, pos);
  return pos == s.size() || s[pos] == '#';
}

struct LineError {
  std::size_t line;
  std::string message;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Document run() {
    Document doc;
    Section* current = nullptr;
    std::size_t pos = 0, line_no = 0;
    while (pos <= text_.size()) {
      ++line_no;
      std::size_t eol = text_.find('\n', pos);
      if (eol == std::string_view::npos) eol = text_.size();
      std::string_view line = text_.substr(pos, eol - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      parse_line(doc, current, line, line_no);
      if (eol == text_.size()) break;
      pos = eol + 1;
    }
    if (!errors_.empty()) {
      std::vector<std::string> msgs;
      msgs.reserve(errors_.size());
      for (const auto& e : errors_) {
        msgs.push_back("line " + std::to_string(e.line) + ": " + e.message);
      }
      throw ConfigError(std::move(msgs));
    }
    return doc;
  }

 private:
  void fail(std::size_t line, std::string msg) { errors_.push_back({line, std::move(msg)}); }

  void parse_line(Document& doc, Section*& current, std::string_view line, std::size_t no) {
    std::size_t pos = 0;
    skip_ws(line, pos);
    if (pos == line.size() || line[pos] == '#') return;

    if (line[pos] == '[') {
      parse_section_header(doc, current, line, pos, no);
      return;
    }

    // key = value
    const std::size_t key_begin = pos;
    while (pos < line.size() && is_bare_key_char(line[pos])) ++pos;
    if (pos == key_begin) {
      fail(no, "expected a key or [section], found '" + std::string(1, line[pos]) + "'");
      return;
    }
    const std::string key(line.substr(key_begin, pos - key_begin));
    skip_ws(line, pos);
    if (pos == line.size() || line[pos] != '=') {
      fail(no, "expected '=' after key '" + key + "'");
      return;
    }
    ++pos;
    skip_ws(line, pos);
    Value v;
    if (!parse_value(line, pos, no, v, /*in_array=*/false)) return;
    if (!only_trailing(line, pos)) {
      fail(no, "unexpected text after value for key '" + key + "'");
      return;
    }
    if (current == nullptr) {
      fail(no, "key '" + key + "' appears outside any [section]");
      return;
    }
    if (const Value* prev = current->find(key)) {
      fail(no, "duplicate key '" + key + "' in [" + current->name + "] (first set at line " +
                   std::to_string(prev->line) + ")");
      return;
    }
    current->entries.emplace_back(key, std::move(v));
  }

  void parse_section_header(Document& doc, Section*& current, std::string_view line,
                            std::size_t pos, std::size_t no) {
    ++pos;  // consume '['
    const std::size_t name_begin = pos;
    while (pos < line.size() && is_bare_key_char(line[pos])) ++pos;
    const std::string name(line.substr(name_begin, pos - name_begin));
    if (name.empty()) {
      fail(no, "empty or malformed section name");
      return;
    }
    if (pos == line.size() || line[pos] != ']') {
      fail(no, "missing ']' after section name '" + name + "'");
      return;
    }
    ++pos;
    if (!only_trailing(line, pos)) {
      fail(no, "unexpected text after section header [" + name + "]");
      return;
    }
    if (Section* prev = doc.find(name)) {
      fail(no, "duplicate section [" + name + "] (first opened at line " +
                   std::to_string(prev->line) + ")");
      current = prev;  // keep scanning its keys so later duplicates are reported too
      return;
    }
    doc.sections.push_back(Section{name, no, {}});
    current = &doc.sections.back();
  }

  bool parse_value(std::string_view line, std::size_t& pos, std::size_t no, Value& out,
                   bool in_array) {
    out.line = no;
    if (pos == line.size()) {
      fail(no, "missing value");
      return false;
    }
    const char c = line[pos];
    if (c == '"') return parse_string(line, pos, no, out);
    if (c == '[') {
      if (in_array) {
        fail(no, "nested arrays are not supported");
        return false;
      }
      return parse_array(line, pos, no, out);
    }
    return parse_bare_scalar(line, pos, no, out);
  }

  bool parse_string(std::string_view line, std::size_t& pos, std::size_t no, Value& out) {
    ++pos;  // consume opening quote
    out.kind = Kind::string;
    while (pos < line.size()) {
      const char c = line[pos];
      if (c == '"') {
        ++pos;
        return true;
      }
      if (c == '\\') {
        if (pos + 1 == line.size()) break;
        const char esc = line[pos + 1];
        switch (esc) {
          case '"': out.str += '"'; break;
          case '\\': out.str += '\\'; break;
          case 'n': out.str += '\n'; break;
          case 't': out.str += '\t'; break;
          case 'r': out.str += '\r'; break;
          default:
            fail(no, std::string("unknown escape '\\") + esc + "' in string");
            return false;
        }
        pos += 2;
        continue;
      }
      out.str += c;
      ++pos;
    }
    fail(no, "unterminated string");
    return false;
  }

  bool parse_array(std::string_view line, std::size_t& pos, std::size_t no, Value& out) {
    ++pos;  // consume '['
    out.kind = Kind::array;
    skip_ws(line, pos);
    if (pos < line.size() && line[pos] == ']') {
      ++pos;
      return true;
    }
    while (true) {
      skip_ws(line, pos);
      Value elem;
      if (!parse_value(line, pos, no, elem, /*in_array=*/true)) return false;
      out.items.push_back(std::move(elem));
      skip_ws(line, pos);
      if (pos == line.size()) {
        fail(no, "unterminated array");
        return false;
      }
      if (line[pos] == ']') {
        ++pos;
        break;
      }
      if (line[pos] != ',') {
        fail(no, std::string("expected ',' or ']' in array, found '") + line[pos] + "'");
        return false;
      }
      ++pos;
    }
    // homogeneity: numbers may mix (integers promote to floats); anything
    // else must match exactly
    bool any_float = false, any_int = false;
    for (const Value& e : out.items) {
      any_float |= (e.kind == Kind::floating);
      any_int |= (e.kind == Kind::integer);
      if (e.kind != out.items.front().kind && !(e.is_number() && out.items.front().is_number())) {
        fail(no, std::string("mixed value types in array (") + to_string(out.items.front().kind) +
                     " and " + to_string(e.kind) + ")");
        return false;
      }
    }
    if (any_float && any_int) {
      for (Value& e : out.items) {
        if (e.kind == Kind::integer) {
          e.floating = static_cast<double>(e.integer);
          e.kind = Kind::floating;
        }
      }
    }
    return true;
  }

  bool parse_bare_scalar(std::string_view line, std::size_t& pos, std::size_t no, Value& out) {
    const std::size_t begin = pos;
    while (pos < line.size() && !is_ws(line[pos]) && line[pos] != ',' && line[pos] != ']' &&
           line[pos] != '#') {
      ++pos;
    }
    const std::string_view tok = line.substr(begin, pos - begin);
    if (tok == "true" || tok == "false") {
      out.kind = Kind::boolean;
      out.boolean = (tok == "true");
      return true;
    }
    const bool looks_float = tok.find_first_of(".eE") != std::string_view::npos;
    if (looks_float) {
      double d = 0.0;
      const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
      if (ec == std::errc{} && p == tok.data() + tok.size()) {
        out.kind = Kind::floating;
        out.floating = d;
        return true;
      }
    } else {
      long long i = 0;
      const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), i);
      if (ec == std::errc{} && p == tok.data() + tok.size()) {
        out.kind = Kind::integer;
        out.integer = i;
        return true;
      }
      if (ec == std::errc::result_out_of_range) {
        fail(no, "integer '" + std::string(tok) + "' does not fit in 64 bits");
        return false;
      }
    }
    fail(no, "cannot parse value '" + std::string(tok) + "'");
    return false;
  }

  std::string_view text_;
  std::vector<LineError> errors_;
};

}  // namespace detail

/// Parse a document from text; throws ConfigError listing every bad line.
inline Document parse(std::string_view text) { return detail::Parser(text).run(); }

/// Read and parse a file; IoError when unreadable, ConfigError when malformed.
inline Document parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace yaf::minitoml
