#include "fp/frame_document.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace fp {

namespace {

// Minimal recursive value grammar over the comment-stripped document:
// scalars (integer, boolean, quoted string) and arrays of values.
struct DocValue {
  enum class Kind { Integer, Boolean, String, Array };
  Kind kind = Kind::Integer;
  long long integer = 0;
  bool boolean = false;
  std::string string;
  std::vector<DocValue> array;
};

struct DocParser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos); }

  void skip_ws_and_comments() {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws_and_comments();
    return pos >= text.size();
  }

  std::string key() {
    skip_ws_and_comments();
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    if (pos == start) fail("expected a key");
    return text.substr(start, pos - start);
  }

  void expect(char c) {
    skip_ws_and_comments();
    if (pos >= text.size() || text[pos] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos;
  }

  DocValue value() {
    skip_ws_and_comments();
    if (pos >= text.size()) fail("expected a value");
    const char c = text[pos];
    DocValue v;
    if (c == '[') {
      ++pos;
      v.kind = DocValue::Kind::Array;
      while (true) {
        skip_ws_and_comments();
        if (pos < text.size() && text[pos] == ']') {
          ++pos;
          break;
        }
        v.array.push_back(value());
        skip_ws_and_comments();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ']') {
          ++pos;
          break;
        }
        fail("expected ',' or ']' in array");
      }
      return v;
    }
    if (c == '"') {
      ++pos;
      v.kind = DocValue::Kind::String;
      while (pos < text.size() && text[pos] != '"') {
        if (text[pos] == '\\' && pos + 1 < text.size()) {
          const char esc = text[pos + 1];
          switch (esc) {
            case '"': v.string.push_back('"'); break;
            case '\\': v.string.push_back('\\'); break;
            case 'n': v.string.push_back('\n'); break;
            case 't': v.string.push_back('\t'); break;
            default: fail("unknown escape sequence");
          }
          pos += 2;
        } else {
          v.string.push_back(text[pos]);
          ++pos;
        }
      }
      if (pos >= text.size()) fail("unterminated string");
      ++pos;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
      const std::size_t start = pos;
      if (c == '-' || c == '+') ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start])))) {
        fail("malformed integer");
      }
      v.kind = DocValue::Kind::Integer;
      v.integer = std::stoll(text.substr(start, pos - start));
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos;
      while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
      const std::string word = text.substr(start, pos - start);
      if (word == "true" || word == "false") {
        v.kind = DocValue::Kind::Boolean;
        v.boolean = (word == "true");
        return v;
      }
      pos = start;
      fail("unknown literal: " + word);
    }
    fail("unexpected character in value");
  }
};

std::string require_string(const DocValue& v, const std::string& key, std::size_t offset) {
  if (v.kind != DocValue::Kind::String) {
    throw ParseError("value of '" + key + "' must be a string", offset);
  }
  return v.string;
}

}  // namespace

FrameDocument parse_frame_document(const std::string& text) {
  DocParser parser{text};
  FrameDocument doc;

  std::optional<DocValue> frame_value;
  std::optional<DocValue> chart_value;

  while (!parser.at_end()) {
    const std::size_t key_offset = parser.pos;
    const std::string key = parser.key();
    parser.expect('=');
    DocValue v = parser.value();

    if (key == "n") {
      if (v.kind != DocValue::Kind::Integer) throw ParseError("'n' must be an integer", key_offset);
      doc.n = static_cast<int>(v.integer);
    } else if (key == "name") {
      doc.name = require_string(v, key, key_offset);
    } else if (key == "description") {
      doc.description = require_string(v, key, key_offset);
    } else if (key == "natural_chart") {
      if (v.kind != DocValue::Kind::Boolean) {
        throw ParseError("'natural_chart' must be true or false", key_offset);
      }
      doc.natural_chart = v.boolean;
    } else if (key == "frame") {
      frame_value = std::move(v);
    } else if (key == "chart_map") {
      chart_value = std::move(v);
    } else {
      throw ParseError("unknown key: " + key, key_offset);
    }
  }

  if (doc.n < 2) throw ParseError("'n' must be given and at least 2", 0);
  if (!frame_value) throw ParseError("missing 'frame'", 0);
  if (frame_value->kind != DocValue::Kind::Array ||
      static_cast<int>(frame_value->array.size()) != doc.n) {
    throw ParseError("'frame' must be an array of n rows", 0);
  }

  doc.frame.resize(static_cast<std::size_t>(doc.n));
  doc.frame_text.resize(static_cast<std::size_t>(doc.n));
  for (int i = 0; i < doc.n; ++i) {
    const DocValue& row = frame_value->array[static_cast<std::size_t>(i)];
    if (row.kind != DocValue::Kind::Array || static_cast<int>(row.array.size()) != doc.n) {
      throw ParseError("frame row " + std::to_string(i + 1) + " must have n entries", 0);
    }
    for (int a = 0; a < doc.n; ++a) {
      const DocValue& cell = row.array[static_cast<std::size_t>(a)];
      if (cell.kind != DocValue::Kind::String) {
        throw ParseError("frame entries must be expression strings", 0);
      }
      ExprPtr expr;
      try {
        expr = parse_expression(cell.string, doc.n);
      } catch (const ParseError& err) {
        throw ParseError("frame entry (" + std::to_string(i + 1) + "," +
                             std::to_string(a + 1) + "): " + err.what(),
                         err.offset());
      }
      if (contains_abs(expr)) {
        doc.warnings.push_back("frame entry (" + std::to_string(i + 1) + "," +
                               std::to_string(a + 1) +
                               ") uses abs, which breaks smoothness at zero");
      }
      doc.frame[static_cast<std::size_t>(i)].push_back(expr);
      doc.frame_text[static_cast<std::size_t>(i)].push_back(cell.string);
    }
  }

  if (chart_value) {
    if (chart_value->kind != DocValue::Kind::Array ||
        static_cast<int>(chart_value->array.size()) != doc.n) {
      throw ParseError("'chart_map' must be an array of n expression strings", 0);
    }
    for (int mu = 0; mu < doc.n; ++mu) {
      const DocValue& cell = chart_value->array[static_cast<std::size_t>(mu)];
      if (cell.kind != DocValue::Kind::String) {
        throw ParseError("'chart_map' entries must be expression strings", 0);
      }
      ExprPtr expr = parse_expression(cell.string, doc.n);
      // Chart maps live on the base manifold: x variables only.
      struct {
        bool uses_y(const Expr& e, int n) const {
          if (e.kind == Expr::Kind::Variable) return e.var >= n;
          if (e.a && uses_y(*e.a, n)) return true;
          if (e.b && uses_y(*e.b, n)) return true;
          return false;
        }
      } probe;
      if (probe.uses_y(*expr, doc.n)) {
        throw ParseError("chart_map entry " + std::to_string(mu + 1) +
                             " may only use x variables",
                         0);
      }
      doc.chart_map.push_back(expr);
      doc.chart_map_text.push_back(cell.string);
    }
  }

  return doc;
}

FrameDocument load_frame_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open frame document: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_frame_document(buffer.str());
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what(), err.offset());
  }
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_frame_document(const FrameDocument& doc) {
  std::ostringstream os;
  if (!doc.name.empty()) os << "name = " << quoted(doc.name) << "\n";
  if (!doc.description.empty()) os << "description = " << quoted(doc.description) << "\n";
  os << "n = " << doc.n << "\n";
  if (doc.natural_chart) os << "natural_chart = true\n";
  os << "frame = [\n";
  for (int i = 0; i < doc.n; ++i) {
    os << "  [";
    for (int a = 0; a < doc.n; ++a) {
      if (a > 0) os << ", ";
      os << quoted(doc.frame_text.empty() ? to_string(doc.frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)])
                                          : doc.frame_text[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)]);
    }
    os << "],\n";
  }
  os << "]\n";
  if (!doc.chart_map_text.empty()) {
    os << "chart_map = [";
    for (int mu = 0; mu < doc.n; ++mu) {
      if (mu > 0) os << ", ";
      os << quoted(doc.chart_map_text[static_cast<std::size_t>(mu)]);
    }
    os << "]\n";
  }
  return os.str();
}

}  // namespace fp
