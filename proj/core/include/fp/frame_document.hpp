#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fp/expr.hpp"

namespace fp {

/// A parsed frame-field definition: the n x n grid of expressions giving
/// the frame components (row i = mesh index, column alpha = world index),
/// optional metadata, and an optional chart map in the position variables
/// only. This is the on-disk ingestion boundary for the whole engine.
struct FrameDocument {
  int n = 0;
  std::string name;
  std::string description;
  bool natural_chart = false;

  /// frame[i][alpha]; both the parsed tree and the source text.
  std::vector<std::vector<ExprPtr>> frame;
  std::vector<std::vector<std::string>> frame_text;

  std::vector<ExprPtr> chart_map;
  std::vector<std::string> chart_map_text;

  /// Validity notes gathered while parsing (currently: abs() breaks
  /// smoothness at zero).
  std::vector<std::string> warnings;

  bool has_chart_map() const { return !chart_map.empty(); }
};

/// Parses the key-value frame document format:
///
///   # comment
///   name = "ap-exponential"
///   n = 2
///   natural_chart = false
///   frame = [["exp(x1)", "0"],
///            ["0", "1"]]
///   chart_map = ["x1 + x2^2", "x2"]
///
/// UTF-8 text, '#' starts a line comment, arrays may span lines, trailing
/// commas allowed. Throws ParseError on malformed documents.
FrameDocument parse_frame_document(const std::string& text);

FrameDocument load_frame_document(const std::string& path);

/// Serializes a document back to the file format (used by frame synthesis).
std::string format_frame_document(const FrameDocument& doc);

}  // namespace fp
