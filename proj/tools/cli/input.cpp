#include "cli/input.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace swstab::cli {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Mat2 read_matrix(const json& doc, const char* key, const std::string& source) {
  auto fail = [&](const std::string& what) -> InputError {
    return InputError(source + ": " + key + " " + what);
  };
  if (!doc.contains(key)) throw fail("is missing");
  const json& m = doc.at(key);
  if (!m.is_array() || m.size() != 2) throw fail("must be a 2x2 array of numbers");
  double e[4];
  for (int i = 0; i < 2; ++i) {
    if (!m[i].is_array() || m[i].size() != 2) throw fail("must be a 2x2 array of numbers");
    for (int j = 0; j < 2; ++j) {
      if (!m[i][j].is_number()) throw fail("must be a 2x2 array of numbers");
      e[2 * i + j] = m[i][j].get<double>();
      if (!std::isfinite(e[2 * i + j])) throw fail("has a non-finite entry");
    }
  }
  return {e[0], e[1], e[2], e[3]};
}

}  // namespace

InputDocument parse_input(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": parse error: " << e.what();
    throw InputError(os.str());
  }
  if (!doc.is_object()) throw InputError(source + ": top level must be an object");
  InputDocument out{{read_matrix(doc, "A", source), read_matrix(doc, "B", source)}, ""};
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw InputError(source + ": label must be a string");
    out.label = doc["label"].get<std::string>();
  }
  return out;
}

InputDocument read_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_input(buf.str(), path.string());
}

}  // namespace swstab::cli
