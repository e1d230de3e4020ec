#include "latlab/core/records.hpp"

#include <fstream>
#include <sstream>

#include "latlab/core/errors.hpp"
#include "latlab/core/text.hpp"

namespace latlab {

std::string escape_field(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_field(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    char c = escaped[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (i + 1 >= escaped.size()) throw DataError("dangling escape in record field");
    char n = escaped[++i];
    switch (n) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: throw DataError(std::string("unknown escape \\") + n + " in record field");
    }
  }
  return out;
}

void write_records(const std::filesystem::path& path, const std::string& schema,
                   const std::vector<std::vector<std::string>>& rows) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open for writing: " + path.string());
  f << '#' << schema << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) f << '\t';
      f << escape_field(row[i]);
    }
    f << '\n';
  }
  if (!f) throw DataError("write failed: " + path.string());
}

RecordFile read_records(const std::filesystem::path& path, const std::string& expected_schema) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open: " + path.string());
  RecordFile out;
  std::string line;
  if (!std::getline(f, line)) throw DataError("empty record file: " + path.string());
  if (line.empty() || line[0] != '#')
    throw DataError("missing schema header in " + path.string());
  out.schema = line.substr(1);
  if (!line.empty() && line.back() == '\r') out.schema.pop_back();
  if (out.schema != expected_schema)
    throw DataError("schema mismatch in " + path.string() + ": found '" + out.schema +
                    "', expected '" + expected_schema + "'");
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> row;
    // Split on raw tabs first; escapes guarantee no field contains one.
    for (auto& field : split_on(line, '\t')) row.push_back(unescape_field(field));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot open for writing: " + path.string());
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw DataError("write failed: " + path.string());
}

}  // namespace latlab
