#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace latlab {

// Line-delimited record files. First line is a schema header ("#<schema-id>"),
// then one record per line, tab-separated fields with backslash escapes for
// tab / newline / backslash. Readers reject missing or mismatched schemas.
struct RecordFile {
  std::string schema;
  std::vector<std::vector<std::string>> rows;
};

std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);

void write_records(const std::filesystem::path& path, const std::string& schema,
                   const std::vector<std::vector<std::string>>& rows);
RecordFile read_records(const std::filesystem::path& path, const std::string& expected_schema);

// Small helpers shared by everything that touches the filesystem.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace latlab
