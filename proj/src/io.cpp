#include "zmlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace zmlab::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::ordered_json artifact(const nlohmann::ordered_json& config,
                                nlohmann::ordered_json payload) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config;
  for (auto& [key, value] : payload.items()) doc[key] = std::move(value);
  return doc;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& schema,
                     const nlohmann::ordered_json& config,
                     const std::vector<std::string>& columns)
    : path_(path) {
  buffer_ += "# schema=" + schema + " version=" + std::to_string(kSchemaVersion) + "\n";
  buffer_ += "# config=" + config.dump() + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += columns[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
  std::ofstream out(path_);
  if (out) out << buffer_;
}

}  // namespace zmlab::io
