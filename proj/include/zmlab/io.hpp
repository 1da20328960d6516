#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace zmlab::io {

inline constexpr int kSchemaVersion = 1;

// 17 significant digits round-trips IEEE doubles.
std::string format_double(double v);

// Wraps a payload with schema version and the fully resolved run config.
nlohmann::ordered_json artifact(const nlohmann::ordered_json& config,
                                nlohmann::ordered_json payload);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

// CSV with "# key=value" comment headers carrying schema + config.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& schema,
            const nlohmann::ordered_json& config,
            const std::vector<std::string>& columns);
  ~CsvWriter();

  void row(const std::vector<std::string>& cells);
  static std::string cell(double v) { return format_double(v); }

 private:
  std::string buffer_;
  std::filesystem::path path_;
};

}  // namespace zmlab::io
