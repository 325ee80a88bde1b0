#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace llab {

// Floats with 17 significant digits; NaN and infinities spelled nan, inf, -inf.
std::string format_number(double v);

using CsvCell = std::variant<double, long long, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;

  void add(std::vector<CsvCell> row) { rows.push_back(std::move(row)); }
  std::string str() const;
};

void write_text(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const CsvTable& table);
void write_json(const std::string& path, const nlohmann::ordered_json& doc);

// JSON number, or null for non-finite values.
nlohmann::ordered_json json_number(double v);

}  // namespace llab
