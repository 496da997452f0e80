#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qcomplete {

// A constant: NULL, a finite number, or text.
class SqlValue {
 public:
  SqlValue() = default;
  static SqlValue null() { return SqlValue(); }
  static SqlValue number(double v);
  static SqlValue text(std::string v) { return SqlValue(std::move(v)); }

  bool is_null() const { return std::holds_alternative<std::monostate>(payload_); }
  bool is_number() const { return std::holds_alternative<double>(payload_); }
  bool is_text() const { return std::holds_alternative<std::string>(payload_); }

  double as_number() const { return std::get<double>(payload_); }
  const std::string& as_text() const { return std::get<std::string>(payload_); }

  friend bool operator==(const SqlValue&, const SqlValue&) = default;

 private:
  explicit SqlValue(double v) : payload_(v) {}
  explicit SqlValue(std::string v) : payload_(std::move(v)) {}

  std::variant<std::monostate, double, std::string> payload_;
};

using Row = std::vector<SqlValue>;

enum class ColumnType { Numeric, Text };

const char* type_name(ColumnType t);

struct ColumnSchema {
  std::string name;
  ColumnType type = ColumnType::Text;
  bool nullable = false;

  friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

bool iequals(std::string_view a, std::string_view b);
std::string lowercase(std::string_view s);

struct CaseInsensitiveLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const;
};

// Table name -> ordered column list. Keys compare case-insensitively.
using DatabaseSchema = std::map<std::string, std::vector<ColumnSchema>, CaseInsensitiveLess>;

// Shortest text that parses back to the identical double, never with an
// exponent for magnitudes in [1e-6, 1e21). "-0" is rendered as "0".
std::string format_number(double v);

// Strict decimal parse of the entire string: optional '-', digits, optional
// fraction and exponent. Rejects inf/nan, '+', blanks.
std::optional<double> parse_number(std::string_view s);

}  // namespace qcomplete
