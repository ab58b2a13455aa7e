#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dppmix {

/// Deterministic JSON writer for report files: object keys keep insertion
/// order, doubles print with 17 significant digits, and non-finite numbers
/// serialize as null. Equal values dump to byte-identical text.
class JsonValue {
 public:
  static JsonValue object();
  static JsonValue array();
  static JsonValue string(std::string v);
  static JsonValue number(double v);
  static JsonValue integer(std::int64_t v);
  static JsonValue boolean(bool v);
  static JsonValue null();

  /// Appends (object must have been created with object()). Returns *this so
  /// builders can chain.
  JsonValue& set(std::string key, JsonValue v);

  /// Appends (array() values only).
  JsonValue& push(JsonValue v);

  /// Pretty text with two-space indentation and a trailing newline.
  std::string dump() const;

  /// Single-line text without a trailing newline (NDJSON rows).
  std::string dump_compact() const;

 private:
  using Array = std::vector<JsonValue>;
  using Object = std::vector<std::pair<std::string, JsonValue>>;
  using Payload =
      std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object>;

  explicit JsonValue(Payload payload) : payload_(std::move(payload)) {}

  void write(std::string& out, int depth) const;
  void write_compact(std::string& out) const;

  Payload payload_ = nullptr;
};

/// %.17g rendering used by JsonValue; non-finite values become "null".
std::string format_double(double v);

}  // namespace dppmix
