#include "dppmix/json_out.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace dppmix {

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_indent(std::string& out, int depth) { out.append(2 * static_cast<size_t>(depth), ' '); }

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JsonValue JsonValue::object() { return JsonValue(Object{}); }
JsonValue JsonValue::array() { return JsonValue(Array{}); }
JsonValue JsonValue::string(std::string v) { return JsonValue(std::move(v)); }
JsonValue JsonValue::number(double v) { return JsonValue(v); }
JsonValue JsonValue::integer(std::int64_t v) { return JsonValue(v); }
JsonValue JsonValue::boolean(bool v) { return JsonValue(v); }
JsonValue JsonValue::null() { return JsonValue(nullptr); }

JsonValue& JsonValue::set(std::string key, JsonValue v) {
  auto* obj = std::get_if<Object>(&payload_);
  if (obj == nullptr) throw std::logic_error("JsonValue::set on a non-object");
  obj->emplace_back(std::move(key), std::move(v));
  return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
  auto* arr = std::get_if<Array>(&payload_);
  if (arr == nullptr) throw std::logic_error("JsonValue::push on a non-array");
  arr->push_back(std::move(v));
  return *this;
}

void JsonValue::write(std::string& out, int depth) const {
  if (std::holds_alternative<std::nullptr_t>(payload_)) {
    out += "null";
  } else if (const auto* b = std::get_if<bool>(&payload_)) {
    out += *b ? "true" : "false";
  } else if (const auto* i = std::get_if<std::int64_t>(&payload_)) {
    out += std::to_string(*i);
  } else if (const auto* d = std::get_if<double>(&payload_)) {
    out += format_double(*d);
  } else if (const auto* s = std::get_if<std::string>(&payload_)) {
    append_escaped(out, *s);
  } else if (const auto* arr = std::get_if<Array>(&payload_)) {
    if (arr->empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (size_t k = 0; k < arr->size(); ++k) {
      append_indent(out, depth + 1);
      (*arr)[k].write(out, depth + 1);
      if (k + 1 < arr->size()) out += ',';
      out += '\n';
    }
    append_indent(out, depth);
    out += ']';
  } else {
    const auto& obj = std::get<Object>(payload_);
    if (obj.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    for (size_t k = 0; k < obj.size(); ++k) {
      append_indent(out, depth + 1);
      append_escaped(out, obj[k].first);
      out += ": ";
      obj[k].second.write(out, depth + 1);
      if (k + 1 < obj.size()) out += ',';
      out += '\n';
    }
    append_indent(out, depth);
    out += '}';
  }
}

void JsonValue::write_compact(std::string& out) const {
  if (std::holds_alternative<std::nullptr_t>(payload_)) {
    out += "null";
  } else if (const auto* b = std::get_if<bool>(&payload_)) {
    out += *b ? "true" : "false";
  } else if (const auto* i = std::get_if<std::int64_t>(&payload_)) {
    out += std::to_string(*i);
  } else if (const auto* d = std::get_if<double>(&payload_)) {
    out += format_double(*d);
  } else if (const auto* s = std::get_if<std::string>(&payload_)) {
    append_escaped(out, *s);
  } else if (const auto* arr = std::get_if<Array>(&payload_)) {
    out += '[';
    for (size_t k = 0; k < arr->size(); ++k) {
      if (k > 0) out += ',';
      (*arr)[k].write_compact(out);
    }
    out += ']';
  } else {
    const auto& obj = std::get<Object>(payload_);
    out += '{';
    for (size_t k = 0; k < obj.size(); ++k) {
      if (k > 0) out += ',';
      append_escaped(out, obj[k].first);
      out += ':';
      obj[k].second.write_compact(out);
    }
    out += '}';
  }
}

std::string JsonValue::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

std::string JsonValue::dump_compact() const {
  std::string out;
  write_compact(out);
  return out;
}

}  // namespace dppmix
