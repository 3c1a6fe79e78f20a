#pragma once

// Minimal "key = value" text documents shared by the tax-year parameter
// files and scenario files.  '#' starts a comment, blank lines are ignored,
// and every key may appear at most once.

#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptcfix {

/// Error tied to a document key (and, when known, its line).
class DocumentError : public std::runtime_error {
 public:
  DocumentError(std::string key, std::size_t line, const std::string& what)
      : std::runtime_error(describe(key, line, what)), key_(std::move(key)), line_(line), message_(what) {}

  const std::string& key() const { return key_; }
  /// 1-based; 0 when the problem is a missing key.
  std::size_t line() const { return line_; }
  /// The message without the key/line prefix.
  const std::string& message() const { return message_; }

 private:
  static std::string describe(const std::string& key, std::size_t line, const std::string& what) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += "key '" + key + "': ";
    return out + what;
  }

  std::string key_;
  std::size_t line_;
  std::string message_;
};

struct KeyValueEntry {
  std::string value;
  std::size_t line = 0;
};

using KeyValueMap = std::map<std::string, KeyValueEntry, std::less<>>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline KeyValueMap parse_key_values(std::string_view text) {
  KeyValueMap out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw DocumentError("", line_no, "expected 'key = value'");
    std::string key(detail::trim(line.substr(0, eq)));
    std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw DocumentError("", line_no, "empty key");
    if (value.empty()) throw DocumentError(key, line_no, "empty value");
    if (out.contains(key)) throw DocumentError(key, line_no, "duplicate key");
    out.emplace(std::move(key), KeyValueEntry{std::move(value), line_no});
    if (end == text.size()) break;
  }
  return out;
}

}  // namespace ptcfix
