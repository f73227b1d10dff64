#pragma once

#include "kitbit/value.hpp"

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace kitbit {

// Immutable ordered list of at least two values.
class Series {
 public:
  explicit Series(std::vector<Value> elems) : elems_(std::move(elems)) {
    if (elems_.size() < 2)
      throw std::invalid_argument("series needs at least 2 elements");
  }

  static Series of(std::initializer_list<long long> xs) {
    std::vector<Value> v;
    v.reserve(xs.size());
    for (long long x : xs) v.push_back(Value::exact(x));
    return Series(std::move(v));
  }

  size_t size() const { return elems_.size(); }
  const Value& at(size_t i) const { return elems_.at(i); }  // 0-based
  const std::vector<Value>& elements() const { return elems_; }

  Series prefix(size_t n) const {
    return Series(std::vector<Value>(elems_.begin(), elems_.begin() + n));
  }

  bool all_equal() const {
    for (size_t i = 1; i < elems_.size(); ++i)
      if (elems_[i] != elems_[0]) return false;
    return true;
  }

  std::string str() const {
    std::string s;
    for (size_t i = 0; i < elems_.size(); ++i) {
      if (i) s += ", ";
      s += elems_[i].str();
    }
    return s;
  }

 private:
  std::vector<Value> elems_;
};

/// Parses a comma/whitespace separated series literal ("1, 2, 4" or
/// "0.5 1/3 2"). Returns nullopt on any malformed token or length < 2.
inline std::optional<Series> parse_series(std::string_view text) {
  std::vector<Value> vals;
  std::string token;
  auto flush = [&]() -> bool {
    if (token.empty()) return true;
    auto v = parse_value(token);
    token.clear();
    if (!v) return false;
    vals.push_back(*v);
    return true;
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == ';') {
      if (!flush()) return std::nullopt;
    } else {
      token += c;
    }
  }
  if (!flush()) return std::nullopt;
  if (vals.size() < 2) return std::nullopt;
  return Series(std::move(vals));
}

}  // namespace kitbit
