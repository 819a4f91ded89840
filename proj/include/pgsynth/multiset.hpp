#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "pgsynth/error.hpp"

namespace pgsynth {

// Finite multiset over string identifiers. Entries are kept in sorted order
// and zero counts are never stored, so equal multisets compare equal and
// serialize identically.
class Multiset {
 public:
  using Map = std::map<std::string, std::int64_t>;
  using const_iterator = Map::const_iterator;

  Multiset() = default;
  explicit Multiset(Map entries) {
    for (auto& [k, c] : entries) {
      if (c < 0) throw invalid_input("negative multiplicity for '" + k + "'");
      if (c > 0) entries_.emplace(k, c);
    }
  }

  std::int64_t count(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second;
  }
  bool contains(const std::string& key) const { return count(key) > 0; }

  void add(const std::string& key, std::int64_t n = 1) {
    if (n == 0) return;
    auto& slot = entries_[key];
    slot += n;
    if (slot < 0) throw invalid_input("multiset count underflow for '" + key + "'");
    if (slot == 0) entries_.erase(key);
  }
  void remove(const std::string& key, std::int64_t n = 1) { add(key, -n); }

  // Multiset inclusion: this(x) <= other(x) for all x.
  bool subset_of(const Multiset& other) const {
    for (const auto& [k, c] : entries_)
      if (c > other.count(k)) return false;
    return true;
  }

  Multiset plus(const Multiset& other) const {
    Multiset r = *this;
    for (const auto& [k, c] : other.entries_) r.add(k, c);
    return r;
  }
  Multiset minus(const Multiset& other) const {
    Multiset r = *this;
    for (const auto& [k, c] : other.entries_) r.remove(k, c);
    return r;
  }

  std::int64_t cardinality() const {
    std::int64_t n = 0;
    for (const auto& [k, c] : entries_) n += c;
    return n;
  }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  const Map& entries() const { return entries_; }

  // Canonical text form, e.g. "{A:1,Sys:2}". Sorted by key.
  std::string key() const {
    std::string s = "{";
    bool first = true;
    for (const auto& [k, c] : entries_) {
      if (!first) s += ',';
      first = false;
      s += k;
      if (c != 1) s += ':' + std::to_string(c);
    }
    s += '}';
    return s;
  }

  friend bool operator==(const Multiset& a, const Multiset& b) {
    return a.entries_ == b.entries_;
  }
  friend bool operator!=(const Multiset& a, const Multiset& b) { return !(a == b); }
  friend bool operator<(const Multiset& a, const Multiset& b) {
    return a.entries_ < b.entries_;
  }

 private:
  Map entries_;
};

using Marking = Multiset;

}  // namespace pgsynth
