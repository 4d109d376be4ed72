#pragma once
// Colored indices, sequences of them, and the variables of the rational model.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pdiff {

// Colors are 0-based internally and printed 1-based.
struct ColoredIndex {
  int color = 0;
  int ordinal = 0;
  auto operator<=>(const ColoredIndex&) const = default;
};

using Seq = std::vector<ColoredIndex>;       // head first: (i_N, ..., i_1)
using MultiSeq = std::vector<Seq>;           // one sequence per marked point
using Support = std::vector<ColoredIndex>;   // sorted, duplicate free

inline std::string to_string(const ColoredIndex& x) {
  return std::to_string(x.color + 1) + "." + std::to_string(x.ordinal);
}

inline std::string to_string(const Seq& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += to_string(s[i]);
  }
  return out + ")";
}

inline std::string to_string(const MultiSeq& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ";";
    out += to_string(m[i]);
  }
  return out + "]";
}

inline bool has_repeat(const Seq& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] == s[j]) return true;
  return false;
}

inline Seq concat(const MultiSeq& m) {
  Seq out;
  for (const auto& s : m) out.insert(out.end(), s.begin(), s.end());
  return out;
}

inline Seq concat(const Seq& a, const Seq& b) {
  Seq out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline bool has_repeat(const MultiSeq& m) { return has_repeat(concat(m)); }

inline Support support_of(const Seq& s) {
  Support out = s;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline Support support_of(const MultiSeq& m) { return support_of(concat(m)); }

inline std::size_t total_length(const MultiSeq& m) {
  std::size_t n = 0;
  for (const auto& s : m) n += s.size();
  return n;
}

inline bool contains(const Seq& s, const ColoredIndex& x) {
  return std::find(s.begin(), s.end(), x) != s.end();
}

inline Seq reversed(const Seq& s) { return Seq(s.rbegin(), s.rend()); }

inline Support support_union(const Support& a, const Support& b) {
  Support out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool disjoint(const Support& a, const Support& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

inline Support support_minus(const Support& a, const ColoredIndex& x) {
  Support out;
  for (const auto& y : a)
    if (!(y == x)) out.push_back(y);
  return out;
}

// All interleavings of a and b keeping the internal order of each.
inline void shuffles(const Seq& a, const Seq& b, std::vector<Seq>& out) {
  Seq cur;
  cur.reserve(a.size() + b.size());
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> void {
    if (i == a.size() && j == b.size()) {
      out.push_back(cur);
      return;
    }
    if (i < a.size()) {
      cur.push_back(a[i]);
      self(self, i + 1, j);
      cur.pop_back();
    }
    if (j < b.size()) {
      cur.push_back(b[j]);
      self(self, i, j + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0, 0);
}

inline std::vector<Seq> shuffles(const Seq& a, const Seq& b) {
  std::vector<Seq> out;
  shuffles(a, b, out);
  return out;
}

// ---------------------------------------------------------------------------
// Variables of the rational model: t_x for pool indices, z_nu for marked
// points, and named formal parameters.

using Var = std::uint32_t;

namespace detail {
constexpr Var kKindShift = 28;
constexpr Var kT = 0;
constexpr Var kZ = 1;
constexpr Var kParam = 2;

struct ParamRegistry {
  std::mutex mu;
  std::vector<std::string> names;
  std::unordered_map<std::string, Var> ids;
};
inline ParamRegistry& registry() {
  static ParamRegistry r;
  return r;
}
}  // namespace detail

inline Var var_t(const ColoredIndex& x) {
  if (x.color < 0 || x.color >= 4096 || x.ordinal < 0 || x.ordinal >= 65536)
    throw std::out_of_range("colored index out of encodable range");
  return (detail::kT << detail::kKindShift) | (Var(x.color) << 16) | Var(x.ordinal);
}
inline Var var_z(int nu) { return (detail::kZ << detail::kKindShift) | Var(nu); }

inline Var var_param(const std::string& name) {
  auto& r = detail::registry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.ids.find(name);
  if (it != r.ids.end()) return it->second;
  Var v = (detail::kParam << detail::kKindShift) | Var(r.names.size());
  r.names.push_back(name);
  r.ids.emplace(name, v);
  return v;
}

inline bool is_t_var(Var v) { return (v >> detail::kKindShift) == detail::kT; }
inline bool is_z_var(Var v) { return (v >> detail::kKindShift) == detail::kZ; }
inline bool is_param_var(Var v) { return (v >> detail::kKindShift) == detail::kParam; }

inline ColoredIndex index_of_var(Var v) {
  return ColoredIndex{int((v >> 16) & 0xFFF), int(v & 0xFFFF)};
}

inline std::string var_name(Var v) {
  if (is_t_var(v)) return "t" + to_string(index_of_var(v));
  if (is_z_var(v)) return "z" + std::to_string((v & 0xFFFF) + 1);
  auto& r = detail::registry();
  std::lock_guard<std::mutex> lock(r.mu);
  return r.names.at(v & 0xFFFFFFF);
}

}  // namespace pdiff
