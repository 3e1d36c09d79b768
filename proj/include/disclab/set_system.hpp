#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "disclab/errors.hpp"
#include "disclab/rng.hpp"

namespace disclab {

// A universe of n points and m subsets of it. Indices are 0-based in memory;
// the 1-based convention of the text format is confined to the parser and
// serializer. Each set is stored sorted and duplicate-free.
struct SetSystem {
  int n = 0;
  std::vector<std::vector<int>> sets;

  int m() const { return static_cast<int>(sets.size()); }
};

// Full two-coloring: every entry is exactly -1 or +1.
struct Coloring {
  std::vector<int> values;

  int size() const { return static_cast<int>(values.size()); }
};

// A point of the fractional cube [-1,1]^n. Entries may carry up to 1e-9 of
// floating-point overshoot; readers clamp.
struct FractionalPoint {
  std::vector<double> values;

  static constexpr double kSlack = 1e-9;

  int size() const { return static_cast<int>(values.size()); }

  double clamped(int i) const {
    const double v = values[static_cast<std::size_t>(i)];
    if (v > 1.0) return 1.0;
    if (v < -1.0) return -1.0;
    return v;
  }

  bool in_cube() const {
    for (double v : values)
      if (v > 1.0 + kSlack || v < -1.0 - kSlack) return false;
    return true;
  }
};

namespace detail {

inline bool parse_int_token(const std::string& tok, long long& out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

inline bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

inline bool is_comment(const std::string& line) {
  const std::size_t i = line.find_first_not_of(" \t");
  return i != std::string::npos && line[i] == '#';
}

}  // namespace detail

// Text format: first data line "n m", then exactly m lines with the
// space-separated 1-based indices of each set (a blank line is an empty set).
// Lines starting with '#' are comments. LF and CRLF both accepted.
inline SetSystem parse_set_system(std::istream& in) {
  SetSystem sys;
  std::string line;
  int lineno = 0;
  long long n = -1, m = -1;

  // Header: first non-comment, non-blank line.
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::is_comment(line) || detail::is_blank(line)) continue;
    std::istringstream hs(line);
    std::string tn, tm, extra;
    hs >> tn >> tm;
    if (!detail::parse_int_token(tn, n) || !detail::parse_int_token(tm, m) ||
        (hs >> extra))
      throw parse_error("malformed header, expected \"n m\"", lineno);
    if (n < 0 || m < 0)
      throw parse_error("header counts must be non-negative", lineno);
    break;
  }
  if (n < 0) throw parse_error("missing header", lineno == 0 ? 1 : lineno);

  sys.n = static_cast<int>(n);
  sys.sets.reserve(static_cast<std::size_t>(m));

  while (static_cast<long long>(sys.sets.size()) < m && std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::is_comment(line)) continue;
    std::vector<int> set;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      long long v = 0;
      if (!detail::parse_int_token(tok, v))
        throw parse_error("non-integer token \"" + tok + "\"", lineno);
      if (v < 1 || v > n)
        throw parse_error("index " + std::to_string(v) + " outside [1, " +
                              std::to_string(n) + "]",
                          lineno);
      set.push_back(static_cast<int>(v - 1));
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    sys.sets.push_back(std::move(set));
  }
  if (static_cast<long long>(sys.sets.size()) < m)
    throw parse_error("expected " + std::to_string(m) + " set lines, got " +
                          std::to_string(sys.sets.size()),
                      lineno + 1);
  return sys;
}

inline SetSystem parse_set_system(const std::string& text) {
  std::istringstream in(text);
  return parse_set_system(in);
}

// Canonical form of the text format (sorted 1-based indices, LF endings).
inline void write_set_system(std::ostream& out, const SetSystem& sys) {
  out << sys.n << ' ' << sys.m() << '\n';
  for (const auto& set : sys.sets) {
    for (std::size_t k = 0; k < set.size(); ++k) {
      if (k) out << ' ';
      out << set[k] + 1;
    }
    out << '\n';
  }
}

inline std::string to_string(const SetSystem& sys) {
  std::ostringstream out;
  write_set_system(out, sys);
  return out.str();
}

// max over sets of |sum of colors|; 0 for an empty collection.
inline int discrepancy(const SetSystem& sys, const Coloring& chi) {
  if (chi.size() != sys.n)
    throw contract_error("coloring length does not match universe size");
  int worst = 0;
  for (const auto& set : sys.sets) {
    int s = 0;
    for (int i : set) s += chi.values[static_cast<std::size_t>(i)];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

// Fractional relaxation of discrepancy(); agrees with it exactly on
// integral points.
inline double fractional_discrepancy(const SetSystem& sys,
                                     const FractionalPoint& x) {
  if (x.size() != sys.n)
    throw contract_error("point length does not match universe size");
  double worst = 0.0;
  for (const auto& set : sys.sets) {
    double s = 0.0;
    for (int i : set) s += x.clamped(i);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

// How many sets the busiest point belongs to.
inline int max_degree(const SetSystem& sys) {
  std::vector<int> deg(static_cast<std::size_t>(sys.n), 0);
  int best = 0;
  for (const auto& set : sys.sets)
    for (int i : set) best = std::max(best, ++deg[static_cast<std::size_t>(i)]);
  return best;
}

// Result of narrowing a system to a sub-universe. `to_new[i]` maps an old
// point to its new index (-1 if dropped); `to_old` is the inverse.
struct Restriction {
  SetSystem system;
  std::vector<int> to_new;
  std::vector<int> to_old;
};

// Intersects every set with `active` (0-based point indices) and reindexes
// the surviving points to [0, |active|). Duplicates in `active` are merged.
inline Restriction restrict_system(const SetSystem& sys,
                                   std::vector<int> active) {
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  if (active.empty()) throw contract_error("active subset must be nonempty");
  if (active.front() < 0 || active.back() >= sys.n)
    throw contract_error("active subset contains out-of-range indices");

  Restriction r;
  r.to_new.assign(static_cast<std::size_t>(sys.n), -1);
  for (std::size_t k = 0; k < active.size(); ++k)
    r.to_new[static_cast<std::size_t>(active[k])] = static_cast<int>(k);
  r.to_old = std::move(active);

  r.system.n = static_cast<int>(r.to_old.size());
  r.system.sets.reserve(sys.sets.size());
  for (const auto& set : sys.sets) {
    std::vector<int> cut;
    for (int i : set) {
      const int j = r.to_new[static_cast<std::size_t>(i)];
      if (j >= 0) cut.push_back(j);
    }
    r.system.sets.push_back(std::move(cut));  // stays sorted: to_new is monotone
  }
  return r;
}

// Each of the m sets picks every point independently with probability p.
inline SetSystem generate_random(int n, int m, double p, std::uint64_t seed) {
  if (n < 1 || m < 1) throw contract_error("generator needs n, m >= 1");
  if (!(p > 0.0 && p < 1.0)) throw contract_error("inclusion probability must be in (0,1)");
  SetSystem sys;
  sys.n = n;
  sys.sets.resize(static_cast<std::size_t>(m));
  Rng master(seed);
  for (int j = 0; j < m; ++j) {
    Rng r = master.substream(static_cast<std::uint64_t>(j));
    auto& set = sys.sets[static_cast<std::size_t>(j)];
    for (int i = 0; i < n; ++i)
      if (r.uniform() < p) set.push_back(i);
  }
  return sys;
}

// Every point joins a uniformly chosen set of k distinct sets, k uniform in
// {1, ..., min(t, m)}, so no point exceeds degree t.
inline SetSystem generate_bounded_degree(int n, int m, int t,
                                         std::uint64_t seed) {
  if (n < 1 || m < 1 || t < 1) throw contract_error("generator needs n, m, t >= 1");
  SetSystem sys;
  sys.n = n;
  sys.sets.resize(static_cast<std::size_t>(m));
  Rng master(seed);
  const int tcap = std::min(t, m);
  std::vector<int> pool(static_cast<std::size_t>(m));
  for (int i = 0; i < n; ++i) {
    Rng r = master.substream(static_cast<std::uint64_t>(i));
    const int k = 1 + static_cast<int>(r.uniform_below(static_cast<std::uint64_t>(tcap)));
    for (int j = 0; j < m; ++j) pool[static_cast<std::size_t>(j)] = j;
    for (int pick = 0; pick < k; ++pick) {  // partial Fisher-Yates
      const std::size_t swap_at =
          static_cast<std::size_t>(pick) +
          r.uniform_below(static_cast<std::uint64_t>(m - pick));
      std::swap(pool[static_cast<std::size_t>(pick)], pool[swap_at]);
      sys.sets[static_cast<std::size_t>(pool[static_cast<std::size_t>(pick)])]
          .push_back(i);
    }
  }
  return sys;  // sets end up sorted: points are appended in increasing order
}

}  // namespace disclab
