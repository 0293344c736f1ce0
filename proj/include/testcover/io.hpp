// Copyright 2026 The testcover Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Text formats.
//
//   # comment lines are allowed anywhere
//   testcover <n> <m>
//   <ascending 1-based items of test 1>
//   ...
//
//   graph <p> <q>
//   <u> <v>
//   ...
//
//   setcover <ground> <m>
//   <ascending elements of set 1>
//   ...

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "testcover/core.hpp"
#include "testcover/reductions.hpp"

namespace testcover {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

struct Line {
  std::size_t number;
  std::string_view text;
};

/// Non-comment lines with their 1-based line numbers. A final newline does
/// not start an extra line.
inline std::vector<Line> data_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++number;
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] != '#') out.push_back({number, line});
    pos = end + 1;
  }
  return out;
}

inline std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t start = line.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    std::size_t end = line.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(start, end - start));
    pos = end;
  }
  return out;
}

inline std::size_t to_number(std::string_view tok, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected a nonnegative integer, got '" + std::string(tok) + "'");
  }
  return value;
}

/// Parses `<keyword> <a> <b>` from the first data line.
inline std::pair<std::size_t, std::size_t> header(const std::vector<Line>& lines, std::string_view keyword) {
  if (lines.empty()) throw ParseError(1, "missing '" + std::string(keyword) + "' header");
  auto toks = tokens(lines[0].text);
  if (toks.size() != 3 || toks[0] != keyword) {
    throw ParseError(lines[0].number, "malformed header, expected '" + std::string(keyword) + " <a> <b>'");
  }
  return {to_number(toks[1], lines[0].number), to_number(toks[2], lines[0].number)};
}

inline void check_count(const std::vector<Line>& lines, std::size_t expected) {
  if (lines.size() - 1 < expected) {
    std::size_t at = lines.back().number + 1;
    throw ParseError(at, "expected " + std::to_string(expected) + " body lines, found " +
                             std::to_string(lines.size() - 1));
  }
  if (lines.size() - 1 > expected) {
    throw ParseError(lines[expected + 1].number,
                     "unexpected line beyond the declared " + std::to_string(expected));
  }
}

}  // namespace detail

/// Parses the testcover format. Test order is kept as written.
inline Instance parse_instance(std::string_view text) {
  auto lines = detail::data_lines(text);
  auto [n, m] = detail::header(lines, "testcover");
  if (n == 0) throw ParseError(lines[0].number, "item count must be positive");
  detail::check_count(lines, m);

  std::vector<ItemSet> tests;
  std::unordered_set<ItemSet, ItemSetHash> seen;
  for (std::size_t t = 0; t < m; ++t) {
    const auto& line = lines[t + 1];
    auto toks = detail::tokens(line.text);
    if (toks.empty()) throw ParseError(line.number, "empty test");
    ItemSet s(n);
    std::size_t prev = 0;
    for (auto tok : toks) {
      std::size_t item = detail::to_number(tok, line.number);
      if (item == 0 || item > n) {
        throw ParseError(line.number, "item " + std::to_string(item) + " out of range");
      }
      if (item <= prev) throw ParseError(line.number, "items must be strictly ascending");
      prev = item;
      s.insert(item - 1);
    }
    if (!seen.insert(s).second) throw ParseError(line.number, "duplicate test " + s.to_string());
    tests.push_back(std::move(s));
  }
  return Instance(n, std::move(tests));
}

/// Writes the testcover format. With `canonical` the tests are sorted
/// lexicographically first.
inline std::string write_instance(const Instance& inst, bool canonical = false) {
  std::vector<const ItemSet*> order;
  for (const auto& t : inst.tests()) order.push_back(&t);
  if (canonical) {
    std::sort(order.begin(), order.end(), [](const ItemSet* a, const ItemSet* b) { return *a < *b; });
  }
  std::string out = "testcover " + std::to_string(inst.n()) + " " + std::to_string(inst.m()) + "\n";
  for (const auto* t : order) {
    bool sep = false;
    for (auto p = t->first(); p != ItemSet::npos; p = t->next(p + 1)) {
      if (sep) out += ' ';
      out += std::to_string(p + 1);
      sep = true;
    }
    out += '\n';
  }
  return out;
}

inline Graph parse_graph(std::string_view text) {
  auto lines = detail::data_lines(text);
  auto [p, q] = detail::header(lines, "graph");
  detail::check_count(lines, q);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::unordered_set<std::uint64_t> seen;
  for (std::size_t e = 0; e < q; ++e) {
    const auto& line = lines[e + 1];
    auto toks = detail::tokens(line.text);
    if (toks.size() != 2) throw ParseError(line.number, "expected 'u v'");
    std::size_t u = detail::to_number(toks[0], line.number);
    std::size_t v = detail::to_number(toks[1], line.number);
    if (u == v) throw ParseError(line.number, "self-loop at vertex " + std::to_string(u));
    if (u == 0 || v == 0 || u > p || v > p) throw ParseError(line.number, "vertex out of range");
    auto [a, b] = std::minmax(u, v);
    if (!seen.insert((static_cast<std::uint64_t>(a) << 32) | b).second) {
      throw ParseError(line.number, "duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
    }
    edges.emplace_back(u, v);
  }
  return Graph(p, std::move(edges));
}

inline std::string write_graph(const Graph& g) {
  std::string out = "graph " + std::to_string(g.p()) + " " + std::to_string(g.q()) + "\n";
  for (auto [u, v] : g.edges()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

/// Same line layout as the testcover format. Elements are written by label
/// when the instance carries labels (pairs appear as `i-j`), else 1-based.
inline std::string write_setcover(const SetCoverInstance& sc) {
  std::string out = "setcover " + std::to_string(sc.ground_size) + " " + std::to_string(sc.sets.size()) + "\n";
  for (const auto& set : sc.sets) {
    bool sep = false;
    for (auto e : set) {
      if (sep) out += ' ';
      out += sc.labels.empty() ? std::to_string(e + 1) : sc.labels[e];
      sep = true;
    }
    out += '\n';
  }
  return out;
}

struct GeneratedInstance {
  Instance instance;
  /// Singletons appended to make the collection a test cover.
  std::size_t appended = 0;
};

/// m distinct random tests, each item included with probability `density`,
/// rejection-sampled against empty and repeated tests. Missing singletons are
/// then appended until the collection is a test cover. Only raw 64-bit
/// mt19937 output is consumed, so results match across standard libraries.
inline GeneratedInstance gen_random(std::size_t n, std::size_t m, double density, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_random: n must be positive");
  if (!(density > 0.0 && density < 1.0)) throw std::invalid_argument("gen_random: density must lie in (0, 1)");
  if (n < 64 && m > (std::uint64_t{1} << n) - 1) {
    throw std::invalid_argument("gen_random: cannot draw " + std::to_string(m) + " distinct nonempty tests on " +
                                std::to_string(n) + " items");
  }
  std::mt19937_64 rng(seed);
  // P(draw < threshold) == density for a uniform 64-bit draw.
  const auto threshold = static_cast<std::uint64_t>(density * 18446744073709551616.0);
  const std::uint64_t max_draws = 1000 * static_cast<std::uint64_t>(m) + 100000;

  std::vector<ItemSet> tests;
  std::unordered_set<ItemSet, ItemSetHash> seen;
  std::uint64_t draws = 0;
  while (tests.size() < m) {
    if (++draws > max_draws) {
      throw std::invalid_argument("gen_random: rejection sampling did not find " + std::to_string(m) +
                                  " distinct tests; try a density nearer 0.5");
    }
    ItemSet s(n);
    for (std::size_t p = 0; p < n; ++p)
      if (rng() < threshold) s.insert(p);
    if (s.empty() || !seen.insert(s).second) continue;
    tests.push_back(std::move(s));
  }

  GeneratedInstance out;
  while (true) {
    Instance inst(n, tests);
    if (inst.report().test_cover) {
      out.instance = std::move(inst);
      return out;
    }
    // The first class with two items lacks at least one of its singletons,
    // or it would already be split.
    auto part = induced_partition(inst, all_tests(inst));
    for (const auto& cls : part.classes) {
      if (cls.count() < 2) continue;
      for (auto p = cls.first(); p != ItemSet::npos; p = cls.next(p + 1)) {
        ItemSet single(n);
        single.insert(p);
        if (seen.insert(single).second) {
          tests.push_back(std::move(single));
          ++out.appended;
          break;
        }
      }
      break;
    }
  }
}

}  // namespace testcover
