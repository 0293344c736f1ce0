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

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "testcover/bounds_exact.hpp"
#include "testcover/core.hpp"
#include "testcover/errors.hpp"
#include "testcover/fpt.hpp"
#include "testcover/greedy.hpp"
#include "testcover/io.hpp"

namespace testcover {

/// One (instance, solver, k) run.
struct BenchRow {
  std::string id;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::string solver;
  /// YES / NO / UNKNOWN, or timeout / resource_limit / parse_error / error.
  std::string answer;
  /// Solver-specific: optimum (exact), kernel item count (fpt), witness size
  /// (mini), cover size (greedy). Empty when the run did not finish.
  std::string size;
  std::int64_t micros = 0;
  std::size_t path_rule_fires = 0;
  std::size_t sibling_rule_fires = 0;
};

inline constexpr const char* kBenchHeader =
    "id,n,m,k,solver,answer,size,micros,path_rule_fires,sibling_rule_fires";

inline std::string to_csv(const BenchRow& r) {
  std::ostringstream os;
  os << r.id << ',' << r.n << ',' << r.m << ',' << r.k << ',' << r.solver << ',' << r.answer << ',' << r.size
     << ',' << r.micros << ',' << r.path_rule_fires << ',' << r.sibling_rule_fires;
  return os.str();
}

struct BenchOptions {
  std::vector<std::size_t> ks{1};
  /// Any of: exact, fpt, mini, greedy.
  std::vector<std::string> solvers{"exact", "fpt"};
  std::size_t workers = 1;
  std::size_t timeout_ms = 10000;
  std::size_t cap_m = 24;
};

/// Runs one solver on one parsed instance; fills answer/size/rule counts.
inline void run_solver(const Instance& inst, const std::string& solver, std::size_t k, const SolverConfig& cfg,
                       BenchRow& row) {
  if (solver == "exact") {
    auto res = min_test_cover_exact(inst, cfg);
    row.answer = (k <= inst.n() && res.optimum <= inst.n() - k) ? "YES" : "NO";
    row.size = std::to_string(res.optimum);
  } else if (solver == "fpt") {
    auto res = fpt_decide(inst, k, cfg);
    row.answer = res.yes ? "YES" : "NO";
    row.size = std::to_string(res.kernel_n);
    row.path_rule_fires = res.path_fires;
    row.sibling_rule_fires = res.sibling_fires;
  } else if (solver == "mini") {
    auto res = find_k_mini_brute(inst, k, cfg);
    row.answer = res ? "YES" : "NO";
    row.size = res ? std::to_string(res->size()) : "";
  } else if (solver == "greedy") {
    auto cover = greedy_setcover_approx(inst);
    row.answer = (k <= inst.n() && cover.size() <= inst.n() - k) ? "YES" : "UNKNOWN";
    row.size = std::to_string(cover.size());
  } else {
    throw std::invalid_argument("unknown solver '" + solver + "'");
  }
}

/// Runs every solver on every instance file in `dir` (sorted by name) for
/// every k. Rows come out in (file, solver, k) order whatever the worker
/// count; each run gets its own deadline.
inline std::string run_bench(const std::filesystem::path& dir, const BenchOptions& opt) {
  for (const auto& s : opt.solvers) {
    if (s != "exact" && s != "fpt" && s != "mini" && s != "greedy") {
      throw std::invalid_argument("unknown solver '" + s + "'");
    }
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  struct Parsed {
    std::optional<Instance> inst;
    std::string error;
  };
  std::vector<Parsed> parsed(files.size());
  for (std::size_t f = 0; f < files.size(); ++f) {
    std::ifstream in(files[f], std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      if (!in) throw std::runtime_error("unreadable file");
      parsed[f].inst = parse_instance(buf.str());
    } catch (const std::exception& e) {
      parsed[f].error = e.what();
    }
  }

  std::vector<BenchRow> rows;
  for (std::size_t f = 0; f < files.size(); ++f) {
    for (const auto& solver : opt.solvers) {
      for (auto k : opt.ks) {
        BenchRow row;
        row.id = files[f].stem().string();
        row.solver = solver;
        row.k = k;
        if (parsed[f].inst) {
          row.n = parsed[f].inst->n();
          row.m = parsed[f].inst->m();
        }
        rows.push_back(std::move(row));
      }
    }
  }
  const std::size_t per_file = opt.solvers.size() * opt.ks.size();

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      auto& row = rows[i];
      const auto& p = parsed[i / std::max<std::size_t>(per_file, 1)];
      if (!p.inst) {
        row.answer = "parse_error";
        continue;
      }
      SolverConfig cfg;
      cfg.cap_m = opt.cap_m;
      auto start = std::chrono::steady_clock::now();
      cfg.deadline = start + std::chrono::milliseconds(opt.timeout_ms);
      try {
        run_solver(*p.inst, row.solver, row.k, cfg, row);
      } catch (const TimeoutError&) {
        row.answer = "timeout";
      } catch (const ResourceLimitError&) {
        row.answer = "resource_limit";
      } catch (const std::exception&) {
        row.answer = "error";
      }
      row.micros = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start)
                       .count();
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, opt.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  std::string out = std::string(kBenchHeader) + "\n";
  for (const auto& r : rows) out += to_csv(r) + "\n";
  return out;
}

}  // namespace testcover
