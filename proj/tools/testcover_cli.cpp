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

// Command-line front end. Exit status: 0 = YES / success, 1 = NO, 2 = error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "testcover/testcover.hpp"

namespace {

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string refs_to_string(const std::vector<testcover::TestRef>& refs) {
  std::string s;
  for (auto r : refs) {
    if (!s.empty()) s += ' ';
    s += std::to_string(r.index + 1);
  }
  return s;
}

struct Globals {
  std::size_t cap_m = 24;
  std::size_t timeout_ms = 10000;
  std::size_t workers = 1;
  bool trace = false;

  testcover::SolverConfig config() const {
    testcover::SolverConfig cfg;
    cfg.cap_m = cap_m;
    cfg.workers = workers;
    cfg.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Test Cover solvers, kernelization and reductions"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--cap-m", g.cap_m, "Largest m accepted by the exact solver")->capture_default_str();
  app.add_option("--timeout-ms", g.timeout_ms, "Deadline per solver run")->capture_default_str();
  app.add_option("--workers", g.workers, "Threads for subset searches and bench runs")->capture_default_str();
  app.add_flag("--trace", g.trace, "Print reduction-rule trace lines");

  std::string file;
  std::size_t k = 1;
  int status = kYes;

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("FILE", file)->required();
  validate->callback([&] {
    auto inst = testcover::parse_instance(read_file(file));
    std::cout << "n=" << inst.n() << " m=" << inst.m() << "\n" << inst.report().summary();
    status = inst.validated() ? kYes : kNo;
  });

  auto* solve = app.add_subcommand("solve", "Find a test cover");
  solve->require_subcommand(1);
  auto* solve_exact = solve->add_subcommand("exact", "Minimum test cover by exhaustive search");
  solve_exact->add_option("FILE", file)->required();
  solve_exact->callback([&] {
    auto inst = testcover::parse_instance(read_file(file));
    auto res = testcover::min_test_cover_exact(inst, g.config());
    std::cout << "optimum " << res.optimum << "\nwitness " << refs_to_string(res.witness) << "\n";
  });
  auto* solve_greedy = solve->add_subcommand("greedy", "Greedy approximation");
  solve_greedy->add_option("FILE", file)->required();
  solve_greedy->callback([&] {
    auto inst = testcover::parse_instance(read_file(file));
    auto cover = testcover::greedy_setcover_approx(inst);
    std::cout << "size " << cover.size() << "\nwitness " << refs_to_string(cover) << "\n";
  });

  auto* decide = app.add_subcommand("decide", "Parameterized decision problems");
  decide->require_subcommand(1);
  std::string mode = "fpt";
  auto* decide_nk = decide->add_subcommand("nk", "Is there a test cover with at most n-k tests?");
  decide_nk->add_option("FILE", file)->required();
  decide_nk->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  decide_nk->add_option("--mode", mode)->check(CLI::IsMember({"fpt", "brute", "both"}))->capture_default_str();
  decide_nk->callback([&] {
    auto inst = testcover::parse_instance(read_file(file));
    std::optional<bool> fpt_answer, brute_answer;
    if (mode != "brute") {
      auto res = testcover::fpt_decide(inst, k, g.config());
      fpt_answer = res.yes;
      if (g.trace) {
        for (const auto& t : res.trace) std::cout << testcover::format_trace(t) << "\n";
      }
      std::cout << "fpt " << (res.yes ? "YES" : "NO") << " stage=" << testcover::stage_name(res.stage)
                << " kernel_n=" << res.kernel_n << " kernel_m=" << res.kernel_m << "\n";
      if (res.witness) std::cout << "witness " << refs_to_string(*res.witness) << "\n";
    }
    if (mode != "fpt") {
      brute_answer = testcover::decide_nk_brute(inst, k, g.config());
      std::cout << "brute " << (*brute_answer ? "YES" : "NO") << "\n";
    }
    if (fpt_answer && brute_answer && *fpt_answer != *brute_answer) {
      std::cerr << "error: fpt and brute answers disagree\n";
      status = kError;
      return;
    }
    status = (fpt_answer ? *fpt_answer : *brute_answer) ? kYes : kNo;
  });
  auto* decide_k = decide->add_subcommand("k", "Is there a test cover with at most k tests?");
  decide_k->add_option("FILE", file)->required();
  decide_k->add_option("--k", k)->required();
  decide_k->callback([&] {
    auto inst = testcover::parse_instance(read_file(file));
    bool yes = testcover::decide_k_param(inst, k, g.config());
    std::cout << (yes ? "YES" : "NO") << "\n";
    status = yes ? kYes : kNo;
  });

  auto* mini = app.add_subcommand("mini", "Search for a k-mini test cover");
  mini->add_option("FILE", file)->required();
  mini->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  mini->callback([&] {
    auto inst = testcover::parse_instance(read_file(file));
    auto res = testcover::find_k_mini_brute(inst, k, g.config());
    if (res) {
      std::cout << "YES\nwitness " << refs_to_string(*res) << "\n";
      status = kYes;
    } else {
      std::cout << "NO\n";
      status = kNo;
    }
  });

  auto* reduce = app.add_subcommand("reduce", "Reductions");
  reduce->require_subcommand(1);
  auto* is2tc = reduce->add_subcommand("is2tc", "Independent Set graph to Test Cover instance");
  is2tc->add_option("GRAPH", file)->required();
  is2tc->callback([&] {
    auto graph = testcover::parse_graph(read_file(file));
    auto res = testcover::is_to_tc(graph);
    const auto& map = res.mapping;
    std::cout << "# nominal_tests " << map.nominal_tests << "\n# items";
    for (const auto& l : map.item_labels) std::cout << ' ' << l;
    std::cout << "\n# tests";
    for (const auto& o : map.test_origin) {
      std::cout << ' ' << (o.kind == testcover::TestOrigin::Kind::kVertex ? "v" : "e") << o.index;
    }
    std::cout << "\n";
    for (auto v : map.omitted_vertices) std::cout << "# omitted isolated vertex " << v << "\n";
    for (auto [a, b] : map.merged_twins) std::cout << "# vertex " << b << " merged into twin " << a << "\n";
    std::cout << testcover::write_instance(res.instance);
  });
  auto* tc2sc = reduce->add_subcommand("tc2sc", "Test Cover instance to Set Cover on item pairs");
  tc2sc->add_option("FILE", file)->required();
  tc2sc->callback([&] {
    auto inst = testcover::parse_instance(read_file(file));
    std::cout << testcover::write_setcover(testcover::tc_to_sc(inst));
  });

  std::size_t gen_n = 0, gen_m = 0;
  double density = 0.5;
  std::uint64_t seed = 0;
  bool canonical = false;
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", gen_n)->required();
  gen->add_option("--m", gen_m)->required();
  gen->add_option("--density", density)->capture_default_str();
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_flag("--canonical", canonical, "Sort tests before writing");
  gen->callback([&] {
    auto res = testcover::gen_random(gen_n, gen_m, density, seed);
    std::cerr << "appended " << res.appended << " singletons\n";
    std::cout << testcover::write_instance(res.instance, canonical);
  });

  std::string dir, out_file, ks = "1", solvers = "exact,fpt";
  auto* bench = app.add_subcommand("bench", "Run solvers over a directory of instances");
  bench->add_option("DIR", dir)->required();
  bench->add_option("--k", ks, "Comma-separated k values")->capture_default_str();
  bench->add_option("--solvers", solvers, "Comma-separated: exact,fpt,mini,greedy")->capture_default_str();
  bench->add_option("--out", out_file, "CSV destination (stdout when omitted)");
  bench->callback([&] {
    testcover::BenchOptions opt;
    opt.ks.clear();
    opt.solvers.clear();
    std::stringstream kss(ks), sss(solvers);
    for (std::string tok; std::getline(kss, tok, ',');) opt.ks.push_back(std::stoul(tok));
    for (std::string tok; std::getline(sss, tok, ',');) opt.solvers.push_back(tok);
    opt.workers = g.workers;
    opt.timeout_ms = g.timeout_ms;
    opt.cap_m = g.cap_m;
    auto csv = testcover::run_bench(dir, opt);
    if (out_file.empty()) {
      std::cout << csv;
    } else {
      std::ofstream(out_file, std::ios::binary) << csv;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  } catch (const testcover::TimeoutError& e) {
    std::cerr << "timeout: " << e.what() << "\n";
    return kError;
  } catch (const testcover::ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return status;
}
