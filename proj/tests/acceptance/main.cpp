// Acceptance suite: one verdict line per criterion, exit 0 only when every
// criterion passes at its stated tolerance and budget.
#include <sys/wait.h>

#include <Eigen/Dense>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pharmonic/parallel.hpp"
#include "pharmonic/periodic_finite.hpp"
#include "pharmonic/periodic_infinite.hpp"
#include "pharmonic/plaplace.hpp"
#include "pharmonic/rng.hpp"
#include "pharmonic/subgroup.hpp"
#include "pharmonic/word.hpp"

namespace fs = std::filesystem;
using namespace pharmonic;

namespace {

std::string cli_binary;  // argv[1]

struct Outcome {
  bool pass = false;
  std::string detail;
};

using CheckFn = std::function<Outcome()>;

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ------------------------------------------------------------ criterion 1

Outcome group_algebra_suite() {
  long failures = 0;
  long checks = 0;
  Rng rng(20240801);
  for (int k : {1, 2, 3, 4}) {
    const Ball region = ball(ReducedWord(k), 6);
    const int n = static_cast<int>(region.vertices.size());
    const ReducedWord e(k);
    for (int trial = 0; trial < 2500; ++trial) {
      const ReducedWord x = random_word(rng, k, rng.uniform_int(0, 24));
      const ReducedWord y = random_word(rng, k, rng.uniform_int(0, 24));
      const ReducedWord z = random_word(rng, k, rng.uniform_int(0, 24));
      ++checks;
      if (!(multiply(multiply(x, y), z) == multiply(x, multiply(y, z)))) {
        ++failures;
      }
      if (!(multiply(x, e) == x && multiply(e, x) == x)) ++failures;
      if (!multiply(x, inverse(x)).is_identity()) ++failures;
      if (!multiply(inverse(x), x).is_identity()) ++failures;

      // raw sequences with deliberate repeats reduce idempotently
      std::vector<int> raw;
      for (int i = 0, len = rng.uniform_int(0, 20); i < len; ++i) {
        raw.push_back(rng.uniform_int(1, k + 1));
      }
      const ReducedWord once = ReducedWord::reduce(raw, k);
      if (!(ReducedWord::reduce(once.letters(), k) == once)) ++failures;

      const ReducedWord& a = region.vertices[rng.uniform_int(0, n - 1)];
      const ReducedWord& b = region.vertices[rng.uniform_int(0, n - 1)];
      const ReducedWord& c = region.vertices[rng.uniform_int(0, n - 1)];
      if (distance(a, b) != distance(b, a)) ++failures;
      if ((distance(a, b) == 0) != (a == b)) ++failures;
      if (distance(a, c) > distance(a, b) + distance(b, c)) ++failures;
    }
  }
  Outcome out;
  out.pass = failures == 0;
  out.detail = std::to_string(checks) + " randomized checks, " +
               std::to_string(failures) + " failures";
  return out;
}

// ------------------------------------------------------------ criterion 2

ReducedWord steer_to_index(ReducedWord x, const InfiniteIndexPair& pair,
                           long target) {
  long n = coset_index(x, pair);
  while (n != target) {
    const ReducedWord with_first = append_generator(x, pair.first);
    const long n_first = coset_index(with_first, pair);
    if (std::labs(n_first - target) < std::labs(n - target)) {
      x = with_first;
      n = n_first;
    } else {
      x = append_generator(x, pair.second);
      n = coset_index(x, pair);
    }
  }
  return x;
}

Outcome neighbor_profile_suite() {
  long checked = 0;
  long failures = 0;
  Rng rng(20240802);
  for (int k : {1, 2, 3, 5}) {
    const InfiniteIndexPair pair{k, 1, 2};
    for (int trial = 0; trial < 1000; ++trial) {
      ReducedWord x = random_word(rng, k, rng.uniform_int(0, 40));
      if (trial % 2 == 0) {
        x = steer_to_index(x, pair, rng.uniform_int(-20, 20));
      } else {
        while (std::labs(coset_index(x, pair)) > 20) {
          x = random_word(rng, k, rng.uniform_int(0, 40));
        }
      }
      const AdjacencyProfile profile = adjacency_profile(x, pair);
      ++checked;
      if (profile.down != 1 || profile.same != k - 1 || profile.up != 1) {
        ++failures;
      }
    }
  }
  Outcome out;
  out.pass = failures == 0;
  out.detail = std::to_string(checked) + " vertices, " +
               std::to_string(failures) + " profile mismatches";
  return out;
}

// ------------------------------------------------------------ criterion 3

struct SolveJob {
  int order;
  std::vector<std::vector<int>> subsets;
  double p;
  int draw;
};

Outcome constancy_suite() {
  std::vector<SolveJob> jobs;
  const std::map<int, std::vector<std::vector<std::vector<int>>>> specs_by_k = {
      {1, {{{1}}, {{1}, {2}}}},
      {2, {{{1}}, {{1}, {2}}, {{1}, {2}, {3}}}},
      {3, {{{1}}, {{1}, {2}}, {{1}, {2}, {3}}}},
  };
  for (const auto& [k, specs] : specs_by_k) {
    for (const auto& subsets : specs) {
      for (double p : {1.5, 2.0, 3.0, 4.0}) {
        for (int draw = 0; draw < 3; ++draw) {
          jobs.push_back(SolveJob{k, subsets, p, draw});
        }
      }
    }
  }

  struct JobResult {
    bool ok = true;
    double worst_spread = 0.0;
    double worst_residual = 0.0;
  };
  std::vector<JobResult> results(jobs.size());

  parallel_for(jobs.size(), [&](std::size_t idx) {
    const SolveJob& job = jobs[idx];
    const FiniteIndexSpec spec{job.order, job.subsets};
    const QuotientGraph q = quotient_graph(spec);
    Rng rng(splitmix64(0x51c3 + idx));
    const CosetResistances r = CosetResistances::draw_log_uniform(q, rng);
    JobResult& slot = results[idx];
    for (int start_id = 0; start_id < 100; ++start_id) {
      PeriodicProfile start(q.num_cosets());
      for (double& v : start) v = rng.uniform(-1.0, 1.0);
      const PeriodicSolveResult solved =
          solve_periodic(q, r, job.p, start, 1e-10, 100000, 1e-6);
      // re-derive the reported residual through the public system map
      const std::vector<double> residual =
          residual_system(solved.profile, q, r, job.p);
      double res = 0.0;
      for (double v : residual) res = std::max(res, std::fabs(v));
      slot.worst_spread = std::max(slot.worst_spread, solved.spread);
      slot.worst_residual = std::max(slot.worst_residual, res);
      if (!solved.converged || res > 1e-10 || solved.spread > 1e-6) {
        slot.ok = false;
      }
    }
  });

  bool all_ok = true;
  double worst_spread = 0.0;
  double worst_residual = 0.0;
  for (const JobResult& r : results) {
    all_ok = all_ok && r.ok;
    worst_spread = std::max(worst_spread, r.worst_spread);
    worst_residual = std::max(worst_residual, r.worst_residual);
  }

  // proof mechanism: the residual at a maximal coset of any non-constant
  // profile is strictly negative
  const QuotientGraph q4 = quotient_graph(FiniteIndexSpec{2, {{1}, {2}}});
  Rng rng(20240803);
  long principle_failures = 0;
  CosetResistances r4 = CosetResistances::draw_log_uniform(q4, rng);
  for (int trial = 0; trial < 10000; ++trial) {
    if (trial % 100 == 0) r4 = CosetResistances::draw_log_uniform(q4, rng);
    const double p = std::vector<double>{1.5, 2.0, 3.0, 4.0}[trial % 4];
    PeriodicProfile profile(q4.num_cosets());
    for (double& v : profile) v = rng.uniform(-1.0, 1.0);
    const MaxPrincipleReport report = max_principle_check(profile, q4, r4, p);
    bool negative_at_argmax = false;
    for (const auto& entry : report.argmax) {
      if (entry.has_smaller_neighbor && entry.residual < 0.0) {
        negative_at_argmax = true;
      }
    }
    if (report.constant_profile || !report.pass || !negative_at_argmax) {
      ++principle_failures;
    }
  }

  Outcome out;
  out.pass = all_ok && principle_failures == 0;
  out.detail = std::to_string(jobs.size() * 100) +
               " solves, worst spread " + fmt(worst_spread) +
               ", worst residual " + fmt(worst_residual) + "; " +
               std::to_string(principle_failures) +
               "/10000 max-principle failures";
  return out;
}

// ------------------------------------------------------------ criterion 4

Outcome family_suite() {
  const std::vector<ResistanceSequence> sequences = {
      ResistanceSequence(-3, {0.9, 1.4, 0.7, 1.1, 0.8, 1.2, 1.0},
                         GeometricTail{0.8, 0.9}, GeometricTail{1.1, 0.85}),
      ResistanceSequence(0, {1.0}, GeometricTail{0.7, 0.88},
                         GeometricTail{0.9, 0.9}),
  };
  double worst_residual = 0.0;
  double worst_flux_variation = 0.0;
  double worst_literal = 0.0;
  bool constants_ok = true;
  for (const ResistanceSequence& seq : sequences) {
    for (Family family : {Family::U1, Family::U2}) {
      for (double amplitude : {0.5, 1.5}) {
        for (double offset : {0.0, -0.75}) {
          const FamilyMember m{family, amplitude, offset, seq};
          for (double p : {1.5, 2.0, 2.7, 4.0}) {
            const double reference_flux = flux(m, p, 0);
            for (long n = -50; n <= 50; ++n) {
              worst_residual = std::max(
                  worst_residual, std::fabs(member_difference_residual(m, p, n)));
              worst_flux_variation =
                  std::max(worst_flux_variation,
                           std::fabs(flux(m, p, n) - reference_flux) /
                               std::fabs(reference_flux));
            }
            // the same residual from literal values, inside the range where
            // the subtraction is well conditioned
            const IndexProfile values = [&m](long i) { return evaluate(m, i); };
            for (long n = -12; n <= 12; ++n) {
              worst_literal = std::max(
                  worst_literal,
                  std::fabs(difference_residual(values, seq, p, n)));
            }
          }
        }
      }
      // amplitude zero degenerates to the constant offset
      const FamilyMember constant{family, 0.0, 0.4, seq};
      for (long n = -50; n <= 50; ++n) {
        if (evaluate(constant, n) != 0.4) constants_ok = false;
      }
    }
  }
  Outcome out;
  out.pass = worst_residual <= 1e-12 && worst_flux_variation <= 1e-12 &&
             worst_literal <= 1e-12 && constants_ok;
  out.detail = "worst residual " + fmt(worst_residual) + " (literal " +
               fmt(worst_literal) + "), flux variation " +
               fmt(worst_flux_variation) +
               (constants_ok ? "" : ", zero-amplitude members not constant");
  return out;
}

// ------------------------------------------------------------ criterion 5

Outcome combination_suite() {
  Rng rng(20240805);
  const InfiniteIndexPair pair{2, 1, 2};
  int passed = 0;
  double worst_chain = 0.0;
  double worst_vertex = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    // shared sequence for this combination
    std::vector<double> window;
    for (int i = 0; i < 5; ++i) window.push_back(rng.uniform(0.6, 1.2));
    const ResistanceSequence seq(
        -2, window, GeometricTail{rng.uniform(0.6, 1.0), rng.uniform(0.90, 0.92)},
        GeometricTail{rng.uniform(0.6, 1.0), rng.uniform(0.90, 0.92)},
        WithinCosetRule::log_uniform(rng.next()));

    Combination c;
    const int count = rng.uniform_int(2, 6);
    const int rising = rng.uniform_int(1, count - 1);
    for (int i = 0; i < count; ++i) {
      c.members.push_back(FamilyMember{i < rising ? Family::U1 : Family::U2,
                                       rng.uniform(0.2, 0.9),
                                       rng.uniform(-0.5, 0.5), seq});
      c.coefficients.push_back((rng.coin() ? 1.0 : -1.0) *
                               rng.uniform(0.25, 0.8));
    }

    const double p = std::vector<double>{1.5, 2.0, 2.7, 4.0}[trial % 4];
    VertexCheck check;
    check.pair = pair;
    check.radius = 8;
    check.center = random_word(rng, 2, rng.uniform_int(0, 14));

    const CombinationReport report =
        verify_combination(c, p, -30, 30, 1e-10, check);
    worst_chain = std::max(worst_chain, report.max_residual);
    worst_vertex = std::max(worst_vertex, report.vertex_report->max_residual);
    if (report.pass) ++passed;
  }
  Outcome out;
  out.pass = passed == 200;
  out.detail = std::to_string(passed) + "/200 combinations, worst chain " +
               fmt(worst_chain) + ", worst vertex " + fmt(worst_vertex);
  return out;
}

// ------------------------------------------------------------ criterion 6

using EdgeKey = std::pair<ReducedWord, ReducedWord>;

EdgeKey edge_key(const ReducedWord& x, const ReducedWord& y) {
  return y < x ? EdgeKey{y, x} : EdgeKey{x, y};
}

ResistanceAssignment random_resistances(const Ball& b, Rng& rng, double lo,
                                        double hi) {
  std::map<EdgeKey, double> table;
  for (const auto& [a, c] : b.edges) {
    table[edge_key(b.vertices[a], b.vertices[c])] = rng.log_uniform(lo, hi);
  }
  return ResistanceAssignment(
      [table](const ReducedWord& x, const ReducedWord& y) {
        return table.at(edge_key(x, y));
      });
}

std::vector<ReducedWord> interior_of(const Ball& b) {
  std::vector<ReducedWord> out;
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    if (b.depth[i] < b.radius) out.push_back(b.vertices[i]);
  }
  return out;
}

Outcome oracle_suite() {
  Rng rng(20240806);
  std::ostringstream detail;

  // (a) boundaries sampled from a rising family reproduce its interior
  const ResistanceSequence seq(-8, {1.2, 0.7, 1.0, 0.9, 1.4, 0.8, 1.1, 0.6,
                                    1.0, 0.9, 1.3, 0.8, 0.7, 1.1, 1.0, 0.9,
                                    1.2},
                               GeometricTail{0.9, 0.9},
                               GeometricTail{0.8, 0.88});
  const InfiniteIndexPair pair{2, 1, 2};
  const FamilyMember member{Family::U1, 1.0, 0.25, seq};
  double worst_member_gap = 0.0;
  for (int radius : {4, 6}) {
    const Ball region = ball(ReducedWord(2), radius);
    const ResistanceAssignment r = sequence_resistances(pair, seq);
    VertexFunction boundary;
    for (int i : region.boundary) {
      const ReducedWord& x = region.vertices[i];
      boundary.set(x, evaluate_at_vertex(member, x, pair));
    }
    // The exact solution is constant on every within-coset edge, which for
    // p < 2 puts the minimizer on the curvature singularity of the edge
    // energy and degrades the descent rate beyond desk scale, so this check
    // runs on exponents of 2 and above; p < 2 harmonicity of the same
    // values is verified directly by criteria 4 and 5.
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
      const DirichletResult solved =
          dirichlet_solve(region, boundary, r, p, 1e-10);
      if (!solved.converged) {
        return Outcome{false, "family-boundary solve did not converge"};
      }
      for (const ReducedWord& x : interior_of(region)) {
        worst_member_gap = std::max(
            worst_member_gap,
            std::fabs(solved.u.at(x) - evaluate_at_vertex(member, x, pair)));
      }
    }
  }
  detail << "family gap " << fmt(worst_member_gap);
  const bool member_ok = worst_member_gap <= 1e-6;

  // (b) the p = 2 special case against a dense direct solve
  double worst_linear_gap = 0.0;
  for (int radius : {4, 6}) {
    const Ball region = ball(ReducedWord(2), radius);
    const ResistanceAssignment r = random_resistances(region, rng, 0.1, 10.0);
    VertexFunction boundary;
    for (int i : region.boundary) {
      boundary.set(region.vertices[i], rng.uniform(-2.0, 2.0));
    }
    const DirichletResult solved =
        dirichlet_solve(region, boundary, r, 2.0, 1e-13);
    if (!solved.converged) {
      return Outcome{false, "p=2 solve did not converge"};
    }

    std::vector<int> interior;
    std::vector<int> slot(region.vertices.size(), -1);
    for (std::size_t i = 0; i < region.vertices.size(); ++i) {
      if (region.depth[i] < region.radius) {
        slot[i] = static_cast<int>(interior.size());
        interior.push_back(static_cast<int>(i));
      }
    }
    const int n = static_cast<int>(interior.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int row = 0; row < n; ++row) {
      const int i = interior[row];
      for (int j : region.adjacency[i]) {
        const double c = 1.0 / r(region.vertices[i], region.vertices[j]);
        A(row, row) += c;
        if (slot[j] >= 0) {
          A(row, slot[j]) -= c;
        } else {
          rhs(row) += c * boundary.at(region.vertices[j]);
        }
      }
    }
    const Eigen::VectorXd x = A.fullPivLu().solve(rhs);
    for (int row = 0; row < n; ++row) {
      worst_linear_gap = std::max(
          worst_linear_gap,
          std::fabs(solved.u.at(region.vertices[interior[row]]) - x(row)));
    }
  }
  detail << ", linear gap " << fmt(worst_linear_gap);
  const bool linear_ok = worst_linear_gap <= 1e-10;

  // (c) energy gradient against central differences, relative to term scale
  const Ball small = ball(ReducedWord(2), 2);
  const double h = 1e-6;
  double worst_fd = 0.0;
  for (int config = 0; config < 100; ++config) {
    const double p = std::vector<double>{1.5, 2.0, 3.0, 4.0}[config % 4];
    const ResistanceAssignment r = random_resistances(small, rng, 0.5, 2.0);
    VertexFunction u;
    bool separated = false;
    while (!separated) {
      for (const ReducedWord& v : small.vertices) {
        u.set(v, rng.uniform(-1.0, 1.0));
      }
      separated = true;
      for (const auto& [a, c] : small.edges) {
        if (std::fabs(u.at(small.vertices[a]) - u.at(small.vertices[c])) <
            0.15) {
          separated = false;
          break;
        }
      }
    }
    for (const ReducedWord& x : interior_of(small)) {
      VertexFunction up = u;
      VertexFunction dn = u;
      up.set(x, u.at(x) + h);
      dn.set(x, u.at(x) - h);
      const double fd =
          (energy(up, small, r, p) - energy(dn, small, r, p)) / (2 * h);
      const double analytic = -p * p_laplacian(u, x, r, p);
      double term_scale = 0.0;
      for (const ReducedWord& y : neighbors(x)) {
        term_scale += std::fabs(phi_p(gradient(u, x, y, r), p));
      }
      const double denom = std::max(p * term_scale, std::fabs(analytic));
      worst_fd = std::max(worst_fd, std::fabs(fd - analytic) / denom);
    }
  }
  detail << ", gradient consistency " << fmt(worst_fd);
  const bool fd_ok = worst_fd <= 1e-5;

  Outcome out;
  out.pass = member_ok && linear_ok && fd_ok;
  out.detail = detail.str();
  return out;
}

// ------------------------------------------------------------ criterion 7

int run_cli(const std::string& args) {
  const std::string command = cli_binary + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Outcome determinism_suite() {
  if (cli_binary.empty()) {
    return Outcome{false, "no CLI binary path given (argv[1])"};
  }
  const fs::path dir = fs::current_path() / "acceptance_scratch";
  fs::create_directories(dir);

  std::ofstream(dir / "t2.json")
      << R"({"k": 2, "spec": {"finite": {"A": [[1],[2]]}}, "p": 3.0,
             "resistances": {"random": true}, "starts": 25, "seed": 7,
             "tol": 1e-10, "spread_tol": 1e-6})";
  std::ofstream(dir / "t4.json")
      << R"({"k": 2, "pair": [1, 2],
             "seq": {"window": {"from": -1, "values": [0.9, 1.2, 0.8]},
                     "tail_left": {"base": 0.8, "ratio": 0.9},
                     "tail_right": {"base": 0.7, "ratio": 0.9},
                     "within_coset": {"mode": "log_uniform", "seed": 3}},
             "members": [{"family": "U1", "amplitude": 0.7, "offset": 0.2},
                         {"family": "U2", "amplitude": 0.5, "offset": -0.1}],
             "coefficients": [1.0, -0.5],
             "p": 2.7, "range": [-12, 12], "tol": 1e-10, "ball_radius": 6,
             "seed": 7})";
  std::ofstream(dir / "seq.json")
      << R"({"window": {"from": 0, "values": [1.0]},
             "tail_left": {"base": 1.0, "ratio": 0.5},
             "tail_right": {"base": 1.0, "ratio": 0.5}})";

  const std::vector<std::pair<std::string, std::string>> runs = {
      {"verify-t2 --config " + (dir / "t2.json").string(), "t2"},
      {"verify-t4 --config " + (dir / "t4.json").string(), "t4"},
      {"family --family U2 --amplitude 1.25 --offset -0.5 --seq " +
           (dir / "seq.json").string() + " --range -20:20",
       "family"},
  };
  for (const auto& [args, tag] : runs) {
    const fs::path first = dir / (tag + "_a.csv");
    const fs::path second = dir / (tag + "_b.csv");
    if (run_cli(args + " --out " + first.string()) != 0 ||
        run_cli(args + " --out " + second.string()) != 0) {
      return Outcome{false, tag + " run failed"};
    }
    const std::string a = slurp(first);
    if (a.empty() || a != slurp(second)) {
      return Outcome{false, tag + " output not byte-identical"};
    }
  }
  return Outcome{true, "3 commands, repeated runs byte-identical"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_binary = argv[1];

  const std::vector<std::pair<std::string, CheckFn>> criteria = {
      {"group algebra randomized suite", group_algebra_suite},
      {"coset neighbor profile (1, k-1, 1)", neighbor_profile_suite},
      {"finite-index solves collapse to constants", constancy_suite},
      {"family members solve the difference equation", family_suite},
      {"linear combinations stay p-harmonic", combination_suite},
      {"independent oracles agree", oracle_suite},
      {"seeded CLI runs are byte-identical", determinism_suite},
  };
  const std::vector<double> budgets = {10.0, 10.0, 120.0, 5.0, 60.0, 120.0,
                                       60.0};

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    const bool in_budget = elapsed <= budgets[i];
    const bool pass = outcome.pass && in_budget;
    if (!pass) ++failures;
    std::printf("criterion %zu (%s): %s  [%s; %.1fs%s]\n", i + 1,
                criteria[i].first.c_str(), pass ? "PASS" : "FAIL",
                outcome.detail.c_str(), elapsed,
                in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
