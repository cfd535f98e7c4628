#include "pharmonic/plaplace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pharmonic/errors.hpp"

namespace pharmonic {

void check_p(double p) {
  if (!(p >= p_min && p <= p_max)) {
    throw ValidationError("exponent p = " + std::to_string(p) +
                          " outside [" + std::to_string(p_min) + ", " +
                          std::to_string(p_max) + "]");
  }
}

double phi_p(double t, double p) {
  check_p(p);
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::fabs(t), p - 1.0), t);
}

double phi_p_prime(double t, double p) {
  check_p(p);
  if (t == 0.0) {
    if (p == 2.0) return 1.0;
    return p < 2.0 ? 1e300 : 0.0;
  }
  const double d = (p - 1.0) * std::pow(std::fabs(t), p - 2.0);
  if (!std::isfinite(d)) return 1e300;
  return d;
}

ResistanceAssignment ResistanceAssignment::constant(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw ValidationError("resistance must be positive and finite");
  }
  return ResistanceAssignment(
      [r](const ReducedWord&, const ReducedWord&) { return r; });
}

double ResistanceAssignment::operator()(const ReducedWord& x,
                                        const ReducedWord& y) const {
  const double value = y < x ? rule_(y, x) : rule_(x, y);
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError("resistance rule produced a non-positive value");
  }
  return value;
}

double VertexFunction::at(const ReducedWord& x) const {
  auto it = values_.find(x);
  if (it == values_.end()) {
    throw ValidationError("vertex function has no value at the queried word");
  }
  return it->second;
}

VertexFunction restrict_to(const VertexRule& rule,
                           const std::vector<ReducedWord>& vertices) {
  VertexFunction out;
  for (const ReducedWord& v : vertices) {
    out.set(v, rule(v));
  }
  return out;
}

double gradient(const VertexFunction& u, const ReducedWord& x,
                const ReducedWord& y, const ResistanceAssignment& r) {
  if (distance(x, y) != 1) {
    throw ValidationError("gradient requires an adjacent vertex pair");
  }
  return (u.at(y) - u.at(x)) / r(x, y);
}

double p_laplacian(const VertexFunction& u, const ReducedWord& x,
                   const ResistanceAssignment& r, double p) {
  check_p(p);
  const double ux = u.at(x);
  double sum = 0.0;
  for (const ReducedWord& y : neighbors(x)) {
    sum += phi_p((u.at(y) - ux) / r(x, y), p);
  }
  return sum;
}

double energy(const VertexFunction& u, const Ball& region,
              const ResistanceAssignment& r, double p) {
  check_p(p);
  double total = 0.0;
  for (const auto& [a, b] : region.edges) {
    const ReducedWord& x = region.vertices[a];
    const ReducedWord& y = region.vertices[b];
    const double diff = u.at(y) - u.at(x);
    total += std::pow(r(x, y), 1.0 - p) * std::pow(std::fabs(diff), p);
  }
  return total;
}

namespace detail {

double stationary_root(const std::vector<LineTerm>& terms, double p) {
  double lo = terms.front().value / terms.front().scale;
  double hi = lo;
  for (const auto& term : terms) {
    const double zero = term.value / term.scale;
    lo = std::min(lo, zero);
    hi = std::max(hi, zero);
  }
  if (lo == hi) return lo;

  // G(h) = sum w phi_p(v - m h) is strictly decreasing with
  // G(lo) >= 0 >= G(hi); Newton steps inside a maintained bracket,
  // bisection whenever they stall.
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    double g = 0.0;
    double slope = 0.0;
    for (const auto& term : terms) {
      const double d = term.value - term.scale * t;
      if (d == 0.0) {
        slope += term.weight * term.scale * phi_p_prime(0.0, p);
        continue;
      }
      const double a = std::pow(std::fabs(d), p - 2.0);
      g += term.weight * a * d;
      slope += term.weight * term.scale * (p - 1.0) * a;
    }
    if (g == 0.0) return t;
    if (g > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    const double width = hi - lo;
    if (width <= std::numeric_limits<double>::epsilon() *
                     (std::fabs(lo) + std::fabs(hi)) +
                 1e-300) {
      break;
    }
    double next = t;
    if (std::isfinite(slope) && slope > 0.0) {
      next = t + g / slope;
    }
    if (!(next > lo && next < hi) || next == t || !std::isfinite(next)) {
      next = 0.5 * (lo + hi);
      if (next == t) break;
    }
    t = next;
  }
  return t;
}

double scalar_stationary_point(
    const std::vector<std::pair<double, double>>& value_weight, double p) {
  std::vector<LineTerm> terms;
  terms.reserve(value_weight.size());
  for (const auto& [v, w] : value_weight) {
    terms.push_back(LineTerm{v, 1.0, w});
  }
  return stationary_root(terms, p);
}

CdResult coordinate_descent(CdProblem& problem, double p, double tol,
                            int max_sweeps) {
  check_p(p);
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const int n = static_cast<int>(problem.values.size());
  std::vector<int> free_vertices;
  for (int i = 0; i < n; ++i) {
    if (!problem.fixed[i]) free_vertices.push_back(i);
  }

  struct FreeEdge {
    int i;
    int j;
    double weight;
  };
  std::vector<FreeEdge> free_edges;
  if (problem.pair_moves) {
    for (int i = 0; i < n; ++i) {
      if (problem.fixed[i]) continue;
      for (const auto& [j, w] : problem.adjacency[i]) {
        if (j > i && !problem.fixed[j]) free_edges.push_back({i, j, w});
      }
    }
  }

  std::vector<LineTerm> terms;
  std::vector<double> shifted(n);
  const auto update_vertex = [&](int i) {
    terms.clear();
    for (const auto& [j, w] : problem.adjacency[i]) {
      terms.push_back({problem.values[j], 1.0, w});
    }
    if (!terms.empty()) {
      problem.values[i] = stationary_root(terms, p);
    }
  };
  // exact line minimization along (+1, +1): both endpoints shift together,
  // the shared edge term stays constant
  const auto slide_edge = [&](const FreeEdge& e) {
    terms.clear();
    for (const auto& [z, w] : problem.adjacency[e.i]) {
      if (z != e.j) {
        terms.push_back({problem.values[z] - problem.values[e.i], 1.0, w});
      }
    }
    for (const auto& [z, w] : problem.adjacency[e.j]) {
      if (z != e.i) {
        terms.push_back({problem.values[z] - problem.values[e.j], 1.0, w});
      }
    }
    if (terms.empty()) return;
    const double shift = stationary_root(terms, p);
    problem.values[e.i] += shift;
    problem.values[e.j] += shift;
  };
  // exact line minimization along (+1, -1): resolves the antisymmetric mode
  // that per-vertex moves leave deadlocked when the edge difference sits at
  // the p < 2 curvature singularity
  const auto twist_edge = [&](const FreeEdge& e) {
    terms.clear();
    const double diff = problem.values[e.j] - problem.values[e.i];
    terms.push_back({diff, 2.0, 2.0 * e.weight});
    for (const auto& [z, w] : problem.adjacency[e.i]) {
      if (z != e.j) {
        terms.push_back({problem.values[z] - problem.values[e.i], 1.0, w});
      }
    }
    for (const auto& [z, w] : problem.adjacency[e.j]) {
      if (z != e.i) {
        // phi_p is odd, so the sign flip folds into the term value
        terms.push_back({problem.values[e.j] - problem.values[z], 1.0, w});
      }
    }
    const double shift = stationary_root(terms, p);
    problem.values[e.i] += shift;
    problem.values[e.j] -= shift;
  };
  const auto measure = [&](CdResult& result) {
    for (int i = 0; i < n; ++i) {
      shifted[i] = problem.value_offset + problem.values[i];
    }
    result.residual = problem.residual_max(shifted);
    return result.residual <= tol &&
           (!problem.also_require || problem.also_require(shifted));
  };

  CdResult result;
  if (measure(result)) {
    result.converged = true;
    return result;
  }
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (auto it = free_vertices.begin(); it != free_vertices.end(); ++it) {
      update_vertex(*it);
    }
    for (const FreeEdge& e : free_edges) {
      slide_edge(e);
      twist_edge(e);
    }
    for (auto it = free_vertices.rbegin(); it != free_vertices.rend(); ++it) {
      update_vertex(*it);
    }
    result.sweeps = sweep;
    if (measure(result)) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace detail

DirichletResult dirichlet_solve(const Ball& region,
                                const VertexFunction& boundary,
                                const ResistanceAssignment& r, double p,
                                double tol, const DirichletOptions& options) {
  check_p(p);
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (region.boundary.empty()) {
    throw ValidationError("region has no boundary vertices");
  }

  const int n = static_cast<int>(region.vertices.size());
  std::vector<char> fixed(n, 0);
  double boundary_sum = 0.0;
  for (int i : region.boundary) {
    const ReducedWord& v = region.vertices[i];
    if (!boundary.contains(v)) {
      throw ValidationError("boundary value missing at a boundary vertex");
    }
    fixed[i] = 1;
    boundary_sum += boundary.at(v);
  }
  const double boundary_mean =
      boundary_sum / static_cast<double>(region.boundary.size());

  detail::CdProblem problem;
  problem.pair_moves = true;
  problem.fixed = fixed;
  problem.values.assign(n, boundary_mean);
  for (int i : region.boundary) {
    problem.values[i] = boundary.at(region.vertices[i]);
  }
  if (options.start.has_value()) {
    for (int i = 0; i < n; ++i) {
      if (!fixed[i] && options.start->contains(region.vertices[i])) {
        problem.values[i] = options.start->at(region.vertices[i]);
      }
    }
  }

  // edge weights for the updates, raw resistances for the residual
  problem.adjacency.assign(n, {});
  std::vector<std::vector<std::pair<int, double>>> resistance(n);
  for (const auto& [a, b] : region.edges) {
    const double res = r(region.vertices[a], region.vertices[b]);
    const double w = std::pow(res, 1.0 - p);
    problem.adjacency[a].emplace_back(b, w);
    problem.adjacency[b].emplace_back(a, w);
    resistance[a].emplace_back(b, res);
    resistance[b].emplace_back(a, res);
  }

  std::vector<int> interior;
  for (int i = 0; i < n; ++i) {
    if (!fixed[i]) interior.push_back(i);
  }
  problem.residual_max = [&resistance, &interior, p](
                             const std::vector<double>& u) {
    double worst = 0.0;
    for (int i : interior) {
      double sum = 0.0;
      for (const auto& [j, res] : resistance[i]) {
        sum += phi_p((u[j] - u[i]) / res, p);
      }
      worst = std::max(worst, std::fabs(sum));
    }
    return worst;
  };

  detail::CdResult cd =
      detail::coordinate_descent(problem, p, tol, options.max_sweeps);

  DirichletResult out;
  out.converged = cd.converged;
  out.sweeps = cd.sweeps;
  out.residual = cd.residual;
  for (int i = 0; i < n; ++i) {
    out.u.set(region.vertices[i], problem.values[i]);
  }
  return out;
}

HarmonicityReport is_p_harmonic(const VertexFunction& u,
                                const std::vector<ReducedWord>& interior,
                                const ResistanceAssignment& r, double p,
                                double tol) {
  check_p(p);
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  HarmonicityReport report;
  for (const ReducedWord& x : interior) {
    const double res = std::fabs(p_laplacian(u, x, r, p));
    if (res > report.max_residual) {
      report.max_residual = res;
      report.worst_vertex = x;
    }
  }
  report.pass = report.max_residual <= tol;
  return report;
}

}  // namespace pharmonic
