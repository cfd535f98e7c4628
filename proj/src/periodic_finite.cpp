#include "pharmonic/periodic_finite.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pharmonic/errors.hpp"

namespace pharmonic {

namespace {

void check_profile(const PeriodicProfile& profile, const QuotientGraph& q) {
  if (static_cast<int>(profile.size()) != q.num_cosets()) {
    throw ValidationError("profile length " + std::to_string(profile.size()) +
                          " does not match the coset count " +
                          std::to_string(q.num_cosets()));
  }
}

}  // namespace

CosetResistances::CosetResistances(int parity_count)
    : parity_count_(parity_count),
      r_(static_cast<std::size_t>(1) << (2 * parity_count),
         std::numeric_limits<double>::quiet_NaN()) {
  if (parity_count < 0 || parity_count > 20) {
    throw ValidationError("parity count out of range");
  }
}

void CosetResistances::set(int i, int j, double value) {
  const int n = 1 << parity_count_;
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw ValidationError("coset id out of range");
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError("coset resistance must be positive and finite");
  }
  r_[static_cast<std::size_t>(i) * n + j] = value;
  r_[static_cast<std::size_t>(j) * n + i] = value;
}

double CosetResistances::at(int i, int j) const {
  const int n = 1 << parity_count_;
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw ValidationError("coset id out of range");
  }
  const double v = r_[static_cast<std::size_t>(i) * n + j];
  if (std::isnan(v)) {
    throw ValidationError("coset resistance undefined for pair (" +
                          std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  return v;
}

bool CosetResistances::defined(int i, int j) const {
  const int n = 1 << parity_count_;
  if (i < 0 || i >= n || j < 0 || j >= n) return false;
  return !std::isnan(r_[static_cast<std::size_t>(i) * n + j]);
}

CosetResistances CosetResistances::constant(const QuotientGraph& q,
                                            double value) {
  CosetResistances out(q.parity_count);
  for (int i = 0; i < q.num_cosets(); ++i) {
    for (int j = i; j < q.num_cosets(); ++j) {
      if (q.multiplicity(i, j) > 0) out.set(i, j, value);
    }
  }
  return out;
}

CosetResistances CosetResistances::draw_log_uniform(const QuotientGraph& q,
                                                    Rng& rng, double lo,
                                                    double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw ValidationError("bad log-uniform bounds");
  }
  CosetResistances out(q.parity_count);
  for (int i = 0; i < q.num_cosets(); ++i) {
    for (int j = i; j < q.num_cosets(); ++j) {
      if (q.multiplicity(i, j) > 0) out.set(i, j, rng.log_uniform(lo, hi));
    }
  }
  return out;
}

void CosetResistances::validate_cover(const QuotientGraph& q) const {
  if (parity_count_ != q.parity_count) {
    throw ValidationError("coset resistances sized for a different quotient");
  }
  for (int i = 0; i < q.num_cosets(); ++i) {
    for (int j = i; j < q.num_cosets(); ++j) {
      if (q.multiplicity(i, j) > 0 && !defined(i, j)) {
        throw ValidationError("coset resistance missing on a quotient edge");
      }
    }
  }
}

VertexRule lift(const PeriodicProfile& profile, const FiniteIndexSpec& spec) {
  return lift(profile, quotient_graph(spec));
}

VertexRule lift(const PeriodicProfile& profile, const QuotientGraph& q) {
  check_profile(profile, q);
  return [profile, q](const ReducedWord& x) {
    return profile[coset_of(x, q)];
  };
}

ResistanceAssignment lift_resistances(const QuotientGraph& q,
                                      const CosetResistances& r) {
  r.validate_cover(q);
  return ResistanceAssignment(
      [q, r](const ReducedWord& x, const ReducedWord& y) {
        return r.at(coset_of(x, q), coset_of(y, q));
      });
}

std::vector<double> residual_system(const PeriodicProfile& profile,
                                    const QuotientGraph& q,
                                    const CosetResistances& r, double p) {
  check_p(p);
  check_profile(profile, q);
  r.validate_cover(q);
  const int n = q.num_cosets();
  std::vector<double> residual(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;  // zero difference; kept out of the sum
      const int mult = q.multiplicity(i, j);
      if (mult == 0) continue;
      sum += static_cast<double>(mult) * phi_p(profile[j] - profile[i], p) /
             std::pow(r.at(i, j), p - 1.0);
    }
    residual[i] = sum;
  }
  return residual;
}

namespace {

double profile_spread(const std::vector<double>& u) {
  double lo = u[0];
  double hi = u[0];
  for (double v : u) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

}  // namespace

PeriodicSolveResult solve_periodic(const QuotientGraph& q,
                                   const CosetResistances& r, double p,
                                   const PeriodicProfile& start, double tol,
                                   int max_sweeps, double spread_tol) {
  check_p(p);
  check_profile(start, q);
  r.validate_cover(q);
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (!(spread_tol > 0.0)) throw ValidationError("spread tolerance must be positive");

  const int n = q.num_cosets();
  const double anchor = start[0];

  detail::CdProblem problem;
  problem.fixed.assign(n, 0);
  problem.fixed[0] = 1;
  // Work relative to the pinned value: the minimizer of the gauge-fixed
  // energy is the all-equal profile, which the shifted variables can resolve
  // down to zero, far below one ulp of the anchor itself.
  problem.value_offset = anchor;
  problem.values.assign(n, 0.0);
  for (int i = 1; i < n; ++i) {
    problem.values[i] = start[i] - anchor;
  }

  problem.adjacency.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const int mult = q.multiplicity(i, j);
      if (mult == 0) continue;
      const double w =
          static_cast<double>(mult) * std::pow(r.at(i, j), 1.0 - p);
      problem.adjacency[i].emplace_back(j, w);
    }
  }
  problem.residual_max = [&q, &r, p](const std::vector<double>& u) {
    const std::vector<double> res = residual_system(u, q, r, p);
    double worst = 0.0;
    for (double v : res) worst = std::max(worst, std::fabs(v));
    return worst;
  };
  if (std::isfinite(spread_tol)) {
    problem.also_require = [spread_tol](const std::vector<double>& u) {
      return profile_spread(u) <= spread_tol;
    };
  }

  detail::CdResult cd = detail::coordinate_descent(problem, p, tol, max_sweeps);

  PeriodicSolveResult out;
  out.converged = cd.converged;
  out.sweeps = cd.sweeps;
  out.residual = cd.residual;
  out.profile.assign(n, anchor);
  for (int i = 1; i < n; ++i) {
    out.profile[i] = anchor + problem.values[i];
  }
  out.spread = profile_spread(out.profile);
  return out;
}

MaxPrincipleReport max_principle_check(const PeriodicProfile& profile,
                                       const QuotientGraph& q,
                                       const CosetResistances& r, double p) {
  check_p(p);
  check_profile(profile, q);
  const int n = q.num_cosets();
  double top = profile[0];
  double bottom = profile[0];
  for (double v : profile) {
    top = std::max(top, v);
    bottom = std::min(bottom, v);
  }

  MaxPrincipleReport report;
  report.constant_profile = (top == bottom);
  const std::vector<double> residual = residual_system(profile, q, r, p);

  bool negative_somewhere = false;
  bool strict_ok = true;
  for (int i = 0; i < n; ++i) {
    if (profile[i] != top) continue;
    MaxPrincipleEntry entry;
    entry.coset = i;
    entry.residual = residual[i];
    for (int j : q.neighbor_cosets(i)) {
      if (profile[j] < top) {
        entry.has_smaller_neighbor = true;
        break;
      }
    }
    if (entry.has_smaller_neighbor) {
      if (entry.residual < 0.0) {
        negative_somewhere = true;
      } else {
        strict_ok = false;
      }
    }
    report.argmax.push_back(entry);
  }

  if (report.constant_profile) {
    report.pass = true;
    for (const auto& entry : report.argmax) {
      if (entry.residual != 0.0) report.pass = false;
    }
  } else {
    report.pass = strict_ok && negative_somewhere;
  }
  return report;
}

}  // namespace pharmonic
