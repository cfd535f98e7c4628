#ifndef PHARMONIC_PERIODIC_FINITE_HPP
#define PHARMONIC_PERIODIC_FINITE_HPP

#include <limits>
#include <vector>

#include "pharmonic/plaplace.hpp"
#include "pharmonic/rng.hpp"
#include "pharmonic/subgroup.hpp"
#include "pharmonic/word.hpp"

namespace pharmonic {

// one real per coset, indexed by coset id
using PeriodicProfile = std::vector<double>;

// Symmetric positive resistances per coset pair, defined exactly on the
// quotient edges (pairs with positive multiplicity, including same-coset
// loops, which never enter any sum because the value difference vanishes).
class CosetResistances {
 public:
  explicit CosetResistances(int parity_count);

  void set(int i, int j, double value);
  double at(int i, int j) const;
  bool defined(int i, int j) const;
  int parity_count() const { return parity_count_; }

  // value 1 on all quotient edges
  static CosetResistances constant(const QuotientGraph& q, double value);
  // log-uniform draws per quotient edge
  static CosetResistances draw_log_uniform(const QuotientGraph& q, Rng& rng,
                                           double lo = 0.1, double hi = 10.0);

  // throws unless every positive-multiplicity pair has a value
  void validate_cover(const QuotientGraph& q) const;

 private:
  int parity_count_;
  std::vector<double> r_;  // (2^m)^2 entries, NaN when undefined
};

// vertex rule u(x) = profile[parity label of x]
VertexRule lift(const PeriodicProfile& profile, const FiniteIndexSpec& spec);
VertexRule lift(const PeriodicProfile& profile, const QuotientGraph& q);

// vertex-level resistances induced by coset-pair resistances
ResistanceAssignment lift_resistances(const QuotientGraph& q,
                                      const CosetResistances& r);

// Component i = sum over cosets j with multiplicity(i,j) > 0, j != i, of
// multiplicity(i,j) * phi_p(u_j - u_i) / r_ij^{p-1}; equals the vertex-level
// p-Laplacian of the lift at any vertex of coset i.
std::vector<double> residual_system(const PeriodicProfile& profile,
                                    const QuotientGraph& q,
                                    const CosetResistances& r, double p);

struct PeriodicSolveResult {
  PeriodicProfile profile;
  bool converged = false;
  int sweeps = 0;
  double residual = 0.0;  // max absolute residual_system component
  double spread = 0.0;    // max - min over the profile
};

// Coordinate descent on the quotient energy with the first coordinate pinned
// to start[0] (the energy is invariant under adding constants, so the gauge
// must be fixed for the minimizer to be unique).  Convergence requires
// residual <= tol; when spread_tol is finite it additionally requires
// max - min <= spread_tol, which pushes the descent all the way into the
// constant solution for p > 2, where a small residual alone still allows
// a spread of order tol^{1/(p-1)}.
PeriodicSolveResult solve_periodic(
    const QuotientGraph& q, const CosetResistances& r, double p,
    const PeriodicProfile& start, double tol, int max_sweeps = 100000,
    double spread_tol = std::numeric_limits<double>::infinity());

struct MaxPrincipleEntry {
  int coset = 0;
  double residual = 0.0;
  bool has_smaller_neighbor = false;
};

struct MaxPrincipleReport {
  bool constant_profile = false;
  bool pass = false;
  std::vector<MaxPrincipleEntry> argmax;  // cosets attaining the maximum
};

// At a maximal coset every difference u_j - u_i is <= 0, so the residual
// there cannot be positive; whenever the profile is non-constant, some
// maximal coset borders a strictly smaller one and its residual is strictly
// negative.  That sign report is what rules out non-constant solutions.
MaxPrincipleReport max_principle_check(const PeriodicProfile& profile,
                                       const QuotientGraph& q,
                                       const CosetResistances& r, double p);

}  // namespace pharmonic

#endif  // PHARMONIC_PERIODIC_FINITE_HPP
