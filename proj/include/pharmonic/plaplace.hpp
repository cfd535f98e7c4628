#ifndef PHARMONIC_PLAPLACE_HPP
#define PHARMONIC_PLAPLACE_HPP

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pharmonic/word.hpp"

namespace pharmonic {

// supported exponent range; near p=1 the scalar solves degenerate
inline constexpr double p_min = 1.1;
inline constexpr double p_max = 10.0;

void check_p(double p);

// odd power map |t|^{p-2} t, with the value 0 pinned at t = 0
double phi_p(double t, double p);

// derivative (p-1)|t|^{p-2}; +inf collapses to a large finite value
double phi_p_prime(double t, double p);

// Symmetric positive edge weights r(x, y).  The underlying rule is always
// evaluated on the canonically ordered pair, so symmetry holds by
// construction; values are checked to be positive and finite.
class ResistanceAssignment {
 public:
  using Rule = std::function<double(const ReducedWord&, const ReducedWord&)>;

  explicit ResistanceAssignment(Rule rule) : rule_(std::move(rule)) {}

  static ResistanceAssignment constant(double r);

  double operator()(const ReducedWord& x, const ReducedWord& y) const;

 private:
  Rule rule_;
};

// Real values on a finite set of vertices.
class VertexFunction {
 public:
  VertexFunction() = default;

  double at(const ReducedWord& x) const;
  bool contains(const ReducedWord& x) const {
    return values_.find(x) != values_.end();
  }
  void set(const ReducedWord& x, double v) { values_[x] = v; }
  std::size_t size() const { return values_.size(); }

  const std::unordered_map<ReducedWord, double, WordHash>& values() const {
    return values_;
  }

 private:
  std::unordered_map<ReducedWord, double, WordHash> values_;
};

// rule form of a vertex function, e.g. a subgroup-periodic lift
using VertexRule = std::function<double(const ReducedWord&)>;

VertexFunction restrict_to(const VertexRule& rule,
                           const std::vector<ReducedWord>& vertices);

// resistive difference quotient (u(y) - u(x)) / r(x, y) on an edge
double gradient(const VertexFunction& u, const ReducedWord& x,
                const ReducedWord& y, const ResistanceAssignment& r);

// sum of phi_p over the resistive gradients to all k+1 neighbors
double p_laplacian(const VertexFunction& u, const ReducedWord& x,
                   const ResistanceAssignment& r, double p);

// sum over region edges of r^{1-p} |u(y) - u(x)|^p; the convex potential
// whose interior stationarity is exactly the p-Laplace equation
double energy(const VertexFunction& u, const Ball& region,
              const ResistanceAssignment& r, double p);

struct DirichletOptions {
  int max_sweeps = 100000;
  // initial interior values; vertices missing here start at the boundary mean
  std::optional<VertexFunction> start;
};

struct DirichletResult {
  VertexFunction u;
  bool converged = false;
  int sweeps = 0;
  double residual = 0.0;
};

// Minimizes the p-energy over interior values with the boundary fixed, by
// cyclic coordinate descent; each vertex update solves its monotone scalar
// equation to machine precision.  Converged means every interior vertex has
// |p_laplacian| <= tol.  Non-convergence is reported, not thrown.
DirichletResult dirichlet_solve(const Ball& region,
                                const VertexFunction& boundary,
                                const ResistanceAssignment& r, double p,
                                double tol,
                                const DirichletOptions& options = {});

struct HarmonicityReport {
  bool pass = false;
  double max_residual = 0.0;
  std::optional<ReducedWord> worst_vertex;
};

HarmonicityReport is_p_harmonic(const VertexFunction& u,
                                const std::vector<ReducedWord>& interior,
                                const ResistanceAssignment& r, double p,
                                double tol);

namespace detail {

// Coordinate descent for sums of edge terms w_e |u_a - u_b|^p over a finite
// weighted graph with some vertices fixed.  Shared by the ball Dirichlet
// solver and the coset-profile solver.
struct CdProblem {
  // per vertex: (neighbor index, edge weight w = multiplicity * r^{1-p})
  std::vector<std::vector<std::pair<int, double>>> adjacency;
  std::vector<char> fixed;
  std::vector<double> values;
  // residuals are measured on value_offset + values (gauge shift)
  double value_offset = 0.0;
  // caller-supplied residual in its own contract formula
  std::function<double(const std::vector<double>&)> residual_max;
  // optional extra convergence requirement on the shifted values
  std::function<bool(const std::vector<double>&)> also_require;
  // Joint translation moves along free-free edges after each vertex pass.
  // Below p = 2 the edge energy has unbounded curvature at zero difference,
  // which makes equal-valued neighbor pairs advance only sublinearly under
  // per-vertex moves; sliding both endpoints together restores a geometric
  // rate.  Descent property is unchanged (every move is an exact line
  // minimization).
  bool pair_moves = false;
};

struct CdResult {
  bool converged = false;
  int sweeps = 0;
  double residual = 0.0;
};

CdResult coordinate_descent(CdProblem& problem, double p, double tol,
                            int max_sweeps);

// one summand of a line-restricted stationarity equation
struct LineTerm {
  double value;
  double scale;  // > 0
  double weight;
};

// root of h -> sum_i w_i phi_p(v_i - m_i h); terms must be nonempty
double stationary_root(const std::vector<LineTerm>& terms, double p);

// root of t -> sum_i w_i phi_p(v_i - t); terms must be nonempty
double scalar_stationary_point(
    const std::vector<std::pair<double, double>>& value_weight, double p);

}  // namespace detail

}  // namespace pharmonic

#endif  // PHARMONIC_PLAPLACE_HPP
