#ifndef PHARMONIC_PERIODIC_INFINITE_HPP
#define PHARMONIC_PERIODIC_INFINITE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pharmonic/plaplace.hpp"
#include "pharmonic/subgroup.hpp"
#include "pharmonic/word.hpp"

namespace pharmonic {

// geometric decay r = base * ratio^distance beyond the explicit window
struct GeometricTail {
  double base = 1.0;
  double ratio = 0.5;

  bool operator==(const GeometricTail&) const = default;
};

// Resistance for edges joining two vertices of the same integer coset.  Such
// edges never contribute to coset-constant functions (zero difference), so
// any positive rule is admissible; the randomized mode exercises exactly that
// freedom.  Deterministic function of the unordered vertex pair.
struct WithinCosetRule {
  enum class Mode { constant, log_uniform };

  Mode mode = Mode::constant;
  double value = 1.0;
  std::uint64_t seed = 0;
  double lo = 0.1;
  double hi = 10.0;

  static WithinCosetRule log_uniform(std::uint64_t seed, double lo = 0.1,
                                     double hi = 10.0);

  double operator()(const ReducedWord& x, const ReducedWord& y) const;

  bool operator==(const WithinCosetRule&) const = default;
};

// The chain resistances r_{n,n+1} over all integers n: explicit positive
// window values on [window_from, window_from + size - 1] and geometric tails
// on both sides, so the full series converges and partial sums have closed
// forms (no truncation error anywhere).
class ResistanceSequence {
 public:
  ResistanceSequence(long window_from, std::vector<double> window,
                     GeometricTail left, GeometricTail right,
                     WithinCosetRule within = {});

  double at(long n) const;  // r_{n,n+1}

  // sum over s <= n-1 of r_{s,s+1}; strictly increasing in n
  double lower_tail_sum(long n) const;
  // sum over s >= n of r_{s,s+1}; strictly decreasing in n
  double upper_tail_sum(long n) const;
  double total() const;

  long window_from() const { return window_from_; }
  long window_to() const {
    return window_from_ + static_cast<long>(window_.size()) - 1;
  }
  const std::vector<double>& window() const { return window_; }
  const GeometricTail& left() const { return left_; }
  const GeometricTail& right() const { return right_; }
  const WithinCosetRule& within_coset() const { return within_; }

  bool operator==(const ResistanceSequence&) const = default;

 private:
  long window_from_;
  std::vector<double> window_;
  GeometricTail left_;
  GeometricTail right_;
  WithinCosetRule within_;
};

enum class Family { U1, U2 };

// One coset-indexed solution of the two-sided difference equation:
// U1 values rise by amplitude * r_{n,n+1} per step, U2 values fall by it.
struct FamilyMember {
  Family family = Family::U1;
  double amplitude = 0.0;  // nonnegative; 0 degenerates to the constant offset
  double offset = 0.0;
  ResistanceSequence sequence;
};

void check_member(const FamilyMember& m);

// U1: offset + amplitude * lower_tail_sum(n); U2 uses the upper tail sum
double evaluate(const FamilyMember& m, long n);

// evaluate at the coset index of the word
double evaluate_at_vertex(const FamilyMember& m, const ReducedWord& x,
                          const InfiniteIndexPair& pair);

// signed step u_{n+1} - u_n in closed form
double member_increment(const FamilyMember& m, long n);

using IndexProfile = std::function<double(long)>;

// phi_p(u_{n+1} - u_n) / r_{n,n+1}^{p-1}; constant in n exactly for solutions
double flux(const IndexProfile& u, const ResistanceSequence& seq, double p,
            long n);
double flux(const FamilyMember& m, double p, long n);

// residual of the difference equation at n, from literal profile values
double difference_residual(const IndexProfile& u, const ResistanceSequence& seq,
                           double p, long n);
// same residual with the member's closed-form increments (offset-free, so
// immune to the cancellation of near-equal large values)
double member_difference_residual(const FamilyMember& m, double p, long n);

// linear combination sum t_i * v_i of members over one shared sequence
struct Combination {
  std::vector<FamilyMember> members;
  std::vector<double> coefficients;  // all nonzero
};

class CombinedProfile {
 public:
  double at(long n) const;
  // K * r_{n,n+1} where K = sum_{U1} t_i A_i - sum_{U2} t_i A_i
  double increment(long n) const;
  double effective_amplitude() const { return k_; }
  const ResistanceSequence& sequence() const { return members_.front().sequence; }
  IndexProfile profile() const;

  // the combination collapses to a single member (or a constant when the
  // effective amplitude vanishes)
  FamilyMember as_member() const;

 private:
  friend CombinedProfile combine(const Combination& c);
  std::vector<FamilyMember> members_;
  std::vector<double> coefficients_;
  double k_ = 0.0;
};

// validates nonzero coefficients and a single shared sequence
CombinedProfile combine(const Combination& c);

double combined_difference_residual(const CombinedProfile& v, double p, long n);

// vertex-level resistances: chain values across adjacent cosets, the
// within-coset rule inside a coset
ResistanceAssignment sequence_resistances(const InfiniteIndexPair& pair,
                                          const ResistanceSequence& seq);

struct VertexCheck {
  InfiniteIndexPair pair;
  int radius = 6;
  std::optional<ReducedWord> center;  // identity when unset
  std::uint64_t vertex_cap = default_vertex_cap;
};

struct CombinationReport {
  bool pass = false;
  double max_residual = 0.0;
  long worst_index = 0;
  std::optional<HarmonicityReport> vertex_report;
};

// Checks the difference-equation residual of the combination at every index
// in [n_lo, n_hi] against tol, and optionally cross-checks the lifted values
// on a tree ball through the vertex-level p-Laplacian.
CombinationReport verify_combination(const Combination& c, double p, long n_lo,
                                     long n_hi, double tol,
                                     const std::optional<VertexCheck>& check =
                                         std::nullopt);

}  // namespace pharmonic

#endif  // PHARMONIC_PERIODIC_INFINITE_HPP
