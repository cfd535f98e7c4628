#include "pharmonic/periodic_infinite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pharmonic/errors.hpp"
#include "pharmonic/rng.hpp"

namespace pharmonic {

WithinCosetRule WithinCosetRule::log_uniform(std::uint64_t seed, double lo,
                                             double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw ValidationError("bad log-uniform bounds for within-coset rule");
  }
  WithinCosetRule rule;
  rule.mode = Mode::log_uniform;
  rule.seed = seed;
  rule.lo = lo;
  rule.hi = hi;
  return rule;
}

double WithinCosetRule::operator()(const ReducedWord& x,
                                   const ReducedWord& y) const {
  if (mode == Mode::constant) return value;
  const ReducedWord& a = y < x ? y : x;
  const ReducedWord& b = y < x ? x : y;
  std::uint64_t mixed = splitmix64(seed ^ 0x517cc1b727220a95ULL);
  mixed = splitmix64(mixed ^ hash_value(a));
  mixed = splitmix64(mixed ^ hash_value(b));
  const double u = static_cast<double>(mixed >> 11) * 0x1.0p-53;
  return lo * std::pow(hi / lo, u);
}

ResistanceSequence::ResistanceSequence(long window_from,
                                       std::vector<double> window,
                                       GeometricTail left, GeometricTail right,
                                       WithinCosetRule within)
    : window_from_(window_from),
      window_(std::move(window)),
      left_(left),
      right_(right),
      within_(std::move(within)) {
  if (window_.empty()) {
    throw ValidationError("resistance window must be nonempty");
  }
  for (double v : window_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("window resistances must be positive and finite");
    }
  }
  for (const GeometricTail* tail : {&left_, &right_}) {
    if (!(tail->base > 0.0) || !std::isfinite(tail->base)) {
      throw ValidationError("tail base must be positive and finite");
    }
    if (!(tail->ratio > 0.0) || !(tail->ratio < 1.0)) {
      throw ValidationError("tail ratio must lie in (0, 1)");
    }
  }
  if (within_.mode == WithinCosetRule::Mode::constant &&
      (!(within_.value > 0.0) || !std::isfinite(within_.value))) {
    throw ValidationError("within-coset resistance must be positive");
  }
}

double ResistanceSequence::at(long n) const {
  if (n < window_from_) {
    return left_.base *
           std::pow(left_.ratio, static_cast<double>(window_from_ - n));
  }
  if (n > window_to()) {
    return right_.base *
           std::pow(right_.ratio, static_cast<double>(n - window_to()));
  }
  return window_[static_cast<std::size_t>(n - window_from_)];
}

double ResistanceSequence::lower_tail_sum(long n) const {
  const long last = n - 1;  // sum runs over s <= last
  const double ql = left_.ratio;
  if (last < window_from_) {
    // pure left tail: b * sum_{t >= window_from - last} q^t
    return left_.base *
           std::pow(ql, static_cast<double>(window_from_ - last)) /
           (1.0 - ql);
  }
  double sum = left_.base * ql / (1.0 - ql);  // all of s < window_from
  const long stop = std::min(last, window_to());
  for (long s = window_from_; s <= stop; ++s) {
    sum += window_[static_cast<std::size_t>(s - window_from_)];
  }
  if (last > window_to()) {
    const double qr = right_.ratio;
    const double steps = static_cast<double>(last - window_to());
    sum += right_.base * qr * (1.0 - std::pow(qr, steps)) / (1.0 - qr);
  }
  return sum;
}

double ResistanceSequence::upper_tail_sum(long n) const {
  const double qr = right_.ratio;
  if (n > window_to()) {
    return right_.base *
           std::pow(qr, static_cast<double>(n - window_to())) / (1.0 - qr);
  }
  double sum = right_.base * qr / (1.0 - qr);  // all of s > window_to
  const long start = std::max(n, window_from_);
  for (long s = start; s <= window_to(); ++s) {
    sum += window_[static_cast<std::size_t>(s - window_from_)];
  }
  if (n < window_from_) {
    const double ql = left_.ratio;
    const double steps = static_cast<double>(window_from_ - n);
    sum += left_.base * ql * (1.0 - std::pow(ql, steps)) / (1.0 - ql);
  }
  return sum;
}

double ResistanceSequence::total() const {
  double sum = left_.base * left_.ratio / (1.0 - left_.ratio) +
               right_.base * right_.ratio / (1.0 - right_.ratio);
  for (double v : window_) sum += v;
  return sum;
}

void check_member(const FamilyMember& m) {
  if (!(m.amplitude >= 0.0) || !std::isfinite(m.amplitude)) {
    throw ValidationError("family amplitude must be nonnegative and finite");
  }
  if (!std::isfinite(m.offset)) {
    throw ValidationError("family offset must be finite");
  }
}

double evaluate(const FamilyMember& m, long n) {
  check_member(m);
  const double tail = m.family == Family::U1 ? m.sequence.lower_tail_sum(n)
                                             : m.sequence.upper_tail_sum(n);
  return m.offset + m.amplitude * tail;
}

double evaluate_at_vertex(const FamilyMember& m, const ReducedWord& x,
                          const InfiniteIndexPair& pair) {
  return evaluate(m, coset_index(x, pair));
}

double member_increment(const FamilyMember& m, long n) {
  check_member(m);
  const double step = m.amplitude * m.sequence.at(n);
  return m.family == Family::U1 ? step : -step;
}

double flux(const IndexProfile& u, const ResistanceSequence& seq, double p,
            long n) {
  return phi_p(u(n + 1) - u(n), p) / std::pow(seq.at(n), p - 1.0);
}

double flux(const FamilyMember& m, double p, long n) {
  return phi_p(member_increment(m, n), p) / std::pow(m.sequence.at(n), p - 1.0);
}

double difference_residual(const IndexProfile& u, const ResistanceSequence& seq,
                           double p, long n) {
  const double un = u(n);
  return phi_p(u(n + 1) - un, p) / std::pow(seq.at(n), p - 1.0) +
         phi_p(u(n - 1) - un, p) / std::pow(seq.at(n - 1), p - 1.0);
}

double member_difference_residual(const FamilyMember& m, double p, long n) {
  return phi_p(member_increment(m, n), p) / std::pow(m.sequence.at(n), p - 1.0) +
         phi_p(-member_increment(m, n - 1), p) /
             std::pow(m.sequence.at(n - 1), p - 1.0);
}

CombinedProfile combine(const Combination& c) {
  if (c.members.empty()) {
    throw ValidationError("combination needs at least one member");
  }
  if (c.members.size() != c.coefficients.size()) {
    throw ValidationError("combination member and coefficient counts differ");
  }
  for (double t : c.coefficients) {
    if (t == 0.0 || !std::isfinite(t)) {
      throw ValidationError("combination coefficients must be nonzero");
    }
  }
  for (const FamilyMember& m : c.members) {
    check_member(m);
    if (!(m.sequence == c.members.front().sequence)) {
      throw ValidationError(
          "combination members must share one resistance sequence");
    }
  }

  CombinedProfile out;
  out.members_ = c.members;
  out.coefficients_ = c.coefficients;
  out.k_ = 0.0;
  for (std::size_t i = 0; i < c.members.size(); ++i) {
    const double ta = c.coefficients[i] * c.members[i].amplitude;
    out.k_ += c.members[i].family == Family::U1 ? ta : -ta;
  }
  return out;
}

double CombinedProfile::at(long n) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    sum += coefficients_[i] * evaluate(members_[i], n);
  }
  return sum;
}

double CombinedProfile::increment(long n) const {
  return k_ * sequence().at(n);
}

IndexProfile CombinedProfile::profile() const {
  return [copy = *this](long n) { return copy.at(n); };
}

FamilyMember CombinedProfile::as_member() const {
  const double total = sequence().total();
  double base = 0.0;  // offset part plus the collapsed upper-tail constants
  for (std::size_t i = 0; i < members_.size(); ++i) {
    base += coefficients_[i] * members_[i].offset;
    if (members_[i].family == Family::U2) {
      base += coefficients_[i] * members_[i].amplitude * total;
    }
  }
  if (k_ >= 0.0) {
    return FamilyMember{Family::U1, k_, base, sequence()};
  }
  return FamilyMember{Family::U2, -k_, base + k_ * total, sequence()};
}

double combined_difference_residual(const CombinedProfile& v, double p,
                                    long n) {
  const ResistanceSequence& seq = v.sequence();
  return phi_p(v.increment(n), p) / std::pow(seq.at(n), p - 1.0) +
         phi_p(-v.increment(n - 1), p) / std::pow(seq.at(n - 1), p - 1.0);
}

ResistanceAssignment sequence_resistances(const InfiniteIndexPair& pair,
                                          const ResistanceSequence& seq) {
  check_pair(pair);
  return ResistanceAssignment(
      [pair, seq](const ReducedWord& x, const ReducedWord& y) {
        const long nx = coset_index(x, pair);
        const long ny = coset_index(y, pair);
        if (nx == ny) return seq.within_coset()(x, y);
        if (nx + 1 == ny) return seq.at(nx);
        if (ny + 1 == nx) return seq.at(ny);
        throw ValidationError(
            "vertex pair spans non-adjacent integer cosets");
      });
}

CombinationReport verify_combination(const Combination& c, double p, long n_lo,
                                     long n_hi, double tol,
                                     const std::optional<VertexCheck>& check) {
  check_p(p);
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (n_lo > n_hi) throw ValidationError("empty index range");

  const CombinedProfile v = combine(c);
  const IndexProfile u = v.profile();

  CombinationReport report;
  report.worst_index = n_lo;
  for (long n = n_lo; n <= n_hi; ++n) {
    const double res = std::fabs(difference_residual(u, v.sequence(), p, n));
    if (res > report.max_residual) {
      report.max_residual = res;
      report.worst_index = n;
    }
  }
  report.pass = report.max_residual <= tol;

  if (check.has_value()) {
    check_pair(check->pair);
    const ReducedWord center =
        check->center.value_or(ReducedWord(check->pair.order));
    const Ball region = ball(center, check->radius, check->vertex_cap);
    const VertexRule rule = [&v, &check](const ReducedWord& x) {
      return v.at(coset_index(x, check->pair));
    };
    const VertexFunction values = restrict_to(rule, region.vertices);
    std::vector<ReducedWord> interior;
    for (std::size_t i = 0; i < region.vertices.size(); ++i) {
      if (region.depth[i] < region.radius) {
        interior.push_back(region.vertices[i]);
      }
    }
    const ResistanceAssignment r = sequence_resistances(check->pair, v.sequence());
    report.vertex_report = is_p_harmonic(values, interior, r, p, tol);
    report.pass = report.pass && report.vertex_report->pass;
  }
  return report;
}

}  // namespace pharmonic
