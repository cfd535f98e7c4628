#include "pharmonic/subgroup.hpp"

#include <algorithm>
#include <string>

#include "pharmonic/errors.hpp"

namespace pharmonic {

namespace {

std::vector<std::uint32_t> generator_masks(const FiniteIndexSpec& spec) {
  std::vector<std::uint32_t> mask(spec.order + 1, 0);
  for (std::size_t l = 0; l < spec.subsets.size(); ++l) {
    for (int s : spec.subsets[l]) {
      mask[s - 1] |= (1u << l);
    }
  }
  return mask;
}

int gf2_rank(const std::vector<std::uint32_t>& rows) {
  std::uint32_t basis[32] = {};  // basis[b] has highest set bit b
  int rank = 0;
  for (std::uint32_t row : rows) {
    for (int b = 31; b >= 0 && row != 0; --b) {
      if (((row >> b) & 1u) == 0) continue;
      if (basis[b] != 0) {
        row ^= basis[b];
      } else {
        basis[b] = row;
        ++rank;
        break;
      }
    }
  }
  return rank;
}

}  // namespace

int letter_count(const ReducedWord& x, int generator) {
  if (generator < 1 || generator > x.order() + 1) {
    throw ValidationError("generator index " + std::to_string(generator) +
                          " outside {1.." + std::to_string(x.order() + 1) + "}");
  }
  int count = 0;
  for (int letter : x.letters()) {
    if (letter == generator) ++count;
  }
  return count;
}

void check_finite_spec(const FiniteIndexSpec& spec) {
  if (spec.order < 1) throw ValidationError("tree order must be >= 1");
  if (spec.subsets.empty()) {
    throw ValidationError("finite-index spec needs at least one subset");
  }
  if (spec.subsets.size() > 20) {
    throw ValidationError("too many parity coordinates (max 20)");
  }
  for (const auto& subset : spec.subsets) {
    if (subset.empty()) {
      throw ValidationError("parity subsets must be nonempty");
    }
    for (int s : subset) {
      if (s < 1 || s > spec.order + 1) {
        throw ValidationError("subset entry " + std::to_string(s) +
                              " outside {1.." + std::to_string(spec.order + 1) +
                              "}");
      }
    }
  }
}

void check_pair(const InfiniteIndexPair& pair) {
  if (pair.order < 1) throw ValidationError("tree order must be >= 1");
  if (pair.first < 1 || pair.first > pair.order + 1 || pair.second < 1 ||
      pair.second > pair.order + 1) {
    throw ValidationError("pair generators outside {1.." +
                          std::to_string(pair.order + 1) + "}");
  }
  if (pair.first == pair.second) {
    throw ValidationError("pair generators must differ");
  }
}

int validate_and_index(const FiniteIndexSpec& spec) {
  check_finite_spec(spec);
  const int m = static_cast<int>(spec.subsets.size());
  if (gf2_rank(generator_masks(spec)) != m) {
    throw NonSpanningSpec(
        "generator parity masks do not span the parity space; the "
        "intersection has index below 2^" +
        std::to_string(m));
  }
  return 1 << m;
}

std::vector<int> parity_label(const ReducedWord& x,
                              const FiniteIndexSpec& spec) {
  check_finite_spec(spec);
  if (spec.order != x.order()) {
    throw ValidationError("spec and word tree orders differ");
  }
  const auto mask = generator_masks(spec);
  std::uint32_t bits = 0;
  for (int letter : x.letters()) {
    bits ^= mask[letter - 1];
  }
  return coset_label(static_cast<int>(bits),
                     static_cast<int>(spec.subsets.size()));
}

int coset_id(const std::vector<int>& label) {
  int id = 0;
  for (std::size_t l = 0; l < label.size(); ++l) {
    if (label[l] != 0 && label[l] != 1) {
      throw ValidationError("parity coordinates must be 0 or 1");
    }
    id |= label[l] << l;
  }
  return id;
}

std::vector<int> coset_label(int id, int parity_count) {
  std::vector<int> label(parity_count);
  for (int l = 0; l < parity_count; ++l) {
    label[l] = (id >> l) & 1;
  }
  return label;
}

std::vector<int> QuotientGraph::neighbor_cosets(int v) const {
  std::vector<int> out;
  for (int w = 0; w < num_cosets(); ++w) {
    if (w != v && multiplicity(v, w) > 0) out.push_back(w);
  }
  return out;
}

QuotientGraph quotient_graph(const FiniteIndexSpec& spec) {
  validate_and_index(spec);
  QuotientGraph q;
  q.order = spec.order;
  q.parity_count = static_cast<int>(spec.subsets.size());
  q.generator_mask = generator_masks(spec);
  q.xor_count.assign(q.num_cosets(), 0);
  for (std::uint32_t mask : q.generator_mask) {
    ++q.xor_count[mask];
  }
  return q;
}

int coset_of(const ReducedWord& x, const QuotientGraph& q) {
  if (x.order() != q.order) {
    throw ValidationError("quotient graph and word tree orders differ");
  }
  std::uint32_t bits = 0;
  for (int letter : x.letters()) {
    bits ^= q.generator_mask[letter - 1];
  }
  return static_cast<int>(bits);
}

ReducedWord coset_representative(int coset, const QuotientGraph& q) {
  if (coset < 0 || coset >= q.num_cosets()) {
    throw ValidationError("coset id out of range");
  }
  // BFS over coset ids, recording the generator used to reach each
  std::vector<int> via(q.num_cosets(), -1);
  std::vector<int> prev(q.num_cosets(), -1);
  std::vector<int> queue{0};
  via[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    if (v == coset) break;
    for (int s = 1; s <= q.order + 1; ++s) {
      const int w = v ^ static_cast<int>(q.generator_mask[s - 1]);
      if (via[w] == -1) {
        via[w] = s;
        prev[w] = v;
        queue.push_back(w);
      }
    }
  }
  if (via[coset] == -1) {
    // unreachable only for non-spanning data, which quotient_graph rejects
    throw ValidationError("coset unreachable from the identity coset");
  }
  std::vector<int> letters;
  for (int v = coset; v != 0; v = prev[v]) {
    letters.push_back(via[v]);
  }
  std::reverse(letters.begin(), letters.end());
  return ReducedWord::reduce(letters, q.order);
}

ReducedWord project(const ReducedWord& x, const InfiniteIndexPair& pair) {
  check_pair(pair);
  if (pair.order != x.order()) {
    throw ValidationError("pair and word tree orders differ");
  }
  std::vector<int> kept;
  kept.reserve(x.length());
  for (int letter : x.letters()) {
    if (letter == pair.first || letter == pair.second) kept.push_back(letter);
  }
  return ReducedWord::reduce(kept, x.order());
}

long coset_index(const ReducedWord& x, const InfiniteIndexPair& pair) {
  const ReducedWord image = project(x, pair);
  if (image.is_identity()) return 0;
  const long len = image.length();
  return image.letters().front() == pair.first ? len : -len;
}

AdjacencyProfile adjacency_profile(const ReducedWord& x,
                                   const InfiniteIndexPair& pair) {
  const long n = coset_index(x, pair);
  AdjacencyProfile profile;
  for (const ReducedWord& y : neighbors(x)) {
    const long d = coset_index(y, pair) - n;
    if (d == -1) {
      ++profile.down;
    } else if (d == 0) {
      ++profile.same;
    } else if (d == 1) {
      ++profile.up;
    } else {
      throw Error("neighbor coset index moved by more than 1");
    }
  }
  return profile;
}

}  // namespace pharmonic
