#ifndef PHARMONIC_SUBGROUP_HPP
#define PHARMONIC_SUBGROUP_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "pharmonic/word.hpp"

namespace pharmonic {

// Finite-index normal subgroup: the intersection of the parity subgroups of
// the generator subsets A_1..A_m.  Words belong to the kernel when, for every
// l, the total count of letters from A_l is even.
struct FiniteIndexSpec {
  int order = 1;                          // tree order k
  std::vector<std::vector<int>> subsets;  // A_1..A_m, subsets of {1..k+1}
};

// Infinite-index normal subgroup: the kernel of the homomorphism that deletes
// every letter outside {first, second}.
struct InfiniteIndexPair {
  int order = 1;
  int first = 1;
  int second = 2;
};

using SubgroupSpec = std::variant<FiniteIndexSpec, InfiniteIndexPair>;

// occurrences of a_i in the reduced word
int letter_count(const ReducedWord& x, int generator);

// Basic well-formedness (subsets nonempty, indices in range); throws
// ValidationError.  Does not check spanning.
void check_finite_spec(const FiniteIndexSpec& spec);

// i != j, both in range; throws ValidationError.
void check_pair(const InfiniteIndexPair& pair);

// Subgroup index 2^m.  Throws NonSpanningSpec when the generator parity
// masks do not span {0,1}^m (GF(2) rank < m): the label map would not be
// onto and the true index would be smaller.
int validate_and_index(const FiniteIndexSpec& spec);

// l-th coordinate = (sum over i in A_l of letter_count(x, i)) mod 2.
// A group homomorphism onto the parity space; its kernel is the subgroup.
std::vector<int> parity_label(const ReducedWord& x, const FiniteIndexSpec& spec);

// parity vector <-> integer id (bit l of the id is coordinate l)
int coset_id(const std::vector<int>& label);
std::vector<int> coset_label(int id, int parity_count);

// Cosets of a validated finite-index spec with generator-induced edge
// multiplicities: multiplicity(v, w) counts the generators whose parity mask
// equals v xor w, which is the number of neighbors any vertex of coset v has
// in coset w.
struct QuotientGraph {
  int order = 1;                              // k
  int parity_count = 0;                       // m
  std::vector<std::uint32_t> generator_mask;  // per generator, bit l = [s in A_l]
  std::vector<int> xor_count;                 // per xor value, generator count

  int num_cosets() const { return 1 << parity_count; }
  int multiplicity(int v, int w) const { return xor_count[v ^ w]; }
  // cosets w != v with multiplicity(v, w) > 0
  std::vector<int> neighbor_cosets(int v) const;
};

QuotientGraph quotient_graph(const FiniteIndexSpec& spec);

// parity label of x as a coset id, via the graph's precomputed masks
int coset_of(const ReducedWord& x, const QuotientGraph& q);

// some word whose parity label is the given coset (shortest generator path)
ReducedWord coset_representative(int coset, const QuotientGraph& q);

// Deletion homomorphism: drop letters outside {i, j}, then reduce.  The image
// alternates between the two retained letters.
ReducedWord project(const ReducedWord& x, const InfiniteIndexPair& pair);

// Integer coset index of x for the pair subgroup: +L when the projection has
// length L and starts with `first`, -L when it starts with `second`, 0 for the
// kernel.  Right multiplication by a generator moves the index by at most 1.
long coset_index(const ReducedWord& x, const InfiniteIndexPair& pair);

// Classification of the k+1 neighbors of x by coset-index change.
struct AdjacencyProfile {
  int down = 0;  // neighbors with index n-1
  int same = 0;  // neighbors with index n
  int up = 0;    // neighbors with index n+1
};

// Always (1, k-1, 1): one neighbor on each side, the rest in the same coset.
AdjacencyProfile adjacency_profile(const ReducedWord& x,
                                   const InfiniteIndexPair& pair);

}  // namespace pharmonic

#endif  // PHARMONIC_SUBGROUP_HPP
