#ifndef PHARMONIC_WORD_HPP
#define PHARMONIC_WORD_HPP

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pharmonic/rng.hpp"

namespace pharmonic {

// An element of the free product of k+1 involutive generators a_1..a_{k+1},
// i.e. a vertex of the order-k regular tree.  Stored as the cancellation-free
// letter sequence; the empty sequence is the identity.  Immutable value type.
class ReducedWord {
 public:
  // identity element
  explicit ReducedWord(int order);

  // Normal form of an arbitrary letter sequence: adjacent equal letters are
  // cancelled (a_i^2 = e) until none remain.  Throws ValidationError when a
  // letter lies outside {1..order+1} or order < 1.
  static ReducedWord reduce(const std::vector<int>& letters, int order);

  int order() const noexcept { return order_; }
  const std::vector<int>& letters() const noexcept { return letters_; }
  int length() const noexcept { return static_cast<int>(letters_.size()); }
  bool is_identity() const noexcept { return letters_.empty(); }

  bool operator==(const ReducedWord& o) const noexcept {
    return order_ == o.order_ && letters_ == o.letters_;
  }
  bool operator!=(const ReducedWord& o) const noexcept { return !(*this == o); }
  // total order (by length, then lexicographic); used to canonicalize edges
  bool operator<(const ReducedWord& o) const noexcept;

 private:
  ReducedWord(std::vector<int>&& letters, int order)
      : letters_(std::move(letters)), order_(order) {}

  std::vector<int> letters_;
  int order_;

  friend ReducedWord multiply(const ReducedWord&, const ReducedWord&);
  friend ReducedWord inverse(const ReducedWord&);
  friend ReducedWord append_generator(const ReducedWord&, int);
  friend class WordBuilder;
};

std::size_t hash_value(const ReducedWord& w) noexcept;

struct WordHash {
  std::size_t operator()(const ReducedWord& w) const noexcept {
    return hash_value(w);
  }
};

// group product reduce(x . y); throws on mismatched order
ReducedWord multiply(const ReducedWord& x, const ReducedWord& y);

// reversed letter sequence; involutive generators make this the group inverse
ReducedWord inverse(const ReducedWord& x);

// x . a_s for a single generator s in {1..k+1}
ReducedWord append_generator(const ReducedWord& x, int s);

// graph distance = length of x^{-1} y
int distance(const ReducedWord& x, const ReducedWord& y);

// the k+1 adjacent vertices {x . a_s}, in generator order
std::vector<ReducedWord> neighbors(const ReducedWord& x);

// uniformly random reduced word of exactly the given length
ReducedWord random_word(Rng& rng, int order, int length);

inline constexpr std::uint64_t default_vertex_cap = 1000000;

// closed-form vertex count of a radius-R ball (saturating)
std::uint64_t ball_vertex_count(int order, int radius);

// Finite truncation of the tree: all vertices within `radius` of `center`,
// breadth-first order, with the induced (tree) edge set.
struct Ball {
  ReducedWord center;
  int radius = 0;
  std::vector<ReducedWord> vertices;        // BFS order, center first
  std::vector<int> depth;                   // distance to center, per vertex
  std::vector<std::pair<int, int>> edges;   // vertex-index pairs, parent first
  std::vector<int> boundary;                // indices at depth == radius
  std::vector<std::vector<int>> adjacency;  // incident vertex indices
  std::unordered_map<ReducedWord, int, WordHash> index;

  Ball() : center(1) {}

  // -1 when the word is not in the ball
  int index_of(const ReducedWord& v) const {
    auto it = index.find(v);
    return it == index.end() ? -1 : it->second;
  }
};

// Throws ValidationError when radius < 0 or the closed-form vertex count
// exceeds vertex_cap (the tree is infinite; truncation must stay desk-sized).
Ball ball(const ReducedWord& center, int radius,
          std::uint64_t vertex_cap = default_vertex_cap);

}  // namespace pharmonic

#endif  // PHARMONIC_WORD_HPP
