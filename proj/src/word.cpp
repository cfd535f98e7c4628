#include "pharmonic/word.hpp"

#include <deque>
#include <limits>
#include <string>

#include "pharmonic/errors.hpp"

namespace pharmonic {

namespace {

void check_order(int order) {
  if (order < 1) {
    throw ValidationError("tree order must be >= 1, got " +
                          std::to_string(order));
  }
}

void check_letter(int letter, int order) {
  if (letter < 1 || letter > order + 1) {
    throw ValidationError("generator index " + std::to_string(letter) +
                          " outside {1.." + std::to_string(order + 1) + "}");
  }
}

void check_same_order(const ReducedWord& x, const ReducedWord& y) {
  if (x.order() != y.order()) {
    throw ValidationError("mismatched tree orders " +
                          std::to_string(x.order()) + " and " +
                          std::to_string(y.order()));
  }
}

}  // namespace

ReducedWord::ReducedWord(int order) : order_(order) { check_order(order); }

ReducedWord ReducedWord::reduce(const std::vector<int>& letters, int order) {
  check_order(order);
  std::vector<int> stack;
  stack.reserve(letters.size());
  for (int letter : letters) {
    check_letter(letter, order);
    if (!stack.empty() && stack.back() == letter) {
      stack.pop_back();
    } else {
      stack.push_back(letter);
    }
  }
  return ReducedWord(std::move(stack), order);
}

bool ReducedWord::operator<(const ReducedWord& o) const noexcept {
  if (order_ != o.order_) return order_ < o.order_;
  if (letters_.size() != o.letters_.size())
    return letters_.size() < o.letters_.size();
  return letters_ < o.letters_;
}

std::size_t hash_value(const ReducedWord& w) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(w.order());
  for (int letter : w.letters()) {
    h ^= static_cast<std::uint64_t>(letter);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

ReducedWord multiply(const ReducedWord& x, const ReducedWord& y) {
  check_same_order(x, y);
  std::vector<int> stack = x.letters_;
  stack.reserve(stack.size() + y.letters_.size());
  for (int letter : y.letters_) {
    if (!stack.empty() && stack.back() == letter) {
      stack.pop_back();
    } else {
      stack.push_back(letter);
    }
  }
  return ReducedWord(std::move(stack), x.order_);
}

ReducedWord inverse(const ReducedWord& x) {
  std::vector<int> rev(x.letters_.rbegin(), x.letters_.rend());
  return ReducedWord(std::move(rev), x.order_);
}

ReducedWord append_generator(const ReducedWord& x, int s) {
  check_letter(s, x.order());
  std::vector<int> letters = x.letters_;
  if (!letters.empty() && letters.back() == s) {
    letters.pop_back();
  } else {
    letters.push_back(s);
  }
  return ReducedWord(std::move(letters), x.order_);
}

int distance(const ReducedWord& x, const ReducedWord& y) {
  check_same_order(x, y);
  return multiply(inverse(x), y).length();
}

std::vector<ReducedWord> neighbors(const ReducedWord& x) {
  std::vector<ReducedWord> out;
  out.reserve(x.order() + 1);
  for (int s = 1; s <= x.order() + 1; ++s) {
    out.push_back(append_generator(x, s));
  }
  return out;
}

ReducedWord random_word(Rng& rng, int order, int length) {
  check_order(order);
  if (length < 0) throw ValidationError("word length must be >= 0");
  std::vector<int> letters;
  letters.reserve(length);
  for (int i = 0; i < length; ++i) {
    if (letters.empty()) {
      letters.push_back(rng.uniform_int(1, order + 1));
    } else {
      // any generator except the previous one keeps the word reduced
      int pick = rng.uniform_int(1, order);
      if (pick >= letters.back()) ++pick;
      letters.push_back(pick);
    }
  }
  return ReducedWord::reduce(letters, order);
}

std::uint64_t ball_vertex_count(int order, int radius) {
  check_order(order);
  if (radius < 0) throw ValidationError("ball radius must be >= 0");
  const std::uint64_t saturate = std::numeric_limits<std::uint64_t>::max() / 2;
  std::uint64_t total = 1;
  std::uint64_t layer = static_cast<std::uint64_t>(order) + 1;
  for (int d = 1; d <= radius; ++d) {
    total += layer;
    if (total >= saturate || layer >= saturate / order) return saturate;
    layer *= static_cast<std::uint64_t>(order);
  }
  return total;
}

Ball ball(const ReducedWord& center, int radius, std::uint64_t vertex_cap) {
  if (radius < 0) throw ValidationError("ball radius must be >= 0");
  const std::uint64_t count = ball_vertex_count(center.order(), radius);
  if (count > vertex_cap) {
    throw ValidationError("ball of radius " + std::to_string(radius) +
                          " holds " + std::to_string(count) +
                          " vertices, above the cap " +
                          std::to_string(vertex_cap));
  }

  Ball b;
  b.center = center;
  b.radius = radius;
  b.vertices.reserve(count);
  b.depth.reserve(count);
  b.vertices.push_back(center);
  b.depth.push_back(0);
  b.index.emplace(center, 0);

  for (std::size_t head = 0; head < b.vertices.size(); ++head) {
    const int d = b.depth[head];
    if (d == radius) continue;
    // copy: vertices may reallocate while expanding
    const ReducedWord v = b.vertices[head];
    for (int s = 1; s <= center.order() + 1; ++s) {
      ReducedWord w = append_generator(v, s);
      if (b.index.find(w) != b.index.end()) continue;  // the parent
      const int wi = static_cast<int>(b.vertices.size());
      b.index.emplace(w, wi);
      b.vertices.push_back(std::move(w));
      b.depth.push_back(d + 1);
      b.edges.emplace_back(static_cast<int>(head), wi);
    }
  }

  b.adjacency.assign(b.vertices.size(), {});
  for (const auto& [a, c] : b.edges) {
    b.adjacency[a].push_back(c);
    b.adjacency[c].push_back(a);
  }
  for (int i = 0; i < static_cast<int>(b.vertices.size()); ++i) {
    if (b.depth[i] == radius) b.boundary.push_back(i);
  }
  return b;
}

}  // namespace pharmonic
