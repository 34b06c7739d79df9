#pragma once

// Finite ordered sets, maps between them, epi-mono factorization and
// canonical representatives of symmetric-group orbits.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "plonka/error.hpp"

namespace plonka {

// Total order on the element ids of some carrier. Atom carriers use the
// natural order of indices; term pools compare by value.
class Order {
 public:
  virtual ~Order() = default;
  virtual bool less(int a, int b) const = 0;
};

// Natural order on indices.
const Order& index_order();

class FinSet {
 public:
  FinSet();
  explicit FinSet(std::vector<std::string> atoms);

  // Atoms "<prefix>1" ... "<prefix>n".
  static FinSet range(int n, std::string_view prefix = "");

  int size() const;
  bool empty() const { return size() == 0; }
  const std::string& atom(int i) const;
  const std::vector<std::string>& atoms() const;
  std::optional<int> find(std::string_view atom) const;
  // Throws Error for an unknown atom.
  int index(std::string_view atom) const;

  bool operator==(const FinSet& other) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

class FinMap {
 public:
  FinMap(FinSet dom, FinSet cod, std::vector<int> values);

  static FinMap identity(const FinSet& set);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  std::span<const int> values() const { return values_; }
  int operator()(int i) const { return values_.at(static_cast<std::size_t>(i)); }
  bool injective() const { return injective_; }
  bool surjective() const { return surjective_; }

  bool operator==(const FinMap& other) const;

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<int> values_;
  bool injective_ = false;
  bool surjective_ = false;
};

// f after g. Throws CompositionError unless cod(g) == dom(f).
FinMap compose(const FinMap& f, const FinMap& g);

struct EpiMono {
  FinMap surjection;
  FinMap injection;
};

// The intermediate set is the image of f listed in the codomain's order.
EpiMono epi_mono_factor(const FinMap& f);

// Index-level factorization used by the term machinery: `image` lists the
// distinct values sorted by `order`, and values[i] == image[surjection[i]].
struct Factorization {
  std::vector<int> surjection;
  std::vector<int> image;
};
Factorization factor(std::span<const int> values, const Order& order = index_order());

bool is_injective(std::span<const int> values);
bool is_surjective(std::span<const int> values, int cod_size);

class Permutation {
 public:
  Permutation() = default;
  // images[i] is the image of i (0-based). Throws Error unless bijective.
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int n);
  // The adjacent transposition exchanging t and t+1.
  static Permutation transposition(int n, int t);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  std::span<const int> images() const { return images_; }
  Permutation inverse() const;
  bool is_identity() const;

  // (*this) after other.
  Permutation operator*(const Permutation& other) const;
  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> images_;
};

// All permutations of (n] in lexicographic order of image tuples. Cached for
// small n.
const std::vector<std::vector<int>>& all_permutations(int n);

// Lexicographic rank of a permutation of (n]; inverse of unrank.
std::int64_t permutation_rank(std::span<const int> images);
std::vector<int> permutation_unrank(int n, std::int64_t rank);
std::int64_t factorial(int n);

// Left action of S_n on labels: returns R(sigma)(label).
using LabelAction = std::function<int(std::span<const int> sigma, int label)>;

struct OrbitRep {
  std::vector<int> values;
  int label;
  auto operator<=>(const OrbitRep&) const = default;
};

// Least pair of the orbit {<x.sigma, R(sigma^-1) r>}: first by the value tuple
// under `order`, then by label index. A null action means trivial action.
OrbitRep canonical_orbit_rep(std::span<const int> values, int label, const LabelAction& action,
                             const Order& order = index_order());

std::pair<FinMap, int> canonical_orbit_rep(const FinMap& x, int label, const LabelAction& action);

// Sorting data for a tuple: `sorted` is the value tuple sorted by `order`
// and sorter satisfies values[sorter[p]] == sorted[p].
struct SortedTuple {
  std::vector<int> sorted;
  std::vector<int> sorter;
  // (start, length) of runs of equal values in `sorted`
  std::vector<std::pair<int, int>> runs;
};
SortedTuple sort_tuple(std::span<const int> values, const Order& order = index_order());

// Calls fn for every permutation that fixes a sorted tuple with the given
// runs (the product of the symmetric groups on the runs).
void for_each_run_permutation(int n, const std::vector<std::pair<int, int>>& runs,
                              const std::function<void(std::span<const int>)>& fn);

enum class MapKind { all, injective, surjective };

// Value tuples of every qualifying map (n] -> (m], in lexicographic order.
std::vector<std::vector<int>> enumerate_maps(int dom_size, int cod_size, MapKind kind);
std::vector<FinMap> enumerate_maps(const FinSet& dom, const FinSet& cod, MapKind kind);

}  // namespace plonka
