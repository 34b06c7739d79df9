#pragma once

// Convexity algebras over the non-negative rationals: formal convex
// combinations with nonzero weights and a constant bottom, free algebras as
// simplices, the index category Omega over finite subsets of a generator pool,
// and the operations O_r on the disjoint sum of simplices.

#include <map>
#include <memory>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "plonka/polycat.hpp"

namespace plonka {

using Rational = boost::multiprecision::cpp_rational;

// The distinguished vertex; never a member of a generator pool.
inline constexpr std::string_view kBottomAtom = "_bot";

std::string to_string(const Rational& q);
// "p/q" or "p"; throws ParseError.
Rational parse_rational(std::string_view text);

// <r_1, ..., r_k>: every r_i > 0 and the r_i sum to 1.
class CVOperation {
 public:
  // Throws AlgebraError unless the weights are valid.
  explicit CVOperation(std::vector<Rational> weights);

  int arity() const { return static_cast<int>(weights_.size()); }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  bool operator==(const CVOperation&) const = default;

 private:
  std::vector<Rational> weights_;
};

std::string to_string(const CVOperation& op);

// r(s_1, ..., s_k): weights r_i * s_ij, in order.
CVOperation compose(const CVOperation& r, std::span<const CVOperation> s);
// r with s plugged into slot i and every other slot kept.
CVOperation substitute(const CVOperation& r, int slot, const CVOperation& s);

// A point of the simplex spanned by bottom and `component`. Coefficients are
// keyed by generator name or kBottomAtom; zero coefficients are not stored.
struct ConvexPoint {
  std::set<std::string> component;
  std::map<std::string, Rational> coeffs;

  // Generators with a nonzero coefficient.
  std::set<std::string> support() const;
  bool operator==(const ConvexPoint&) const = default;
};

// Positive coefficients summing to 1 on atoms of component + {bottom}.
bool is_valid(const ConvexPoint& p);

// "1/2*x1 + 1/4*x2 + 1/4*_bot": generators in name order, bottom last. A
// component larger than the support is appended as " @ {x1,x2,x3}".
std::string format(const ConvexPoint& p);
// Accepts the format above; a bare atom means coefficient 1. The component
// defaults to the support. Throws ParseError on syntax errors and invalid
// points.
ConvexPoint parse_point(std::string_view text);

ConvexPoint bottom_point();
ConvexPoint vertex(const std::string& generator);

// sum_i r_i y_i, with component the union of the input components. Throws
// AlgebraError when the number of points differs from the arity.
ConvexPoint o_apply(const CVOperation& op, std::span<const ConvexPoint> points);

// The free algebra on X, kept symbolic: membership plus the generator
// embeddings.
class Simplex {
 public:
  // Throws AlgebraError if X contains the bottom atom.
  explicit Simplex(FinSet generators);

  const FinSet& generators() const { return generators_; }
  int dimension() const { return generators_.size(); }
  bool contains(const ConvexPoint& p) const;
  ConvexPoint embed(int generator) const;
  ConvexPoint bottom() const { return bottom_point(); }

 private:
  FinSet generators_;
};

Simplex simplex_free(const FinSet& generators);

// Objects of Omega are the subsets of the pool, indexed by bitmask over the
// pool order, with atoms "{}", "{x1}", "{x1,x2}", ...
FinSet subset_objects(const FinSet& pool);
int subset_mask(const FinSet& pool, const std::set<std::string>& subset);

// CP_r of the powerset of `pool` as an L'-algebra (join = union). Throws
// AlgebraError if the pool contains the bottom atom and TruncationError if
// |pool| > size_cap.
std::shared_ptr<const PolyCategory> omega_category(const FinSet& pool, int nmax = 3, int size_cap = 3);

struct SumEvaluation {
  CVOperation op;
  std::vector<ConvexPoint> inputs;
  // Value computed in the free algebra on the union component.
  ConvexPoint value;
  // o_apply on the same inputs.
  ConvexPoint direct;
  int component = 0;
};

struct SimplexSumResult {
  std::vector<SumEvaluation> evaluations;
  Report report;
};

// Evaluates O_r through the sum: each input (X_i, y_i) is moved along the
// inclusion X_i -> X = union X_j into coordinates over X + {bottom}, combined
// there, and read back. The Omega morphism [X_1 ... X_k, i] must land on X
// whenever k is within the category's caps.
SumEvaluation evaluate_in_sum(const FinSet& pool, const CVOperation& op, std::span<const ConvexPoint> points);

struct CVInstance {
  CVOperation op;
  std::vector<ConvexPoint> inputs;
};

// Evaluates each instance in the sum and checks agreement with o_apply, the
// union component, the Omega targets and membership of the value. Throws
// AlgebraError for a point outside the pool.
SimplexSumResult check_simplex_sum(const FinSet& pool, std::span<const CVInstance> instances, int nmax = 3);
// The same over every op applied to every tuple of sample points.
SimplexSumResult plonka_sum_simplices(const FinSet& pool, std::span<const CVOperation> ops,
                                      std::span<const ConvexPoint> points, int nmax = 3);

// Random weights and points, normalized from integers in [1, max_den].
CVOperation random_operation(std::mt19937_64& rng, int arity, int max_den = 12);
ConvexPoint random_point(std::mt19937_64& rng, const FinSet& pool, int max_den = 12);

}  // namespace plonka
