#pragma once

// Eilenberg-Moore algebras over truncated monads and their homomorphisms.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plonka/fincore.hpp"
#include "plonka/monad.hpp"
#include "plonka/report.hpp"

namespace plonka {

// (A, alpha): alpha is a table over eval(monad, A) with -1 where undefined
// (a multiplication result beyond the caps, say).
class EMAlgebra {
 public:
  EMAlgebra(MonadPtr monad, FinSet carrier, std::vector<int> structure);
  static EMAlgebra from_function(MonadPtr monad, FinSet carrier,
                                 const std::function<std::optional<int>(const Term&)>& alpha);

  const MonadPtr& monad() const { return monad_; }
  const FinSet& carrier() const { return carrier_; }
  int size() const { return carrier_.size(); }
  const TermPool& terms() const { return *terms_; }
  const std::vector<int>& structure() const { return structure_; }
  bool total() const;

  // alpha(t) for a canonical term over the carrier; nullopt when undefined.
  std::optional<int> eval(const Term& t) const;
  // Throws AlgebraError when undefined.
  int value(const Term& t) const;

  // Same monad, same carrier atoms, same table.
  bool operator==(const EMAlgebra& other) const;

 private:
  MonadPtr monad_;
  FinSet carrier_;
  std::shared_ptr<const TermPool> terms_;
  std::vector<int> structure_;
};

// For L, L', C, C' (fold over the variables), ASSOC (fold over the word) and
// MAGMA (evaluate the tree); `op` is the binary operation and `unit` the
// value of the nullary term, if any.
EMAlgebra algebra_from_operation(MonadPtr monad, FinSet carrier, const std::function<int(int, int)>& op,
                                 std::optional<int> unit);
// Semilattice from a join table, join[a][b].
EMAlgebra semilattice_algebra(MonadPtr monad, FinSet carrier, const std::vector<std::vector<int>>& join,
                              std::optional<int> bottom);
// MAYBE-algebra: a pointed set.
EMAlgebra pointed_algebra(MonadPtr maybe, FinSet carrier, int point);
// The one-element algebra.
EMAlgebra terminal_algebra(MonadPtr monad, std::string atom = "pt");

// Unit and multiplication laws on all terms within the caps.
Report check_algebra(const EMAlgebra& a);

// (T(X), mu_X); atoms are the readable term forms.
EMAlgebra free_algebra(MonadPtr monad, const FinSet& generators);

// EM(tau): the algebra beta . tau over the same carrier.
EMAlgebra em_functor(const MonadMorphism& tau, const EMAlgebra& b);

// Atoms "(a,b)"; index i * |B| + j.
EMAlgebra product_algebra(const EMAlgebra& a, const EMAlgebra& b);

struct AlgebraHom {
  std::shared_ptr<const EMAlgebra> source;
  std::shared_ptr<const EMAlgebra> target;
  std::vector<int> map;

  int operator()(int x) const { return map[static_cast<std::size_t>(x)]; }
};

// h . alpha = beta . T(h) wherever both sides are defined.
CheckResult check_hom(const AlgebraHom& h);
bool is_hom(const AlgebraHom& h);
AlgebraHom identity_hom(std::shared_ptr<const EMAlgebra> a);
// g . f; throws CompositionError on mismatched endpoints.
AlgebraHom compose(const AlgebraHom& g, const AlgebraHom& f);
std::vector<AlgebraHom> all_homs(std::shared_ptr<const EMAlgebra> a, std::shared_ptr<const EMAlgebra> b);
AlgebraHom em_functor(const MonadMorphism& tau, const AlgebraHom& h);

// A structure-preserving bijection a -> b, if any.
std::optional<std::vector<int>> find_isomorphism(const EMAlgebra& a, const EMAlgebra& b);
inline bool are_isomorphic(const EMAlgebra& a, const EMAlgebra& b) { return find_isomorphism(a, b).has_value(); }

// Structure table listing, one "term = value" line per defined entry.
std::string describe(const EMAlgebra& a);

}  // namespace plonka
