#pragma once

// Indexed Plonka sums: the transformation lambda, the sum algebra, the lax
// morphism coherence checks and the preservation test for monad morphisms.

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plonka/emalg.hpp"
#include "plonka/monad.hpp"
#include "plonka/polycat.hpp"

namespace plonka {

// What lambda needs from a functor CP -> Set: the size of each value and the
// action of each enumerated morphism.
struct SetFunctor {
  std::vector<int> sizes;
  std::function<int(const PolyMorphism&, int)> map;
};

SetFunctor underlying(const FunctorData& f);

// The coproduct of the values: atoms "a.v", ordered by a, then v.
struct TaggedCarrier {
  FinSet atoms;
  std::vector<int> tag;
  std::vector<int> elem;
  std::vector<int> offset;

  int at(int a, int v) const { return offset[static_cast<std::size_t>(a)] + v; }
  int size() const { return atoms.size(); }
};

TaggedCarrier tagged_carrier(const std::vector<int>& sizes, const std::function<std::string(int a, int v)>& atom);

struct PlonkaContext {
  MonadPtr R;
  // R -> T, coefficient induced; T is the monad of the index algebra.
  MonadMorphism pi;
  // A functor from CP_r (regular mode) or CP_l (analytic mode) of the index
  // algebra into EM(R).
  FunctorData F;

  const PolyCategory& cat() const { return *F.domain; }
  const EMAlgebra& index() const { return F.domain->algebra(); }
};

Report validate_context(const PlonkaContext& ctx);
// Throws AlgebraError with the report summary when validation fails.
PlonkaContext make_context(MonadMorphism pi, FunctorData f);

TaggedCarrier tagged_carrier(const PlonkaContext& ctx);

struct LambdaValue {
  int component = 0;
  Term term;

  bool operator==(const LambdaValue&) const = default;
};

// lambda_G on any representative <vars, label> of an element of R(sum G).
LambdaValue lambda(const TruncatedMonad& R, const MonadMorphism& pi, const PolyCategory& cat, const SetFunctor& g,
                   const TaggedCarrier& carrier, std::span<const int> vars, int label);
LambdaValue lambda(const PlonkaContext& ctx, const TaggedCarrier& carrier, const Term& t);

// The sum algebra on the tagged carrier: alpha(t) = xi_{F(b)}(t') where
// lambda(t) = (b, t').
EMAlgebra plonka_sum(const PlonkaContext& ctx);

// Orbit independence of lambda, unit coherence and multiplication
// coherence lambda . mu = sum(mu) . lambda_{RF} . R(lambda).
Report check_lax_morphism(const PlonkaContext& ctx);

struct Preservation {
  bool preserved = true;
  // pi_R = pi_V . tau on every coefficient; reported, not required.
  bool triangle_commutes = true;
  std::string witness;
  std::int64_t instances = 0;
  std::int64_t out_of_fragment = 0;
};

// Compares EM(tau)(sum of F) with the sum of EM(tau) . F, the latter indexed
// through pi_R: R -> T.
Preservation check_preservation(const MonadMorphism& tau, const MonadMorphism& pi_r, const PlonkaContext& ctx_v);

}  // namespace plonka
