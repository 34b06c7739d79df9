#pragma once

// Categories of regular polynomials CP_r(A, alpha) and linear polynomials
// CP_l(X, xi), functors out of them, and the comparison functors they carry.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plonka/emalg.hpp"

namespace plonka {

enum class PolyKind { regular, linear };

std::string to_string(PolyKind kind);

// [vars, position, label] : vars[position] -> alpha([vars, label]).
// Canonical under <x . sigma, i, r> ~ <x, sigma(i), R(sigma) r>: vars sorted,
// then the least (position, label) over the stabilizer of vars.
struct PolyMorphism {
  std::vector<int> vars;
  int position = 0;
  int label = 0;

  int arity() const { return static_cast<int>(vars.size()); }
  auto operator<=>(const PolyMorphism&) const = default;
};

class PolyCategory {
 public:
  // Regular kind needs a regular-mode monad, linear kind an analytic one.
  PolyCategory(std::shared_ptr<const EMAlgebra> base, PolyKind kind);

  const std::shared_ptr<const EMAlgebra>& base() const { return base_; }
  const EMAlgebra& algebra() const { return *base_; }
  const TruncatedMonad& monad() const { return *base_->monad(); }
  PolyKind kind() const { return kind_; }
  int object_count() const { return base_->size(); }

  // Every canonical morphism with a defined target, sorted.
  const std::vector<PolyMorphism>& morphisms() const { return morphisms_; }
  std::optional<int> index(const PolyMorphism& m) const;

  int source(const PolyMorphism& m) const { return m.vars[static_cast<std::size_t>(m.position)]; }
  // alpha([vars, label]); throws AlgebraError when undefined.
  int target(const PolyMorphism& m) const;

  PolyMorphism canonical(std::vector<int> vars, int position, int label) const;
  PolyMorphism identity(int object) const;
  // g after f. Throws CompositionError unless target(f) = source(g) and
  // TruncationError beyond the caps.
  PolyMorphism compose(const PolyMorphism& g, const PolyMorphism& f) const;

  // "[(a,b),1,mu2]" with a 1-based position.
  std::string show(const PolyMorphism& m) const;

 private:
  std::shared_ptr<const EMAlgebra> base_;
  PolyKind kind_;
  std::vector<PolyMorphism> morphisms_;
  std::map<PolyMorphism, int> index_;
};

// Identity, associativity and endpoint laws on every composable pair and
// triple of enumerated morphisms.
Report check_category(const PolyCategory& cat);

// A functor between polynomial categories, given on objects and morphisms.
struct PolyFunctor {
  std::string name;
  const PolyCategory* dom = nullptr;
  const PolyCategory* cod = nullptr;
  std::vector<int> objects;
  std::function<PolyMorphism(const PolyMorphism&)> morphism;
};

Report check_functor(const PolyFunctor& f);

// CP(h): objects via h, morphisms by factoring h . vars (regular) or by
// post-composition (linear).
PolyFunctor poly_functor_on_hom(const PolyCategory& dom, const PolyCategory& cod, const AlgebraHom& h);

// gamma: CP(EM(tau)(b)) -> CP(b), [a, i, r] |-> [a, i, tau_n(r)]. tau must
// be coefficient induced.
PolyFunctor gamma(const MonadMorphism& tau, const PolyCategory& dom, const PolyCategory& cod);

// leq[a][b] iff some morphism a -> b; the base monad must be L or L'.
std::vector<std::vector<bool>> posetal_collapse(const PolyCategory& cat);

std::string to_dot(const PolyCategory& cat);

// A functor CP -> EM(R): one algebra per object, one homomorphism per
// enumerated morphism (indexed like cat.morphisms()).
struct FunctorData {
  std::shared_ptr<const PolyCategory> domain;
  std::vector<std::shared_ptr<const EMAlgebra>> objects;
  std::vector<AlgebraHom> morphisms;

  const EMAlgebra& at(int object) const { return *objects[static_cast<std::size_t>(object)]; }
  const AlgebraHom& on(const PolyMorphism& m) const;
};

// Endpoints, homomorphism property, identities and composition on all
// enumerated morphisms.
Report check_functor_data(const FunctorData& f);

// Builds F from per-object algebras and a transition map for each pair
// a <= b of the posetal collapse: transition(a, b) is F(a) -> F(b) on carriers.
FunctorData lift_from_poset(std::shared_ptr<const PolyCategory> cat,
                            std::vector<std::shared_ptr<const EMAlgebra>> objects,
                            const std::function<std::vector<int>(int a, int b)>& transition);

// F(a) = algebra for every object and F(m) = identity.
FunctorData constant_functor(std::shared_ptr<const PolyCategory> cat, std::shared_ptr<const EMAlgebra> algebra);

}  // namespace plonka
