#pragma once

// Kleisli maps of truncated monads, commutative strengths phi: T X x T Y ->
// T(X x Y) with phibar in T(1), their oplax coherence, and the Plonka
// products they induce on Kleisli maps.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "plonka/monad.hpp"

namespace plonka {

// f: dom -> T(cod); values[x] is a term over cod.
struct KleisliMap {
  MonadPtr monad;
  FinSet dom;
  FinSet cod;
  std::vector<Term> values;

  bool operator==(const KleisliMap& o) const { return dom == o.dom && cod == o.cod && values == o.values; }
};

KleisliMap kleisli_identity(MonadPtr monad, FinSet x);
// x |-> mu(T(g)(f(x))). Throws CompositionError unless cod(f) = dom(g) and
// TruncationError beyond the caps.
KleisliMap kleisli_compose(const KleisliMap& g, const KleisliMap& f);

// The product carrier X x Y has index x * |Y| + y and atoms "(x,y)".
FinSet product_set(const FinSet& x, const FinSet& y);

struct CommutativeStrength {
  std::string name;
  MonadPtr monad;
  // phi(a, b) for a over (nx], b over (ny]; the result is over (nx * ny].
  std::function<Term(const Term& a, int nx, const Term& b, int ny)> phi;
  // An element of T(1).
  Term phibar;
};

// C, C' (multiset product), L, L' (set product), MAYBE (strict pairing).
// Throws Error on other names.
CommutativeStrength builtin_strength(std::string_view name, int nmax);
// "L-union": phi_L replaced by a union of two slices.
// "L-phibar": phibar = bottom instead of the unit.
CommutativeStrength broken_strength(std::string_view name, int nmax);

// Unit and multiplication coherence of (x, phi), naturality in each
// variable, the unit of (1, phibar), and the associativity, unit and symmetry
// squares of the cartesian structure, on carriers of size <= size_cap.
Report check_oplax(const CommutativeStrength& st, int size_cap = 3);

// (x1, x2) |-> phi(f1(x1), f2(x2)).
KleisliMap plonka_product(const CommutativeStrength& st, const KleisliMap& f1, const KleisliMap& f2);
// The nullary product: 1 -> T(1), * |-> phibar.
KleisliMap plonka_product(const CommutativeStrength& st);
// Folded left to right; the empty family gives the nullary product.
KleisliMap plonka_product(const CommutativeStrength& st, std::span<const KleisliMap> maps);

// Identities and composition: prod(g1 . f1, g2 . f2) = prod(g1, g2) .
// prod(f1, f2), reduced to one element a_i of T(Y_i) and a map g_i on the
// support of a_i per side, with |Y_i| = |Z_i| = size_cap.
Report check_product_functor(const CommutativeStrength& st, int size_cap = 3);

}  // namespace plonka
