#pragma once

// The distributive laws rho (L over a regular monad R) and alpha (C over an
// analytic monad A), with and without the bottom / neutral constant, the
// Beck axioms and the composite monads S . T.

#include <string>
#include <vector>

#include "plonka/monad.hpp"

namespace plonka {

enum class LawKind { rho, alpha };
enum class LawVariant { with_bottom, without_bottom };

std::string to_string(LawKind kind);
std::string to_string(LawVariant variant);

// lambda: T S -> S T where S is L, L' (rho) or C, C' (alpha) and T is the
// base monad.
class DistributiveLaw {
 public:
  // rho needs a regular base, alpha an analytic one. reversed_slots feeds the
  // chosen arguments to each copy of r in reverse order; it only exists to
  // exercise check_beck on a wrong law.
  DistributiveLaw(LawKind kind, LawVariant variant, MonadPtr base, bool reversed_slots = false);

  LawKind kind() const { return kind_; }
  LawVariant variant() const { return variant_; }
  const MonadPtr& base() const { return base_; }
  const MonadPtr& lattice() const { return lattice_; }
  std::string name() const;

  // t is a T-term whose variables index `inner`, a list of S-terms over some
  // carrier Y. The result is an S-term over `out`, the T-terms over Y, which
  // are interned as needed. Copies of r are indexed by choice tuples
  // (j_1, ..., j_k) in lexicographic order; copy j applies r to
  // (phi_1(j_1), ..., phi_k(j_k)).
  // Throws TruncationError when k * M exceeds the operad cap of T or the
  // result exceeds N_max of S, AlgebraError on an empty S-term without bottom.
  Term apply(const Term& t, std::span<const Term> inner, TermPool& out) const;

 private:
  LawKind kind_;
  LawVariant variant_;
  MonadPtr base_;
  MonadPtr lattice_;
  bool reversed_;
};

// An element of O(I(X)): `outer` is an O-term whose variables index `inner`,
// a list of I-terms over X.
struct ComposedTerm {
  Term outer;
  std::vector<Term> inner;

  bool operator==(const ComposedTerm&) const = default;
};

bool operator<(const ComposedTerm& a, const ComposedTerm& b);

// Keeps only the inner terms in use, sorted, and normalizes the outer layer.
ComposedTerm canonical(const TruncatedMonad& outer, ComposedTerm t);

// t in T(S(X)) to S(T(X)), canonical.
ComposedTerm distribute(const DistributiveLaw& law, const ComposedTerm& t);
ComposedTerm rho(MonadPtr r, LawVariant variant, const ComposedTerm& t);
ComposedTerm alpha(MonadPtr a, LawVariant variant, const ComposedTerm& t);

std::string show(const ComposedTerm& t, const TruncatedMonad& outer, const TruncatedMonad& inner,
                 const std::function<std::string(int)>& atom);

// The four Beck axioms (unit and multiplication of S, unit and
// multiplication of T) and naturality along all maps between (n], (m],
// n, m <= size_cap. Instances beyond the caps are counted as out of fragment.
Report check_beck(const DistributiveLaw& law, int size_cap = 3);

// S . T as a regular-mode monad: arity-n labels are the elements of
// S(T((n])) whose support is all of (n], n <= nmax; each layer is truncated
// at the N_max of the law's monads. Multiplication runs through the law.
// With verify, throws AlgebraError unless check_beck passes.
MonadPtr composed_monad(const DistributiveLaw& law, int nmax, bool verify = true);

}  // namespace plonka
