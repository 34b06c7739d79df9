#pragma once

// Truncated (semi-)analytic monads generated by operads: T(X) as canonical
// orbit representatives [x, r], the unit and multiplication, law checking,
// monad morphisms, the regular part reg(M) and the cartesianness classifiers.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plonka/fincore.hpp"
#include "plonka/operad.hpp"
#include "plonka/report.hpp"

namespace plonka {

enum class MonadMode { regular, analytic };

std::string to_string(MonadMode mode);

// An element [vars, label] of T(X); vars index the carrier of X.
struct Term {
  std::vector<int> vars;
  int label = 0;

  int arity() const { return static_cast<int>(vars.size()); }
  bool operator==(const Term&) const = default;
};

// Arity first, then variables, then label.
bool operator<(const Term& a, const Term& b);

// Interned terms with stable indices; used as carriers of iterated monads.
// The index order is the carrier order for canonicalization.
class TermPool {
 public:
  TermPool() = default;
  explicit TermPool(std::vector<Term> terms);

  int size() const { return static_cast<int>(terms_.size()); }
  const Term& operator[](int i) const { return terms_[static_cast<std::size_t>(i)]; }
  const std::vector<Term>& terms() const { return terms_; }
  std::optional<int> find(const Term& t) const;
  // Throws TruncationError when t is not in the pool.
  int index(const Term& t) const;
  int intern(const Term& t);

 private:
  std::vector<Term> terms_;
  std::map<Term, int> index_;
};

// Restricts eval to terms whose summed weights stay within the caps:
// for every dimension d, sum over variable occurrences v of weights[d][v]
// must be at most caps[d].
struct Budget {
  std::vector<std::vector<int>> weights;
  std::vector<int> caps;
};

class TruncatedMonad {
 public:
  // Requires op->max_arity() >= 2 * nmax - 1, and a regular operad in
  // regular mode.
  TruncatedMonad(OperadPtr op, MonadMode mode, int nmax, std::string name = {});

  const Operad& op() const { return *op_; }
  const OperadPtr& op_ptr() const { return op_; }
  MonadMode mode() const { return mode_; }
  int nmax() const { return nmax_; }
  const std::string& name() const { return name_; }

  // Canonical representative of <vars, label>. In regular mode vars is
  // factored as image . s and the label moved along s.
  Term normalize(std::span<const int> vars, int label) const;
  Term unit(int x) const;
  // T(f)(t) for f given by its values on the carrier of t.
  Term map(const Term& t, std::span<const int> f) const;
  // Substitutes the inner terms into the variables of label (k, r) and
  // normalizes. Throws TruncationError beyond the caps.
  Term join_terms(int k, int r, std::span<const Term> inners) const;
  // mu on a term whose variables index `pool`.
  Term join(const Term& outer, const TermPool& pool) const;
  Term join(const Term& outer, std::span<const Term> pool) const;

  // All canonical terms over a carrier of the given size, sorted.
  std::vector<Term> eval(int carrier_size, const Budget* budget = nullptr) const;
  std::vector<Term> eval(const FinSet& carrier) const { return eval(carrier.size()); }
  bool is_canonical(const Term& t) const;

  // "n|i1,...,in|label" with 1-based carrier indices.
  std::string encode(const Term& t) const;
  // Inverse of encode; normalizes and checks the caps. Throws ParseError.
  Term decode(std::string_view text, int carrier_size) const;
  // Readable form over named atoms, e.g. "mu2(a,b)".
  std::string show(const Term& t, const std::function<std::string(int)>& atom) const;
  std::string show(const Term& t) const;

 private:
  OperadPtr op_;
  MonadMode mode_;
  int nmax_;
  std::string name_;
};

using MonadPtr = std::shared_ptr<const TruncatedMonad>;

// name in the builtin operad names, or "reg(NAME)" for the regular part of a
// builtin. L, L', MAYBE, ID are regular; C, C', ASSOC, MAGMA analytic.
MonadPtr builtin_monad(std::string_view name, int nmax);

// Weights that bound the flattened arity of terms over `pool`.
Budget arity_budget(const std::vector<Term>& pool, int cap);

struct LawCaps {
  int size_cap = 4;        // carriers for unit laws and naturality
  int assoc_size_cap = 3;  // carrier for the depth-3 associativity check
};

Report check_monad_laws(const TruncatedMonad& t, const LawCaps& caps = {});

// A morphism given on representables: table[n][r] is the image of [id_n, r]
// as a target term over (n], or nullopt when it falls outside the target's
// caps. Components on other carriers follow by naturality.
class MonadMorphism {
 public:
  using Table = std::vector<std::vector<std::optional<Term>>>;

  MonadMorphism(std::string name, MonadPtr source, MonadPtr target, Table table);

  static MonadMorphism identity(MonadPtr monad);
  // Arity-preserving coefficient maps: maps[n][r] is a target label of arity n.
  static MonadMorphism from_label_maps(std::string name, MonadPtr source, MonadPtr target,
                                       std::vector<std::vector<int>> maps);
  static MonadMorphism from_function(std::string name, MonadPtr source, MonadPtr target,
                                     const std::function<std::optional<Term>(int n, int r)>& fn);

  const std::string& name() const { return name_; }
  const MonadPtr& source() const { return source_; }
  const MonadPtr& target() const { return target_; }
  const Table& table() const { return table_; }

  // tau_X(t) over the same carrier indices; nullopt outside the caps.
  std::optional<Term> apply(const Term& t) const;

  bool coefficient_induced() const { return label_maps_.has_value(); }
  // Throws Error unless coefficient induced.
  int label_map(int n, int r) const;

 private:
  std::string name_;
  MonadPtr source_;
  MonadPtr target_;
  Table table_;
  std::optional<std::vector<std::vector<int>>> label_maps_;
};

// g . f on representables; entries undefined when either side is.
MonadMorphism compose(const MonadMorphism& g, const MonadMorphism& f);

// tau([id, R(s) r]) = T(s)(tau([id, r])), unit and multiplication laws, and
// naturality along all maps between sets of size <= caps.size_cap.
Report check_morphism(const MonadMorphism& tau, const LawCaps& caps = {});

// Every label of the source goes to the unique label of the same arity of a
// terminal target (L, L', C, C').
MonadMorphism terminal_morphism(MonadPtr source, MonadPtr target);
// MAGMA -> ASSOC, forgetting the bracketing.
MonadMorphism forget_brackets(MonadPtr magma, MonadPtr assoc);
// The MAGMA endomorphism induced by b(x, y) |-> b(x, x).
MonadMorphism magma_duplication(MonadPtr magma);

// reg(M): coefficients are the elements of M((n]) that use every variable.
class RegularPartOperad final : public Operad {
 public:
  explicit RegularPartOperad(MonadPtr base);

  std::string name() const override { return "reg(" + base_->name() + ")"; }
  OperadMode mode() const override { return OperadMode::regular; }
  int max_arity() const override { return 2 * base_->nmax() - 1; }
  int label_count(int n) const override;
  std::string label_name(int n, int label) const override;
  std::optional<int> find_label(int n, std::string_view name) const override;
  int unit() const override { return unit_; }
  int act_permutation(std::span<const int> sigma, int label) const override;
  int act_surjection(std::span<const int> s, int m, int label) const override;
  LabelRef substitute(LabelRef outer, std::span<const LabelRef> inners) const override;

  const MonadPtr& base() const { return base_; }
  // The base term over (n] behind a label.
  const Term& term(int n, int label) const;
  // Index of a support-exact base term over (n]; throws TruncationError.
  int label_of(int n, const Term& t) const;
  // A base term over (n] as an element of reg(M)((n]).
  Term to_regular(const Term& t) const;

 private:
  MonadPtr base_;
  std::vector<std::vector<Term>> labels_;
  int unit_ = 0;
};

struct RegularPart {
  MonadPtr monad;
  MonadMorphism counit;
};

RegularPart regular_part(MonadPtr base);

// reg(MAGMA) endomorphism induced by b(x, y) |-> b(x, x).
MonadMorphism regular_duplication(MonadPtr reg_magma);

struct Classification {
  std::string property;
  bool holds = true;
  std::string witness;
  std::int64_t instances = 0;
  std::int64_t out_of_fragment = 0;
};

// Naturality squares along injections u: X -> Y with |Y| <= size_cap are
// pullbacks (semicartesian) or weak pullbacks (weakly cartesian).
Classification check_semicartesian(const MonadMorphism& tau, int size_cap);
Classification check_weakly_cartesian(const MonadMorphism& tau, int size_cap);

}  // namespace plonka
