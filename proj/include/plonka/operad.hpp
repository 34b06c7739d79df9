#pragma once

// Regular operads (coefficient functors on surjections) and symmetric operads
// (coefficient functors on bijections), presented by per-arity label sets.
//
// Conventions used throughout: a label r of arity n together with a variable
// tuple x of length n denotes the term <x, r>, and <x . s, r> is identified
// with <x, R(s)(r)> for a permutation (or, in regular mode, a surjection) s.
// substitute(r; r_1, ..., r_k) puts r_i into the i-th variable of r; the
// variables of the result are the blocks of r_1, ..., r_k in that order.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plonka/error.hpp"
#include "plonka/report.hpp"

namespace plonka {

enum class OperadMode { regular, symmetric };

std::string to_string(OperadMode mode);

struct LabelRef {
  int arity = 0;
  int label = 0;
  auto operator<=>(const LabelRef&) const = default;
};

class Operad {
 public:
  virtual ~Operad() = default;

  virtual std::string name() const = 0;
  virtual OperadMode mode() const = 0;
  // Substitution is defined whenever the result arity is at most max_arity.
  virtual int max_arity() const = 0;
  virtual int label_count(int n) const = 0;
  virtual std::string label_name(int n, int label) const = 0;
  virtual std::optional<int> find_label(int n, std::string_view name) const;
  // The unit label in arity 1.
  virtual int unit() const = 0;
  // True when every action is trivial; lets canonicalization skip work.
  virtual bool trivial_action() const { return false; }

  // R(sigma)(label) for sigma in S_n, n = sigma.size().
  virtual int act_permutation(std::span<const int> sigma, int label) const = 0;
  // R(s)(label) for a surjection s: (n] -> (m]. Symmetric operads accept
  // bijections only.
  virtual int act_surjection(std::span<const int> s, int m, int label) const;

  // Throws TruncationError when the result arity exceeds max_arity.
  virtual LabelRef substitute(LabelRef outer, std::span<const LabelRef> inners) const = 0;

  // Optional fast path for the canonical orbit representative in index
  // order (sorted values, least label over the stabilizer). Returns false
  // when the operad has none.
  virtual bool canonical_form(std::vector<int>& values, int& label) const {
    (void)values;
    (void)label;
    return false;
  }

  // Puts `inner` into slot j of `outer` and the unit everywhere else.
  LabelRef substitute_at(LabelRef outer, int j, LabelRef inner) const;
};

using OperadPtr = std::shared_ptr<const Operad>;

// Every label of arity <= max_arity, ordered by arity then index.
std::vector<LabelRef> all_labels(const Operad& op, int max_arity);

// Explicit tables; the JSON operad format and materialize() produce these.
struct OperadTables {
  std::string name;
  OperadMode mode = OperadMode::regular;
  int max_arity = 0;
  // labels[n] lists coeff(n) in declaration order, n = 0..max_arity.
  std::vector<std::vector<std::string>> labels;
  int unit = 0;
  // perm[n][t][r]: action of the transposition exchanging t and t+1.
  std::vector<std::vector<std::vector<int>>> perm;
  // merge[n][p][r]: action of the surjection (n] -> (n-1] identifying p and
  // p+1, landing in coeff(n-1). Regular mode only.
  std::vector<std::vector<std::vector<int>>> merge;
  // Key (k, outer, n_1, r_1, ..., n_k, r_k), value: label of arity sum n_i.
  std::map<std::vector<int>, int> subst;
};

class TableOperad final : public Operad {
 public:
  explicit TableOperad(OperadTables tables);

  std::string name() const override { return t_.name; }
  OperadMode mode() const override { return t_.mode; }
  int max_arity() const override { return t_.max_arity; }
  int label_count(int n) const override;
  std::string label_name(int n, int label) const override;
  std::optional<int> find_label(int n, std::string_view name) const override;
  int unit() const override { return t_.unit; }
  bool trivial_action() const override { return trivial_; }
  int act_permutation(std::span<const int> sigma, int label) const override;
  int act_surjection(std::span<const int> s, int m, int label) const override;
  LabelRef substitute(LabelRef outer, std::span<const LabelRef> inners) const override;

  const OperadTables& tables() const { return t_; }

 private:
  OperadTables t_;
  bool trivial_ = false;
};

// Tabulates an operad up to `cap`.
std::shared_ptr<const TableOperad> materialize(const Operad& op, int cap);

// One label in each arity (arity 0 omitted for the primed variants), all
// actions trivial.
class TerminalOperad final : public Operad {
 public:
  TerminalOperad(std::string name, OperadMode mode, bool with_nullary, int cap);

  std::string name() const override { return name_; }
  OperadMode mode() const override { return mode_; }
  int max_arity() const override { return cap_; }
  int label_count(int n) const override;
  std::string label_name(int n, int label) const override;
  std::optional<int> find_label(int n, std::string_view name) const override;
  int unit() const override { return 0; }
  bool trivial_action() const override { return true; }
  int act_permutation(std::span<const int> sigma, int label) const override;
  int act_surjection(std::span<const int> s, int m, int label) const override;
  LabelRef substitute(LabelRef outer, std::span<const LabelRef> inners) const override;

  bool with_nullary() const { return with_nullary_; }

 private:
  std::string name_;
  OperadMode mode_;
  bool with_nullary_;
  int cap_;
};

// Symmetric operads whose terms are words (ASSOC: the monoid theory) or
// planar binary trees (MAGMA: one binary operation) with a leaf labelling.
// A label of arity n is the pair (shape, beta) where leaf j of the shape reads
// variable beta(j); its index is shape_index * n! + rank(beta).
class LeafWordOperad final : public Operad {
 public:
  enum class Kind { assoc, magma };
  LeafWordOperad(Kind kind, int cap);

  std::string name() const override { return kind_ == Kind::assoc ? "ASSOC" : "MAGMA"; }
  OperadMode mode() const override { return OperadMode::symmetric; }
  int max_arity() const override { return cap_; }
  int label_count(int n) const override;
  std::string label_name(int n, int label) const override;
  int unit() const override { return 0; }
  int act_permutation(std::span<const int> sigma, int label) const override;
  LabelRef substitute(LabelRef outer, std::span<const LabelRef> inners) const override;

  bool canonical_form(std::vector<int>& values, int& label) const override;

  Kind kind() const { return kind_; }
  // Leaf j of the label reads variable leaves(n, label)[j].
  std::vector<int> leaves(int n, int label) const;
  // Bracketed shape with 'x' for leaves, e.g. "((xx)x)"; "" for ASSOC.
  const std::string& shape(int n, int label) const;
  int encode(int n, const std::string& shape, std::span<const int> leaves) const;

 private:
  Kind kind_;
  int cap_;
  std::vector<std::vector<std::string>> shapes_;
  std::vector<std::map<std::string, int>> shape_index_;
};

// name in {L, L', C, C', ASSOC, MAGMA, MAYBE, ID}; "Lprime"/"Cprime" are
// accepted spellings of the primed names. Throws OperadError otherwise.
OperadPtr builtin_operad(std::string_view name, int cap);
const std::vector<std::string>& builtin_operad_names();

// Exhaustive check of unit laws, associativity, equivariance and
// functoriality of the actions for all instances with arities <= cap.
Report validate_operad(const Operad& op, int cap);

}  // namespace plonka
