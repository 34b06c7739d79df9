#include "plonka/emalg.hpp"

#include <algorithm>
#include <numeric>

namespace plonka {

namespace {

bool same_monad(const TruncatedMonad& a, const TruncatedMonad& b) {
  return &a == &b || (a.name() == b.name() && a.nmax() == b.nmax() && a.mode() == b.mode());
}

std::string atom_list(const FinSet& s) {
  std::string out;
  for (int i = 0; i < s.size(); ++i) out += (i ? "," : "") + s.atom(i);
  return out;
}

}  // namespace

EMAlgebra::EMAlgebra(MonadPtr monad, FinSet carrier, std::vector<int> structure)
    : monad_(std::move(monad)), carrier_(std::move(carrier)), structure_(std::move(structure)) {
  terms_ = std::make_shared<const TermPool>(monad_->eval(carrier_.size()));
  if (static_cast<int>(structure_.size()) != terms_->size()) {
    throw AlgebraError("structure table has " + std::to_string(structure_.size()) + " entries, expected " +
                       std::to_string(terms_->size()));
  }
  for (int v : structure_) {
    if (v < -1 || v >= carrier_.size()) throw AlgebraError("structure value outside the carrier");
  }
}

EMAlgebra EMAlgebra::from_function(MonadPtr monad, FinSet carrier,
                                   const std::function<std::optional<int>(const Term&)>& alpha) {
  std::vector<int> table;
  for (const auto& t : monad->eval(carrier.size())) table.push_back(alpha(t).value_or(-1));
  return EMAlgebra(std::move(monad), std::move(carrier), std::move(table));
}

bool EMAlgebra::total() const {
  return std::none_of(structure_.begin(), structure_.end(), [](int v) { return v < 0; });
}

std::optional<int> EMAlgebra::eval(const Term& t) const {
  auto i = terms_->find(t);
  if (!i) return std::nullopt;
  const int v = structure_[static_cast<std::size_t>(*i)];
  if (v < 0) return std::nullopt;
  return v;
}

int EMAlgebra::value(const Term& t) const {
  auto v = eval(t);
  if (!v) throw AlgebraError("structure undefined on " + monad_->show(t));
  return *v;
}

bool EMAlgebra::operator==(const EMAlgebra& other) const {
  return same_monad(*monad_, *other.monad_) && carrier_.atoms() == other.carrier_.atoms() &&
         structure_ == other.structure_;
}

namespace {

int eval_shape(std::string_view shape, std::size_t& pos, const std::vector<int>& word, std::size_t& leaf,
               const std::function<int(int, int)>& op) {
  if (shape[pos] == 'x') {
    ++pos;
    return word[leaf++];
  }
  ++pos;
  const int l = eval_shape(shape, pos, word, leaf, op);
  const int r = eval_shape(shape, pos, word, leaf, op);
  ++pos;
  return op(l, r);
}

}  // namespace

EMAlgebra algebra_from_operation(MonadPtr monad, FinSet carrier, const std::function<int(int, int)>& op,
                                 std::optional<int> unit) {
  const Operad& o = monad->op();
  const auto* words = dynamic_cast<const LeafWordOperad*>(&o);
  const bool terminal = dynamic_cast<const TerminalOperad*>(&o) != nullptr;
  if (!words && !terminal) throw AlgebraError(monad->name() + " has no binary-operation presentation");
  return EMAlgebra::from_function(monad, std::move(carrier), [&](const Term& t) -> std::optional<int> {
    if (t.arity() == 0) return unit;
    std::vector<int> word = t.vars;
    if (words) {
      const auto beta = words->leaves(t.arity(), t.label);
      for (std::size_t j = 0; j < beta.size(); ++j) word[j] = t.vars[static_cast<std::size_t>(beta[j])];
      if (words->kind() == LeafWordOperad::Kind::magma) {
        std::size_t pos = 0;
        std::size_t leaf = 0;
        return eval_shape(words->shape(t.arity(), t.label), pos, word, leaf, op);
      }
    }
    int acc = word[0];
    for (std::size_t j = 1; j < word.size(); ++j) acc = op(acc, word[j]);
    return acc;
  });
}

EMAlgebra semilattice_algebra(MonadPtr monad, FinSet carrier, const std::vector<std::vector<int>>& join,
                              std::optional<int> bottom) {
  const int n = carrier.size();
  if (static_cast<int>(join.size()) != n) throw AlgebraError("join table size does not match the carrier");
  for (const auto& row : join) {
    if (static_cast<int>(row.size()) != n) throw AlgebraError("join table size does not match the carrier");
  }
  return algebra_from_operation(
      std::move(monad), std::move(carrier),
      [&join](int a, int b) { return join[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }, bottom);
}

EMAlgebra pointed_algebra(MonadPtr maybe, FinSet carrier, int point) {
  if (point < 0 || point >= carrier.size()) throw AlgebraError("point outside the carrier");
  return EMAlgebra::from_function(maybe, std::move(carrier), [point](const Term& t) -> std::optional<int> {
    if (t.arity() == 0) return point;
    return t.vars[0];
  });
}

EMAlgebra terminal_algebra(MonadPtr monad, std::string atom) {
  return EMAlgebra::from_function(monad, FinSet({std::move(atom)}), [](const Term&) { return 0; });
}

Report check_algebra(const EMAlgebra& a) {
  const TruncatedMonad& t = *a.monad();
  Report report;
  report.subject = "algebra over " + t.name() + " on {" + atom_list(a.carrier()) + "}";
  const TermPool& pool = a.terms();
  auto atom = [&](int x) { return a.carrier().atom(x); };

  CheckResult& unit = report.add("unit law", "alpha(eta(x)) = x for every element");
  for (int x = 0; x < a.size(); ++x) {
    ++unit.instances;
    auto v = a.eval(t.unit(x));
    if (!v || *v != x) {
      unit.fail("alpha(eta(" + atom(x) + ")) = " + (v ? atom(*v) : std::string("undefined")));
    }
  }

  CheckResult& mult = report.add("multiplication law", "T^2(A) with at most N_max leaves");
  const Budget budget = arity_budget(pool.terms(), t.nmax());
  for (const auto& w : t.eval(pool.size(), &budget)) {
    std::optional<int> left;
    try {
      left = a.eval(t.join(w, pool));
    } catch (const TruncationError&) {
      ++mult.out_of_fragment;
      continue;
    }
    std::vector<int> values;
    bool defined = true;
    for (int v : w.vars) {
      const int s = a.structure()[static_cast<std::size_t>(v)];
      if (s < 0) defined = false;
      values.push_back(s);
    }
    if (!defined || !left) {
      ++mult.out_of_fragment;
      continue;
    }
    const auto right = a.eval(t.normalize(values, w.label));
    if (!right) {
      ++mult.out_of_fragment;
      continue;
    }
    ++mult.instances;
    if (*left != *right) {
      mult.fail("on " + t.show(w, [&](int v) { return t.show(pool[v], atom); }) + ": alpha(mu(w)) = " + atom(*left) +
                " but alpha(T(alpha)(w)) = " + atom(*right));
    }
  }

  CheckResult& total = report.add("totality", "structure entries defined within the caps");
  for (int v : a.structure()) {
    if (v < 0) {
      ++total.out_of_fragment;
    } else {
      ++total.instances;
    }
  }
  return report;
}

EMAlgebra free_algebra(MonadPtr monad, const FinSet& generators) {
  const auto tx = monad->eval(generators.size());
  std::vector<std::string> atoms;
  for (const auto& t : tx) atoms.push_back(monad->show(t, [&](int v) { return generators.atom(v); }));
  const TermPool pool(tx);
  const TruncatedMonad* m = monad.get();
  return EMAlgebra::from_function(monad, FinSet(std::move(atoms)), [&](const Term& w) -> std::optional<int> {
    try {
      return pool.index(m->join(w, pool));
    } catch (const TruncationError&) {
      return std::nullopt;
    }
  });
}

EMAlgebra em_functor(const MonadMorphism& tau, const EMAlgebra& b) {
  if (!same_monad(*tau.target(), *b.monad())) {
    throw AlgebraError(tau.name() + ": algebra is over " + b.monad()->name() + ", not the target");
  }
  return EMAlgebra::from_function(tau.source(), b.carrier(), [&](const Term& t) -> std::optional<int> {
    auto img = tau.apply(t);
    if (!img) return std::nullopt;
    return b.eval(*img);
  });
}

EMAlgebra product_algebra(const EMAlgebra& a, const EMAlgebra& b) {
  if (!same_monad(*a.monad(), *b.monad())) throw AlgebraError("product of algebras over different monads");
  const int nb = b.size();
  std::vector<std::string> atoms;
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < nb; ++j) atoms.push_back("(" + a.carrier().atom(i) + "," + b.carrier().atom(j) + ")");
  }
  std::vector<int> first(atoms.size());
  std::vector<int> second(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    first[k] = static_cast<int>(k) / nb;
    second[k] = static_cast<int>(k) % nb;
  }
  const TruncatedMonad& t = *a.monad();
  return EMAlgebra::from_function(a.monad(), FinSet(std::move(atoms)), [&](const Term& w) -> std::optional<int> {
    auto x = a.eval(t.map(w, first));
    auto y = b.eval(t.map(w, second));
    if (!x || !y) return std::nullopt;
    return *x * nb + *y;
  });
}

CheckResult check_hom(const AlgebraHom& h) {
  const EMAlgebra& a = *h.source;
  const EMAlgebra& b = *h.target;
  const TruncatedMonad& t = *a.monad();
  CheckResult check;
  check.name = "homomorphism";
  check.fragment = "h(alpha(t)) = beta(T(h)(t)) on T(A)";
  if (!same_monad(t, *b.monad()) || static_cast<int>(h.map.size()) != a.size()) {
    check.fail("endpoints do not match");
    return check;
  }
  for (int i = 0; i < a.terms().size(); ++i) {
    const Term& x = a.terms()[i];
    const int av = a.structure()[static_cast<std::size_t>(i)];
    const auto bv = b.eval(t.map(x, h.map));
    if (av < 0 || !bv) {
      ++check.out_of_fragment;
      continue;
    }
    ++check.instances;
    if (h(av) != *bv) {
      check.fail("on " + t.show(x, [&](int v) { return a.carrier().atom(v); }) + ": h(alpha) = " +
                 b.carrier().atom(h(av)) + " but beta(T(h)) = " + b.carrier().atom(*bv));
    }
  }
  return check;
}

bool is_hom(const AlgebraHom& h) { return check_hom(h).passed(); }

AlgebraHom identity_hom(std::shared_ptr<const EMAlgebra> a) {
  std::vector<int> id(static_cast<std::size_t>(a->size()));
  std::iota(id.begin(), id.end(), 0);
  return AlgebraHom{a, a, std::move(id)};
}

AlgebraHom compose(const AlgebraHom& g, const AlgebraHom& f) {
  if (!(*f.target == *g.source)) throw CompositionError("algebra homomorphisms are not composable");
  std::vector<int> gf;
  for (int v : f.map) gf.push_back(g(v));
  return AlgebraHom{f.source, g.target, std::move(gf)};
}

std::vector<AlgebraHom> all_homs(std::shared_ptr<const EMAlgebra> a, std::shared_ptr<const EMAlgebra> b) {
  std::vector<AlgebraHom> out;
  for (auto& f : enumerate_maps(a->size(), b->size(), MapKind::all)) {
    AlgebraHom h{a, b, std::move(f)};
    if (is_hom(h)) out.push_back(std::move(h));
  }
  return out;
}

AlgebraHom em_functor(const MonadMorphism& tau, const AlgebraHom& h) {
  return AlgebraHom{std::make_shared<const EMAlgebra>(em_functor(tau, *h.source)),
                    std::make_shared<const EMAlgebra>(em_functor(tau, *h.target)), h.map};
}

std::optional<std::vector<int>> find_isomorphism(const EMAlgebra& a, const EMAlgebra& b) {
  if (!same_monad(*a.monad(), *b.monad()) || a.size() != b.size()) return std::nullopt;
  const int n = a.size();
  const TruncatedMonad& t = *a.monad();
  // Terms are checked as soon as every element they mention is assigned.
  std::vector<std::vector<int>> bucket(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < a.terms().size(); ++i) {
    int top = a.structure()[static_cast<std::size_t>(i)];
    for (int v : a.terms()[i].vars) top = std::max(top, v);
    bucket[static_cast<std::size_t>(top + 1)].push_back(i);
  }
  for (int i : bucket[0]) {
    // nullary terms: compare directly once everything is assigned
    bucket[static_cast<std::size_t>(n)].push_back(i);
  }
  std::vector<int> phi(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);

  auto consistent = [&](int level) {
    for (int i : bucket[static_cast<std::size_t>(level)]) {
      const int av = a.structure()[static_cast<std::size_t>(i)];
      const auto bv = b.eval(t.map(a.terms()[i], phi));
      if (av < 0) {
        if (bv) return false;
        continue;
      }
      if (!bv || *bv != phi[static_cast<std::size_t>(av)]) return false;
    }
    return true;
  };

  std::function<bool(int)> rec = [&](int k) {
    if (k == n) return n == 0 ? consistent(0) : true;
    for (int y = 0; y < n; ++y) {
      if (used[static_cast<std::size_t>(y)]) continue;
      phi[static_cast<std::size_t>(k)] = y;
      used[static_cast<std::size_t>(y)] = true;
      if (consistent(k + 1) && rec(k + 1)) return true;
      used[static_cast<std::size_t>(y)] = false;
    }
    phi[static_cast<std::size_t>(k)] = -1;
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return phi;
}

std::string describe(const EMAlgebra& a) {
  std::string out;
  const TruncatedMonad& t = *a.monad();
  for (int i = 0; i < a.terms().size(); ++i) {
    const int v = a.structure()[static_cast<std::size_t>(i)];
    if (v < 0) continue;
    out += t.show(a.terms()[i], [&](int x) { return a.carrier().atom(x); }) + " = " + a.carrier().atom(v) + "\n";
  }
  return out;
}

}  // namespace plonka
