#include "plonka/monad.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

namespace plonka {

std::string to_string(MonadMode mode) { return mode == MonadMode::regular ? "regular" : "analytic"; }

bool operator<(const Term& a, const Term& b) {
  if (a.vars.size() != b.vars.size()) return a.vars.size() < b.vars.size();
  if (a.vars != b.vars) return a.vars < b.vars;
  return a.label < b.label;
}

TermPool::TermPool(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], static_cast<int>(i)).second) throw Error("duplicate term in pool");
  }
}

std::optional<int> TermPool::find(const Term& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int TermPool::index(const Term& t) const {
  auto i = find(t);
  if (!i) throw TruncationError("term outside the enumerated pool");
  return *i;
}

int TermPool::intern(const Term& t) {
  auto [it, inserted] = index_.emplace(t, size());
  if (inserted) terms_.push_back(t);
  return it->second;
}

TruncatedMonad::TruncatedMonad(OperadPtr op, MonadMode mode, int nmax, std::string name)
    : op_(std::move(op)), mode_(mode), nmax_(nmax), name_(std::move(name)) {
  if (!op_) throw Error("monad without operad");
  if (name_.empty()) name_ = op_->name();
  if (nmax_ < 1) throw Error("N_max must be at least 1");
  if (op_->max_arity() < 2 * nmax_ - 1) {
    throw OperadError(op_->name() + ": operad cap " + std::to_string(op_->max_arity()) +
                      " is below 2*N_max-1 = " + std::to_string(2 * nmax_ - 1));
  }
  if (mode_ == MonadMode::regular && op_->mode() != OperadMode::regular) {
    throw OperadError(op_->name() + ": regular mode needs a regular operad");
  }
}

Term TruncatedMonad::normalize(std::span<const int> vars, int label) const {
  if (mode_ == MonadMode::regular) {
    bool increasing = true;
    for (std::size_t i = 1; i < vars.size(); ++i) {
      if (vars[i - 1] >= vars[i]) {
        increasing = false;
        break;
      }
    }
    if (increasing) return Term{std::vector<int>(vars.begin(), vars.end()), label};
    Factorization f = factor(vars);
    const int m = static_cast<int>(f.image.size());
    return Term{std::move(f.image), op_->act_surjection(f.surjection, m, label)};
  }
  if (op_->trivial_action()) {
    std::vector<int> sorted(vars.begin(), vars.end());
    std::sort(sorted.begin(), sorted.end());
    return Term{std::move(sorted), label};
  }
  {
    std::vector<int> values(vars.begin(), vars.end());
    int l = label;
    if (op_->canonical_form(values, l)) return Term{std::move(values), l};
  }
  const Operad* op = op_.get();
  OrbitRep rep = canonical_orbit_rep(
      vars, label, [op](std::span<const int> sigma, int l) { return op->act_permutation(sigma, l); });
  return Term{std::move(rep.values), rep.label};
}

Term TruncatedMonad::unit(int x) const { return Term{{x}, op_->unit()}; }

Term TruncatedMonad::map(const Term& t, std::span<const int> f) const {
  std::vector<int> vars;
  vars.reserve(t.vars.size());
  for (int v : t.vars) vars.push_back(f[static_cast<std::size_t>(v)]);
  return normalize(vars, t.label);
}

Term TruncatedMonad::join_terms(int k, int r, std::span<const Term> inners) const {
  std::vector<LabelRef> refs;
  refs.reserve(inners.size());
  std::vector<int> vars;
  for (const auto& t : inners) {
    refs.push_back({t.arity(), t.label});
    vars.insert(vars.end(), t.vars.begin(), t.vars.end());
  }
  const LabelRef l = op_->substitute({k, r}, refs);
  Term out = normalize(vars, l.label);
  if (out.arity() > nmax_) {
    throw TruncationError(name_ + ": multiplication result of arity " + std::to_string(out.arity()) +
                          " beyond N_max " + std::to_string(nmax_));
  }
  return out;
}

Term TruncatedMonad::join(const Term& outer, const TermPool& pool) const {
  std::vector<Term> inners;
  inners.reserve(outer.vars.size());
  for (int v : outer.vars) inners.push_back(pool[v]);
  return join_terms(outer.arity(), outer.label, inners);
}

Term TruncatedMonad::join(const Term& outer, std::span<const Term> pool) const {
  std::vector<Term> inners;
  inners.reserve(outer.vars.size());
  for (int v : outer.vars) inners.push_back(pool[static_cast<std::size_t>(v)]);
  return join_terms(outer.arity(), outer.label, inners);
}

std::vector<Term> TruncatedMonad::eval(int carrier_size, const Budget* budget) const {
  std::vector<Term> out;
  const int top = mode_ == MonadMode::regular ? std::min(nmax_, carrier_size) : nmax_;
  const std::size_t dims = budget ? budget->caps.size() : 0;
  std::vector<int> used(dims, 0);
  std::map<std::vector<std::pair<int, int>>, std::vector<int>> canonical_labels;
  std::vector<int> tuple;

  auto labels_for = [&](int n) -> const std::vector<int>& {
    SortedTuple st = sort_tuple(tuple);
    bool trivial = op_->trivial_action() || mode_ == MonadMode::regular;
    if (!trivial) {
      trivial = std::all_of(st.runs.begin(), st.runs.end(), [](const auto& r) { return r.second == 1; });
    }
    if (trivial) st.runs.assign(static_cast<std::size_t>(n), {0, 1});
    auto it = canonical_labels.find(st.runs);
    if (it != canonical_labels.end()) return it->second;
    std::vector<int> labels;
    for (int r = 0; r < op_->label_count(n); ++r) {
      if (trivial) {
        labels.push_back(r);
        continue;
      }
      bool least = true;
      for_each_run_permutation(n, st.runs, [&](std::span<const int> tau) {
        if (least && op_->act_permutation(tau, r) < r) least = false;
      });
      if (least) labels.push_back(r);
    }
    return canonical_labels.emplace(st.runs, std::move(labels)).first->second;
  };

  for (int n = 0; n <= top; ++n) {
    if (op_->label_count(n) == 0) continue;
    canonical_labels.clear();
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(tuple.size()) == n) {
        for (int r : labels_for(n)) out.push_back(Term{tuple, r});
        return;
      }
      for (int v = start; v < carrier_size; ++v) {
        bool ok = true;
        for (std::size_t d = 0; d < dims; ++d) {
          if (used[d] + budget->weights[d][static_cast<std::size_t>(v)] > budget->caps[d]) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        for (std::size_t d = 0; d < dims; ++d) used[d] += budget->weights[d][static_cast<std::size_t>(v)];
        tuple.push_back(v);
        rec(mode_ == MonadMode::regular ? v + 1 : v);
        tuple.pop_back();
        for (std::size_t d = 0; d < dims; ++d) used[d] -= budget->weights[d][static_cast<std::size_t>(v)];
      }
    };
    rec(0);
  }
  return out;
}

bool TruncatedMonad::is_canonical(const Term& t) const {
  if (t.arity() > nmax_) return false;
  if (t.label < 0 || t.label >= op_->label_count(t.arity())) return false;
  return normalize(t.vars, t.label) == t;
}

std::string TruncatedMonad::encode(const Term& t) const {
  std::string out = std::to_string(t.arity()) + "|";
  for (std::size_t i = 0; i < t.vars.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(t.vars[i] + 1);
  }
  return out + "|" + op_->label_name(t.arity(), t.label);
}

namespace {

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

Term TruncatedMonad::decode(std::string_view text, int carrier_size) const {
  const auto bar1 = text.find('|');
  const auto bar2 = bar1 == std::string_view::npos ? bar1 : text.find('|', bar1 + 1);
  if (bar2 == std::string_view::npos) throw ParseError("term encoding needs the form n|i1,...,in|label: '" + std::string(text) + "'");
  const int n = parse_int(text.substr(0, bar1));
  std::string_view list = text.substr(bar1 + 1, bar2 - bar1 - 1);
  std::vector<int> vars;
  while (!list.empty()) {
    const auto comma = list.find(',');
    const int v = parse_int(list.substr(0, comma));
    if (v < 1 || v > carrier_size) throw ParseError("variable index out of range in '" + std::string(text) + "'");
    vars.push_back(v - 1);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (static_cast<int>(vars.size()) != n) throw ParseError("arity does not match variables in '" + std::string(text) + "'");
  auto label = op_->find_label(n, text.substr(bar2 + 1));
  if (!label) throw ParseError("unknown label in '" + std::string(text) + "'");
  if (mode_ == MonadMode::regular && !is_injective(vars)) {
    throw ParseError("regular terms need distinct variables: '" + std::string(text) + "'");
  }
  Term t = normalize(vars, *label);
  if (t.arity() > nmax_) throw ParseError("term beyond N_max: '" + std::string(text) + "'");
  return t;
}

std::string TruncatedMonad::show(const Term& t, const std::function<std::string(int)>& atom) const {
  std::string out = op_->label_name(t.arity(), t.label) + "(";
  for (std::size_t i = 0; i < t.vars.size(); ++i) {
    if (i) out += ",";
    out += atom(t.vars[i]);
  }
  return out + ")";
}

std::string TruncatedMonad::show(const Term& t) const {
  return show(t, [](int v) { return std::to_string(v + 1); });
}

MonadPtr builtin_monad(std::string_view name, int nmax) {
  if (name.size() > 5 && name.substr(0, 4) == "reg(" && name.back() == ')') {
    return regular_part(builtin_monad(name.substr(4, name.size() - 5), nmax)).monad;
  }
  OperadPtr op = builtin_operad(name, std::max(2 * nmax - 1, 1));
  const MonadMode mode = op->mode() == OperadMode::regular ? MonadMode::regular : MonadMode::analytic;
  return std::make_shared<TruncatedMonad>(op, mode, nmax);
}

Budget arity_budget(const std::vector<Term>& pool, int cap) {
  Budget b;
  b.caps = {cap};
  b.weights.resize(1);
  for (const auto& t : pool) b.weights[0].push_back(t.arity());
  return b;
}

namespace {

std::string show_map(std::span<const int> f) {
  std::string out = "[";
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(f[i] + 1);
  }
  return out + "]";
}

template <typename Fn>
void guarded(CheckResult& check, Fn&& fn) {
  try {
    ++check.instances;
    fn();
  } catch (const TruncationError&) {
    --check.instances;
    ++check.out_of_fragment;
  }
}

// Terms over a pool of terms, shown with the inner terms spelled out.
std::string show_nested(const TruncatedMonad& t, const Term& outer, const std::vector<Term>& pool) {
  return t.show(outer, [&](int v) { return t.show(pool[static_cast<std::size_t>(v)]); });
}

Budget depth_three_budget(const std::vector<Term>& p2, int nmax) {
  Budget b;
  b.caps = {nmax, nmax};
  b.weights.resize(2);
  for (const auto& w : p2) {
    b.weights[0].push_back(0);
    b.weights[1].push_back(w.arity());
  }
  return b;
}

}  // namespace

Report check_monad_laws(const TruncatedMonad& t, const LawCaps& caps) {
  Report report;
  report.subject = "monad " + t.name() + " (" + to_string(t.mode()) + ", N_max=" + std::to_string(t.nmax()) + ")";
  const int nmax = t.nmax();

  {
    CheckResult& check = report.add("unit laws", "all terms over (n], n <= " + std::to_string(caps.size_cap));
    for (int n = 0; n <= caps.size_cap; ++n) {
      const std::vector<Term> p1 = t.eval(n);
      const TermPool pool(p1);
      std::vector<int> eta(static_cast<std::size_t>(n));
      for (int x = 0; x < n; ++x) eta[static_cast<std::size_t>(x)] = pool.index(t.unit(x));
      for (int i = 0; i < pool.size(); ++i) {
        guarded(check, [&] {
          const Term left = t.join(t.unit(i), pool);
          if (!(left == p1[static_cast<std::size_t>(i)])) {
            check.fail("mu(eta(" + t.show(p1[static_cast<std::size_t>(i)]) + ")) = " + t.show(left));
          }
        });
        guarded(check, [&] {
          const Term right = t.join(t.map(p1[static_cast<std::size_t>(i)], eta), pool);
          if (!(right == p1[static_cast<std::size_t>(i)])) {
            check.fail("mu(T(eta)(" + t.show(p1[static_cast<std::size_t>(i)]) + ")) = " + t.show(right));
          }
        });
      }
    }
  }

  {
    CheckResult& check = report.add(
        "associativity", "T^3((n]) for n <= " + std::to_string(caps.assoc_size_cap) +
                             " with at most N_max leaves and N_max middle terms");
    for (int n = 0; n <= caps.assoc_size_cap; ++n) {
      const std::vector<Term> p1 = t.eval(n);
      const TermPool pool1(p1);
      const Budget b2 = arity_budget(p1, nmax);
      const std::vector<Term> p2 = t.eval(static_cast<int>(p1.size()), &b2);
      std::vector<int> flat(p2.size());
      std::vector<int> leaves(p2.size());
      for (std::size_t j = 0; j < p2.size(); ++j) {
        try {
          flat[j] = pool1.index(t.join(p2[j], pool1));
        } catch (const TruncationError&) {
          flat[j] = -1;
        }
        for (int v : p2[j].vars) leaves[j] += p1[static_cast<std::size_t>(v)].arity();
      }
      Budget b3 = depth_three_budget(p2, nmax);
      for (std::size_t j = 0; j < p2.size(); ++j) b3.weights[0][j] = leaves[j];
      const std::vector<Term> p3 = t.eval(static_cast<int>(p2.size()), &b3);
      for (const auto& w : p3) {
        guarded(check, [&] {
          for (int v : w.vars) {
            if (flat[static_cast<std::size_t>(v)] < 0) throw TruncationError("inner multiplication beyond caps");
          }
          const Term left = t.join(t.map(w, flat), pool1);
          const Term right = t.join(t.join(w, p2), pool1);
          if (!(left == right)) {
            check.fail("over (" + std::to_string(n) + "]: mu.T(mu) = " + t.show(left) + " but mu.mu_T = " +
                       t.show(right) + " on " + t.show(w, [&](int v) {
                         return show_nested(t, p2[static_cast<std::size_t>(v)], p1);
                       }));
          }
        });
      }
    }
  }

  CheckResult& unit_nat = report.add("naturality of unit", "all maps between (n], (m], n, m <= " + std::to_string(caps.size_cap));
  CheckResult& mult_nat = report.add("naturality of multiplication",
                                     "all maps between (n], (m], n, m <= " + std::to_string(caps.size_cap) +
                                         ", T^2 terms with at most N_max leaves");
  for (int n = 0; n <= caps.size_cap; ++n) {
    const std::vector<Term> p1n = t.eval(n);
    const TermPool pool1n(p1n);
    const Budget b2 = arity_budget(p1n, nmax);
    const std::vector<Term> p2n = t.eval(static_cast<int>(p1n.size()), &b2);
    std::vector<std::optional<Term>> mu_n;
    mu_n.reserve(p2n.size());
    for (const auto& w : p2n) {
      try {
        mu_n.push_back(t.join(w, pool1n));
      } catch (const TruncationError&) {
        mu_n.push_back(std::nullopt);
      }
    }
    for (int m = 0; m <= caps.size_cap; ++m) {
      const TermPool pool1m(t.eval(m));
      for (const auto& f : enumerate_maps(n, m, MapKind::all)) {
        for (int x = 0; x < n; ++x) {
          guarded(unit_nat, [&] {
            if (!(t.map(t.unit(x), f) == t.unit(f[static_cast<std::size_t>(x)]))) {
              unit_nat.fail("T(f)(eta(" + std::to_string(x + 1) + ")) != eta(f(x)) for f=" + show_map(f));
            }
          });
        }
        std::vector<int> tf(p1n.size());
        for (std::size_t i = 0; i < p1n.size(); ++i) tf[i] = pool1m.index(t.map(p1n[i], f));
        for (std::size_t j = 0; j < p2n.size(); ++j) {
          guarded(mult_nat, [&] {
            if (!mu_n[j]) throw TruncationError("multiplication beyond caps");
            const Term left = t.map(*mu_n[j], f);
            const Term right = t.join(t.map(p2n[j], tf), pool1m);
            if (!(left == right)) {
              mult_nat.fail("f=" + show_map(f) + " on " + show_nested(t, p2n[j], p1n) + ": " + t.show(left) +
                            " != " + t.show(right));
            }
          });
        }
      }
    }
  }
  return report;
}

MonadMorphism::MonadMorphism(std::string name, MonadPtr source, MonadPtr target, Table table)
    : name_(std::move(name)), source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
  const int nmax = source_->nmax();
  if (static_cast<int>(table_.size()) != nmax + 1) throw Error(name_ + ": component table needs arities 0..N_max");
  bool induced = true;
  std::vector<std::vector<int>> maps(table_.size());
  for (int n = 0; n <= nmax; ++n) {
    auto& row = table_[static_cast<std::size_t>(n)];
    if (static_cast<int>(row.size()) != source_->op().label_count(n)) {
      throw Error(name_ + ": component table for arity " + std::to_string(n) + " has the wrong length");
    }
    for (auto& entry : row) {
      if (!entry) {
        induced = false;
        maps[static_cast<std::size_t>(n)].push_back(-1);
        continue;
      }
      for (int v : entry->vars) {
        if (v < 0 || v >= n) throw Error(name_ + ": component value uses a variable outside (n]");
      }
      if (entry->label < 0 || entry->label >= target_->op().label_count(entry->arity())) {
        throw Error(name_ + ": component value has an unknown label");
      }
      *entry = target_->normalize(entry->vars, entry->label);
      if (entry->arity() > target_->nmax()) {
        entry.reset();
        induced = false;
        maps[static_cast<std::size_t>(n)].push_back(-1);
        continue;
      }
      bool identity_vars = entry->arity() == n;
      for (int i = 0; identity_vars && i < n; ++i) identity_vars = entry->vars[static_cast<std::size_t>(i)] == i;
      if (!identity_vars) induced = false;
      maps[static_cast<std::size_t>(n)].push_back(entry->label);
    }
  }
  if (induced) label_maps_ = std::move(maps);
}

MonadMorphism MonadMorphism::identity(MonadPtr monad) {
  std::vector<std::vector<int>> maps;
  for (int n = 0; n <= monad->nmax(); ++n) {
    std::vector<int> row(static_cast<std::size_t>(monad->op().label_count(n)));
    std::iota(row.begin(), row.end(), 0);
    maps.push_back(std::move(row));
  }
  return from_label_maps("id_" + monad->name(), monad, monad, std::move(maps));
}

MonadMorphism MonadMorphism::from_label_maps(std::string name, MonadPtr source, MonadPtr target,
                                             std::vector<std::vector<int>> maps) {
  Table table;
  for (int n = 0; n <= source->nmax(); ++n) {
    if (static_cast<std::size_t>(n) >= maps.size()) throw Error(name + ": label map missing arity " + std::to_string(n));
    std::vector<int> id(static_cast<std::size_t>(n));
    std::iota(id.begin(), id.end(), 0);
    std::vector<std::optional<Term>> row;
    for (int l : maps[static_cast<std::size_t>(n)]) row.push_back(Term{id, l});
    table.push_back(std::move(row));
  }
  return MonadMorphism(std::move(name), std::move(source), std::move(target), std::move(table));
}

MonadMorphism MonadMorphism::from_function(std::string name, MonadPtr source, MonadPtr target,
                                           const std::function<std::optional<Term>(int n, int r)>& fn) {
  Table table;
  for (int n = 0; n <= source->nmax(); ++n) {
    std::vector<std::optional<Term>> row;
    for (int r = 0; r < source->op().label_count(n); ++r) row.push_back(fn(n, r));
    table.push_back(std::move(row));
  }
  return MonadMorphism(std::move(name), std::move(source), std::move(target), std::move(table));
}

std::optional<Term> MonadMorphism::apply(const Term& t) const {
  const auto& entry = table_.at(static_cast<std::size_t>(t.arity())).at(static_cast<std::size_t>(t.label));
  if (!entry) return std::nullopt;
  return target_->map(*entry, t.vars);
}

int MonadMorphism::label_map(int n, int r) const {
  if (!label_maps_) throw Error(name_ + " is not induced by coefficient maps");
  return (*label_maps_).at(static_cast<std::size_t>(n)).at(static_cast<std::size_t>(r));
}

MonadMorphism compose(const MonadMorphism& g, const MonadMorphism& f) {
  if (f.target() != g.source() && f.target()->name() != g.source()->name()) {
    throw CompositionError("monad morphisms " + g.name() + " and " + f.name() + " are not composable");
  }
  return MonadMorphism::from_function(g.name() + "." + f.name(), f.source(), g.target(),
                                      [&](int n, int r) -> std::optional<Term> {
                                        const auto& mid = f.table()[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
                                        if (!mid) return std::nullopt;
                                        return g.apply(*mid);
                                      });
}

Report check_morphism(const MonadMorphism& tau, const LawCaps& caps) {
  const TruncatedMonad& s = *tau.source();
  const TruncatedMonad& t = *tau.target();
  Report report;
  report.subject = "monad morphism " + tau.name();

  {
    CheckResult& check = report.add("well-definedness", "representables (n], n <= N_max of the source");
    for (int n = 0; n <= s.nmax(); ++n) {
      for (int m = 0; m <= n; ++m) {
        const auto maps = s.mode() == MonadMode::regular ? enumerate_maps(n, m, MapKind::surjective)
                                                         : (n == m ? all_permutations(n) : std::vector<std::vector<int>>{});
        for (const auto& f : maps) {
          for (int r = 0; r < s.op().label_count(n); ++r) {
            const int moved = s.op().act_surjection(f, m, r);
            const auto& a = tau.table()[static_cast<std::size_t>(m)][static_cast<std::size_t>(moved)];
            const auto& b = tau.table()[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
            if (!a || !b) {
              ++check.out_of_fragment;
              continue;
            }
            ++check.instances;
            const Term pushed = t.map(*b, f);
            if (!(pushed == *a)) {
              check.fail("tau(R(s) " + s.op().label_name(n, r) + ") = " + t.show(*a) + " but T(s)(tau(...)) = " +
                         t.show(pushed) + " for s=" + show_map(f));
            }
          }
        }
      }
    }
  }

  {
    CheckResult& check = report.add("unit", "tau(eta(x)) = eta(x)");
    ++check.instances;
    const auto img = tau.apply(s.unit(0));
    if (!img || !(*img == t.unit(0))) check.fail("tau(eta(x)) is " + (img ? t.show(*img) : std::string("undefined")));
  }

  {
    CheckResult& check = report.add("multiplication",
                                    "S^2((n]) for n <= " + std::to_string(caps.assoc_size_cap) + " with at most N_max leaves");
    for (int n = 0; n <= caps.assoc_size_cap; ++n) {
      const std::vector<Term> p1 = s.eval(n);
      const TermPool pool1(p1);
      const Budget b2 = arity_budget(p1, s.nmax());
      const std::vector<Term> p2 = s.eval(static_cast<int>(p1.size()), &b2);
      // tau_X on the inner level, interned into a pool of T(X).
      TermPool tx;
      std::vector<int> inner(p1.size(), -1);
      for (std::size_t i = 0; i < p1.size(); ++i) {
        if (auto img = tau.apply(p1[i])) inner[i] = tx.intern(*img);
      }
      for (const auto& w : p2) {
        bool defined = std::all_of(w.vars.begin(), w.vars.end(), [&](int v) { return inner[static_cast<std::size_t>(v)] >= 0; });
        if (!defined) {
          ++check.out_of_fragment;
          continue;
        }
        guarded(check, [&] {
          const auto left = tau.apply(s.join(w, pool1));
          const Term moved = s.map(w, inner);
          const auto outer = tau.apply(moved);
          if (!left || !outer) throw TruncationError("component outside caps");
          const Term right = t.join(*outer, tx);
          if (!(*left == right)) {
            check.fail("on " + show_nested(s, w, p1) + ": tau(mu(w)) = " + t.show(*left) + " but mu(tau tau(w)) = " +
                       t.show(right));
          }
        });
      }
    }
  }

  {
    CheckResult& check = report.add("naturality", "all maps between (n], (m], n, m <= " + std::to_string(caps.size_cap));
    for (int n = 0; n <= caps.size_cap; ++n) {
      const std::vector<Term> sx = s.eval(n);
      std::vector<std::optional<Term>> img;
      for (const auto& x : sx) img.push_back(tau.apply(x));
      for (int m = 0; m <= caps.size_cap; ++m) {
        for (const auto& f : enumerate_maps(n, m, MapKind::all)) {
          for (std::size_t i = 0; i < sx.size(); ++i) {
            const auto right = tau.apply(s.map(sx[i], f));
            if (!img[i] || !right) {
              ++check.out_of_fragment;
              continue;
            }
            ++check.instances;
            const Term left = t.map(*img[i], f);
            if (!(left == *right)) {
              check.fail("f=" + show_map(f) + " on " + s.show(sx[i]) + ": " + t.show(left) + " != " + t.show(*right));
            }
          }
        }
      }
    }
  }
  return report;
}

MonadMorphism terminal_morphism(MonadPtr source, MonadPtr target) {
  std::vector<std::vector<int>> maps;
  for (int n = 0; n <= source->nmax(); ++n) {
    const int count = source->op().label_count(n);
    if (count > 0 && target->op().label_count(n) != 1) {
      throw Error(target->name() + " has no unique label of arity " + std::to_string(n));
    }
    maps.emplace_back(static_cast<std::size_t>(count), 0);
  }
  return MonadMorphism::from_label_maps(source->name() + "->" + target->name(), source, target, std::move(maps));
}

namespace {

const LeafWordOperad& leaf_word(const TruncatedMonad& m, LeafWordOperad::Kind kind) {
  const auto* op = dynamic_cast<const LeafWordOperad*>(&m.op());
  if (!op || op->kind() != kind) throw Error(m.name() + " is not the expected builtin");
  return *op;
}

// Shape and leaf variables of the term obtained by b(u, v) |-> b(u, u).
std::pair<std::string, std::vector<int>> duplicate(std::string_view shape, std::size_t& pos,
                                                   const std::vector<int>& beta, std::size_t& leaf) {
  if (shape[pos] == 'x') {
    ++pos;
    return {"x", {beta[leaf++]}};
  }
  ++pos;
  auto left = duplicate(shape, pos, beta, leaf);
  duplicate(shape, pos, beta, leaf);
  ++pos;
  std::vector<int> vars = left.second;
  vars.insert(vars.end(), left.second.begin(), left.second.end());
  return {"(" + left.first + left.first + ")", std::move(vars)};
}

}  // namespace

MonadMorphism forget_brackets(MonadPtr magma, MonadPtr assoc) {
  const auto& mop = leaf_word(*magma, LeafWordOperad::Kind::magma);
  const auto& aop = leaf_word(*assoc, LeafWordOperad::Kind::assoc);
  std::vector<std::vector<int>> maps;
  for (int n = 0; n <= magma->nmax(); ++n) {
    std::vector<int> row;
    for (int r = 0; r < mop.label_count(n); ++r) row.push_back(aop.encode(n, "", mop.leaves(n, r)));
    maps.push_back(std::move(row));
  }
  return MonadMorphism::from_label_maps(magma->name() + "->" + assoc->name(), magma, assoc, std::move(maps));
}

MonadMorphism magma_duplication(MonadPtr magma) {
  const auto& op = leaf_word(*magma, LeafWordOperad::Kind::magma);
  const TruncatedMonad* m = magma.get();
  return MonadMorphism::from_function("dup", magma, magma, [&op, m](int n, int r) -> std::optional<Term> {
    std::size_t pos = 0;
    std::size_t leaf = 0;
    auto [shape, vars] = duplicate(op.shape(n, r), pos, op.leaves(n, r), leaf);
    const int len = static_cast<int>(vars.size());
    if (len > m->nmax()) return std::nullopt;
    std::vector<int> id(static_cast<std::size_t>(len));
    std::iota(id.begin(), id.end(), 0);
    return m->normalize(vars, op.encode(len, shape, id));
  });
}

RegularPartOperad::RegularPartOperad(MonadPtr base) : base_(std::move(base)) {
  for (int n = 0; n <= base_->nmax(); ++n) {
    std::vector<Term> exact;
    for (auto& t : base_->eval(n)) {
      if (is_surjective(t.vars, n)) exact.push_back(std::move(t));
    }
    labels_.push_back(std::move(exact));
  }
  unit_ = label_of(1, base_->unit(0));
}

int RegularPartOperad::label_count(int n) const {
  if (n < 0 || n > base_->nmax()) return 0;
  return static_cast<int>(labels_[static_cast<std::size_t>(n)].size());
}

const Term& RegularPartOperad::term(int n, int label) const {
  if (label < 0 || label >= label_count(n)) throw OperadError(name() + ": no label " + std::to_string(label) + " in arity " + std::to_string(n));
  return labels_[static_cast<std::size_t>(n)][static_cast<std::size_t>(label)];
}

int RegularPartOperad::label_of(int n, const Term& t) const {
  if (n > base_->nmax() || t.arity() > base_->nmax()) throw TruncationError(name() + ": term beyond the leaf cap");
  const auto& ls = labels_[static_cast<std::size_t>(n)];
  auto it = std::lower_bound(ls.begin(), ls.end(), t);
  if (it == ls.end() || !(*it == t)) throw OperadError(name() + ": " + base_->show(t) + " is not support-exact");
  return static_cast<int>(it - ls.begin());
}

std::string RegularPartOperad::label_name(int n, int label) const { return base_->show(term(n, label)); }

std::optional<int> RegularPartOperad::find_label(int n, std::string_view name) const {
  if (n < 0 || n > base_->nmax()) return std::nullopt;
  const auto& ls = labels_[static_cast<std::size_t>(n)];
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (base_->show(ls[i]) == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

int RegularPartOperad::act_permutation(std::span<const int> sigma, int label) const {
  const int n = static_cast<int>(sigma.size());
  return label_of(n, base_->map(term(n, label), sigma));
}

int RegularPartOperad::act_surjection(std::span<const int> s, int m, int label) const {
  if (!is_surjective(s, m)) throw OperadError(name() + ": surjection action along a non-surjective map");
  return label_of(m, base_->map(term(static_cast<int>(s.size()), label), s));
}

LabelRef RegularPartOperad::substitute(LabelRef outer, std::span<const LabelRef> inners) const {
  if (static_cast<int>(inners.size()) != outer.arity) throw OperadError(name() + ": substitution arity mismatch");
  const Term& o = term(outer.arity, outer.label);
  std::vector<Term> shifted;
  int offset = 0;
  for (const auto& l : inners) {
    Term t = term(l.arity, l.label);
    for (int& v : t.vars) v += offset;
    offset += l.arity;
    shifted.push_back(std::move(t));
  }
  if (offset > max_arity()) throw TruncationError(name() + ": substitution beyond cap");
  return {offset, label_of(offset, base_->join(o, shifted))};
}

Term RegularPartOperad::to_regular(const Term& t) const {
  Factorization f = factor(t.vars);
  const int m = static_cast<int>(f.image.size());
  const Term inner = base_->normalize(f.surjection, t.label);
  return Term{std::move(f.image), label_of(m, inner)};
}

RegularPart regular_part(MonadPtr base) {
  auto op = std::make_shared<RegularPartOperad>(base);
  auto monad = std::make_shared<TruncatedMonad>(op, MonadMode::regular, base->nmax(), op->name());
  MonadMorphism counit = MonadMorphism::from_function(
      "counit " + op->name() + "->" + base->name(), monad, base,
      [op](int n, int r) -> std::optional<Term> { return op->term(n, r); });
  return RegularPart{monad, std::move(counit)};
}

MonadMorphism regular_duplication(MonadPtr reg_magma) {
  const auto* op = dynamic_cast<const RegularPartOperad*>(&reg_magma->op());
  if (!op) throw Error(reg_magma->name() + " is not a regular part");
  auto dup = std::make_shared<MonadMorphism>(magma_duplication(op->base()));
  return MonadMorphism::from_function("dup_reg", reg_magma, reg_magma, [op, dup](int n, int r) -> std::optional<Term> {
    auto d = dup->apply(op->term(n, r));
    if (!d) return std::nullopt;
    return op->to_regular(*d);
  });
}

namespace {

Classification classify(const MonadMorphism& tau, int size_cap, bool pullback) {
  const TruncatedMonad& s = *tau.source();
  const TruncatedMonad& t = *tau.target();
  Classification out;
  out.property = pullback ? "semicartesian" : "weakly cartesian";
  for (int m = 0; m <= size_cap && out.holds; ++m) {
    const std::vector<Term> sy = s.eval(m);
    const TermPool sy_pool(sy);
    std::vector<std::optional<Term>> tau_y;
    for (const auto& y : sy) tau_y.push_back(tau.apply(y));
    for (int n = 0; n <= m && out.holds; ++n) {
      const std::vector<Term> sx = s.eval(n);
      const std::vector<Term> tx = t.eval(n);
      for (const auto& u : enumerate_maps(n, m, MapKind::injective)) {
        std::map<Term, std::vector<int>> fibre;
        for (std::size_t i = 0; i < tx.size(); ++i) fibre[t.map(tx[i], u)].push_back(static_cast<int>(i));
        std::set<std::pair<int, int>> pb;
        for (std::size_t j = 0; j < sy.size(); ++j) {
          if (!tau_y[j]) {
            ++out.out_of_fragment;
            continue;
          }
          auto it = fibre.find(*tau_y[j]);
          if (it == fibre.end()) continue;
          for (int i : it->second) pb.emplace(static_cast<int>(j), i);
        }
        std::map<std::pair<int, int>, int> gap;
        for (std::size_t k = 0; k < sx.size(); ++k) {
          const auto img = tau.apply(sx[k]);
          if (!img) {
            ++out.out_of_fragment;
            continue;
          }
          ++out.instances;
          const int j = sy_pool.index(s.map(sx[k], u));
          const int i = static_cast<int>(std::lower_bound(tx.begin(), tx.end(), *img) - tx.begin());
          auto [it, inserted] = gap.emplace(std::make_pair(j, i), static_cast<int>(k));
          if (!inserted && pullback) {
            out.holds = false;
            out.witness = "u=" + show_map(u) + ": " + s.show(sx[static_cast<std::size_t>(it->second)]) + " and " +
                          s.show(sx[k]) + " have the same image in the pullback";
            return out;
          }
        }
        for (const auto& e : pb) {
          ++out.instances;
          if (!gap.count(e)) {
            out.holds = false;
            out.witness = "u=" + show_map(u) + " from (" + std::to_string(n) + "] into (" + std::to_string(m) +
                          "]: pullback element (" + s.show(sy[static_cast<std::size_t>(e.first)]) + ", " +
                          t.show(tx[static_cast<std::size_t>(e.second)]) + ") is not in the image of " + s.name() +
                          "((" + std::to_string(n) + "])";
            return out;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace

Classification check_semicartesian(const MonadMorphism& tau, int size_cap) { return classify(tau, size_cap, true); }

Classification check_weakly_cartesian(const MonadMorphism& tau, int size_cap) { return classify(tau, size_cap, false); }

}  // namespace plonka
