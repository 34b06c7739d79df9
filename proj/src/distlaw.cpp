#include "plonka/distlaw.hpp"

#include <algorithm>
#include <numeric>

namespace plonka {

std::string to_string(LawKind kind) { return kind == LawKind::rho ? "rho" : "alpha"; }

std::string to_string(LawVariant variant) {
  return variant == LawVariant::with_bottom ? "with_bottom" : "without_bottom";
}

namespace {

std::string lattice_name(LawKind kind, LawVariant variant) {
  std::string n = kind == LawKind::rho ? "L" : "C";
  return variant == LawVariant::without_bottom ? n + "'" : n;
}

// A map on a carrier of the given size that is only read on `used`.
std::vector<int> partial_map(int size, std::span<const int> used, const std::function<int(int)>& f) {
  std::vector<int> out(static_cast<std::size_t>(size), 0);
  for (int v : used) out[static_cast<std::size_t>(v)] = f(v);
  return out;
}

std::string show_tuple(std::span<const int> f) {
  std::string out = "(";
  for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + std::to_string(f[i] + 1);
  return out + ")";
}

}  // namespace

DistributiveLaw::DistributiveLaw(LawKind kind, LawVariant variant, MonadPtr base, bool reversed_slots)
    : kind_(kind), variant_(variant), base_(std::move(base)), reversed_(reversed_slots) {
  const MonadMode want = kind == LawKind::rho ? MonadMode::regular : MonadMode::analytic;
  if (base_->mode() != want) {
    throw AlgebraError(to_string(kind) + " needs a " + to_string(want) + " base, " + base_->name() + " is " +
                       to_string(base_->mode()));
  }
  lattice_ = builtin_monad(lattice_name(kind, variant), base_->nmax());
}

std::string DistributiveLaw::name() const {
  std::string n = to_string(kind_);
  if (variant_ == LawVariant::without_bottom) n += "'";
  n += "_" + base_->name();
  if (reversed_) n += " (reversed slots)";
  return n;
}

Term DistributiveLaw::apply(const Term& t, std::span<const Term> inner, TermPool& out) const {
  const TruncatedMonad& T = *base_;
  const TruncatedMonad& S = *lattice_;
  const int k = t.arity();
  std::vector<const std::vector<int>*> phi;
  std::int64_t copies = 1;
  for (int v : t.vars) {
    const Term& s = inner[static_cast<std::size_t>(v)];
    if (s.arity() == 0 && variant_ == LawVariant::without_bottom) {
      throw AlgebraError(name() + ": empty inner term without bottom");
    }
    phi.push_back(&s.vars);
    copies *= s.arity();
    if (copies * k > T.op().max_arity() || copies > S.op().max_arity()) {
      throw TruncationError(name() + ": k * M beyond the caps");
    }
  }
  std::vector<int> result;
  std::vector<int> choice(static_cast<std::size_t>(k), 0);
  std::vector<int> args(static_cast<std::size_t>(k));
  for (std::int64_t c = 0; c < copies; ++c) {
    for (int i = 0; i < k; ++i) {
      const int slot = reversed_ ? k - 1 - i : i;
      args[static_cast<std::size_t>(slot)] = (*phi[static_cast<std::size_t>(i)])[static_cast<std::size_t>(choice[static_cast<std::size_t>(i)])];
    }
    result.push_back(out.intern(T.normalize(args, t.label)));
    for (int i = k - 1; i >= 0; --i) {
      auto& j = choice[static_cast<std::size_t>(i)];
      if (++j < static_cast<int>(phi[static_cast<std::size_t>(i)]->size())) break;
      j = 0;
    }
  }
  Term s = S.normalize(result, 0);
  if (s.arity() > S.nmax()) throw TruncationError(name() + ": result beyond N_max of " + S.name());
  return s;
}

bool operator<(const ComposedTerm& a, const ComposedTerm& b) {
  if (!(a.outer == b.outer)) return a.outer < b.outer;
  return std::lexicographical_compare(a.inner.begin(), a.inner.end(), b.inner.begin(), b.inner.end());
}

ComposedTerm canonical(const TruncatedMonad& outer, ComposedTerm t) {
  std::vector<Term> used;
  for (int v : t.outer.vars) used.push_back(t.inner[static_cast<std::size_t>(v)]);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<int> vars;
  for (int v : t.outer.vars) {
    const Term& x = t.inner[static_cast<std::size_t>(v)];
    vars.push_back(static_cast<int>(std::lower_bound(used.begin(), used.end(), x) - used.begin()));
  }
  return ComposedTerm{outer.normalize(vars, t.outer.label), std::move(used)};
}

ComposedTerm distribute(const DistributiveLaw& law, const ComposedTerm& t) {
  TermPool out;
  Term s = law.apply(t.outer, t.inner, out);
  return canonical(*law.lattice(), ComposedTerm{std::move(s), out.terms()});
}

ComposedTerm rho(MonadPtr r, LawVariant variant, const ComposedTerm& t) {
  return distribute(DistributiveLaw(LawKind::rho, variant, std::move(r)), t);
}

ComposedTerm alpha(MonadPtr a, LawVariant variant, const ComposedTerm& t) {
  return distribute(DistributiveLaw(LawKind::alpha, variant, std::move(a)), t);
}

std::string show(const ComposedTerm& t, const TruncatedMonad& outer, const TruncatedMonad& inner,
                 const std::function<std::string(int)>& atom) {
  return outer.show(t.outer, [&](int v) { return inner.show(t.inner[static_cast<std::size_t>(v)], atom); });
}

Report check_beck(const DistributiveLaw& law, int size_cap) {
  const TruncatedMonad& T = *law.base();
  const TruncatedMonad& S = *law.lattice();
  const int cap = T.op().max_arity();
  Report report;
  report.subject = "Beck axioms for " + law.name();
  const std::string frag = "carriers of size <= " + std::to_string(size_cap) + ", k * M <= " + std::to_string(cap);
  // L' over L' would otherwise give two checks of the same name
  const std::string s_name = S.name() == T.name() ? S.name() + " (outer)" : S.name();
  const std::string t_name = S.name() == T.name() ? T.name() + " (inner)" : T.name();
  CheckResult& unit_s = report.add("unit of " + s_name, frag);
  CheckResult& unit_t = report.add("unit of " + t_name, frag);
  CheckResult& mult_s = report.add("multiplication of " + s_name, frag);
  CheckResult& mult_t = report.add("multiplication of " + t_name, frag);
  CheckResult& natural = report.add("naturality", frag);

  auto leaf_budget = [&](const std::vector<Term>& pool) {
    Budget b;
    b.caps = {cap};
    b.weights.resize(1);
    for (const auto& t : pool) b.weights[0].push_back(t.arity());
    return b;
  };
  // S-terms over Q, shown with Q's T-terms over x1, x2, ...
  auto show_st = [&](const Term& s, const TermPool& q) {
    return S.show(s, [&](int v) { return T.show(q[v]); });
  };

  for (int n = 0; n <= size_cap; ++n) {
    const TermPool ps(S.eval(n));
    const TermPool pt(T.eval(n));
    TermPool q;  // T-terms over (n], the carrier of every result

    std::vector<int> eta_s(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) eta_s[static_cast<std::size_t>(x)] = ps.index(S.unit(x));
    for (const auto& t : pt.terms()) {
      try {
        const Term lhs = law.apply(T.map(t, eta_s), ps.terms(), q);
        const Term rhs = S.unit(q.intern(t));
        ++unit_s.instances;
        if (!(lhs == rhs)) unit_s.fail(T.show(t) + ": lambda gives " + show_st(lhs, q));
      } catch (const TruncationError&) {
        ++unit_s.out_of_fragment;
      }
    }

    for (const auto& s : ps.terms()) {
      try {
        const Term lhs = law.apply(T.unit(ps.index(s)), ps.terms(), q);
        const Term rhs = S.map(s, partial_map(n, s.vars, [&](int x) { return q.intern(T.unit(x)); }));
        ++unit_t.instances;
        if (!(lhs == rhs)) unit_t.fail(S.show(s) + ": lambda gives " + show_st(lhs, q) + ", expected " + show_st(rhs, q));
      } catch (const TruncationError&) {
        ++unit_t.out_of_fragment;
      }
    }

    // T S S (n]
    {
      const Budget b1 = leaf_budget(ps.terms());
      const TermPool pss(S.eval(ps.size(), &b1));
      std::vector<int> join_s(static_cast<std::size_t>(pss.size()));
      std::vector<int> leaves(static_cast<std::size_t>(pss.size()), 0);
      for (int j = 0; j < pss.size(); ++j) {
        for (int v : pss[j].vars) leaves[static_cast<std::size_t>(j)] += ps[v].arity();
        try {
          auto f = ps.find(S.join(pss[j], ps));
          join_s[static_cast<std::size_t>(j)] = f ? *f : -1;
        } catch (const TruncationError&) {
          join_s[static_cast<std::size_t>(j)] = -1;
        }
      }
      Budget b2;
      b2.caps = {cap};
      b2.weights = {leaves};
      TermPool q_ts;  // T-terms over S(n]
      TermPool p_sq;  // S-terms over q
      for (const auto& w : T.eval(pss.size(), &b2)) {
        try {
          if (std::any_of(w.vars.begin(), w.vars.end(), [&](int v) { return join_s[static_cast<std::size_t>(v)] < 0; })) {
            throw TruncationError("join beyond the caps");
          }
          const Term lhs = law.apply(T.map(w, partial_map(pss.size(), w.vars, [&](int v) { return join_s[static_cast<std::size_t>(v)]; })), ps.terms(), q);
          const Term s1 = law.apply(w, pss.terms(), q_ts);
          const Term s2 = S.map(s1, partial_map(q_ts.size(), s1.vars, [&](int v) {
            return p_sq.intern(law.apply(q_ts[v], ps.terms(), q));
          }));
          const Term rhs = S.join(s2, p_sq);
          ++mult_s.instances;
          if (!(lhs == rhs)) {
            mult_s.fail(T.show(w, [&](int v) { return S.show(pss[v], [&](int u) { return S.show(ps[u]); }); }) +
                        ": lambda . T(mu) gives " + show_st(lhs, q) + ", mu . S(lambda) . lambda gives " + show_st(rhs, q));
          }
        } catch (const TruncationError&) {
          ++mult_s.out_of_fragment;
        }
      }
    }

    // T T S (n]
    {
      const Budget b1 = leaf_budget(ps.terms());
      const TermPool pts(T.eval(ps.size(), &b1));
      std::vector<int> leaves(static_cast<std::size_t>(pts.size()), 0);
      for (int j = 0; j < pts.size(); ++j) {
        for (int v : pts[j].vars) leaves[static_cast<std::size_t>(j)] += ps[v].arity();
      }
      Budget b2;
      b2.caps = {cap};
      b2.weights = {leaves};
      TermPool p_sq;  // S-terms over q
      TermPool qq;    // T-terms over q
      for (const auto& w : T.eval(pts.size(), &b2)) {
        try {
          const Term lhs = law.apply(T.join(w, pts), ps.terms(), q);
          const Term w2 = T.map(w, partial_map(pts.size(), w.vars, [&](int v) {
            return p_sq.intern(law.apply(pts[v], ps.terms(), q));
          }));
          const Term s = law.apply(w2, p_sq.terms(), qq);
          const Term rhs = S.map(s, partial_map(qq.size(), s.vars, [&](int v) { return q.intern(T.join(qq[v], q)); }));
          ++mult_t.instances;
          if (!(lhs == rhs)) {
            mult_t.fail(T.show(w, [&](int v) { return T.show(pts[v], [&](int u) { return S.show(ps[u]); }); }) +
                        ": lambda . mu gives " + show_st(lhs, q) + ", S(mu) . lambda . T(lambda) gives " + show_st(rhs, q));
          }
        } catch (const TruncationError&) {
          ++mult_t.out_of_fragment;
        }
      }
    }
  }

  // naturality along f: (n] -> (m]
  for (int n = 0; n <= size_cap; ++n) {
    const TermPool psn(S.eval(n));
    const Budget b = leaf_budget(psn.terms());
    const std::vector<Term> ts = T.eval(psn.size(), &b);
    for (int m = 0; m <= size_cap; ++m) {
      const TermPool psm(S.eval(m));
      for (const auto& f : enumerate_maps(n, m, MapKind::all)) {
        std::vector<int> sf(static_cast<std::size_t>(psn.size()), -1);
        for (int i = 0; i < psn.size(); ++i) {
          auto found = psm.find(S.map(psn[i], f));
          if (found) sf[static_cast<std::size_t>(i)] = *found;
        }
        TermPool qn;
        TermPool qm;
        for (const auto& t : ts) {
          try {
            if (std::any_of(t.vars.begin(), t.vars.end(), [&](int v) { return sf[static_cast<std::size_t>(v)] < 0; })) {
              throw TruncationError("S(f) beyond the caps");
            }
            const Term lhs = law.apply(T.map(t, sf), psm.terms(), qm);
            const Term at_n = law.apply(t, psn.terms(), qn);
            const Term rhs = S.map(at_n, partial_map(qn.size(), at_n.vars, [&](int v) { return qm.intern(T.map(qn[v], f)); }));
            ++natural.instances;
            if (!(lhs == rhs)) {
              natural.fail(T.show(t, [&](int v) { return S.show(psn[v]); }) + " along f = " + show_tuple(f) + ": " +
                           show_st(lhs, qm) + " vs " + show_st(rhs, qm));
            }
          } catch (const TruncationError&) {
            ++natural.out_of_fragment;
          }
        }
      }
    }
  }
  return report;
}

namespace {

// Labels are the canonical elements of S(T((n])) with full support.
class CompositeOperad final : public Operad {
 public:
  CompositeOperad(DistributiveLaw law, int nmax) : law_(std::move(law)), nmax_(nmax) {
    const TruncatedMonad& T = *law_.base();
    const TruncatedMonad& S = *law_.lattice();
    for (int n = 0; n <= nmax_; ++n) {
      const std::vector<Term> pt = T.eval(n);
      std::vector<ComposedTerm> exact;
      for (const auto& s : S.eval(static_cast<int>(pt.size()))) {
        ComposedTerm c = canonical(S, ComposedTerm{s, pt});
        std::vector<int> support;
        for (const auto& t : c.inner) support.insert(support.end(), t.vars.begin(), t.vars.end());
        if (is_surjective(support, n)) exact.push_back(std::move(c));
      }
      std::sort(exact.begin(), exact.end());
      labels_.push_back(std::move(exact));
    }
    unit_ = label_of(1, ComposedTerm{S.unit(0), {T.unit(0)}});
  }

  std::string name() const override { return law_.lattice()->name() + "." + law_.base()->name(); }
  OperadMode mode() const override { return OperadMode::regular; }
  int max_arity() const override { return 2 * nmax_ - 1; }
  int label_count(int n) const override {
    if (n < 0 || n > nmax_) return 0;
    return static_cast<int>(labels_[static_cast<std::size_t>(n)].size());
  }
  std::string label_name(int n, int label) const override {
    return show(term(n, label), *law_.lattice(), *law_.base(), [](int v) { return "x" + std::to_string(v + 1); });
  }
  int unit() const override { return unit_; }

  int act_permutation(std::span<const int> sigma, int label) const override {
    const int n = static_cast<int>(sigma.size());
    return label_of(n, moved(term(n, label), sigma));
  }
  int act_surjection(std::span<const int> s, int m, int label) const override {
    if (!is_surjective(s, m)) throw OperadError(name() + ": surjection action along a non-surjective map");
    return label_of(m, moved(term(static_cast<int>(s.size()), label), s));
  }

  LabelRef substitute(LabelRef outer, std::span<const LabelRef> inners) const override {
    if (static_cast<int>(inners.size()) != outer.arity) throw OperadError(name() + ": substitution arity mismatch");
    const TruncatedMonad& T = *law_.base();
    const TruncatedMonad& S = *law_.lattice();
    // Every inner element as an S-term over one pool p of shifted T-terms.
    TermPool p;
    std::vector<Term> es;
    int offset = 0;
    for (const auto& l : inners) {
      const ComposedTerm& c = term(l.arity, l.label);
      std::vector<int> idx;
      for (int v : c.outer.vars) {
        Term t = c.inner[static_cast<std::size_t>(v)];
        for (int& x : t.vars) x += offset;
        idx.push_back(p.intern(t));
      }
      es.push_back(S.normalize(idx, c.outer.label));
      offset += l.arity;
    }
    if (offset > max_arity()) throw TruncationError(name() + ": substitution beyond cap");
    const ComposedTerm& o = term(outer.arity, outer.label);
    TermPool tt;    // T-terms over p
    TermPool flat;  // T-terms over (offset]
    std::vector<int> all;
    for (int v : o.outer.vars) {
      const Term s = law_.apply(o.inner[static_cast<std::size_t>(v)], es, tt);
      for (int u : s.vars) all.push_back(flat.intern(T.join(tt[u], p)));
    }
    if (S.mode() == MonadMode::regular) {
      std::sort(all.begin(), all.end());
      all.erase(std::unique(all.begin(), all.end()), all.end());
    }
    if (static_cast<int>(all.size()) > S.nmax()) throw TruncationError(name() + ": outer layer beyond N_max");
    const ComposedTerm c = canonical(S, ComposedTerm{S.normalize(all, 0), flat.terms()});
    return {offset, label_of(offset, c)};
  }

  const ComposedTerm& term(int n, int label) const {
    if (label < 0 || label >= label_count(n)) {
      throw OperadError(name() + ": no label " + std::to_string(label) + " in arity " + std::to_string(n));
    }
    return labels_[static_cast<std::size_t>(n)][static_cast<std::size_t>(label)];
  }

 private:
  ComposedTerm moved(const ComposedTerm& c, std::span<const int> f) const {
    ComposedTerm out{c.outer, {}};
    for (const auto& t : c.inner) out.inner.push_back(law_.base()->map(t, f));
    return canonical(*law_.lattice(), std::move(out));
  }

  int label_of(int n, const ComposedTerm& c) const {
    if (n > nmax_) throw TruncationError(name() + ": arity beyond N_max");
    const auto& ls = labels_[static_cast<std::size_t>(n)];
    auto it = std::lower_bound(ls.begin(), ls.end(), c);
    if (it == ls.end() || !(*it == c)) throw TruncationError(name() + ": element beyond the layer caps");
    return static_cast<int>(it - ls.begin());
  }

  DistributiveLaw law_;
  int nmax_;
  std::vector<std::vector<ComposedTerm>> labels_;
  int unit_ = 0;
};

}  // namespace

MonadPtr composed_monad(const DistributiveLaw& law, int nmax, bool verify) {
  if (verify) {
    Report r = check_beck(law);
    if (!r.passed()) throw AlgebraError(r.summary());
  }
  auto op = std::make_shared<CompositeOperad>(law, nmax);
  return std::make_shared<TruncatedMonad>(op, MonadMode::regular, nmax, op->name());
}

}  // namespace plonka
