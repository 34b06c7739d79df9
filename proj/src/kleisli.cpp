#include "plonka/kleisli.hpp"

#include <algorithm>
#include <optional>

namespace plonka {

KleisliMap kleisli_identity(MonadPtr monad, FinSet x) {
  KleisliMap f{monad, x, x, {}};
  for (int i = 0; i < x.size(); ++i) f.values.push_back(monad->unit(i));
  return f;
}

KleisliMap kleisli_compose(const KleisliMap& g, const KleisliMap& f) {
  if (!(f.cod == g.dom)) throw CompositionError("Kleisli maps do not compose: codomain and domain differ");
  KleisliMap out{f.monad, f.dom, g.cod, {}};
  for (const auto& t : f.values) out.values.push_back(f.monad->join(t, g.values));
  return out;
}

FinSet product_set(const FinSet& x, const FinSet& y) {
  std::vector<std::string> atoms;
  for (int i = 0; i < x.size(); ++i) {
    for (int j = 0; j < y.size(); ++j) atoms.push_back("(" + x.atom(i) + "," + y.atom(j) + ")");
  }
  return FinSet(std::move(atoms));
}

namespace {

Term pair_product(const TruncatedMonad& T, const Term& a, const Term& b, int ny) {
  if (static_cast<std::int64_t>(a.arity()) * b.arity() > T.op().max_arity()) {
    throw TruncationError(T.name() + ": product beyond the operad cap");
  }
  std::vector<int> vars;
  for (int x : a.vars) {
    for (int y : b.vars) vars.push_back(x * ny + y);
  }
  Term t = T.normalize(vars, 0);
  if (t.arity() > T.nmax()) throw TruncationError(T.name() + ": product beyond N_max");
  return t;
}

}  // namespace

CommutativeStrength builtin_strength(std::string_view name, int nmax) {
  MonadPtr T = builtin_monad(name, nmax);
  CommutativeStrength st{std::string(name), T, {}, T->unit(0)};
  if (name == "C" || name == "C'" || name == "L" || name == "L'") {
    st.phi = [T](const Term& a, int, const Term& b, int ny) { return pair_product(*T, a, b, ny); };
  } else if (name == "MAYBE") {
    st.phi = [T](const Term& a, int, const Term& b, int ny) {
      if (a.arity() == 0 || b.arity() == 0) return Term{{}, 0};
      return T->unit(a.vars[0] * ny + b.vars[0]);
    };
  } else {
    throw Error("no builtin strength for '" + std::string(name) + "'");
  }
  return st;
}

CommutativeStrength broken_strength(std::string_view name, int nmax) {
  if (name == "L-union") {
    CommutativeStrength st = builtin_strength("L", nmax);
    st.name = "L-union";
    const MonadPtr T = st.monad;
    // a x {min b} together with {min a} x b
    st.phi = [T](const Term& a, int, const Term& b, int ny) {
      if (a.arity() == 0 || b.arity() == 0) return T->normalize(std::vector<int>{}, 0);
      std::vector<int> vars;
      for (int x : a.vars) vars.push_back(x * ny + b.vars[0]);
      for (int y : b.vars) vars.push_back(a.vars[0] * ny + y);
      std::sort(vars.begin(), vars.end());
      vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
      if (static_cast<int>(vars.size()) > T->nmax()) throw TruncationError("L-union: beyond N_max");
      return T->normalize(vars, 0);
    };
    return st;
  }
  if (name == "L-phibar") {
    CommutativeStrength st = builtin_strength("L", nmax);
    st.name = "L-phibar";
    st.phibar = st.monad->normalize(std::vector<int>{}, 0);
    return st;
  }
  throw Error("no broken strength '" + std::string(name) + "'");
}

Report check_oplax(const CommutativeStrength& st, int size_cap) {
  const TruncatedMonad& T = *st.monad;
  Report report;
  report.subject = "oplax morphism (x, phi) for " + st.name;
  const std::string frag = "carriers of size <= " + std::to_string(size_cap);
  CheckResult& unit = report.add("unit coherence", frag);
  CheckResult& mult = report.add("multiplication coherence", frag);
  CheckResult& natural = report.add("naturality", frag);
  CheckResult& nullary = report.add("unit of phibar", "T(1)");
  CheckResult& assoc = report.add("associativity", frag);
  CheckResult& units = report.add("left and right unit", frag);
  CheckResult& symmetry = report.add("symmetry", frag);

  auto show_on = [&](const Term& t, int n) { return T.show(t) + " over " + std::to_string(n); };
  auto guarded = [](CheckResult& c, const std::function<void()>& body) {
    try {
      body();
    } catch (const TruncationError&) {
      ++c.out_of_fragment;
    }
  };

  ++nullary.instances;
  if (!(st.phibar == T.unit(0))) nullary.fail("phibar = " + T.show(st.phibar) + " is not the unit");

  std::vector<std::vector<Term>> pools;
  for (int n = 0; n <= size_cap; ++n) pools.push_back(T.eval(n));

  for (int nx = 0; nx <= size_cap; ++nx) {
    for (int ny = 0; ny <= size_cap; ++ny) {
      for (int x = 0; x < nx; ++x) {
        for (int y = 0; y < ny; ++y) {
          guarded(unit, [&] {
            const Term got = st.phi(T.unit(x), nx, T.unit(y), ny);
            ++unit.instances;
            if (!(got == T.unit(x * ny + y))) unit.fail("phi(eta " + std::to_string(x + 1) + ", eta " + std::to_string(y + 1) + ") = " + T.show(got));
          });
        }
      }

      const auto& px = pools[static_cast<std::size_t>(nx)];
      const auto& py = pools[static_cast<std::size_t>(ny)];
      for (const auto& a : px) {
        for (const auto& b : py) {
          guarded(symmetry, [&] {
            const Term ab = st.phi(a, nx, b, ny);
            const Term ba = st.phi(b, ny, a, nx);
            std::vector<int> swap(static_cast<std::size_t>(nx * ny));
            for (int x = 0; x < nx; ++x) {
              for (int y = 0; y < ny; ++y) swap[static_cast<std::size_t>(x * ny + y)] = y * nx + x;
            }
            ++symmetry.instances;
            if (!(T.map(ab, swap) == ba)) symmetry.fail("phi(" + T.show(a) + ", " + T.show(b) + ") is not symmetric");
          });
        }
      }

      // T T X x T T Y
      const TermPool pool_x(px);
      const TermPool pool_y(py);
      const Budget bx = arity_budget(px, T.nmax());
      const Budget by = arity_budget(py, T.nmax());
      const std::vector<Term> ttx = T.eval(pool_x.size(), &bx);
      const std::vector<Term> tty = T.eval(pool_y.size(), &by);
      TermPool q;  // T(X x Y)
      std::vector<std::optional<int>> inner(static_cast<std::size_t>(pool_x.size() * pool_y.size()));
      std::vector<bool> done(inner.size(), false);
      auto inner_at = [&](int v) {
        if (!done[static_cast<std::size_t>(v)]) {
          done[static_cast<std::size_t>(v)] = true;
          try {
            inner[static_cast<std::size_t>(v)] = q.intern(st.phi(pool_x[v / pool_y.size()], nx, pool_y[v % pool_y.size()], ny));
          } catch (const TruncationError&) {
          }
        }
        if (!inner[static_cast<std::size_t>(v)]) throw TruncationError("phi beyond the caps");
        return *inner[static_cast<std::size_t>(v)];
      };
      for (const auto& A : ttx) {
        for (const auto& B : tty) {
          guarded(mult, [&] {
            const Term lhs = st.phi(T.join(A, pool_x), nx, T.join(B, pool_y), ny);
            const Term c = st.phi(A, pool_x.size(), B, pool_y.size());
            std::vector<int> f(static_cast<std::size_t>(pool_x.size() * pool_y.size()), 0);
            for (int v : c.vars) f[static_cast<std::size_t>(v)] = inner_at(v);
            const Term rhs = T.join(T.map(c, f), q);
            ++mult.instances;
            if (!(lhs == rhs)) {
              mult.fail("A = " + T.show(A, [&](int v) { return T.show(pool_x[v]); }) + ", B = " +
                        T.show(B, [&](int v) { return T.show(pool_y[v]); }) + ": phi . (mu x mu) = " + show_on(lhs, nx * ny) +
                        ", mu . T(phi) . phi = " + show_on(rhs, nx * ny));
            }
          });
        }
      }
    }
  }

  // naturality in the first variable along u: (n] -> (m]; the second
  // variable follows by symmetry
  for (int n = 0; n <= size_cap; ++n) {
    for (int m = 0; m <= size_cap; ++m) {
      for (const auto& u : enumerate_maps(n, m, MapKind::all)) {
        for (int ny = 0; ny <= size_cap; ++ny) {
          std::vector<int> uy(static_cast<std::size_t>(n * ny));
          for (int x = 0; x < n; ++x) {
            for (int y = 0; y < ny; ++y) uy[static_cast<std::size_t>(x * ny + y)] = u[static_cast<std::size_t>(x)] * ny + y;
          }
          for (const auto& a : pools[static_cast<std::size_t>(n)]) {
            for (const auto& b : pools[static_cast<std::size_t>(ny)]) {
              guarded(natural, [&] {
                const Term lhs = st.phi(T.map(a, u), m, b, ny);
                const Term rhs = T.map(st.phi(a, n, b, ny), uy);
                ++natural.instances;
                if (!(lhs == rhs)) natural.fail("phi(" + T.show(a) + ", " + T.show(b) + ") along u");
              });
            }
          }
        }
      }
    }
  }

  // (x, y, z) has the same index in (X x Y) x Z and X x (Y x Z), so the
  // associator is the identity on indices.
  const int small = std::min(size_cap, 2);
  for (int nx = 0; nx <= small; ++nx) {
    for (int ny = 0; ny <= small; ++ny) {
      for (const auto& a : pools[static_cast<std::size_t>(nx)]) {
        for (const auto& b : pools[static_cast<std::size_t>(ny)]) {
          guarded(units, [&] {
            ++units.instances;
            if (!(st.phi(st.phibar, 1, b, ny) == b)) units.fail("phi(phibar, " + T.show(b) + ") differs from it");
            if (!(st.phi(a, nx, st.phibar, 1) == a)) units.fail("phi(" + T.show(a) + ", phibar) differs from it");
          });
          for (int nz = 0; nz <= small; ++nz) {
            for (const auto& c : pools[static_cast<std::size_t>(nz)]) {
              guarded(assoc, [&] {
                const Term left = st.phi(st.phi(a, nx, b, ny), nx * ny, c, nz);
                const Term right = st.phi(a, nx, st.phi(b, ny, c, nz), ny * nz);
                ++assoc.instances;
                if (!(left == right)) assoc.fail("(" + T.show(a) + ", " + T.show(b) + ", " + T.show(c) + ")");
              });
            }
          }
        }
      }
    }
  }
  return report;
}

KleisliMap plonka_product(const CommutativeStrength& st, const KleisliMap& f1, const KleisliMap& f2) {
  KleisliMap out{st.monad, product_set(f1.dom, f2.dom), product_set(f1.cod, f2.cod), {}};
  for (const auto& a : f1.values) {
    for (const auto& b : f2.values) out.values.push_back(st.phi(a, f1.cod.size(), b, f2.cod.size()));
  }
  return out;
}

KleisliMap plonka_product(const CommutativeStrength& st) {
  const FinSet one({"*"});
  return KleisliMap{st.monad, one, one, {st.phibar}};
}

KleisliMap plonka_product(const CommutativeStrength& st, std::span<const KleisliMap> maps) {
  if (maps.empty()) return plonka_product(st);
  KleisliMap acc = maps[0];
  for (std::size_t i = 1; i < maps.size(); ++i) acc = plonka_product(st, acc, maps[i]);
  return acc;
}

Report check_product_functor(const CommutativeStrength& st, int size_cap) {
  const TruncatedMonad& T = *st.monad;
  Report report;
  report.subject = "Plonka product functor for " + st.name;
  CheckResult& ids = report.add("identities", "carriers of size <= " + std::to_string(size_cap));
  CheckResult& comp = report.add("composition", "elements of T(Y), maps on their support, |Y| = |Z| = " + std::to_string(size_cap));

  for (int nx = 0; nx <= size_cap; ++nx) {
    for (int ny = 0; ny <= size_cap; ++ny) {
      const FinSet x = FinSet::range(nx);
      const FinSet y = FinSet::range(ny);
      try {
        ++ids.instances;
        if (!(plonka_product(st, kleisli_identity(st.monad, x), kleisli_identity(st.monad, y)) ==
              kleisli_identity(st.monad, product_set(x, y)))) {
          ids.fail("prod(id, id) on " + std::to_string(nx) + " x " + std::to_string(ny) + " is not the identity");
        }
      } catch (const TruncationError&) {
        --ids.instances;
        ++ids.out_of_fragment;
      }
    }
  }

  struct Side {
    Term a;
    std::vector<Term> g;
    std::optional<Term> k;  // mu(T(g)(a))
  };
  const int n = size_cap;
  const std::vector<Term> ty = T.eval(n);
  const std::vector<Term> tz = T.eval(n);
  if (tz.empty()) return report;
  std::vector<Side> sides;
  for (const auto& a : ty) {
    std::vector<int> support = a.vars;
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    for (const auto& pick : enumerate_maps(static_cast<int>(support.size()), static_cast<int>(tz.size()), MapKind::all)) {
      Side s{a, std::vector<Term>(static_cast<std::size_t>(n), tz[0]), std::nullopt};
      for (std::size_t i = 0; i < support.size(); ++i) s.g[static_cast<std::size_t>(support[i])] = tz[static_cast<std::size_t>(pick[i])];
      try {
        s.k = T.join(a, s.g);
      } catch (const TruncationError&) {
      }
      sides.push_back(std::move(s));
    }
  }
  const int cap = T.op().max_arity();
  for (const auto& s1 : sides) {
    for (const auto& s2 : sides) {
      if (!s1.k || !s2.k || s1.a.arity() * s2.a.arity() > cap || s1.k->arity() * s2.k->arity() > T.nmax()) {
        ++comp.out_of_fragment;
        continue;
      }
      try {
        const Term lhs = st.phi(*s1.k, n, *s2.k, n);
        const Term p = st.phi(s1.a, n, s2.a, n);
        std::vector<Term> gg(static_cast<std::size_t>(n * n), tz[0]);
        for (int v : p.vars) gg[static_cast<std::size_t>(v)] = st.phi(s1.g[static_cast<std::size_t>(v / n)], n, s2.g[static_cast<std::size_t>(v % n)], n);
        const Term rhs = T.join(p, gg);
        ++comp.instances;
        if (!(lhs == rhs)) {
          comp.fail("a1 = " + T.show(s1.a) + ", a2 = " + T.show(s2.a) + ": prod(g1 . f1, g2 . f2) = " + T.show(lhs) +
                    ", prod(g1, g2) . prod(f1, f2) = " + T.show(rhs));
        }
      } catch (const TruncationError&) {
        ++comp.out_of_fragment;
      }
    }
  }
  return report;
}

}  // namespace plonka
