// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance <path to plonka binary> <fixtures dir>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>

#include "plonka/convexity.hpp"
#include "plonka/distlaw.hpp"
#include "plonka/io.hpp"
#include "plonka/kleisli.hpp"
#include "plonka/plonka_sum.hpp"
#include "semilattices.hpp"

using namespace plonka;
using namespace plonka::testing;
using boost::multiprecision::cpp_int;

namespace {

constexpr double kBuiltinSeconds = 60.0;
constexpr double kSuiteSeconds = 600.0;
constexpr int kKleisliPairs = 1000;
constexpr int kConvexInstances = 200;
constexpr std::uint64_t kSeed = 20240611u;

struct Outcome {
  bool pass = true;
  std::string detail;
  // Everything a rerun must reproduce; timings stay out of it.
  std::string transcript;
};

// Collects failures and the report dumps of one criterion.
struct Tally {
  Outcome out;
  std::vector<std::string> failures;
  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void record(const Report& r) {
    out.transcript += to_json(r).dump();
    out.transcript += '\n';
  }
  void note(const std::string& s) {
    out.transcript += s;
    out.transcript += '\n';
  }
  Outcome finish(std::string detail) {
    out.pass = failures.empty();
    if (!failures.empty()) {
      detail += "; failures: " + std::to_string(failures.size()) + ", first: " + failures.front();
    }
    out.detail = std::move(detail);
    out.transcript += out.detail;
    return out;
  }
};

std::string first_failure(const Report& r) {
  for (const auto& c : r.checks) {
    if (!c.passed()) return r.subject + ": " + c.name + (c.witnesses.empty() ? "" : " (" + c.witnesses.front() + ")");
  }
  return {};
}

std::int64_t instances(const Report& r) {
  std::int64_t n = 0;
  for (const auto& c : r.checks) n += c.instances;
  return n;
}

std::shared_ptr<const EMAlgebra> share(EMAlgebra a) { return std::make_shared<const EMAlgebra>(std::move(a)); }

std::shared_ptr<const PolyCategory> regular_cat(std::shared_ptr<const EMAlgebra> a) {
  return std::make_shared<const PolyCategory>(std::move(a), PolyKind::regular);
}

std::vector<Table> semilattices_up_to(int n) {
  std::vector<Table> out;
  for (int k = 1; k <= n; ++k) {
    for (auto& t : semilattice_tables(k)) out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::vector<int>> homs(const Table& a, const Table& b) {
  std::vector<std::vector<int>> out;
  const int na = static_cast<int>(a.size());
  for (const auto& h : enumerate_maps(na, static_cast<int>(b.size()), MapKind::all)) {
    bool ok = true;
    for (int x = 0; x < na && ok; ++x) {
      for (int y = 0; y < na && ok; ++y) ok = h[a[x][y]] == b[h[x]][h[y]];
    }
    if (ok) out.push_back(h);
  }
  return out;
}

// 1. Builtin operads and monads.
Outcome builtins() {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> names{"L", "L'", "C", "C'", "ASSOC", "MAGMA", "MAYBE", "ID"};
  std::int64_t checked = 0;
  for (const auto& name : names) {
    const Report ops = validate_operad(*builtin_operad(name, 4), 4);
    const Report laws = check_monad_laws(*builtin_monad(name, 4), LawCaps{4, 3});
    for (const Report* r : {&ops, &laws}) {
      t.record(*r);
      t.require(r->passed(), first_failure(*r));
      t.require(instances(*r) > 0, name + ": no instances");
      checked += instances(*r);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o = t.finish(std::to_string(names.size()) + " builtins at N_max 4, " + std::to_string(checked) +
                       " instances, 0 violations required");
  std::ostringstream time;
  time.precision(1);
  time << std::fixed << secs;
  o.detail += ", " + time.str() + " s (limit 60 s)";
  if (secs >= kBuiltinSeconds) o.pass = false;
  return o;
}

// 2. Identity and associativity of polynomial categories.
Outcome category_laws() {
  Tally t;
  auto lp = builtin_monad("L'", 3);
  auto c = builtin_monad("C", 3);
  std::vector<std::shared_ptr<const PolyCategory>> cats{
      regular_cat(share(free_algebra(lp, FinSet({"a", "b"})))),
      regular_cat(share(semilattice_algebra(lp, FinSet({"0", "1"}), chain_max(2), std::nullopt))),
  };
  for (const auto& m : commutative_monoid_tables(2)) {
    cats.push_back(std::make_shared<const PolyCategory>(
        share(algebra_from_operation(c, FinSet({"0", "1"}), [m](int x, int y) { return m[x][y]; }, 0)),
        PolyKind::linear));
  }
  std::int64_t n = 0;
  for (const auto& cat : cats) {
    const Report r = check_category(*cat);
    t.record(r);
    t.require(r.passed(), first_failure(r));
    for (const auto& ch : r.checks) t.require(ch.instances > 0, r.subject + ": " + ch.name + " has no instances");
    n += instances(r);
  }
  return t.finish(std::to_string(cats.size()) + " categories (CP_r of F(a,b) and the 2-chain, CP_l of " +
                  std::to_string(cats.size() - 2) + " commutative monoids), " + std::to_string(n) + " instances");
}

// 3. Sums over the 2-chain against the classical rule: joins inside a
// component, and h moves the lower argument up before joining.
Outcome classical_oracle() {
  Tally t;
  auto lp = builtin_monad("L'", 3);
  auto index = regular_cat(share(semilattice_algebra(lp, FinSet({"0", "1"}), chain_max(2), std::nullopt)));
  const auto tables = semilattices_up_to(3);
  std::int64_t contexts = 0;
  std::int64_t cells = 0;
  std::int64_t mismatches = 0;
  for (const auto& tm : tables) {
    for (const auto& tn : tables) {
      auto m = share(semilattice_algebra(lp, FinSet::range(static_cast<int>(tm.size()), "m"), tm, std::nullopt));
      auto n = share(semilattice_algebra(lp, FinSet::range(static_cast<int>(tn.size()), "n"), tn, std::nullopt));
      for (const auto& h : homs(tm, tn)) {
        FunctorData f = lift_from_poset(index, {m, n}, [&](int a, int b) {
          if (a != b) return h;
          std::vector<int> id(a == 0 ? tm.size() : tn.size());
          std::iota(id.begin(), id.end(), 0);
          return id;
        });
        const PlonkaContext ctx = make_context(MonadMorphism::identity(lp), std::move(f));
        const TaggedCarrier x = tagged_carrier(ctx);
        const EMAlgebra sum = plonka_sum(ctx);
        ++contexts;
        auto join = [&](int p, int q) {
          const int tp = x.tag[static_cast<std::size_t>(p)], tq = x.tag[static_cast<std::size_t>(q)];
          const int ep = x.elem[static_cast<std::size_t>(p)], eq = x.elem[static_cast<std::size_t>(q)];
          if (tp == 0 && tq == 0) return x.at(0, tm[ep][eq]);
          const int up = tp == 0 ? h[ep] : ep;
          const int uq = tq == 0 ? h[eq] : eq;
          return x.at(1, tn[up][uq]);
        };
        for (int k = 0; k < sum.terms().size(); ++k) {
          const Term& term = sum.terms()[k];
          int want = term.vars[0];
          for (int v : term.vars) want = join(want, v);
          ++cells;
          if (sum.structure()[static_cast<std::size_t>(k)] != want) {
            ++mismatches;
            t.require(false, describe(sum) + " at " + lp->show(term));
          }
        }
      }
    }
  }
  t.note(std::to_string(contexts) + " " + std::to_string(cells) + " " + std::to_string(mismatches));
  return t.finish(std::to_string(contexts) + " (M, N, h) with |M|, |N| <= 3, " + std::to_string(cells) +
                  " table cells, " + std::to_string(cells - mismatches) + " equal");
}

// 4. The comparison map is a lax morphism.
Outcome lax_morphism() {
  Tally t;
  auto lp = builtin_monad("L'", 3);
  std::vector<PlonkaContext> contexts;
  for (int ni = 2; ni <= 3; ++ni) {
    for (const auto& s : semilattice_tables(ni)) {
      auto index = regular_cat(share(semilattice_algebra(lp, FinSet::range(ni), s, std::nullopt)));
      for (const auto& v : semilattices_up_to(2)) {
        const int nv = static_cast<int>(v.size());
        auto a = share(semilattice_algebra(lp, FinSet::range(nv, "v"), v, std::nullopt));
        // transitions between distinct indices collapse onto one element
        for (int e = 0; e < nv; ++e) {
          contexts.push_back(make_context(MonadMorphism::identity(lp),
                                          lift_from_poset(index, std::vector(static_cast<std::size_t>(ni), a),
                                                          [&](int from, int to) {
                                                            std::vector<int> map(static_cast<std::size_t>(nv), e);
                                                            if (from == to) std::iota(map.begin(), map.end(), 0);
                                                            return map;
                                                          })));
        }
      }
    }
  }
  const int regular = static_cast<int>(contexts.size());

  auto assoc = builtin_monad("ASSOC", 3);
  auto c = builtin_monad("C", 3);
  std::vector<std::shared_ptr<const EMAlgebra>> values{
      share(algebra_from_operation(assoc, FinSet({"1", "a", "b"}), [](int x, int y) { return x == 0 ? y : x; }, 0))};
  for (const auto& m : commutative_monoid_tables(2)) {
    values.push_back(share(algebra_from_operation(assoc, FinSet({"e", "g"}), [m](int x, int y) { return m[x][y]; }, 0)));
  }
  for (const auto& m : commutative_monoid_tables(2)) {
    auto index = std::make_shared<const PolyCategory>(
        share(algebra_from_operation(c, FinSet({"0", "1"}), [m](int x, int y) { return m[x][y]; }, 0)),
        PolyKind::linear);
    for (const auto& v : values) contexts.push_back(make_context(terminal_morphism(assoc, c), constant_functor(index, v)));
  }

  std::int64_t n = 0;
  for (const auto& ctx : contexts) {
    const Report r = check_lax_morphism(ctx);
    t.record(r);
    t.require(r.passed(), first_failure(r));
    t.require(instances(r) > 0, r.subject + ": no instances");
    n += instances(r);
  }
  return t.finish(std::to_string(regular) + " regular contexts over L' (2- and 3-element indices), " +
                  std::to_string(contexts.size() - static_cast<std::size_t>(regular)) +
                  " analytic contexts over ASSOC, " + std::to_string(n) + " coherence instances");
}

// 5. Constant functors give products.
Outcome constant_functors() {
  Tally t;
  auto lp = builtin_monad("L'", 3);
  const auto tables = semilattices_up_to(3);
  int found = 0;
  int cases = 0;
  for (const auto& s : tables) {
    auto index = share(semilattice_algebra(lp, FinSet::range(static_cast<int>(s.size())), s, std::nullopt));
    for (const auto& v : tables) {
      auto a = share(semilattice_algebra(lp, FinSet::range(static_cast<int>(v.size()), "v"), v, std::nullopt));
      const PlonkaContext ctx = make_context(MonadMorphism::identity(lp), constant_functor(regular_cat(index), a));
      const auto iso = find_isomorphism(plonka_sum(ctx), product_algebra(*index, *a));
      ++cases;
      if (iso) {
        ++found;
        std::string line;
        for (int i : *iso) line += std::to_string(i) + ",";
        t.note(line);
      } else {
        t.require(false, "no isomorphism for index " + describe(*index) + " and value " + describe(*a));
      }
    }
  }
  return t.finish("isomorphism found in " + std::to_string(found) + " of " + std::to_string(cases) +
                  " cases (index and value carriers <= 3)");
}

// 6. Preservation agrees with the classifiers.
Outcome preservation_catalog() {
  Tally t;
  const int nmax = 3;
  auto L = builtin_monad("L", nmax);
  auto lp = builtin_monad("L'", nmax);
  auto maybe = builtin_monad("MAYBE", nmax);
  auto c = builtin_monad("C", nmax);
  auto assoc = builtin_monad("ASSOC", nmax);
  auto magma = builtin_monad("MAGMA", nmax);
  auto max = [](int x, int y) { return std::max(x, y); };

  auto l_index = regular_cat(share(semilattice_algebra(L, FinSet({"0", "1"}), chain_max(2), 0)));
  auto l_value = share(semilattice_algebra(L, FinSet({"p", "q"}), chain_max(2), 0));
  auto lp_index = regular_cat(share(semilattice_algebra(lp, FinSet({"0", "1"}), chain_max(2), std::nullopt)));
  auto lp_value = share(semilattice_algebra(lp, FinSet({"p", "q"}), chain_max(2), std::nullopt));
  auto c_index = std::make_shared<const PolyCategory>(share(algebra_from_operation(c, FinSet({"0", "1"}), max, 0)),
                                                      PolyKind::linear);
  auto c_value = share(algebra_from_operation(c, FinSet({"p", "q"}), max, 0));
  auto a_value = share(algebra_from_operation(assoc, FinSet({"1", "a", "b"}), [](int x, int y) { return x == 0 ? y : x; }, 0));
  auto magma_value = share(algebra_from_operation(magma, FinSet({"0", "1"}), max, std::nullopt));
  RegularPart reg = regular_part(magma);
  auto reg_value = share(em_functor(reg.counit, *magma_value));

  struct Case {
    MonadMorphism tau;
    MonadMorphism pi_r;
    PlonkaContext ctx_v;
  };
  std::vector<Case> cases;
  cases.push_back({MonadMorphism::identity(L), MonadMorphism::identity(L),
                   make_context(MonadMorphism::identity(L), constant_functor(l_index, l_value))});
  cases.push_back({MonadMorphism::identity(lp), MonadMorphism::identity(lp),
                   make_context(MonadMorphism::identity(lp), constant_functor(lp_index, lp_value))});
  cases.push_back({terminal_morphism(maybe, L), terminal_morphism(maybe, L),
                   make_context(MonadMorphism::identity(L), constant_functor(l_index, l_value))});
  cases.push_back({terminal_morphism(lp, L), terminal_morphism(lp, L),
                   make_context(MonadMorphism::identity(L), constant_functor(l_index, l_value))});
  cases.push_back({terminal_morphism(assoc, c), terminal_morphism(assoc, c),
                   make_context(MonadMorphism::identity(c), constant_functor(c_index, c_value))});
  cases.push_back({forget_brackets(magma, assoc), terminal_morphism(magma, c),
                   make_context(terminal_morphism(assoc, c), constant_functor(c_index, a_value))});
  cases.push_back({magma_duplication(magma), terminal_morphism(magma, c),
                   make_context(terminal_morphism(magma, c), constant_functor(c_index, magma_value))});
  cases.push_back({regular_duplication(reg.monad), terminal_morphism(reg.monad, lp),
                   make_context(terminal_morphism(reg.monad, lp), constant_functor(lp_index, reg_value))});

  int agree = 0;
  int negatives = 0;
  for (const auto& k : cases) {
    const Preservation p = check_preservation(k.tau, k.pi_r, k.ctx_v);
    const bool regular = k.tau.source()->mode() == MonadMode::regular;
    const Classification cls = regular ? check_semicartesian(k.tau, 3) : check_weakly_cartesian(k.tau, 3);
    const std::string name = k.tau.name() + " (" + cls.property + ")";
    t.note(name + " " + std::to_string(p.preserved) + " " + std::to_string(cls.holds) + " " + p.witness + " | " +
           cls.witness);
    t.require(p.instances > 0 && cls.instances > 0, name + ": no instances");
    t.require(p.preserved == cls.holds, name + ": preservation " + std::to_string(p.preserved) + ", classifier " +
                                            std::to_string(cls.holds));
    if (p.preserved == cls.holds) ++agree;
    if (!p.preserved) t.require(!p.witness.empty(), name + ": negative preservation without witness");
    if (!cls.holds) {
      ++negatives;
      t.require(!cls.witness.empty(), name + ": negative classification without witness");
    }
  }
  return t.finish(std::to_string(agree) + " of " + std::to_string(cases.size()) + " morphisms agree, " +
                  std::to_string(negatives) + " negatives with witnesses");
}

// 7. Distributive laws, composites and two hand instances.
Outcome distributive_laws() {
  Tally t;
  std::vector<std::string> items;
  auto item = [&](const std::string& name, const std::function<std::string()>& run) {
    std::string problem;
    try {
      problem = run();
    } catch (const std::exception& e) {
      problem = e.what();
    }
    items.push_back(name + (problem.empty() ? " ok" : " FAIL"));
    t.require(problem.empty(), name + ": " + problem);
  };
  auto beck = [&](LawKind kind, const std::string& base) {
    return [&t, kind, base] {
      const Report r = check_beck(DistributiveLaw(kind, LawVariant::without_bottom, builtin_monad(base, 3)), 3);
      t.record(r);
      if (instances(r) == 0) return std::string("no instances");
      return first_failure(r);
    };
  };
  item("rho' L'", beck(LawKind::rho, "L'"));
  item("rho' reg(MAGMA)", beck(LawKind::rho, "reg(MAGMA)"));
  item("rho' MAYBE", beck(LawKind::rho, "MAYBE"));
  item("alpha' ASSOC", beck(LawKind::alpha, "ASSOC"));
  item("alpha' MAGMA", beck(LawKind::alpha, "MAGMA"));
  auto composite = [&](LawKind kind, const std::string& base) {
    return [&t, kind, base] {
      auto m = composed_monad(DistributiveLaw(kind, LawVariant::without_bottom, builtin_monad(base, 2)), 2);
      const Report r = check_monad_laws(*m, LawCaps{3, 2});
      t.record(r);
      return first_failure(r);
    };
  };
  item("L'.L' monad laws", composite(LawKind::rho, "L'"));
  item("C'.ASSOC monad laws", composite(LawKind::alpha, "ASSOC"));

  item("mu2(mu1 x, mu1 y)", [] {
    auto lp = builtin_monad("L'", 3);
    const ComposedTerm in{lp->normalize(std::vector<int>{0, 1}, 0), {lp->unit(0), lp->unit(1)}};
    const ComposedTerm out = rho(lp, LawVariant::without_bottom, in);
    const std::string s = show(out, *lp, *lp, [](int v) { return v == 0 ? std::string("x") : std::string("y"); });
    return s == "mu1(mu2(x,y))" ? std::string() : "got " + s;
  });
  item("(x + y) z", [] {
    auto assoc = builtin_monad("ASSOC", 3);
    DistributiveLaw law(LawKind::alpha, LawVariant::without_bottom, assoc);
    const auto& cp = *law.lattice();
    const int p12 = *assoc->op().find_label(2, "p12");
    const ComposedTerm in{assoc->normalize(std::vector<int>{0, 1}, p12),
                          {cp.normalize(std::vector<int>{0, 1}, 0), cp.unit(2)}};
    const std::string s = show(distribute(law, in), cp, *assoc, [](int v) { return std::string(1, "xyz"[v]); });
    return s == "mu2(p12(x,z),p12(y,z))" ? std::string() : "got " + s;
  });

  std::string detail;
  for (const auto& s : items) detail += (detail.empty() ? "" : ", ") + s;
  return t.finish(detail);
}

// 8. Oplax strengths, functoriality of the product, and sizes of C products.
Outcome kleisli_products() {
  Tally t;
  const std::vector<std::string> names{"L", "L'", "MAYBE", "C", "C'"};
  for (const auto& name : names) {
    const auto st = builtin_strength(name, 3);
    for (const Report& r : {check_oplax(st, 3), check_product_functor(st, 3)}) {
      t.record(r);
      t.require(r.passed(), first_failure(r));
      t.require(instances(r) > 0, r.subject + ": no instances");
    }
  }

  const int carrier = 3;
  const int max_size = 4;
  const auto c = builtin_strength("C", max_size * max_size);
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> size(0, max_size);
  std::uniform_int_distribution<int> atom(0, carrier - 1);
  auto bag = [&] {
    std::vector<int> vars(static_cast<std::size_t>(size(rng)));
    for (int& v : vars) v = atom(rng);
    return c.monad->normalize(vars, 0);
  };
  int sized = 0;
  for (int i = 0; i < kKleisliPairs; ++i) {
    const Term a = bag();
    const Term b = bag();
    const Term ab = c.phi(a, carrier, b, carrier);
    std::map<int, int> got;
    for (int v : ab.vars) ++got[v];
    std::map<int, int> want;
    for (int x : a.vars) {
      for (int y : b.vars) ++want[x * carrier + y];
    }
    const bool ok = ab.arity() == a.arity() * b.arity();
    if (ok) ++sized;
    t.require(ok, c.monad->show(a) + " x " + c.monad->show(b) + " has size " + std::to_string(ab.arity()));
    t.require(got == want, c.monad->show(a) + " x " + c.monad->show(b) + ": multiplicities differ");
    t.note(c.monad->encode(ab));
  }
  return t.finish(std::to_string(names.size()) + " strengths oplax and functorial at size <= 3, |phi_C| = |m1| |m2| on " +
                  std::to_string(sized) + " of " + std::to_string(kKleisliPairs) + " fuzzed pairs");
}

std::map<std::string, Rational> integer_oracle(const CVOperation& op, const std::vector<ConvexPoint>& ys) {
  cpp_int dr = 1;
  for (const auto& r : op.weights()) dr = boost::multiprecision::lcm(dr, cpp_int(denominator(r)));
  cpp_int dc = 1;
  for (const auto& y : ys) {
    for (const auto& [a, q] : y.coeffs) dc = boost::multiprecision::lcm(dc, cpp_int(denominator(q)));
  }
  std::map<std::string, cpp_int> num;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const Rational& r = op.weights()[i];
    const cpp_int rn = numerator(r) * (dr / denominator(r));
    for (const auto& [a, q] : ys[i].coeffs) num[a] += rn * numerator(q) * (dc / denominator(q));
  }
  std::map<std::string, Rational> out;
  for (const auto& [a, n] : num) out[a] = Rational(n, dr * dc);
  return out;
}

// 9. Convex combinations and the sum of simplices.
Outcome convexity() {
  Tally t;
  const FinSet pool({"x1", "x2", "x3"});
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> arity(1, 4);
  std::vector<CVInstance> all;
  for (int trial = 0; trial < kConvexInstances; ++trial) {
    const int k = arity(rng);
    const CVOperation op = random_operation(rng, k);
    std::vector<ConvexPoint> ys;
    for (int i = 0; i < k; ++i) ys.push_back(random_point(rng, pool));
    const ConvexPoint out = o_apply(op, ys);
    const std::string label = to_string(op) + " on " + format(ys.front());

    Rational total = 0;
    bool positive = true;
    for (const auto& [a, q] : out.coeffs) {
      total += q;
      positive = positive && q > 0;
    }
    std::set<std::string> supports;
    for (const auto& y : ys) {
      const auto s = y.support();
      supports.insert(s.begin(), s.end());
    }
    t.require(total == 1, label + ": coefficients sum to " + to_string(total));
    t.require(positive, label + ": non-positive coefficient");
    t.require(out.support() == supports, label + ": support is not the union");
    t.require(out.coeffs == integer_oracle(op, ys), label + ": differs from the integer oracle");

    const int slot = std::uniform_int_distribution<int>(0, k - 1)(rng);
    const CVOperation s = random_operation(rng, arity(rng));
    std::vector<ConvexPoint> zs;
    for (int j = 0; j < s.arity(); ++j) zs.push_back(random_point(rng, pool));
    std::vector<ConvexPoint> nested = ys;
    nested[static_cast<std::size_t>(slot)] = o_apply(s, zs);
    std::vector<ConvexPoint> flat(ys.begin(), ys.begin() + slot);
    flat.insert(flat.end(), zs.begin(), zs.end());
    flat.insert(flat.end(), ys.begin() + slot + 1, ys.end());
    t.require(o_apply(op, nested) == o_apply(substitute(op, slot, s), flat), label + ": flattening fails");
    t.note(format(out));
    all.push_back({op, ys});
  }

  const SimplexSumResult sum = check_simplex_sum(pool, all);
  t.record(sum.report);
  t.require(sum.report.passed(), first_failure(sum.report));
  t.require(sum.evaluations.size() == all.size(), "sum evaluated " + std::to_string(sum.evaluations.size()) + " instances");

  const std::vector<ConvexPoint> ys{parse_point("1*x1"), parse_point("1/2*x2 + 1/2*_bot")};
  const std::string worked = format(o_apply(CVOperation({Rational(1, 2), Rational(1, 2)}), ys));
  t.require(worked == "1/2*x1 + 1/4*x2 + 1/4*_bot", "worked instance gave " + worked);
  return t.finish(std::to_string(all.size()) + " fuzzed instances exact, sum of simplices agrees on " +
                  std::to_string(sum.evaluations.size()) + ", worked instance \"" + worked + "\"");
}

// Runs a command, returning its exit status and standard output.
std::pair<int, std::string> run(const std::string& cmd) {
  std::FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) throw Error("cannot run " + cmd);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string strip_timing(const std::string& s) {
  static const std::regex elapsed("\"elapsed_ms\":[0-9]+");
  return std::regex_replace(s, elapsed, "\"elapsed_ms\":_");
}

using Criterion = std::pair<std::string, std::function<Outcome()>>;

// 10. Determinism and the CLI exit codes.
Outcome determinism(const std::vector<Criterion>& criteria, const std::vector<Outcome>& first, const std::string& cli,
                    const std::string& fixtures, double first_seconds) {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  int same = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome again;
    try {
      again = criteria[i].second();
    } catch (const std::exception& e) {
      again.transcript = e.what();
    }
    if (again.transcript == first[i].transcript) {
      ++same;
    } else {
      t.require(false, "criterion " + std::to_string(i + 1) + " differs between runs");
    }
  }

  const std::string tmp = (std::filesystem::temp_directory_path() / "plonka_acceptance.dot").string();
  const std::vector<std::pair<std::string, int>> commands{
      {"validate L'", 0},
      {"validate " + fixtures + "/algebras/n.json " + fixtures + "/morphisms/lprime_to_l.json", 0},
      {"plonka-sum " + fixtures + "/contexts/example2.json", 0},
      {"plonka-sum " + fixtures + "/contexts/single_point.json", 0},
      {"classify " + fixtures + "/morphisms/magma_duplication.json", 0},
      {"kleisli --strength L' " + fixtures + "/kleisli/f1.json " + fixtures + "/kleisli/f2.json", 0},
      {"cv " + fixtures + "/cv/demo.json", 0},
      {"export-dot " + fixtures + "/algebras/chain2.json --out " + tmp, 0},
      {"validate " + fixtures + "/operads/l_broken_unit.json", 1},
      {"plonka-sum " + fixtures + "/contexts/corrupted.json", 1},
      {"validate " + fixtures + "/malformed.json", 2},
      {"plonka-sum " + fixtures + "/missing.json", 2},
      {"frobnicate", 2},
  };
  int exits = 0;
  for (const auto& [args, want] : commands) {
    std::string quoted;
    for (char ch : args) quoted += ch == '\'' ? std::string("\\'") : std::string(1, ch);
    const auto [code1, out1] = run(cli + " " + quoted);
    const auto [code2, out2] = run(cli + " " + quoted);
    t.require(code1 == want, args + ": exit " + std::to_string(code1) + ", expected " + std::to_string(want));
    t.require(strip_timing(out1) == strip_timing(out2), args + ": output differs between runs");
    if (code1 == want) ++exits;
  }
  std::filesystem::remove(tmp);

  const double secs =
      first_seconds + std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream time;
  time.precision(1);
  time << std::fixed << secs;
  Outcome o = t.finish(std::to_string(same) + " of " + std::to_string(criteria.size()) +
                       " criteria reproduce exactly, " + std::to_string(exits) + " of " +
                       std::to_string(commands.size()) + " CLI runs exit as expected and repeat byte for byte");
  o.detail += ", " + time.str() + " s in total (limit 600 s)";
  if (secs >= kSuiteSeconds) o.pass = false;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <plonka binary> <fixtures dir>\n";
    return 2;
  }
  const std::vector<Criterion> criteria{
      {"operad and monad soundness", builtins},
      {"polynomial category laws", category_laws},
      {"classical Plonka sum oracle", classical_oracle},
      {"lax morphism coherence", lax_morphism},
      {"constant functors give products", constant_functors},
      {"preservation agrees with the classifiers", preservation_catalog},
      {"distributive laws and composites", distributive_laws},
      {"Kleisli products", kleisli_products},
      {"convex combinations", convexity},
  };
  const auto start = std::chrono::steady_clock::now();
  std::vector<Outcome> outcomes;
  bool all = true;
  auto print = [&](std::size_t i, const std::string& name, const Outcome& o) {
    std::cout << "criterion " << i << " [" << (o.pass ? "PASS" : "FAIL") << "] " << name << ": " << o.detail
              << std::endl;
    all = all && o.pass;
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), e.what()};
    }
    print(i + 1, criteria[i].first, o);
    outcomes.push_back(std::move(o));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome last;
  try {
    last = determinism(criteria, outcomes, argv[1], argv[2], secs);
  } catch (const std::exception& e) {
    last = {false, std::string("exception: ") + e.what(), {}};
  }
  print(criteria.size() + 1, "determinism and CLI contract", last);
  return all ? 0 : 1;
}
