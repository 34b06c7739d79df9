#include <doctest.h>

#include "plonka/plonka_sum.hpp"
#include "semilattices.hpp"

using namespace plonka;
using namespace plonka::testing;

namespace {

std::shared_ptr<const EMAlgebra> share(EMAlgebra a) { return std::make_shared<const EMAlgebra>(std::move(a)); }

std::shared_ptr<const PolyCategory> regular_cat(std::shared_ptr<const EMAlgebra> a) {
  return std::make_shared<const PolyCategory>(std::move(a), PolyKind::regular);
}

// The 2-chain 0 < 1 with F(0) = {m}, F(1) = {u < v} and h(m) = u.
PlonkaContext chain_context(MonadPtr lp) {
  auto index = regular_cat(share(semilattice_algebra(lp, FinSet({"0", "1"}), chain_max(2), std::nullopt)));
  auto m = share(semilattice_algebra(lp, FinSet({"m"}), chain_max(1), std::nullopt));
  auto n = share(semilattice_algebra(lp, FinSet({"u", "v"}), chain_max(2), std::nullopt));
  FunctorData f = lift_from_poset(index, {m, n}, [](int a, int b) -> std::vector<int> {
    if (a == b) return a == 0 ? std::vector<int>{0} : std::vector<int>{0, 1};
    return {0};
  });
  return make_context(MonadMorphism::identity(lp), std::move(f));
}

}  // namespace

TEST_CASE("lambda on the two-chain") {
  auto lp = builtin_monad("L'", 3);
  const PlonkaContext ctx = chain_context(lp);
  const TaggedCarrier x = tagged_carrier(ctx);
  REQUIRE(x.size() == 3);
  const int m = x.atoms.index("0.m");
  const int u = x.atoms.index("1.u");
  const int v = x.atoms.index("1.v");
  const int mu2 = *lp->op().find_label(2, "mu2");

  const LambdaValue got = lambda(ctx, x, lp->normalize(std::vector<int>{m, u}, mu2));
  CHECK(got.component == 1);
  CHECK(got.term == lp->unit(0));

  const LambdaValue mv = lambda(ctx, x, lp->normalize(std::vector<int>{v, m}, mu2));
  CHECK(mv.component == 1);
  CHECK(mv.term == lp->normalize(std::vector<int>{1, 0}, mu2));

  const LambdaValue mm = lambda(ctx, x, lp->unit(m));
  CHECK(mm.component == 0);
  CHECK(mm.term == lp->unit(0));

  const EMAlgebra sum = plonka_sum(ctx);
  CHECK(check_algebra(sum).passed());
  CHECK(sum.value(lp->normalize(std::vector<int>{m, v}, mu2)) == v);
  CHECK(sum.value(lp->normalize(std::vector<int>{m, u}, mu2)) == u);

  Report lax = check_lax_morphism(ctx);
  INFO(lax.summary());
  CHECK(lax.passed());
  for (const auto& c : lax.checks) CHECK(c.instances > 0);
}

TEST_CASE("sums agree with the classical construction") {
  // F(a) = A for every a, transitions a < b are the constant map to an
  // idempotent e; the sum of tagged elements is the join in the top
  // component of their transported values.
  auto lp = builtin_monad("L'", 3);
  int contexts = 0;
  for (int ni = 1; ni <= 3; ++ni) {
    for (const auto& s : semilattice_tables(ni)) {
      auto index = regular_cat(share(semilattice_algebra(lp, FinSet::range(ni), s, std::nullopt)));
      for (int na = 1; na <= 2; ++na) {
        for (const auto& t : semilattice_tables(na)) {
          auto a = share(semilattice_algebra(lp, FinSet::range(na), t, std::nullopt));
          for (int e = 0; e < na; ++e) {
            auto h = [&](int from, int to, int v) { return from == to ? v : e; };
            FunctorData f = lift_from_poset(index, std::vector(static_cast<std::size_t>(ni), a),
                                            [&](int from, int to) {
                                              std::vector<int> map(static_cast<std::size_t>(na));
                                              for (int v = 0; v < na; ++v) map[static_cast<std::size_t>(v)] = h(from, to, v);
                                              return map;
                                            });
            const PlonkaContext ctx = make_context(MonadMorphism::identity(lp), std::move(f));
            const TaggedCarrier x = tagged_carrier(ctx);
            const EMAlgebra sum = plonka_sum(ctx);
            ++contexts;
            for (int k = 0; k < sum.terms().size(); ++k) {
              const Term& term = sum.terms()[k];
              int top = x.tag[static_cast<std::size_t>(term.vars[0])];
              for (int var : term.vars) top = s[top][x.tag[static_cast<std::size_t>(var)]];
              int join = h(x.tag[static_cast<std::size_t>(term.vars[0])], top, x.elem[static_cast<std::size_t>(term.vars[0])]);
              for (int var : term.vars) {
                join = t[join][h(x.tag[static_cast<std::size_t>(var)], top, x.elem[static_cast<std::size_t>(var)])];
              }
              REQUIRE(sum.structure()[static_cast<std::size_t>(k)] == x.at(top, join));
            }
          }
        }
      }
    }
  }
  CHECK(contexts == (1 + 2 + 9) * (1 + 2 * 2));
}

TEST_CASE("constant functors give products") {
  auto lp = builtin_monad("L'", 3);
  auto a = share(semilattice_algebra(lp, FinSet({"p", "q"}), chain_max(2), std::nullopt));
  for (const auto& s : semilattice_tables(3)) {
    auto index = share(semilattice_algebra(lp, FinSet::range(3), s, std::nullopt));
    const PlonkaContext ctx = make_context(MonadMorphism::identity(lp), constant_functor(regular_cat(index), a));
    CHECK(are_isomorphic(plonka_sum(ctx), product_algebra(*index, *a)));
  }

  auto point = regular_cat(share(terminal_algebra(lp)));
  const PlonkaContext single = make_context(MonadMorphism::identity(lp), constant_functor(point, a));
  CHECK(are_isomorphic(plonka_sum(single), *a));
}

TEST_CASE("analytic sums over commutative monoids") {
  auto assoc = builtin_monad("ASSOC", 3);
  auto c = builtin_monad("C", 3);
  auto index = std::make_shared<const PolyCategory>(
      share(algebra_from_operation(c, FinSet({"0", "1"}), [](int x, int y) { return std::max(x, y); }, 0)),
      PolyKind::linear);
  // a non-commutative value: left-zero band with an adjoined unit
  auto band = share(algebra_from_operation(assoc, FinSet({"1", "a", "b"}),
                                           [](int x, int y) { return x == 0 ? y : x; }, 0));
  REQUIRE(check_algebra(*band).passed());
  const PlonkaContext ctx = make_context(terminal_morphism(assoc, c), constant_functor(index, band));
  const EMAlgebra sum = plonka_sum(ctx);
  Report alg = check_algebra(sum);
  INFO(alg.summary());
  CHECK(alg.passed());
  Report lax = check_lax_morphism(ctx);
  INFO(lax.summary());
  CHECK(lax.passed());
  for (const auto& c : lax.checks) CHECK(c.instances > 0);
}

TEST_CASE("invalid contexts are rejected") {
  auto lp = builtin_monad("L'", 3);
  auto index = regular_cat(share(semilattice_algebra(lp, FinSet({"0", "1"}), chain_max(2), std::nullopt)));
  auto n = share(semilattice_algebra(lp, FinSet({"u", "v"}), chain_max(2), std::nullopt));
  // swapping u and v is not a homomorphism of the chain
  FunctorData bad = lift_from_poset(index, {n, n}, [](int a, int b) -> std::vector<int> {
    if (a == b) return {0, 1};
    return {1, 0};
  });
  PlonkaContext ctx{lp, MonadMorphism::identity(lp), bad};
  Report r = validate_context(ctx);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.summary().empty());
  CHECK_THROWS_AS(make_context(MonadMorphism::identity(lp), bad), AlgebraError);

  auto assoc = builtin_monad("ASSOC", 3);
  CHECK_THROWS_AS(make_context(MonadMorphism::identity(assoc), constant_functor(index, n)), AlgebraError);
}

TEST_CASE("preservation follows the classifiers") {
  struct Case {
    std::string name;
    MonadMorphism tau;
    MonadMorphism pi_r;
    PlonkaContext ctx_v;
    bool expected;
  };
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
  auto c_index = std::make_shared<const PolyCategory>(share(algebra_from_operation(c, FinSet({"0", "1"}), max, 0)),
                                                      PolyKind::linear);
  auto c_value = share(algebra_from_operation(c, FinSet({"p", "q"}), max, 0));
  auto a_value = share(algebra_from_operation(assoc, FinSet({"1", "a", "b"}), [](int x, int y) { return x == 0 ? y : x; }, 0));
  auto magma_value = share(algebra_from_operation(magma, FinSet({"0", "1"}), max, std::nullopt));

  std::vector<Case> cases;
  cases.push_back({"id L", MonadMorphism::identity(L), MonadMorphism::identity(L),
                   make_context(MonadMorphism::identity(L), constant_functor(l_index, l_value)), true});
  cases.push_back({"MAYBE -> L", terminal_morphism(maybe, L), terminal_morphism(maybe, L),
                   make_context(MonadMorphism::identity(L), constant_functor(l_index, l_value)), true});
  cases.push_back({"ASSOC -> C", terminal_morphism(assoc, c), terminal_morphism(assoc, c),
                   make_context(MonadMorphism::identity(c), constant_functor(c_index, c_value)), true});
  cases.push_back({"MAGMA -> ASSOC", forget_brackets(magma, assoc), terminal_morphism(magma, c),
                   make_context(terminal_morphism(assoc, c), constant_functor(c_index, a_value)), true});
  cases.push_back({"MAGMA dup", magma_duplication(magma), terminal_morphism(magma, c),
                   make_context(terminal_morphism(magma, c), constant_functor(c_index, magma_value)), false});

  RegularPart reg = regular_part(magma);
  auto lp_index = regular_cat(share(semilattice_algebra(lp, FinSet({"0", "1"}), chain_max(2), std::nullopt)));
  auto reg_value = share(em_functor(reg.counit, *magma_value));
  cases.push_back({"reg(MAGMA) dup", regular_duplication(reg.monad), terminal_morphism(reg.monad, lp),
                   make_context(terminal_morphism(reg.monad, lp), constant_functor(lp_index, reg_value)), false});

  for (const auto& k : cases) {
    INFO(k.name);
    const Preservation p = check_preservation(k.tau, k.pi_r, k.ctx_v);
    INFO(p.witness);
    CHECK(p.preserved == k.expected);
    CHECK(p.instances > 0);
    if (!p.preserved) CHECK_FALSE(p.witness.empty());
    const bool regular = k.tau.source()->mode() == MonadMode::regular;
    const Classification cls = regular ? check_semicartesian(k.tau, 3) : check_weakly_cartesian(k.tau, 3);
    CHECK(cls.holds == k.expected);
  }
}
