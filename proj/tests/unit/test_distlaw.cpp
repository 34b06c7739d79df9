#include <doctest.h>

#include <algorithm>

#include "plonka/distlaw.hpp"

using namespace plonka;

namespace {

// The word a term of ASSOC spells over its carrier.
std::vector<int> word(const TruncatedMonad& assoc, const Term& t) {
  const auto& op = dynamic_cast<const LeafWordOperad&>(assoc.op());
  std::vector<int> w;
  for (int j : op.leaves(t.arity(), t.label)) w.push_back(t.vars[static_cast<std::size_t>(j)]);
  return w;
}

bool has_violation(const Report& r, const std::string& check) {
  for (const auto& c : r.checks) {
    if (c.name == check && !c.passed()) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("rho on small instances") {
  auto lp = builtin_monad("L'", 3);
  // mu2(mu1 x, mu1 y) goes to mu1(mu2(x, y))
  const ComposedTerm in{lp->normalize(std::vector<int>{0, 1}, 0), {lp->unit(0), lp->unit(1)}};
  const ComposedTerm out = rho(lp, LawVariant::without_bottom, in);
  CHECK(out == ComposedTerm{lp->unit(0), {lp->normalize(std::vector<int>{0, 1}, 0)}});
  CHECK(show(out, *lp, *lp, [](int v) { return v == 0 ? std::string("x") : std::string("y"); }) ==
        "mu1(mu2(x,y))");

  // a single outer unit only reassociates
  const Term xy = lp->normalize(std::vector<int>{0, 1}, 0);
  const ComposedTerm unit_in{lp->unit(0), {xy}};
  CHECK(rho(lp, LawVariant::without_bottom, unit_in) == ComposedTerm{xy, {lp->unit(0), lp->unit(1)}});

  // an empty join anywhere empties the result
  DistributiveLaw with_bottom(LawKind::rho, LawVariant::with_bottom, lp);
  const auto& L = *with_bottom.lattice();
  const Term bottom = L.normalize(std::vector<int>{}, 0);
  const ComposedTerm zero_in{lp->normalize(std::vector<int>{0, 1}, 0), {bottom, L.normalize(std::vector<int>{0, 1}, 0)}};
  const ComposedTerm zero = distribute(with_bottom, zero_in);
  CHECK(zero.outer.arity() == 0);
  CHECK(zero.inner.empty());
  CHECK_THROWS_AS(rho(lp, LawVariant::without_bottom, zero_in), AlgebraError);

  auto assoc = builtin_monad("ASSOC", 3);
  CHECK_THROWS_AS(DistributiveLaw(LawKind::rho, LawVariant::without_bottom, assoc), AlgebraError);
}

TEST_CASE("alpha distributes words over sums") {
  auto assoc = builtin_monad("ASSOC", 3);
  DistributiveLaw law(LawKind::alpha, LawVariant::without_bottom, assoc);
  const auto& cp = *law.lattice();
  const int p12 = *assoc->op().find_label(2, "p12");
  // (x + y) z = x z + y z
  const ComposedTerm in{assoc->normalize(std::vector<int>{0, 1}, p12),
                        {cp.normalize(std::vector<int>{0, 1}, 0), cp.unit(2)}};
  const ComposedTerm out = distribute(law, in);
  const ComposedTerm want = canonical(cp, ComposedTerm{cp.normalize(std::vector<int>{0, 1}, 0),
                                                       {assoc->normalize(std::vector<int>{0, 2}, p12),
                                                        assoc->normalize(std::vector<int>{1, 2}, p12)}});
  CHECK(out == want);

  // all inner sums of one summand only relabel
  const ComposedTerm single{assoc->normalize(std::vector<int>{0, 1}, p12), {cp.unit(1), cp.unit(0)}};
  const ComposedTerm relabeled = distribute(law, single);
  REQUIRE(relabeled.outer.arity() == 1);
  CHECK(word(*assoc, relabeled.inner[0]) == std::vector<int>{1, 0});
}

TEST_CASE("alpha agrees with expanding products of sums") {
  // k = n_i = 2 needs k * M = 8 within the operad cap 2 * 5 - 1
  auto assoc = builtin_monad("ASSOC", 5);
  DistributiveLaw law(LawKind::alpha, LawVariant::without_bottom, assoc);
  const auto& cp = *law.lattice();
  const int n = 3;
  const std::vector<Term> sums = cp.eval(n);
  int instances = 0;
  for (int k = 0; k <= 2; ++k) {
    for (int a = 0; a < assoc->op().label_count(k); ++a) {
      for (const auto& pick : enumerate_maps(k, static_cast<int>(sums.size()), MapKind::all)) {
        bool small = true;
        for (int s : pick) small = small && sums[static_cast<std::size_t>(s)].arity() <= 2;
        if (!small) continue;
        std::vector<Term> inner;
        for (int s : pick) inner.push_back(sums[static_cast<std::size_t>(s)]);
        std::vector<int> slots(static_cast<std::size_t>(k));
        std::iota(slots.begin(), slots.end(), 0);
        const ComposedTerm in{assoc->normalize(slots, a), inner};
        const ComposedTerm out = distribute(law, in);

        // expand: one word per choice of a summand in every slot
        const std::vector<int> order = dynamic_cast<const LeafWordOperad&>(assoc->op()).leaves(k, a);
        std::vector<std::vector<int>> expected;
        std::vector<int> choice(static_cast<std::size_t>(k), 0);
        while (true) {
          std::vector<int> w;
          for (int slot : order) {
            const Term& s = inner[static_cast<std::size_t>(slot)];
            w.push_back(s.vars[static_cast<std::size_t>(choice[static_cast<std::size_t>(slot)])]);
          }
          expected.push_back(w);
          int i = k - 1;
          for (; i >= 0; --i) {
            if (++choice[static_cast<std::size_t>(i)] < inner[static_cast<std::size_t>(i)].arity()) break;
            choice[static_cast<std::size_t>(i)] = 0;
          }
          if (i < 0) break;
        }
        std::vector<std::vector<int>> got;
        for (int v : out.outer.vars) got.push_back(word(*assoc, out.inner[static_cast<std::size_t>(v)]));
        std::sort(expected.begin(), expected.end());
        std::sort(got.begin(), got.end());
        REQUIRE(got == expected);
        ++instances;
      }
    }
  }
  CHECK(instances > 100);
}

TEST_CASE("Beck axioms") {
  for (const char* name : {"MAYBE", "ID"}) {
    Report r = check_beck(DistributiveLaw(LawKind::rho, LawVariant::without_bottom, builtin_monad(name, 3)));
    INFO(r.summary());
    CHECK(r.passed());
  }
  for (const char* name : {"ASSOC", "C"}) {
    Report r = check_beck(DistributiveLaw(LawKind::alpha, LawVariant::without_bottom, builtin_monad(name, 3)));
    INFO(r.summary());
    CHECK(r.passed());
    for (const auto& c : r.checks) CHECK(c.instances > 0);
  }

  // feeding each copy its arguments backwards breaks the unit axiom
  Report broken = check_beck(DistributiveLaw(LawKind::rho, LawVariant::without_bottom, builtin_monad("reg(ASSOC)", 3), true));
  CHECK(has_violation(broken, "unit of L'"));
}

TEST_CASE("rho over an idempotent base fails the multiplication axiom") {
  // mu2(mu1(mu2(x,y)), mu2(mu1 x, mu1 y)): flattening first merges both
  // arguments into mu2(x,y); distributing first also produces mu2(x,y) as a
  // summand.
  auto lp = builtin_monad("L'", 3);
  DistributiveLaw law(LawKind::rho, LawVariant::without_bottom, lp);
  Report r = check_beck(law, 2);
  CHECK(has_violation(r, "multiplication of L' (outer)"));
  CHECK_FALSE(has_violation(r, "unit of L' (outer)"));
  CHECK_FALSE(has_violation(r, "unit of L' (inner)"));
  CHECK_THROWS_AS(composed_monad(law, 2), AlgebraError);
}

TEST_CASE("composite monads") {
  auto id = composed_monad(DistributiveLaw(LawKind::rho, LawVariant::without_bottom, builtin_monad("ID", 3)), 3);
  auto lp = builtin_monad("L'", 3);
  for (int n = 0; n <= 3; ++n) CHECK(id->op().label_count(n) == lp->op().label_count(n));
  CHECK(check_monad_laws(*id).passed());

  for (const auto& law : {DistributiveLaw(LawKind::rho, LawVariant::without_bottom, builtin_monad("MAYBE", 3)),
                          DistributiveLaw(LawKind::alpha, LawVariant::without_bottom, builtin_monad("C", 2))}) {
    auto m = composed_monad(law, law.base()->nmax());
    CHECK(m->mode() == MonadMode::regular);
    Report r = check_monad_laws(*m);
    INFO(r.summary());
    CHECK(r.passed());
  }
}
