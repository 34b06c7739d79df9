#include <doctest.h>

#include <algorithm>

#include "plonka/kleisli.hpp"

using namespace plonka;

namespace {

Term bag(const TruncatedMonad& t, std::vector<int> vars) { return t.normalize(vars, 0); }

bool failed(const Report& r, const std::string& check) {
  for (const auto& c : r.checks) {
    if (c.name == check) return !c.passed();
  }
  return false;
}

}  // namespace

TEST_CASE("strengths on small elements") {
  auto c = builtin_strength("C", 4);
  const auto& C = *c.monad;
  // {a, a} x {b, c} over X = {a}, Y = {b, c}: (a,b) twice, (a,c) twice
  const Term got = c.phi(bag(C, {0, 0}), 1, bag(C, {0, 1}), 2);
  CHECK(got == bag(C, {0, 0, 1, 1}));
  CHECK(got.arity() == 4);

  auto m = builtin_strength("MAYBE", 3);
  const Term star{{}, 0};
  CHECK(m.phi(star, 1, m.monad->unit(0), 2) == star);
  CHECK(m.phi(m.monad->unit(1), 2, m.monad->unit(0), 3) == m.monad->unit(3));

  for (const char* name : {"C", "C'", "L", "L'", "MAYBE"}) {
    auto st = builtin_strength(name, 3);
    CHECK(st.phi(st.monad->unit(1), 2, st.monad->unit(2), 3) == st.monad->unit(5));
  }
  CHECK_THROWS_AS(builtin_strength("ASSOC", 3), Error);
}

TEST_CASE("oplax coherence of the builtin strengths") {
  for (const char* name : {"C", "C'", "L", "L'", "MAYBE"}) {
    Report r = check_oplax(builtin_strength(name, 3), 3);
    INFO(r.summary());
    CHECK(r.passed());
    for (const auto& c : r.checks) CHECK(c.instances > 0);
  }
}

TEST_CASE("broken strengths are caught") {
  Report u = check_oplax(broken_strength("L-union", 3), 2);
  CHECK(failed(u, "multiplication coherence"));
  CHECK_FALSE(failed(u, "unit coherence"));

  Report p = check_oplax(broken_strength("L-phibar", 3), 2);
  CHECK(failed(p, "unit of phibar"));
  CHECK(failed(p, "left and right unit"));
}

TEST_CASE("Kleisli composition") {
  auto lp = builtin_monad("L'", 3);
  const FinSet x({"x"});
  const FinSet ab({"a", "b"});
  const FinSet uv({"u", "v"});
  const KleisliMap f{lp, x, ab, {bag(*lp, {0, 1})}};
  const KleisliMap g{lp, ab, uv, {bag(*lp, {0}), bag(*lp, {0, 1})}};
  CHECK(kleisli_compose(g, f).values == std::vector<Term>{bag(*lp, {0, 1})});
  CHECK(kleisli_compose(g, kleisli_identity(lp, ab)) == g);
  CHECK(kleisli_compose(kleisli_identity(lp, uv), g) == g);
  CHECK_THROWS_AS(kleisli_compose(f, g), CompositionError);

  // multiplicities multiply through
  auto c = builtin_monad("C", 4);
  const KleisliMap f2{c, x, ab, {bag(*c, {0, 0})}};
  const KleisliMap g2{c, ab, uv, {bag(*c, {0, 1}), bag(*c, {1})}};
  CHECK(kleisli_compose(g2, f2).values[0] == bag(*c, {0, 0, 1, 1}));
}

TEST_CASE("Plonka products of Kleisli maps") {
  auto st = builtin_strength("L'", 3);
  const auto& T = *st.monad;
  const KleisliMap f1{st.monad, FinSet({"x"}), FinSet({"a", "b"}), {bag(T, {0, 1})}};
  const KleisliMap f2{st.monad, FinSet({"y"}), FinSet({"c"}), {bag(T, {0})}};
  const KleisliMap p = plonka_product(st, f1, f2);
  CHECK(p.dom.atoms() == std::vector<std::string>{"(x,y)"});
  CHECK(p.cod.atoms() == std::vector<std::string>{"(a,c)", "(b,c)"});
  CHECK(p.values[0] == bag(T, {0, 1}));

  const KleisliMap none = plonka_product(st, std::span<const KleisliMap>{});
  CHECK(none.values == std::vector<Term>{T.unit(0)});

  // bracketing does not matter for three factors
  auto c = builtin_strength("C'", 6);
  const auto& C = *c.monad;
  const KleisliMap h1{c.monad, FinSet({"p", "q"}), FinSet({"a", "b"}), {bag(C, {0}), bag(C, {0, 1})}};
  const KleisliMap h2{c.monad, FinSet({"r"}), FinSet({"c", "d"}), {bag(C, {1, 1})}};
  const KleisliMap h3{c.monad, FinSet({"s"}), FinSet({"e"}), {bag(C, {0})}};
  const std::vector<KleisliMap> hs{h1, h2, h3};
  const KleisliMap left = plonka_product(c, hs);
  const KleisliMap right = plonka_product(c, h1, plonka_product(c, h2, h3));
  CHECK(left.values == right.values);

  // a concrete C' functoriality instance
  const KleisliMap g1{c.monad, FinSet({"a", "b"}), FinSet({"u"}), {bag(C, {0, 0}), bag(C, {0})}};
  const KleisliMap g2{c.monad, FinSet({"c", "d"}), FinSet({"v", "w"}), {bag(C, {0}), bag(C, {1})}};
  const KleisliMap lhs = plonka_product(c, kleisli_compose(g1, h1), kleisli_compose(g2, h2));
  const KleisliMap rhs = kleisli_compose(plonka_product(c, g1, g2), plonka_product(c, h1, h2));
  CHECK(lhs.values == rhs.values);
}

TEST_CASE("product functoriality") {
  for (const char* name : {"L", "L'", "MAYBE", "C", "C'"}) {
    Report r = check_product_functor(builtin_strength(name, 3), 3);
    INFO(r.summary());
    CHECK(r.passed());
    for (const auto& c : r.checks) CHECK(c.instances > 0);
  }
}
