#include <doctest.h>

#include "plonka/emalg.hpp"
#include "semilattices.hpp"

using namespace plonka;

using namespace plonka::testing;

TEST_CASE("semilattice tables oracle") {
  CHECK(semilattice_tables(1).size() == 1);
  CHECK(semilattice_tables(2).size() == 2);
  // 6 chains and 3 choices of top for the two incomparable points
  CHECK(semilattice_tables(3).size() == 9);
}

TEST_CASE("2-chain semilattice is an L' algebra; a non-associative join is not") {
  auto lp = builtin_monad("L'", 3);
  EMAlgebra chain = semilattice_algebra(lp, FinSet({"0", "1"}), chain_max(2), std::nullopt);
  Report r = check_algebra(chain);
  INFO(r.summary());
  CHECK(r.passed());
  CHECK(chain.total());

  // rock-paper-scissors: commutative and idempotent, not associative
  Table rps{{0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  EMAlgebra bad = semilattice_algebra(lp, FinSet({"r", "p", "s"}), rps, std::nullopt);
  Report rb = check_algebra(bad);
  CHECK_FALSE(rb.passed());
  bool mult_failed = false;
  for (const auto& c : rb.checks) {
    if (c.name == "multiplication law" && !c.passed()) mult_failed = !c.witnesses.empty();
  }
  CHECK(mult_failed);
}

TEST_CASE("every semilattice on at most 3 points is an L and L' algebra") {
  for (int n = 1; n <= 3; ++n) {
    for (const auto& t : semilattice_tables(n)) {
      // the bottom exists in a finite semilattice iff some element is below all others
      std::optional<int> bottom;
      for (int a = 0; a < n; ++a) {
        bool below = true;
        for (int b = 0; b < n; ++b) below = below && t[a][b] == b;
        if (below) bottom = a;
      }
      CHECK(check_algebra(semilattice_algebra(builtin_monad("L'", 3), FinSet::range(n), t, std::nullopt)).passed());
      if (bottom) CHECK(check_algebra(semilattice_algebra(builtin_monad("L", 3), FinSet::range(n), t, bottom)).passed());
    }
  }
}

TEST_CASE("free algebras") {
  auto lp = builtin_monad("L'", 3);
  EMAlgebra f = free_algebra(lp, FinSet({"x", "y"}));
  CHECK(f.size() == 3);
  CHECK(check_algebra(f).passed());

  EMAlgebra id = free_algebra(builtin_monad("ID", 3), FinSet({"x", "y"}));
  CHECK(id.size() == 2);
  for (int i = 0; i < id.terms().size(); ++i) CHECK(id.structure()[i] == id.terms()[i].vars[0]);

  EMAlgebra maybe = free_algebra(builtin_monad("MAYBE", 3), FinSet({"x"}));
  CHECK(maybe.size() == 2);
  CHECK(maybe.carrier().atoms() == std::vector<std::string>{"*()", "iota(x)"});

  for (const auto& name : builtin_operad_names()) {
    auto t = builtin_monad(name, 3);
    for (int n = 0; n <= 2; ++n) {
      Report r = check_algebra(free_algebra(t, FinSet::range(n, "g")));
      INFO(r.summary());
      CHECK(r.passed());
    }
  }
}

TEST_CASE("em_functor") {
  auto L = builtin_monad("L", 3);
  auto maybe = builtin_monad("MAYBE", 3);
  EMAlgebra powerset = semilattice_algebra(L, FinSet({"0", "1"}), chain_max(2), 0);
  CHECK(em_functor(MonadMorphism::identity(L), powerset) == powerset);

  EMAlgebra pointed = em_functor(terminal_morphism(maybe, L), powerset);
  CHECK(pointed.value(Term{{}, 0}) == 0);
  CHECK(pointed == pointed_algebra(maybe, FinSet({"0", "1"}), 0));
  CHECK(check_algebra(pointed).passed());

  // homomorphisms of bounded semilattices stay homomorphisms of pointed sets
  auto tau = terminal_morphism(maybe, L);
  std::vector<std::shared_ptr<const EMAlgebra>> bounded;
  for (int n = 1; n <= 3; ++n) {
    for (const auto& t : semilattice_tables(n)) {
      for (int z = 0; z < n; ++z) {
        bool below = true;
        for (int b = 0; b < n; ++b) below = below && t[z][b] == b;
        if (below) bounded.push_back(std::make_shared<const EMAlgebra>(semilattice_algebra(L, FinSet::range(n), t, z)));
      }
    }
  }
  REQUIRE(bounded.size() == 1 + 2 + 6);
  int homs = 0;
  for (const auto& a : bounded) {
    for (const auto& b : bounded) {
      for (const auto& h : all_homs(a, b)) {
        ++homs;
        CHECK(is_hom(em_functor(tau, h)));
      }
    }
  }
  CHECK(homs > 0);
}

TEST_CASE("em_functor is contravariantly functorial") {
  auto magma = builtin_monad("MAGMA", 3);
  auto assoc = builtin_monad("ASSOC", 3);
  auto C = builtin_monad("C", 3);
  auto forget = forget_brackets(magma, assoc);
  auto count = terminal_morphism(assoc, C);
  auto both = compose(count, forget);
  CHECK(check_morphism(both, LawCaps{3, 2}).passed());
  for (int n = 1; n <= 3; ++n) {
    for (const auto& t : semilattice_tables(n)) {
      // a semilattice is in particular a commutative monoid when it has a bottom
      std::optional<int> bottom;
      for (int a = 0; a < n; ++a) {
        bool below = true;
        for (int b = 0; b < n; ++b) below = below && t[a][b] == b;
        if (below) bottom = a;
      }
      if (!bottom) continue;
      EMAlgebra b = semilattice_algebra(C, FinSet::range(n), t, bottom);
      REQUIRE(check_algebra(b).passed());
      CHECK(em_functor(both, b) == em_functor(forget, em_functor(count, b)));
    }
  }
}

TEST_CASE("homomorphisms compose") {
  auto lp = builtin_monad("L'", 3);
  std::vector<std::shared_ptr<const EMAlgebra>> algebras;
  for (int n = 1; n <= 3; ++n) {
    for (const auto& t : semilattice_tables(n)) {
      algebras.push_back(std::make_shared<const EMAlgebra>(semilattice_algebra(lp, FinSet::range(n), t, std::nullopt)));
    }
  }
  // 1 + 2 + 9 algebras
  REQUIRE(algebras.size() == 12);
  for (const auto& a : algebras) {
    CHECK(is_hom(identity_hom(a)));
    for (const auto& b : algebras) {
      for (const auto& f : all_homs(a, b)) {
        for (const auto& c : algebras) {
          for (const auto& g : all_homs(b, c)) REQUIRE(is_hom(compose(g, f)));
        }
      }
    }
  }
}

TEST_CASE("products") {
  auto lp = builtin_monad("L'", 3);
  EMAlgebra chain = semilattice_algebra(lp, FinSet({"0", "1"}), chain_max(2), std::nullopt);
  EMAlgebra diamond = product_algebra(chain, chain);
  CHECK(diamond.size() == 4);
  CHECK(check_algebra(diamond).passed());
  const int a = diamond.carrier().index("(0,1)");
  const int b = diamond.carrier().index("(1,0)");
  CHECK(diamond.value(lp->normalize(std::vector<int>{a, b}, 0)) == diamond.carrier().index("(1,1)"));

  EMAlgebra with_point = product_algebra(chain, terminal_algebra(lp));
  CHECK(are_isomorphic(with_point, chain));
  CHECK_FALSE(are_isomorphic(diamond, product_algebra(chain, terminal_algebra(lp))));

  // the 3-chain is not isomorphic to the "V" with a top
  EMAlgebra chain3 = semilattice_algebra(lp, FinSet::range(3), chain_max(3), std::nullopt);
  Table vee{{0, 2, 2}, {2, 1, 2}, {2, 2, 2}};
  EMAlgebra top = semilattice_algebra(lp, FinSet::range(3), vee, std::nullopt);
  CHECK_FALSE(are_isomorphic(chain3, top));
  Table vee2{{0, 0, 0}, {0, 1, 0}, {0, 0, 2}};
  EMAlgebra top2 = semilattice_algebra(lp, FinSet::range(3), vee2, std::nullopt);
  auto iso = find_isomorphism(top, top2);
  REQUIRE(iso.has_value());
  CHECK((*iso)[2] == 0);
}
