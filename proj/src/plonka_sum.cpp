#include "plonka/plonka_sum.hpp"

#include <numeric>

namespace plonka {

namespace {

bool same_monad(const TruncatedMonad& a, const TruncatedMonad& b) {
  return &a == &b || (a.name() == b.name() && a.nmax() == b.nmax() && a.mode() == b.mode());
}

std::string show_value(const TruncatedMonad& r, const TaggedCarrier& x, const LambdaValue& v,
                       const std::function<std::string(int, int)>& atom) {
  (void)x;
  return "(" + std::to_string(v.component) + ", " + r.show(v.term, [&](int e) { return atom(v.component, e); }) + ")";
}

}  // namespace

SetFunctor underlying(const FunctorData& f) {
  SetFunctor g;
  for (const auto& a : f.objects) g.sizes.push_back(a->size());
  g.map = [f](const PolyMorphism& psi, int v) { return f.on(psi)(v); };
  return g;
}

TaggedCarrier tagged_carrier(const std::vector<int>& sizes, const std::function<std::string(int a, int v)>& atom) {
  TaggedCarrier x;
  std::vector<std::string> atoms;
  for (int a = 0; a < static_cast<int>(sizes.size()); ++a) {
    x.offset.push_back(static_cast<int>(atoms.size()));
    for (int v = 0; v < sizes[static_cast<std::size_t>(a)]; ++v) {
      atoms.push_back(atom(a, v));
      x.tag.push_back(a);
      x.elem.push_back(v);
    }
  }
  x.atoms = FinSet(std::move(atoms));
  return x;
}

TaggedCarrier tagged_carrier(const PlonkaContext& ctx) {
  std::vector<int> sizes;
  for (const auto& a : ctx.F.objects) sizes.push_back(a->size());
  return tagged_carrier(sizes, [&](int a, int v) { return ctx.index().carrier().atom(a) + "." + ctx.F.at(a).carrier().atom(v); });
}

Report validate_context(const PlonkaContext& ctx) {
  Report report;
  report.subject = "Plonka context over " + ctx.R->name();
  CheckResult& shape = report.add("context shape", "monads, index kind and functor values");
  ++shape.instances;
  if (!ctx.pi.coefficient_induced()) shape.fail(ctx.pi.name() + " is not induced by coefficient maps");
  if (!same_monad(*ctx.pi.source(), *ctx.R)) shape.fail(ctx.pi.name() + " does not start at " + ctx.R->name());
  if (!same_monad(*ctx.pi.target(), *ctx.index().monad())) {
    shape.fail("the index algebra is over " + ctx.index().monad()->name() + ", not " + ctx.pi.target()->name());
  }
  const PolyKind want = ctx.R->mode() == MonadMode::regular ? PolyKind::regular : PolyKind::linear;
  if (ctx.cat().kind() != want) shape.fail("index category kind does not match the mode of " + ctx.R->name());
  for (const auto& a : ctx.F.objects) {
    if (!same_monad(*a->monad(), *ctx.R)) shape.fail("a value of F is over " + a->monad()->name());
  }
  if (shape.passed()) report.merge(check_functor_data(ctx.F), "F");
  return report;
}

PlonkaContext make_context(MonadMorphism pi, FunctorData f) {
  MonadPtr r = pi.source();
  PlonkaContext ctx{std::move(r), std::move(pi), std::move(f)};
  Report rep = validate_context(ctx);
  if (!rep.passed()) throw AlgebraError(rep.summary());
  return ctx;
}

LambdaValue lambda(const TruncatedMonad& R, const MonadMorphism& pi, const PolyCategory& cat, const SetFunctor& g,
                   const TaggedCarrier& carrier, std::span<const int> vars, int label) {
  const int n = static_cast<int>(vars.size());
  std::vector<int> tags(static_cast<std::size_t>(n));
  std::vector<int> elems(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    tags[static_cast<std::size_t>(i)] = carrier.tag[static_cast<std::size_t>(vars[static_cast<std::size_t>(i)])];
    elems[static_cast<std::size_t>(i)] = carrier.elem[static_cast<std::size_t>(vars[static_cast<std::size_t>(i)])];
  }
  const TruncatedMonad& T = *pi.target();
  const EMAlgebra& index = cat.algebra();
  auto component = [&](std::span<const int> a, int rt) {
    auto b = index.eval(T.normalize(a, rt));
    if (!b) throw TruncationError("index structure undefined");
    return *b;
  };
  std::vector<int> y(static_cast<std::size_t>(n));
  int b = 0;
  if (R.mode() == MonadMode::regular) {
    // p . x = a . s with a injective; the T-label is pi(R(s) r).
    Factorization f = factor(tags);
    const int m = static_cast<int>(f.image.size());
    const int rt = pi.label_map(m, R.op().act_surjection(f.surjection, m, label));
    b = component(f.image, rt);
    for (int i = 0; i < n; ++i) {
      const PolyMorphism psi = cat.canonical(f.image, f.surjection[static_cast<std::size_t>(i)], rt);
      y[static_cast<std::size_t>(i)] = g.map(psi, elems[static_cast<std::size_t>(i)]);
    }
  } else {
    const int rt = pi.label_map(n, label);
    b = component(tags, rt);
    for (int i = 0; i < n; ++i) {
      const PolyMorphism psi = cat.canonical(tags, i, rt);
      y[static_cast<std::size_t>(i)] = g.map(psi, elems[static_cast<std::size_t>(i)]);
    }
  }
  return LambdaValue{b, R.normalize(y, label)};
}

LambdaValue lambda(const PlonkaContext& ctx, const TaggedCarrier& carrier, const Term& t) {
  return lambda(*ctx.R, ctx.pi, ctx.cat(), underlying(ctx.F), carrier, t.vars, t.label);
}

EMAlgebra plonka_sum(const PlonkaContext& ctx) {
  const TaggedCarrier x = tagged_carrier(ctx);
  const SetFunctor g = underlying(ctx.F);
  return EMAlgebra::from_function(ctx.R, x.atoms, [&](const Term& t) -> std::optional<int> {
    try {
      const LambdaValue v = lambda(*ctx.R, ctx.pi, ctx.cat(), g, x, t.vars, t.label);
      auto e = ctx.F.at(v.component).eval(v.term);
      if (!e) return std::nullopt;
      return x.at(v.component, *e);
    } catch (const TruncationError&) {
      return std::nullopt;
    }
  });
}

Report check_lax_morphism(const PlonkaContext& ctx) {
  const TruncatedMonad& R = *ctx.R;
  const TaggedCarrier x = tagged_carrier(ctx);
  const SetFunctor g = underlying(ctx.F);
  auto lam = [&](std::span<const int> vars, int label) { return lambda(R, ctx.pi, ctx.cat(), g, x, vars, label); };
  auto atom = [&](int a, int v) { return ctx.index().carrier().atom(a) + "." + ctx.F.at(a).carrier().atom(v); };
  auto show_x = [&](const Term& t) { return R.show(t, [&](int k) { return x.atoms.atom(k); }); };
  Report report;
  report.subject = "lax morphism (sum, lambda) for " + R.name() + " over " + ctx.index().monad()->name();

  const std::vector<Term> p1 = R.eval(x.size());
  const TermPool pool1(p1);

  CheckResult& orbit = report.add("orbit independence", "every representative of every term over the sum");
  for (const auto& t : p1) {
    const LambdaValue base = lam(t.vars, t.label);
    for (const auto& sigma : all_permutations(t.arity())) {
      std::vector<int> vars(t.vars.size());
      for (std::size_t i = 0; i < vars.size(); ++i) vars[i] = t.vars[static_cast<std::size_t>(sigma[i])];
      const int label = R.op().act_permutation(Permutation(sigma).inverse().images(), t.label);
      ++orbit.instances;
      const LambdaValue other = lam(vars, label);
      if (!(other == base)) {
        orbit.fail(show_x(t) + ": lambda depends on the representative, " + show_value(R, x, base, atom) + " vs " +
                   show_value(R, x, other, atom));
      }
    }
  }

  CheckResult& unit = report.add("unit coherence", "lambda(eta(a.v)) = (a, eta(v))");
  for (int k = 0; k < x.size(); ++k) {
    ++unit.instances;
    const Term e = R.unit(k);
    const LambdaValue got = lam(e.vars, e.label);
    const LambdaValue want{x.tag[static_cast<std::size_t>(k)], R.unit(x.elem[static_cast<std::size_t>(k)])};
    if (!(got == want)) unit.fail("lambda(eta(" + x.atoms.atom(k) + ")) = " + show_value(R, x, got, atom));
  }

  CheckResult& mult = report.add("multiplication coherence", "R^2 of the sum with at most N_max leaves");
  // R-hat F: the functor a |-> R(F(a)), pooled per object.
  SetFunctor rf;
  for (const auto& a : ctx.F.objects) rf.sizes.push_back(a->terms().size());
  rf.map = [&](const PolyMorphism& psi, int k) {
    const AlgebraHom& h = ctx.F.on(psi);
    return h.target->terms().index(R.map(h.source->terms()[k], h.map));
  };
  const TaggedCarrier y = tagged_carrier(rf.sizes, [](int a, int k) { return std::to_string(a) + "." + std::to_string(k); });
  std::vector<int> inner(p1.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const LambdaValue v = lam(p1[i].vars, p1[i].label);
    inner[i] = y.at(v.component, ctx.F.at(v.component).terms().index(v.term));
  }
  const Budget budget = arity_budget(p1, R.nmax());
  for (const auto& w : R.eval(pool1.size(), &budget)) {
    try {
      const Term flat = R.join(w, pool1);
      const LambdaValue left = lam(flat.vars, flat.label);
      const Term moved = R.map(w, inner);
      const LambdaValue outer = lambda(R, ctx.pi, ctx.cat(), rf, y, moved.vars, moved.label);
      const LambdaValue right{outer.component, R.join(outer.term, ctx.F.at(outer.component).terms())};
      ++mult.instances;
      if (!(left == right)) {
        mult.fail("on " + R.show(w, [&](int v) { return show_x(p1[static_cast<std::size_t>(v)]); }) +
                  ": lambda.mu = " + show_value(R, x, left, atom) + " but mu.lambda.R(lambda) = " +
                  show_value(R, x, right, atom));
      }
    } catch (const TruncationError&) {
      ++mult.out_of_fragment;
    }
  }
  return report;
}

Preservation check_preservation(const MonadMorphism& tau, const MonadMorphism& pi_r, const PlonkaContext& ctx_v) {
  if (!same_monad(*tau.target(), *ctx_v.R)) throw AlgebraError(tau.name() + " does not land in " + ctx_v.R->name());
  if (!same_monad(*pi_r.source(), *tau.source()) || !same_monad(*pi_r.target(), *ctx_v.pi.target())) {
    throw AlgebraError(pi_r.name() + " does not connect " + tau.source()->name() + " to the index monad");
  }
  if (!pi_r.coefficient_induced()) throw AlgebraError(pi_r.name() + " is not induced by coefficient maps");
  Preservation out;

  const TruncatedMonad& R = *tau.source();
  for (int n = 0; n <= R.nmax() && out.triangle_commutes; ++n) {
    for (int r = 0; r < R.op().label_count(n); ++r) {
      const auto& direct = pi_r.table()[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
      const auto& via = tau.table()[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
      const auto through = via ? ctx_v.pi.apply(*via) : std::nullopt;
      if (!direct || !through || !(*direct == *through)) {
        out.triangle_commutes = false;
        break;
      }
    }
  }

  FunctorData fr{ctx_v.F.domain, {}, {}};
  for (const auto& a : ctx_v.F.objects) fr.objects.push_back(std::make_shared<const EMAlgebra>(em_functor(tau, *a)));
  const auto& ms = ctx_v.cat().morphisms();
  for (std::size_t k = 0; k < ms.size(); ++k) {
    fr.morphisms.push_back(AlgebraHom{fr.objects[static_cast<std::size_t>(ctx_v.cat().source(ms[k]))],
                                      fr.objects[static_cast<std::size_t>(ctx_v.cat().target(ms[k]))],
                                      ctx_v.F.morphisms[k].map});
  }
  const PlonkaContext ctx_r{tau.source(), pi_r, std::move(fr)};

  const EMAlgebra left = em_functor(tau, plonka_sum(ctx_v));
  const EMAlgebra right = plonka_sum(ctx_r);
  for (int i = 0; i < left.terms().size(); ++i) {
    const int a = left.structure()[static_cast<std::size_t>(i)];
    const int b = right.structure()[static_cast<std::size_t>(i)];
    if (a < 0 || b < 0) {
      ++out.out_of_fragment;
      continue;
    }
    ++out.instances;
    if (a != b && out.preserved) {
      out.preserved = false;
      out.witness = R.show(left.terms()[i], [&](int v) { return left.carrier().atom(v); }) + ": EM(" + tau.name() +
                    ") of the sum gives " + left.carrier().atom(a) + ", the sum of EM(" + tau.name() + ") F gives " +
                    right.carrier().atom(b);
    }
  }
  return out;
}

}  // namespace plonka
