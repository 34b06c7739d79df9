#include "plonka/polycat.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace plonka {

std::string to_string(PolyKind kind) { return kind == PolyKind::regular ? "regular" : "linear"; }

PolyCategory::PolyCategory(std::shared_ptr<const EMAlgebra> base, PolyKind kind) : base_(std::move(base)), kind_(kind) {
  const TruncatedMonad& t = monad();
  if ((kind_ == PolyKind::regular) != (t.mode() == MonadMode::regular)) {
    throw AlgebraError(to_string(kind_) + " polynomials over a monad in " + to_string(t.mode()) + " mode");
  }
  // The pool lists each sorted tuple once per canonical label; morphisms
  // need every label, since their canonical label depends on the position.
  const std::vector<int>* last = nullptr;
  for (const auto& term : base_->terms().terms()) {
    if (term.arity() == 0 || (last && *last == term.vars)) continue;
    last = &term.vars;
    for (int r = 0; r < t.op().label_count(term.arity()); ++r) {
      if (!base_->eval(t.normalize(term.vars, r))) continue;
      for (int i = 0; i < term.arity(); ++i) {
        PolyMorphism m = canonical(term.vars, i, r);
        if (m.vars == term.vars && m.position == i && m.label == r) morphisms_.push_back(std::move(m));
      }
    }
  }
  std::sort(morphisms_.begin(), morphisms_.end());
  for (std::size_t k = 0; k < morphisms_.size(); ++k) index_.emplace(morphisms_[k], static_cast<int>(k));
}

std::optional<int> PolyCategory::index(const PolyMorphism& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int PolyCategory::target(const PolyMorphism& m) const {
  return base_->value(monad().normalize(m.vars, m.label));
}

PolyMorphism PolyCategory::canonical(std::vector<int> vars, int position, int label) const {
  const Operad& op = monad().op();
  if (position < 0 || position >= static_cast<int>(vars.size())) throw Error("position outside the variables");
  if (kind_ == PolyKind::regular) {
    Factorization f = factor(vars);
    const int m = static_cast<int>(f.image.size());
    const int p = f.surjection[static_cast<std::size_t>(position)];
    return PolyMorphism{std::move(f.image), p, op.act_surjection(f.surjection, m, label)};
  }
  const int n = static_cast<int>(vars.size());
  SortedTuple st = sort_tuple(vars);
  std::vector<int> sigma(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) sigma[static_cast<std::size_t>(st.sorter[static_cast<std::size_t>(p)])] = p;
  const int p0 = sigma[static_cast<std::size_t>(position)];
  const int r0 = op.act_permutation(sigma, label);
  std::pair<int, int> best{p0, r0};
  for_each_run_permutation(n, st.runs, [&](std::span<const int> tau) {
    const std::pair<int, int> cand{tau[static_cast<std::size_t>(p0)], op.act_permutation(tau, r0)};
    best = std::min(best, cand);
  });
  return PolyMorphism{std::move(st.sorted), best.first, best.second};
}

PolyMorphism PolyCategory::identity(int object) const {
  if (object < 0 || object >= object_count()) throw Error("unknown object");
  return PolyMorphism{{object}, 0, monad().op().unit()};
}

PolyMorphism PolyCategory::compose(const PolyMorphism& g, const PolyMorphism& f) const {
  if (target(f) != source(g)) {
    throw CompositionError("cannot compose " + show(g) + " after " + show(f) + ": endpoints differ");
  }
  std::vector<int> vars;
  const auto j = static_cast<std::size_t>(g.position);
  vars.insert(vars.end(), g.vars.begin(), g.vars.begin() + static_cast<std::ptrdiff_t>(j));
  vars.insert(vars.end(), f.vars.begin(), f.vars.end());
  vars.insert(vars.end(), g.vars.begin() + static_cast<std::ptrdiff_t>(j) + 1, g.vars.end());
  const LabelRef l = monad().op().substitute_at({g.arity(), g.label}, g.position, {f.arity(), f.label});
  PolyMorphism out = canonical(std::move(vars), g.position + f.position, l.label);
  if (out.arity() > monad().nmax()) throw TruncationError("composite of arity " + std::to_string(out.arity()) + " beyond N_max");
  return out;
}

std::string PolyCategory::show(const PolyMorphism& m) const {
  std::string out = "[(";
  for (std::size_t i = 0; i < m.vars.size(); ++i) out += (i ? "," : "") + algebra().carrier().atom(m.vars[i]);
  return out + ")," + std::to_string(m.position + 1) + "," + monad().op().label_name(m.arity(), m.label) + "]";
}

namespace {

std::vector<std::vector<int>> by_source(const PolyCategory& cat) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(cat.object_count()));
  const auto& ms = cat.morphisms();
  for (std::size_t k = 0; k < ms.size(); ++k) out[static_cast<std::size_t>(cat.source(ms[k]))].push_back(static_cast<int>(k));
  return out;
}

}  // namespace

Report check_category(const PolyCategory& cat) {
  Report report;
  report.subject = "CP_" + std::string(cat.kind() == PolyKind::regular ? "r" : "l") + " over " + cat.monad().name() +
                   " algebra on " + std::to_string(cat.object_count()) + " elements";
  const auto& ms = cat.morphisms();
  const auto from = by_source(cat);

  CheckResult& ids = report.add("identity", "every enumerated morphism");
  for (int a = 0; a < cat.object_count(); ++a) {
    ++ids.instances;
    const PolyMorphism id = cat.identity(a);
    if (!cat.index(id) || cat.target(id) != a) ids.fail("identity at " + cat.algebra().carrier().atom(a) + " is not an endomorphism");
  }
  for (const auto& m : ms) {
    ++ids.instances;
    const PolyMorphism left = cat.compose(cat.identity(cat.target(m)), m);
    const PolyMorphism right = cat.compose(m, cat.identity(cat.source(m)));
    if (!(left == m) || !(right == m)) {
      ids.fail(cat.show(m) + ": id.f = " + cat.show(left) + ", f.id = " + cat.show(right));
    }
  }

  CheckResult& ends = report.add("closure and endpoints", "composable pairs within N_max");
  CheckResult& assoc = report.add("associativity", "composable triples within N_max");
  for (const auto& f : ms) {
    for (int gi : from[static_cast<std::size_t>(cat.target(f))]) {
      const PolyMorphism& g = ms[static_cast<std::size_t>(gi)];
      PolyMorphism gf;
      try {
        gf = cat.compose(g, f);
      } catch (const TruncationError&) {
        ++ends.out_of_fragment;
        continue;
      }
      ++ends.instances;
      if (!cat.index(gf) || cat.source(gf) != cat.source(f) || cat.target(gf) != cat.target(g)) {
        ends.fail(cat.show(g) + " . " + cat.show(f) + " = " + cat.show(gf) + " has the wrong endpoints");
        continue;
      }
      for (int hi : from[static_cast<std::size_t>(cat.target(g))]) {
        const PolyMorphism& h = ms[static_cast<std::size_t>(hi)];
        try {
          const PolyMorphism left = cat.compose(h, gf);
          const PolyMorphism right = cat.compose(cat.compose(h, g), f);
          ++assoc.instances;
          if (!(left == right)) {
            assoc.fail("(" + cat.show(h) + " . " + cat.show(g) + ") . " + cat.show(f) + " = " + cat.show(right) +
                       " but h.(g.f) = " + cat.show(left));
          }
        } catch (const TruncationError&) {
          ++assoc.out_of_fragment;
        }
      }
    }
  }
  return report;
}

Report check_functor(const PolyFunctor& fn) {
  const PolyCategory& dom = *fn.dom;
  const PolyCategory& cod = *fn.cod;
  Report report;
  report.subject = "functor " + fn.name;
  const auto& ms = dom.morphisms();
  const auto from = by_source(dom);

  CheckResult& objs = report.add("morphisms and endpoints", "every enumerated morphism");
  std::vector<std::optional<PolyMorphism>> image(ms.size());
  for (std::size_t k = 0; k < ms.size(); ++k) {
    ++objs.instances;
    PolyMorphism m;
    try {
      m = fn.morphism(ms[k]);
    } catch (const TruncationError&) {
      --objs.instances;
      ++objs.out_of_fragment;
      continue;
    }
    image[k] = m;
    if (!cod.index(m)) {
      objs.fail(dom.show(ms[k]) + " goes to " + cod.show(m) + ", which is not a morphism");
      image[k].reset();
      continue;
    }
    if (cod.source(m) != fn.objects[static_cast<std::size_t>(dom.source(ms[k]))] ||
        cod.target(m) != fn.objects[static_cast<std::size_t>(dom.target(ms[k]))]) {
      objs.fail(dom.show(ms[k]) + " goes to " + cod.show(m) + " with mismatched endpoints");
    }
  }

  CheckResult& ids = report.add("identities", "every object");
  for (int a = 0; a < dom.object_count(); ++a) {
    ++ids.instances;
    const auto k = dom.index(dom.identity(a));
    const PolyMorphism want = cod.identity(fn.objects[static_cast<std::size_t>(a)]);
    if (!k || !image[static_cast<std::size_t>(*k)] || !(*image[static_cast<std::size_t>(*k)] == want)) {
      ids.fail("identity at " + dom.algebra().carrier().atom(a) + " is not preserved");
    }
  }

  CheckResult& comp = report.add("composition", "composable pairs within N_max");
  for (std::size_t fi = 0; fi < ms.size(); ++fi) {
    for (int gi : from[static_cast<std::size_t>(dom.target(ms[fi]))]) {
      const auto& fimg = image[fi];
      const auto& gimg = image[static_cast<std::size_t>(gi)];
      if (!fimg || !gimg) {
        ++comp.out_of_fragment;
        continue;
      }
      try {
        const PolyMorphism gf = dom.compose(ms[static_cast<std::size_t>(gi)], ms[fi]);
        const auto k = dom.index(gf);
        if (!k || !image[static_cast<std::size_t>(*k)]) throw TruncationError("composite outside the fragment");
        const PolyMorphism right = cod.compose(*gimg, *fimg);
        ++comp.instances;
        if (!(*image[static_cast<std::size_t>(*k)] == right)) {
          comp.fail("F(" + dom.show(gf) + ") = " + cod.show(*image[static_cast<std::size_t>(*k)]) + " but F(g).F(f) = " +
                    cod.show(right));
        }
      } catch (const TruncationError&) {
        ++comp.out_of_fragment;
      }
    }
  }
  return report;
}

PolyFunctor poly_functor_on_hom(const PolyCategory& dom, const PolyCategory& cod, const AlgebraHom& h) {
  if (!(dom.algebra() == *h.source) || !(cod.algebra() == *h.target)) {
    throw CompositionError("homomorphism endpoints do not match the categories");
  }
  if (!is_hom(h)) throw AlgebraError("not a homomorphism");
  PolyFunctor f;
  f.name = "CP(h)";
  f.dom = &dom;
  f.cod = &cod;
  f.objects = h.map;
  const PolyCategory* c = &cod;
  f.morphism = [c, map = h.map](const PolyMorphism& m) {
    std::vector<int> vars;
    for (int v : m.vars) vars.push_back(map[static_cast<std::size_t>(v)]);
    return c->canonical(std::move(vars), m.position, m.label);
  };
  return f;
}

PolyFunctor gamma(const MonadMorphism& tau, const PolyCategory& dom, const PolyCategory& cod) {
  if (!tau.coefficient_induced()) throw Error(tau.name() + " is not induced by coefficient maps");
  if (dom.algebra().carrier().atoms() != cod.algebra().carrier().atoms()) {
    throw CompositionError("gamma needs the same carrier on both sides");
  }
  PolyFunctor f;
  f.name = "gamma(" + tau.name() + ")";
  f.dom = &dom;
  f.cod = &cod;
  f.objects.resize(static_cast<std::size_t>(dom.object_count()));
  std::iota(f.objects.begin(), f.objects.end(), 0);
  const PolyCategory* c = &cod;
  const MonadMorphism* t = &tau;
  f.morphism = [c, t](const PolyMorphism& m) { return c->canonical(m.vars, m.position, t->label_map(m.arity(), m.label)); };
  return f;
}

std::vector<std::vector<bool>> posetal_collapse(const PolyCategory& cat) {
  if (!dynamic_cast<const TerminalOperad*>(&cat.monad().op()) || cat.kind() != PolyKind::regular) {
    throw AlgebraError("posetal collapse needs an algebra over L or L'");
  }
  const auto n = static_cast<std::size_t>(cat.object_count());
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (const auto& m : cat.morphisms()) {
    leq[static_cast<std::size_t>(cat.source(m))][static_cast<std::size_t>(cat.target(m))] = true;
  }
  return leq;
}

std::string to_dot(const PolyCategory& cat) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "digraph CP {\n";
  for (int a = 0; a < cat.object_count(); ++a) out << "  n" << a << " [label=" << quote(cat.algebra().carrier().atom(a)) << "];\n";
  for (const auto& m : cat.morphisms()) {
    out << "  n" << cat.source(m) << " -> n" << cat.target(m) << " [label=" << quote(cat.show(m)) << "];\n";
  }
  out << "}\n";
  return out.str();
}

const AlgebraHom& FunctorData::on(const PolyMorphism& m) const {
  auto k = domain->index(m);
  if (!k) throw Error("functor data has no image for " + domain->show(m));
  return morphisms[static_cast<std::size_t>(*k)];
}

Report check_functor_data(const FunctorData& f) {
  const PolyCategory& cat = *f.domain;
  Report report;
  report.subject = "functor data on " + std::to_string(cat.object_count()) + " objects";
  const auto& ms = cat.morphisms();

  CheckResult& shape = report.add("endpoints and homomorphisms", "every enumerated morphism");
  bool sized = static_cast<int>(f.objects.size()) == cat.object_count() && f.morphisms.size() == ms.size();
  if (!sized) {
    shape.fail("functor data does not cover the category");
    return report;
  }
  for (std::size_t k = 0; k < ms.size(); ++k) {
    ++shape.instances;
    const AlgebraHom& h = f.morphisms[k];
    if (!(*h.source == f.at(cat.source(ms[k]))) || !(*h.target == f.at(cat.target(ms[k])))) {
      shape.fail(cat.show(ms[k]) + ": homomorphism endpoints differ from the object images");
      continue;
    }
    CheckResult c = check_hom(h);
    if (!c.passed()) shape.fail(cat.show(ms[k]) + ": " + (c.witnesses.empty() ? "not a homomorphism" : c.witnesses[0]));
  }

  CheckResult& ids = report.add("identities", "every object");
  for (int a = 0; a < cat.object_count(); ++a) {
    ++ids.instances;
    const AlgebraHom& h = f.on(cat.identity(a));
    for (int x = 0; x < static_cast<int>(h.map.size()); ++x) {
      if (h(x) != x) {
        ids.fail("F(id) at " + cat.algebra().carrier().atom(a) + " moves " + h.source->carrier().atom(x));
        break;
      }
    }
  }

  CheckResult& comp = report.add("composition", "composable pairs within N_max");
  const auto from = by_source(cat);
  for (std::size_t fi = 0; fi < ms.size(); ++fi) {
    for (int gi : from[static_cast<std::size_t>(cat.target(ms[fi]))]) {
      try {
        const PolyMorphism gf = cat.compose(ms[static_cast<std::size_t>(gi)], ms[fi]);
        const AlgebraHom& left = f.on(gf);
        const AlgebraHom& hg = f.morphisms[static_cast<std::size_t>(gi)];
        const AlgebraHom& hf = f.morphisms[fi];
        ++comp.instances;
        for (std::size_t x = 0; x < hf.map.size(); ++x) {
          if (left(static_cast<int>(x)) != hg(hf(static_cast<int>(x)))) {
            comp.fail("F(" + cat.show(gf) + ") differs from F(" + cat.show(ms[static_cast<std::size_t>(gi)]) + ").F(" +
                      cat.show(ms[fi]) + ") at " + hf.source->carrier().atom(static_cast<int>(x)));
            break;
          }
        }
      } catch (const TruncationError&) {
        ++comp.out_of_fragment;
      }
    }
  }
  return report;
}

FunctorData lift_from_poset(std::shared_ptr<const PolyCategory> cat,
                            std::vector<std::shared_ptr<const EMAlgebra>> objects,
                            const std::function<std::vector<int>(int a, int b)>& transition) {
  if (static_cast<int>(objects.size()) != cat->object_count()) throw Error("one algebra per object is needed");
  FunctorData f{cat, std::move(objects), {}};
  for (const auto& m : cat->morphisms()) {
    const int a = cat->source(m);
    const int b = cat->target(m);
    f.morphisms.push_back(AlgebraHom{f.objects[static_cast<std::size_t>(a)], f.objects[static_cast<std::size_t>(b)], transition(a, b)});
  }
  return f;
}

FunctorData constant_functor(std::shared_ptr<const PolyCategory> cat, std::shared_ptr<const EMAlgebra> algebra) {
  std::vector<std::shared_ptr<const EMAlgebra>> objects(static_cast<std::size_t>(cat->object_count()), algebra);
  return lift_from_poset(std::move(cat), std::move(objects), [&](int, int) {
    std::vector<int> id(static_cast<std::size_t>(algebra->size()));
    std::iota(id.begin(), id.end(), 0);
    return id;
  });
}

}  // namespace plonka
