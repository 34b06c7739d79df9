#include "plonka/convexity.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <optional>

#include "plonka/error.hpp"

namespace plonka {

namespace {

using boost::multiprecision::cpp_int;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_atom(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.';
  });
}

cpp_int parse_integer(std::string_view s, std::string_view whole) {
  std::string_view digits = s;
  if (!digits.empty() && digits.front() == '-') digits.remove_prefix(1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError("bad rational '" + std::string(whole) + "'");
  }
  return cpp_int(std::string(s));
}

std::string show_set(const std::set<std::string>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : s) {
    if (!first) out += ",";
    out += a;
    first = false;
  }
  return out + "}";
}

std::set<std::string> set_of(const FinSet& x) { return {x.atoms().begin(), x.atoms().end()}; }

std::string show_inputs(std::span<const ConvexPoint> points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) out += "; ";
    out += format(points[i]);
  }
  return out;
}

void require_in_pool(const FinSet& pool, const ConvexPoint& p) {
  if (!is_valid(p)) throw AlgebraError("not a convex point: " + format(p));
  for (const auto& a : p.component) {
    if (!pool.find(a)) throw AlgebraError("generator '" + a + "' is not in the pool");
  }
}

}  // namespace

std::string to_string(const Rational& q) {
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  const std::string_view t = trim(text);
  const std::size_t slash = t.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(t, text));
  const cpp_int num = parse_integer(trim(t.substr(0, slash)), text);
  const cpp_int den = parse_integer(trim(t.substr(slash + 1)), text);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

CVOperation::CVOperation(std::vector<Rational> weights) : weights_(std::move(weights)) {
  Rational sum = 0;
  for (const auto& w : weights_) {
    if (w <= 0) throw AlgebraError("weights of a convex operation must be positive");
    sum += w;
  }
  if (sum != 1) throw AlgebraError("weights sum to " + to_string(sum) + ", not 1");
}

std::string to_string(const CVOperation& op) {
  std::string out = "<";
  for (int i = 0; i < op.arity(); ++i) {
    if (i > 0) out += ",";
    out += to_string(op.weight(i));
  }
  return out + ">";
}

CVOperation compose(const CVOperation& r, std::span<const CVOperation> s) {
  if (static_cast<int>(s.size()) != r.arity()) throw AlgebraError("compose: " + std::to_string(s.size()) +
                                                                  " operations for arity " + std::to_string(r.arity()));
  std::vector<Rational> w;
  for (int i = 0; i < r.arity(); ++i) {
    for (const auto& x : s[static_cast<std::size_t>(i)].weights()) w.push_back(r.weight(i) * x);
  }
  return CVOperation(std::move(w));
}

CVOperation substitute(const CVOperation& r, int slot, const CVOperation& s) {
  if (slot < 0 || slot >= r.arity()) throw AlgebraError("substitute: no slot " + std::to_string(slot));
  std::vector<Rational> w;
  for (int i = 0; i < r.arity(); ++i) {
    if (i == slot) {
      for (const auto& x : s.weights()) w.push_back(r.weight(i) * x);
    } else {
      w.push_back(r.weight(i));
    }
  }
  return CVOperation(std::move(w));
}

std::set<std::string> ConvexPoint::support() const {
  std::set<std::string> out;
  for (const auto& [atom, q] : coeffs) {
    if (atom != kBottomAtom && q != 0) out.insert(atom);
  }
  return out;
}

bool is_valid(const ConvexPoint& p) {
  if (p.component.count(std::string(kBottomAtom))) return false;
  Rational sum = 0;
  for (const auto& [atom, q] : p.coeffs) {
    if (q <= 0) return false;
    if (atom != kBottomAtom && !p.component.count(atom)) return false;
    sum += q;
  }
  return sum == 1;
}

std::string format(const ConvexPoint& p) {
  std::string out;
  auto term = [&](const std::string& atom, const Rational& q) {
    if (!out.empty()) out += " + ";
    out += to_string(q) + "*" + atom;
  };
  for (const auto& [atom, q] : p.coeffs) {
    if (atom != kBottomAtom) term(atom, q);
  }
  if (auto it = p.coeffs.find(std::string(kBottomAtom)); it != p.coeffs.end()) term(it->first, it->second);
  if (p.component != p.support()) out += " @ " + show_set(p.component);
  return out;
}

ConvexPoint parse_point(std::string_view text) {
  std::string_view body = text;
  std::optional<std::set<std::string>> component;
  if (const std::size_t at = text.find('@'); at != std::string_view::npos) {
    body = text.substr(0, at);
    std::string_view c = trim(text.substr(at + 1));
    if (c.size() < 2 || c.front() != '{' || c.back() != '}') throw ParseError("bad component in '" + std::string(text) + "'");
    c = trim(c.substr(1, c.size() - 2));
    component.emplace();
    if (!c.empty()) {
      for (auto a : split(c, ',')) {
        a = trim(a);
        if (!is_atom(a) || a == kBottomAtom) throw ParseError("bad generator '" + std::string(a) + "'");
        component->insert(std::string(a));
      }
    }
  }

  ConvexPoint p;
  for (auto term : split(body, '+')) {
    term = trim(term);
    Rational q = 1;
    std::string_view atom = term;
    if (const std::size_t star = term.find('*'); star != std::string_view::npos) {
      q = parse_rational(term.substr(0, star));
      atom = trim(term.substr(star + 1));
    }
    if (!is_atom(atom)) throw ParseError("bad term '" + std::string(term) + "' in '" + std::string(text) + "'");
    if (q <= 0) throw ParseError("coefficient of " + std::string(atom) + " must be positive");
    if (!p.coeffs.emplace(std::string(atom), q).second) throw ParseError("repeated atom " + std::string(atom));
  }
  p.component = component ? *component : p.support();
  if (!is_valid(p)) throw ParseError("not a convex point: '" + std::string(text) + "'");
  return p;
}

ConvexPoint bottom_point() {
  ConvexPoint p;
  p.coeffs.emplace(std::string(kBottomAtom), 1);
  return p;
}

ConvexPoint vertex(const std::string& generator) {
  ConvexPoint p;
  p.component.insert(generator);
  p.coeffs.emplace(generator, 1);
  return p;
}

ConvexPoint o_apply(const CVOperation& op, std::span<const ConvexPoint> points) {
  if (static_cast<int>(points.size()) != op.arity()) {
    throw AlgebraError("o_apply: " + std::to_string(points.size()) + " points for " + to_string(op));
  }
  ConvexPoint out;
  for (int i = 0; i < op.arity(); ++i) {
    const ConvexPoint& y = points[static_cast<std::size_t>(i)];
    out.component.insert(y.component.begin(), y.component.end());
    for (const auto& [atom, q] : y.coeffs) out.coeffs[atom] += op.weight(i) * q;
  }
  return out;
}

Simplex::Simplex(FinSet generators) : generators_(std::move(generators)) {
  if (generators_.find(kBottomAtom)) throw AlgebraError("the bottom atom cannot be a generator");
}

bool Simplex::contains(const ConvexPoint& p) const {
  if (!is_valid(p)) return false;
  return std::all_of(p.component.begin(), p.component.end(), [&](const std::string& a) {
    return generators_.find(a).has_value();
  });
}

ConvexPoint Simplex::embed(int generator) const { return vertex(generators_.atom(generator)); }

Simplex simplex_free(const FinSet& generators) { return Simplex(generators); }

FinSet subset_objects(const FinSet& pool) {
  std::vector<std::string> atoms;
  for (int mask = 0; mask < (1 << pool.size()); ++mask) {
    std::string a = "{";
    for (int i = 0; i < pool.size(); ++i) {
      if (mask & (1 << i)) a += (a.size() > 1 ? "," : "") + pool.atom(i);
    }
    atoms.push_back(a + "}");
  }
  return FinSet(std::move(atoms));
}

int subset_mask(const FinSet& pool, const std::set<std::string>& subset) {
  int mask = 0;
  for (const auto& a : subset) {
    const auto i = pool.find(a);
    if (!i) throw AlgebraError("generator '" + a + "' is not in the pool");
    mask |= 1 << *i;
  }
  return mask;
}

std::shared_ptr<const PolyCategory> omega_category(const FinSet& pool, int nmax, int size_cap) {
  if (pool.find(kBottomAtom)) throw AlgebraError("the bottom atom cannot be in the pool");
  if (pool.size() > size_cap) {
    throw TruncationError("pool of " + std::to_string(pool.size()) + " generators exceeds size cap " +
                          std::to_string(size_cap));
  }
  const int n = 1 << pool.size();
  std::vector<std::vector<int>> join(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) join[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = a | b;
  }
  auto powerset = std::make_shared<const EMAlgebra>(
      semilattice_algebra(builtin_monad("L'", nmax), subset_objects(pool), join, std::nullopt));
  return std::make_shared<const PolyCategory>(powerset, PolyKind::regular);
}

SumEvaluation evaluate_in_sum(const FinSet& pool, const CVOperation& op, std::span<const ConvexPoint> points) {
  if (static_cast<int>(points.size()) != op.arity()) {
    throw AlgebraError("evaluate_in_sum: " + std::to_string(points.size()) + " points for " + to_string(op));
  }
  int mask = 0;
  for (const auto& p : points) {
    require_in_pool(pool, p);
    mask |= subset_mask(pool, p.component);
  }
  // coordinates over bottom + the generators of the union, in pool order
  std::vector<int> generators;
  for (int i = 0; i < pool.size(); ++i) {
    if (mask & (1 << i)) generators.push_back(i);
  }
  std::vector<Rational> value(generators.size() + 1);
  for (int i = 0; i < op.arity(); ++i) {
    const ConvexPoint& y = points[static_cast<std::size_t>(i)];
    // y in F(X_i) as coordinates over X_i, then along the inclusion X_i -> X
    std::vector<int> own;
    for (int g : generators) {
      if (y.component.count(pool.atom(g))) own.push_back(g);
    }
    std::vector<Rational> local(own.size() + 1);
    for (const auto& [atom, q] : y.coeffs) {
      if (atom == kBottomAtom) {
        local[0] = q;
      } else {
        const int g = *pool.find(atom);
        local[static_cast<std::size_t>(std::find(own.begin(), own.end(), g) - own.begin()) + 1] = q;
      }
    }
    value[0] += op.weight(i) * local[0];
    for (std::size_t j = 0; j < own.size(); ++j) {
      const auto at = std::find(generators.begin(), generators.end(), own[j]) - generators.begin();
      value[static_cast<std::size_t>(at) + 1] += op.weight(i) * local[j + 1];
    }
  }

  SumEvaluation ev{op, {points.begin(), points.end()}, {}, o_apply(op, points), mask};
  for (int g : generators) ev.value.component.insert(pool.atom(g));
  if (value[0] != 0) ev.value.coeffs.emplace(std::string(kBottomAtom), value[0]);
  for (std::size_t j = 0; j < generators.size(); ++j) {
    if (value[j + 1] != 0) ev.value.coeffs.emplace(pool.atom(generators[j]), value[j + 1]);
  }
  return ev;
}

SimplexSumResult check_simplex_sum(const FinSet& pool, std::span<const CVInstance> instances, int nmax) {
  for (const auto& inst : instances) {
    for (const auto& p : inst.inputs) require_in_pool(pool, p);
  }
  const auto omega = omega_category(pool, nmax, pool.size());

  SimplexSumResult out;
  out.report.subject = "sum of simplices over " + show_set(set_of(pool));
  CheckResult& agree = out.report.add("agreement with the direct formula", "every listed instance");
  CheckResult& union_check = out.report.add("union component", "component and support of the value");
  CheckResult& member = out.report.add("membership", "value lies in the simplex of the union");
  CheckResult& targets = out.report.add("Omega targets", "[X_1 ... X_k, i] lands on the union");

  for (const auto& inst : instances) {
    const auto& in = inst.inputs;
    SumEvaluation ev = evaluate_in_sum(pool, inst.op, in);
    const std::string where = "O" + to_string(inst.op) + "(" + show_inputs(in) + ")";

    ++agree.instances;
    if (ev.value != ev.direct) agree.fail(where + " = " + format(ev.value) + " in the sum, " + format(ev.direct) + " directly");

    ++union_check.instances;
    std::set<std::string> comps;
    std::set<std::string> supports;
    for (const auto& y : in) {
      comps.insert(y.component.begin(), y.component.end());
      const auto s = y.support();
      supports.insert(s.begin(), s.end());
    }
    if (ev.value.component != comps || ev.value.support() != supports) {
      union_check.fail(where + " has component " + show_set(ev.value.component) + " and support " +
                       show_set(ev.value.support()));
    }

    ++member.instances;
    std::vector<std::string> gens(ev.value.component.begin(), ev.value.component.end());
    if (!Simplex(FinSet(gens)).contains(ev.value)) member.fail(where + " = " + format(ev.value));

    // repeated components collapse: the regular term only sees distinct variables
    std::vector<int> masks;
    for (const auto& y : in) masks.push_back(subset_mask(pool, y.component));
    std::vector<int> vars = masks;
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (static_cast<int>(vars.size()) > nmax) {
      ++targets.out_of_fragment;
    } else {
      for (int m : masks) {
        const int pos = static_cast<int>(std::find(vars.begin(), vars.end(), m) - vars.begin());
        ++targets.instances;
        const PolyMorphism mor = omega->canonical(vars, pos, 0);
        const int t = omega->target(mor);
        if (t != ev.component) targets.fail(where + ": " + omega->show(mor) + " lands on " + omega->algebra().carrier().atom(t));
      }
    }
    out.evaluations.push_back(std::move(ev));
  }
  return out;
}

SimplexSumResult plonka_sum_simplices(const FinSet& pool, std::span<const CVOperation> ops,
                                      std::span<const ConvexPoint> points, int nmax) {
  for (const auto& p : points) require_in_pool(pool, p);
  std::vector<CVInstance> instances;
  for (const auto& op : ops) {
    for (const auto& pick : enumerate_maps(op.arity(), static_cast<int>(points.size()), MapKind::all)) {
      CVInstance inst{op, {}};
      for (int j : pick) inst.inputs.push_back(points[static_cast<std::size_t>(j)]);
      instances.push_back(std::move(inst));
    }
  }
  SimplexSumResult out = check_simplex_sum(pool, instances, nmax);
  out.report.checks.front().fragment = "every op on every tuple of sample points";
  return out;
}

CVOperation random_operation(std::mt19937_64& rng, int arity, int max_den) {
  std::uniform_int_distribution<int> d(1, max_den);
  std::vector<int> raw(static_cast<std::size_t>(arity));
  for (auto& x : raw) x = d(rng);
  const int total = std::accumulate(raw.begin(), raw.end(), 0);
  std::vector<Rational> w;
  for (int x : raw) w.emplace_back(x, total);
  return CVOperation(std::move(w));
}

ConvexPoint random_point(std::mt19937_64& rng, const FinSet& pool, int max_den) {
  ConvexPoint p;
  std::bernoulli_distribution coin(0.5);
  for (const auto& a : pool.atoms()) {
    if (coin(rng)) p.component.insert(a);
  }
  // atoms that get a coefficient: bottom plus part of the component, at least one
  std::vector<std::string> atoms;
  for (const auto& a : p.component) {
    if (coin(rng)) atoms.push_back(a);
  }
  if (atoms.empty() || coin(rng)) atoms.emplace_back(kBottomAtom);
  const CVOperation w = random_operation(rng, static_cast<int>(atoms.size()), max_den);
  for (std::size_t i = 0; i < atoms.size(); ++i) p.coeffs.emplace(atoms[i], w.weight(static_cast<int>(i)));
  return p;
}

}  // namespace plonka
