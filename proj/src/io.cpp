#include "plonka/io.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

#include "plonka/error.hpp"

namespace plonka {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int int_field(const Json& j, const char* key, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) bad(std::string("field \"") + key + "\" must be an integer");
  return j.at(key).get<int>();
}

FinSet finset(const Json& j) {
  if (!j.is_array()) bad("a carrier must be an array of atom names");
  std::vector<std::string> atoms;
  std::set<std::string> seen;
  for (const auto& a : j) {
    if (!a.is_string()) bad("atom names must be strings");
    if (!seen.insert(a.get<std::string>()).second) bad("repeated atom \"" + a.get<std::string>() + "\"");
    atoms.push_back(a.get<std::string>());
  }
  return FinSet(std::move(atoms));
}

int atom_index(const FinSet& set, const Json& a) {
  if (a.is_number_integer()) {
    const int i = a.get<int>();
    if (i < 0 || i >= set.size()) bad("atom index " + std::to_string(i) + " out of range");
    return i;
  }
  if (!a.is_string()) bad("atoms are given by name or index");
  const auto i = set.find(a.get<std::string>());
  if (!i) bad("unknown atom \"" + a.get<std::string>() + "\"");
  return *i;
}

std::vector<int> atom_map(const FinSet& dom, const FinSet& cod, const Json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != dom.size()) bad("a map needs one value per atom of its domain");
  std::vector<int> out;
  for (const auto& a : j) out.push_back(atom_index(cod, a));
  return out;
}

int label_index(const std::vector<std::string>& labels, const Json& j, int n) {
  if (j.is_number_integer()) {
    const int r = j.get<int>();
    if (r < 0 || r >= static_cast<int>(labels.size())) bad("label index " + std::to_string(r) + " out of range in arity " + std::to_string(n));
    return r;
  }
  if (!j.is_string()) bad("labels are given by name or index");
  const auto it = std::find(labels.begin(), labels.end(), j.get<std::string>());
  if (it == labels.end()) bad("unknown label \"" + j.get<std::string>() + "\" in arity " + std::to_string(n));
  return static_cast<int>(it - labels.begin());
}

// Per-arity action tables: {"n": [[...], ...]}, entries by index or name.
void read_actions(const Json& j, const OperadTables& t, bool merge, std::vector<std::vector<std::vector<int>>>& out) {
  if (!j.is_object()) bad("action tables must be an object keyed by arity");
  for (const auto& [key, rows] : j.items()) {
    const int n = std::stoi(key);
    if (n < 0 || n > t.max_arity) bad("action for arity " + key + " beyond max_arity");
    if (!rows.is_array()) bad("arity " + key + " needs an array of generator tables");
    if (merge && n < 2) bad("merge actions start at arity 2");
    const auto& target = t.labels[static_cast<std::size_t>(merge ? n - 1 : n)];
    std::vector<std::vector<int>> tables;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != t.labels[static_cast<std::size_t>(n)].size()) {
        bad("each generator table of arity " + key + " needs one entry per label");
      }
      std::vector<int> r;
      for (const auto& e : row) r.push_back(label_index(target, e, merge ? n - 1 : n));
      tables.push_back(std::move(r));
    }
    out[static_cast<std::size_t>(n)] = std::move(tables);
  }
}

std::vector<int> subst_key(const Json& e, const OperadTables& t, int& result) {
  auto ref = [&](const Json& pair) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer()) bad("labels in subst are [arity, label] pairs");
    const int n = pair[0].get<int>();
    if (n < 0 || n > t.max_arity) bad("subst arity beyond max_arity");
    return LabelRef{n, label_index(t.labels[static_cast<std::size_t>(n)], pair[1], n)};
  };
  std::vector<int> key;
  int total = 0;
  if (e.is_array()) {
    // [k, outer, n_1, r_1, ..., n_k, r_k, result]
    if (e.size() < 3) bad("subst entry too short");
    std::vector<int> v;
    for (const auto& x : e) {
      if (!x.is_number_integer()) bad("array subst entries are integers");
      v.push_back(x.get<int>());
    }
    const int k = v[0];
    if (static_cast<int>(v.size()) != 2 * k + 3) bad("subst entry has the wrong length");
    key.assign(v.begin(), v.end() - 1);
    auto check = [&](int n, int r) {
      if (n < 0 || n > t.max_arity || r < 0 || r >= static_cast<int>(t.labels[static_cast<std::size_t>(n)].size())) {
        bad("subst entry names a label outside the tables");
      }
    };
    check(k, v[1]);
    for (int i = 0; i < k; ++i) {
      const int n = v[static_cast<std::size_t>(2 + 2 * i)];
      check(n, v[static_cast<std::size_t>(3 + 2 * i)]);
      total += n;
    }
    result = v.back();
  } else {
    const LabelRef outer = ref(field(e, "outer"));
    const Json& inner = field(e, "inner");
    if (!inner.is_array() || static_cast<int>(inner.size()) != outer.arity) bad("subst needs one inner label per slot");
    key = {outer.arity, outer.label};
    for (const auto& i : inner) {
      const LabelRef r = ref(i);
      key.push_back(r.arity);
      key.push_back(r.label);
      total += r.arity;
    }
    if (total > t.max_arity) bad("subst result beyond max_arity");
    result = label_index(t.labels[static_cast<std::size_t>(total)], field(e, "result"), total);
    return key;
  }
  if (total > t.max_arity) bad("subst result beyond max_arity");
  if (result < 0 || result >= static_cast<int>(t.labels[static_cast<std::size_t>(total)].size())) bad("subst result out of range");
  return key;
}

OperadTables read_tables(const Json& j, int default_cap) {
  OperadTables t;
  if (j.contains("base")) {
    const int cap = int_field(j, "max_arity", default_cap);
    t = materialize(*builtin_operad(field(j, "base").get<std::string>(), cap), cap)->tables();
  } else {
    t.max_arity = int_field(j, "max_arity", -1);
    if (t.max_arity < 1) bad("an operad needs max_arity >= 1");
    t.labels.assign(static_cast<std::size_t>(t.max_arity + 1), {});
    t.perm.assign(static_cast<std::size_t>(t.max_arity + 1), {});
    t.merge.assign(static_cast<std::size_t>(t.max_arity + 1), {});
  }
  if (j.contains("name")) t.name = j.at("name").get<std::string>();
  if (j.contains("mode")) {
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "regular" && mode != "symmetric") bad("operad mode must be regular or symmetric");
    t.mode = mode == "regular" ? OperadMode::regular : OperadMode::symmetric;
  }
  if (j.contains("coeff")) {
    for (const auto& [key, names] : j.at("coeff").items()) {
      const int n = std::stoi(key);
      if (n < 0 || n > t.max_arity) bad("coeff arity " + key + " beyond max_arity");
      auto& labels = t.labels[static_cast<std::size_t>(n)];
      for (const auto& name : names) {
        if (std::find(labels.begin(), labels.end(), name.get<std::string>()) == labels.end()) {
          labels.push_back(name.get<std::string>());
        }
      }
    }
  }
  if (j.contains("unit")) t.unit = label_index(t.labels[1], j.at("unit"), 1);
  if (j.contains("perm_action")) read_actions(j.at("perm_action"), t, false, t.perm);
  if (j.contains("merge_action")) read_actions(j.at("merge_action"), t, true, t.merge);
  if (j.contains("subst")) {
    for (const auto& e : j.at("subst")) {
      int result = 0;
      auto key = subst_key(e, t, result);
      t.subst[key] = result;
    }
  }

  if (t.labels[1].empty()) bad("an operad needs a unit label in arity 1");
  return t;
}

template <typename Fn>
auto guard(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const OperadError& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json term_json(const TruncatedMonad& t, const Term& term) { return t.encode(term); }

}  // namespace

Loader::Loader(LoadOptions options) : options_(options) {
  if (options_.nmax < 1) bad("N_max must be positive");
  if (options_.nop != 0 && options_.nop < 2 * options_.nmax - 1) {
    bad("N_op = " + std::to_string(options_.nop) + " is below 2 * N_max - 1 = " + std::to_string(2 * options_.nmax - 1));
  }
}

int Loader::operad_cap() const { return options_.nop ? options_.nop : 2 * options_.nmax - 1; }

Json Loader::read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::pair<Json, fs::path> Loader::resolve(const Json& j, const fs::path& dir) const {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.size() > 5 && s.substr(s.size() - 5) == ".json") {
      const fs::path p = dir.empty() ? fs::path(s) : dir / s;
      return {read_file(p), p.parent_path()};
    }
  }
  return {j, dir};
}

OperadPtr Loader::operad(const Json& ref, const fs::path& dir) {
  return guard("operad", [&]() -> OperadPtr {
    const auto [j, here] = resolve(ref, dir);
    if (j.is_string()) return builtin_operad(j.get<std::string>(), operad_cap());
    if (j.contains("builtin")) return builtin_operad(j.at("builtin").get<std::string>(), int_field(j, "max_arity", operad_cap()));
    try {
      return std::make_shared<const TableOperad>(read_tables(j, operad_cap()));
    } catch (const OperadError& e) {
      throw ParseError(std::string("operad: ") + e.what());
    }
  });
}

MonadPtr Loader::monad(const Json& ref, const fs::path& dir) {
  return guard("monad", [&]() -> MonadPtr {
    const auto [j, here] = resolve(ref, dir);
    const std::string key = j.dump() + "@" + here.string();
    if (auto it = monads_.find(key); it != monads_.end()) return it->second;
    MonadPtr m;
    try {
      if (j.is_string()) {
        m = builtin_monad(j.get<std::string>(), options_.nmax);
      } else if (j.contains("builtin")) {
        m = builtin_monad(j.at("builtin").get<std::string>(), int_field(j, "nmax", options_.nmax));
      } else {
        OperadPtr op = operad(field(j, "operad"), here);
        MonadMode mode = op->mode() == OperadMode::regular ? MonadMode::regular : MonadMode::analytic;
        if (j.contains("mode")) {
          const auto s = j.at("mode").get<std::string>();
          if (s != "regular" && s != "analytic") bad("monad mode must be regular or analytic");
          mode = s == "regular" ? MonadMode::regular : MonadMode::analytic;
        }
        const int nmax = int_field(j, "nmax", options_.nmax);
        if (op->max_arity() < 2 * nmax - 1) {
          bad("operad " + op->name() + " is tabulated to arity " + std::to_string(op->max_arity()) +
              ", below 2 * N_max - 1 = " + std::to_string(2 * nmax - 1));
        }
        m = std::make_shared<const TruncatedMonad>(op, mode, nmax, j.value("name", op->name()));
      }
    } catch (const OperadError& e) {
      throw ParseError(std::string("monad: ") + e.what());
    }
    monads_.emplace(key, m);
    return m;
  });
}

std::shared_ptr<const EMAlgebra> Loader::algebra(const Json& ref, const fs::path& dir) {
  return guard("algebra", [&]() -> std::shared_ptr<const EMAlgebra> {
    const auto [j, here] = resolve(ref, dir);
    MonadPtr m = monad(field(j, "monad"), here);
    const FinSet carrier = finset(field(j, "carrier"));
    if (j.contains("structure")) {
      std::map<Term, int> values;
      for (const auto& [key, v] : j.at("structure").items()) {
        const Term t = m->decode(key, carrier.size());
        const int x = atom_index(carrier, v);
        auto [it, fresh] = values.emplace(t, x);
        if (!fresh && it->second != x) bad("conflicting structure entries for " + key);
      }
      return std::make_shared<const EMAlgebra>(EMAlgebra::from_function(m, carrier, [&](const Term& t) -> std::optional<int> {
        auto it = values.find(t);
        if (it == values.end()) return std::nullopt;
        return it->second;
      }));
    }
    auto table = [&](const Json& rows) {
      if (!rows.is_array() || static_cast<int>(rows.size()) != carrier.size()) bad("an operation table needs one row per atom");
      std::vector<std::vector<int>> out;
      for (const auto& row : rows) out.push_back(atom_map(carrier, carrier, row));
      return out;
    };
    std::optional<int> unit;
    if (j.contains("unit")) unit = atom_index(carrier, j.at("unit"));
    try {
      if (j.contains("join")) {
        return std::make_shared<const EMAlgebra>(semilattice_algebra(m, carrier, table(j.at("join")), unit));
      }
      if (j.contains("operation")) {
        const auto op = table(j.at("operation"));
        return std::make_shared<const EMAlgebra>(algebra_from_operation(
            m, carrier, [op](int a, int b) { return op[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }, unit));
      }
      if (j.contains("point")) return std::make_shared<const EMAlgebra>(pointed_algebra(m, carrier, atom_index(carrier, j.at("point"))));
      if (j.value("free", false)) return std::make_shared<const EMAlgebra>(free_algebra(m, carrier));
    } catch (const AlgebraError& e) {
      throw ParseError(std::string("algebra: ") + e.what());
    }
    bad("an algebra needs one of structure, join, operation, point or free");
  });
}

MonadMorphism Loader::morphism(const Json& ref, const fs::path& dir) {
  return guard("morphism", [&]() -> MonadMorphism {
    const auto [j, here] = resolve(ref, dir);
    const std::string name = j.value("name", std::string("tau"));
    if (j.contains("builtin")) {
      const auto kind = j.at("builtin").get<std::string>();
      if (kind == "identity") return MonadMorphism::identity(monad(j.contains("monad") ? j.at("monad") : field(j, "source"), here));
      if (kind == "terminal") return terminal_morphism(monad(field(j, "source"), here), monad(field(j, "target"), here));
      if (kind == "forget_brackets") {
        return forget_brackets(monad(j.value("source", Json("MAGMA")), here), monad(j.value("target", Json("ASSOC")), here));
      }
      if (kind == "magma_duplication") return magma_duplication(monad(j.value("monad", Json("MAGMA")), here));
      if (kind == "regular_duplication") return regular_duplication(monad(j.value("monad", Json("reg(MAGMA)")), here));
      if (kind == "counit") return regular_part(monad(field(j, "target"), here)).counit;
      bad("unknown builtin morphism \"" + kind + "\"");
    }
    MonadPtr source = monad(field(j, "source"), here);
    MonadPtr target = monad(field(j, "target"), here);
    try {
      if (j.contains("labels")) {
        std::vector<std::vector<int>> maps(static_cast<std::size_t>(source->nmax() + 1));
        for (int n = 0; n <= source->nmax(); ++n) {
          const int count = source->op().label_count(n);
          if (count == 0) continue;
          const Json& row = field(j.at("labels"), std::to_string(n).c_str());
          if (!row.is_array() || static_cast<int>(row.size()) != count) bad("label map of arity " + std::to_string(n) + " needs one entry per label");
          std::vector<std::string> names;
          for (int r = 0; r < target->op().label_count(n); ++r) names.push_back(target->op().label_name(n, r));
          for (const auto& e : row) maps[static_cast<std::size_t>(n)].push_back(label_index(names, e, n));
        }
        return MonadMorphism::from_label_maps(name, source, target, std::move(maps));
      }
      MonadMorphism::Table table(static_cast<std::size_t>(source->nmax() + 1));
      const Json& entries = field(j, "table");
      for (int n = 0; n <= source->nmax(); ++n) {
        for (int r = 0; r < source->op().label_count(n); ++r) {
          std::vector<int> id(static_cast<std::size_t>(n));
          std::iota(id.begin(), id.end(), 0);
          const std::string key = source->encode(Term{id, r});
          const Json& v = field(entries, key.c_str());
          if (v.is_null()) {
            table[static_cast<std::size_t>(n)].push_back(std::nullopt);
          } else {
            table[static_cast<std::size_t>(n)].push_back(target->decode(v.get<std::string>(), n));
          }
        }
      }
      return MonadMorphism(name, source, target, std::move(table));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(std::string("morphism: ") + e.what());
    }
  });
}

PlonkaContext Loader::context(const Json& ref, const fs::path& dir) {
  return guard("context", [&]() -> PlonkaContext {
    const auto [j, here] = resolve(ref, dir);
    MonadMorphism pi = morphism(field(j, "pi"), here);
    auto index = algebra(field(j, "index"), here);
    const PolyKind kind = index->monad()->mode() == MonadMode::regular ? PolyKind::regular : PolyKind::linear;
    std::shared_ptr<const PolyCategory> cat;
    try {
      cat = std::make_shared<const PolyCategory>(index, kind);
    } catch (const AlgebraError& e) {
      throw ParseError(std::string("context index: ") + e.what());
    }
    const FinSet& objs = index->carrier();

    if (j.contains("constant")) {
      return PlonkaContext{pi.source(), pi, constant_functor(cat, algebra(j.at("constant"), here))};
    }

    std::vector<std::shared_ptr<const EMAlgebra>> objects(static_cast<std::size_t>(objs.size()));
    const Json& values = field(j, "objects");
    if (values.is_array()) {
      if (static_cast<int>(values.size()) != objs.size()) bad("one algebra per index element is needed");
      for (int a = 0; a < objs.size(); ++a) objects[static_cast<std::size_t>(a)] = algebra(values[static_cast<std::size_t>(a)], here);
    } else {
      for (int a = 0; a < objs.size(); ++a) objects[static_cast<std::size_t>(a)] = algebra(field(values, objs.atom(a).c_str()), here);
    }

    if (j.contains("morphisms")) {
      FunctorData f{cat, objects, {}};
      for (const auto& m : cat->morphisms()) {
        const auto& src = objects[static_cast<std::size_t>(cat->source(m))];
        const auto& dst = objects[static_cast<std::size_t>(cat->target(m))];
        const std::string key = cat->show(m);
        f.morphisms.push_back(AlgebraHom{src, dst, atom_map(src->carrier(), dst->carrier(), field(j.at("morphisms"), key.c_str()))});
      }
      return PlonkaContext{pi.source(), pi, std::move(f)};
    }

    std::map<std::pair<int, int>, std::vector<int>> transitions;
    if (j.contains("transitions")) {
      for (const auto& e : j.at("transitions")) {
        const int a = atom_index(objs, field(e, "from"));
        const int b = atom_index(objs, field(e, "to"));
        transitions[{a, b}] = atom_map(objects[static_cast<std::size_t>(a)]->carrier(),
                                       objects[static_cast<std::size_t>(b)]->carrier(), field(e, "map"));
      }
    }
    FunctorData f = lift_from_poset(cat, objects, [&](int a, int b) {
      if (auto it = transitions.find({a, b}); it != transitions.end()) return it->second;
      if (a != b) bad("no transition from " + objs.atom(a) + " to " + objs.atom(b));
      std::vector<int> id(static_cast<std::size_t>(objects[static_cast<std::size_t>(a)]->size()));
      std::iota(id.begin(), id.end(), 0);
      return id;
    });
    return PlonkaContext{pi.source(), pi, std::move(f)};
  });
}

KleisliMap Loader::kleisli_map(const Json& ref, const fs::path& dir) {
  return guard("kleisli map", [&]() -> KleisliMap {
    const auto [j, here] = resolve(ref, dir);
    MonadPtr m = monad(field(j, "monad"), here);
    KleisliMap f{m, finset(field(j, "dom")), finset(field(j, "cod")), {}};
    const Json& values = field(j, "values");
    for (const auto& x : f.dom.atoms()) f.values.push_back(m->decode(field(values, x.c_str()).get<std::string>(), f.cod.size()));
    return f;
  });
}

std::string document_kind(const Json& j) {
  if (j.is_string()) return "monad";
  if (j.is_object() && j.contains("kind") && j.at("kind").is_string()) return j.at("kind").get<std::string>();
  bad("document has no \"kind\"");
}

Json to_json(const OperadTables& t) {
  Json coeff = Json::object();
  Json perm = Json::object();
  Json merge = Json::object();
  for (int n = 0; n <= t.max_arity; ++n) {
    coeff[std::to_string(n)] = t.labels[static_cast<std::size_t>(n)];
    perm[std::to_string(n)] = t.perm[static_cast<std::size_t>(n)];
    if (t.mode == OperadMode::regular && n >= 2) merge[std::to_string(n)] = t.merge[static_cast<std::size_t>(n)];
  }
  Json subst = Json::array();
  for (const auto& [key, result] : t.subst) {
    Json e = key;
    e.push_back(result);
    subst.push_back(std::move(e));
  }
  Json j{{"kind", "operad"}, {"name", t.name}, {"mode", to_string(t.mode)}, {"max_arity", t.max_arity},
         {"coeff", coeff}, {"unit", t.labels[1][static_cast<std::size_t>(t.unit)]}, {"perm_action", perm},
         {"subst", subst}};
  if (t.mode == OperadMode::regular) j["merge_action"] = merge;
  return j;
}

Json monad_to_json(const TruncatedMonad& t) {
  if (const auto* table = dynamic_cast<const TableOperad*>(&t.op())) {
    return Json{{"kind", "monad"}, {"name", t.name()}, {"operad", to_json(table->tables())}, {"mode", to_string(t.mode())}, {"nmax", t.nmax()}};
  }
  return Json{{"builtin", t.name()}, {"nmax", t.nmax()}};
}

Json to_json(const EMAlgebra& a) {
  const TruncatedMonad& m = *a.monad();
  Json structure = Json::object();
  for (int i = 0; i < a.terms().size(); ++i) {
    const int v = a.structure()[static_cast<std::size_t>(i)];
    if (v >= 0) structure[m.encode(a.terms()[i])] = a.carrier().atom(v);
  }
  return Json{{"kind", "algebra"}, {"monad", monad_to_json(m)}, {"carrier", a.carrier().atoms()}, {"structure", structure}};
}

Json to_json(const MonadMorphism& tau) {
  const TruncatedMonad& s = *tau.source();
  const TruncatedMonad& t = *tau.target();
  Json table = Json::object();
  for (int n = 0; n <= s.nmax(); ++n) {
    for (int r = 0; r < s.op().label_count(n); ++r) {
      std::vector<int> id(static_cast<std::size_t>(n));
      std::iota(id.begin(), id.end(), 0);
      const auto& v = tau.table()[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
      table[s.encode(Term{id, r})] = v ? term_json(t, *v) : Json(nullptr);
    }
  }
  return Json{{"kind", "morphism"}, {"name", tau.name()}, {"source", monad_to_json(s)}, {"target", monad_to_json(t)}, {"table", table}};
}

Json to_json(const FunctorData& f) {
  const PolyCategory& cat = *f.domain;
  Json objects = Json::array();
  for (const auto& a : f.objects) objects.push_back(to_json(*a));
  Json morphisms = Json::object();
  for (std::size_t k = 0; k < cat.morphisms().size(); ++k) {
    const AlgebraHom& h = f.morphisms[k];
    Json values = Json::array();
    for (int x : h.map) values.push_back(h.target->carrier().atom(x));
    morphisms[cat.show(cat.morphisms()[k])] = values;
  }
  return Json{{"index", to_json(cat.algebra())}, {"objects", objects}, {"morphisms", morphisms}};
}

Json to_json(const KleisliMap& f) {
  const TruncatedMonad& m = *f.monad;
  Json values = Json::object();
  Json readable = Json::object();
  for (int x = 0; x < f.dom.size(); ++x) {
    const Term& t = f.values[static_cast<std::size_t>(x)];
    values[f.dom.atom(x)] = m.encode(t);
    readable[f.dom.atom(x)] = m.show(t, [&](int v) { return f.cod.atom(v); });
  }
  return Json{{"kind", "kleisli"}, {"monad", monad_to_json(m)}, {"dom", f.dom.atoms()}, {"cod", f.cod.atoms()},
              {"values", values}, {"readable", readable}};
}

}  // namespace plonka
