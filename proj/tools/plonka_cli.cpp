// plonka: load operads, monads, algebras and contexts, run the law checks and
// constructions, and print JSON-lines reports.
//
// Exit codes: 0 when every check passes, 1 when some check fails, 2 on usage
// or parse errors.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "plonka/convexity.hpp"
#include "plonka/distlaw.hpp"
#include "plonka/io.hpp"
#include "plonka/kleisli.hpp"
#include "plonka/plonka_sum.hpp"

using namespace plonka;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Config {
  int nmax = 3;
  int nop = 0;
  int size_cap = 3;
  int parallel = 1;
  std::string out;
};

class Session {
 public:
  Session(std::string command, const Config& config, Json inputs)
      : command_(std::move(command)), config_(config), inputs_(std::move(inputs)), start_(std::chrono::steady_clock::now()) {}

  void emit(Json line) { std::cout << line.dump() << '\n'; }

  void add(const Report& report) {
    for (const auto& c : report.checks) {
      Json line = to_json(c);
      line["type"] = "check";
      line["subject"] = report.subject;
      emit(std::move(line));
      ++checks_;
      if (!c.passed()) ++failed_;
      violations_ += c.violations;
    }
  }

  // A failure that is not a law check, e.g. a construction that refused to run.
  void fail(const std::string& subject, const std::string& check, const std::string& message) {
    Report r;
    r.subject = subject;
    r.add(check).fail(message);
    add(r);
  }

  int finish() {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
    Json config{{"nmax", config_.nmax}, {"nop", config_.nop}, {"size_cap", config_.size_cap}, {"inputs", inputs_}};
    if (!config_.out.empty()) config["out"] = config_.out;
    emit(Json{{"type", "summary"},
              {"tool", "plonka"},
              {"version", kVersion},
              {"command", command_},
              {"config", config},
              {"status", failed_ == 0 ? "pass" : "fail"},
              {"checks", checks_},
              {"failed_checks", failed_},
              {"violations", violations_},
              {"elapsed_ms", ms}});
    std::cout.flush();
    return failed_ == 0 ? 0 : 1;
  }

 private:
  std::string command_;
  Config config_;
  Json inputs_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t checks_ = 0;
  std::int64_t failed_ = 0;
  std::int64_t violations_ = 0;
};

LawCaps law_caps(const Config& c) { return LawCaps{c.size_cap, std::min(c.size_cap, 3)}; }

Loader make_loader(const Config& c) { return Loader(LoadOptions{c.nmax, c.nop}); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

bool is_builtin_monad(const std::string& name) {
  try {
    builtin_monad(name, 1);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// ---- validate

std::vector<Report> validate_one(const std::string& input, const Config& config) {
  Loader loader = make_loader(config);
  std::vector<Report> out;
  const bool file = fs::exists(input);
  if (!file && !is_builtin_monad(input)) throw ParseError("no such file or builtin: " + input);
  const Json doc = file ? Loader::read_file(input) : Json(input);
  const fs::path dir = file ? fs::path(input).parent_path() : fs::path();
  const std::string kind = document_kind(doc);

  auto tagged = [&](Report r) {
    r.subject = input + ": " + r.subject;
    out.push_back(std::move(r));
  };
  if (kind == "operad") {
    auto op = loader.operad(doc, dir);
    Report r = validate_operad(*op, std::min(op->max_arity(), loader.operad_cap()));
    r.subject = "operad " + op->name();
    tagged(std::move(r));
  } else if (kind == "monad") {
    MonadPtr m = loader.monad(doc, dir);
    Report ops = validate_operad(m->op(), std::min(m->op().max_arity(), loader.operad_cap()));
    ops.subject = "operad " + m->op().name();
    tagged(std::move(ops));
    Report laws = check_monad_laws(*m, law_caps(config));
    laws.subject = "monad " + m->name();
    tagged(std::move(laws));
  } else if (kind == "algebra") {
    Report r = check_algebra(*loader.algebra(doc, dir));
    tagged(std::move(r));
  } else if (kind == "morphism") {
    tagged(check_morphism(loader.morphism(doc, dir), law_caps(config)));
  } else if (kind == "context") {
    const PlonkaContext ctx = loader.context(doc, dir);
    Report v = validate_context(ctx);
    const bool ok = v.passed();
    tagged(std::move(v));
    if (ok) tagged(check_lax_morphism(ctx));
  } else if (kind == "kleisli") {
    const KleisliMap f = loader.kleisli_map(doc, dir);
    Report r;
    r.subject = "Kleisli map over " + f.monad->name();
    r.add("well formed", "values decode over the codomain").instances = f.dom.size();
    tagged(std::move(r));
  } else {
    throw ParseError("cannot validate a document of kind \"" + kind + "\"");
  }
  return out;
}

int cmd_validate(const Config& config, const std::vector<std::string>& inputs) {
  // Everything is loaded and checked before printing, so a malformed input
  // exits with 2 and no partial report.
  std::vector<std::vector<Report>> results(inputs.size());
  const std::size_t width = static_cast<std::size_t>(std::max(config.parallel, 1));
  for (std::size_t start = 0; start < inputs.size(); start += width) {
    const std::size_t end = std::min(inputs.size(), start + width);
    std::vector<std::future<std::vector<Report>>> batch;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred,
                                 [&, i] { return validate_one(inputs[i], config); }));
    }
    for (std::size_t i = start; i < end; ++i) results[i] = batch[i - start].get();
  }
  Session s("validate", config, inputs);
  for (const auto& reports : results) {
    for (const auto& r : reports) s.add(r);
  }
  return s.finish();
}

// ---- plonka-sum

// The binary operation behind the first arity-2 label, as a table of atoms.
Json binary_table(const EMAlgebra& a) {
  const TruncatedMonad& m = *a.monad();
  if (m.op().label_count(2) == 0 || m.nmax() < 2) return nullptr;
  Json rows = Json::array();
  for (int x = 0; x < a.size(); ++x) {
    Json row = Json::array();
    for (int y = 0; y < a.size(); ++y) {
      const auto v = a.eval(m.normalize(std::vector<int>{x, y}, 0));
      row.push_back(v ? Json(a.carrier().atom(*v)) : Json(nullptr));
    }
    rows.push_back(std::move(row));
  }
  return Json{{"label", m.op().label_name(2, 0)}, {"rows", rows}};
}

int cmd_plonka_sum(const Config& config, const std::string& path) {
  Loader loader = make_loader(config);
  const PlonkaContext ctx = loader.context(Loader::read_file(path), fs::path(path).parent_path());
  Session s("plonka-sum", config, Json::array({path}));
  const Report valid = validate_context(ctx);
  s.add(valid);
  if (!valid.passed()) return s.finish();

  const EMAlgebra sum = plonka_sum(ctx);
  s.add(check_algebra(sum));
  s.add(check_lax_morphism(ctx));
  s.emit(Json{{"type", "result"}, {"carrier", sum.carrier().atoms()}, {"binary", binary_table(sum)}});
  if (!config.out.empty()) write_file(config.out, to_json(sum).dump(2) + "\n");
  return s.finish();
}

// ---- classify

int cmd_classify(const Config& config, const std::string& path, const std::string& context_path, const std::string& pi_r_path) {
  Loader loader = make_loader(config);
  const MonadMorphism tau = loader.morphism(Loader::read_file(path), fs::path(path).parent_path());
  Json inputs = Json::array({path});
  if (!context_path.empty()) inputs.push_back(context_path);
  if (!pi_r_path.empty()) inputs.push_back(pi_r_path);
  Session s("classify", config, inputs);
  s.add(check_morphism(tau, law_caps(config)));

  const Classification semi = check_semicartesian(tau, config.size_cap);
  const Classification weak = check_weakly_cartesian(tau, config.size_cap);
  for (const auto* c : {&semi, &weak}) {
    s.emit(Json{{"type", "property"}, {"property", c->property}, {"holds", c->holds}, {"witness", c->witness},
                {"instances", c->instances}, {"out_of_fragment", c->out_of_fragment}});
  }
  const bool regular = tau.source()->mode() == MonadMode::regular;
  const bool holds = regular ? semi.holds : weak.holds;
  const std::string verdict = regular ? (holds ? "SEMI_CARTESIAN" : "NOT_SEMI_CARTESIAN")
                                      : (holds ? "WEAKLY_CARTESIAN" : "NOT_WEAKLY_CARTESIAN");
  s.emit(Json{{"type", "verdict"}, {"morphism", tau.name()}, {"verdict", verdict}});

  if (!context_path.empty()) {
    if (pi_r_path.empty()) throw ParseError("--context needs --pi-r");
    const PlonkaContext ctx = loader.context(Loader::read_file(context_path), fs::path(context_path).parent_path());
    const MonadMorphism pi_r = loader.morphism(Loader::read_file(pi_r_path), fs::path(pi_r_path).parent_path());
    const Preservation p = check_preservation(tau, pi_r, ctx);
    s.emit(Json{{"type", "preservation"}, {"preserved", p.preserved}, {"triangle_commutes", p.triangle_commutes},
                {"witness", p.witness}, {"instances", p.instances}, {"out_of_fragment", p.out_of_fragment}});
    Report r;
    r.subject = "preservation of Plonka sums by " + tau.name();
    CheckResult& c = r.add("agreement with the classifier", "one context");
    c.instances = 1;
    if (p.preserved != holds) {
      c.fail("sums " + std::string(p.preserved ? "preserved" : "not preserved") + " but the classifier says " + verdict);
    }
    s.add(r);
  }
  return s.finish();
}

// ---- distlaw

int cmd_distlaw(const Config& config, const std::string& theory, std::string law_name, const std::string& variant_name,
                bool composite, int composite_nmax) {
  MonadPtr base;
  try {
    base = builtin_monad(theory, config.nmax);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  if (law_name.empty()) law_name = base->mode() == MonadMode::regular ? "rho" : "alpha";
  if (law_name != "rho" && law_name != "alpha") throw ParseError("--law must be rho or alpha");
  if (variant_name != "with_bottom" && variant_name != "without_bottom") throw ParseError("--variant must be with_bottom or without_bottom");
  const LawKind kind = law_name == "rho" ? LawKind::rho : LawKind::alpha;
  const LawVariant variant = variant_name == "with_bottom" ? LawVariant::with_bottom : LawVariant::without_bottom;
  std::optional<DistributiveLaw> law;
  try {
    law.emplace(kind, variant, base);
  } catch (const AlgebraError& e) {
    throw ParseError(e.what());
  }

  Session s("distlaw", config, Json::array({theory, law_name, variant_name}));
  s.add(check_beck(*law, config.size_cap));
  if (composite) {
    try {
      // the law check over a composite grows far faster than over its
      // factors, so the composite has its own cap
      const DistributiveLaw small(kind, variant, builtin_monad(theory, composite_nmax));
      MonadPtr m = composed_monad(small, composite_nmax);
      Report r = check_monad_laws(*m, law_caps(config));
      r.subject = "composite " + m->name();
      s.add(r);
    } catch (const AlgebraError& e) {
      s.fail("composite of " + law->name(), "construction", e.what());
    }
  }
  return s.finish();
}

// ---- kleisli

int cmd_kleisli(const Config& config, const std::string& strength, const std::vector<std::string>& maps, bool compose) {
  CommutativeStrength st;
  try {
    st = builtin_strength(strength, config.nmax);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  Loader loader = make_loader(config);
  std::vector<KleisliMap> fmaps;
  for (const auto& path : maps) {
    KleisliMap f = loader.kleisli_map(Loader::read_file(path), fs::path(path).parent_path());
    if (f.monad->name() != st.monad->name() || f.monad->nmax() != st.monad->nmax()) {
      throw ParseError(path + " is over " + f.monad->name() + ", not " + st.monad->name());
    }
    f.monad = st.monad;
    fmaps.push_back(std::move(f));
  }

  Json inputs = Json::array({strength});
  for (const auto& p : maps) inputs.push_back(p);
  Session s("kleisli", config, inputs);
  s.add(check_oplax(st, config.size_cap));
  s.add(check_product_functor(st, config.size_cap));
  if (!fmaps.empty()) {
    try {
      KleisliMap result = fmaps.front();
      if (compose) {
        for (std::size_t i = 1; i < fmaps.size(); ++i) result = kleisli_compose(fmaps[i], result);
      } else {
        result = plonka_product(st, fmaps);
      }
      const Json j = to_json(result);
      s.emit(Json{{"type", "result"}, {"operation", compose ? "compose" : "product"}, {"map", j}});
      if (!config.out.empty()) write_file(config.out, j.dump(2) + "\n");
    } catch (const TruncationError& e) {
      s.fail(compose ? "Kleisli composite" : "Plonka product", "within the caps", e.what());
    } catch (const CompositionError& e) {
      throw ParseError(e.what());
    }
  }
  return s.finish();
}

// ---- cv

std::uint64_t seed_from_env() {
  const char* s = std::getenv("PLONKA_SEED");
  return s ? std::strtoull(s, nullptr, 10) : 20240611u;
}

CVOperation read_op(const Json& j) {
  if (!j.is_array()) throw ParseError("an operation is an array of weights");
  std::vector<Rational> w;
  for (const auto& x : j) w.push_back(x.is_string() ? parse_rational(x.get<std::string>()) : Rational(x.get<long long>()));
  try {
    return CVOperation(std::move(w));
  } catch (const AlgebraError& e) {
    throw ParseError(e.what());
  }
}

int cmd_cv(const Config& config, const std::string& path, int fuzz) {
  Json doc;
  if (path.empty()) {
    doc = Json::parse(R"({"pool": ["x1", "x2"],
                          "evaluations": [{"op": ["1/2", "1/2"], "inputs": ["1*x1", "1/2*x2 + 1/2*_bot"]}]})");
  } else {
    doc = Loader::read_file(path);
  }
  std::vector<std::string> atoms;
  std::vector<CVInstance> instances;
  try {
    atoms = doc.at("pool").get<std::vector<std::string>>();
    if (doc.contains("evaluations")) {
      for (const auto& e : doc.at("evaluations")) {
        CVInstance inst{read_op(e.at("op")), {}};
        for (const auto& p : e.at("inputs")) inst.inputs.push_back(parse_point(p.get<std::string>()));
        instances.push_back(std::move(inst));
      }
    }
    if (doc.contains("ops")) {
      std::vector<ConvexPoint> points;
      for (const auto& p : doc.at("points")) points.push_back(parse_point(p.get<std::string>()));
      for (const auto& o : doc.at("ops")) {
        const CVOperation op = read_op(o);
        for (const auto& pick : enumerate_maps(op.arity(), static_cast<int>(points.size()), MapKind::all)) {
          CVInstance inst{op, {}};
          for (int j : pick) inst.inputs.push_back(points[static_cast<std::size_t>(j)]);
          instances.push_back(std::move(inst));
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("cv fixture: ") + e.what());
  }
  const FinSet pool(atoms);
  if (fuzz > 0) {
    std::mt19937_64 rng(seed_from_env());
    std::uniform_int_distribution<int> arity(1, 4);
    for (int i = 0; i < fuzz; ++i) {
      CVInstance inst{random_operation(rng, arity(rng)), {}};
      for (int j = 0; j < inst.op.arity(); ++j) inst.inputs.push_back(random_point(rng, pool));
      instances.push_back(std::move(inst));
    }
  }

  SimplexSumResult result;
  try {
    result = check_simplex_sum(pool, instances, config.nmax);
  } catch (const AlgebraError& e) {
    throw ParseError(e.what());
  } catch (const TruncationError& e) {
    throw ParseError(e.what());
  }
  Json inputs = Json::array();
  if (!path.empty()) inputs.push_back(path);
  if (fuzz > 0) inputs.push_back("fuzz:" + std::to_string(fuzz) + ":seed:" + std::to_string(seed_from_env()));
  Session s("cv", config, inputs);
  const FinSet objects = subset_objects(pool);
  for (const auto& ev : result.evaluations) {
    Json in = Json::array();
    for (const auto& y : ev.inputs) in.push_back(format(y));
    s.emit(Json{{"type", "evaluation"},
                {"op", to_string(ev.op)},
                {"inputs", in},
                {"component", objects.atom(ev.component)},
                {"value", format(ev.value)}});
  }
  s.add(result.report);
  return s.finish();
}

// ---- export-dot

int cmd_export_dot(const Config& config, const std::string& path, const std::string& kind) {
  if (config.out.empty()) throw ParseError("export-dot needs --out");
  Loader loader = make_loader(config);
  auto a = loader.algebra(Loader::read_file(path), fs::path(path).parent_path());
  PolyKind k = a->monad()->mode() == MonadMode::regular ? PolyKind::regular : PolyKind::linear;
  if (kind == "regular") k = PolyKind::regular;
  if (kind == "linear") k = PolyKind::linear;
  std::optional<PolyCategory> cat;
  try {
    cat.emplace(a, k);
  } catch (const AlgebraError& e) {
    throw ParseError(e.what());
  }
  write_file(config.out, to_dot(*cat));
  Session s("export-dot", config, Json::array({path}));
  s.add(check_category(*cat));
  s.emit(Json{{"type", "result"},
              {"kind", to_string(k)},
              {"nodes", cat->object_count()},
              {"edges", cat->morphisms().size()},
              {"path", config.out}});
  return s.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plonka sums, distributive laws and Plonka products over truncated monads"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Config config;
  app.add_option("--nmax", config.nmax, "Arity cap N_max for monads")->check(CLI::PositiveNumber);
  app.add_option("--nop", config.nop, "Operad cap N_op (default 2*N_max-1)")->check(CLI::NonNegativeNumber);
  app.add_option("--size-cap", config.size_cap, "Largest carrier quantified over")->check(CLI::PositiveNumber);
  app.add_option("--out", config.out, "Output file");
  app.add_option("--parallel", config.parallel, "Worker threads for independent inputs")->check(CLI::PositiveNumber);

  std::vector<std::string> inputs;
  auto* validate = app.add_subcommand("validate", "Validate operads, monads, algebras, morphisms and contexts");
  validate->add_option("inputs", inputs, "Files or builtin monad names")->required();

  std::string context;
  auto* sum = app.add_subcommand("plonka-sum", "Build the Plonka sum of a context");
  sum->add_option("context", context, "Context file")->required()->check(CLI::ExistingFile);

  std::string morphism, ctx_path, pi_r_path;
  auto* classify = app.add_subcommand("classify", "Classify a monad morphism");
  classify->add_option("morphism", morphism, "Morphism file")->required()->check(CLI::ExistingFile);
  classify->add_option("--context", ctx_path, "Context for a preservation cross-check")->check(CLI::ExistingFile);
  classify->add_option("--pi-r", pi_r_path, "The morphism R -> T indexing the transported sum")->check(CLI::ExistingFile);

  std::string theory, law = "", variant = "without_bottom";
  bool composite = false;
  auto* distlaw = app.add_subcommand("distlaw", "Check a distributive law over a builtin theory");
  distlaw->add_option("--theory", theory, "Base theory, e.g. Lprime, MAYBE, ASSOC")->required();
  distlaw->add_option("--law", law, "rho or alpha (default by the theory's mode)");
  distlaw->add_option("--variant", variant, "with_bottom or without_bottom");
  distlaw->add_flag("--composite", composite, "Also build the composite monad and check its laws");
  int composite_nmax = 2;
  distlaw->add_option("--composite-nmax", composite_nmax, "N_max for the composite monad")->check(CLI::PositiveNumber);

  std::string strength;
  std::vector<std::string> maps;
  bool compose = false;
  auto* kleisli = app.add_subcommand("kleisli", "Check a commutative strength and combine Kleisli maps");
  kleisli->add_option("--strength", strength, "C, C', L, L' or MAYBE")->required();
  kleisli->add_option("maps", maps, "Kleisli map files")->check(CLI::ExistingFile);
  kleisli->add_flag("--compose", compose, "Compose the maps in order instead of taking their product");

  std::string cv_path;
  int fuzz = 0;
  auto* cv = app.add_subcommand("cv", "Evaluate convex operations on the sum of simplices");
  cv->add_option("fixture", cv_path, "Fixture file (default: the half-quarter-quarter demo)")->check(CLI::ExistingFile);
  cv->add_option("--fuzz", fuzz, "Also evaluate this many random instances (seed from PLONKA_SEED)")->check(CLI::NonNegativeNumber);

  std::string algebra, kind = "auto";
  auto* dot = app.add_subcommand("export-dot", "Write the polynomial category of an algebra as DOT");
  dot->add_option("algebra", algebra, "Algebra file")->required()->check(CLI::ExistingFile);
  dot->add_option("--kind", kind, "regular, linear or auto")->check(CLI::IsMember({"regular", "linear", "auto"}));

  for (auto* sub : {validate, sum, classify, distlaw, kleisli, cv, dot}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Loader(LoadOptions{config.nmax, config.nop});
    if (*validate) return cmd_validate(config, inputs);
    if (*sum) return cmd_plonka_sum(config, context);
    if (*classify) return cmd_classify(config, morphism, ctx_path, pi_r_path);
    if (*distlaw) return cmd_distlaw(config, theory, law, variant, composite, composite_nmax);
    if (*kleisli) return cmd_kleisli(config, strength, maps, compose);
    if (*cv) return cmd_cv(config, cv_path, fuzz);
    if (*dot) return cmd_export_dot(config, algebra, kind);
  } catch (const ParseError& e) {
    std::cout << Json{{"type", "error"}, {"kind", "parse"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cout << Json{{"type", "error"}, {"kind", "runtime"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 2;
}
