#pragma once

// JSON formats for operads, monads, algebras, monad morphisms, Plonka sum
// contexts and Kleisli maps. The schemas are described in docs/formats.md.
//
// Wherever a document is expected, a string ending in ".json" is read as a
// path relative to the directory of the referring file.

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "plonka/emalg.hpp"
#include "plonka/kleisli.hpp"
#include "plonka/monad.hpp"
#include "plonka/operad.hpp"
#include "plonka/plonka_sum.hpp"
#include "plonka/polycat.hpp"

namespace plonka {

using Json = nlohmann::json;

struct LoadOptions {
  // Default N_max for monads that do not state one.
  int nmax = 3;
  // Cap for builtin operads; 0 means 2 * nmax - 1.
  int nop = 0;
};

// Every loader throws ParseError for unreadable files, malformed JSON, schema
// violations and caps that cannot be honored.
class Loader {
 public:
  explicit Loader(LoadOptions options = {});

  const LoadOptions& options() const { return options_; }
  int operad_cap() const;

  static Json read_file(const std::filesystem::path& path);
  // A document given inline or by reference, with the directory that
  // relative references inside it resolve against.
  std::pair<Json, std::filesystem::path> resolve(const Json& j, const std::filesystem::path& dir) const;

  OperadPtr operad(const Json& j, const std::filesystem::path& dir = {});
  MonadPtr monad(const Json& j, const std::filesystem::path& dir = {});
  std::shared_ptr<const EMAlgebra> algebra(const Json& j, const std::filesystem::path& dir = {});
  MonadMorphism morphism(const Json& j, const std::filesystem::path& dir = {});
  // Does not validate; run validate_context on the result.
  PlonkaContext context(const Json& j, const std::filesystem::path& dir = {});
  KleisliMap kleisli_map(const Json& j, const std::filesystem::path& dir = {});

 private:
  LoadOptions options_;
  std::map<std::string, MonadPtr> monads_;
};

// "operad", "monad", "algebra", "morphism", "context" or "kleisli"; a bare
// string names a builtin monad. Throws ParseError when there is no kind.
std::string document_kind(const Json& j);

Json to_json(const OperadTables& tables);
// Builtin monads by name, table operads inline.
Json monad_to_json(const TruncatedMonad& t);
Json to_json(const EMAlgebra& a);
Json to_json(const MonadMorphism& tau);
Json to_json(const FunctorData& f);
Json to_json(const KleisliMap& f);

}  // namespace plonka
