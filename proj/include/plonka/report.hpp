#pragma once

// Check reports shared by every validator and by the command line tool.

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include <json.hpp>

namespace plonka {

struct CheckResult {
  std::string name;
  // Human readable description of the instances that were quantified over.
  std::string fragment;
  std::int64_t instances = 0;
  // Instances skipped because they need arities or sizes beyond the caps.
  std::int64_t out_of_fragment = 0;
  std::int64_t violations = 0;
  std::vector<std::string> witnesses;

  static constexpr std::size_t kMaxWitnesses = 8;

  bool passed() const { return violations == 0; }
  void fail(std::string witness);
};

struct Report {
  std::string subject;
  // A deque keeps references returned by add() valid.
  std::deque<CheckResult> checks;

  CheckResult& add(std::string name, std::string fragment = {});
  bool passed() const;
  std::int64_t violations() const;
  // Appends all checks of `other`, prefixing their names.
  void merge(const Report& other, const std::string& prefix = {});
  std::string summary() const;
};

nlohmann::json to_json(const CheckResult& check);
nlohmann::json to_json(const Report& report);

}  // namespace plonka
