#include "plonka/report.hpp"

#include <sstream>

namespace plonka {

void CheckResult::fail(std::string witness) {
  ++violations;
  if (witnesses.size() < kMaxWitnesses) witnesses.push_back(std::move(witness));
}

CheckResult& Report::add(std::string name, std::string fragment) {
  CheckResult c;
  c.name = std::move(name);
  c.fragment = std::move(fragment);
  checks.push_back(std::move(c));
  return checks.back();
}

bool Report::passed() const {
  for (const auto& c : checks) {
    if (!c.passed()) return false;
  }
  return true;
}

std::int64_t Report::violations() const {
  std::int64_t v = 0;
  for (const auto& c : checks) v += c.violations;
  return v;
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (auto c : other.checks) {
    if (!prefix.empty()) c.name = prefix + "." + c.name;
    checks.push_back(std::move(c));
  }
}

std::string Report::summary() const {
  std::ostringstream out;
  out << subject << ": " << (passed() ? "pass" : "FAIL");
  for (const auto& c : checks) {
    out << "\n  " << c.name << ": " << (c.passed() ? "pass" : "FAIL") << " (" << c.instances << " instances";
    if (c.out_of_fragment > 0) out << ", " << c.out_of_fragment << " out of fragment";
    if (c.violations > 0) out << ", " << c.violations << " violations";
    out << ")";
    for (const auto& w : c.witnesses) out << "\n    " << w;
  }
  return out.str();
}

nlohmann::json to_json(const CheckResult& check) {
  return nlohmann::json{{"check", check.name},
                        {"status", check.passed() ? "pass" : "fail"},
                        {"fragment", check.fragment},
                        {"instances", check.instances},
                        {"out_of_fragment", check.out_of_fragment},
                        {"violations", check.violations},
                        {"witnesses", check.witnesses}};
}

nlohmann::json to_json(const Report& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) checks.push_back(to_json(c));
  return nlohmann::json{{"subject", report.subject},
                        {"status", report.passed() ? "pass" : "fail"},
                        {"checks", std::move(checks)}};
}

}  // namespace plonka
