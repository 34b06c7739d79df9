#pragma once

// Brute-force enumeration of small semilattices, used as an independent
// source of algebras in tests.

#include <algorithm>
#include <optional>
#include <vector>

#include "plonka/fincore.hpp"

namespace plonka::testing {

using Table = std::vector<std::vector<int>>;

// Every join-semilattice table on (n]: commutative, idempotent, associative.
inline std::vector<Table> semilattice_tables(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  std::vector<Table> out;
  for (const auto& choice : enumerate_maps(static_cast<int>(pairs.size()), n, MapKind::all)) {
    Table t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a) t[a][a] = a;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      t[pairs[p].first][pairs[p].second] = choice[p];
      t[pairs[p].second][pairs[p].first] = choice[p];
    }
    bool assoc = true;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) assoc = assoc && t[t[a][b]][c] == t[a][t[b][c]];
      }
    }
    if (assoc) out.push_back(t);
  }
  return out;
}

inline Table chain_max(int n) {
  Table t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) t[a][b] = std::max(a, b);
  }
  return t;
}

// The element below every other one, if any.
inline std::optional<int> bottom_of(const Table& t) {
  const int n = static_cast<int>(t.size());
  for (int a = 0; a < n; ++a) {
    bool below = true;
    for (int b = 0; b < n; ++b) below = below && t[a][b] == b;
    if (below) return a;
  }
  return std::nullopt;
}

// Every commutative monoid table on (n] with identity 0.
inline std::vector<Table> commutative_monoid_tables(int n) {
  std::vector<Table> out;
  std::vector<std::pair<int, int>> cells;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) cells.emplace_back(a, b);
  }
  for (const auto& choice : enumerate_maps(static_cast<int>(cells.size()), n, MapKind::all)) {
    Table t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (std::size_t p = 0; p < cells.size(); ++p) {
      t[cells[p].first][cells[p].second] = choice[p];
      t[cells[p].second][cells[p].first] = choice[p];
    }
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) ok = t[0][a] == a;
    for (int a = 0; a < n && ok; ++a) {
      for (int b = 0; b < n && ok; ++b) {
        for (int c = 0; c < n && ok; ++c) ok = t[t[a][b]][c] == t[a][t[b][c]];
      }
    }
    if (ok) out.push_back(t);
  }
  return out;
}

}  // namespace plonka::testing
