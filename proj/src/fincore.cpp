#include "plonka/fincore.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <unordered_map>

namespace plonka {

namespace {

class IndexOrder final : public Order {
 public:
  bool less(int a, int b) const override { return a < b; }
};

}  // namespace

const Order& index_order() {
  static const IndexOrder order;
  return order;
}

struct FinSet::Impl {
  std::vector<std::string> atoms;
  std::unordered_map<std::string, int> index;
};

FinSet::FinSet() : FinSet(std::vector<std::string>{}) {}

FinSet::FinSet(std::vector<std::string> atoms) {
  auto impl = std::make_shared<Impl>();
  impl->index.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!impl->index.emplace(atoms[i], static_cast<int>(i)).second) {
      throw Error("duplicate atom '" + atoms[i] + "'");
    }
  }
  impl->atoms = std::move(atoms);
  impl_ = std::move(impl);
}

FinSet FinSet::range(int n, std::string_view prefix) {
  std::vector<std::string> atoms;
  atoms.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) atoms.push_back(std::string(prefix) + std::to_string(i));
  return FinSet(std::move(atoms));
}

int FinSet::size() const { return static_cast<int>(impl_->atoms.size()); }

const std::string& FinSet::atom(int i) const { return impl_->atoms.at(static_cast<std::size_t>(i)); }

const std::vector<std::string>& FinSet::atoms() const { return impl_->atoms; }

std::optional<int> FinSet::find(std::string_view atom) const {
  auto it = impl_->index.find(std::string(atom));
  if (it == impl_->index.end()) return std::nullopt;
  return it->second;
}

int FinSet::index(std::string_view atom) const {
  auto i = find(atom);
  if (!i) throw Error("unknown atom '" + std::string(atom) + "'");
  return *i;
}

bool FinSet::operator==(const FinSet& other) const {
  return impl_ == other.impl_ || impl_->atoms == other.impl_->atoms;
}

bool is_injective(std::span<const int> values) {
  std::vector<int> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool is_surjective(std::span<const int> values, int cod_size) {
  std::vector<char> hit(static_cast<std::size_t>(cod_size), 0);
  for (int v : values) hit[static_cast<std::size_t>(v)] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

FinMap::FinMap(FinSet dom, FinSet cod, std::vector<int> values)
    : dom_(std::move(dom)), cod_(std::move(cod)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != dom_.size()) {
    throw Error("map has " + std::to_string(values_.size()) + " values for a domain of size " +
                std::to_string(dom_.size()));
  }
  for (int v : values_) {
    if (v < 0 || v >= cod_.size()) throw Error("map value outside codomain");
  }
  injective_ = is_injective(values_);
  surjective_ = is_surjective(values_, cod_.size());
}

FinMap FinMap::identity(const FinSet& set) {
  std::vector<int> values(static_cast<std::size_t>(set.size()));
  std::iota(values.begin(), values.end(), 0);
  return FinMap(set, set, std::move(values));
}

bool FinMap::operator==(const FinMap& other) const {
  return dom_ == other.dom_ && cod_ == other.cod_ && values_ == other.values_;
}

FinMap compose(const FinMap& f, const FinMap& g) {
  if (!(g.cod() == f.dom())) throw CompositionError("codomain of g differs from domain of f");
  std::vector<int> values;
  values.reserve(g.values().size());
  for (int v : g.values()) values.push_back(f(v));
  return FinMap(g.dom(), f.cod(), std::move(values));
}

Factorization factor(std::span<const int> values, const Order& order) {
  Factorization out;
  out.image.assign(values.begin(), values.end());
  std::sort(out.image.begin(), out.image.end(), [&](int a, int b) { return order.less(a, b); });
  out.image.erase(std::unique(out.image.begin(), out.image.end()), out.image.end());
  out.surjection.reserve(values.size());
  for (int v : values) {
    auto it = std::lower_bound(out.image.begin(), out.image.end(), v,
                               [&](int a, int b) { return order.less(a, b); });
    out.surjection.push_back(static_cast<int>(it - out.image.begin()));
  }
  return out;
}

EpiMono epi_mono_factor(const FinMap& f) {
  Factorization fac = factor(f.values());
  std::vector<std::string> atoms;
  atoms.reserve(fac.image.size());
  for (std::size_t i = 1; i <= fac.image.size(); ++i) atoms.push_back(std::to_string(i));
  FinSet mid(std::move(atoms));
  return EpiMono{FinMap(f.dom(), mid, std::move(fac.surjection)),
                 FinMap(mid, f.cod(), std::move(fac.image))};
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (int v : images_) {
    if (v < 0 || v >= static_cast<int>(images_.size()) || seen[static_cast<std::size_t>(v)]) {
      throw Error("not a permutation");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  return Permutation(std::move(images));
}

Permutation Permutation::transposition(int n, int t) {
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  std::swap(images.at(static_cast<std::size_t>(t)), images.at(static_cast<std::size_t>(t + 1)));
  return Permutation(std::move(images));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != static_cast<int>(i)) return false;
  }
  return true;
}

Permutation Permutation::operator*(const Permutation& other) const {
  if (size() != other.size()) throw CompositionError("permutations of different degree");
  std::vector<int> images(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) {
    images[i] = images_[static_cast<std::size_t>(other.images_[i])];
  }
  return Permutation(std::move(images));
}

const std::vector<std::vector<int>>& all_permutations(int n) {
  static std::mutex mutex;
  static std::map<int, std::vector<std::vector<int>>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return cache.emplace(n, std::move(perms)).first->second;
}

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::int64_t permutation_rank(std::span<const int> images) {
  const int n = static_cast<int>(images.size());
  std::int64_t rank = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j) {
      if (images[static_cast<std::size_t>(j)] < images[static_cast<std::size_t>(i)]) ++smaller;
    }
    rank += smaller * factorial(n - 1 - i);
  }
  return rank;
}

std::vector<int> permutation_unrank(int n, std::int64_t rank) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = n; i >= 1; --i) {
    std::int64_t f = factorial(i - 1);
    auto k = static_cast<std::size_t>(rank / f);
    rank %= f;
    out.push_back(pool[k]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

SortedTuple sort_tuple(std::span<const int> values, const Order& order) {
  SortedTuple out;
  const auto n = values.size();
  out.sorter.resize(n);
  std::iota(out.sorter.begin(), out.sorter.end(), 0);
  std::stable_sort(out.sorter.begin(), out.sorter.end(), [&](int a, int b) {
    return order.less(values[static_cast<std::size_t>(a)], values[static_cast<std::size_t>(b)]);
  });
  out.sorted.reserve(n);
  for (int p : out.sorter) out.sorted.push_back(values[static_cast<std::size_t>(p)]);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && out.sorted[j] == out.sorted[i]) ++j;
    out.runs.emplace_back(static_cast<int>(i), static_cast<int>(j - i));
    i = j;
  }
  return out;
}

void for_each_run_permutation(int n, const std::vector<std::pair<int, int>>& runs,
                              const std::function<void(std::span<const int>)>& fn) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::pair<int, int>> nontrivial;
  for (const auto& r : runs) {
    if (r.second > 1) nontrivial.push_back(r);
  }
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == nontrivial.size()) {
      fn(perm);
      return;
    }
    auto [start, len] = nontrivial[k];
    for (const auto& local : all_permutations(len)) {
      for (int i = 0; i < len; ++i) perm[static_cast<std::size_t>(start + i)] = start + local[static_cast<std::size_t>(i)];
      rec(k + 1);
    }
    for (int i = 0; i < len; ++i) perm[static_cast<std::size_t>(start + i)] = start + i;
  };
  rec(0);
}

OrbitRep canonical_orbit_rep(std::span<const int> values, int label, const LabelAction& action,
                             const Order& order) {
  SortedTuple st = sort_tuple(values, order);
  if (!action) return OrbitRep{std::move(st.sorted), label};
  const int n = static_cast<int>(values.size());
  // x . sorter = sorted; the orbit member with value tuple `sorted` reached
  // through sorter carries R(sorter^-1)(label).
  Permutation sorter(st.sorter);
  int base = sorter.is_identity() ? label : action(sorter.inverse().images(), label);
  int best = base;
  if (std::any_of(st.runs.begin(), st.runs.end(), [](const auto& r) { return r.second > 1; })) {
    for_each_run_permutation(n, st.runs, [&](std::span<const int> tau) {
      int candidate = action(tau, base);
      if (candidate < best) best = candidate;
    });
  }
  return OrbitRep{std::move(st.sorted), best};
}

std::pair<FinMap, int> canonical_orbit_rep(const FinMap& x, int label, const LabelAction& action) {
  OrbitRep rep = canonical_orbit_rep(x.values(), label, action);
  return {FinMap(x.dom(), x.cod(), std::move(rep.values)), rep.label};
}

std::vector<std::vector<int>> enumerate_maps(int dom_size, int cod_size, MapKind kind) {
  std::vector<std::vector<int>> out;
  if (dom_size == 0) {
    if (kind != MapKind::surjective || cod_size == 0) out.emplace_back();
    return out;
  }
  if (cod_size == 0) return out;
  std::vector<int> values(static_cast<std::size_t>(dom_size), 0);
  while (true) {
    bool keep = true;
    if (kind == MapKind::injective) keep = is_injective(values);
    if (kind == MapKind::surjective) keep = is_surjective(values, cod_size);
    if (keep) out.push_back(values);
    int i = dom_size - 1;
    while (i >= 0 && values[static_cast<std::size_t>(i)] == cod_size - 1) {
      values[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++values[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<FinMap> enumerate_maps(const FinSet& dom, const FinSet& cod, MapKind kind) {
  std::vector<FinMap> out;
  for (auto& v : enumerate_maps(dom.size(), cod.size(), kind)) out.emplace_back(dom, cod, std::move(v));
  return out;
}

}  // namespace plonka
