#include "plonka/operad.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "plonka/fincore.hpp"

namespace plonka {

std::string to_string(OperadMode mode) { return mode == OperadMode::regular ? "regular" : "symmetric"; }

std::optional<int> Operad::find_label(int n, std::string_view name) const {
  const int count = label_count(n);
  for (int r = 0; r < count; ++r) {
    if (label_name(n, r) == name) return r;
  }
  return std::nullopt;
}

int Operad::act_surjection(std::span<const int> s, int m, int label) const {
  if (static_cast<int>(s.size()) != m || !is_injective(s)) {
    throw OperadError(name() + ": surjection action requested from a symmetric operad");
  }
  return act_permutation(s, label);
}

LabelRef Operad::substitute_at(LabelRef outer, int j, LabelRef inner) const {
  std::vector<LabelRef> inners(static_cast<std::size_t>(outer.arity), LabelRef{1, unit()});
  inners.at(static_cast<std::size_t>(j)) = inner;
  return substitute(outer, inners);
}

std::vector<LabelRef> all_labels(const Operad& op, int max_arity) {
  std::vector<LabelRef> out;
  for (int n = 0; n <= max_arity; ++n) {
    for (int r = 0; r < op.label_count(n); ++r) out.push_back({n, r});
  }
  return out;
}

namespace {

void check_label(const Operad& op, LabelRef l) {
  if (l.arity < 0 || l.label < 0 || l.label >= op.label_count(l.arity)) {
    throw OperadError(op.name() + ": no label " + std::to_string(l.label) + " in arity " +
                      std::to_string(l.arity));
  }
}

int arity_sum(std::span<const LabelRef> inners) {
  int n = 0;
  for (const auto& l : inners) n += l.arity;
  return n;
}

// Calls fn with every k-tuple of labels whose arities sum to at most budget.
void for_each_tuple(const Operad& op, int k, int budget,
                    const std::function<void(std::span<const LabelRef>)>& fn) {
  std::vector<LabelRef> tuple(static_cast<std::size_t>(k));
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == k) {
      fn(tuple);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      const int count = op.label_count(a);
      for (int r = 0; r < count; ++r) {
        tuple[static_cast<std::size_t>(i)] = {a, r};
        rec(i + 1, left - a);
      }
    }
  };
  rec(0, budget);
}

}  // namespace

TableOperad::TableOperad(OperadTables tables) : t_(std::move(tables)) {
  if (t_.max_arity < 1) throw OperadError(t_.name + ": max_arity must be at least 1");
  t_.labels.resize(static_cast<std::size_t>(t_.max_arity) + 1);
  t_.perm.resize(static_cast<std::size_t>(t_.max_arity) + 1);
  t_.merge.resize(static_cast<std::size_t>(t_.max_arity) + 1);
  if (t_.unit < 0 || t_.unit >= label_count(1)) throw OperadError(t_.name + ": unit is not an arity-1 label");
  trivial_ = true;
  for (int n = 0; n <= t_.max_arity; ++n) {
    const auto un = static_cast<std::size_t>(n);
    const int count = label_count(n);
    std::map<std::string, int> seen;
    for (const auto& l : t_.labels[un]) {
      if (!seen.emplace(l, 0).second) throw OperadError(t_.name + ": duplicate label '" + l + "'");
    }
    if (n >= 2 && count > 0) {
      if (t_.perm[un].size() != static_cast<std::size_t>(n - 1)) {
        throw OperadError(t_.name + ": perm_action for arity " + std::to_string(n) + " needs " +
                          std::to_string(n - 1) + " tables");
      }
      for (const auto& table : t_.perm[un]) {
        if (table.size() != static_cast<std::size_t>(count)) throw OperadError(t_.name + ": perm_action table size");
        for (std::size_t r = 0; r < table.size(); ++r) {
          if (table[r] < 0 || table[r] >= count) throw OperadError(t_.name + ": perm_action value out of range");
          if (table[r] != static_cast<int>(r)) trivial_ = false;
        }
      }
      if (t_.mode == OperadMode::regular) {
        if (t_.merge[un].size() != static_cast<std::size_t>(n - 1)) {
          throw OperadError(t_.name + ": merge_action for arity " + std::to_string(n) + " needs " +
                            std::to_string(n - 1) + " tables");
        }
        for (const auto& table : t_.merge[un]) {
          if (table.size() != static_cast<std::size_t>(count)) throw OperadError(t_.name + ": merge_action table size");
          for (int v : table) {
            if (v < 0 || v >= label_count(n - 1)) throw OperadError(t_.name + ": merge_action value out of range");
          }
        }
      }
    }
  }
}

int TableOperad::label_count(int n) const {
  if (n < 0 || n > t_.max_arity) return 0;
  return static_cast<int>(t_.labels[static_cast<std::size_t>(n)].size());
}

std::string TableOperad::label_name(int n, int label) const {
  check_label(*this, {n, label});
  return t_.labels[static_cast<std::size_t>(n)][static_cast<std::size_t>(label)];
}

std::optional<int> TableOperad::find_label(int n, std::string_view name) const {
  if (n < 0 || n > t_.max_arity) return std::nullopt;
  const auto& ls = t_.labels[static_cast<std::size_t>(n)];
  auto it = std::find(ls.begin(), ls.end(), name);
  if (it == ls.end()) return std::nullopt;
  return static_cast<int>(it - ls.begin());
}

int TableOperad::act_permutation(std::span<const int> sigma, int label) const {
  const int n = static_cast<int>(sigma.size());
  check_label(*this, {n, label});
  if (trivial_ || n < 2) return label;
  // sigma = (sigma . t_i) . t_i at the first descent i; t_i acts first.
  std::vector<int> cur(sigma.begin(), sigma.end());
  int r = label;
  while (true) {
    int i = 0;
    while (i + 1 < n && cur[static_cast<std::size_t>(i)] < cur[static_cast<std::size_t>(i + 1)]) ++i;
    if (i + 1 >= n) break;
    r = t_.perm[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
    std::swap(cur[static_cast<std::size_t>(i)], cur[static_cast<std::size_t>(i + 1)]);
  }
  return r;
}

int TableOperad::act_surjection(std::span<const int> s, int m, int label) const {
  const int n = static_cast<int>(s.size());
  if (n == m) return Operad::act_surjection(s, m, label);
  if (t_.mode != OperadMode::regular) return Operad::act_surjection(s, m, label);
  if (!is_surjective(s, m)) throw OperadError(t_.name + ": surjection action along a non-surjective map");
  check_label(*this, {n, label});
  // s = u . pi with pi a permutation and u monotone.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return s[static_cast<std::size_t>(a)] < s[static_cast<std::size_t>(b)];
  });
  std::vector<int> pi(static_cast<std::size_t>(n));
  std::vector<int> u(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    pi[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] = j;
    u[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
  }
  int r = act_permutation(pi, label);
  // u = u' . e_j at the first repeated pair j; e_j acts first.
  while (static_cast<int>(u.size()) > m) {
    std::size_t j = 0;
    while (u[j] != u[j + 1]) ++j;
    r = t_.merge[u.size()][j][static_cast<std::size_t>(r)];
    u.erase(u.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  }
  return r;
}

LabelRef TableOperad::substitute(LabelRef outer, std::span<const LabelRef> inners) const {
  check_label(*this, outer);
  if (static_cast<int>(inners.size()) != outer.arity) throw OperadError(t_.name + ": substitution arity mismatch");
  for (const auto& l : inners) check_label(*this, l);
  const int total = arity_sum(inners);
  if (total > t_.max_arity) {
    throw TruncationError(t_.name + ": substitution of arity " + std::to_string(total) + " beyond cap " +
                          std::to_string(t_.max_arity));
  }
  std::vector<int> key{outer.arity, outer.label};
  for (const auto& l : inners) {
    key.push_back(l.arity);
    key.push_back(l.label);
  }
  auto it = t_.subst.find(key);
  if (it == t_.subst.end()) {
    std::string msg = t_.name + ": substitution table has no entry for " + label_name(outer.arity, outer.label) + "(";
    for (std::size_t i = 0; i < inners.size(); ++i) {
      if (i) msg += ", ";
      msg += label_name(inners[i].arity, inners[i].label);
    }
    throw OperadError(msg + ")");
  }
  if (it->second < 0 || it->second >= label_count(total)) throw OperadError(t_.name + ": substitution value out of range");
  return {total, it->second};
}

std::shared_ptr<const TableOperad> materialize(const Operad& op, int cap) {
  OperadTables t;
  t.name = op.name();
  t.mode = op.mode();
  t.max_arity = cap;
  t.unit = op.unit();
  t.labels.resize(static_cast<std::size_t>(cap) + 1);
  t.perm.resize(static_cast<std::size_t>(cap) + 1);
  t.merge.resize(static_cast<std::size_t>(cap) + 1);
  for (int n = 0; n <= cap; ++n) {
    const auto un = static_cast<std::size_t>(n);
    const int count = op.label_count(n);
    for (int r = 0; r < count; ++r) t.labels[un].push_back(op.label_name(n, r));
    if (n < 2 || count == 0) continue;
    for (int i = 0; i + 1 < n; ++i) {
      Permutation tr = Permutation::transposition(n, i);
      std::vector<int> table;
      for (int r = 0; r < count; ++r) table.push_back(op.act_permutation(tr.images(), r));
      t.perm[un].push_back(std::move(table));
      if (op.mode() == OperadMode::regular) {
        std::vector<int> e(static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p) e[static_cast<std::size_t>(p)] = p <= i ? p : p - 1;
        std::vector<int> mtable;
        for (int r = 0; r < count; ++r) mtable.push_back(op.act_surjection(e, n - 1, r));
        t.merge[un].push_back(std::move(mtable));
      }
    }
  }
  for (int k = 0; k <= cap; ++k) {
    for (int r = 0; r < op.label_count(k); ++r) {
      for_each_tuple(op, k, cap, [&](std::span<const LabelRef> inners) {
        std::vector<int> key{k, r};
        for (const auto& l : inners) {
          key.push_back(l.arity);
          key.push_back(l.label);
        }
        t.subst.emplace(std::move(key), op.substitute({k, r}, inners).label);
      });
    }
  }
  return std::make_shared<TableOperad>(std::move(t));
}

TerminalOperad::TerminalOperad(std::string name, OperadMode mode, bool with_nullary, int cap)
    : name_(std::move(name)), mode_(mode), with_nullary_(with_nullary), cap_(cap) {}

int TerminalOperad::label_count(int n) const {
  if (n < 0) return 0;
  return (n == 0 && !with_nullary_) ? 0 : 1;
}

std::string TerminalOperad::label_name(int n, int label) const {
  check_label(*this, {n, label});
  return "mu" + std::to_string(n);
}

std::optional<int> TerminalOperad::find_label(int n, std::string_view name) const {
  if (label_count(n) == 1 && name == "mu" + std::to_string(n)) return 0;
  return std::nullopt;
}

int TerminalOperad::act_permutation(std::span<const int> sigma, int label) const {
  check_label(*this, {static_cast<int>(sigma.size()), label});
  return label;
}

int TerminalOperad::act_surjection(std::span<const int> s, int m, int label) const {
  if (mode_ != OperadMode::regular) return Operad::act_surjection(s, m, label);
  if (!is_surjective(s, m)) throw OperadError(name_ + ": surjection action along a non-surjective map");
  check_label(*this, {static_cast<int>(s.size()), label});
  return 0;
}

LabelRef TerminalOperad::substitute(LabelRef outer, std::span<const LabelRef> inners) const {
  check_label(*this, outer);
  if (static_cast<int>(inners.size()) != outer.arity) throw OperadError(name_ + ": substitution arity mismatch");
  for (const auto& l : inners) check_label(*this, l);
  const int total = arity_sum(inners);
  if (total > cap_) {
    throw TruncationError(name_ + ": substitution of arity " + std::to_string(total) + " beyond cap " +
                          std::to_string(cap_));
  }
  return {total, 0};
}

namespace {

constexpr int kLeafWordMaxCap = 9;

void magma_shapes(int n, std::vector<std::vector<std::string>>& shapes) {
  shapes.assign(static_cast<std::size_t>(n) + 1, {});
  if (n >= 1) shapes[1] = {"x"};
  for (int m = 2; m <= n; ++m) {
    for (int left = 1; left < m; ++left) {
      for (const auto& l : shapes[static_cast<std::size_t>(left)]) {
        for (const auto& r : shapes[static_cast<std::size_t>(m - left)]) {
          shapes[static_cast<std::size_t>(m)].push_back("(" + l + r + ")");
        }
      }
    }
  }
}

}  // namespace

LeafWordOperad::LeafWordOperad(Kind kind, int cap) : kind_(kind), cap_(std::min(cap, kLeafWordMaxCap)) {
  if (kind_ == Kind::magma) {
    magma_shapes(cap_, shapes_);
  } else {
    shapes_.assign(static_cast<std::size_t>(cap_) + 1, std::vector<std::string>{""});
  }
  shape_index_.resize(shapes_.size());
  for (std::size_t n = 0; n < shapes_.size(); ++n) {
    for (std::size_t i = 0; i < shapes_[n].size(); ++i) shape_index_[n].emplace(shapes_[n][i], static_cast<int>(i));
  }
}

int LeafWordOperad::label_count(int n) const {
  if (n < 0 || n > cap_) return 0;
  return static_cast<int>(shapes_[static_cast<std::size_t>(n)].size() * factorial(n));
}

std::vector<int> LeafWordOperad::leaves(int n, int label) const {
  check_label(*this, {n, label});
  return permutation_unrank(n, label % factorial(n));
}

const std::string& LeafWordOperad::shape(int n, int label) const {
  check_label(*this, {n, label});
  return shapes_[static_cast<std::size_t>(n)][static_cast<std::size_t>(label / factorial(n))];
}

int LeafWordOperad::encode(int n, const std::string& shape, std::span<const int> leaves) const {
  if (n < 0 || n > cap_) throw TruncationError(name() + ": arity " + std::to_string(n) + " beyond cap");
  const auto& index = shape_index_[static_cast<std::size_t>(n)];
  auto it = index.find(shape);
  if (it == index.end()) throw OperadError(name() + ": unknown shape " + shape);
  return static_cast<int>(it->second * factorial(n) + permutation_rank(leaves));
}

std::string LeafWordOperad::label_name(int n, int label) const {
  std::vector<int> beta = leaves(n, label);
  if (kind_ == Kind::assoc) {
    if (n == 0) return "e";
    std::string out = "p";
    for (int v : beta) out += std::to_string(v + 1);
    return out;
  }
  const std::string& sh = shape(n, label);
  std::string out;
  std::size_t leaf = 0;
  char prev = '(';
  for (char c : sh) {
    if ((c == 'x' || c == '(') && (prev == 'x' || prev == ')')) out += ' ';
    if (c == 'x') {
      out += std::to_string(beta[leaf++] + 1);
    } else {
      out += c;
    }
    prev = c;
  }
  return out;
}

int LeafWordOperad::act_permutation(std::span<const int> sigma, int label) const {
  const int n = static_cast<int>(sigma.size());
  std::vector<int> beta = leaves(n, label);
  for (int& v : beta) v = sigma[static_cast<std::size_t>(v)];
  return encode(n, shape(n, label), beta);
}

// Leaf j reads values[beta(j)]. Sorting the values and then handing each
// leaf the next free slot among equal values, in leaf order, gives the
// lexicographically least beta, hence the least label.
bool LeafWordOperad::canonical_form(std::vector<int>& values, int& label) const {
  const int n = static_cast<int>(values.size());
  const std::vector<int> beta = leaves(n, label);
  std::vector<int> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> next(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    next[static_cast<std::size_t>(p)] =
        static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sorted[static_cast<std::size_t>(p)]) - sorted.begin());
  }
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int v = values[static_cast<std::size_t>(beta[static_cast<std::size_t>(j)])];
    const auto start = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    out[static_cast<std::size_t>(j)] = next[start]++;
  }
  label = static_cast<int>((label / factorial(n)) * factorial(n) + permutation_rank(out));
  values = std::move(sorted);
  return true;
}

LabelRef LeafWordOperad::substitute(LabelRef outer, std::span<const LabelRef> inners) const {
  check_label(*this, outer);
  if (static_cast<int>(inners.size()) != outer.arity) throw OperadError(name() + ": substitution arity mismatch");
  for (const auto& l : inners) check_label(*this, l);
  const int total = arity_sum(inners);
  if (total > cap_) {
    throw TruncationError(name() + ": substitution of arity " + std::to_string(total) + " beyond cap " +
                          std::to_string(cap_));
  }
  std::vector<int> offset(inners.size(), 0);
  for (std::size_t i = 1; i < inners.size(); ++i) offset[i] = offset[i - 1] + inners[i - 1].arity;
  std::vector<int> beta = leaves(outer.arity, outer.label);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(total));
  std::string sh;
  const std::string& outer_shape = shape(outer.arity, outer.label);
  std::size_t leaf = 0;
  auto emit = [&](std::size_t j) {
    const auto i = static_cast<std::size_t>(beta[j]);
    for (int v : leaves(inners[i].arity, inners[i].label)) out.push_back(offset[i] + v);
    if (kind_ == Kind::magma) sh += shape(inners[i].arity, inners[i].label);
  };
  if (kind_ == Kind::magma) {
    for (char c : outer_shape) {
      if (c == 'x') {
        emit(leaf++);
      } else {
        sh += c;
      }
    }
  } else {
    for (std::size_t j = 0; j < beta.size(); ++j) emit(j);
  }
  return {total, encode(total, sh, out)};
}

namespace {

OperadTables small_table(std::string name, int cap) {
  OperadTables t;
  t.name = std::move(name);
  t.mode = OperadMode::regular;
  t.max_arity = std::max(cap, 1);
  t.labels.resize(static_cast<std::size_t>(t.max_arity) + 1);
  t.labels[1] = {"iota"};
  t.unit = 0;
  t.subst[{1, 0, 1, 0}] = 0;
  return t;
}

}  // namespace

OperadPtr builtin_operad(std::string_view name, int cap) {
  if (cap < 1) throw OperadError("operad cap must be at least 1");
  if (name == "L") return std::make_shared<TerminalOperad>("L", OperadMode::regular, true, cap);
  if (name == "L'" || name == "Lprime") return std::make_shared<TerminalOperad>("L'", OperadMode::regular, false, cap);
  if (name == "C") return std::make_shared<TerminalOperad>("C", OperadMode::symmetric, true, cap);
  if (name == "C'" || name == "Cprime") return std::make_shared<TerminalOperad>("C'", OperadMode::symmetric, false, cap);
  if (name == "ASSOC") return std::make_shared<LeafWordOperad>(LeafWordOperad::Kind::assoc, cap);
  if (name == "MAGMA") return std::make_shared<LeafWordOperad>(LeafWordOperad::Kind::magma, cap);
  if (name == "MAYBE") {
    OperadTables t = small_table("MAYBE", cap);
    t.labels[0] = {"*"};
    t.subst[{0, 0}] = 0;
    t.subst[{1, 0, 0, 0}] = 0;
    return std::make_shared<TableOperad>(std::move(t));
  }
  if (name == "ID") return std::make_shared<TableOperad>(small_table("ID", cap));
  throw OperadError("unknown builtin operad '" + std::string(name) + "'");
}

const std::vector<std::string>& builtin_operad_names() {
  static const std::vector<std::string> names{"L", "L'", "C", "C'", "ASSOC", "MAGMA", "MAYBE", "ID"};
  return names;
}

namespace {

std::string show(const Operad& op, LabelRef l) { return op.label_name(l.arity, l.label); }

std::string show(const Operad& op, std::span<const LabelRef> ls) {
  std::string out = "(";
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i) out += ", ";
    out += show(op, ls[i]);
  }
  return out + ")";
}

std::string show(std::span<const int> s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i] + 1);
  }
  return out + "]";
}

// The maps along which the coefficient functor acts: surjections in regular
// mode, bijections otherwise, from (n] onto (m].
std::vector<std::vector<int>> acting_maps(OperadMode mode, int n, int m) {
  if (mode == OperadMode::symmetric) {
    if (n != m) return {};
    return all_permutations(n);
  }
  return enumerate_maps(n, m, MapKind::surjective);
}

// Runs fn, classifying TruncationError as out of fragment and OperadError as
// a violation.
template <typename Fn>
void guarded(CheckResult& check, Fn&& fn) {
  try {
    ++check.instances;
    fn();
  } catch (const TruncationError&) {
    --check.instances;
    ++check.out_of_fragment;
  } catch (const OperadError& e) {
    check.fail(e.what());
  }
}

}  // namespace

Report validate_operad(const Operad& op, int cap) {
  const int c = std::min(cap, op.max_arity());
  Report report;
  report.subject = "operad " + op.name();
  const std::string fragment = "arities <= " + std::to_string(c);
  const LabelRef iota{1, op.unit()};

  {
    CheckResult& check = report.add("functoriality", fragment);
    for (int n = 0; n <= c; ++n) {
      std::vector<int> id(static_cast<std::size_t>(n));
      std::iota(id.begin(), id.end(), 0);
      for (int r = 0; r < op.label_count(n); ++r) {
        guarded(check, [&] {
          if (op.act_surjection(id, n, r) != r) check.fail("R(id) moves " + show(op, LabelRef{n, r}));
        });
      }
    }
    // Composable pairs s1 . s0 with s0: (p] ->> (n], s1: (n] ->> (m].
    for (int p = 0; p <= c; ++p) {
      for (int n = 0; n <= p; ++n) {
        const auto s0s = acting_maps(op.mode(), p, n);
        if (s0s.empty()) continue;
        for (int m = 0; m <= n; ++m) {
          const auto s1s = acting_maps(op.mode(), n, m);
          for (const auto& s0 : s0s) {
            for (const auto& s1 : s1s) {
              std::vector<int> comp(s0.size());
              for (std::size_t i = 0; i < s0.size(); ++i) comp[i] = s1[static_cast<std::size_t>(s0[i])];
              for (int r = 0; r < op.label_count(p); ++r) {
                guarded(check, [&] {
                  const int lhs = op.act_surjection(comp, m, r);
                  const int rhs = op.act_surjection(s1, m, op.act_surjection(s0, n, r));
                  if (lhs != rhs) {
                    check.fail("R(s1.s0) != R(s1)R(s0) for s0=" + show(s0) + " s1=" + show(s1) + " on " +
                               show(op, LabelRef{p, r}));
                  }
                });
              }
            }
          }
        }
      }
    }
  }

  {
    CheckResult& check = report.add("unit", fragment);
    for (const auto& r : all_labels(op, c)) {
      guarded(check, [&] {
        const LabelRef left = op.substitute(iota, std::span<const LabelRef>(&r, 1));
        if (left != r) check.fail("iota(" + show(op, r) + ") = " + show(op, left));
      });
      guarded(check, [&] {
        std::vector<LabelRef> units(static_cast<std::size_t>(r.arity), iota);
        const LabelRef right = op.substitute(r, units);
        if (right != r) check.fail(show(op, r) + "(iota, ..., iota) = " + show(op, right));
      });
    }
  }

  {
    CheckResult& check = report.add("associativity", fragment);
    for (int k = 0; k <= c; ++k) {
      for (int r = 0; r < op.label_count(k); ++r) {
        const LabelRef outer{k, r};
        for_each_tuple(op, k, c, [&](std::span<const LabelRef> mid) {
          const int total = arity_sum(mid);
          for_each_tuple(op, total, c, [&](std::span<const LabelRef> low) {
            guarded(check, [&] {
              const LabelRef lhs = op.substitute(op.substitute(outer, mid), low);
              std::vector<LabelRef> grouped;
              std::size_t at = 0;
              for (const auto& m : mid) {
                auto block = low.subspan(at, static_cast<std::size_t>(m.arity));
                grouped.push_back(op.substitute(m, block));
                at += static_cast<std::size_t>(m.arity);
              }
              const LabelRef rhs = op.substitute(outer, grouped);
              if (lhs != rhs) {
                check.fail(show(op, outer) + " over " + show(op, mid) + " over " + show(op, low) + ": " +
                           show(op, lhs) + " != " + show(op, rhs));
              }
            });
          });
        });
      }
    }
  }

  {
    CheckResult& check = report.add("equivariance", fragment);
    // Outer: gamma(R(s) r; r_1..r_m) = R(B)(gamma(r; r_s(1)..r_s(k))) where B
    // sends block j of the right-hand substitution onto block s(j).
    for (int k = 0; k <= c; ++k) {
      for (int m = 0; m <= k; ++m) {
        const auto ss = acting_maps(op.mode(), k, m);
        for (int r = 0; r < op.label_count(k); ++r) {
          for (const auto& s : ss) {
            for_each_tuple(op, m, c, [&](std::span<const LabelRef> inners) {
              guarded(check, [&] {
                const LabelRef lhs = op.substitute({m, op.act_surjection(s, m, r)}, inners);
                std::vector<int> offset(inners.size(), 0);
                for (std::size_t i = 1; i < inners.size(); ++i) offset[i] = offset[i - 1] + inners[i - 1].arity;
                std::vector<LabelRef> pulled;
                std::vector<int> block_map;
                for (int j = 0; j < k; ++j) {
                  const auto i = static_cast<std::size_t>(s[static_cast<std::size_t>(j)]);
                  pulled.push_back(inners[i]);
                  for (int t = 0; t < inners[i].arity; ++t) block_map.push_back(offset[i] + t);
                }
                const LabelRef inner = op.substitute({k, r}, pulled);
                const int rhs = op.act_surjection(block_map, lhs.arity, inner.label);
                if (lhs.label != rhs) {
                  check.fail("outer action s=" + show(s) + " on " + show(op, LabelRef{k, r}) + " with " +
                             show(op, inners) + ": " + show(op, lhs) + " != " + show(op, LabelRef{lhs.arity, rhs}));
                }
              });
            });
          }
        }
      }
    }
    // Inner: gamma(r; R(s_1) r_1, ..., R(s_k) r_k) = R(s_1 + ... + s_k)(gamma(r; r_1..r_k)).
    for (int k = 0; k <= c; ++k) {
      for (int r = 0; r < op.label_count(k); ++r) {
        for_each_tuple(op, k, c, [&](std::span<const LabelRef> inners) {
          std::vector<std::vector<std::vector<int>>> choices;
          std::vector<std::vector<int>> targets;
          for (const auto& l : inners) {
            std::vector<std::vector<int>> maps;
            std::vector<int> tgt;
            for (int m = 0; m <= l.arity; ++m) {
              for (auto& s : acting_maps(op.mode(), l.arity, m)) {
                maps.push_back(std::move(s));
                tgt.push_back(m);
              }
            }
            choices.push_back(std::move(maps));
            targets.push_back(std::move(tgt));
          }
          std::vector<std::size_t> pick(inners.size(), 0);
          std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i < inners.size()) {
              for (pick[i] = 0; pick[i] < choices[i].size(); ++pick[i]) rec(i + 1);
              return;
            }
            guarded(check, [&] {
              std::vector<LabelRef> moved;
              std::vector<int> sum_map;
              int offset = 0;
              for (std::size_t j = 0; j < inners.size(); ++j) {
                const auto& s = choices[j][pick[j]];
                const int m = targets[j][pick[j]];
                moved.push_back({m, op.act_surjection(s, m, inners[j].label)});
                for (int v : s) sum_map.push_back(offset + v);
                offset += m;
              }
              const LabelRef lhs = op.substitute({k, r}, moved);
              const LabelRef base = op.substitute({k, r}, inners);
              const int rhs = op.act_surjection(sum_map, lhs.arity, base.label);
              if (lhs.label != rhs) {
                check.fail("inner action " + show(sum_map) + " on " + show(op, LabelRef{k, r}) + " with " +
                           show(op, inners) + ": " + show(op, lhs) + " != " + show(op, LabelRef{lhs.arity, rhs}));
              }
            });
          };
          rec(0);
        });
      }
    }
  }
  return report;
}

}  // namespace plonka
