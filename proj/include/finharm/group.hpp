#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "finharm/error.hpp"

namespace finharm {

using Elem = int;

/// Finite group stored as a dense Cayley table. Elements are the indices
/// 0..n-1 and index 0 is always the identity.
class GroupTable {
 public:
  static constexpr std::size_t kMaxOrder = 120;
  /// Cap for work that materializes |G|^2 x |G|^2 operators.
  static constexpr std::size_t kMaxSuperoperatorOrder = 24;

  /// Validates the group axioms, relabels so that the identity sits at
  /// index 0 and derives the inverse vector. Throws Error on any violation.
  static GroupTable from_table(std::string name, std::vector<std::string> labels,
                               const std::vector<std::vector<Elem>>& table);

  const std::string& name() const { return name_; }
  std::size_t order() const { return order_; }
  const std::vector<std::string>& elements() const { return labels_; }
  Elem identity() const { return 0; }

  Elem mul(Elem a, Elem b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  Elem inv(Elem a) const { return inverse_[a]; }
  /// a * b^{-1}
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  const std::vector<Elem>& inverse() const { return inverse_; }
  std::vector<std::vector<Elem>> table() const;

  bool is_abelian() const;
  int element_order(Elem a) const;

 private:
  GroupTable() = default;

  std::string name_;
  std::size_t order_ = 0;
  std::vector<std::string> labels_;
  std::vector<Elem> table_;
  std::vector<Elem> inverse_;
};

using GroupPtr = std::shared_ptr<const GroupTable>;

/// A subgroup as a sorted member list of its parent.
struct Subgroup {
  GroupPtr parent;
  std::vector<Elem> members;

  std::size_t order() const { return members.size(); }
  std::size_t index() const { return parent->order() / members.size(); }
  bool contains(Elem x) const { return std::binary_search(members.begin(), members.end(), x); }
  bool operator==(const Subgroup& o) const { return parent == o.parent && members == o.members; }
};

/// A one-dimensional unitary character of an abelian group.
struct Character {
  Eigen::VectorXcd values;
};

// -- construction -----------------------------------------------------------

struct Cyclic { std::size_t n; };
struct Dihedral { std::size_t n; };     // order 2n
struct Symmetric { std::size_t n; };    // n <= 5
struct Quaternion {};                   // Q8
struct DirectProduct { GroupPtr left, right; };

using GroupKind = std::variant<Cyclic, Dihedral, Symmetric, Quaternion, DirectProduct>;

inline GroupPtr make_group(const GroupKind& kind);

/// Parses builtin names: "Z6", "D4" (order 8), "S3", "Q8", and products
/// joined by 'x' such as "Z2xZ4". Throws Error(Schema) for anything else.
inline GroupPtr make_group(std::string_view name);

inline GroupPtr parse_group(const nlohmann::json& doc);
inline nlohmann::json to_json(const GroupTable& g);

// -- interrogation ------------------------------------------------------------

inline Subgroup generated_subgroup(const GroupPtr& g, const std::vector<Elem>& generators);
inline bool is_subgroup(const GroupTable& g, const std::vector<Elem>& members);

/// Every subgroup, ordered by (order, members).
inline std::vector<Subgroup> all_subgroups(const GroupPtr& g);

/// All |G| characters of an abelian group. For Z_n the k-th character is
/// j -> exp(2 pi i k j / n); index 0 is always the trivial character.
inline std::vector<Character> characters(const GroupTable& g);

// ===========================================================================
// implementation
// ===========================================================================

namespace detail {

inline std::string triple_str(Elem a, Elem b, Elem c) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
}

}  // namespace detail

inline GroupTable GroupTable::from_table(std::string name, std::vector<std::string> labels,
                                         const std::vector<std::vector<Elem>>& table) {
  const std::size_t n = table.size();
  if (n == 0) throw Error(ErrorKind::Schema, "empty table");
  if (n > kMaxOrder)
    throw Error(ErrorKind::SizeCap, "order " + std::to_string(n) + " > " + std::to_string(kMaxOrder));
  if (labels.size() != n)
    throw Error(ErrorKind::Schema, "expected " + std::to_string(n) + " element labels, got " +
                                       std::to_string(labels.size()));
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n)
      throw Error(ErrorKind::Schema, "row " + std::to_string(a) + " has length " +
                                         std::to_string(table[a].size()));
    for (std::size_t b = 0; b < n; ++b) {
      Elem v = table[a][b];
      if (v < 0 || static_cast<std::size_t>(v) >= n)
        throw Error(ErrorKind::Schema, "table[" + std::to_string(a) + "][" + std::to_string(b) +
                                           "] = " + std::to_string(v) + " out of range");
    }
  }

  Elem e = -1;
  for (std::size_t c = 0; c < n && e < 0; ++c) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x)
      ok = table[c][x] == static_cast<Elem>(x) && table[x][c] == static_cast<Elem>(x);
    if (ok) e = static_cast<Elem>(c);
  }
  if (e < 0) throw Error(ErrorKind::Identity, "no two-sided identity in table");

  std::vector<Elem> inverse(n, -1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] == e && table[b][a] == e) { inverse[a] = static_cast<Elem>(b); break; }
    if (inverse[a] < 0) throw Error(ErrorKind::Inverse, "element " + std::to_string(a) + " has no inverse");
  }

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw Error(ErrorKind::Associativity,
                      "(ab)c != a(bc) at triple " + detail::triple_str(Elem(a), Elem(b), Elem(c)));

  // relabel: swap e <-> 0
  std::vector<Elem> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[0], perm[e]);

  GroupTable g;
  g.name_ = std::move(name);
  g.order_ = n;
  g.labels_.resize(n);
  g.table_.assign(n * n, 0);
  g.inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    g.labels_[perm[a]] = labels[a];
    g.inverse_[perm[a]] = perm[inverse[a]];
    for (std::size_t b = 0; b < n; ++b) g.table_[perm[a] * n + perm[b]] = perm[table[a][b]];
  }
  return g;
}

inline std::vector<std::vector<Elem>> GroupTable::table() const {
  std::vector<std::vector<Elem>> t(order_, std::vector<Elem>(order_));
  for (std::size_t a = 0; a < order_; ++a)
    for (std::size_t b = 0; b < order_; ++b) t[a][b] = mul(Elem(a), Elem(b));
  return t;
}

inline bool GroupTable::is_abelian() const {
  for (std::size_t a = 0; a < order_; ++a)
    for (std::size_t b = a + 1; b < order_; ++b)
      if (mul(Elem(a), Elem(b)) != mul(Elem(b), Elem(a))) return false;
  return true;
}

inline int GroupTable::element_order(Elem a) const {
  int k = 1;
  for (Elem x = a; x != identity(); x = mul(x, a)) ++k;
  return k;
}

inline GroupPtr make_group(const GroupKind& kind) {
  auto check_cap = [](std::size_t order) {
    if (order == 0) throw Error(ErrorKind::Schema, "group parameters must be positive");
    if (order > GroupTable::kMaxOrder)
      throw Error(ErrorKind::SizeCap,
                  "order " + std::to_string(order) + " > " + std::to_string(GroupTable::kMaxOrder));
  };
  using Table = std::vector<std::vector<Elem>>;

  return std::visit(
      [&](const auto& k) -> GroupPtr {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Cyclic>) {
          check_cap(k.n);
          const std::size_t n = k.n;
          Table t(n, std::vector<Elem>(n));
          std::vector<std::string> labels(n);
          for (std::size_t a = 0; a < n; ++a) {
            labels[a] = std::to_string(a);
            for (std::size_t b = 0; b < n; ++b) t[a][b] = Elem((a + b) % n);
          }
          return std::make_shared<const GroupTable>(
              GroupTable::from_table("Z" + std::to_string(n), labels, t));
        } else if constexpr (std::is_same_v<K, Dihedral>) {
          // index j*n + k  <->  r^k s^j
          check_cap(2 * k.n);
          const std::size_t n = k.n, N = 2 * n;
          Table t(N, std::vector<Elem>(N));
          std::vector<std::string> labels(N);
          for (std::size_t a = 0; a < N; ++a) {
            const std::size_t ra = a % n, sa = a / n;
            labels[a] = "r^" + std::to_string(ra) + (sa ? " s" : "");
            for (std::size_t b = 0; b < N; ++b) {
              const std::size_t rb = b % n, sb = b / n;
              // r^ra s^sa r^rb s^sb = r^(ra +- rb) s^(sa+sb)
              const std::size_t r = sa ? (ra + n - rb) % n : (ra + rb) % n;
              t[a][b] = Elem(((sa + sb) % 2) * n + r);
            }
          }
          return std::make_shared<const GroupTable>(
              GroupTable::from_table("D" + std::to_string(n), labels, t));
        } else if constexpr (std::is_same_v<K, Symmetric>) {
          if (k.n == 0) throw Error(ErrorKind::Schema, "group parameters must be positive");
          if (k.n > 5) throw Error(ErrorKind::SizeCap, "symmetric degree " + std::to_string(k.n) + " > 5");
          // lexicographic permutations; (a*b)(i) = a(b(i))
          std::vector<std::vector<int>> perms;
          std::vector<int> p(k.n);
          std::iota(p.begin(), p.end(), 0);
          do perms.push_back(p);
          while (std::next_permutation(p.begin(), p.end()));
          const std::size_t N = perms.size();
          auto index_of = [&](const std::vector<int>& q) {
            return Elem(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
          };
          Table t(N, std::vector<Elem>(N));
          std::vector<std::string> labels(N);
          for (std::size_t a = 0; a < N; ++a) {
            for (int v : perms[a]) labels[a] += char('1' + v);
            for (std::size_t b = 0; b < N; ++b) {
              std::vector<int> c(k.n);
              for (std::size_t i = 0; i < k.n; ++i) c[i] = perms[a][perms[b][i]];
              t[a][b] = index_of(c);
            }
          }
          return std::make_shared<const GroupTable>(
              GroupTable::from_table("S" + std::to_string(k.n), labels, t));
        } else if constexpr (std::is_same_v<K, Quaternion>) {
          // index 4*s + u: s in {0,1} is the sign, u in {1,i,j,k}
          static constexpr int unit_mul[4][4] = {
              {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
          static constexpr int unit_sign[4][4] = {
              {0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
          static const char* names[4] = {"1", "i", "j", "k"};
          Table t(8, std::vector<Elem>(8));
          std::vector<std::string> labels(8);
          for (int a = 0; a < 8; ++a) {
            labels[a] = std::string(a / 4 ? "-" : "") + names[a % 4];
            for (int b = 0; b < 8; ++b) {
              const int u = a % 4, v = b % 4;
              const int s = (a / 4 + b / 4 + unit_sign[u][v]) % 2;
              t[a][b] = 4 * s + unit_mul[u][v];
            }
          }
          return std::make_shared<const GroupTable>(GroupTable::from_table("Q8", labels, t));
        } else {
          const GroupTable& A = *k.left;
          const GroupTable& B = *k.right;
          check_cap(A.order() * B.order());
          const std::size_t nb = B.order(), N = A.order() * nb;
          Table t(N, std::vector<Elem>(N));
          std::vector<std::string> labels(N);
          for (std::size_t x = 0; x < N; ++x) {
            labels[x] = "(" + A.elements()[x / nb] + "," + B.elements()[x % nb] + ")";
            for (std::size_t y = 0; y < N; ++y)
              t[x][y] = Elem(A.mul(Elem(x / nb), Elem(y / nb)) * nb + B.mul(Elem(x % nb), Elem(y % nb)));
          }
          return std::make_shared<const GroupTable>(
              GroupTable::from_table(A.name() + "x" + B.name(), labels, t));
        }
      },
      kind);
}

inline GroupPtr make_group(std::string_view name) {
  auto fail = [&] { return Error(ErrorKind::Schema, "unknown group kind '" + std::string(name) + "'"); };
  if (auto pos = name.find('x'); pos != std::string_view::npos)
    return make_group(DirectProduct{make_group(name.substr(0, pos)), make_group(name.substr(pos + 1))});
  if (name == "Q8") return make_group(Quaternion{});
  if (name.size() < 2) throw fail();
  std::size_t n = 0;
  for (char c : name.substr(1)) {
    if (c < '0' || c > '9') throw fail();
    n = n * 10 + std::size_t(c - '0');
    if (n > 100000) throw Error(ErrorKind::SizeCap, std::string(name));
  }
  switch (name[0]) {
    case 'Z': return make_group(Cyclic{n});
    case 'D': return make_group(Dihedral{n});
    case 'S': return make_group(Symmetric{n});
    default: throw fail();
  }
}

inline GroupPtr parse_group(const nlohmann::json& doc) {
  auto schema = [](const std::string& what) { return Error(ErrorKind::Schema, what); };
  if (!doc.is_object()) throw schema("group document must be an object");
  for (const char* key : {"name", "order", "elements", "table"})
    if (!doc.contains(key)) throw schema(std::string("missing key '") + key + "'");
  if (!doc["name"].is_string()) throw schema("'name' must be a string");
  if (!doc["order"].is_number_integer() || doc["order"].get<long long>() <= 0)
    throw schema("'order' must be a positive integer");
  const auto n = doc["order"].get<std::size_t>();
  if (n > GroupTable::kMaxOrder)
    throw Error(ErrorKind::SizeCap, "order " + std::to_string(n) + " > " + std::to_string(GroupTable::kMaxOrder));
  const auto& els = doc["elements"];
  if (!els.is_array() || els.size() != n) throw schema("'elements' must list exactly 'order' labels");
  std::vector<std::string> labels;
  for (const auto& l : els) {
    if (!l.is_string()) throw schema("element labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  const auto& tab = doc["table"];
  if (!tab.is_array() || tab.size() != n) throw schema("'table' must have 'order' rows");
  std::vector<std::vector<Elem>> table(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (!tab[a].is_array() || tab[a].size() != n)
      throw schema("row " + std::to_string(a) + " must have 'order' entries");
    for (std::size_t b = 0; b < n; ++b) {
      const auto& v = tab[a][b];
      if (!v.is_number_integer()) throw schema("table entries must be integers");
      const auto iv = v.get<long long>();
      if (iv < 0 || iv >= static_cast<long long>(n))
        throw schema("table[" + std::to_string(a) + "][" + std::to_string(b) + "] = " +
                     std::to_string(iv) + " out of range");
      table[a].push_back(static_cast<Elem>(iv));
    }
  }
  return std::make_shared<const GroupTable>(
      GroupTable::from_table(doc["name"].get<std::string>(), std::move(labels), table));
}

inline nlohmann::json to_json(const GroupTable& g) {
  return {{"name", g.name()}, {"order", g.order()}, {"elements", g.elements()}, {"table", g.table()}};
}

inline Subgroup generated_subgroup(const GroupPtr& g, const std::vector<Elem>& generators) {
  std::vector<Elem> gens;
  for (Elem s : generators) {
    if (s < 0 || static_cast<std::size_t>(s) >= g->order())
      throw Error(ErrorKind::Schema, "element index " + std::to_string(s) + " out of range");
    gens.push_back(s);
    gens.push_back(g->inv(s));
  }
  std::vector<char> seen(g->order(), 0);
  std::vector<Elem> queue{g->identity()};
  seen[g->identity()] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (Elem s : gens) {
      Elem y = g->mul(queue[head], s);
      if (!seen[y]) { seen[y] = 1; queue.push_back(y); }
    }
  }
  std::sort(queue.begin(), queue.end());
  return {g, std::move(queue)};
}

inline bool is_subgroup(const GroupTable& g, const std::vector<Elem>& members) {
  std::vector<char> in(g.order(), 0);
  for (Elem m : members) in[m] = 1;
  if (!in[g.identity()]) return false;
  for (Elem a : members) {
    if (!in[g.inv(a)]) return false;
    for (Elem b : members)
      if (!in[g.mul(a, b)]) return false;
  }
  return true;
}

inline std::vector<Subgroup> all_subgroups(const GroupPtr& g) {
  // every subgroup is a join of cyclic subgroups: close the cyclic ones under joins
  std::set<std::vector<Elem>> found;
  std::vector<std::vector<Elem>> list;
  auto add = [&](std::vector<Elem> m) {
    if (found.insert(m).second) list.push_back(std::move(m));
  };
  for (std::size_t x = 0; x < g->order(); ++x) add(generated_subgroup(g, {Elem(x)}).members);
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      std::vector<Elem> gens = list[i];
      gens.insert(gens.end(), list[j].begin(), list[j].end());
      add(generated_subgroup(g, gens).members);
    }
  }
  std::vector<Subgroup> out;
  for (const auto& m : found) out.push_back({g, m});
  std::stable_sort(out.begin(), out.end(),
                   [](const Subgroup& a, const Subgroup& b) { return a.order() < b.order(); });
  return out;
}

inline std::vector<Character> characters(const GroupTable& g) {
  if (!g.is_abelian()) throw Error(ErrorKind::Nonabelian, g.name());
  const std::size_t n = g.order();
  // Build characters by successive cyclic extensions H -> H<g>. A character
  // is stored as phases q(x) in [0,1) with chi(x) = exp(2 pi i q(x)).
  std::vector<char> in_h(n, 0);
  std::vector<Elem> h_members{g.identity()};
  in_h[g.identity()] = 1;
  std::vector<std::vector<double>> phases{std::vector<double>(n, 0.0)};

  for (std::size_t cand = 0; cand < n; ++cand) {
    if (in_h[cand]) continue;
    const Elem x = Elem(cand);
    int k = 1;
    Elem xk = x;
    while (!in_h[xk]) { xk = g.mul(xk, x); ++k; }

    std::vector<Elem> new_members;
    std::vector<std::pair<Elem, int>> decomposition;  // element -> (h, j) with element = h x^j
    Elem xj = g.identity();
    for (int j = 0; j < k; ++j) {
      for (Elem h : h_members) {
        Elem y = g.mul(h, xj);
        new_members.push_back(y);
        decomposition.emplace_back(h, j);
      }
      xj = g.mul(xj, x);
    }

    std::vector<std::vector<double>> extended;
    for (const auto& chi : phases) {
      for (int r = 0; r < k; ++r) {
        const double omega = (chi[xk] + r) / k;  // phase of chi'(x)
        std::vector<double> next(n, 0.0);
        for (std::size_t i = 0; i < new_members.size(); ++i) {
          const auto [h, j] = decomposition[i];
          double q = chi[h] + j * omega;
          next[new_members[i]] = q - std::floor(q);
        }
        extended.push_back(std::move(next));
      }
    }
    phases = std::move(extended);
    h_members = new_members;
    for (Elem y : h_members) in_h[y] = 1;
  }

  std::vector<Character> out;
  out.reserve(phases.size());
  for (const auto& q : phases) {
    Character c{Eigen::VectorXcd(n)};
    for (std::size_t x = 0; x < n; ++x) {
      // phases are multiples of 1/n; snap before exponentiating
      const double snapped = std::round(q[x] * double(n)) / double(n);
      c.values[x] = std::polar(1.0, 2.0 * std::numbers::pi * snapped);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace finharm
