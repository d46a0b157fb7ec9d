#pragma once

// Seeds, exchange mutation, hatted y-variables, specialization of frozen
// variables and breadth-first exploration of seed patterns.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/error.hpp"
#include "icecluster/laurent.hpp"
#include "icecluster/mutation.hpp"
#include "icecluster/quiver.hpp"

namespace icecluster {

struct Seed {
  IceQuiver quiver;
  std::vector<LaurentPoly> cluster;  // indexed by vertex id - 1
  std::vector<int> tree_address;

  std::size_t n() const { return quiver.size(); }
  std::size_t r() const { return quiver.rank(); }

  std::vector<std::string> names() const {
    return default_variable_names(n(), r());
  }

  const LaurentPoly& var(int id) const {
    return cluster.at(static_cast<std::size_t>(id - 1));
  }

  /// Same cluster and same extended exchange matrix; the tree address and
  /// arrow ids are ignored.
  friend bool operator==(const Seed& a, const Seed& b) {
    return a.cluster == b.cluster &&
           exchange_matrix(a.quiver) == exchange_matrix(b.quiver);
  }
};

inline void require_conventional(const IceQuiver& q) {
  if (!q.is_conventional()) {
    throw DomainError(
        "seed quivers need ids 1..n with unfrozen vertices first; "
        "normalize the quiver");
  }
}

/// The initial seed: cluster (x1, ..., xr, p1, ..., p(n-r)).
inline Seed initial_seed(const IceQuiver& q) {
  require_valid(q);
  require_conventional(q);
  Seed s{q, {}, {}};
  for (std::size_t i = 0; i < q.size(); ++i) {
    s.cluster.push_back(LaurentPoly::variable(q.size(), i));
  }
  return s;
}

/// Both monomials of the exchange relation at k.
inline std::pair<LaurentPoly, LaurentPoly> exchange_monomials(const Seed& s,
                                                              int k) {
  LaurentPoly out = LaurentPoly::constant(s.n(), 1);
  LaurentPoly in = LaurentPoly::constant(s.n(), 1);
  for (const Arrow& a : s.quiver.arrows()) {
    if (a.src == k && a.tgt != k) out *= s.var(a.tgt);
    if (a.tgt == k && a.src != k) in *= s.var(a.src);
  }
  return {std::move(out), std::move(in)};
}

inline Seed mutate_seed(const Seed& s, int k) {
  if (!s.quiver.has_vertex(k)) {
    throw DomainError("no vertex " + std::to_string(k));
  }
  if (s.quiver.is_frozen(k)) {
    throw DomainError("cannot exchange the frozen variable at " +
                      std::to_string(k));
  }
  auto [out, in] = exchange_monomials(s, k);
  Seed t{mutate_quiver(s.quiver, k), s.cluster, s.tree_address};
  t.cluster[static_cast<std::size_t>(k - 1)] = (out + in).exact_div(s.var(k));
  t.tree_address.push_back(k);
  return t;
}

/// Exponents b_ij (i over all vertices) of the hatted variable at j.
inline std::vector<long> hatted_y_exponents(const Seed& s, int j) {
  if (!s.quiver.has_vertex(j) || s.quiver.is_frozen(j)) {
    throw DomainError("hatted y needs an unfrozen vertex, got " +
                      std::to_string(j));
  }
  ExchangeMatrix b = exchange_matrix(s.quiver);
  std::vector<long> e;
  for (int i : b.rows) e.push_back(b.at(i, j));
  return e;
}

/// prod_i x_i(t)^{b_ij}. Negative powers are only allowed on monomial
/// cluster entries, so the result stays a Laurent polynomial.
inline LaurentPoly hatted_y(const Seed& s, int j) {
  std::vector<long> e = hatted_y_exponents(s, j);
  LaurentPoly y = LaurentPoly::constant(s.n(), 1);
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] > 0) {
      y *= s.cluster[i].pow(static_cast<unsigned>(e[i]));
    } else if (e[i] < 0) {
      const LaurentPoly& x = s.cluster[i];
      if (!x.is_monomial()) {
        throw DomainError("hatted y at " + std::to_string(j) +
                          " is not a Laurent polynomial in the initial "
                          "variables");
      }
      y *= x.monomial_inverse().pow(static_cast<unsigned>(-e[i]));
    }
  }
  return y;
}

/// Sends every frozen variable to 1.
inline LaurentPoly specialize_frozen(const LaurentPoly& p, std::size_t r) {
  return p.specialize(r);
}

/// The seed of the coefficient-free pattern: frozen vertices deleted, the
/// unfrozen entries specialized.
inline Seed specialize_seed(const Seed& s) {
  Seed t{s.quiver.unfrozen_part(), {}, s.tree_address};
  for (std::size_t i = 0; i < s.r(); ++i) {
    t.cluster.push_back(specialize_frozen(s.cluster[i], s.r()));
  }
  return t;
}

/// Sorted keys of the unfrozen cluster entries. Frozen entries are fixed
/// along a pattern, so they do not enter.
inline std::string seed_key(const std::vector<LaurentPoly>& cluster,
                            std::size_t r) {
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < r; ++i) keys.push_back(cluster[i].key());
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) out += k + ";";
  return out;
}

inline std::string seed_key(const Seed& s) {
  return seed_key(s.cluster, s.r());
}

inline constexpr int kDefaultDepthGuard = 8;

/// The depth guard; ICECLUSTER_DEPTH_GUARD overrides the default.
inline int depth_guard() {
  if (const char* env = std::getenv("ICECLUSTER_DEPTH_GUARD")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0 && v <= 64) {
      return static_cast<int>(v);
    }
  }
  return kDefaultDepthGuard;
}

struct PatternRegistry {
  std::vector<Seed> seeds;
  /// Distinct unfrozen cluster variables in order of discovery.
  std::vector<LaurentPoly> cluster_variables;
  /// A full BFS level produced no new seed (only meaningful with dedupe).
  bool stabilized = false;
  int depth = 0;

  const Seed* find(const std::vector<LaurentPoly>& cluster,
                   std::size_t r) const {
    auto it = by_key_.find(seed_key(cluster, r));
    return it == by_key_.end() ? nullptr : &seeds[it->second];
  }

  bool has_variable(const LaurentPoly& p) const {
    return variable_keys_.contains(p.key());
  }

  /// Inserts unless a seed with the same key is present (when deduping).
  bool insert(Seed s, bool dedupe) {
    std::string key = seed_key(s);
    if (dedupe && by_key_.contains(key)) return false;
    by_key_.try_emplace(key, seeds.size());
    for (std::size_t i = 0; i < s.r(); ++i) {
      if (variable_keys_.insert(s.cluster[i].key()).second) {
        cluster_variables.push_back(s.cluster[i]);
      }
    }
    seeds.push_back(std::move(s));
    return true;
  }

 private:
  std::map<std::string, std::size_t> by_key_;
  std::set<std::string> variable_keys_;
};

/// Breadth-first walk of the mutation tree from root. Without dedupe the
/// registry holds one seed per tree vertex up to the depth. Tree addresses
/// extend the root's own address.
inline PatternRegistry enumerate_pattern(const Seed& root, int depth,
                                         bool dedupe = true) {
  const int guard = depth_guard();
  if (depth < 0 || depth > guard) {
    throw GuardError("pattern depth " + std::to_string(depth) +
                     " exceeds the guard " + std::to_string(guard));
  }
  PatternRegistry reg;
  reg.insert(root, dedupe);
  std::vector<std::size_t> frontier{0};
  const std::vector<int> unfrozen = root.quiver.unfrozen_ids();
  const std::size_t base = root.tree_address.size();
  for (int level = 1; level <= depth; ++level) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      for (int k : unfrozen) {
        const Seed& s = reg.seeds[idx];
        if (s.tree_address.size() > base && s.tree_address.back() == k) continue;
        Seed t = mutate_seed(s, k);
        if (reg.insert(std::move(t), dedupe)) {
          next.push_back(reg.seeds.size() - 1);
        }
      }
    }
    reg.depth = level;
    if (next.empty()) {
      reg.stabilized = dedupe;
      break;
    }
    frontier = std::move(next);
  }
  if (depth == 0 || unfrozen.empty()) reg.stabilized = unfrozen.empty();
  return reg;
}

}  // namespace icecluster
