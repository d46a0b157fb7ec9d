#pragma once

// Mutation of ice quivers with potential, at unfrozen vertices and at frozen
// sources and sinks.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "icecluster/error.hpp"
#include "icecluster/potential.hpp"
#include "icecluster/quiver.hpp"

namespace icecluster {

enum class MutationKind { unfrozen, frozen_source, frozen_sink };

inline std::string to_string(MutationKind k) {
  switch (k) {
    case MutationKind::unfrozen: return "unfrozen";
    case MutationKind::frozen_source: return "frozenSource";
    case MutationKind::frozen_sink: return "frozenSink";
  }
  return "?";
}

enum class FrozenRole { none, source, sink };

struct FrozenRoles {
  bool source = false;
  bool sink = false;
};

/// Both role flags of a frozen vertex. A frozen vertex without any incident
/// arrow is both a source and a sink.
inline FrozenRoles frozen_roles(const IceQuiver& q, int v) {
  if (!q.is_frozen(v)) {
    throw DomainError("vertex " + std::to_string(v) + " is not frozen");
  }
  FrozenRoles r{true, true};
  for (const Arrow& a : q.arrows()) {
    if (a.src == v && a.tgt == v) {
      r.source = r.sink = false;
      continue;
    }
    if (a.frozen) {
      if (a.tgt == v) r.source = false;  // F-arrow into v
      if (a.src == v) r.sink = false;    // F-arrow out of v
    } else {
      if (a.src == v) r.source = false;
      if (a.tgt == v) r.sink = false;
    }
  }
  return r;
}

inline FrozenRole detect_frozen_role(const IceQuiver& q, int v) {
  FrozenRoles r = frozen_roles(q, v);
  if (r.source) return FrozenRole::source;
  if (r.sink) return FrozenRole::sink;
  return FrozenRole::none;
}

struct CompositeArrow {
  std::string id;
  int src = 0;
  int tgt = 0;
};

struct ReversedArrow {
  std::string old_id;
  std::string new_id;
  bool frozen = false;
};

struct MutationRecord {
  int vertex = 0;
  MutationKind kind = MutationKind::unfrozen;
  std::vector<CompositeArrow> composite_arrows;
  std::vector<ReversedArrow> reversed_arrows;
};

struct PremutationResult {
  IceQuiver quiver;
  Potential potential;
  MutationRecord record;
};

namespace detail {

inline std::string fresh_id(std::string candidate,
                            const std::set<std::string>& taken) {
  while (taken.contains(candidate)) candidate += "'";
  return candidate;
}

inline MutationKind check_mutable(const IceQuiver& q, int v) {
  require_valid(q);
  for (const Arrow& a : q.arrows()) {
    if (a.src == v && a.tgt == v) {
      throw DomainError("cannot mutate at " + std::to_string(v) +
                        ": loop " + a.id);
    }
  }
  if (!q.is_frozen(v)) {
    for (const Arrow& a : q.arrows()) {
      if (a.frozen || a.tgt != v) continue;
      for (const Arrow& b : q.arrows()) {
        if (!b.frozen && b.src == v && b.tgt == a.src) {
          throw DomainError("cannot mutate at " + std::to_string(v) +
                            ": 2-cycle " + a.id + "/" + b.id);
        }
      }
    }
    return MutationKind::unfrozen;
  }
  FrozenRoles r = frozen_roles(q, v);
  if (r.source) return MutationKind::frozen_source;
  if (r.sink) return MutationKind::frozen_sink;
  throw DomainError("cannot mutate at frozen vertex " + std::to_string(v) +
                    ": it is neither a frozen source nor a frozen sink");
}

struct QuiverPremutation {
  IceQuiver quiver;
  MutationRecord record;
  // (beta, alpha) -> composite id
  std::map<std::pair<std::string, std::string>, std::string> composite_of;
};

inline QuiverPremutation premutate_quiver(const IceQuiver& q, int v) {
  QuiverPremutation out;
  out.record.vertex = v;
  out.record.kind = check_mutable(q, v);
  const bool unfrozen = out.record.kind == MutationKind::unfrozen;

  std::set<std::string> taken;
  for (const Arrow& a : q.arrows()) taken.insert(a.id);

  std::vector<Arrow> incoming, outgoing, arrows;
  for (const Arrow& a : q.arrows()) {
    if (a.tgt == v) {
      incoming.push_back(a);
    } else if (a.src == v) {
      outgoing.push_back(a);
    } else {
      arrows.push_back(a);
    }
  }
  for (const Arrow& alpha : incoming) {
    for (const Arrow& beta : outgoing) {
      std::string id = fresh_id("[" + beta.id + alpha.id + "]", taken);
      taken.insert(id);
      arrows.push_back({id, alpha.src, beta.tgt, false});
      out.record.composite_arrows.push_back({id, alpha.src, beta.tgt});
      out.composite_of[{beta.id, alpha.id}] = id;
    }
  }
  for (const auto* group : {&incoming, &outgoing}) {
    for (const Arrow& a : *group) {
      std::string id = fresh_id(a.id + "*", taken);
      taken.insert(id);
      const bool frozen = unfrozen ? false : a.frozen;
      arrows.push_back({id, a.tgt, a.src, frozen});
      out.record.reversed_arrows.push_back({a.id, id, frozen});
    }
  }
  out.quiver = q.with_arrows(std::move(arrows));
  return out;
}

}  // namespace detail

/// Steps (1)-(3) of mutation without the final reduction.
inline PremutationResult premutate(const IceQuiver& q, const Potential& w,
                                   int v) {
  check_potential(q, w);
  auto pq = detail::premutate_quiver(q, v);
  Potential out(w.degree_cap());
  for (const auto& [word, c] : w.terms()) {
    // rotate so that the term does not begin at v
    Word rotated = word;
    bool found = false;
    for (std::size_t k = 0; k < word.size(); ++k) {
      if (q.arrow(rotated.back()).src != v) {
        found = true;
        break;
      }
      std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    }
    if (!found) {
      throw DomainError("every rotation of " + word_to_string(word) +
                        " begins at " + std::to_string(v));
    }
    Word rewritten;
    for (std::size_t i = 0; i < rotated.size(); ++i) {
      const Arrow& a = q.arrow(rotated[i]);
      if (a.src == v && i + 1 < rotated.size()) {
        rewritten.push_back(pq.composite_of.at({rotated[i], rotated[i + 1]}));
        ++i;
      } else {
        rewritten.push_back(rotated[i]);
      }
    }
    out.add(rewritten, c);
  }
  std::map<std::string, std::string> star;
  for (const auto& r : pq.record.reversed_arrows) star[r.old_id] = r.new_id;
  for (const auto& [key, comp] : pq.composite_of) {
    const auto& [beta, alpha] = key;
    out.add({comp, star.at(alpha), star.at(beta)}, 1);
  }
  return {std::move(pq.quiver), std::move(out), std::move(pq.record)};
}

struct MutationResult {
  IceQuiver quiver;
  Potential potential;
  MutationRecord record;
  ReductionReport reduction;
};

/// Premutation followed by reduction.
inline MutationResult mutate(const IceQuiver& q, const Potential& w, int v) {
  auto pre = premutate(q, w, v);
  auto red = reduce_iqp(pre.quiver, pre.potential);
  return {std::move(red.quiver), std::move(red.potential),
          std::move(pre.record), std::move(red.report)};
}

/// Quiver-only mutation: premutation followed by cancelling 2-cycles of
/// unfrozen arrows. Frozen arrows never cancel.
inline IceQuiver mutate_quiver(const IceQuiver& q, int v) {
  auto pq = detail::premutate_quiver(q, v);
  std::map<std::pair<int, int>, std::vector<const Arrow*>> unfrozen_by_pair;
  for (const Arrow& a : pq.quiver.arrows()) {
    if (!a.frozen && a.src != a.tgt) {
      unfrozen_by_pair[{a.src, a.tgt}].push_back(&a);
    }
  }
  auto later_first = [](const Arrow* x, const Arrow* y) {
    if (x->id.size() != y->id.size()) return x->id.size() > y->id.size();
    return x->id > y->id;
  };
  std::set<std::string> drop;
  for (auto& [key, fwd] : unfrozen_by_pair) {
    if (key.first > key.second) continue;
    auto it = unfrozen_by_pair.find({key.second, key.first});
    if (it == unfrozen_by_pair.end()) continue;
    auto& back = it->second;
    std::sort(fwd.begin(), fwd.end(), later_first);
    std::sort(back.begin(), back.end(), later_first);
    const std::size_t k = std::min(fwd.size(), back.size());
    for (std::size_t i = 0; i < k; ++i) {
      drop.insert(fwd[i]->id);
      drop.insert(back[i]->id);
    }
  }
  std::vector<Arrow> kept;
  for (const Arrow& a : pq.quiver.arrows()) {
    if (!drop.contains(a.id)) kept.push_back(a);
  }
  return pq.quiver.with_arrows(std::move(kept));
}

struct RightEquivalence {
  std::vector<std::pair<int, int>> vertices;
  std::map<std::string, std::string> arrows;
  /// Arrows of the first quiver rescaled by -1.
  std::set<std::string> negated;
};

namespace detail {

/// Solves the GF(2) system rows·x = rhs; returns the set of 1-variables.
inline std::optional<std::vector<bool>> solve_gf2(
    std::vector<std::vector<bool>> rows, std::vector<bool> rhs,
    std::size_t nvars) {
  std::vector<bool> x(nvars, false);
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < nvars && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && !rows[p][c]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    std::swap(rhs[p], rhs[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r && rows[i][c]) {
        for (std::size_t j = 0; j < nvars; ++j) {
          rows[i][j] = rows[i][j] != rows[r][j];
        }
        rhs[i] = rhs[i] != rhs[r];
      }
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows.size(); ++i) {
    if (rhs[i]) return std::nullopt;
  }
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
  return x;
}

}  // namespace detail

/// Looks for a vertex bijection, a matching arrow bijection and signs
/// a -> ±a under which w1 becomes w2 termwise. Parallel arrows are matched
/// by trying every permutation (at most 5040 combinations in total).
inline std::optional<RightEquivalence> right_equivalent_by_relabeling(
    const IceQuiver& q1, const Potential& w1, const IceQuiver& q2,
    const Potential& w2) {
  auto iso = quiver_equal_up_to_labels(q1, q2);
  if (!iso) return std::nullopt;
  std::map<int, int> vmap(iso->begin(), iso->end());
  std::map<std::tuple<int, int, bool>, std::vector<std::string>> g1, g2;
  for (const Arrow& a : q1.arrows()) {
    g1[{vmap.at(a.src), vmap.at(a.tgt), a.frozen}].push_back(a.id);
  }
  for (const Arrow& a : q2.arrows()) g2[{a.src, a.tgt, a.frozen}].push_back(a.id);
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>
      groups;
  std::size_t combos = 1;
  for (auto& [key, ids] : g1) {
    auto it = g2.find(key);
    if (it == g2.end() || it->second.size() != ids.size()) return std::nullopt;
    std::sort(it->second.begin(), it->second.end());
    for (std::size_t k = 2; k <= ids.size(); ++k) combos *= k;
    if (combos > 5040) throw GuardError("too many parallel arrows to match");
    groups.emplace_back(ids, it->second);
  }
  std::vector<std::string> arrow_list;
  for (const Arrow& a : q1.arrows()) arrow_list.push_back(a.id);
  std::map<std::string, std::size_t> arrow_index;
  for (std::size_t i = 0; i < arrow_list.size(); ++i) {
    arrow_index[arrow_list[i]] = i;
  }

  auto try_map = [&](const std::map<std::string, std::string>& amap)
      -> std::optional<RightEquivalence> {
    if (w1.terms().size() != w2.terms().size()) return std::nullopt;
    std::vector<std::vector<bool>> rows;
    std::vector<bool> rhs;
    for (const auto& [word, c] : w1.terms()) {
      Word image;
      std::vector<bool> row(arrow_list.size(), false);
      for (const auto& a : word) {
        image.push_back(amap.at(a));
        const std::size_t i = arrow_index.at(a);
        row[i] = !row[i];
      }
      auto it = w2.terms().find(cyclic_normal_form(image));
      if (it == w2.terms().end() || abs(it->second) != abs(c)) {
        return std::nullopt;
      }
      rows.push_back(std::move(row));
      rhs.push_back(sgn(it->second) != sgn(c));
    }
    auto x = detail::solve_gf2(rows, rhs, arrow_list.size());
    if (!x) return std::nullopt;
    RightEquivalence out{*iso, amap, {}};
    for (std::size_t i = 0; i < arrow_list.size(); ++i) {
      if ((*x)[i]) out.negated.insert(arrow_list[i]);
    }
    return out;
  };

  std::map<std::string, std::string> amap;
  std::function<std::optional<RightEquivalence>(std::size_t)> rec =
      [&](std::size_t gi) -> std::optional<RightEquivalence> {
    if (gi == groups.size()) return try_map(amap);
    auto [from, to] = groups[gi];
    std::sort(to.begin(), to.end());
    do {
      for (std::size_t k = 0; k < from.size(); ++k) amap[from[k]] = to[k];
      if (auto r = rec(gi + 1)) return r;
    } while (std::next_permutation(to.begin(), to.end()));
    return std::nullopt;
  };
  return rec(0);
}

}  // namespace icecluster
