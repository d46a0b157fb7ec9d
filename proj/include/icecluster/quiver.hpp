#pragma once

// Ice quivers: a finite quiver together with a (not necessarily full) frozen
// subquiver. Vertices are integer ids; the library convention is that the
// unfrozen vertices are 1..r and the frozen ones r+1..n.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/error.hpp"

namespace icecluster {

struct Vertex {
  int id = 0;
  bool frozen = false;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Arrow {
  std::string id;
  int src = 0;
  int tgt = 0;
  bool frozen = false;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

class IceQuiver {
 public:
  IceQuiver() = default;

  /// Vertices are kept sorted by id and arrows sorted by id. No validation
  /// happens here; see validate().
  IceQuiver(std::vector<Vertex> vertices, std::vector<Arrow> arrows)
      : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
    std::sort(vertices_.begin(), vertices_.end(),
              [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    std::sort(arrows_.begin(), arrows_.end(),
              [](const Arrow& a, const Arrow& b) { return a.id < b.id; });
  }

  /// n vertices, the last `frozen` of them frozen, no arrows.
  static IceQuiver with_vertices(int n, int frozen) {
    std::vector<Vertex> vs;
    for (int i = 1; i <= n; ++i) vs.push_back({i, i > n - frozen});
    return IceQuiver(std::move(vs), {});
  }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  std::size_t size() const { return vertices_.size(); }

  /// Number of unfrozen vertices.
  std::size_t rank() const {
    return static_cast<std::size_t>(std::count_if(
        vertices_.begin(), vertices_.end(),
        [](const Vertex& v) { return !v.frozen; }));
  }

  bool has_vertex(int id) const { return find_vertex(id) != nullptr; }

  bool is_frozen(int id) const {
    const Vertex* v = find_vertex(id);
    if (v == nullptr) {
      throw DomainError("unknown vertex " + std::to_string(id));
    }
    return v->frozen;
  }

  /// Position of a vertex in the id-sorted vertex list.
  std::size_t position(int id) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (vertices_[i].id == id) return i;
    }
    throw DomainError("unknown vertex " + std::to_string(id));
  }

  std::vector<int> unfrozen_ids() const {
    std::vector<int> out;
    for (const Vertex& v : vertices_) {
      if (!v.frozen) out.push_back(v.id);
    }
    return out;
  }

  std::vector<int> frozen_ids() const {
    std::vector<int> out;
    for (const Vertex& v : vertices_) {
      if (v.frozen) out.push_back(v.id);
    }
    return out;
  }

  const Arrow* find_arrow(const std::string& id) const {
    auto it = std::lower_bound(
        arrows_.begin(), arrows_.end(), id,
        [](const Arrow& a, const std::string& key) { return a.id < key; });
    if (it == arrows_.end() || it->id != id) return nullptr;
    return &*it;
  }

  const Arrow& arrow(const std::string& id) const {
    const Arrow* a = find_arrow(id);
    if (a == nullptr) throw DomainError("unknown arrow '" + id + "'");
    return *a;
  }

  /// Ids are 1..n with every unfrozen id below every frozen id.
  bool is_conventional() const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (vertices_[i].id != static_cast<int>(i) + 1) return false;
      if (i > 0 && vertices_[i - 1].frozen && !vertices_[i].frozen) {
        return false;
      }
    }
    return true;
  }

  /// Original labels recorded by normalized(); empty when the quiver was
  /// built in conventional numbering.
  const std::vector<int>& original_labels() const { return original_labels_; }

  /// Renumbers vertices to the convention (unfrozen 1..r in id order, then
  /// frozen r+1..n) and records the original labels.
  IceQuiver normalized() const {
    std::vector<int> order;
    for (const Vertex& v : vertices_) {
      if (!v.frozen) order.push_back(v.id);
    }
    for (const Vertex& v : vertices_) {
      if (v.frozen) order.push_back(v.id);
    }
    std::map<int, int> relabel;
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < order.size(); ++i) {
      relabel[order[i]] = static_cast<int>(i) + 1;
      vs.push_back({static_cast<int>(i) + 1, is_frozen(order[i])});
    }
    std::vector<Arrow> as = arrows_;
    for (Arrow& a : as) {
      a.src = relabel.at(a.src);
      a.tgt = relabel.at(a.tgt);
    }
    IceQuiver out(std::move(vs), std::move(as));
    bool identity = true;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i] != static_cast<int>(i) + 1) identity = false;
    }
    out.original_labels_ = identity && original_labels_.empty()
                               ? std::vector<int>{}
                               : std::move(order);
    return out;
  }

  IceQuiver with_arrows(std::vector<Arrow> arrows) const {
    IceQuiver out(vertices_, std::move(arrows));
    out.original_labels_ = original_labels_;
    return out;
  }

  /// Same vertices, every arrow reversed (ids kept).
  IceQuiver opposite() const {
    std::vector<Arrow> as = arrows_;
    for (Arrow& a : as) std::swap(a.src, a.tgt);
    return with_arrows(std::move(as));
  }

  /// Full subquiver on the unfrozen vertices (frozen vertices deleted).
  IceQuiver unfrozen_part() const {
    std::vector<Vertex> vs;
    for (const Vertex& v : vertices_) {
      if (!v.frozen) vs.push_back(v);
    }
    std::vector<Arrow> as;
    for (const Arrow& a : arrows_) {
      if (!is_frozen(a.src) && !is_frozen(a.tgt)) as.push_back(a);
    }
    return IceQuiver(std::move(vs), std::move(as));
  }

  friend bool operator==(const IceQuiver& a, const IceQuiver& b) {
    return a.vertices_ == b.vertices_ && a.arrows_ == b.arrows_;
  }

 private:
  const Vertex* find_vertex(int id) const {
    for (const Vertex& v : vertices_) {
      if (v.id == id) return &v;
    }
    return nullptr;
  }

  std::vector<Vertex> vertices_;
  std::vector<Arrow> arrows_;
  std::vector<int> original_labels_;
};

struct Diagnostic {
  std::string message;
  std::vector<std::string> arrows;
  std::vector<int> vertices;
};

/// Checks the structural invariants of an ice quiver: distinct ids, arrow
/// endpoints exist, frozen arrows run between frozen vertices.
inline std::vector<Diagnostic> validate(const IceQuiver& q) {
  std::vector<Diagnostic> out;
  std::set<int> seen_vertices;
  for (const Vertex& v : q.vertices()) {
    if (!seen_vertices.insert(v.id).second) {
      out.push_back({"duplicate vertex id", {}, {v.id}});
    }
  }
  std::set<std::string> seen_arrows;
  for (const Arrow& a : q.arrows()) {
    if (!seen_arrows.insert(a.id).second) {
      out.push_back({"duplicate arrow id", {a.id}, {}});
    }
    bool endpoints_ok = true;
    for (int v : {a.src, a.tgt}) {
      if (!seen_vertices.contains(v)) {
        out.push_back({"arrow endpoint is not a vertex", {a.id}, {v}});
        endpoints_ok = false;
      }
    }
    if (endpoints_ok && a.frozen) {
      std::vector<int> bad;
      if (!q.is_frozen(a.src)) bad.push_back(a.src);
      if (!q.is_frozen(a.tgt) && a.tgt != a.src) bad.push_back(a.tgt);
      if (!bad.empty()) {
        out.push_back(
            {"frozen arrow touches an unfrozen vertex", {a.id}, bad});
      }
    }
  }
  return out;
}

inline void require_valid(const IceQuiver& q) {
  auto diags = validate(q);
  if (!diags.empty()) {
    std::string msg = "invalid ice quiver: " + diags.front().message;
    for (const auto& a : diags.front().arrows) msg += " [arrow " + a + "]";
    for (int v : diags.front().vertices) {
      msg += " [vertex " + std::to_string(v) + "]";
    }
    throw DomainError(msg);
  }
}

/// Extended exchange matrix: rows are all vertices, columns the unfrozen
/// ones, both in id order.
struct ExchangeMatrix {
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<std::vector<long>> b;

  long at(int row_id, int col_id) const {
    auto r = std::find(rows.begin(), rows.end(), row_id);
    auto c = std::find(cols.begin(), cols.end(), col_id);
    if (r == rows.end() || c == cols.end()) {
      throw DomainError("exchange matrix index out of range");
    }
    return b[static_cast<std::size_t>(r - rows.begin())]
            [static_cast<std::size_t>(c - cols.begin())];
  }

  friend bool operator==(const ExchangeMatrix&,
                         const ExchangeMatrix&) = default;
};

/// b_ij = #(i -> j) - #(j -> i); arrows between two frozen vertices never
/// contribute (they cannot touch an unfrozen column anyway).
inline ExchangeMatrix exchange_matrix(const IceQuiver& q) {
  require_valid(q);
  ExchangeMatrix m;
  for (const Vertex& v : q.vertices()) m.rows.push_back(v.id);
  m.cols = q.unfrozen_ids();
  m.b.assign(m.rows.size(), std::vector<long>(m.cols.size(), 0));
  std::map<int, std::size_t> row_of;
  std::map<int, std::size_t> col_of;
  for (std::size_t i = 0; i < m.rows.size(); ++i) row_of[m.rows[i]] = i;
  for (std::size_t j = 0; j < m.cols.size(); ++j) col_of[m.cols[j]] = j;
  for (const Arrow& a : q.arrows()) {
    if (q.is_frozen(a.src) && q.is_frozen(a.tgt)) continue;
    if (a.src == a.tgt) continue;
    if (auto c = col_of.find(a.tgt); c != col_of.end()) {
      m.b[row_of.at(a.src)][c->second] += 1;
    }
    if (auto c = col_of.find(a.src); c != col_of.end()) {
      m.b[row_of.at(a.tgt)][c->second] -= 1;
    }
  }
  return m;
}

namespace detail {

struct ArrowCounts {
  // (src position, tgt position) -> (unfrozen count, frozen count)
  std::map<std::pair<std::size_t, std::size_t>, std::pair<int, int>> counts;

  std::pair<int, int> get(std::size_t s, std::size_t t) const {
    auto it = counts.find({s, t});
    return it == counts.end() ? std::pair<int, int>{0, 0} : it->second;
  }
};

inline ArrowCounts count_arrows(const IceQuiver& q) {
  ArrowCounts out;
  for (const Arrow& a : q.arrows()) {
    auto& c = out.counts[{q.position(a.src), q.position(a.tgt)}];
    (a.frozen ? c.second : c.first) += 1;
  }
  return out;
}

}  // namespace detail

inline constexpr std::size_t kIsomorphismVertexLimit = 10;

/// Searches for a vertex bijection q1 -> q2 preserving frozen states and the
/// multiset of (frozen, unfrozen) arrows between every ordered pair. Returns
/// the map as pairs (vertex of q1, vertex of q2).
inline std::optional<std::vector<std::pair<int, int>>>
quiver_equal_up_to_labels(const IceQuiver& q1, const IceQuiver& q2) {
  const std::size_t n = q1.size();
  if (n > kIsomorphismVertexLimit || q2.size() > kIsomorphismVertexLimit) {
    throw GuardError(
        "isomorphism search limited to 10 vertices; use an explicit "
        "bijection");
  }
  if (q2.size() != n || q1.arrows().size() != q2.arrows().size() ||
      q1.rank() != q2.rank()) {
    return std::nullopt;
  }
  const auto c1 = detail::count_arrows(q1);
  const auto c2 = detail::count_arrows(q2);

  using Signature = std::vector<int>;
  auto signature = [n](const detail::ArrowCounts& c, const IceQuiver& q,
                       std::size_t v) {
    int out_u = 0, out_f = 0, in_u = 0, in_f = 0;
    for (std::size_t w = 0; w < n; ++w) {
      auto o = c.get(v, w);
      auto i = c.get(w, v);
      out_u += o.first;
      out_f += o.second;
      in_u += i.first;
      in_f += i.second;
    }
    return Signature{q.vertices()[v].frozen ? 1 : 0, out_u, out_f, in_u,
                     in_f, c.get(v, v).first, c.get(v, v).second};
  };
  std::vector<Signature> s1(n), s2(n);
  for (std::size_t v = 0; v < n; ++v) {
    s1[v] = signature(c1, q1, v);
    s2[v] = signature(c2, q2, v);
  }

  std::vector<std::size_t> image(n, n);
  std::vector<bool> used(n, false);
  auto consistent = [&](std::size_t v) {
    for (std::size_t w = 0; w <= v; ++w) {
      if (c1.get(v, w) != c2.get(image[v], image[w])) return false;
      if (c1.get(w, v) != c2.get(image[w], image[v])) return false;
    }
    return true;
  };
  auto search = [&](auto&& self, std::size_t v) -> bool {
    if (v == n) return true;
    for (std::size_t cand = 0; cand < n; ++cand) {
      if (used[cand] || s1[v] != s2[cand]) continue;
      image[v] = cand;
      if (consistent(v)) {
        used[cand] = true;
        if (self(self, v + 1)) return true;
        used[cand] = false;
      }
    }
    image[v] = n;
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  std::vector<std::pair<int, int>> out;
  for (std::size_t v = 0; v < n; ++v) {
    out.emplace_back(q1.vertices()[v].id, q2.vertices()[image[v]].id);
  }
  return out;
}

/// Applies a vertex relabeling (old id -> new id); frozen states travel with
/// the vertices.
inline IceQuiver relabel_vertices(const IceQuiver& q,
                                  const std::map<int, int>& new_id) {
  std::vector<Vertex> vs;
  for (const Vertex& v : q.vertices()) vs.push_back({new_id.at(v.id), v.frozen});
  std::vector<Arrow> as = q.arrows();
  for (Arrow& a : as) {
    a.src = new_id.at(a.src);
    a.tgt = new_id.at(a.tgt);
  }
  return IceQuiver(std::move(vs), std::move(as));
}

}  // namespace icecluster
