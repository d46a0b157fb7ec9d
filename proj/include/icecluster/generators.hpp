#pragma once

// Built-in ice quivers with potential: the triangle example, triangulated
// polygons and rectangular grids.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/error.hpp"
#include "icecluster/potential.hpp"
#include "icecluster/quiver.hpp"

namespace icecluster {

struct CatalogEntry {
  std::string name;
  IceQuiver quiver;
  Potential potential;
  /// Golden values by name, as printed strings.
  std::map<std::string, std::string> expected;
  bool degenerate = false;
};

/// One unfrozen vertex 1 and frozen vertices 2, 3 with arrows a: 2 -> 1,
/// b: 3 -> 2 (frozen) and c: 1 -> 3, and potential abc.
inline CatalogEntry triangle_example() {
  IceQuiver q({{1, false}, {2, true}, {3, true}},
              {{"a", 2, 1, false}, {"b", 3, 2, true}, {"c", 1, 3, false}});
  Potential w;
  w.add({"a", "b", "c"}, 1);
  return {"triangle",
          q,
          w,
          {{"x1'", "(p1 + p2)/x1"}, {"yhat1", "p1/p2"}, {"dimJ", "7"}},
          false};
}

using Diagonal = std::pair<int, int>;

inline std::vector<Diagonal> fan_triangulation(int n) {
  std::vector<Diagonal> out;
  for (int j = 3; j < n; ++j) out.emplace_back(1, j);
  return out;
}

namespace detail {

inline bool crossing(Diagonal a, Diagonal b) {
  auto [p, q] = a;
  auto [r, s] = b;
  return (p < r && r < q && q < s) || (r < p && p < s && s < q);
}

}  // namespace detail

/// Quiver of a triangulated n-gon: unfrozen vertices are the diagonals (in
/// sorted order), frozen vertices the boundary edges (1,2), ..., (n,1).
/// Inside each triangle i<j<k the arrows run (ij) -> (ik) -> (jk) -> (ij)
/// and the 3-cycle is a potential term. Arrows between two boundary edges
/// are unfrozen.
inline CatalogEntry polygon_ice_quiver(int n, std::vector<Diagonal> diags) {
  if (n < 4) throw DomainError("a polygon needs n >= 4 to have diagonals");
  if (n > 32) throw GuardError("polygon size limited to 32");
  for (auto& [i, j] : diags) {
    if (i > j) std::swap(i, j);
    if (i < 1 || j > n || j - i < 2 || (i == 1 && j == n)) {
      throw DomainError("(" + std::to_string(i) + "," + std::to_string(j) +
                        ") is not a diagonal of the " + std::to_string(n) +
                        "-gon");
    }
  }
  std::sort(diags.begin(), diags.end());
  if (std::adjacent_find(diags.begin(), diags.end()) != diags.end()) {
    throw DomainError("repeated diagonal");
  }
  if (static_cast<int>(diags.size()) != n - 3) {
    throw DomainError("a triangulation of the " + std::to_string(n) +
                      "-gon has " + std::to_string(n - 3) + " diagonals");
  }
  for (std::size_t a = 0; a < diags.size(); ++a) {
    for (std::size_t b = a + 1; b < diags.size(); ++b) {
      if (detail::crossing(diags[a], diags[b])) {
        throw DomainError("diagonals (" + std::to_string(diags[a].first) +
                          "," + std::to_string(diags[a].second) + ") and (" +
                          std::to_string(diags[b].first) + "," +
                          std::to_string(diags[b].second) + ") cross");
      }
    }
  }
  std::map<Diagonal, int> side;
  std::vector<Vertex> vs;
  int id = 0;
  for (const auto& d : diags) {
    side[d] = ++id;
    vs.push_back({id, false});
  }
  for (int i = 1; i <= n; ++i) {
    Diagonal e = i < n ? Diagonal{i, i + 1} : Diagonal{1, n};
    side[e] = ++id;
    vs.push_back({id, true});
  }
  std::vector<Arrow> as;
  Potential w;
  int arrow_no = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      for (int k = j + 1; k <= n; ++k) {
        auto ij = side.find({i, j});
        auto jk = side.find({j, k});
        auto ik = side.find({i, k});
        if (ij == side.end() || jk == side.end() || ik == side.end()) continue;
        const std::string a1 = "a" + std::to_string(++arrow_no);
        const std::string a2 = "a" + std::to_string(++arrow_no);
        const std::string a3 = "a" + std::to_string(++arrow_no);
        as.push_back({a1, ij->second, ik->second, false});
        as.push_back({a2, ik->second, jk->second, false});
        as.push_back({a3, jk->second, ij->second, false});
        w.add({a3, a2, a1}, 1);
      }
    }
  }
  CatalogEntry e{"polygon" + std::to_string(n), IceQuiver(vs, as), w, {}, false};
  e.expected["unfrozen"] = std::to_string(n - 3);
  e.expected["frozen"] = std::to_string(n);
  return e;
}

inline constexpr int kGridCellLimit = 30;

/// k x (n-k) grid. Cells in the last row or last column are frozen. Unit
/// square (i,j) is traversed clockwise when i+j is even and contributes its
/// 4-cycle with sign +1, counterclockwise with sign -1 otherwise. Edges
/// between two frozen cells are frozen arrows.
inline CatalogEntry grid_ice_quiver(int k, int n) {
  if (k < 1 || k >= n) throw DomainError("grid needs 1 <= k < n");
  const int m = n - k;
  if (k * m > kGridCellLimit) {
    throw GuardError("grid has " + std::to_string(k * m) +
                     " cells, more than the limit 30");
  }
  auto frozen = [&](int i, int j) { return i == k || j == m; };
  std::map<std::pair<int, int>, int> vid;
  std::vector<Vertex> vs;
  int id = 0;
  for (bool f : {false, true}) {
    for (int i = 1; i <= k; ++i) {
      for (int j = 1; j <= m; ++j) {
        if (frozen(i, j) != f) continue;
        vid[{i, j}] = ++id;
        vs.push_back({id, f});
      }
    }
  }
  // edge name and direction, keyed by unordered cell pair
  using Cell = std::pair<int, int>;
  std::map<std::pair<Cell, Cell>, std::string> edge_name;
  std::map<std::pair<Cell, Cell>, bool> edge_forward;
  auto edge_key = [](Cell a, Cell b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  };
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= m; ++j) {
      std::string tag = std::to_string(i) + "_" + std::to_string(j);
      if (j < m) edge_name[edge_key({i, j}, {i, j + 1})] = "h" + tag;
      if (i < k) edge_name[edge_key({i, j}, {i + 1, j})] = "v" + tag;
    }
  }
  Potential w;
  for (int i = 1; i < k; ++i) {
    for (int j = 1; j < m; ++j) {
      std::vector<Cell> cyc{{i, j}, {i, j + 1}, {i + 1, j + 1}, {i + 1, j}};
      const bool clockwise = (i + j) % 2 == 0;
      if (!clockwise) std::reverse(cyc.begin(), cyc.end());
      Word word;
      for (std::size_t t = 0; t < 4; ++t) {
        Cell from = cyc[t];
        Cell to = cyc[(t + 1) % 4];
        auto key = edge_key(from, to);
        edge_forward[key] = from == key.first;
        word.insert(word.begin(), edge_name.at(key));
      }
      w.add(word, clockwise ? 1 : -1);
    }
  }
  std::vector<Arrow> as;
  for (const auto& [key, name] : edge_name) {
    auto it = edge_forward.find(key);
    const bool fwd = it == edge_forward.end() || it->second;
    Cell from = fwd ? key.first : key.second;
    Cell to = fwd ? key.second : key.first;
    as.push_back({name, vid.at(from), vid.at(to),
                  frozen(from.first, from.second) &&
                      frozen(to.first, to.second)});
  }
  CatalogEntry e{"grid" + std::to_string(k) + "_" + std::to_string(n),
                 IceQuiver(vs, as), w, {}, false};
  const int unfrozen = (k - 1) * (m - 1);
  e.degenerate = unfrozen == 0;
  e.expected["unfrozen"] = std::to_string(unfrozen);
  e.expected["frozen"] = std::to_string(k * m - unfrozen);
  return e;
}

/// The worked examples used by property checks.
inline std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;
  out.push_back(triangle_example());
  for (int n : {4, 5, 6}) out.push_back(polygon_ice_quiver(n, fan_triangulation(n)));
  out.push_back(grid_ice_quiver(2, 4));
  out.push_back(grid_ice_quiver(2, 5));
  out.push_back(grid_ice_quiver(3, 6));
  return out;
}

}  // namespace icecluster
