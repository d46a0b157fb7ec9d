#pragma once

// JSON encodings of quivers, potentials, representations, Laurent
// polynomials, seeds, morphisms and reports. Every exact number travels as a
// string.

#include <nlohmann/json.hpp>

#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/character.hpp"
#include "icecluster/error.hpp"
#include "icecluster/laurent.hpp"
#include "icecluster/linalg.hpp"
#include "icecluster/mutation.hpp"
#include "icecluster/potential.hpp"
#include "icecluster/quasi.hpp"
#include "icecluster/quiver.hpp"
#include "icecluster/rep.hpp"
#include "icecluster/seed.hpp"

namespace icecluster {

using Json = nlohmann::ordered_json;

/// Malformed or ill-typed JSON input.
class FormatError : public DomainError {
 public:
  using DomainError::DomainError;
};

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

/// Runs f, rethrowing type and key errors of the JSON library as
/// FormatError with the given context.
template <class F>
auto json_guard(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad ") + what + " JSON: " + e.what());
  }
}

inline Rational rational_of(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw FormatError("expected an exact number (string or integer), got " +
                    j.dump());
}

inline Integer integer_of(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) {
      throw FormatError("not an integer: " + j.get<std::string>());
    }
    return v;
  }
  throw FormatError("expected an integer, got " + j.dump());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quiver

inline Json to_json(const IceQuiver& q) {
  Json vs = Json::array(), as = Json::array();
  for (const Vertex& v : q.vertices()) {
    vs.push_back({{"id", v.id}, {"frozen", v.frozen}});
  }
  for (const Arrow& a : q.arrows()) {
    as.push_back(
        {{"id", a.id}, {"src", a.src}, {"tgt", a.tgt}, {"frozen", a.frozen}});
  }
  return {{"vertices", vs}, {"arrows", as}};
}

inline IceQuiver quiver_from_json(const Json& j) {
  return detail::json_guard("quiver", [&] {
    std::vector<Vertex> vs;
    std::vector<Arrow> as;
    for (const Json& v : j.at("vertices")) {
      vs.push_back({v.at("id").get<int>(), v.value("frozen", false)});
    }
    for (const Json& a : j.at("arrows")) {
      as.push_back({a.at("id").get<std::string>(), a.at("src").get<int>(),
                    a.at("tgt").get<int>(), a.value("frozen", false)});
    }
    IceQuiver q(std::move(vs), std::move(as));
    require_valid(q);
    return q;
  });
}

// ---------------------------------------------------------------------------
// Potential

inline Json to_json(const Potential& w) {
  Json terms = Json::array();
  for (const auto& [cycle, c] : w.terms()) {
    terms.push_back({{"coeff", c.get_str()}, {"cycle", cycle}});
  }
  return {{"degreeCap", w.degree_cap()}, {"terms", terms}};
}

inline Potential potential_from_json(const Json& j) {
  return detail::json_guard("potential", [&] {
    Potential w(j.value("degreeCap", kDefaultDegreeCap));
    for (const Json& t : j.at("terms")) {
      w.add(t.at("cycle").get<Word>(), detail::rational_of(t.at("coeff")));
    }
    return w;
  });
}

// ---------------------------------------------------------------------------
// Representations

inline Json to_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).get_str());
    rows.push_back(row);
  }
  return rows;
}

inline Json to_json(const QuiverRep& r) {
  Json maps = Json::object();
  for (const auto& [id, m] : r.maps) maps[id] = to_json(m);
  return {{"dims", r.dims},
          {"maps", maps},
          {"orientation", r.orientation == Orientation::left ? "left" : "right"}};
}

/// Map shapes are inferred from dims and the quiver when a matrix is empty.
inline QuiverRep rep_from_json(const Json& j, const IceQuiver& q,
                               Orientation fallback = Orientation::left) {
  return detail::json_guard("representation", [&] {
    QuiverRep r;
    r.dims = j.at("dims").get<std::vector<std::size_t>>();
    r.orientation = fallback;
    if (j.contains("orientation")) {
      const auto o = j.at("orientation").get<std::string>();
      if (o == "left") {
        r.orientation = Orientation::left;
      } else if (o == "right") {
        r.orientation = Orientation::right;
      } else {
        throw FormatError("orientation must be \"left\" or \"right\"");
      }
    }
    if (j.contains("maps")) {
      for (const auto& [id, rows] : j.at("maps").items()) {
        const Arrow* a = q.find_arrow(id);
        if (a == nullptr) throw FormatError("map for unknown arrow " + id);
        std::size_t nr = rows.size(), nc = nr == 0 ? 0 : rows[0].size();
        if (nr == 0 && r.dims.size() == q.size()) {
          auto [from, to] = map_ends(*a, r.orientation);
          nr = r.dims[q.position(to)];
          nc = r.dims[q.position(from)];
        }
        RatMatrix m(nr, nc);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != nc) {
            throw FormatError("ragged matrix for arrow " + id);
          }
          for (std::size_t k = 0; k < nc; ++k) {
            m(i, k) = detail::rational_of(rows[i][k]);
          }
        }
        r.maps.emplace(id, std::move(m));
      }
    }
    return r;
  });
}

// ---------------------------------------------------------------------------
// Laurent polynomials

inline Json to_json(const LaurentPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    terms.push_back({{"coeff", c.get_str()}, {"exp", e}});
  }
  return terms;
}

inline LaurentPoly laurent_from_json(const Json& j, std::size_t n) {
  return detail::json_guard("Laurent", [&] {
    LaurentPoly p(n);
    for (const Json& t : j) {
      auto e = t.at("exp").get<Exponent>();
      if (e.size() != n) {
        throw FormatError("exponent vector of length " +
                          std::to_string(e.size()) + ", expected " +
                          std::to_string(n));
      }
      p.add_term(e, detail::integer_of(t.at("coeff")));
    }
    return p;
  });
}

/// Term list plus the fraction form, keyed by variable name.
inline Json variable_json(const std::string& name, const LaurentPoly& p,
                          const std::vector<std::string>& names) {
  return {{"name", name},
          {"terms", to_json(p)},
          {"fraction", p.to_fraction_string(names)}};
}

// ---------------------------------------------------------------------------
// Seeds

inline Json to_json(const Seed& s) {
  Json cluster = Json::array();
  for (const auto& v : s.cluster) cluster.push_back(to_json(v));
  return {{"quiver", to_json(s.quiver)},
          {"names", s.names()},
          {"cluster", cluster},
          {"treeAddress", s.tree_address}};
}

inline Seed seed_from_json(const Json& j) {
  return detail::json_guard("seed", [&] {
    Seed s;
    s.quiver = quiver_from_json(j.at("quiver"));
    require_conventional(s.quiver);
    if (j.contains("cluster")) {
      for (const Json& t : j.at("cluster")) {
        s.cluster.push_back(laurent_from_json(t, s.n()));
      }
      if (s.cluster.size() != s.n()) {
        throw FormatError("cluster has " + std::to_string(s.cluster.size()) +
                          " entries, quiver has " + std::to_string(s.n()) +
                          " vertices");
      }
    } else {
      s.cluster = initial_seed(s.quiver).cluster;
    }
    if (j.contains("treeAddress")) {
      s.tree_address = j.at("treeAddress").get<std::vector<int>>();
    }
    return s;
  });
}

inline Json hatted_y_json(const Seed& s) {
  Json out = Json::array();
  const auto names = s.names();
  for (int j : s.quiver.unfrozen_ids()) {
    out.push_back(variable_json("yhat" + std::to_string(j), hatted_y(s, j),
                                names));
  }
  return out;
}

/// One compact JSON object per seed.
inline std::string registry_json_lines(const PatternRegistry& reg) {
  std::ostringstream out;
  for (const Seed& s : reg.seeds) out << to_json(s).dump() << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Mutation and reduction records

inline Json to_json(const MutationRecord& r) {
  Json comp = Json::array(), rev = Json::array();
  for (const auto& c : r.composite_arrows) {
    comp.push_back({{"id", c.id}, {"src", c.src}, {"tgt", c.tgt}});
  }
  for (const auto& a : r.reversed_arrows) {
    rev.push_back({{"old", a.old_id}, {"new", a.new_id}, {"frozen", a.frozen}});
  }
  return {{"vertex", r.vertex},
          {"kind", to_string(r.kind)},
          {"compositeArrows", comp},
          {"reversedArrows", rev}};
}

inline Json to_json(const ReductionReport& r) {
  Json elim = Json::array(), quad = Json::array();
  for (const auto& [a, b] : r.eliminated) elim.push_back({a, b});
  for (const auto& w : r.surviving_quadratic) quad.push_back(w);
  return {{"eliminated", elim},
          {"survivingQuadratic", quad},
          {"reduced", r.reduced},
          {"rounds", r.rounds}};
}

// ---------------------------------------------------------------------------
// Morphisms and verification

/// {"source": quiver, "target": quiver, "images": {name: term list}}.
/// Variables without an image are sent to the same-named target variable.
inline QuasiMorphism morphism_from_json(const Json& j) {
  return detail::json_guard("morphism", [&] {
    Seed src = initial_seed(quiver_from_json(j.at("source")));
    Seed tgt = j.contains("target") ? initial_seed(quiver_from_json(j.at("target")))
                                    : src;
    QuasiMorphism m{src, tgt, {}};
    const auto names = src.names();
    const auto tnames = tgt.names();
    const Json& images = j.at("images");
    for (const auto& [name, _] : images.items()) {
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw FormatError("image for unknown variable " + name);
      }
    }
    for (std::size_t i = 0; i < src.n(); ++i) {
      if (images.contains(names[i])) {
        m.images.push_back(laurent_from_json(images.at(names[i]), tgt.n()));
        continue;
      }
      auto it = std::find(tnames.begin(), tnames.end(), names[i]);
      if (it == tnames.end()) {
        throw FormatError("no image for " + names[i]);
      }
      m.images.push_back(tgt.cluster[static_cast<std::size_t>(it - tnames.begin())]);
    }
    return m;
  });
}

inline Json to_json(const QuasiMorphism& m) {
  Json images = Json::object();
  const auto names = m.source.names();
  for (std::size_t i = 0; i < m.images.size(); ++i) {
    images[names[i]] = to_json(m.images[i]);
  }
  return {{"source", to_json(m.source.quiver)},
          {"target", to_json(m.target.quiver)},
          {"images", images}};
}

inline Json to_json(const ConditionResult& c) {
  return {{"status", to_string(c.status)}, {"witness", c.witness}};
}

inline Json to_json(const VerificationReport& r) {
  return {{"conditionA", to_json(r.a)},
          {"conditionB", to_json(r.b)},
          {"conditionC", to_json(r.c)},
          {"depthChecked", r.depth_checked},
          {"complete", r.complete},
          {"pass", r.pass()}};
}

}  // namespace icecluster
