#pragma once

// Mutation sessions with replayable history, and a transport-free handler
// for the JSON/HTTP surface.

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "icecluster/character.hpp"
#include "icecluster/error.hpp"
#include "icecluster/io.hpp"
#include "icecluster/mutation.hpp"
#include "icecluster/quasi.hpp"
#include "icecluster/seed.hpp"

namespace icecluster {

/// A mutation request that the current quiver does not allow.
class IllegalMutation : public DomainError {
 public:
  IllegalMutation(const std::string& msg, Json witness)
      : DomainError(msg), witness(std::move(witness)) {}
  Json witness;
};

struct MutationEvent {
  int vertex = 0;
  /// "plus" or "minus" when the caller pins the frozen role, else empty.
  std::string role;
};

struct MutationOutcome {
  MutationKind kind = MutationKind::unfrozen;
  Json exchange;  // exchange relation (unfrozen) or psi (frozen)
};

class Session {
 public:
  Session(std::string id, Seed root, Potential potential)
      : id_(std::move(id)),
        root_(std::move(root)),
        potential_(std::move(potential)),
        current_(root_) {}

  const std::string& id() const { return id_; }
  const Seed& root() const { return root_; }
  const Seed& current() const { return current_; }
  const Potential& potential() const { return potential_; }
  const std::vector<MutationEvent>& history() const { return history_; }

  /// Unfrozen vertices exchange their variable; frozen sources and sinks
  /// mutate the quiver only and report the psi map into the old pattern.
  MutationOutcome mutate(const MutationEvent& ev) {
    auto [next, outcome] = step(current_, ev);
    current_ = std::move(next);
    history_.push_back(ev);
    return outcome;
  }

  void undo() {
    if (history_.empty()) throw DomainError("nothing to undo");
    history_.pop_back();
    current_ = replay(root_, history_);
  }

  static Seed replay(const Seed& root, const std::vector<MutationEvent>& h) {
    Seed s = root;
    for (const auto& ev : h) s = step(s, ev).first;
    return s;
  }

  static std::pair<Seed, MutationOutcome> step(const Seed& s,
                                               const MutationEvent& ev) {
    const int v = ev.vertex;
    if (!s.quiver.has_vertex(v)) {
      throw IllegalMutation("no vertex " + std::to_string(v),
                            {{"vertex", v}});
    }
    if (!ev.role.empty() && ev.role != "plus" && ev.role != "minus") {
      throw FormatError("role must be \"plus\" or \"minus\"");
    }
    MutationKind kind;
    try {
      kind = detail::check_mutable(s.quiver, v);
    } catch (const DomainError& e) {
      throw IllegalMutation(e.what(), role_witness(s.quiver, v));
    }
    const auto names = s.names();
    if (kind == MutationKind::unfrozen) {
      if (!ev.role.empty()) {
        throw IllegalMutation("vertex " + std::to_string(v) +
                                  " is unfrozen; no role applies",
                              role_witness(s.quiver, v));
      }
      auto [out, in] = exchange_monomials(s, v);
      Seed t = mutate_seed(s, v);
      const LaurentPoly& fresh = t.var(v);
      Json rel = {{"vertex", v},
                  {"old", variable_json(names[static_cast<std::size_t>(v - 1)],
                                        s.var(v), names)},
                  {"new", variable_json(names[static_cast<std::size_t>(v - 1)] + "'",
                                        fresh, names)},
                  {"out", to_json(out)},
                  {"in", to_json(in)}};
      return {std::move(t), {kind, std::move(rel)}};
    }
    const bool plus = kind == MutationKind::frozen_source;
    if ((ev.role == "plus" && !plus) || (ev.role == "minus" && plus)) {
      throw IllegalMutation("vertex " + std::to_string(v) + " is not a frozen " +
                                (ev.role == "plus" ? "source" : "sink"),
                            role_witness(s.quiver, v));
    }
    QuasiMorphism psi = build_psi(
        s.quiver, v, plus ? PsiDirection::plus : PsiDirection::minus);
    Seed t{psi.source.quiver, s.cluster, s.tree_address};
    t.tree_address.push_back(v);
    Json rel = {{"vertex", v},
                {"psi", plus ? "plus" : "minus"},
                {"morphism", to_json(psi)}};
    return {std::move(t), {kind, std::move(rel)}};
  }

  static Json role_witness(const IceQuiver& q, int v) {
    Json w = {{"vertex", v}};
    if (!q.has_vertex(v)) return w;
    w["frozen"] = q.is_frozen(v);
    if (q.is_frozen(v)) {
      FrozenRoles r = frozen_roles(q, v);
      w["frozenSource"] = r.source;
      w["frozenSink"] = r.sink;
    }
    return w;
  }

  Json state_json() const {
    Json hist = Json::array();
    for (const auto& ev : history_) hist.push_back(event_json(ev));
    return {{"id", id_},
            {"seed", to_json(current_)},
            {"yhat", yhat_json(current_)},
            {"history", hist}};
  }

  /// Root, potential and history: enough to rebuild the session.
  Json session_json() const {
    Json hist = Json::array();
    for (const auto& ev : history_) hist.push_back(event_json(ev));
    return {{"id", id_},
            {"root", to_json(root_)},
            {"potential", to_json(potential_)},
            {"history", hist}};
  }

  static Session from_json(const Json& j) {
    Session s(j.at("id").get<std::string>(), seed_from_json(j.at("root")),
              j.contains("potential") ? potential_from_json(j.at("potential"))
                                      : Potential());
    for (const Json& ev : j.at("history")) s.mutate(event_from_json(ev));
    return s;
  }

  static Json event_json(const MutationEvent& ev) {
    Json j = {{"vertex", ev.vertex}};
    if (!ev.role.empty()) j["role"] = ev.role;
    return j;
  }

  static MutationEvent event_from_json(const Json& j) {
    return detail::json_guard("mutation", [&] {
      return MutationEvent{j.at("vertex").get<int>(), j.value("role", "")};
    });
  }

  /// Exponents of each hatted y in the current cluster, its fraction in the
  /// current variable names, and its initial-variable expansion when that is
  /// a Laurent polynomial.
  static Json yhat_json(const Seed& s) {
    Json out = Json::array();
    std::vector<std::string> names = s.names();
    for (std::size_t i = 0; i < s.r(); ++i) names[i] = names[i] + "(t)";
    for (int j : s.quiver.unfrozen_ids()) {
      auto e = hatted_y_exponents(s, j);
      Json y = {{"name", "yhat" + std::to_string(j)},
                {"exp", e},
                {"fraction", detail::monomial_of(e).to_fraction_string(names)}};
      try {
        y["terms"] = to_json(hatted_y(s, j));
      } catch (const DomainError&) {
        y["terms"] = nullptr;
      }
      out.push_back(std::move(y));
    }
    return out;
  }

 private:
  std::string id_;
  Seed root_;
  Potential potential_;
  Seed current_;
  std::vector<MutationEvent> history_;
};

/// Cluster variables of the pattern around s, to the given depth.
inline Json variables_json(const Seed& s, int depth) {
  PatternRegistry reg = enumerate_pattern(s, depth);
  const auto names = s.names();
  Json vars = Json::array();
  for (std::size_t i = 0; i < reg.cluster_variables.size(); ++i) {
    vars.push_back(variable_json("v" + std::to_string(i + 1),
                                 reg.cluster_variables[i], names));
  }
  return {{"depth", depth},
          {"seeds", reg.seeds.size()},
          {"stabilized", reg.stabilized},
          {"variables", vars}};
}

struct Response {
  int status = 200;
  std::string body;
};

inline Response error_response(int status, const std::string& code,
                               const std::string& message,
                               Json witness = nullptr) {
  return {status,
          Json{{"code", code}, {"message", message}, {"witness", witness}}.dump()};
}

/// Sessions keyed by id. Each session has its own lock; the table lock is
/// held only for lookup and insertion. With a state file every change is
/// appended as one JSON line and replayed on construction.
class Service {
 public:
  explicit Service(std::string state_file = {})
      : state_file_(std::move(state_file)) {
    if (!state_file_.empty()) load();
  }

  Response handle(const std::string& method, const std::string& target,
                  const std::string& body) {
    std::string path = target, query;
    if (auto q = target.find('?'); q != std::string::npos) {
      path = target.substr(0, q);
      query = target.substr(q + 1);
    }
    try {
      return route(method, path, query, body);
    } catch (const IllegalMutation& e) {
      return error_response(409, "illegal-mutation", e.what(), e.witness);
    } catch (const FormatError& e) {
      return error_response(422, "malformed", e.what());
    } catch (const GuardError& e) {
      return error_response(422, "guard", e.what());
    } catch (const DomainError& e) {
      return error_response(422, "domain", e.what());
    }
  }

 private:
  struct Entry {
    explicit Entry(Session s) : session(std::move(s)) {}
    std::mutex lock;
    Session session;
  };

  Response route(const std::string& method, const std::string& path,
                 const std::string& query, const std::string& body) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < path.size();) {
      std::size_t j = path.find('/', i);
      if (j == std::string::npos) j = path.size();
      if (j > i) parts.push_back(path.substr(i, j - i));
      i = j + 1;
    }
    if (parts.size() == 1 && parts[0] == "sessions" && method == "POST") {
      return create(parse_json(body));
    }
    if (parts.size() == 1 && parts[0] == "cc" && method == "POST") {
      return {200, character(parse_json(body)).dump()};
    }
    if (parts.size() >= 2 && parts[0] == "sessions") {
      auto entry = lookup(parts[1]);
      if (!entry) {
        return error_response(404, "unknown-session",
                              "no session " + parts[1], {{"id", parts[1]}});
      }
      std::lock_guard<std::mutex> guard(entry->lock);
      Session& s = entry->session;
      if (parts.size() == 2 && method == "GET") {
        return {200, s.state_json().dump()};
      }
      if (parts.size() == 3 && parts[2] == "export" && method == "GET") {
        return {200, s.session_json().dump()};
      }
      if (parts.size() == 3 && parts[2] == "mutate" && method == "POST") {
        MutationEvent ev = Session::event_from_json(parse_json(body));
        MutationOutcome out = s.mutate(ev);
        append({{"op", "mutate"}, {"id", s.id()}, {"event", Session::event_json(ev)}});
        Json r = s.state_json();
        r["kind"] = to_string(out.kind);
        r["exchange"] = std::move(out.exchange);
        return {200, r.dump()};
      }
      if (parts.size() == 3 && parts[2] == "undo" && method == "POST") {
        s.undo();
        append({{"op", "undo"}, {"id", s.id()}});
        return {200, s.state_json().dump()};
      }
      if (parts.size() == 3 && parts[2] == "variables" && method == "GET") {
        return {200, variables_json(s.current(), depth_param(query)).dump()};
      }
    }
    return error_response(404, "not-found", method + " " + path);
  }

  static int depth_param(const std::string& query) {
    int depth = 4;
    std::size_t i = 0;
    while (i < query.size()) {
      std::size_t j = query.find('&', i);
      if (j == std::string::npos) j = query.size();
      const std::string kv = query.substr(i, j - i);
      if (kv.rfind("depth=", 0) == 0) {
        try {
          std::size_t used = 0;
          depth = std::stoi(kv.substr(6), &used);
          if (used != kv.size() - 6) throw std::invalid_argument(kv);
        } catch (const std::logic_error&) {
          throw FormatError("depth must be an integer");
        }
      }
      i = j + 1;
    }
    return depth;
  }

  Response create(const Json& j) {
    auto [quiver, potential] = detail::json_guard("session", [&] {
      const Json& qj = j.contains("quiver") ? j.at("quiver") : j;
      Potential w = j.contains("potential")
                        ? potential_from_json(j.at("potential"))
                        : Potential();
      return std::pair{quiver_from_json(qj), std::move(w)};
    });
    if (!potential.is_zero()) check_potential(quiver, potential);
    std::shared_ptr<Entry> e;
    {
      std::lock_guard<std::mutex> guard(table_lock_);
      std::string id = "s" + std::to_string(++counter_);
      e = std::make_shared<Entry>(Session(id, initial_seed(quiver), potential));
      sessions_.emplace(id, e);
    }
    std::lock_guard<std::mutex> guard(e->lock);
    Json rec = e->session.session_json();
    rec["op"] = "create";
    append(rec);
    return {201, e->session.state_json().dump()};
  }

  std::shared_ptr<Entry> lookup(const std::string& id) {
    std::lock_guard<std::mutex> guard(table_lock_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  /// {"quiver", "g", "rep"} or {"session", "g", "rep"}; modules are right
  /// modules unless the rep says otherwise.
  Json character(const Json& j) {
    IceQuiver q = detail::json_guard("cc", [&]() -> IceQuiver {
      if (j.contains("session")) {
        auto e = lookup(j.at("session").get<std::string>());
        if (!e) throw FormatError("unknown session in cc request");
        std::lock_guard<std::mutex> guard(e->lock);
        return e->session.current().quiver;
      }
      return quiver_from_json(j.at("quiver"));
    });
    auto rule = CoefficientRule::of(q);
    CharacterInput in = detail::json_guard("cc", [&] {
      return CharacterInput{j.at("g").get<std::vector<long>>(),
                            rep_from_json(j.at("rep"), q, Orientation::right)};
    });
    LaurentPoly v = cc(in, rule);
    return variable_json("cc", v, initial_seed(q).names());
  }

  void append(const Json& rec) {
    if (state_file_.empty() || loading_) return;
    std::lock_guard<std::mutex> guard(file_lock_);
    std::ofstream out(state_file_, std::ios::app);
    out << rec.dump() << '\n';
  }

  void load() {
    std::ifstream in(state_file_);
    if (!in) return;
    loading_ = true;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Json rec = parse_json(line);
      const std::string op = rec.at("op").get<std::string>();
      const std::string id = rec.at("id").get<std::string>();
      if (op == "create") {
        sessions_[id] = std::make_shared<Entry>(Session::from_json(rec));
        if (id.size() > 1 && id[0] == 's') {
          counter_ = std::max(counter_, std::stoull(id.substr(1)));
        }
        continue;
      }
      auto it = sessions_.find(id);
      if (it == sessions_.end()) throw FormatError("state file names unknown session " + id);
      Session& s = it->second->session;
      if (op == "mutate") s.mutate(Session::event_from_json(rec.at("event")));
      if (op == "undo") s.undo();
    }
    loading_ = false;
  }

  std::string state_file_;
  bool loading_ = false;
  std::mutex table_lock_, file_lock_;
  unsigned long long counter_ = 0;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

}  // namespace icecluster
