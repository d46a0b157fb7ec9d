#pragma once

// Command-line verbs over the JSON formats. Exit codes: 0 success, 2 domain
// error or failed check, 3 guard, 64 usage.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "icecluster/character.hpp"
#include "icecluster/error.hpp"
#include "icecluster/generators.hpp"
#include "icecluster/io.hpp"
#include "icecluster/mutation.hpp"
#include "icecluster/quasi.hpp"
#include "icecluster/rep.hpp"
#include "icecluster/seed.hpp"
#include "icecluster/service.hpp"

namespace icecluster {

inline constexpr int kExitDomain = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitUsage = 64;

/// Runs the HTTP server; receives the port and the state file (may be empty).
using ServeFn = std::function<int(int, const std::string&, std::ostream&)>;

namespace detail {

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

/// A quiver file is either a bare quiver or a {"quiver", "potential"} bundle.
struct QuiverBundle {
  IceQuiver quiver;
  Potential potential;
};

inline QuiverBundle load_bundle(const std::string& quiver_path,
                                const std::string& potential_path) {
  Json j = read_json_file(quiver_path);
  QuiverBundle b;
  if (j.contains("quiver")) {
    b.quiver = quiver_from_json(j.at("quiver"));
    if (j.contains("potential")) b.potential = potential_from_json(j.at("potential"));
  } else {
    b.quiver = quiver_from_json(j);
  }
  if (!potential_path.empty()) {
    b.potential = potential_from_json(read_json_file(potential_path));
  }
  return b;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::stringstream one(item);
    T v;
    if (!(one >> v) || !(one >> std::ws).eof()) {
      throw DomainError(std::string("bad ") + what + " list: " + text);
    }
    out.push_back(v);
  }
  return out;
}

inline Json bundle_json(const CatalogEntry& e) {
  return {{"name", e.name},
          {"quiver", to_json(e.quiver)},
          {"potential", to_json(e.potential)}};
}

}  // namespace detail

inline int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                        std::ostream& err, const ServeFn& serve = {}) {
  CLI::App app{"Cluster algebras with coefficients from ice quivers with potential",
               "iceclu"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "json or pretty")
      ->check(CLI::IsMember({"json", "pretty"}));

  std::string quiver_path, potential_path, rep_path, morphism_path, state_dir;
  std::string mutations, e_text, g_text, frozen_text, diagonals;
  int at = 0, depth = 4, n = 0, k = 0, port = 8080;
  bool trace = false, plus = false, minus = false, fan = false;

  auto quiver_opt = [&](CLI::App* c) {
    c->add_option("--quiver", quiver_path, "quiver or quiver+potential JSON")->required();
    c->add_option("--potential", potential_path, "potential JSON");
  };

  auto* iqp = app.add_subcommand("iqp", "ice quivers with potential");
  iqp->require_subcommand(1);
  auto* iqp_mutate = iqp->add_subcommand("mutate", "mutate and reduce");
  quiver_opt(iqp_mutate);
  iqp_mutate->add_option("--at", at, "vertex")->required();
  iqp_mutate->add_flag("--trace", trace, "include the mutation record");
  auto* iqp_reduce = iqp->add_subcommand("reduce", "reduce");
  quiver_opt(iqp_reduce);

  auto* seed = app.add_subcommand("seed", "seeds and patterns");
  seed->require_subcommand(1);
  auto* seed_walk = seed->add_subcommand("walk", "mutation path or registry export");
  quiver_opt(seed_walk);
  seed_walk->add_option("--mutations", mutations, "comma-separated vertices");
  auto* walk_depth = seed_walk->add_option("--depth", depth, "export seeds to this depth");
  auto* seed_vars = seed->add_subcommand("vars", "cluster variables");
  quiver_opt(seed_vars);
  seed_vars->add_option("--depth", depth, "depth");

  auto* rep = app.add_subcommand("rep", "representations");
  rep->require_subcommand(1);
  auto* rep_chi = rep->add_subcommand("chi", "Euler characteristic of a quiver Grassmannian");
  quiver_opt(rep_chi);
  rep_chi->add_option("--rep", rep_path, "rep JSON")->required();
  rep_chi->add_option("--e", e_text, "dimension vector")->required();

  auto* ccmd = app.add_subcommand("cc", "cluster characters");
  ccmd->require_subcommand(1);
  auto* cc_eval = ccmd->add_subcommand("eval", "cluster character");
  quiver_opt(cc_eval);
  cc_eval->add_option("--rep", rep_path, "module JSON")->required();
  cc_eval->add_option("--g", g_text, "index; computed from the module if omitted");
  auto* cc_loc_cmd = ccmd->add_subcommand("loc", "localized character");
  quiver_opt(cc_loc_cmd);
  cc_loc_cmd->add_option("--rep", rep_path, "module JSON")->required();
  cc_loc_cmd->add_option("--g", g_text, "index; computed from the module if omitted");
  cc_loc_cmd->add_option("--frozen", frozen_text, "frozen class")->required();

  auto* quasi = app.add_subcommand("quasi", "quasi-cluster morphisms");
  quasi->require_subcommand(1);
  auto* quasi_check = quasi->add_subcommand("check", "verify a morphism");
  quasi_check->add_option("--morphism", morphism_path, "morphism JSON")->required();
  quasi_check->add_option("--depth", depth, "depth");
  auto* quasi_psi = quasi->add_subcommand("psi", "frozen-mutation map");
  quiver_opt(quasi_psi);
  quasi_psi->add_option("--at", at, "frozen vertex")->required();
  auto* plus_flag = quasi_psi->add_flag("--plus", plus, "v is a frozen source");
  quasi_psi->add_flag("--minus", minus, "v is a frozen sink")->excludes(plus_flag);

  auto* gen = app.add_subcommand("gen", "generators");
  gen->require_subcommand(1);
  auto* gen_triangle = gen->add_subcommand("triangle", "the worked triangle");
  auto* gen_polygon = gen->add_subcommand("polygon", "triangulated polygon");
  gen_polygon->add_option("--n", n, "number of sides")->required();
  gen_polygon->add_flag("--fan", fan, "fan at vertex 1 (the default)");
  gen_polygon->add_option("--diagonals", diagonals, "e.g. 1-3,1-4");
  auto* gen_grid = gen->add_subcommand("grid", "grid quiver");
  gen_grid->add_option("--k", k, "k")->required();
  gen_grid->add_option("--n", n, "n")->required();

  auto* serve_cmd = app.add_subcommand("serve", "HTTP service");
  serve_cmd->add_option("--port", port, "port");
  serve_cmd->add_option("--state", state_dir, "directory for the session log");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitUsage;
  }

  const bool pretty = format == "pretty";
  auto emit = [&](const Json& j, const std::string& text = {}) {
    if (pretty && !text.empty()) {
      out << text;
    } else {
      out << (pretty ? j.dump(2) : j.dump()) << '\n';
    }
  };

  try {
    if (iqp_mutate->parsed() || iqp_reduce->parsed()) {
      auto b = detail::load_bundle(quiver_path, potential_path);
      Json j;
      if (iqp_mutate->parsed()) {
        MutationResult r = mutate(b.quiver, b.potential, at);
        j = {{"quiver", to_json(r.quiver)},
             {"potential", to_json(r.potential)},
             {"reduction", to_json(r.reduction)}};
        if (trace) j["record"] = to_json(r.record);
      } else {
        ReducedIqp r = reduce_iqp(b.quiver, b.potential);
        j = {{"quiver", to_json(r.quiver)},
             {"potential", to_json(r.potential)},
             {"reduction", to_json(r.report)}};
      }
      emit(j);
    } else if (seed_walk->parsed()) {
      auto b = detail::load_bundle(quiver_path, potential_path);
      Seed s = initial_seed(b.quiver);
      if (!mutations.empty()) {
        for (int v : detail::parse_list<int>(mutations, "vertex")) {
          s = Session::step(s, {v, ""}).first;
        }
      }
      if (walk_depth->count() > 0) {
        out << registry_json_lines(enumerate_pattern(s, depth));
      } else {
        emit(to_json(s));
      }
    } else if (seed_vars->parsed()) {
      auto b = detail::load_bundle(quiver_path, potential_path);
      Json j = variables_json(initial_seed(b.quiver), depth);
      std::string text;
      for (const Json& v : j.at("variables")) {
        text += v.at("fraction").get<std::string>() + "\n";
      }
      emit(j, text);
    } else if (rep_chi->parsed()) {
      auto b = detail::load_bundle(quiver_path, potential_path);
      QuiverRep r = rep_from_json(detail::read_json_file(rep_path), b.quiver);
      if (!b.potential.is_zero()) {
        if (auto f = check_relations(b.quiver, b.potential, r)) {
          throw DomainError("representation violates the relation at arrow " +
                            f->arrow);
        }
      }
      auto e = detail::parse_list<std::size_t>(e_text, "dimension");
      GrCount g = euler_characteristic(b.quiver, r, e);
      Json counts = Json::object(), poly = Json::array();
      for (const auto& [p, c] : g.counts_by_prime) counts[std::to_string(p)] = c.get_str();
      for (const auto& c : g.polynomial) poly.push_back(c.get_str());
      emit({{"e", g.e}, {"chi", g.chi.get_str()}, {"counts", counts}, {"polynomial", poly}},
           "chi = " + g.chi.get_str() + "\n");
    } else if (cc_eval->parsed() || cc_loc_cmd->parsed()) {
      auto b = detail::load_bundle(quiver_path, potential_path);
      auto rule = CoefficientRule::of(b.quiver);
      QuiverRep m = rep_from_json(detail::read_json_file(rep_path), b.quiver,
                                  Orientation::right);
      std::vector<long> g;
      if (!g_text.empty()) {
        g = detail::parse_list<long>(g_text, "index");
      } else {
        g = index_from_module(b.quiver, b.potential, m);
      }
      LaurentPoly v;
      if (cc_eval->parsed()) {
        v = cc({g, m}, rule);
      } else {
        v = cc_loc({detail::parse_list<long>(frozen_text, "frozen class"), {g, m}}, rule);
      }
      const auto names = initial_seed(b.quiver).names();
      Json j = variable_json("cc", v, names);
      j["g"] = g;
      emit(j, v.to_fraction_string(names) + "\n");
    } else if (quasi_check->parsed()) {
      QuasiMorphism m = morphism_from_json(detail::read_json_file(morphism_path));
      VerificationReport r = verify(m, depth);
      emit(to_json(r));
      return r.pass() ? 0 : kExitDomain;
    } else if (quasi_psi->parsed()) {
      if (!plus && !minus) throw DomainError("quasi psi needs --plus or --minus");
      auto b = detail::load_bundle(quiver_path, potential_path);
      emit(to_json(build_psi(b.quiver, at,
                             plus ? PsiDirection::plus : PsiDirection::minus)));
    } else if (gen_triangle->parsed()) {
      emit(detail::bundle_json(triangle_example()));
    } else if (gen_polygon->parsed()) {
      std::vector<Diagonal> d;
      if (!diagonals.empty()) {
        if (fan) throw DomainError("--fan and --diagonals are exclusive");
        for (const auto& item : detail::parse_list<std::string>(diagonals, "diagonal")) {
          auto dash = item.find('-');
          if (dash == std::string::npos) throw DomainError("bad diagonal " + item);
          auto ends = detail::parse_list<int>(item.substr(0, dash) + "," + item.substr(dash + 1),
                                              "diagonal");
          d.emplace_back(ends[0], ends[1]);
        }
      } else {
        d = fan_triangulation(n);
      }
      emit(detail::bundle_json(polygon_ice_quiver(n, d)));
    } else if (gen_grid->parsed()) {
      emit(detail::bundle_json(grid_ice_quiver(k, n)));
    } else if (serve_cmd->parsed()) {
      if (!serve) throw DomainError("serve is not available in this build");
      return serve(port, state_dir.empty() ? "" : state_dir + "/sessions.jsonl", err);
    }
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << '\n';
    return kExitGuard;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return 0;
}

}  // namespace icecluster
