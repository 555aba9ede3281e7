// Command-line front-end. Subcommands:
//
//   classify <graph>                 dichotomy verdict with witness; with
//                                    --metric the file is a finite metric and
//                                    its support graph is recovered first
//   solve <graph> <instance>         location optimum (--method, --json, --dump-lp)
//   relax <graph> <instance>         metric relaxation value, any graph
//   orbits <graph>                   edge orbit partition (--quotient, --dot)
//   orient <graph>                   admissible orientation or obstruction
//   subdivide <graph>                2-subdivision with vertex name table
//   verify --property <p> <graph>    named property suite, exit 3 on failure
//   oracle <graph> <instance>        solver vs exhaustive search cross-check
//
// Exit codes: 0 success, 2 the graph's location problem is NP-hard,
// 3 property failure or internal solver inconsistency, 4 bad input.

#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zeroext/io.hpp"
#include "zeroext/solver.hpp"
#include "zeroext/vcsp.hpp"

namespace zeroext {

namespace cli_detail {

constexpr int kExitOk = 0;
constexpr int kExitHard = 2;
constexpr int kExitProperty = 3;
constexpr int kExitInput = 4;

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return parse_graph(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline InstanceData load_instance(const std::string& path, int terminals) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return parse_instance(in, terminals);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline DistanceMatrix load_metric(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return parse_metric(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline std::string verdict_line(const ClassifyResult& r) {
  if (r.tractable) return "tractable";
  if (!r.modular) {
    const auto& w = r.median_witness;
    return "NP-hard: not modular (witness triple " + std::to_string(w[0]) + "," +
           std::to_string(w[1]) + "," + std::to_string(w[2]) + ")";
  }
  return "NP-hard: not orientable (conflict edge " + std::to_string(r.conflict_edge) + ")";
}

inline LocationInstance make_instance(const Graph& g, const ClassifyResult& cls,
                                      const InstanceData& data) {
  LocationInstance inst{ModularComplex(g, cls.orientation, OrbitInvariantWeights{g.weight}),
                        data.extra_count,
                        {}};
  for (const auto& [key, c] : data.costs) inst.set_cost(key.first, key.second, c);
  return inst;
}

// The whole problem as one VCSP: every extra ranges over all vertices.
// Unlike the one-sided local instances this need not be solved exactly by
// the basic relaxation; used by `solve --method blp` and the LP dump.
inline VcspInstance global_vcsp(const LocationInstance& inst) {
  VcspInstance v;
  int T = inst.terminals();
  std::vector<int> all(T);
  for (int q = 0; q < T; ++q) all[q] = q;
  v.domains.assign(inst.extra_count, all);
  for (int i = 0; i < inst.extra_count; ++i) {
    VcspConstraint un;
    un.scope = {i};
    for (int q : all) un.table.push_back(ExtRat(unary_cost(inst, i, q)));
    v.constraints.push_back(std::move(un));
  }
  for (int i = 0; i < inst.extra_count; ++i)
    for (int j = i + 1; j < inst.extra_count; ++j) {
      Rat c = inst.cost(T + i, T + j);
      if (c == 0) continue;
      VcspConstraint bin;
      bin.scope = {i, j};
      for (int qi : all)
        for (int qj : all) bin.table.push_back(ExtRat(c * inst.complex.distance(qi, qj)));
      v.constraints.push_back(std::move(bin));
    }
  return v;
}

struct PropertyReport {
  bool pass = true;
  std::string detail;
};

}  // namespace cli_detail

// Runs the tool on `args` (no program name). Output goes to `out`, errors
// and verdict explanations to `err`.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;

  CLI::App app{"exact solvers for minimum 0-extension problems"};
  app.require_subcommand(1);

  std::string graph_path, instance_path, method = "scaled", property;
  bool json = false, dot = false, dump_lp = false;
  int quotient_orbit = -1, trials = 20;
  long long cap = 1000000;
  unsigned seed = 20240823;

  bool from_metric = false;
  auto* c_classify = app.add_subcommand("classify", "dichotomy verdict for a graph");
  c_classify->add_option("graph", graph_path)->required();
  c_classify->add_flag("--metric", from_metric);
  c_classify->add_flag("--json", json);

  auto* c_solve = app.add_subcommand("solve", "solve a location instance exactly");
  c_solve->add_option("graph", graph_path)->required();
  c_solve->add_option("instance", instance_path)->required();
  c_solve->add_option("--method", method)
      ->check(CLI::IsMember({"scaled", "descent", "blp", "brute"}));
  c_solve->add_flag("--json", json);
  c_solve->add_flag("--dump-lp", dump_lp);
  c_solve->add_option("--cap", cap);

  auto* c_relax = app.add_subcommand("relax", "metric relaxation value");
  c_relax->add_option("graph", graph_path)->required();
  c_relax->add_option("instance", instance_path)->required();
  c_relax->add_flag("--json", json);

  auto* c_orbits = app.add_subcommand("orbits", "edge orbit partition");
  c_orbits->add_option("graph", graph_path)->required();
  c_orbits->add_option("--quotient", quotient_orbit);
  c_orbits->add_flag("--dot", dot);
  c_orbits->add_flag("--json", json);

  auto* c_orient = app.add_subcommand("orient", "find an admissible orientation");
  c_orient->add_option("graph", graph_path)->required();
  c_orient->add_flag("--dot", dot);
  c_orient->add_flag("--json", json);

  auto* c_subdivide = app.add_subcommand("subdivide", "2-subdivision of the complex");
  c_subdivide->add_option("graph", graph_path)->required();
  c_subdivide->add_flag("--dot", dot);

  auto* c_verify = app.add_subcommand("verify", "run a named property suite");
  c_verify->add_option("--property", property)
      ->required()
      ->check(CLI::IsMember({"submodular-distance", "orbit-additive", "frame-exact",
                             "l-convex-objective", "subdivision-isometry", "polymorphism"}));
  c_verify->add_option("graph", graph_path)->required();
  c_verify->add_option("instance", instance_path);
  c_verify->add_option("--trials", trials);
  c_verify->add_option("--seed", seed);
  c_verify->add_option("--cap", cap);

  auto* c_oracle = app.add_subcommand("oracle", "cross-check the solver against brute force");
  c_oracle->add_option("graph", graph_path)->required();
  c_oracle->add_option("instance", instance_path)->required();
  c_oracle->add_option("--method", method)->check(CLI::IsMember({"scaled", "descent"}));
  c_oracle->add_option("--cap", cap);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (c_classify->parsed()) {
      if (from_metric) {
        DistanceMatrix mu = load_metric(graph_path);
        SupportResult sr;
        try {
          sr = support_graph(mu);
        } catch (const std::invalid_argument& e) {
          throw std::runtime_error(graph_path + ": " + e.what());
        }
        ClassifyResult r;
        r.tractable = sr.tractable();
        r.orientation = sr.orientation;
        r.modular = sr.mu_modular;
        r.median_witness = sr.median_witness;
        r.conflict_edge = sr.conflict_edge;
        r.conflict_chain = sr.conflict_chain;
        if (json) {
          nlohmann::json jr = classify_json(r);
          nlohmann::json edges = nlohmann::json::array();
          for (size_t e = 0; e < sr.graph.edges.size(); ++e)
            edges.push_back({{"a", sr.graph.edges[e].first},
                             {"b", sr.graph.edges[e].second},
                             {"weight", rat_str(sr.graph.weight[e])}});
          jr["support_graph"] = {{"n", sr.graph.n}, {"edges", edges}};
          out << jr.dump(2) << "\n";
        } else {
          out << verdict_line(r) << "\n";
          out << "# support graph\n" << dump_graph(sr.graph);
        }
        return r.tractable ? kExitOk : kExitHard;
      }
      ClassifyResult r = classify(load_graph(graph_path));
      if (json)
        out << classify_json(r).dump(2) << "\n";
      else
        out << verdict_line(r) << "\n";
      return r.tractable ? kExitOk : kExitHard;
    }

    if (c_solve->parsed()) {
      Graph g = load_graph(graph_path);
      ClassifyResult cls = classify(g);
      if (!cls.tractable) {
        err << "cannot solve: " << verdict_line(cls) << "\n";
        return kExitHard;
      }
      LocationInstance inst =
          make_instance(g, cls, load_instance(instance_path, g.n));
      if (dump_lp) {
        BlpProgram p = build_blp(global_vcsp(inst));
        out << lp_text(p.lp, blp_var_names(p));
      }
      SolveReport rep;
      if (inst.extra_count == 0) {
        rep.terminal_constant = terminal_constant(inst);
      } else if (method == "scaled") {
        rep = scaled_solve(inst);
      } else if (method == "descent") {
        rep = steepest_descent(inst, initial_location(inst));
      } else if (method == "brute") {
        rep = brute_force_solve(inst, cap);
      } else {  // blp
        VcspSolution sol = solve_vcsp_by_blp(global_vcsp(inst));
        if (!sol.exact) {
          err << "BLP not exact on the global instance\n";
          return kExitProperty;
        }
        rep.value = sol.blp_value.v;
        rep.location.placement = sol.assignment;
        rep.blp_calls = sol.lp_calls;
        rep.terminal_constant = terminal_constant(inst);
      }
      if (json) {
        out << report_json(rep, classification_string(cls)).dump(2) << "\n";
      } else {
        out << "value " << rat_str(rep.value) << "\n";
        out << "location";
        for (int v : rep.location.placement) out << " " << v;
        out << "\n";
        out << "descent_steps " << rep.descent_steps << "\n";
        out << "scaling_phases " << rep.scaling_phases << "\n";
        out << "blp_calls " << rep.blp_calls << "\n";
        out << "terminal_constant " << rat_str(rep.terminal_constant) << "\n";
      }
      return kExitOk;
    }

    if (c_relax->parsed()) {
      Graph g = load_graph(graph_path);
      require_connected(g);
      InstanceData data = load_instance(instance_path, g.n);
      Rat value = solve_metric_relaxation(shortest_path_metric(g), data.extra_count,
                                          data.costs);
      if (json)
        out << nlohmann::json{{"value", rat_str(value)}}.dump(2) << "\n";
      else
        out << "relaxation value " << rat_str(value) << "\n";
      return kExitOk;
    }

    if (c_orbits->parsed()) {
      Graph g = load_graph(graph_path);
      OrbitPartition op = compute_orbits(g);
      if (quotient_orbit >= 0) {
        if (quotient_orbit >= op.count) throw std::runtime_error("orbit index out of range");
        QuotientResult qr = quotient_graph(g, op, op.members[quotient_orbit]);
        if (dot) {
          out << graph_to_dot(qr.graph);
        } else {
          out << dump_graph(qr.graph);
          for (int v = 0; v < g.n; ++v) out << "# map " << v << " -> " << qr.vmap[v] << "\n";
        }
        return kExitOk;
      }
      if (dot) {
        out << graph_to_dot(g);
      } else if (json) {
        auto j = nlohmann::json::array();
        for (const auto& members : op.members) j.push_back(members);
        out << nlohmann::json{{"orbits", j}}.dump(2) << "\n";
      } else {
        for (int q = 0; q < op.count; ++q) {
          out << "orbit " << q << ":";
          for (int e : op.members[q])
            out << " " << g.edges[e].first << "-" << g.edges[e].second;
          out << "\n";
        }
      }
      return kExitOk;
    }

    if (c_orient->parsed()) {
      Graph g = load_graph(graph_path);
      OrientResult r = find_admissible_orientation(g);
      if (!r.ok) {
        if (r.conflict_edge < 0)
          out << "not orientable (graph not bipartite)\n";
        else
          out << "not orientable (conflict edge " << r.conflict_edge << ")\n";
        return kExitHard;
      }
      if (dot) {
        out << graph_to_dot(g, &r.orientation);
      } else if (json) {
        auto arcs = nlohmann::json::array();
        for (auto [t, h] : r.orientation.arc) arcs.push_back({t, h});
        out << nlohmann::json{{"arcs", arcs}}.dump(2) << "\n";
      } else {
        for (auto [t, h] : r.orientation.arc) out << "arc " << t << " " << h << "\n";
      }
      return kExitOk;
    }

    if (c_subdivide->parsed()) {
      Graph g = load_graph(graph_path);
      ClassifyResult cls = classify(g);
      if (!cls.tractable) {
        err << "cannot subdivide: " << verdict_line(cls) << "\n";
        return kExitHard;
      }
      ModularComplex cx(g, cls.orientation, OrbitInvariantWeights{g.weight});
      const Subdivision& sub = two_subdivision(cx);
      out << (dot ? subdivision_to_dot(sub) : dump_subdivision(sub));
      return kExitOk;
    }

    if (c_oracle->parsed()) {
      Graph g = load_graph(graph_path);
      ClassifyResult cls = classify(g);
      if (!cls.tractable) {
        err << "cannot solve: " << verdict_line(cls) << "\n";
        return kExitHard;
      }
      LocationInstance inst =
          make_instance(g, cls, load_instance(instance_path, g.n));
      SolveReport got = method == "descent"
                            ? steepest_descent(inst, initial_location(inst))
                            : scaled_solve(inst);
      SolveReport want = brute_force_solve(inst, cap);
      if (got.value == want.value) {
        out << "oracle: match value " << rat_str(got.value) << "\n";
        return kExitOk;
      }
      out << "oracle: MISMATCH " << method << "=" << rat_str(got.value) << " brute="
          << rat_str(want.value) << "\n";
      return kExitProperty;
    }

    // verify
    Graph g = load_graph(graph_path);
    ClassifyResult cls = classify(g);
    if (!cls.tractable) {
      err << "cannot verify: " << verdict_line(cls) << "\n";
      return kExitHard;
    }
    ModularComplex cx(g, cls.orientation, OrbitInvariantWeights{g.weight});
    std::mt19937 rng(seed);
    auto random_costs = [&](int extras) {
      InstanceData data;
      data.extra_count = extras;
      std::uniform_int_distribution<int> coin(0, 6);
      for (int s = 0; s < g.n; ++s)
        for (int e = 0; e < extras; ++e) {
          int c = coin(rng);
          if (c) data.costs[{s, g.n + e}] = Rat(c);
        }
      for (int a = 0; a < extras; ++a)
        for (int b = a + 1; b < extras; ++b) {
          int c = coin(rng);
          if (c) data.costs[{g.n + a, g.n + b}] = Rat(c);
        }
      return data;
    };
    auto need_instance = [&]() {
      if (instance_path.empty())
        throw std::runtime_error("property " + property + " needs an instance file");
      return make_instance(g, cls, load_instance(instance_path, g.n));
    };

    PropertyReport rep;
    if (property == "submodular-distance") {
      for (int a = 0; a < g.n && rep.pass; ++a)
        for (int b = 0; b < g.n && rep.pass; ++b) {
          Semilattice La = local_semilattice(cx, a, '+').to_semilattice();
          Semilattice Lb = local_semilattice(cx, b, '+').to_semilattice();
          auto Lav = local_semilattice(cx, a, '+').verts;
          auto Lbv = local_semilattice(cx, b, '+').verts;
          std::vector<ExtRat> table;
          for (int p : Lav)
            for (int q : Lbv) table.push_back(ExtRat(cx.distance(p, q)));
          auto res = verify_polymorphism({&La, &Lb}, table);
          if (!res.ok) {
            rep.pass = false;
            rep.detail = "distance table fails at cones of " + std::to_string(a) + " and " +
                         std::to_string(b) + "\n" + dump_semilattice(La) +
                         dump_semilattice(Lb);
          }
        }
    } else if (property == "polymorphism") {
      LocationInstance inst = need_instance();
      std::uniform_int_distribution<int> pick(0, g.n - 1);
      for (int t = 0; t < trials && rep.pass; ++t) {
        Location rho;
        for (int i = 0; i < inst.extra_count; ++i) rho.placement.push_back(pick(rng));
        for (char side : {'+', '-'}) {
          VcspInstance v = build_local_instance(inst, rho, side);
          std::vector<Semilattice> cones;
          for (int i = 0; i < inst.extra_count; ++i)
            cones.push_back(local_semilattice(cx, rho.placement[i], side).to_semilattice());
          for (const VcspConstraint& c : v.constraints) {
            std::vector<const Semilattice*> scope;
            for (int var : c.scope) scope.push_back(&cones[var]);
            if (!verify_polymorphism(scope, c.table).ok) {
              rep.pass = false;
              rep.detail = "local table fails on side " + std::string(1, side);
            }
          }
        }
      }
    } else if (property == "orbit-additive") {
      LocationInstance inst = need_instance();
      Rat sum = 0;
      for (int q = 0; q < cx.orbits.count; ++q) sum += orbit_tau(inst, q);
      Rat full = scaled_solve(inst).value;
      if (sum != full) {
        rep.pass = false;
        rep.detail = "orbit sum " + rat_str(sum) + " vs optimum " + rat_str(full);
      }
    } else if (property == "frame-exact") {
      LocationInstance inst = need_instance();
      Rat relax = solve_metric_relaxation(inst);
      Rat exact = brute_force_solve(inst, cap).value;
      if (relax != exact) {
        rep.pass = false;
        rep.detail = "relaxation " + rat_str(relax) + " vs optimum " + rat_str(exact);
      }
    } else if (property == "l-convex-objective") {
      LocationInstance inst = need_instance();
      if (inst.extra_count < 1) throw std::runtime_error("instance has no extras");
      double size = 1;
      for (int i = 0; i < inst.extra_count; ++i) size *= g.n;
      if (size > 20000) throw std::runtime_error("product complex too large");
      auto acc = std::make_shared<const ModularComplex>(cx);
      for (int i = 1; i < inst.extra_count; ++i)
        acc = std::make_shared<const ModularComplex>(product_complex(*acc, cx));
      std::vector<Rat> F;
      Location rho;
      rho.placement.assign(inst.extra_count, 0);
      int total = acc->n();
      for (int flat = 0; flat < total; ++flat) {
        // factor order puts the last extra's coordinate fastest
        int rest = flat;
        for (int i = inst.extra_count - 1; i >= 0; --i) {
          rho.placement[i] = rest % g.n;
          rest /= g.n;
        }
        F.push_back(objective(inst, rho));
      }
      LConvexity res = is_L_convex(*acc, F);
      if (!res.ok) {
        rep.pass = false;
        rep.detail = "objective not convex near vertex " + std::to_string(res.vertex);
      }
    } else {  // subdivision-isometry
      const Subdivision& sub = two_subdivision(cx);
      int m = sub.complex.n();
      for (int i = 0; i < m && rep.pass; ++i)
        for (int j = 0; j < m && rep.pass; ++j) {
          const BooleanPair& x = sub.names[i];
          const BooleanPair& y = sub.names[j];
          Rat want = (cx.distance(x.low, y.low) + cx.distance(x.high, y.high)) / 2;
          if (sub.complex.distance(i, j) != want) {
            rep.pass = false;
            rep.detail = "distance disagrees at " + subdivision_name(x) + ", " +
                         subdivision_name(y);
          }
        }
    }

    if (rep.pass) {
      out << "property " << property << ": pass\n";
      return kExitOk;
    }
    out << "property " << property << ": FAIL " << rep.detail << "\n";
    return kExitProperty;
  } catch (const std::logic_error& e) {
    err << e.what() << "\n";
    return kExitProperty;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitInput;
  }
}

inline int run_cli(int argc, char** argv) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

}  // namespace zeroext
