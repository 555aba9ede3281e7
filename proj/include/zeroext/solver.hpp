#pragma once

// The multifacility location solver. An instance places extra points into a
// weighted modular complex to minimize total connection cost against fixed
// terminals (every complex vertex) and between the extras themselves.
// Provides the tractability classifier, the objective, one-sided local
// minimization through the basic LP relaxation, local optimality tests (full
// and orbit-restricted), steepest descent, cost-scaled descent with the
// per-phase step bound asserted, per-orbit quotient values, the metric
// relaxation, a metric front-end, and the exhaustive oracle.

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zeroext/complex.hpp"
#include "zeroext/graph.hpp"
#include "zeroext/lp.hpp"
#include "zeroext/orbits.hpp"
#include "zeroext/vcsp.hpp"

namespace zeroext {

// Vertices 0..T-1 are the terminals (the complex vertices); T..T+n-1 the
// extras. Costs are symmetric and nonnegative; zero entries may be stored.
struct LocationInstance {
  ModularComplex complex;
  int extra_count = 0;
  std::map<std::pair<int, int>, Rat> costs;  // key (a,b) with a < b

  int terminals() const { return complex.graph.n; }
  int total() const { return terminals() + extra_count; }

  Rat cost(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = costs.find({a, b});
    return it == costs.end() ? Rat(0) : it->second;
  }

  void set_cost(int a, int b, Rat c) {
    if (a < 0 || b < 0 || a >= total() || b >= total())
      throw std::invalid_argument("cost endpoint out of range");
    if (a == b) throw std::invalid_argument("cost on a single vertex");
    if (c < 0) throw std::invalid_argument("negative cost");
    if (a > b) std::swap(a, b);
    costs[{a, b}] = std::move(c);
  }
};

struct Location {
  std::vector<int> placement;  // per extra, a complex vertex
};

struct SolveReport {
  Rat value = 0;  // objective of `location`; terminal-terminal mass excluded
  Location location;
  int descent_steps = 0;
  int scaling_phases = 0;
  int blp_calls = 0;
  Rat terminal_constant = 0;  // cost mass between terminal pairs, if supplied
};

// ---------------------------------------------------------------------------
// Dichotomy classifier

struct ClassifyResult {
  bool tractable = false;
  Orientation orientation;  // admissible, when tractable
  bool modular = false;
  std::array<int, 3> median_witness{-1, -1, -1};  // median-free triple
  int conflict_edge = -1;  // edge forced against itself, when not orientable
  std::vector<std::array<int, 4>> conflict_chain;
};

inline ClassifyResult classify(const Graph& g) {
  require_connected(g);
  ClassifyResult res;
  auto mod = is_modular(g);
  if (!mod.modular) {
    res.median_witness = mod.witness;
    return res;
  }
  res.modular = true;
  auto orient = find_admissible_orientation(g);
  if (!orient.ok) {
    if (orient.conflict_edge < 0) throw std::logic_error("modular graph not bipartite");
    res.conflict_edge = orient.conflict_edge;
    res.conflict_chain = orient.conflict_chain;
    return res;
  }
  res.tractable = true;
  res.orientation = orient.orientation;
  return res;
}

// ---------------------------------------------------------------------------
// Objective

inline void check_location(const LocationInstance& inst, const Location& rho) {
  if (static_cast<int>(rho.placement.size()) != inst.extra_count)
    throw std::invalid_argument("location size mismatch");
  for (int v : rho.placement)
    if (v < 0 || v >= inst.terminals())
      throw std::invalid_argument("location vertex out of range");
}

// Connection cost of a location: terminal-to-extra plus extra-to-extra terms.
// Terminal pairs are constants and excluded; see terminal_constant.
inline Rat objective(const LocationInstance& inst, const Location& rho) {
  check_location(inst, rho);
  int T = inst.terminals();
  auto place = [&](int v) { return v < T ? v : rho.placement[v - T]; };
  Rat total = 0;
  for (const auto& [key, c] : inst.costs) {
    auto [a, b] = key;
    if (a < T && b < T) continue;
    if (c == 0) continue;
    total += c * inst.complex.distance(place(a), place(b));
  }
  return total;
}

inline Rat terminal_constant(const LocationInstance& inst) {
  int T = inst.terminals();
  Rat total = 0;
  for (const auto& [key, c] : inst.costs) {
    auto [a, b] = key;
    if (a < T && b < T) total += c * inst.complex.distance(a, b);
  }
  return total;
}

// Unary part of the objective seen by extra i placed at q.
inline Rat unary_cost(const LocationInstance& inst, int i, int q) {
  int T = inst.terminals();
  Rat total = 0;
  for (int s = 0; s < T; ++s) {
    Rat c = inst.cost(s, T + i);
    if (c != 0) total += c * inst.complex.distance(s, q);
  }
  return total;
}

// Cheapest unary placement per extra, ties to the lowest vertex id.
inline Location initial_location(const LocationInstance& inst) {
  Location rho;
  rho.placement.resize(inst.extra_count);
  for (int i = 0; i < inst.extra_count; ++i) {
    int best = 0;
    Rat bv = unary_cost(inst, i, 0);
    for (int q = 1; q < inst.terminals(); ++q) {
      Rat v = unary_cost(inst, i, q);
      if (v < bv) {
        bv = std::move(v);
        best = q;
      }
    }
    rho.placement[i] = best;
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Local instances over one-sided neighborhoods

// The side instance at rho: variable i ranges over the Boolean cone of
// rho_i (optionally cut down to the part reachable through the orbit edges
// Q), unary tables carry the terminal pull, binary tables the extra-extra
// distance costs. Restricted distances keep the meet + fractional-join
// polymorphism, so the basic relaxation solves these exactly.
inline VcspInstance build_local_instance(const LocationInstance& inst, const Location& rho,
                                         char side,
                                         const std::vector<int>* orbit_edges = nullptr) {
  check_location(inst, rho);
  int T = inst.terminals();
  VcspInstance v;
  v.domains.resize(inst.extra_count);
  for (int i = 0; i < inst.extra_count; ++i) {
    LocalSemilattice L = local_semilattice(inst.complex, rho.placement[i], side);
    if (orbit_edges)
      v.domains[i] = restrict_to_orbit(L, *orbit_edges).sub.verts;
    else
      v.domains[i] = L.verts;
  }
  for (int i = 0; i < inst.extra_count; ++i) {
    VcspConstraint un;
    un.scope = {i};
    for (int q : v.domains[i]) un.table.push_back(ExtRat(unary_cost(inst, i, q)));
    v.constraints.push_back(std::move(un));
  }
  for (int i = 0; i < inst.extra_count; ++i)
    for (int j = i + 1; j < inst.extra_count; ++j) {
      Rat c = inst.cost(T + i, T + j);
      if (c == 0) continue;
      VcspConstraint bin;
      bin.scope = {i, j};
      for (int qi : v.domains[i])
        for (int qj : v.domains[j])
          bin.table.push_back(ExtRat(c * inst.complex.distance(qi, qj)));
      v.constraints.push_back(std::move(bin));
    }
  return v;
}

struct LocalMin {
  Rat value = 0;
  Location location;
  int lp_calls = 0;
};

// Optimal location within the side neighborhood of rho, by variable fixing
// over the basic relaxation. Exactness is guaranteed for these instances;
// failure indicates an internal inconsistency.
inline LocalMin local_minimize(const LocationInstance& inst, const Location& rho, char side,
                               const std::vector<int>* orbit_edges = nullptr) {
  VcspInstance v = build_local_instance(inst, rho, side, orbit_edges);
  VcspSolution sol = solve_vcsp_by_blp(v);
  if (!sol.exact) throw std::logic_error("BLP not exact");
  LocalMin out;
  out.value = sol.blp_value.v;
  out.location.placement = sol.assignment;
  out.lp_calls = sol.lp_calls;
  return out;
}

inline bool is_locally_optimal(const LocationInstance& inst, const Location& rho) {
  Rat v = objective(inst, rho);
  return local_minimize(inst, rho, '+').value == v &&
         local_minimize(inst, rho, '-').value == v;
}

// Optimality against neighbors that move only through the given orbit edges.
inline bool is_Q_locally_optimal(const LocationInstance& inst, const Location& rho,
                                 const std::vector<int>& orbit_edges) {
  Rat v = objective(inst, rho);
  return local_minimize(inst, rho, '+', &orbit_edges).value == v &&
         local_minimize(inst, rho, '-', &orbit_edges).value == v;
}

// ---------------------------------------------------------------------------
// Descent

// Probe both sides, move to the strictly better minimizer (ties prefer the
// upper side), stop when neither side improves. Fixed points are globally
// optimal for these objectives.
inline SolveReport steepest_descent(const LocationInstance& inst, Location rho) {
  check_location(inst, rho);
  SolveReport rep;
  rep.terminal_constant = terminal_constant(inst);
  Rat v = objective(inst, rho);
  if (inst.extra_count > 0) {
    for (;;) {
      LocalMin plus = local_minimize(inst, rho, '+');
      LocalMin minus = local_minimize(inst, rho, '-');
      rep.blp_calls += plus.lp_calls + minus.lp_calls;
      LocalMin& best = plus.value <= minus.value ? plus : minus;
      if (!(best.value < v)) break;
      v = best.value;
      rho = std::move(best.location);
      ++rep.descent_steps;
    }
  }
  rep.value = std::move(v);
  rep.location = std::move(rho);
  return rep;
}

// ---------------------------------------------------------------------------
// Cost scaling

namespace detail {

inline Rat floor_half(const Rat& q) {
  if (q.get_den() != 1) throw std::logic_error("floor_half on a non-integer");
  mpz_class n = q.get_num();
  return Rat(mpz_class(n / 2));
}

}  // namespace detail

// Solve by halving integer costs down to zero and descending from each
// coarse optimum. Rational costs are cleared by the common denominator
// first; the optimum is cost-scale invariant. Internally the descent runs
// with unit edge weights (optimal locations transfer to any positive
// orbit-invariant weighting) and each phase must finish within
// |V|^2 * diameter steps, which is asserted.
inline SolveReport scaled_solve(const LocationInstance& inst) {
  SolveReport rep;
  rep.terminal_constant = terminal_constant(inst);
  if (inst.extra_count == 0) return rep;

  ModularComplex unit(Graph(inst.complex.graph.n, inst.complex.graph.edges),
                      inst.complex.orientation, unit_weights(inst.complex.graph));
  long diam = 0;
  for (int a = 0; a < unit.graph.n; ++a)
    for (int b = 0; b < unit.graph.n; ++b) {
      const Rat& d = unit.dist_.at(a, b);
      if (d > diam) diam = d.get_num().get_si();
    }
  long long step_bound = static_cast<long long>(inst.total()) * inst.total() * diam;

  LocationInstance work;
  work.complex = unit;
  work.extra_count = inst.extra_count;
  mpz_class denom_lcm = 1;
  for (const auto& [key, c] : inst.costs)
    mpz_lcm(denom_lcm.get_mpz_t(), denom_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  for (const auto& [key, c] : inst.costs) work.costs[key] = c * Rat(denom_lcm);

  // halving ladder, finest last
  std::vector<std::map<std::pair<int, int>, Rat>> ladder;
  {
    auto cur = work.costs;
    auto nonzero = [](const std::map<std::pair<int, int>, Rat>& m) {
      for (const auto& [k, c] : m)
        if (c != 0) return true;
      return false;
    };
    while (nonzero(cur)) {
      ladder.push_back(cur);
      for (auto& [k, c] : cur) c = detail::floor_half(c);
    }
    std::reverse(ladder.begin(), ladder.end());
  }

  Location rho;
  rho.placement.assign(inst.extra_count, 0);
  for (const auto& phase_costs : ladder) {
    work.costs = phase_costs;
    SolveReport phase = steepest_descent(work, rho);
    if (phase.descent_steps > step_bound)
      throw std::logic_error("scaling step bound exceeded");
    rep.descent_steps += phase.descent_steps;
    rep.blp_calls += phase.blp_calls;
    ++rep.scaling_phases;
    rho = std::move(phase.location);
  }

  if (inst.extra_count > 0 && !is_locally_optimal(inst, rho))
    throw std::logic_error("scaled optimum not locally optimal under the requested weights");
  rep.value = objective(inst, rho);
  rep.location = std::move(rho);
  return rep;
}

// ---------------------------------------------------------------------------
// Orbit quotients

// Value of the instance pushed onto the quotient that keeps only one orbit's
// edges, weighted by that orbit's edge weight. Summed over all orbits these
// recover the full optimum.
inline Rat orbit_tau(const LocationInstance& inst, int orbit) {
  if (orbit < 0 || orbit >= inst.complex.orbits.count)
    throw std::invalid_argument("orbit index out of range");
  const Graph& g = inst.complex.graph;
  QuotientResult qr = quotient_graph(g, inst.complex.orbits,
                                     inst.complex.orbits.members[orbit]);
  Rat hq = inst.complex.weights.orbit_value(inst.complex.orbits, orbit);
  Graph qg(qr.graph.n, qr.graph.edges,
           std::vector<Rat>(qr.graph.edges.size(), hq));

  int T = inst.terminals();
  LocationInstance quot;
  quot.extra_count = inst.extra_count;
  auto qkey = [&](int v) { return v < T ? qr.vmap[v] : qr.graph.n + (v - T); };
  for (const auto& [key, c] : inst.costs) {
    auto [a, b] = key;
    int qa = qkey(a), qb = qkey(b);
    if (qa == qb) continue;  // merged terminals; zero distance
    if (qa > qb) std::swap(qa, qb);
    quot.costs[{qa, qb}] += c;
  }

  ClassifyResult cls = classify(qg);
  if (cls.tractable) {
    quot.complex = ModularComplex(qg, cls.orientation,
                                  OrbitInvariantWeights{qg.weight});
    return scaled_solve(quot).value;
  }
  // quotients of orientable modular graphs stay tractable; fall back honestly
  Rat best;
  bool first = true;
  std::vector<int> pl(inst.extra_count, 0);
  DistanceMatrix dm = shortest_path_metric(qg);
  long long combos = 1;
  for (int i = 0; i < inst.extra_count; ++i) {
    combos *= qg.n;
    if (combos > 1000000) throw std::runtime_error("cap exceeded");
  }
  for (long long it = 0; it < combos; ++it) {
    long long t = it;
    for (int i = inst.extra_count - 1; i >= 0; --i) {
      pl[i] = static_cast<int>(t % qg.n);
      t /= qg.n;
    }
    Rat v = 0;
    auto place = [&](int q) { return q < qg.n ? q : pl[q - qg.n]; };
    for (const auto& [key, c] : quot.costs) {
      auto [a, b] = key;
      if (a < qg.n && b < qg.n) continue;
      v += c * dm.at(place(a), place(b));
    }
    if (first || v < best) {
      best = std::move(v);
      first = false;
    }
  }
  return first ? Rat(0) : best;
}

// ---------------------------------------------------------------------------
// Metric relaxation

// Lower bound by relaxing placements to an abstract metric extension: one
// variable per distance involving an extra, triangle inequalities over all
// triples, terminal distances pinned to the given metric. Works for any
// connected graph metric, tractable or not.
inline Rat solve_metric_relaxation(const DistanceMatrix& terminal_metric, int extra_count,
                                   const std::map<std::pair<int, int>, Rat>& costs) {
  int T = terminal_metric.n;
  int N = T + extra_count;
  if (extra_count == 0) return Rat(0);

  std::map<std::pair<int, int>, int> var;
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b)
      if (b >= T) var[{a, b}] = static_cast<int>(var.size());

  LinearProgram lp;
  lp.num_vars = static_cast<int>(var.size());
  lp.objective.assign(lp.num_vars, Rat(0));
  for (const auto& [key, c] : costs) {
    auto it = var.find(key);
    if (it != var.end()) lp.objective[it->second] += c;
  }

  auto fixed = [&](int a, int b) { return b < T; };  // a < b
  auto dist = [&](int a, int b) -> const Rat& { return terminal_metric.at(a, b); };
  // one row per (target pair, triple): d(xy) <= d(xz) + d(zy)
  for (int x = 0; x < N; ++x)
    for (int y = x + 1; y < N; ++y)
      for (int z = 0; z < N; ++z) {
        if (z == x || z == y) continue;
        std::vector<Rat> a(lp.num_vars, Rat(0));
        Rat rhs = 0;
        auto add = [&](int p, int q, const Rat& coef) {
          if (p > q) std::swap(p, q);
          if (fixed(p, q))
            rhs -= coef * dist(p, q);
          else
            a[var.at({p, q})] += coef;
        };
        add(x, y, Rat(1));
        add(x, z, Rat(-1));
        add(z, y, Rat(-1));
        if (std::all_of(a.begin(), a.end(), [](const Rat& v) { return v == 0; })) continue;
        lp.add_row(std::move(a), std::move(rhs), RowType::LE);
      }

  auto r = solve_lp(lp);
  if (r.status != LpStatus::Optimal)
    throw std::logic_error("metric relaxation did not solve");
  return r.objective;
}

inline Rat solve_metric_relaxation(const LocationInstance& inst) {
  int T = inst.terminals();
  DistanceMatrix dm;
  dm.n = T;
  dm.d.resize(static_cast<size_t>(T) * T);
  for (int a = 0; a < T; ++a)
    for (int b = 0; b < T; ++b) dm.at(a, b) = inst.complex.distance(a, b);
  return solve_metric_relaxation(dm, inst.extra_count, inst.costs);
}

// ---------------------------------------------------------------------------
// Metric front-end

struct SupportResult {
  Graph graph;  // weighted with the metric's immediate distances
  bool mu_modular = false;
  std::array<int, 3> median_witness{-1, -1, -1};  // median-free triple
  bool orientable = false;
  Orientation orientation;  // when orientable
  int conflict_edge = -1;
  std::vector<std::array<int, 4>> conflict_chain;

  bool tractable() const { return mu_modular && orientable; }
};

// Support graph of a finite metric: edges are the pairs with no third point
// strictly between. Verifies the metric, that the graph reproduces it, and
// classifies the induced location problem.
inline SupportResult support_graph(const DistanceMatrix& mu) {
  int n = mu.n;
  for (int i = 0; i < n; ++i)
    if (mu.at(i, i) != 0) throw std::invalid_argument("not a metric: nonzero diagonal");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (mu.at(i, j) != mu.at(j, i)) throw std::invalid_argument("not a metric: asymmetric");
      if (mu.at(i, j) <= 0)
        throw std::invalid_argument("not a metric: nonpositive distance between distinct points");
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        if (mu.at(i, k) > mu.at(i, j) + mu.at(j, k))
          throw std::invalid_argument("not a metric: triangle violation at (" +
                                      std::to_string(i) + "," + std::to_string(j) + "," +
                                      std::to_string(k) + ")");
      }

  std::vector<std::pair<int, int>> es;
  std::vector<Rat> ws;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      bool direct = true;
      for (int z = 0; z < n && direct; ++z) {
        if (z == x || z == y) continue;
        if (mu.at(x, z) + mu.at(z, y) == mu.at(x, y)) direct = false;
      }
      if (direct) {
        es.emplace_back(x, y);
        ws.push_back(mu.at(x, y));
      }
    }

  SupportResult res;
  res.graph = Graph(n, es, ws);
  require_connected(res.graph);
  DistanceMatrix dm = shortest_path_metric(res.graph);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (dm.at(x, y) != mu.at(x, y))
        throw std::logic_error("support graph fails to reproduce the metric");

  res.mu_modular = true;
  for (int x = 0; x < n && res.mu_modular; ++x)
    for (int y = x + 1; y < n && res.mu_modular; ++y)
      for (int z = y + 1; z < n && res.mu_modular; ++z) {
        bool has = false;
        for (int m = 0; m < n && !has; ++m)
          has = mu.at(x, m) + mu.at(m, y) == mu.at(x, y) &&
                mu.at(y, m) + mu.at(m, z) == mu.at(y, z) &&
                mu.at(x, m) + mu.at(m, z) == mu.at(x, z);
        if (!has) {
          res.mu_modular = false;
          res.median_witness = {x, y, z};
        }
      }
  if (!res.mu_modular) return res;

  auto op = compute_orbits(res.graph);
  if (!weights_are_orbit_invariant(res.graph, op, res.graph.weight))
    throw std::logic_error("support weights not orbit-invariant");

  auto orient = find_admissible_orientation(res.graph);
  if (orient.ok) {
    res.orientable = true;
    res.orientation = orient.orientation;
  } else {
    res.conflict_edge = orient.conflict_edge;
    res.conflict_chain = orient.conflict_chain;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Oracle

inline SolveReport brute_force_solve(const LocationInstance& inst, long long cap = 1000000) {
  int T = inst.terminals();
  long long combos = 1;
  for (int i = 0; i < inst.extra_count; ++i) {
    combos *= T;
    if (combos > cap) throw std::runtime_error("cap exceeded");
  }
  SolveReport rep;
  rep.terminal_constant = terminal_constant(inst);
  Location rho;
  rho.placement.assign(inst.extra_count, 0);
  bool first = true;
  for (long long it = 0; it < combos; ++it) {
    long long t = it;
    for (int i = inst.extra_count - 1; i >= 0; --i) {
      rho.placement[i] = static_cast<int>(t % T);
      t /= T;
    }
    Rat v = objective(inst, rho);
    if (first || v < rep.value) {
      rep.value = std::move(v);
      rep.location = rho;
      first = false;
    }
  }
  if (first) rep.value = 0;  // no extras: empty placement
  return rep;
}

}  // namespace zeroext
