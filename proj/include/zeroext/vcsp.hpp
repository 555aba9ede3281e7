#pragma once

// Valued CSPs with heterogeneous finite domains, their basic LP relaxation,
// and the rounding scheme that turns a tight relaxation into an assignment:
// fix variables one by one, keeping the first value that preserves the
// relaxation optimum. A brute-force oracle and a fractional-polymorphism
// checker round out the verification surface.
//
// Constraint tables are flat vectors in row-major order over the (sorted)
// scope, last coordinate fastest. Domain lists hold element ids and are kept
// strictly ascending; that order is the canonical one used for fixing and
// for lexicographic argmins.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeroext/lp.hpp"
#include "zeroext/rational.hpp"
#include "zeroext/semilattice.hpp"

namespace zeroext {

struct VcspConstraint {
  std::vector<int> scope;       // strictly increasing variable indices
  std::vector<ExtRat> table;    // size = product of scope domain sizes
};

struct VcspInstance {
  std::vector<std::vector<int>> domains;  // per variable, strictly ascending
  std::vector<VcspConstraint> constraints;
};

inline void validate_instance(const VcspInstance& inst) {
  int n = static_cast<int>(inst.domains.size());
  for (const auto& d : inst.domains) {
    if (d.empty()) throw std::invalid_argument("empty domain");
    for (size_t i = 0; i + 1 < d.size(); ++i)
      if (d[i] >= d[i + 1]) throw std::invalid_argument("domain not strictly ascending");
  }
  for (const auto& c : inst.constraints) {
    if (c.scope.empty()) throw std::invalid_argument("empty scope");
    long long sz = 1;
    for (size_t k = 0; k < c.scope.size(); ++k) {
      int v = c.scope[k];
      if (v < 0 || v >= n) throw std::invalid_argument("scope index out of range");
      if (k > 0 && c.scope[k - 1] >= v)
        throw std::invalid_argument("scope not strictly increasing");
      sz *= static_cast<long long>(inst.domains[v].size());
    }
    if (static_cast<long long>(c.table.size()) != sz)
      throw std::invalid_argument("table size mismatch");
  }
}

namespace detail {

inline int domain_pos(const std::vector<int>& dom, int element) {
  auto it = std::lower_bound(dom.begin(), dom.end(), element);
  if (it == dom.end() || *it != element)
    throw std::invalid_argument("element not in domain");
  return static_cast<int>(it - dom.begin());
}

// run fn(positions) for every tuple over the given radix sizes
template <class Fn>
void for_each_tuple(const std::vector<int>& sizes, Fn&& fn) {
  std::vector<int> pos(sizes.size(), 0);
  if (sizes.empty()) {
    fn(pos);
    return;
  }
  for (;;) {
    fn(pos);
    int k = static_cast<int>(sizes.size()) - 1;
    while (k >= 0 && ++pos[k] == sizes[k]) pos[k--] = 0;
    if (k < 0) break;
  }
}

inline long long flat_index(const std::vector<int>& sizes, const std::vector<int>& pos) {
  long long idx = 0;
  for (size_t k = 0; k < sizes.size(); ++k) idx = idx * sizes[k] + pos[k];
  return idx;
}

}  // namespace detail

// total cost of a full assignment (values[i] an element of D_i)
inline ExtRat evaluate(const VcspInstance& inst, const std::vector<int>& values) {
  if (values.size() != inst.domains.size())
    throw std::invalid_argument("assignment arity mismatch");
  ExtRat total = Rat(0);
  for (const auto& c : inst.constraints) {
    std::vector<int> sizes, pos;
    for (int v : c.scope) {
      sizes.push_back(static_cast<int>(inst.domains[v].size()));
      pos.push_back(detail::domain_pos(inst.domains[v], values[v]));
    }
    total += c.table[detail::flat_index(sizes, pos)];
  }
  return total;
}

// ---------------------------------------------------------------------------
// Basic LP relaxation

struct BlpProgram {
  LinearProgram lp;  // minimize; all rows equalities; columns = lambda | mu
  struct LambdaVar {
    int constraint;
    std::vector<int> tuple;  // element values over the scope
  };
  std::vector<LambdaVar> lambda;
  std::vector<std::pair<int, int>> mu;  // (variable, element)
  int mu_offset = 0;
};

// The relaxation exactly as formulated: one distribution per constraint over
// its finite tuples, one distribution per variable, marginalization rows
// tying them together. Tuples with infinite cost get no variable at all.
inline BlpProgram build_blp(const VcspInstance& inst) {
  validate_instance(inst);
  int n = static_cast<int>(inst.domains.size());
  BlpProgram p;
  std::vector<Rat> obj;

  for (int f = 0; f < static_cast<int>(inst.constraints.size()); ++f) {
    const auto& c = inst.constraints[f];
    std::vector<int> sizes;
    for (int v : c.scope) sizes.push_back(static_cast<int>(inst.domains[v].size()));
    size_t before = p.lambda.size();
    detail::for_each_tuple(sizes, [&](const std::vector<int>& pos) {
      const ExtRat& val = c.table[detail::flat_index(sizes, pos)];
      if (!val.finite()) return;
      std::vector<int> tuple;
      for (size_t k = 0; k < c.scope.size(); ++k)
        tuple.push_back(inst.domains[c.scope[k]][pos[k]]);
      p.lambda.push_back({f, std::move(tuple)});
      obj.push_back(val.v);
    });
    if (p.lambda.size() == before) throw std::runtime_error("infeasible constraint");
  }
  p.mu_offset = static_cast<int>(p.lambda.size());
  for (int i = 0; i < n; ++i)
    for (int a : inst.domains[i]) p.mu.emplace_back(i, a);

  p.lp.num_vars = p.mu_offset + static_cast<int>(p.mu.size());
  p.lp.objective = std::move(obj);
  p.lp.objective.resize(p.lp.num_vars, Rat(0));

  auto mu_col = [&](int var, int element) {
    for (size_t j = 0; j < p.mu.size(); ++j)
      if (p.mu[j] == std::pair<int, int>{var, element})
        return p.mu_offset + static_cast<int>(j);
    throw std::logic_error("mu column missing");
  };

  // marginalization: for every (constraint, scope variable, element)
  for (int f = 0; f < static_cast<int>(inst.constraints.size()); ++f) {
    const auto& c = inst.constraints[f];
    for (size_t k = 0; k < c.scope.size(); ++k) {
      int var = c.scope[k];
      for (int a : inst.domains[var]) {
        std::vector<Rat> row(p.lp.num_vars, Rat(0));
        for (size_t j = 0; j < p.lambda.size(); ++j)
          if (p.lambda[j].constraint == f && p.lambda[j].tuple[k] == a) row[j] = 1;
        row[mu_col(var, a)] = -1;
        p.lp.add_row(std::move(row), Rat(0), RowType::EQ);
      }
    }
  }
  // one simplex row per variable
  for (int i = 0; i < n; ++i) {
    std::vector<Rat> row(p.lp.num_vars, Rat(0));
    for (int a : inst.domains[i]) row[mu_col(i, a)] = 1;
    p.lp.add_row(std::move(row), Rat(1), RowType::EQ);
  }
  return p;
}

inline std::vector<std::string> blp_var_names(const BlpProgram& p) {
  std::vector<std::string> names;
  for (const auto& lv : p.lambda) {
    std::string s = "l_" + std::to_string(lv.constraint);
    for (int e : lv.tuple) s += "_" + std::to_string(e);
    names.push_back(std::move(s));
  }
  for (const auto& [var, a] : p.mu)
    names.push_back("m_" + std::to_string(var) + "_" + std::to_string(a));
  return names;
}

inline std::pair<Rat, std::vector<Rat>> solve_lp_exact(const BlpProgram& p) {
  auto r = solve_lp(p.lp);
  if (r.status == LpStatus::Infeasible) throw std::runtime_error("blp infeasible");
  if (r.status == LpStatus::Unbounded) throw std::runtime_error("blp unbounded");
  return {r.objective, r.x};
}

// ---------------------------------------------------------------------------
// Relaxation value with folding

namespace detail {

// Equivalent-by-construction shrink of the relaxation: prune domain values
// that no finite tuple supports (their mu is forced to 0), fold constraints
// whose scope is pinned down to at most one free variable, price unary costs
// directly on mu. Every step preserves the relaxation optimum exactly.
struct FoldedRelaxation {
  bool infeasible = false;
  Rat constant = 0;
  std::vector<std::vector<int>> domains;
  std::vector<std::vector<ExtRat>> unary;  // aligned with domains
  std::vector<VcspConstraint> higher;      // arity >= 2, tables over current domains
};

inline FoldedRelaxation fold_relaxation(const VcspInstance& inst,
                                        std::vector<std::vector<int>> domains) {
  int n = static_cast<int>(inst.domains.size());
  FoldedRelaxation st;
  st.domains = std::move(domains);
  st.unary.resize(n);
  for (int i = 0; i < n; ++i) st.unary[i].assign(st.domains[i].size(), ExtRat(Rat(0)));

  // slice original tables onto the working domains
  for (const auto& c : inst.constraints) {
    std::vector<int> full_sizes, sub_sizes;
    std::vector<std::vector<int>> keep;  // positions in the original domain
    for (int v : c.scope) {
      full_sizes.push_back(static_cast<int>(inst.domains[v].size()));
      std::vector<int> kp;
      for (int e : st.domains[v]) kp.push_back(domain_pos(inst.domains[v], e));
      sub_sizes.push_back(static_cast<int>(kp.size()));
      keep.push_back(std::move(kp));
    }
    VcspConstraint sliced;
    sliced.scope = c.scope;
    for_each_tuple(sub_sizes, [&](const std::vector<int>& pos) {
      std::vector<int> orig(pos.size());
      for (size_t k = 0; k < pos.size(); ++k) orig[k] = keep[k][pos[k]];
      sliced.table.push_back(c.table[flat_index(full_sizes, orig)]);
    });
    if (sliced.scope.size() == 1) {
      for (size_t a = 0; a < sliced.table.size(); ++a)
        st.unary[sliced.scope[0]][a] += sliced.table[a];
    } else {
      st.higher.push_back(std::move(sliced));
    }
  }

  for (bool changed = true; changed;) {
    changed = false;
    // prune values with no finite support
    std::vector<std::vector<char>> alive(n);
    for (int i = 0; i < n; ++i) alive[i].assign(st.domains[i].size(), 1);
    for (int i = 0; i < n; ++i)
      for (size_t a = 0; a < st.domains[i].size(); ++a)
        if (!st.unary[i][a].finite()) alive[i][a] = 0;
    for (const auto& c : st.higher) {
      std::vector<int> sizes;
      for (int v : c.scope) sizes.push_back(static_cast<int>(st.domains[v].size()));
      std::vector<std::vector<char>> support(c.scope.size());
      for (size_t k = 0; k < c.scope.size(); ++k) support[k].assign(sizes[k], 0);
      for_each_tuple(sizes, [&](const std::vector<int>& pos) {
        if (!c.table[flat_index(sizes, pos)].finite()) return;
        for (size_t k = 0; k < pos.size(); ++k) support[k][pos[k]] = 1;
      });
      for (size_t k = 0; k < c.scope.size(); ++k)
        for (int a = 0; a < sizes[k]; ++a)
          if (!support[k][a]) alive[c.scope[k]][a] = 0;
    }
    bool removed = false;
    for (int i = 0; i < n; ++i)
      for (char f : alive[i])
        if (!f) removed = true;
    if (removed) {
      std::vector<std::vector<int>> nd(n);
      std::vector<std::vector<ExtRat>> nu(n);
      for (int i = 0; i < n; ++i) {
        for (size_t a = 0; a < st.domains[i].size(); ++a)
          if (alive[i][a]) {
            nd[i].push_back(st.domains[i][a]);
            nu[i].push_back(st.unary[i][a]);
          }
        if (nd[i].empty()) {
          st.infeasible = true;
          return st;
        }
      }
      // re-slice higher tables to the surviving values
      std::vector<VcspConstraint> nh;
      for (const auto& c : st.higher) {
        std::vector<int> sizes, sub_sizes;
        std::vector<std::vector<int>> keep;
        for (int v : c.scope) {
          sizes.push_back(static_cast<int>(st.domains[v].size()));
          std::vector<int> kp;
          for (size_t a = 0; a < st.domains[v].size(); ++a)
            if (alive[v][a]) kp.push_back(static_cast<int>(a));
          sub_sizes.push_back(static_cast<int>(kp.size()));
          keep.push_back(std::move(kp));
        }
        VcspConstraint sliced;
        sliced.scope = c.scope;
        for_each_tuple(sub_sizes, [&](const std::vector<int>& pos) {
          std::vector<int> orig(pos.size());
          for (size_t k = 0; k < pos.size(); ++k) orig[k] = keep[k][pos[k]];
          sliced.table.push_back(c.table[flat_index(sizes, orig)]);
        });
        nh.push_back(std::move(sliced));
      }
      st.domains = std::move(nd);
      st.unary = std::move(nu);
      st.higher = std::move(nh);
      changed = true;
      continue;
    }

    // fold constraints pinned to at most one free variable
    std::vector<VcspConstraint> rest;
    for (auto& c : st.higher) {
      std::vector<int> sizes;
      int free_count = 0, free_pos = -1;
      for (size_t k = 0; k < c.scope.size(); ++k) {
        sizes.push_back(static_cast<int>(st.domains[c.scope[k]].size()));
        if (sizes.back() > 1) {
          ++free_count;
          free_pos = static_cast<int>(k);
        }
      }
      if (free_count >= 2) {
        rest.push_back(std::move(c));
        continue;
      }
      changed = true;
      if (free_count == 0) {
        const ExtRat& v = c.table[0];
        if (!v.finite()) throw std::logic_error("pinned infinite tuple survived pruning");
        st.constant += v.v;
      } else {
        int var = c.scope[free_pos];
        for (int a = 0; a < sizes[free_pos]; ++a) {
          std::vector<int> pos(c.scope.size(), 0);
          pos[free_pos] = a;
          st.unary[var][a] += c.table[flat_index(sizes, pos)];
        }
      }
    }
    st.higher = std::move(rest);
  }
  return st;
}

// exact optimum of the relaxation over the given (sub)domains
inline ExtRat relaxation_value(const VcspInstance& inst,
                               std::vector<std::vector<int>> domains) {
  auto st = fold_relaxation(inst, std::move(domains));
  if (st.infeasible) return ExtRat::infinity();
  int n = static_cast<int>(st.domains.size());
  Rat total = st.constant;

  std::vector<char> in_lp(n, 0);
  for (const auto& c : st.higher)
    for (int v : c.scope) in_lp[v] = 1;
  for (int i = 0; i < n; ++i) {
    if (in_lp[i]) continue;
    Rat best = st.unary[i][0].v;
    for (const auto& u : st.unary[i]) best = std::min(best, u.v);
    total += best;
  }
  if (st.higher.empty()) return ExtRat(total);

  // LP over the entangled part: lambda per finite tuple, mu per (var, value)
  LinearProgram lp;
  std::vector<std::pair<int, int>> mu;  // (var, position)
  std::vector<int> mu_base(n, -1);
  for (int i = 0; i < n; ++i)
    if (in_lp[i]) {
      mu_base[i] = static_cast<int>(mu.size());
      for (size_t a = 0; a < st.domains[i].size(); ++a)
        mu.emplace_back(i, static_cast<int>(a));
    }
  struct LV {
    int constraint;
    std::vector<int> pos;
  };
  std::vector<LV> lambda;
  for (int f = 0; f < static_cast<int>(st.higher.size()); ++f) {
    const auto& c = st.higher[f];
    std::vector<int> sizes;
    for (int v : c.scope) sizes.push_back(static_cast<int>(st.domains[v].size()));
    for_each_tuple(sizes, [&](const std::vector<int>& pos) {
      if (!c.table[flat_index(sizes, pos)].finite()) return;
      lambda.push_back({f, pos});
    });
  }
  int nl = static_cast<int>(lambda.size());
  lp.num_vars = nl + static_cast<int>(mu.size());
  lp.objective.assign(lp.num_vars, Rat(0));
  for (int j = 0; j < nl; ++j) {
    const auto& c = st.higher[lambda[j].constraint];
    std::vector<int> sizes;
    for (int v : c.scope) sizes.push_back(static_cast<int>(st.domains[v].size()));
    lp.objective[j] = c.table[flat_index(sizes, lambda[j].pos)].v;
  }
  for (size_t m = 0; m < mu.size(); ++m)
    lp.objective[nl + static_cast<int>(m)] = st.unary[mu[m].first][mu[m].second].v;

  for (int f = 0; f < static_cast<int>(st.higher.size()); ++f) {
    const auto& c = st.higher[f];
    for (size_t k = 0; k < c.scope.size(); ++k) {
      int var = c.scope[k];
      for (size_t a = 0; a < st.domains[var].size(); ++a) {
        std::vector<Rat> row(lp.num_vars, Rat(0));
        for (int j = 0; j < nl; ++j)
          if (lambda[j].constraint == f &&
              lambda[j].pos[k] == static_cast<int>(a))
            row[j] = 1;
        row[nl + mu_base[var] + static_cast<int>(a)] = -1;
        lp.add_row(std::move(row), Rat(0), RowType::EQ);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!in_lp[i]) continue;
    std::vector<Rat> row(lp.num_vars, Rat(0));
    for (size_t a = 0; a < st.domains[i].size(); ++a)
      row[nl + mu_base[i] + static_cast<int>(a)] = 1;
    lp.add_row(std::move(row), Rat(1), RowType::EQ);
  }
  auto r = solve_lp(lp);
  if (r.status == LpStatus::Infeasible) return ExtRat::infinity();
  if (r.status != LpStatus::Optimal) throw std::logic_error("relaxation unbounded");
  return ExtRat(total + r.objective);
}

}  // namespace detail

// optimum of the basic LP relaxation (∞ when it is infeasible)
inline ExtRat blp_optimum(const VcspInstance& inst) {
  validate_instance(inst);
  return detail::relaxation_value(inst, inst.domains);
}

struct VcspSolution {
  bool exact = false;          // fixing succeeded; assignment is meaningful
  ExtRat blp_value = ExtRat::infinity();
  std::vector<int> assignment;
  int lp_calls = 0;
};

// Variable fixing: for each variable in index order, try domain values in
// ascending order and keep the first whose fixed instance preserves the
// relaxation optimum. Reports exact=false ("BLP not exact") when some
// variable has no optimum-preserving value.
inline VcspSolution solve_vcsp_by_blp(const VcspInstance& inst) {
  validate_instance(inst);
  VcspSolution out;
  auto value_of = [&](std::vector<std::vector<int>> doms) {
    ++out.lp_calls;
    return detail::relaxation_value(inst, std::move(doms));
  };
  ExtRat base = value_of(inst.domains);
  out.blp_value = base;
  if (!base.finite()) return out;

  int n = static_cast<int>(inst.domains.size());
  auto doms = inst.domains;
  std::vector<int> assign(n, 0);
  for (int i = 0; i < n; ++i) {
    bool fixed = false;
    for (int a : doms[i]) {
      auto probe = doms;
      probe[i] = {a};
      ExtRat v = value_of(probe);
      if (v < base) throw std::logic_error("fixing decreased the relaxation");
      if (v == base) {
        doms = std::move(probe);
        assign[i] = a;
        fixed = true;
        break;
      }
    }
    if (!fixed) return out;  // BLP not exact
  }
  out.exact = true;
  out.assignment = std::move(assign);
  ExtRat attained = evaluate(inst, out.assignment);
  if (!(attained == base))
    throw std::logic_error("fixed assignment misses the relaxation optimum");
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

struct BruteForceResult {
  ExtRat value = ExtRat::infinity();
  std::vector<int> assignment;
};

inline BruteForceResult brute_force_vcsp(const VcspInstance& inst,
                                         long long cap = 10000000) {
  validate_instance(inst);
  long long combos = 1;
  for (const auto& d : inst.domains) {
    combos *= static_cast<long long>(d.size());
    if (combos > cap) throw std::runtime_error("cap exceeded");
  }
  BruteForceResult best;
  std::vector<int> sizes;
  for (const auto& d : inst.domains) sizes.push_back(static_cast<int>(d.size()));
  detail::for_each_tuple(sizes, [&](const std::vector<int>& pos) {
    std::vector<int> values(pos.size());
    for (size_t i = 0; i < pos.size(); ++i) values[i] = inst.domains[i][pos[i]];
    ExtRat v = evaluate(inst, values);
    if (best.assignment.empty() || v < best.value) {
      best.value = v;
      best.assignment = std::move(values);
    }
  });
  if (best.assignment.empty()) {
    // zero variables: the empty assignment evaluates the constants
    best.value = evaluate(inst, {});
    best.assignment = {};
  }
  return best;
}

struct PolymorphismResult {
  bool ok = true;
  std::vector<int> x, y;  // violating pair when !ok
};

// Does f admit the meet + fractional-join pair as a fractional polymorphism?
// Checked pointwise: f(x) + f(y) >= f(x^y) + sum of cell-weighted values.
// This is the submodularity inequality on the product of the given
// semilattices; f is indexed row-major over their element ids.
inline PolymorphismResult verify_polymorphism(const std::vector<const Semilattice*>& Ls,
                                              const std::vector<ExtRat>& f) {
  size_t n = Ls.size();
  long long size = 1;
  for (const auto* L : Ls) size *= L->k;
  if (static_cast<long long>(f.size()) != size)
    throw std::invalid_argument("table size mismatch");
  std::vector<int> sizes;
  for (const auto* L : Ls) sizes.push_back(L->k);

  PolymorphismResult res;
  detail::for_each_tuple(sizes, [&](const std::vector<int>& xi) {
    if (!res.ok) return;
    detail::for_each_tuple(sizes, [&](const std::vector<int>& yi) {
      if (!res.ok) return;
      ExtRat lhs = f[detail::flat_index(sizes, xi)] + f[detail::flat_index(sizes, yi)];
      if (lhs.inf) return;
      std::vector<int> m(n);
      for (size_t i = 0; i < n; ++i) m[i] = Ls[i]->meet(xi[i], yi[i]);
      ExtRat rhs = f[detail::flat_index(sizes, m)];
      for (const auto& [tuple, coeff] : product_fractional_join(Ls, xi, yi))
        rhs += scale(coeff, f[detail::flat_index(sizes, tuple)]);
      if (rhs > lhs) {
        res.ok = false;
        res.x = xi;
        res.y = yi;
      }
    });
  });
  return res;
}

}  // namespace zeroext
