#pragma once

// Exact linear programming over the rationals: a dense two-phase primal
// simplex with Bland's rule. Small and deliberately simple; the programs we
// feed it (basic relaxations of local instances, metric relaxations with
// generated triangle cuts) are modest, and exactness matters more than speed.

#include <stdexcept>
#include <vector>

#include "zeroext/rational.hpp"

namespace zeroext {

enum class RowType { EQ, LE, GE };

// minimize objective . x  subject to the rows, x >= 0 componentwise
struct LinearProgram {
  struct Row {
    std::vector<Rat> a;
    Rat rhs;
    RowType type = RowType::EQ;
  };
  int num_vars = 0;
  std::vector<Rat> objective;
  std::vector<Row> rows;

  int add_row(std::vector<Rat> a, Rat rhs, RowType type) {
    if (static_cast<int>(a.size()) != num_vars)
      throw std::invalid_argument("row width mismatch");
    rows.push_back({std::move(a), std::move(rhs), type});
    return static_cast<int>(rows.size()) - 1;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rat objective;
  std::vector<Rat> x;
};

inline bool lp_feasible(const LinearProgram& lp, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != lp.num_vars) return false;
  for (const Rat& xi : x)
    if (xi < 0) return false;
  for (const auto& row : lp.rows) {
    Rat lhs = 0;
    for (int j = 0; j < lp.num_vars; ++j) lhs += row.a[j] * x[j];
    if (row.type == RowType::EQ && lhs != row.rhs) return false;
    if (row.type == RowType::LE && lhs > row.rhs) return false;
    if (row.type == RowType::GE && lhs < row.rhs) return false;
  }
  return true;
}

namespace detail {

struct Tableau {
  int m = 0, n = 0;                 // constraint rows, structural+slack columns
  std::vector<std::vector<Rat>> a;  // m x (n+1), last column = rhs
  std::vector<Rat> red;             // n reduced costs
  std::vector<int> basis;           // m basic column indices

  void pivot(int r, int c) {
    Rat p = a[r][c];
    for (Rat& v : a[r]) v /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (int j = 0; j <= n; ++j) a[i][j] -= f * a[r][j];
    }
    if (red[c] != 0) {
      Rat f = red[c];
      for (int j = 0; j < n; ++j) red[j] -= f * a[r][j];
    }
    basis[r] = c;
  }

  // Bland: entering column = lowest index with negative reduced cost;
  // leaving row = min ratio, ties by lowest basic column index.
  // Returns false when optimal; throws on unboundedness.
  bool step(const std::vector<char>& allowed) {
    int c = -1;
    for (int j = 0; j < n; ++j)
      if (allowed[j] && red[j] < 0) {
        c = j;
        break;
      }
    if (c < 0) return false;
    int r = -1;
    for (int i = 0; i < m; ++i) {
      if (a[i][c] <= 0) continue;
      if (r < 0) {
        r = i;
        continue;
      }
      Rat cur = a[r][n] / a[r][c];
      Rat cand = a[i][n] / a[i][c];
      if (cand < cur || (cand == cur && basis[i] < basis[r])) r = i;
    }
    if (r < 0) throw std::logic_error("lp unbounded");
    pivot(r, c);
    return true;
  }
};

}  // namespace detail

inline LpResult solve_lp(const LinearProgram& lp) {
  for (const auto& row : lp.rows)
    if (static_cast<int>(row.a.size()) != lp.num_vars)
      throw std::invalid_argument("row width mismatch");
  if (static_cast<int>(lp.objective.size()) != lp.num_vars)
    throw std::invalid_argument("objective width mismatch");

  int m = static_cast<int>(lp.rows.size());
  int nslack = 0;
  for (const auto& row : lp.rows)
    if (row.type != RowType::EQ) ++nslack;

  detail::Tableau t;
  t.m = m;
  t.n = lp.num_vars + nslack + m;  // structural | slack | artificial
  t.a.assign(m, std::vector<Rat>(t.n + 1, Rat(0)));
  t.basis.assign(m, -1);
  int art0 = lp.num_vars + nslack;

  int si = 0;
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    for (int j = 0; j < lp.num_vars; ++j) t.a[i][j] = row.a[j];
    if (row.type == RowType::LE) t.a[i][lp.num_vars + si] = 1;
    if (row.type == RowType::GE) t.a[i][lp.num_vars + si] = -1;
    if (row.type != RowType::EQ) ++si;
    t.a[i][t.n] = row.rhs;
    if (t.a[i][t.n] < 0)
      for (int j = 0; j <= t.n; ++j) t.a[i][j] = -t.a[i][j];
    t.a[i][art0 + i] = 1;
    t.basis[i] = art0 + i;
  }

  // phase 1: minimize the artificial sum
  std::vector<char> allowed(t.n, 1);
  t.red.assign(t.n, Rat(0));
  for (int j = 0; j < art0; ++j) {
    Rat s = 0;
    for (int i = 0; i < m; ++i) s += t.a[i][j];
    t.red[j] = -s;
  }
  while (t.step(allowed)) {
  }
  Rat infeas = 0;
  for (int i = 0; i < m; ++i)
    if (t.basis[i] >= art0) infeas += t.a[i][t.n];
  LpResult res;
  if (infeas != 0) {
    res.status = LpStatus::Infeasible;
    return res;
  }

  // drive leftover artificials out of the basis; rows with no structural
  // pivot are redundant and get neutralized in place
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < art0) continue;
    int c = -1;
    for (int j = 0; j < art0; ++j)
      if (t.a[i][j] != 0) {
        c = j;
        break;
      }
    if (c >= 0) t.pivot(i, c);
  }

  // phase 2: original objective, artificials barred
  for (int j = art0; j < t.n; ++j) allowed[j] = 0;
  for (int j = 0; j < t.n; ++j) t.red[j] = 0;
  for (int j = 0; j < lp.num_vars; ++j) t.red[j] = lp.objective[j];
  for (int i = 0; i < m; ++i) {
    int b = t.basis[i];
    if (b >= lp.num_vars) continue;  // slacks and artificials cost nothing
    if (lp.objective[b] == 0) continue;
    Rat f = lp.objective[b];
    for (int j = 0; j < t.n; ++j) t.red[j] -= f * t.a[i][j];
  }
  try {
    while (t.step(allowed)) {
    }
  } catch (const std::logic_error&) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.x.assign(lp.num_vars, Rat(0));
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < lp.num_vars) res.x[t.basis[i]] = t.a[i][t.n];
  res.objective = 0;
  for (int j = 0; j < lp.num_vars; ++j) res.objective += lp.objective[j] * res.x[j];
  if (!lp_feasible(lp, res.x)) throw std::logic_error("lp solution infeasible");
  return res;
}

}  // namespace zeroext
