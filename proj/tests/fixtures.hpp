#pragma once

// Small graphs and semilattices shared across the test suites.

#include <utility>
#include <vector>

#include "zeroext/graph.hpp"
#include "zeroext/semilattice.hpp"

namespace zxt {

using zeroext::Graph;
using zeroext::Rat;
using zeroext::Semilattice;

inline Graph path(int k) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i + 1 < k; ++i) es.emplace_back(i, i + 1);
  return Graph(k, es);
}

inline Graph cycle(int k) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < k; ++i) es.emplace_back(i, (i + 1) % k);
  return Graph(k, es);
}

// Star with the center at vertex 0.
inline Graph star(int leaves) {
  std::vector<std::pair<int, int>> es;
  for (int i = 1; i <= leaves; ++i) es.emplace_back(0, i);
  return Graph(leaves + 1, es);
}

inline Graph complete(int m) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) es.emplace_back(i, j);
  return Graph(m, es);
}

inline Graph complete_bipartite(int a, int b) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) es.emplace_back(i, a + j);
  return Graph(a + b, es);
}

// 3-cube; vertices are bit triples, edges flip one bit.
inline Graph cube() {
  std::vector<std::pair<int, int>> es;
  for (int v = 0; v < 8; ++v)
    for (int b = 0; b < 3; ++b)
      if (!(v & (1 << b))) es.emplace_back(v, v | (1 << b));
  return Graph(8, es);
}

// rows x cols grid, vertex id = row * cols + col.
inline Graph grid(int rows, int cols) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      int v = i * cols + j;
      if (j + 1 < cols) es.emplace_back(v, v + 1);
      if (i + 1 < rows) es.emplace_back(v, v + cols);
    }
  return Graph(rows * cols, es);
}

// C4 with alternating weights 1,2,1,2 on edges (0,1),(1,2),(2,3),(0,3).
inline Graph weighted_c4() {
  return Graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}},
               {Rat(1), Rat(2), Rat(1), Rat(2)});
}

inline std::vector<std::vector<char>> leq_from_covers(
    int k, std::vector<std::pair<int, int>> cov) {
  std::vector<std::vector<char>> leq(k, std::vector<char>(k, 0));
  for (int i = 0; i < k; ++i) leq[i][i] = 1;
  for (auto [a, b] : cov) leq[a][b] = 1;
  for (int m = 0; m < k; ++m)  // transitive closure
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (leq[a][m] && leq[m][b]) leq[a][b] = 1;
  return leq;
}

inline Semilattice chain_sl(int k) {
  std::vector<std::pair<int, int>> cov;
  std::vector<Rat> val;
  for (int i = 0; i < k; ++i) {
    if (i + 1 < k) cov.emplace_back(i, i + 1);
    val.emplace_back(i);
  }
  return Semilattice(leq_from_covers(k, cov), val);
}

// 0 = bottom, 1 and 2 atoms, 3 = top
inline Semilattice diamond_sl(std::vector<Rat> val = {0, 1, 1, 2}) {
  return Semilattice(leq_from_covers(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}),
                     std::move(val));
}

// two atoms over a bottom, no top; the atoms form an antipodal pair
inline Semilattice fan_sl(Rat va, Rat vb) {
  return Semilattice(leq_from_covers(3, {{0, 1}, {0, 2}}),
                     {Rat(0), std::move(va), std::move(vb)});
}

}  // namespace zxt
