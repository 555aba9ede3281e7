#pragma once

// Modular semilattices with valuations, and the fractional-join calculus on
// them: interval profiles in the plane, envelopes (the chain of maximal
// extreme points of the profile hull), rational cone measures, submodularity
// checks, and their product versions. All coefficients are exact rationals;
// the trigonometric reading of the cone measure never appears here.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zeroext/graph.hpp"
#include "zeroext/orbits.hpp"
#include "zeroext/rational.hpp"

namespace zeroext {

struct SemilatticeCheck {
  bool ok = false;
  std::string reason;
  std::array<int, 3> witness{-1, -1, -1};
};

namespace detail {

inline void validate_partial_order(const std::vector<std::vector<char>>& leq) {
  int k = static_cast<int>(leq.size());
  for (int a = 0; a < k; ++a) {
    if (static_cast<int>(leq[a].size()) != k)
      throw std::invalid_argument("order matrix not square");
    if (!leq[a][a]) throw std::invalid_argument("order not reflexive");
  }
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      if (a != b && leq[a][b] && leq[b][a])
        throw std::invalid_argument("order not antisymmetric");
      if (!leq[a][b]) continue;
      for (int c = 0; c < k; ++c)
        if (leq[b][c] && !leq[a][c]) throw std::invalid_argument("order not transitive");
    }
}

}  // namespace detail

// Checks the modular-semilattice axioms on a finite poset: meets exist, every
// principal ideal is a modular lattice (graded with the rank identity), and
// every pairwise-bounded triple is bounded. Witnesses name the offending
// pair/triple.
inline SemilatticeCheck is_modular_semilattice(const std::vector<std::vector<char>>& leq) {
  detail::validate_partial_order(leq);
  int k = static_cast<int>(leq.size());
  if (k == 0) return {false, "empty poset", {}};
  SemilatticeCheck res;

  std::vector<int> meet(static_cast<size_t>(k) * k, -1);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      std::vector<int> lows;
      for (int z = 0; z < k; ++z)
        if (leq[z][a] && leq[z][b]) lows.push_back(z);
      int top_count = 0, top = -1;
      for (int z : lows) {
        bool maximal = true;
        for (int w : lows)
          if (w != z && leq[z][w]) maximal = false;
        if (maximal) {
          ++top_count;
          top = z;
        }
      }
      if (top_count != 1) return {false, "meet missing or ambiguous", {a, b, -1}};
      meet[static_cast<size_t>(a) * k + b] = meet[static_cast<size_t>(b) * k + a] = top;
    }

  // joins of bounded pairs are unique in any meet-semilattice
  std::vector<int> join(static_cast<size_t>(k) * k, -1);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      std::vector<int> ups;
      for (int z = 0; z < k; ++z)
        if (leq[a][z] && leq[b][z]) ups.push_back(z);
      if (ups.empty()) continue;
      int cnt = 0, bot = -1;
      for (int z : ups) {
        bool minimal = true;
        for (int w : ups)
          if (w != z && leq[w][z]) minimal = false;
        if (minimal) {
          ++cnt;
          bot = z;
        }
      }
      if (cnt != 1) return {false, "bounded pair without join", {a, b, -1}};
      join[static_cast<size_t>(a) * k + b] = join[static_cast<size_t>(b) * k + a] = bot;
    }

  // rank = longest chain from the minimum; gradedness means covers step by 1
  int bottom = 0;
  for (int z = 0; z < k; ++z) bottom = meet[static_cast<size_t>(bottom) * k + z];
  std::vector<int> rank(k, 0);
  {
    std::vector<int> order(k);
    for (int i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      int ca = 0, cb = 0;
      for (int z = 0; z < k; ++z) {
        ca += leq[z][a];
        cb += leq[z][b];
      }
      return ca < cb;
    });
    for (int x : order)
      for (int z = 0; z < k; ++z)
        if (z != x && leq[z][x]) rank[x] = std::max(rank[x], rank[z] + 1);
  }
  auto covers = [&](int a, int b) {  // a covered by b
    if (a == b || !leq[a][b]) return false;
    for (int z = 0; z < k; ++z)
      if (z != a && z != b && leq[a][z] && leq[z][b]) return false;
    return true;
  };
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      if (covers(a, b) && rank[b] != rank[a] + 1)
        return {false, "principal ideal not graded", {a, b, -1}};

  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      if (leq[a][b] || leq[b][a]) continue;
      int j = join[static_cast<size_t>(a) * k + b];
      if (j < 0) continue;
      int m = meet[static_cast<size_t>(a) * k + b];
      if (rank[a] + rank[b] != rank[m] + rank[j])
        return {false, "rank identity fails", {a, b, -1}};
    }

  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      for (int c = b + 1; c < k; ++c) {
        if (join[static_cast<size_t>(a) * k + b] < 0 ||
            join[static_cast<size_t>(b) * k + c] < 0 ||
            join[static_cast<size_t>(a) * k + c] < 0)
          continue;
        bool bounded = false;
        for (int z = 0; z < k && !bounded; ++z)
          if (leq[a][z] && leq[b][z] && leq[c][z]) bounded = true;
        if (!bounded) return {false, "pairwise-bounded triple unbounded", {a, b, c}};
      }

  res.ok = true;
  return res;
}

// A modular semilattice carrying a valuation. Elements are 0..k-1.
struct Semilattice {
  int k = 0;
  std::vector<char> leq_;   // k*k
  std::vector<int> meet_;   // k*k
  std::vector<int> join_;   // k*k, -1 when unbounded
  std::vector<Rat> val;     // valuation
  int bottom = 0;
  std::vector<std::pair<int, int>> covers_;  // (low, high)
  std::vector<int> rank_;

  Semilattice() = default;

  Semilattice(const std::vector<std::vector<char>>& leq, std::vector<Rat> valuation) {
    auto chk = is_modular_semilattice(leq);
    if (!chk.ok) throw std::invalid_argument("not a modular semilattice: " + chk.reason);
    k = static_cast<int>(leq.size());
    if (static_cast<int>(valuation.size()) != k)
      throw std::invalid_argument("valuation size mismatch");
    leq_.assign(static_cast<size_t>(k) * k, 0);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) leq_[static_cast<size_t>(a) * k + b] = leq[a][b];
    val = std::move(valuation);

    meet_.assign(static_cast<size_t>(k) * k, -1);
    join_.assign(static_cast<size_t>(k) * k, -1);
    for (int a = 0; a < k; ++a)
      for (int b = a; b < k; ++b) {
        int m = -1, j = -1;
        for (int z = 0; z < k; ++z) {
          if (leq[z][a] && leq[z][b] && (m < 0 || leq[m][z])) m = z;
          if (leq[a][z] && leq[b][z] && (j < 0 || leq[z][j])) j = z;
        }
        meet_[static_cast<size_t>(a) * k + b] = meet_[static_cast<size_t>(b) * k + a] = m;
        join_[static_cast<size_t>(a) * k + b] = join_[static_cast<size_t>(b) * k + a] = j;
      }
    bottom = 0;
    for (int z = 0; z < k; ++z) bottom = meet_[static_cast<size_t>(bottom) * k + z];

    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        if (a == b || !leq[a][b]) continue;
        bool cov = true;
        for (int z = 0; z < k; ++z)
          if (z != a && z != b && leq[a][z] && leq[z][b]) cov = false;
        if (cov) covers_.emplace_back(a, b);
      }
    rank_.assign(k, 0);
    {
      std::vector<int> order(k);
      for (int i = 0; i < k; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        int ca = 0, cb = 0;
        for (int z = 0; z < k; ++z) {
          ca += leq[z][a];
          cb += leq[z][b];
        }
        return ca < cb;
      });
      for (int x : order)
        for (int z = 0; z < k; ++z)
          if (z != x && leq[z][x]) rank_[x] = std::max(rank_[x], rank_[z] + 1);
    }

    for (auto [a, b] : covers_)
      if (!(val[a] < val[b])) throw std::invalid_argument("not a valuation: not increasing");
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        int j = join_[static_cast<size_t>(a) * k + b];
        if (j < 0) continue;
        int m = meet_[static_cast<size_t>(a) * k + b];
        if (val[a] + val[b] != val[m] + val[j])
          throw std::invalid_argument("not a valuation: modular equality fails");
      }
  }

  bool leq(int a, int b) const { return leq_[static_cast<size_t>(a) * k + b]; }
  int meet(int a, int b) const { return meet_[static_cast<size_t>(a) * k + b]; }
  std::optional<int> join_if_bounded(int a, int b) const {
    int j = join_[static_cast<size_t>(a) * k + b];
    if (j < 0) return std::nullopt;
    return j;
  }
  bool bounded(int a, int b) const { return join_[static_cast<size_t>(a) * k + b] >= 0; }

  // v[a,b] = val(b) - val(a); meaningful when a is below b.
  Rat vdiff(int a, int b) const { return val[b] - val[a]; }

  std::vector<int> interval(int a, int b) const {
    std::vector<int> out;
    for (int z = 0; z < k; ++z)
      if (leq(a, z) && leq(z, b)) out.push_back(z);
    return out;
  }
};

// One interval element with its planar profile relative to (p,q):
// x = v[p^q, u^p], y = v[p^q, u^q].
struct ProfilePoint {
  int u = -1;
  Rat x, y;
};

// I(p,q) = joins of bounded pairs from [p^q,p] x [p^q,q], with profiles.
// Each element appears once; its generating pair is recovered as
// (u^p, u^q), which the construction re-verifies.
inline std::vector<ProfilePoint> interval_profile(const Semilattice& L, int p, int q) {
  int m = L.meet(p, q);
  std::vector<char> seen(L.k, 0);
  std::vector<ProfilePoint> out;
  for (int a : L.interval(m, p))
    for (int b : L.interval(m, q)) {
      auto j = L.join_if_bounded(a, b);
      if (!j || seen[*j]) continue;
      seen[*j] = 1;
      int u = *j;
      int ap = L.meet(u, p), bq = L.meet(u, q);
      auto back = L.join_if_bounded(ap, bq);
      if (!back || *back != u)
        throw std::logic_error("interval element lost its generating pair");
      out.push_back({u, L.vdiff(m, ap), L.vdiff(m, bq)});
    }
  std::sort(out.begin(), out.end(), [](const ProfilePoint& s, const ProfilePoint& t) {
    return s.u < t.u;
  });
  return out;
}

// Envelope of (p,q) ordered from p to q (x strictly decreasing along the
// chain), together with the internal cone breakpoints delta_0..delta_{m-1}.
// The breakpoint between consecutive elements u, u' is
// v[u^u', u] / (v[u^u', u] + v[u^u', u']).
struct EnvelopeChain {
  std::vector<int> elems;
  std::vector<Rat> delta;
};

inline EnvelopeChain envelope_chain(const Semilattice& L, int p, int q) {
  EnvelopeChain ec;
  if (p == q || L.leq(p, q) || L.leq(q, p)) {
    // comparable: the join is the single maximal point of a degenerate profile
    ec.elems = {L.leq(p, q) ? q : p};
    return ec;
  }
  auto prof = interval_profile(L, p, q);
  std::map<std::pair<Rat, Rat>, std::vector<int>> at;
  for (const auto& pp : prof) at[{pp.x, pp.y}].push_back(pp.u);
  std::vector<std::pair<Rat, Rat>> pts;
  for (const auto& [xy, who] : at) pts.push_back(xy);
  // the chain runs from (max x, 0) to (0, max y); sort by x descending then
  // y ascending and keep strict left turns
  std::sort(pts.begin(), pts.end(), [](const auto& s, const auto& t) {
    if (s.first != t.first) return s.first > t.first;
    return s.second < t.second;
  });
  std::vector<std::pair<Rat, Rat>> chain;
  auto cross = [](const std::pair<Rat, Rat>& o, const std::pair<Rat, Rat>& a,
                  const std::pair<Rat, Rat>& b) -> Rat {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  for (const auto& pt : pts) {
    while (chain.size() >= 2 && cross(chain[chain.size() - 2], chain.back(), pt) <= 0)
      chain.pop_back();
    chain.push_back(pt);
  }
  for (const auto& xy : chain) {
    const auto& who = at[xy];
    if (who.size() != 1)
      throw std::logic_error("profile map not injective on the envelope");
    ec.elems.push_back(who.front());
  }
  int mpt = L.meet(p, q);
  if (ec.elems.front() != p || ec.elems.back() != q)
    throw std::logic_error("envelope chain does not run from p to q");
  (void)mpt;
  for (size_t i = 0; i + 1 < ec.elems.size(); ++i) {
    int u = ec.elems[i], u2 = ec.elems[i + 1];
    int w = L.meet(u, u2);
    Rat a = L.vdiff(w, u), b = L.vdiff(w, u2);
    if (a + b == 0) throw std::logic_error("degenerate envelope segment");
    ec.delta.push_back(a / (a + b));
  }
  for (size_t i = 0; i + 1 < ec.delta.size(); ++i)
    if (ec.delta[i] > ec.delta[i + 1])
      throw std::logic_error("envelope breakpoints not monotone");
  return ec;
}

inline std::vector<int> envelope(const Semilattice& L, int p, int q) {
  return envelope_chain(L, p, q).elems;
}

// Fractional join: envelope elements with their cone measures
// delta_i - delta_{i-1} (delta_{-1} = 0, delta_m = 1); zero-measure terms are
// dropped, the rest sum to exactly 1.
inline std::vector<std::pair<int, Rat>> fractional_join(const Semilattice& L, int p,
                                                        int q) {
  auto ec = envelope_chain(L, p, q);
  std::vector<std::pair<int, Rat>> terms;
  Rat prev = 0, sum = 0;
  for (size_t i = 0; i < ec.elems.size(); ++i) {
    Rat next = (i < ec.delta.size()) ? ec.delta[i] : Rat(1);
    Rat c = next - prev;
    prev = next;
    if (c < 0) throw std::logic_error("negative cone measure");
    sum += c;
    if (c > 0) terms.emplace_back(ec.elems[i], c);
  }
  if (sum != 1) throw std::logic_error("cone measures do not sum to 1");
  return terms;
}

// Antipodal: the envelope is exactly {p,q} (an incomparable pair whose
// profile hull is a triangle). Cross-checked against the characterization
// v[a,p] v[b,q] >= v[p^q,a] v[p^q,b] for all bounded (a,b) in
// [p^q,p] x [p^q,q].
inline bool is_antipodal(const Semilattice& L, int p, int q) {
  if (p == q || L.leq(p, q) || L.leq(q, p)) return false;
  auto ec = envelope_chain(L, p, q);
  bool via_envelope = ec.elems.size() == 2;
  int m = L.meet(p, q);
  bool via_ineq = true;
  for (int a : L.interval(m, p)) {
    for (int b : L.interval(m, q)) {
      if (!L.bounded(a, b)) continue;
      if (L.vdiff(a, p) * L.vdiff(b, q) < L.vdiff(m, a) * L.vdiff(m, b)) {
        via_ineq = false;
        break;
      }
    }
    if (!via_ineq) break;
  }
  if (via_envelope != via_ineq)
    throw std::logic_error("antipodality routes disagree");
  return via_envelope;
}

struct SubmodularityResult {
  bool ok = true;
  std::pair<int, int> witness{-1, -1};
};

// Submodularity of f (values may be infinite) under the fractional-join
// inequality, evaluated two ways: directly on every pair, and through the
// three-condition characterization (envelopes inside dom f, submodularity on
// bounded pairs, meet-convexity on antipodal pairs). The two verdicts must
// agree; the returned witness violates the direct inequality, or names the
// pair failing the characterization.
inline SubmodularityResult is_submodular(const Semilattice& L,
                                         const std::vector<ExtRat>& f) {
  if (static_cast<int>(f.size()) != L.k)
    throw std::invalid_argument("function table size mismatch");
  SubmodularityResult direct;
  for (int p = 0; p < L.k && direct.ok; ++p)
    for (int q = p; q < L.k; ++q) {
      ExtRat lhs = f[p] + f[q];
      if (lhs.inf) continue;
      ExtRat rhs = f[L.meet(p, q)];
      for (auto [u, c] : fractional_join(L, p, q)) rhs += scale(c, f[u]);
      if (rhs > lhs) {
        direct.ok = false;
        direct.witness = {p, q};
        break;
      }
    }

  bool characterization = true;
  std::pair<int, int> cw{-1, -1};
  for (int p = 0; p < L.k && characterization; ++p)
    for (int q = p; q < L.k; ++q) {
      if (f[p].finite() && f[q].finite()) {
        bool dom_ok = true;
        for (int u : envelope(L, p, q))
          if (!f[u].finite()) dom_ok = false;
        if (!dom_ok) {
          characterization = false;
          cw = {p, q};
          break;
        }
      }
      if (L.bounded(p, q) && p != q && !L.leq(p, q) && !L.leq(q, p)) {
        ExtRat lhs = f[p] + f[q];
        ExtRat rhs = f[L.meet(p, q)] + f[*L.join_if_bounded(p, q)];
        if (rhs > lhs) {
          characterization = false;
          cw = {p, q};
          break;
        }
      }
      if (is_antipodal(L, p, q)) {
        int m = L.meet(p, q);
        Rat cp = L.vdiff(m, p), cq = L.vdiff(m, q);
        ExtRat lhs = scale(cq, f[p]) + scale(cp, f[q]);
        ExtRat rhs = scale(cp + cq, f[m]);
        if (rhs > lhs) {
          characterization = false;
          cw = {p, q};
          break;
        }
      }
    }
  if (direct.ok != characterization)
    throw std::logic_error("submodularity routes disagree");
  if (!direct.ok && direct.witness.first < 0) direct.witness = cw;
  return direct;
}

// ---------------------------------------------------------------------------
// Products

// Explicit product semilattice; element (i,j) has id i * L2.k + j.
inline Semilattice product_semilattice(const Semilattice& L1, const Semilattice& L2) {
  int k = L1.k * L2.k;
  std::vector<std::vector<char>> leq(k, std::vector<char>(k, 0));
  std::vector<Rat> val(k);
  for (int a1 = 0; a1 < L1.k; ++a1)
    for (int a2 = 0; a2 < L2.k; ++a2) {
      int a = a1 * L2.k + a2;
      val[a] = L1.val[a1] + L2.val[a2];
      for (int b1 = 0; b1 < L1.k; ++b1)
        for (int b2 = 0; b2 < L2.k; ++b2)
          leq[a][b1 * L2.k + b2] = L1.leq(a1, b1) && L2.leq(a2, b2);
    }
  return Semilattice(leq, val);
}

// Fractional join on a finite product, computed factor-wise: the cone of a
// tuple is the intersection of per-coordinate cones, so refining all
// coordinate breakpoints into one subdivision of [0,1] and reading off each
// cell gives the terms. Cells have positive length and the coefficients sum
// to 1.
inline std::vector<std::pair<std::vector<int>, Rat>> product_fractional_join(
    const std::vector<const Semilattice*>& Ls, const std::vector<int>& p,
    const std::vector<int>& q) {
  size_t n = Ls.size();
  if (p.size() != n || q.size() != n) throw std::invalid_argument("tuple arity mismatch");
  std::vector<EnvelopeChain> chains(n);
  std::vector<Rat> cuts{Rat(0), Rat(1)};
  for (size_t i = 0; i < n; ++i) {
    chains[i] = envelope_chain(*Ls[i], p[i], q[i]);
    for (const Rat& d : chains[i].delta) cuts.push_back(d);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<std::pair<std::vector<int>, Rat>> terms;
  std::vector<size_t> pos(n, 0);  // per-coordinate envelope cursor
  for (size_t c = 0; c + 1 < cuts.size(); ++c) {
    const Rat& lo = cuts[c];
    const Rat& hi = cuts[c + 1];
    std::vector<int> tuple(n);
    for (size_t i = 0; i < n; ++i) {
      // advance to the envelope element whose delta-interval covers [lo,hi]
      while (pos[i] < chains[i].delta.size() && chains[i].delta[pos[i]] <= lo) ++pos[i];
      tuple[i] = chains[i].elems[pos[i]];
      Rat upper = pos[i] < chains[i].delta.size() ? chains[i].delta[pos[i]] : Rat(1);
      if (upper < hi) throw std::logic_error("breakpoint refinement misaligned");
    }
    terms.emplace_back(std::move(tuple), hi - lo);
  }
  Rat sum = 0;
  for (const auto& [t, c] : terms) sum += c;
  if (sum != 1) throw std::logic_error("product cone measures do not sum to 1");
  return terms;
}

struct ProductSubmodularityResult {
  bool ok = true;
  std::vector<int> witness_p, witness_q;
};

// Finite-valued submodularity on a product of modular semilattices, via the
// reduced inequality set: (a) submodularity on 2-bounded pairs, which in a
// product are single-coordinate 2-bounded pairs and opposite-cover pairs in
// two coordinates, and (b) meet-convexity on pairs antipodal in one
// coordinate and equal elsewhere. Sufficiency for n factors follows from the
// two-factor criterion by induction on slices.
inline ProductSubmodularityResult product_submodular_check(
    const std::vector<const Semilattice*>& Ls,
    const std::function<Rat(const std::vector<int>&)>& f) {
  size_t n = Ls.size();
  std::vector<int> tuple(n, 0);

  // per-factor pair lists
  struct PairList {
    std::vector<std::pair<int, int>> two_bounded;  // incomparable, join covers both
    std::vector<std::pair<int, int>> covers;       // (low, high)
    std::vector<std::pair<int, int>> antipodal;
  };
  std::vector<PairList> pl(n);
  for (size_t i = 0; i < n; ++i) {
    const Semilattice& L = *Ls[i];
    pl[i].covers = L.covers_;
    for (int a = 0; a < L.k; ++a)
      for (int b = a + 1; b < L.k; ++b) {
        if (L.leq(a, b) || L.leq(b, a)) continue;
        if (auto j = L.join_if_bounded(a, b)) {
          bool ca = L.rank_[*j] == L.rank_[a] + 1;
          bool cb = L.rank_[*j] == L.rank_[b] + 1;
          if (ca && cb) pl[i].two_bounded.emplace_back(a, b);
        }
        if (is_antipodal(L, a, b)) pl[i].antipodal.emplace_back(a, b);
      }
  }

  ProductSubmodularityResult res;
  auto fail = [&](std::vector<int> x, std::vector<int> y) {
    res.ok = false;
    res.witness_p = std::move(x);
    res.witness_q = std::move(y);
  };

  // walk every base tuple; at each, test the pairs touching it
  std::function<void(size_t)> rec = [&](size_t at) {
    if (!res.ok) return;
    if (at == n) {
      // (a) single-coordinate 2-bounded, others equal
      for (size_t i = 0; i < n && res.ok; ++i)
        for (auto [a, b] : pl[i].two_bounded) {
          std::vector<int> x = tuple, y = tuple;
          x[i] = a;
          y[i] = b;
          const Semilattice& L = *Ls[i];
          std::vector<int> mm = tuple, jj = tuple;
          mm[i] = L.meet(a, b);
          jj[i] = *L.join_if_bounded(a, b);
          if (f(x) + f(y) < f(mm) + f(jj)) {
            fail(x, y);
            break;
          }
        }
      // (a') opposite covers in two coordinates, others equal
      for (size_t i = 0; i < n && res.ok; ++i)
        for (size_t j = i + 1; j < n && res.ok; ++j)
          for (auto [al, ah] : pl[i].covers) {
            for (auto [bl, bh] : pl[j].covers) {
              std::vector<int> x = tuple, y = tuple, mm = tuple, jj = tuple;
              x[i] = al;
              x[j] = bh;
              y[i] = ah;
              y[j] = bl;
              mm[i] = al;
              mm[j] = bl;
              jj[i] = ah;
              jj[j] = bh;
              if (f(x) + f(y) < f(mm) + f(jj)) {
                fail(x, y);
                break;
              }
            }
            if (!res.ok) break;
          }
      // (b) antipodal in one coordinate, others equal
      for (size_t i = 0; i < n && res.ok; ++i)
        for (auto [a, b] : pl[i].antipodal) {
          const Semilattice& L = *Ls[i];
          int m = L.meet(a, b);
          Rat ca = L.vdiff(m, a), cb = L.vdiff(m, b);
          std::vector<int> x = tuple, y = tuple, mm = tuple;
          x[i] = a;
          y[i] = b;
          mm[i] = m;
          if (cb * f(x) + ca * f(y) < (ca + cb) * f(mm)) {
            fail(x, y);
            break;
          }
        }
      return;
    }
    for (int v = 0; v < Ls[at]->k; ++v) {
      tuple[at] = v;
      rec(at + 1);
      if (!res.ok) return;
    }
  };
  rec(0);
  return res;
}

// Two-factor entry point; f indexed by i1 * L2.k + i2. Rejects
// infinite values (the reduced criterion is only valid for finite f).
inline ProductSubmodularityResult is_submodular_product_finite(
    const Semilattice& L1, const Semilattice& L2, const std::vector<ExtRat>& f) {
  if (static_cast<int>(f.size()) != L1.k * L2.k)
    throw std::invalid_argument("function table size mismatch");
  for (const auto& v : f)
    if (!v.finite())
      throw std::invalid_argument("criterion valid only for finite-valued f");
  std::vector<const Semilattice*> Ls{&L1, &L2};
  return product_submodular_check(
      Ls, [&](const std::vector<int>& t) { return f[t[0] * L2.k + t[1]].v; });
}

// ---------------------------------------------------------------------------
// Valuations vs orbit-invariant weights on the covering graph

struct CoveringWeights {
  Graph covering;           // vertices = elements, edges = cover pairs
  std::vector<Rat> weight;  // per covering edge
};

// The valuation induces cover weights v(high) - v(low); these are positive
// and orbit-invariant on the covering graph.
inline CoveringWeights weights_from_valuation(const Semilattice& L) {
  CoveringWeights cw;
  std::vector<std::pair<int, int>> es;
  std::vector<Rat> ws;
  for (auto [a, b] : L.covers_) {
    es.emplace_back(a, b);
    ws.push_back(L.vdiff(a, b));
  }
  cw.covering = Graph(L.k, es, ws);
  cw.weight = cw.covering.weight;  // edge order is preserved by construction
  auto op = compute_orbits(cw.covering);
  if (!weights_are_orbit_invariant(cw.covering, op, cw.covering.weight))
    throw std::logic_error("valuation induced non-orbit-invariant weights");
  return cw;
}

// Distance from the minimum in the weighted covering graph; with weights
// from a valuation this recovers it up to the offset at the minimum.
inline std::vector<Rat> valuation_from_weights(const Semilattice& L,
                                               const std::vector<Rat>& per_cover) {
  if (per_cover.size() != L.covers_.size())
    throw std::invalid_argument("cover weight count mismatch");
  std::vector<std::pair<int, int>> es(L.covers_.begin(), L.covers_.end());
  Graph cg(L.k, es, per_cover);
  auto op = compute_orbits(cg);
  if (!weights_are_orbit_invariant(cg, op, cg.weight))
    throw std::invalid_argument("weights not positive orbit-invariant");
  auto dm = shortest_path_metric(cg);
  std::vector<Rat> v(L.k);
  for (int x = 0; x < L.k; ++x) v[x] = dm.at(L.bottom, x);
  return v;
}

}  // namespace zeroext
