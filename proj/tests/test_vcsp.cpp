#include "zeroext/vcsp.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "fixtures.hpp"

using namespace zeroext;

namespace {

ExtRat fin(int v) { return ExtRat(Rat(v)); }
ExtRat inf() { return ExtRat::infinity(); }

VcspConstraint unary(int var, std::vector<ExtRat> t) { return {{var}, std::move(t)}; }

// table row-major: t[a * |D_v|2 + b]
VcspConstraint binary(int u, int v, std::vector<ExtRat> t) {
  return {{u, v}, std::move(t)};
}

// cost 1 when equal, 0 when different, over 2-element domains
VcspConstraint must_differ(int u, int v) {
  return binary(u, v, {fin(1), fin(0), fin(0), fin(1)});
}

}  // namespace

TEST_CASE("instance validation and evaluation") {
  VcspInstance inst;
  inst.domains = {{0, 1}, {5, 7}};
  inst.constraints.push_back(unary(1, {fin(3), fin(1)}));
  inst.constraints.push_back(binary(0, 1, {fin(0), fin(2), fin(4), fin(6)}));
  CHECK_NOTHROW(validate_instance(inst));

  CHECK(evaluate(inst, {0, 5}) == fin(3));   // 3 + 0
  CHECK(evaluate(inst, {0, 7}) == fin(3));   // 1 + 2
  CHECK(evaluate(inst, {1, 5}) == fin(7));   // 3 + 4
  CHECK(evaluate(inst, {1, 7}) == fin(7));   // 1 + 6

  SECTION("malformed instances rejected") {
    VcspInstance bad = inst;
    bad.domains[0] = {};
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = inst;
    bad.domains[0] = {1, 0};
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = inst;
    bad.constraints[0].scope = {2};
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = inst;
    bad.constraints[1].scope = {1, 0};
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
    bad = inst;
    bad.constraints[1].table.pop_back();
    CHECK_THROWS_AS(validate_instance(bad), std::invalid_argument);
  }
}

TEST_CASE("relaxation program shape") {
  SECTION("single unary on a 2-element domain") {
    VcspInstance inst;
    inst.domains = {{0, 1}};
    inst.constraints.push_back(unary(0, {fin(5), fin(2)}));
    auto p = build_blp(inst);
    CHECK(p.lambda.size() == 2);
    CHECK(p.mu.size() == 2);
    CHECK(p.lp.rows.size() == 3);
    CHECK(p.lp.num_vars == 4);
    auto [val, x] = solve_lp_exact(p);
    CHECK(val == 2);

    auto names = blp_var_names(p);
    REQUIRE(names.size() == 4);
    CHECK(names[0] == "l_0_0");
    CHECK(names[3] == "m_0_1");
  }

  SECTION("binary constraint on 2x2 domains") {
    VcspInstance inst;
    inst.domains = {{0, 1}, {0, 1}};
    inst.constraints.push_back(binary(0, 1, {fin(1), fin(0), fin(0), fin(1)}));
    auto p = build_blp(inst);
    CHECK(p.lambda.size() == 4);
    CHECK(p.mu.size() == 4);
    // 2 scope vars x 2 elements marginalization + 2 simplex rows
    CHECK(p.lp.rows.size() == 6);
  }

  SECTION("no constraints leaves only the simplex rows") {
    VcspInstance inst;
    inst.domains = {{0, 1, 2}};
    auto p = build_blp(inst);
    CHECK(p.lambda.empty());
    CHECK(p.mu.size() == 3);
    CHECK(p.lp.rows.size() == 1);
    CHECK(solve_lp_exact(p).first == 0);
  }

  SECTION("infinite tuples get no variable") {
    VcspInstance inst;
    inst.domains = {{0, 1}};
    inst.constraints.push_back(unary(0, {fin(5), inf()}));
    auto p = build_blp(inst);
    CHECK(p.lambda.size() == 1);
    CHECK(solve_lp_exact(p).first == 5);
  }

  SECTION("all-infinite constraint rejected") {
    VcspInstance inst;
    inst.domains = {{0, 1}};
    inst.constraints.push_back(unary(0, {inf(), inf()}));
    CHECK_THROWS_WITH(build_blp(inst), "infeasible constraint");
  }

  SECTION("deterministic resolves") {
    VcspInstance inst;
    inst.domains = {{0, 1}, {0, 1}};
    inst.constraints.push_back(unary(0, {fin(1), fin(0)}));
    inst.constraints.push_back(must_differ(0, 1));
    auto p = build_blp(inst);
    auto r1 = solve_lp_exact(p);
    auto r2 = solve_lp_exact(p);
    CHECK(r1.first == r2.first);
    CHECK(r1.second == r2.second);
  }
}

TEST_CASE("folded relaxation equals the full program") {
  std::mt19937 rng(44021);
  auto coin = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
  };
  for (int trial = 0; trial < 150; ++trial) {
    VcspInstance inst;
    int n = coin(1, 3);
    for (int i = 0; i < n; ++i) {
      std::vector<int> d;
      int sz = coin(1, 3);
      for (int e = 0; e < sz; ++e) d.push_back(e);
      inst.domains.push_back(d);
    }
    int m = coin(0, 3);
    for (int c = 0; c < m; ++c) {
      int u = coin(0, n - 1);
      int v = coin(0, n - 1);
      std::vector<int> scope;
      if (u == v)
        scope = {u};
      else
        scope = {std::min(u, v), std::max(u, v)};
      long long sz = 1;
      for (int s : scope) sz *= inst.domains[s].size();
      std::vector<ExtRat> t;
      for (long long k = 0; k < sz; ++k) {
        if (coin(0, 9) == 0)
          t.push_back(inf());
        else
          t.push_back(fin(coin(0, 6)));
      }
      inst.constraints.push_back({scope, std::move(t)});
    }
    ExtRat folded = blp_optimum(inst);
    ExtRat full;
    try {
      full = ExtRat(solve_lp_exact(build_blp(inst)).first);
    } catch (const std::runtime_error&) {
      full = ExtRat::infinity();  // empty dom f or infeasible marginals
    }
    REQUIRE(folded == full);
  }
}

TEST_CASE("variable fixing solves tight instances") {
  SECTION("unique unary minimizer") {
    VcspInstance inst;
    inst.domains = {{2, 4, 9}};
    inst.constraints.push_back(unary(0, {fin(5), fin(1), fin(3)}));
    auto r = solve_vcsp_by_blp(inst);
    REQUIRE(r.exact);
    CHECK(r.blp_value == fin(1));
    CHECK(r.assignment == std::vector<int>{4});
  }

  SECTION("ties break to the smallest element") {
    VcspInstance inst;
    inst.domains = {{3, 8}};
    inst.constraints.push_back(unary(0, {fin(2), fin(2)}));
    auto r = solve_vcsp_by_blp(inst);
    REQUIRE(r.exact);
    CHECK(r.assignment == std::vector<int>{3});
  }

  SECTION("submodular chain instance matches brute force") {
    VcspInstance inst;
    inst.domains = {{0, 1}, {0, 1}};
    // submodular: f(0,0)=0 f(0,1)=2 f(1,0)=1 f(1,1)=1; check 2+1 >= 0+1
    inst.constraints.push_back(binary(0, 1, {fin(0), fin(2), fin(1), fin(1)}));
    inst.constraints.push_back(unary(0, {fin(1), fin(0)}));
    auto r = solve_vcsp_by_blp(inst);
    REQUIRE(r.exact);
    auto bf = brute_force_vcsp(inst);
    CHECK(ExtRat(r.blp_value) == bf.value);
    CHECK(evaluate(inst, r.assignment) == bf.value);
  }

  SECTION("frustrated triangle is not tight") {
    VcspInstance inst;
    inst.domains = {{0, 1}, {0, 1}, {0, 1}};
    inst.constraints.push_back(must_differ(0, 1));
    inst.constraints.push_back(must_differ(0, 2));
    inst.constraints.push_back(must_differ(1, 2));
    auto r = solve_vcsp_by_blp(inst);
    CHECK_FALSE(r.exact);
    CHECK(r.blp_value == fin(0));  // half-integral relaxation beats every assignment
    CHECK(brute_force_vcsp(inst).value == fin(1));
  }

  SECTION("relaxation can be infeasible with partial infinities") {
    VcspInstance inst;
    inst.domains = {{0, 1}};
    inst.constraints.push_back(unary(0, {fin(1), inf()}));
    inst.constraints.push_back(unary(0, {inf(), fin(1)}));
    auto r = solve_vcsp_by_blp(inst);
    CHECK_FALSE(r.exact);
    CHECK(r.blp_value == inf());
  }
}

TEST_CASE("brute force oracle") {
  SECTION("no constraints") {
    VcspInstance inst;
    inst.domains = {{4, 6}, {1, 3}};
    auto r = brute_force_vcsp(inst);
    CHECK(r.value == fin(0));
    CHECK(r.assignment == std::vector<int>{4, 1});
  }

  SECTION("single binary table minimum") {
    VcspInstance inst;
    inst.domains = {{0, 1}, {0, 1}};
    inst.constraints.push_back(binary(0, 1, {fin(7), fin(3), fin(5), fin(4)}));
    auto r = brute_force_vcsp(inst);
    CHECK(r.value == fin(3));
    CHECK(r.assignment == std::vector<int>{0, 1});
  }

  SECTION("cap enforcement") {
    VcspInstance inst;
    inst.domains = {{0, 1}, {0, 1}, {0, 1}};
    CHECK_THROWS_WITH(brute_force_vcsp(inst, 7), "cap exceeded");
    CHECK_NOTHROW(brute_force_vcsp(inst, 8));
  }
}

TEST_CASE("relaxation lower bound and tightness") {
  std::mt19937 rng(51877);
  auto coin = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
  };
  int tight = 0;
  for (int trial = 0; trial < 120; ++trial) {
    VcspInstance inst;
    int n = coin(2, 3);
    for (int i = 0; i < n; ++i) inst.domains.push_back({0, 1});
    int m = coin(1, 4);
    for (int c = 0; c < m; ++c) {
      int u = coin(0, n - 2);
      int v = coin(u + 1, n - 1);
      std::vector<ExtRat> t;
      for (int k = 0; k < 4; ++k) t.push_back(fin(coin(0, 5)));
      inst.constraints.push_back(binary(u, v, std::move(t)));
    }
    ExtRat blp = blp_optimum(inst);
    auto bf = brute_force_vcsp(inst);
    REQUIRE(blp <= bf.value);

    auto r = solve_vcsp_by_blp(inst);
    if (r.exact) {
      REQUIRE(ExtRat(r.blp_value) == bf.value);
      REQUIRE(evaluate(inst, r.assignment) == bf.value);
      ++tight;
    }
  }
  CHECK(tight > 30);  // the generator must hit plenty of tight cases
}

TEST_CASE("polymorphism verification") {
  auto C2 = zxt::chain_sl(2);
  auto F = zxt::fan_sl(1, 2);

  SECTION("valuation-additive tables pass") {
    std::vector<const Semilattice*> Ls{&F, &C2};
    std::vector<ExtRat> f;
    for (int a = 0; a < F.k; ++a)
      for (int b = 0; b < C2.k; ++b) f.push_back(ExtRat(F.val[a] + C2.val[b]));
    CHECK(verify_polymorphism(Ls, f).ok);
  }

  SECTION("semilattice metric passes") {
    for (const Semilattice* L : {&F, &C2}) {
      auto cw = weights_from_valuation(*L);
      auto dm = shortest_path_metric(cw.covering);
      std::vector<const Semilattice*> Ls{L, L};
      std::vector<ExtRat> f;
      for (int a = 0; a < L->k; ++a)
        for (int b = 0; b < L->k; ++b) f.push_back(ExtRat(dm.at(a, b)));
      CHECK(verify_polymorphism(Ls, f).ok);
    }
  }

  SECTION("violating table is caught with a witness") {
    std::vector<const Semilattice*> Ls{&F};
    std::vector<ExtRat> f{fin(1), fin(0), fin(0)};  // dips at the meet
    auto r = verify_polymorphism(Ls, f);
    REQUIRE_FALSE(r.ok);
    CHECK(r.x == std::vector<int>{1});
    CHECK(r.y == std::vector<int>{2});
  }

  SECTION("agrees with the product submodularity routes") {
    auto FC = product_semilattice(F, C2);
    std::vector<const Semilattice*> Ls{&F, &C2};
    std::mt19937 rng(7231);
    for (int trial = 0; trial < 150; ++trial) {
      std::vector<ExtRat> f;
      for (int i = 0; i < FC.k; ++i) f.push_back(fin(static_cast<int>(rng() % 4)));
      bool via_poly = verify_polymorphism(Ls, f).ok;
      bool via_direct = is_submodular(FC, f).ok;
      bool via_criterion = is_submodular_product_finite(F, C2, f).ok;
      REQUIRE(via_poly == via_direct);
      REQUIRE(via_poly == via_criterion);
    }
  }
}
