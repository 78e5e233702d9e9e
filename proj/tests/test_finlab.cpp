#include "doctest.h"
#include "fpmod/finlab.hpp"
#include "fpmod/fpmod.hpp"

#include <algorithm>
#include <numeric>

using namespace fpmod::finlab;

namespace {

ElemSet set_of(std::initializer_list<int> xs) {
  ElemSet s;
  for (int x : xs) s.set(static_cast<std::size_t>(x));
  return s;
}

/// Ring isomorphism by trying every bijection that fixes 0 and 1.
bool rings_isomorphic(const FiniteRing &A, const FiniteRing &B) {
  if (A.size() != B.size()) return false;
  std::vector<Index> perm(A.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (Index x = 0; x < A.size() && ok; ++x)
      for (Index y = 0; y < A.size() && ok; ++y)
        ok = perm[A.add(x, y)] == B.add(perm[x], perm[y]) && perm[A.mul(x, y)] == B.mul(perm[x], perm[y]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin() + 2, perm.end()));
  return false;
}

FiniteModule zn_module(unsigned n, std::size_t m, const std::vector<std::vector<Index>> &cols) {
  return cokernel_module(zmod(n), m, cols);
}

} // namespace

TEST_CASE("build_ring examples") {
  CHECK(zmod(4)->size() == 4);
  auto I = idealization(zmod(2));
  CHECK(I.ring->size() == 4);
  CHECK(rings_isomorphic(*I.ring, *parse_ring("quot(2,[0,0,1])")));
  CHECK_FALSE(rings_isomorphic(*I.ring, *parse_ring("z2^2")));
  for (unsigned k = 1; k <= 4; ++k) {
    auto R = parse_ring("z2^" + std::to_string(k));
    auto A = idealization(R);
    CHECK(A.ring->size() == (std::size_t{2} << k));
    CHECK(A.ring->is_commutative());
  }
  CHECK_FALSE(triangular(*zmod(2))->is_commutative());
  CHECK(triangular(*zmod(2))->size() == 8);
}

TEST_CASE("ring axioms are checked on the full tables") {
  // Z/3 addition with a multiplication that is not distributive
  std::vector<Index> add{0, 1, 2, 1, 2, 0, 2, 0, 1};
  std::vector<Index> mul{0, 0, 0, 0, 1, 2, 0, 2, 1};
  CHECK_NOTHROW(FiniteRing("z3", 3, add, mul, {"0", "1", "2"}));
  mul[8] = 2;
  CHECK_THROWS_AS(FiniteRing("bad", 3, add, mul, {"0", "1", "2"}), fpmod::DomainError);
  Caps small;
  small.ring = 8;
  CHECK_THROWS_AS(zmod(9, small), CapExceeded);
}

TEST_CASE("ring spec parser") {
  CHECK(parse_ring("z4")->size() == 4);
  CHECK(parse_ring("zmod(12)")->size() == 12);
  CHECK(parse_ring("product(z2, z3)")->size() == 6);
  CHECK(rings_isomorphic(*parse_ring("product(z2,z3)"), *parse_ring("z6")));
  CHECK(parse_ring("quot(3,[1,0,1])")->size() == 9);
  CHECK(parse_ring("idealization(z2^3, 1)")->size() == 16);
  CHECK(parse_ring("triangular(z2)")->size() == 8);
  CHECK_THROWS_AS(parse_ring("z"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ring("frob(3)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ring("z4 z4"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ring("quot(4,[1,1])"), fpmod::DomainError);
}

TEST_CASE("jacobson_radical examples") {
  auto a = jacobson_radical(*zmod(4));
  CHECK(a.elements == std::vector<Index>{0, 2});
  CHECK(a.is_ideal);
  for (unsigned k = 1; k <= 4; ++k) {
    auto R = parse_ring("z2^" + std::to_string(k));
    CHECK(jacobson_radical(*R).elements == std::vector<Index>{0});
    auto A = idealization(R);
    auto J = jacobson_radical(*A.ring);
    CHECK(J.elements == A.zero_times_S);
    CHECK(J.is_ideal);
  }
}

TEST_CASE("jacobson_radical equals the intersection of maximal right ideals") {
  for (const char *spec : {"z4", "z6", "z8", "z9", "z12", "quot(2,[0,0,1])", "quot(3,[1,0,1])", "z2^3",
                           "idealization(z2^2)", "idealization(z4)", "triangular(z2)", "triangular(z3)"}) {
    CAPTURE(spec);
    auto R = parse_ring(spec);
    ElemSet inter;
    for (Index x = 0; x < R->size(); ++x) inter.set(x);
    for (const auto &m : maximal_right_ideals(R)) inter = inter & m;
    CHECK(inter.elements() == jacobson_radical(*R).elements);
  }
}

TEST_CASE("enumerate_submodules examples") {
  CHECK(enumerate_submodules(regular_module(zmod(4))).submodules.size() == 3);
  CHECK(enumerate_submodules(free_module(zmod(2), 2)).submodules.size() == 5);
  CHECK(enumerate_submodules(free_module(zmod(2), 0)).submodules.size() == 1);
}

TEST_CASE("the submodule lattice is closed under sum and intersection") {
  for (const auto &M : {free_module(zmod(4), 2), regular_module(parse_ring("triangular(z2)")),
                        zn_module(12, 2, {{2, 6}}), free_module(parse_ring("z2^2"), 2)}) {
    auto L = enumerate_submodules(M);
    CHECK(L.submodules.front() == set_of({0}));
    CHECK(L.submodules.back() == M.all());
    for (const auto &A : L.submodules) {
      CHECK(is_submodule(M, A));
      for (const auto &B : L.submodules) {
        CHECK(L.contains(A & B));
        CHECK(L.contains(sum(M, A, B)));
      }
    }
  }
}

TEST_CASE("submodule_predicates examples") {
  auto Z4 = regular_module(zmod(4));
  auto L4 = enumerate_submodules(Z4);
  auto p = submodule_predicates(Z4, L4, set_of({0, 2}));
  CHECK(p.essential);
  CHECK(p.small);
  CHECK(p.maximal);
  CHECK(p.simple);

  auto V = free_module(zmod(2), 2); // (a,b) has index 2a + b
  auto LV = enumerate_submodules(V);
  auto q = submodule_predicates(V, LV, set_of({0, 2}));
  CHECK_FALSE(q.essential);
  CHECK_FALSE(q.small);

  auto r = submodule_predicates(Z4, L4, set_of({0}));
  CHECK_FALSE(r.essential);
  CHECK(r.small);
  CHECK_THROWS_AS(submodule_predicates(Z4, L4, set_of({0, 1})), fpmod::DomainError);
}

TEST_CASE("socle_and_radical examples") {
  auto Z4 = regular_module(zmod(4));
  auto a = socle_and_radical(Z4, enumerate_submodules(Z4));
  CHECK(a.socle == set_of({0, 2}));
  CHECK(a.radical == set_of({0, 2}));
  auto Z6 = regular_module(zmod(6));
  auto b = socle_and_radical(Z6, enumerate_submodules(Z6));
  CHECK(b.socle == Z6.all());
  CHECK(b.radical == set_of({0}));
  auto D = regular_module(parse_ring("quot(2,[0,0,1])"));
  auto c = socle_and_radical(D, enumerate_submodules(D));
  CHECK(c.socle.count() == 2);
  CHECK(c.socle == c.radical);
  CHECK(D.label(c.socle.elements()[1]) == "x");
}

TEST_CASE("udim and hdim examples") {
  auto dims = [](const FiniteModule &M) {
    auto L = enumerate_submodules(M);
    auto u = udim_bruteforce(M, L);
    CHECK(u.independent_family == u.uniform_sum);
    return std::pair{u.independent_family, hdim_bruteforce(M, L).value};
  };
  CHECK(dims(regular_module(zmod(6))) == std::pair<std::size_t, std::size_t>{2, 2});
  CHECK(dims(regular_module(zmod(8))) == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(dims(free_module(zmod(2), 2)) == std::pair<std::size_t, std::size_t>{2, 2});
  CHECK(dims(free_module(zmod(2), 0)) == std::pair<std::size_t, std::size_t>{0, 0});
  // Z/4 + Z/2: socle (Z/2)^2, top (Z/2)^2
  CHECK(dims(zn_module(4, 2, {{0, 2}})) == std::pair<std::size_t, std::size_t>{2, 2});
}

TEST_CASE("projective iff a sum of modules eR") {
  for (const char *spec : {"z4", "z2^2", "triangular(z2)", "idealization(z2)"}) {
    CAPTURE(spec);
    auto R = parse_ring(spec);
    auto reg = regular_module(R);
    std::vector<FiniteModule> pieces;
    for (Index e : R->idempotents()) {
      if (e == 0) continue;
      ElemSet eR;
      for (Index r = 0; r < R->size(); ++r) eR.set(R->mul(e, r));
      pieces.push_back(submodule(reg, eR));
    }
    // every sum of pieces with at most 16 elements
    std::vector<FiniteModule> sums{free_module(R, 0)};
    for (std::size_t k = 0; k < sums.size(); ++k)
      for (const auto &p : pieces)
        if (sums[k].size() * p.size() <= 16) sums.push_back(direct_sum(sums[k], p));
    for (const auto &M : enumerate_modules(R, 16)) {
      bool oracle = false;
      for (const auto &S : sums) oracle = oracle || (S.size() == M.size() && isomorphic_bruteforce(S, M));
      CHECK(is_projective_bruteforce(M) == oracle);
    }
  }
}

TEST_CASE("is_projective_bruteforce examples") {
  CHECK(is_projective_bruteforce(regular_module(zmod(4))));
  CHECK(is_projective_bruteforce(regular_module(parse_ring("triangular(z2)"))));
  CHECK_FALSE(is_projective_bruteforce(zn_module(4, 1, {{2}})));
  CHECK(is_projective_bruteforce(zn_module(6, 1, {{2}})));
  CHECK(is_projective_bruteforce(free_module(zmod(4), 0)));
  Caps tiny;
  tiny.endomorphisms = 3;
  CHECK_THROWS_AS(is_projective_bruteforce(zn_module(4, 1, {{2}}), tiny), CapExceeded);
}

TEST_CASE("stable and decompose examples") {
  auto M = zn_module(4, 1, {{2}});
  CHECK(is_stable_bruteforce(M));
  auto d = decompose_bruteforce(M);
  REQUIRE(d.pairs.size() == 1);
  CHECK(d.pairs[0].projective == set_of({0}));
  CHECK(d.pairs[0].stable == M.all());

  auto N = zn_module(4, 2, {{0, 2}}); // Z/4 + Z/2
  CHECK_FALSE(is_stable_bruteforce(N));
  auto e = decompose_bruteforce(N);
  CHECK(e.pairs.size() > 1);
  CHECK(e.pairwise_isomorphic);
  for (const auto &pr : e.pairs) {
    CHECK(pr.projective.count() == 4);
    CHECK(pr.stable.count() == 2);
    CHECK(isomorphic_bruteforce(submodule(N, pr.projective), regular_module(zmod(4))));
  }

  auto Z = free_module(zmod(4), 0);
  CHECK(is_stable_bruteforce(Z));
  CHECK(decompose_bruteforce(Z).pairs.size() == 1);
}

TEST_CASE("rickart and baer examples") {
  CHECK_FALSE(is_rickart(*zmod(4)));
  auto B = parse_ring("z2^3");
  CHECK(is_rickart(*B));
  CHECK(is_baer(*B));
  CHECK_FALSE(is_rickart(*parse_ring("quot(2,[0,0,1])")));
  CHECK(is_baer(*zmod(6)));
  CHECK_FALSE(is_baer(*zmod(4)));
}

TEST_CASE("module axioms are checked") {
  auto R = zmod(4);
  // Z/2 with Z/4 acting as if 1 * 1 were 0
  CHECK_THROWS_AS(FiniteModule(R, 2, {0, 1, 1, 0}, {0, 0, 0, 0, 0, 0, 0, 0}, {"0", "1"}), fpmod::DomainError);
  CHECK_NOTHROW(FiniteModule(R, 2, {0, 1, 1, 0}, {0, 0, 0, 0, 0, 1, 0, 1}, {"0", "1"}));
  CHECK_THROWS_AS(free_module(R, 5), CapExceeded);
}

TEST_CASE("module enumeration over Z/4 finds every group of exponent 4") {
  auto mods = enumerate_modules(zmod(4), 16);
  // 1, Z/2, Z/4, (Z/2)^2, Z/4+Z/2, (Z/2)^3, (Z/4)^2, Z/4+(Z/2)^2, (Z/2)^4
  CHECK(mods.size() == 9);
  auto again = enumerate_modules(zmod(4), 16);
  REQUIRE(again.size() == mods.size());
  for (std::size_t i = 0; i < mods.size(); ++i) CHECK(mods[i].size() == again[i].size());
}

TEST_CASE("module enumeration over F2 x F2 and triangular(F2)") {
  // F2^a + F2'^b with 2^(a+b) <= 8
  CHECK(enumerate_modules(parse_ring("z2^2"), 8).size() == 10);
  // right modules over the upper triangular ring of dimension <= 2 over F2:
  // 0, two simples, the projective P2 = [0 F2; 0 F2], and S1^2, S1+S2, S2^2
  CHECK(enumerate_modules(parse_ring("triangular(z2)"), 4).size() == 7);
}

TEST_CASE("finlab verdicts agree with fpmod on Z/n") {
  for (unsigned n : {4u, 6u, 8u, 9u, 12u}) {
    fpmod::ModEngine eng{mpz_class(n)};
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) {
        CAPTURE(n);
        CAPTURE(a);
        CAPTURE(b);
        fpmod::MatrixOf<fpmod::ModEngine> F(2, 1);
        F(0, 0) = a;
        F(1, 0) = b;
        fpmod::Presentation<fpmod::ModEngine> P(eng, 2, F);
        auto M = zn_module(n, 2, {{a, b}});
        auto L = enumerate_submodules(M);
        auto inv = fpmod::invariants(P);
        CHECK(fpmod::udim(P).value() == udim_bruteforce(M, L).independent_family);
        CHECK(fpmod::hdim(P).value() == hdim_bruteforce(M, L).value);
        CHECK(fpmod::is_projective(P) == is_projective_bruteforce(M));
        CHECK(fpmod::is_stable(P) == is_stable_bruteforce(M));
        auto sr = socle_and_radical(M, L);
        CHECK(fpmod::socle_order(inv) == sr.socle.count());
        CHECK(fpmod::radical_order(inv) == sr.radical.count());
      }
  }
}
