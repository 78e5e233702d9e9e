#include "doctest.h"
#include "fpmod/fpmod.hpp"

#include "oracles.hpp"

#include <numeric>

using namespace fpmod;

namespace {

const IntegerEngine Z;

template <class E>
MatrixOf<E> mat(std::initializer_list<std::initializer_list<long>> rows) {
  std::size_t r = rows.size(), c = rows.size() ? rows.begin()->size() : 0;
  MatrixOf<E> A(r, c);
  std::size_t i = 0;
  for (auto &row : rows) {
    std::size_t j = 0;
    for (long v : row) A(i, j++) = v;
    ++i;
  }
  return A;
}

Presentation<IntegerEngine> zp(std::initializer_list<std::initializer_list<long>> rows) {
  return Presentation<IntegerEngine>(Z, mat<IntegerEngine>(rows));
}
Presentation<ModEngine> mp(long n, std::initializer_list<std::initializer_list<long>> rows) {
  return Presentation<ModEngine>(ModEngine(mpz_class(n)), mat<ModEngine>(rows));
}

Presentation<IntegerEngine> zfree(std::size_t k) { return free_module(Z, k); }
Presentation<IntegerEngine> zcyc(long a) { return cyclic_module(Z, mpz_class(a)); }

ModuleInvariants<IntegerEngine> zinv(std::size_t free, std::vector<long> tors) {
  ModuleInvariants<IntegerEngine> inv;
  inv.free_rank = free;
  for (long t : tors) inv.torsion.emplace_back(t);
  return inv;
}

template <class E>
ModuleInvariants<E> zero_inv(const E &eng) {
  return invariants(free_module(eng, 0));
}

long gcdl(long a, long b) { return std::gcd(a, b); }

/// Predicted |M[d]| from local invariants.
std::vector<long> predicted_profile(long n, const ModuleInvariants<ModEngine> &inv) {
  std::vector<long> out;
  for (long d : oracle::divisors(n)) {
    long c = 1;
    for (const auto &part : inv.local)
      for (unsigned e : part.summands) {
        long pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= part.prime.get_si();
        c *= gcdl(d, pe);
      }
    out.push_back(c);
  }
  return out;
}

/// pd(M) <= 1 iff the relation submodule S of (Z/n)^m is projective.
bool brute_pd_le_1(long n, const MatrixOf<ModEngine> &F) {
  auto S = oracle::span_mod(n, F.rows(), oracle::cols_of(F));
  std::vector<long> profile;
  for (long d : oracle::divisors(n)) {
    long c = 0;
    for (const auto &x : S) {
      bool killed = true;
      for (long v : x) killed = killed && (d * v) % n == 0;
      if (killed) ++c;
    }
    profile.push_back(c);
  }
  return oracle::profile_is_projective(n, profile);
}

/// Every relation matrix over Z/n with the given shape.
void for_each_mod_matrix(long n, std::size_t r, std::size_t c, const std::function<void(const MatrixOf<ModEngine> &)> &f) {
  for (const auto &v : oracle::all_vectors(n, r * c)) {
    MatrixOf<ModEngine> A(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) A(i, j) = v[i * c + j];
    f(A);
  }
}

template <class E>
std::vector<Presentation<E>> random_domain_modules(const E &eng, oracle::Rng &rng, int count) {
  std::vector<Presentation<E>> out;
  for (int k = 0; k < count; ++k) {
    std::size_t m = rng.range(0, 3), n = rng.range(0, 3);
    MatrixOf<E> F;
    if constexpr (std::is_same_v<E, IntegerEngine>) {
      F = oracle::random_int_matrix(rng, m, n, 6);
    } else {
      F = oracle::random_poly_matrix(rng, eng, m, n, 2);
    }
    out.emplace_back(eng, m, F);
  }
  return out;
}

} // namespace

// ----------------------------------------------------------------- examples

TEST_CASE("normalize examples") {
  auto a = normalize(Presentation<IntegerEngine>(Z, 1, mat<IntegerEngine>({{2, 0}})));
  CHECK(a.relations == mat<IntegerEngine>({{2}}));
  auto b = normalize(zp({{1}}));
  CHECK(b.generators == 0);
  CHECK(b.relation_count() == 0);
  auto c = normalize(zp({{2, 4}}));
  CHECK(c.relations == mat<IntegerEngine>({{2}}));
}

TEST_CASE("invariants examples") {
  CHECK(invariants(zp({{2, 0}, {0, 0}})) == zinv(1, {2}));
  CHECK(invariants(zfree(2)) == zinv(2, {}));
  auto inv = invariants(mp(4, {{2}}));
  REQUIRE(inv.local.size() == 1);
  CHECK(inv.local[0].prime == 2);
  CHECK(inv.local[0].exponent == 2);
  CHECK(inv.local[0].summands == std::vector<unsigned>{1});
  // two cosets of 2Z/4 in Z/4
  CHECK(oracle::torsion_profile(4, mat<ModEngine>({{2}})) == predicted_profile(4, inv));
}

TEST_CASE("is_isomorphic examples") {
  CHECK(is_isomorphic(zp({{2, 4}, {6, 8}}), zp({{2, 0}, {0, 4}})));
  CHECK_FALSE(is_isomorphic(zfree(1), zcyc(2)));
  CHECK(is_isomorphic(zfree(0), zp({{1}})));
  CHECK_THROWS_AS(is_isomorphic(mp(4, {{2}}), mp(6, {{2}})), DomainError);
}

TEST_CASE("dual examples") {
  CHECK(invariants(dual(zcyc(2))).is_zero());
  CHECK(invariants(dual(zfree(2))) == zinv(2, {}));
  CHECK(invariants(dual(direct_sum(zfree(1), zcyc(2)))) == zinv(1, {}));
}

TEST_CASE("ab_transpose examples") {
  CHECK(invariants(ab_transpose(zcyc(2))) == zinv(0, {2}));
  CHECK(invariants(ab_transpose(zfree(1))).is_zero());
  CHECK(invariants(ab_transpose(zp({{2, 0}, {0, 3}}))) == zinv(0, {6}));
}

TEST_CASE("double_dual_map examples") {
  auto a = double_dual_map(zcyc(2));
  CHECK(a.kernel == zinv(0, {2}));
  CHECK(invariants(a.double_dual).is_zero());
  auto b = double_dual_map(zfree(2));
  CHECK(b.kernel.is_zero());
  CHECK(b.cokernel.is_zero());
  CHECK(invariants(b.double_dual) == zinv(2, {}));
  auto c = double_dual_map(direct_sum(zfree(1), zcyc(6)));
  CHECK(c.kernel == zinv(0, {6}));
  CHECK(invariants(c.double_dual) == zinv(1, {}));
}

TEST_CASE("is_torsionless examples") {
  CHECK(is_torsionless(zfree(2)));
  CHECK_FALSE(is_torsionless(zcyc(2)));
  CHECK(is_torsionless(zfree(0)));
}

TEST_CASE("hom, tensor, ext1, tor1 over Z/a and Z/b follow the gcd formula") {
  for (long a = 1; a <= 12; ++a)
    for (long b = 1; b <= 12; ++b) {
      CAPTURE(a);
      CAPTURE(b);
      auto g = invariants(zcyc(gcdl(a, b)));
      CHECK(hom(zcyc(a), zcyc(b)) == g);
      CHECK(tensor(zcyc(a), zcyc(b)) == g);
      CHECK(ext1(zcyc(a), zcyc(b)) == g);
      CHECK(tor1(zcyc(a), zcyc(b)) == g);
      // element enumeration: Hom(Z/a, Z/b) = {x in Z/b : a x = 0},
      // Z/a (x) Z/b = (Z/b) / a(Z/b)
      long homs = 0, image = 0;
      for (long x = 0; x < b; ++x) {
        if ((a * x) % b == 0) ++homs;
        bool in_image = false;
        for (long y = 0; y < b && !in_image; ++y) in_image = (a * y) % b == x;
        if (in_image) ++image;
      }
      CHECK(homs == gcdl(a, b));
      CHECK(b / image == gcdl(a, b));
    }
}

TEST_CASE("hom, tensor, ext1, tor1 examples") {
  auto z6 = zcyc(6);
  CHECK(hom(zfree(1), z6) == zinv(0, {6}));
  CHECK(hom(zcyc(2), zfree(1)).is_zero());
  CHECK(tensor(zfree(1), z6) == zinv(0, {6}));
  CHECK(tensor(zcyc(2), zcyc(3)).is_zero());
  CHECK(ext1(zfree(1), z6).is_zero());
  CHECK(ext1(zfree(2), zfree(1)).is_zero());
  CHECK(ext1(zcyc(2), zfree(1)) == zinv(0, {2}));
  CHECK(tor1(zfree(3), z6).is_zero());
  CHECK(tor1(zcyc(2), zcyc(2)) == zinv(0, {2}));
  CHECK_THROWS_AS(hom(mp(4, {{2}}), mp(8, {{2}})), DomainError);
}

TEST_CASE("is_projective and is_stable examples") {
  CHECK(is_projective(zfree(3)));
  CHECK_FALSE(is_projective(direct_sum(zfree(1), zcyc(2))));
  CHECK_FALSE(is_projective(mp(4, {{2}})));
  // Z/6 / 2Z/6 is the ring factor Z/2 of Z/6
  CHECK(is_projective(mp(6, {{2}})));
  CHECK(is_stable(zcyc(2)));
  CHECK_FALSE(is_stable(direct_sum(zfree(1), zcyc(2))));
  CHECK_FALSE(is_stable(mp(6, {{2}})));
}

TEST_CASE("decompose examples") {
  auto a = decompose(direct_sum(zfree(1), zcyc(2)));
  CHECK(a.proj == zinv(1, {}));
  CHECK(a.stab == zinv(0, {2}));
  CHECK(a.formula_path_applicable);
  CHECK(*a.double_dual == a.proj);
  CHECK(*a.ext_transpose == a.stab);
  auto b = decompose(zfree(3));
  CHECK(b.proj == zinv(3, {}));
  CHECK(b.stab.is_zero());
  auto c = decompose(mp(4, {{2}}));
  CHECK(c.proj.is_zero());
  CHECK(c.stab == invariants(mp(4, {{2}})));
  CHECK_FALSE(c.formula_path_applicable);
  CHECK(c.splitting_kind == SplittingKind::InclusionOfProjectivePart);
}

TEST_CASE("peel examples") {
  auto a = peel(direct_sum(zfree(2), zcyc(4)), 8);
  REQUIRE(a.steps.size() == 1);
  CHECK(a.steps[0].projective == zinv(2, {}));
  CHECK(a.steps[0].remainder == zinv(0, {4}));
  CHECK(a.terminated);
  auto b = peel(zcyc(9), 8);
  CHECK(b.steps.empty());
  CHECK(b.terminated);
  auto c = peel(zfree(0), 8);
  CHECK(c.steps.empty());
  CHECK(c.terminated);
  CHECK_FALSE(peel(zfree(1), 0).terminated);
}

TEST_CASE("projectively_equivalent examples") {
  CHECK(projectively_equivalent(direct_sum(zfree(1), zcyc(2)), zcyc(2)));
  CHECK_FALSE(projectively_equivalent(zcyc(2), zcyc(4)));
  auto M = zp({{2, 4}, {6, 8}});
  CHECK(projectively_equivalent(ab_transpose(ab_transpose(M)), M));
}

TEST_CASE("udim and hdim examples") {
  CHECK(udim(zcyc(6)) == DimensionValue::finite(2));
  CHECK(udim(zcyc(4)) == DimensionValue::finite(1));
  CHECK(udim(zfree(0)) == DimensionValue::finite(0));
  CHECK(hdim(zfree(0)) == DimensionValue::finite(0));
  CHECK(hdim(zcyc(6)) == DimensionValue::finite(2));
  CHECK(hdim(zfree(1)).is_infinite());
  CHECK(hdim(zcyc(8)) == DimensionValue::finite(1));
  CHECK_THROWS_AS((void)hdim(zfree(1)).value(), DomainError);
}

TEST_CASE("pd_le_1_certificate examples") {
  CHECK(pd_le_1_certificate(zcyc(2)));
  CHECK(pd_le_1_certificate(zp({{2, 4}, {6, 8}})));
  CHECK_FALSE(pd_le_1_certificate(mp(4, {{2}})));
  CHECK(pd_le_1_certificate(mp(6, {{2}})));
}

TEST_CASE("verify_mu_epsilon examples") {
  auto a = verify_mu_epsilon(zcyc(4), zcyc(6));
  CHECK(a.ext1 == zinv(0, {2}));
  CHECK(a.tensor_tr == zinv(0, {2}));
  CHECK(a.hom_tr == zinv(0, {2}));
  CHECK(a.tor1 == zinv(0, {2}));
  CHECK(a.mu == Verdict::True);
  CHECK(a.epsilon == Verdict::True);
  auto b = verify_mu_epsilon(zfree(1), zcyc(5));
  CHECK(b.ext1.is_zero());
  CHECK(b.tensor_tr.is_zero());
  CHECK(b.mu == Verdict::True);
  CHECK(b.epsilon == Verdict::True);
  auto c = verify_mu_epsilon(direct_sum(zcyc(2), zcyc(3)), zcyc(4));
  CHECK(c.ext1 == zinv(0, {2}));
  CHECK(c.tensor_tr == zinv(0, {2}));
  CHECK(c.hom_tr == zinv(0, {2}));
  CHECK(c.tor1 == zinv(0, {2}));
  auto d = verify_mu_epsilon(mp(4, {{2}}), mp(4, {{2}}));
  CHECK(d.mu == Verdict::NotChecked);
  CHECK(to_string(d.epsilon) == "containment not checked");
}

TEST_CASE("remark_3_7_instance examples") {
  auto a = remark_3_7_instance(zfree(1), mpz_class(2));
  CHECK(invariants(a.module) == zinv(1, {2}));
  CHECK(a.pd_transpose_le_1);
  CHECK(a.dual == zinv(1, {}));
  CHECK(a.dual_nonzero);
  auto b = remark_3_7_instance(zfree(2), mpz_class(3));
  CHECK(b.pd_transpose_le_1);
  CHECK(b.dual == zinv(2, {}));
  CHECK(b.dual_nonzero);
  CHECK_THROWS_AS(remark_3_7_instance(zfree(1), mpz_class(1)), DomainError);
  CHECK_THROWS_AS(remark_3_7_instance(zfree(1), mpz_class(0)), DomainError);
  CHECK_THROWS_AS(remark_3_7_instance(zcyc(2), mpz_class(3)), DomainError);
}

TEST_CASE("module maps check compatibility") {
  // Z/2 -> Z/4, 1 |-> 2 is well defined; 1 |-> 1 is not
  CHECK_NOTHROW(ModuleMap<IntegerEngine>::make(zcyc(2), zcyc(4), mat<IntegerEngine>({{2}})));
  CHECK_THROWS_AS(ModuleMap<IntegerEngine>::make(zcyc(2), zcyc(4), mat<IntegerEngine>({{1}})), DomainError);
  CHECK_THROWS_AS(Presentation<IntegerEngine>(Z, 2, mat<IntegerEngine>({{1}})), DomainError);
}

TEST_CASE("describe") {
  CHECK(describe(Z, invariants(direct_sum(zfree(2), zcyc(6)))) == "Z^2 + Z/(6)");
  CHECK(describe(Z, zero_inv(Z)) == "0");
  auto M = mp(12, {{2, 0}, {0, 3}});
  CHECK(describe(M.engine, invariants(M)) == "Z/2 + Z/3");
}

// --------------------------------------------------------------- properties

TEST_CASE_TEMPLATE("properties over domain engines", E, IntegerEngine, PolyEngine) {
  E eng = [] {
    if constexpr (std::is_same_v<E, IntegerEngine>) return IntegerEngine{};
    else return PolyEngine(3);
  }();
  oracle::Rng rng(std::is_same_v<E, IntegerEngine> ? 101 : 202);
  auto mods = random_domain_modules(eng, rng, 300);
  auto R = free_module(eng, 1);
  for (std::size_t k = 0; k < mods.size(); ++k) {
    const auto &P = mods[k];
    CAPTURE(matrix_to_string(eng, P.relations));
    auto inv = invariants(P);
    auto N = normalize(P);
    CHECK(invariants(N) == inv);
    CHECK(kernel_basis(eng, N.relations).cols() == 0);

    // round trip: transposing twice gives back the presentation itself,
    // and the normalized transpose is unique up to projective equivalence
    auto raw = ab_transpose(ab_transpose(N, TransposeMode::Raw), TransposeMode::Raw);
    CHECK(is_isomorphic(raw, N));
    CHECK(projectively_equivalent(ab_transpose(ab_transpose(P)), P));
    if (inv.free_rank == 0) CHECK(is_isomorphic(ab_transpose(ab_transpose(P)), P));

    auto tr = ab_transpose(P);
    CHECK(invariants(tr) == ext1(P, R));

    bool dual_zero = invariants(dual(P)).is_zero();
    CHECK(dual_zero == (is_stable(P) && pd_le_1_certificate(tr)));
    CHECK(pd_le_1_certificate(P));

    auto dd = double_dual_map(P);
    CHECK(dd.cokernel.is_zero());
    CHECK(dd.kernel == split_invariants(eng, inv).second);

    auto dec = decompose(P);
    CHECK(direct_sum(eng, dec.proj, dec.stab) == inv);
    CHECK(is_projective(eng, dec.proj));
    CHECK(is_stable(eng, dec.stab));
    CHECK(dec.proj == invariants(dd.double_dual));
    CHECK(dec.stab == ext1(tr, R));
    const std::size_t u = dd.double_dual.generators;
    CHECK(multiply(eng, dd.sigma.generator_matrix, dec.splitting.generator_matrix) == identity(eng, u));

    auto trace = peel(P, 4);
    CHECK(trace.terminated);
    CHECK(trace.steps.size() <= 1);
    auto acc = invariants(free_module(eng, 0));
    auto rest = inv;
    for (const auto &s : trace.steps) {
      acc = direct_sum(eng, acc, s.projective);
      rest = s.remainder;
    }
    CHECK(direct_sum(eng, acc, rest) == inv);

    if (!is_projective(P)) CHECK_FALSE(invariants(tr).is_zero());

    const auto &Q = mods[(k * 7 + 3) % mods.size()];
    auto S = direct_sum(P, Q);
    CHECK(udim(S).value() == udim(P).value() + udim(Q).value());
    auto hp = hdim(P), hq = hdim(Q), hs = hdim(S);
    if (!hp.is_infinite() && !hq.is_infinite())
      CHECK(hs.value() == hp.value() + hq.value());
    else
      CHECK(hs.is_infinite());

    auto me = verify_mu_epsilon(P, Q);
    CHECK(me.mu == Verdict::True);
    CHECK(me.epsilon == Verdict::True);
  }
}

TEST_CASE("exhaustive small presentations over Z/n agree with brute force") {
  for (long n : {4, 6, 8, 9, 12}) {
    ModEngine eng{mpz_class(n)};
    auto R = free_module(eng, 1);
    for (std::size_t m = 1; m <= 2; ++m)
      for (std::size_t r = 0; r <= 2; ++r)
        for_each_mod_matrix(n, m, r, [&](const MatrixOf<ModEngine> &F) {
          CAPTURE(n);
          CAPTURE(matrix_to_string(eng, F));
          Presentation<ModEngine> P(eng, m, F);
          auto inv = invariants(P);
          auto profile = oracle::torsion_profile(n, F);
          CHECK(profile == predicted_profile(n, inv));
          CHECK(module_order(inv) == profile.back());
          CHECK(socle_order(inv) == [&] {
            // socle of a Z/n-module: elements killed by the radical of n
            long rad = 1;
            for (const auto &[p, k] : eng.prime_powers()) rad *= p.get_si();
            auto ds = oracle::divisors(n);
            return profile[std::find(ds.begin(), ds.end(), rad) - ds.begin()];
          }());
          CHECK(is_projective(P) == oracle::profile_is_projective(n, profile));
          CHECK(pd_le_1_certificate(P) == brute_pd_le_1(n, F));

          auto N = normalize(P);
          CHECK(invariants(N) == inv);
          auto tr = ab_transpose(P);
          CHECK(invariants(ab_transpose(tr)) == split_invariants(eng, inv).second);
          CHECK(projectively_equivalent(ab_transpose(tr), P));
          CHECK(is_isomorphic(ab_transpose(ab_transpose(P, TransposeMode::Raw), TransposeMode::Raw), P));
          if (!is_projective(P)) CHECK_FALSE(invariants(tr).is_zero());

          bool dual_zero = invariants(dual(P)).is_zero();
          CHECK(dual_zero == (is_stable(P) && pd_le_1_certificate(tr)));

          auto dec = decompose(P);
          CHECK(direct_sum(eng, dec.proj, dec.stab) == inv);
          CHECK(is_projective(eng, dec.proj));
          CHECK(is_stable(eng, dec.stab));
          CHECK(invariants(dec.splitting.source) == dec.proj);
          // M / image(splitting) is the stable part, so the inclusion is injective
          CHECK(invariants(Presentation<ModEngine>(eng, m, hcat(F, dec.splitting.generator_matrix))) == dec.stab);
          if (dec.formula_path_applicable) {
            CHECK(*dec.double_dual == dec.proj);
            CHECK(*dec.ext_transpose == dec.stab);
          }

          CHECK(udim(P).value() == hdim(P).value());
          auto trace = peel(P, 4);
          CHECK(trace.terminated);
          CHECK(trace.steps.size() <= 1);
        });
  }
}

TEST_CASE("Hom, Ext, Tor and tensor over Z/n agree with the cyclic formulas") {
  // over Z/n with a | n, b | n: Hom(Z/a, Z/b) = Z/gcd and Z/a (x) Z/b = Z/gcd;
  // Ext^1 and Tor_1 are computed from the periodic resolution
  // ... -> Z/n --(n/a)--> Z/n --a--> Z/n -> Z/a
  for (long n : {4, 6, 8, 9, 12}) {
    ModEngine eng{mpz_class(n)};
    for (long a : oracle::divisors(n))
      for (long b : oracle::divisors(n)) {
        CAPTURE(n);
        CAPTURE(a);
        CAPTURE(b);
        auto A = cyclic_module(eng, mpz_class(a)), B = cyclic_module(eng, mpz_class(b));
        auto cyc = [&](long d) { return invariants(cyclic_module(eng, mpz_class(d))); };
        CHECK(hom(A, B) == cyc(gcdl(a, b)));
        CHECK(tensor(A, B) == cyc(gcdl(a, b)));
        // Ext^1 = {x in Z/b : (n/a) x = 0} / a (Z/b), Tor_1 = {x : a x = 0} / (n/a)(Z/b)
        long c = n / a;
        auto quotient = [&](long killer, long image_mult) {
          long ker = 0, img = 0;
          for (long x = 0; x < b; ++x) {
            if ((killer * x) % b == 0) ++ker;
            bool hit = false;
            for (long y = 0; y < b && !hit; ++y) hit = (image_mult * y) % b == x;
            if (hit) ++img;
          }
          return ker / img;
        };
        CHECK(module_order(ext1(A, B)) == quotient(c, a));
        CHECK(module_order(tor1(A, B)) == quotient(a, c));
      }
  }
}
