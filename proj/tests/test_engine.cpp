#include "doctest.h"
#include "fpmod/engine.hpp"

#include "oracles.hpp"

using namespace fpmod;

TEST_CASE("integer division has a strictly smaller remainder") {
  IntegerEngine Z;
  oracle::Rng rng(11);
  for (int k = 0; k < 2000; ++k) {
    mpz_class a = rng.range(-1000, 1000), b = rng.range(-50, 50);
    if (b == 0) continue;
    auto [q, r] = Z.divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(Z.compare_measure(r, b) < 0);
    CHECK(r >= 0);
  }
  CHECK_THROWS_AS((void)Z.divmod(3, 0), DomainError);
}

TEST_CASE("polynomial division has a strictly smaller degree") {
  PolyEngine F(5);
  oracle::Rng rng(12);
  for (int k = 0; k < 1000; ++k) {
    std::vector<long> ca(rng.range(0, 7)), cb(rng.range(1, 4));
    for (auto &v : ca) v = rng.range(0, 4);
    for (auto &v : cb) v = rng.range(0, 4);
    Poly a = F.from_coeffs(ca), b = F.from_coeffs(cb);
    if (b.is_zero()) continue;
    auto [q, r] = F.divmod(a, b);
    CHECK(F.add(F.mul(q, b), r) == a);
    CHECK(F.compare_measure(r, b) < 0);
  }
}

TEST_CASE("canonical forms: normalizer makes integers positive and polynomials monic") {
  IntegerEngine Z;
  CHECK(Z.mul(Z.normalizer(-7), -7) == 7);
  PolyEngine F(7);
  Poly f = F.from_coeffs({3, 0, 2});
  Poly m = F.mul(F.normalizer(f), f);
  CHECK(m.lead() == 1);
  CHECK(F.from_coeffs({1, 2, 0, 0}) == F.from_coeffs({1, 2}));
}

TEST_CASE("units of Z/n are exactly the residues coprime to n") {
  for (long n = 2; n <= 30; ++n) {
    ModEngine R{mpz_class(n)};
    for (long a = 0; a < n; ++a) {
      bool coprime = std::gcd(a, n) == 1;
      CHECK(R.is_unit(a) == coprime);
      if (coprime) CHECK(R.mul(a, R.unit_inverse(a)) == 1);
    }
  }
  CHECK_THROWS_AS(ModEngine(mpz_class(1)), DomainError);
}

TEST_CASE("integer factorization") {
  auto f = factor_integer(mpz_class(360));
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<mpz_class, unsigned>(2, 3));
  CHECK(f[1] == std::pair<mpz_class, unsigned>(3, 2));
  CHECK(f[2] == std::pair<mpz_class, unsigned>(5, 1));
  // product of two primes beyond the trial-division window
  mpz_class big = mpz_class("1000000007") * mpz_class("998244353");
  auto g = factor_integer(big);
  REQUIRE(g.size() == 2);
  CHECK(g[0].first == mpz_class("998244353"));
  IntegerEngine Z;
  CHECK(Z.count_prime_factors(-12) == 2);
  CHECK(Z.count_prime_factors(1) == 0);
}

TEST_CASE("distinct irreducible factor count over F_p") {
  PolyEngine F2(2);
  // x^2 + x = x (x + 1)
  CHECK(F2.count_prime_factors(F2.from_coeffs({0, 1, 1})) == 2);
  // x^2 + x + 1 irreducible over F_2
  CHECK(F2.count_prime_factors(F2.from_coeffs({1, 1, 1})) == 1);
  // (x+1)^3 = x^3 + x^2 + x + 1
  CHECK(F2.count_prime_factors(F2.from_coeffs({1, 1, 1, 1})) == 1);
  PolyEngine F5(5);
  // x^4 - 1 splits into four distinct linear factors over F_5
  CHECK(F5.count_prime_factors(F5.from_coeffs({4, 0, 0, 0, 1})) == 4);
  // x^2 (x^2 + 2): x^2 + 2 has no root mod 5
  CHECK(F5.count_prime_factors(F5.from_coeffs({0, 0, 2, 0, 1})) == 2);
}
