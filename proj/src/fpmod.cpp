#include "fpmod/fpmod.hpp"

#include <algorithm>
#include <map>

namespace fpmod {

namespace {

template <class E>
using El = typename E::Elem;

template <DomainEngine E>
MatrixOf<E> kernel_gens(const E &eng, const MatrixOf<E> &A) {
  return kernel_basis(eng, A);
}
MatrixOf<ModEngine> kernel_gens(const ModEngine &eng, const MatrixOf<ModEngine> &A) {
  return syzygy_generators(eng, A);
}

template <class E>
MatrixOf<E> negated(const E &eng, MatrixOf<E> A) {
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = eng.neg(A(i, j));
  return A;
}

MatrixOf<IntegerEngine> modulus_identity(const ModEngine &eng, std::size_t k) {
  MatrixOf<IntegerEngine> nI(k, k);
  for (std::size_t i = 0; i < k; ++i) nI(i, i) = eng.modulus();
  return nI;
}

unsigned valuation(mpz_class d, const mpz_class &p) {
  unsigned v = 0;
  while (sgn(d) != 0 && mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t())) {
    d /= p;
    ++v;
  }
  return v;
}

mpz_class power(const mpz_class &p, unsigned e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), e);
  return r;
}

/// Fingerprint of a finite abelian group killed by n, from its invariant factors.
ModuleInvariants<ModEngine> local_from_group(const ModEngine &eng, const std::vector<mpz_class> &factors) {
  ModuleInvariants<ModEngine> inv;
  for (const auto &[p, k] : eng.prime_powers()) {
    LocalPart part{p, k, {}};
    for (const auto &d : factors) {
      unsigned v = valuation(d, p);
      if (v > 0) part.summands.push_back(v);
    }
    std::sort(part.summands.begin(), part.summands.end());
    inv.local.push_back(std::move(part));
  }
  return inv;
}

template <DomainEngine E>
ModuleInvariants<E> coker_invariants(const E &eng, std::size_t gens, const MatrixOf<E> &F) {
  auto snf = smith_normal_form(eng, F);
  ModuleInvariants<E> inv;
  inv.free_rank = gens - snf.invariant_factors.size();
  for (auto &d : snf.invariant_factors)
    if (!eng.is_unit(d)) inv.torsion.push_back(d);
  return inv;
}

ModuleInvariants<ModEngine> coker_invariants(const ModEngine &eng, std::size_t gens, const MatrixOf<ModEngine> &F) {
  // Coker over Z/n of F equals Coker over Z of [F | n I].
  auto snf = smith_normal_form(IntegerEngine{}, hcat(reduce(eng, F), modulus_identity(eng, gens)));
  return local_from_group(eng, snf.invariant_factors);
}

/// Im(A) / Im(B) inside R^b, assuming Im(B) is contained in Im(A).
template <DomainEngine E>
ModuleInvariants<E> subquotient(const E &eng, const MatrixOf<E> &A, const MatrixOf<E> &B) {
  MatrixOf<E> H = column_basis(eng, A);
  auto X = solve_matrix(eng, H, B);
  if (!X) throw DomainError("subquotient: relations are not contained in the generated submodule");
  return coker_invariants(eng, H.cols(), *X);
}

ModuleInvariants<ModEngine> subquotient(const ModEngine &eng, const MatrixOf<ModEngine> &A,
                                        const MatrixOf<ModEngine> &B) {
  // Lift both spans to lattices containing n Z^b.
  IntegerEngine Z;
  const std::size_t b = A.rows();
  MatrixOf<IntegerEngine> H = column_basis(Z, hcat(reduce(eng, A), modulus_identity(eng, b)));
  auto X = solve_matrix(Z, H, hcat(reduce(eng, B), modulus_identity(eng, b)));
  if (!X) throw DomainError("subquotient: relations are not contained in the generated submodule");
  auto snf = smith_normal_form(Z, *X);
  return local_from_group(eng, snf.invariant_factors);
}

template <class E>
void require_same_engine(const Presentation<E> &P, const Presentation<E> &Q) {
  if (!(P.engine == Q.engine))
    throw DomainError("engine mismatch: " + P.engine.name() + " vs " + Q.engine.name());
}

/// Domain engines: make F injective, then cancel unit entries.
template <DomainEngine E>
Presentation<E> minimal_domain_presentation(const Presentation<E> &P) {
  const E &eng = P.engine;
  MatrixOf<E> F = column_basis(eng, P.relations);
  for (;;) {
    std::size_t pi = F.rows(), pj = F.cols();
    for (std::size_t i = 0; i < F.rows() && pi == F.rows(); ++i)
      for (std::size_t j = 0; j < F.cols(); ++j)
        if (eng.is_unit(F(i, j))) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == F.rows()) break;
    El<E> u = eng.unit_inverse(F(pi, pj));
    for (std::size_t i = 0; i < F.rows(); ++i) F(i, pj) = eng.mul(u, F(i, pj));
    for (std::size_t j = 0; j < F.cols(); ++j) {
      if (j == pj || eng.is_zero(F(pi, j))) continue;
      El<E> f = F(pi, j);
      for (std::size_t i = 0; i < F.rows(); ++i) F(i, j) = eng.sub(F(i, j), eng.mul(f, F(i, pj)));
    }
    // row pi is now the unit vector at pj; generator pi is a combination of the others
    MatrixOf<E> G(F.rows() - 1, F.cols() - 1);
    for (std::size_t i = 0, gi = 0; i < F.rows(); ++i) {
      if (i == pi) continue;
      for (std::size_t j = 0, gj = 0; j < F.cols(); ++j) {
        if (j == pj) continue;
        G(gi, gj++) = F(i, j);
      }
      ++gi;
    }
    F = std::move(G);
  }
  const std::size_t gens = F.rows();
  return Presentation<E>(eng, gens, std::move(F));
}

} // namespace

// ------------------------------------------------------------------ basics

template <class E>
Presentation<E>::Presentation(E eng, std::size_t gens, MatrixOf<E> rel)
    : engine(std::move(eng)), generators(gens), relations(std::move(rel)) {
  if (relations.rows() != generators) {
    if (relations.cols() == 0 && relations.rows() == 0) {
      relations = MatrixOf<E>(generators, 0);
    } else {
      throw DomainError("presentation: relation matrix has " + std::to_string(relations.rows()) + " rows but " +
                        std::to_string(generators) + " generators");
    }
  }
  if constexpr (std::is_same_v<E, ModEngine>) relations = reduce(engine, std::move(relations));
}

template <class E>
bool ModuleInvariants<E>::is_zero() const {
  if (free_rank != 0 || !torsion.empty()) return false;
  return std::all_of(local.begin(), local.end(), [](const LocalPart &p) { return p.summands.empty(); });
}

std::size_t DimensionValue::value() const {
  if (infinite_) throw DomainError("dimension is infinite");
  return value_;
}

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::True:
    return "true";
  case Verdict::False:
    return "false";
  default:
    return "containment not checked";
  }
}

template <class E>
ModuleMap<E> ModuleMap<E>::make(Presentation<E> source, Presentation<E> target, MatrixOf<E> generator_matrix) {
  if (generator_matrix.rows() != target.generators || generator_matrix.cols() != source.generators)
    throw DomainError("module map: generator matrix has the wrong shape");
  const E &eng = target.engine;
  MatrixOf<E> images = multiply(eng, generator_matrix, source.relations);
  auto W = solve_matrix(eng, target.relations, images);
  if (!W) throw DomainError("module map: generator images do not respect the source relations");
  return ModuleMap{std::move(source), std::move(target), std::move(generator_matrix), std::move(*W)};
}

template <class E>
Presentation<E> free_module(const E &eng, std::size_t rank) {
  return Presentation<E>(eng, rank, MatrixOf<E>(rank, 0));
}

template <class E>
Presentation<E> cyclic_module(const E &eng, const El<E> &a) {
  MatrixOf<E> F(1, 1);
  F(0, 0) = a;
  return Presentation<E>(eng, 1, std::move(F));
}

template <class E>
Presentation<E> direct_sum(const Presentation<E> &P, const Presentation<E> &Q) {
  require_same_engine(P, Q);
  return Presentation<E>(P.engine, P.generators + Q.generators, block_diag(P.relations, Q.relations));
}

std::vector<mpz_class> group_invariant_factors(const ModEngine &, const ModuleInvariants<ModEngine> &inv) {
  std::size_t r = 0;
  for (const auto &part : inv.local) r = std::max(r, part.summands.size());
  std::vector<mpz_class> d(r, 1);
  // the largest exponents of every prime go into the last factor
  for (const auto &part : inv.local) {
    const std::size_t s = part.summands.size();
    for (std::size_t j = 0; j < s; ++j) d[r - s + j] *= power(part.prime, part.summands[j]);
  }
  return d;
}

mpz_class module_order(const ModuleInvariants<ModEngine> &inv) {
  mpz_class o = 1;
  for (const auto &part : inv.local)
    for (unsigned e : part.summands) o *= power(part.prime, e);
  return o;
}

mpz_class socle_order(const ModuleInvariants<ModEngine> &inv) {
  mpz_class o = 1;
  for (const auto &part : inv.local) o *= power(part.prime, static_cast<unsigned>(part.summands.size()));
  return o;
}

mpz_class radical_order(const ModuleInvariants<ModEngine> &inv) {
  mpz_class o = 1;
  for (const auto &part : inv.local)
    for (unsigned e : part.summands) o *= power(part.prime, e - 1);
  return o;
}

template <class E>
Presentation<E> presentation_of(const E &eng, const ModuleInvariants<E> &inv) {
  if constexpr (E::is_domain) {
    const std::size_t m = inv.free_rank + inv.torsion.size();
    MatrixOf<E> F(m, inv.torsion.size());
    for (std::size_t i = 0; i < inv.torsion.size(); ++i) F(inv.free_rank + i, i) = inv.torsion[i];
    return Presentation<E>(eng, m, std::move(F));
  } else {
    auto d = group_invariant_factors(eng, inv);
    std::size_t rels = 0;
    for (auto &x : d)
      if (x != eng.modulus()) ++rels;
    MatrixOf<E> F(d.size(), rels);
    for (std::size_t i = 0, c = 0; i < d.size(); ++i)
      if (d[i] != eng.modulus()) F(i, c++) = d[i];
    return Presentation<E>(eng, d.size(), std::move(F));
  }
}

template <class E>
ModuleInvariants<E> direct_sum(const E &eng, const ModuleInvariants<E> &a, const ModuleInvariants<E> &b) {
  return invariants(direct_sum(presentation_of(eng, a), presentation_of(eng, b)));
}

// --------------------------------------------------------------- operations

template <class E>
Presentation<E> normalize(const Presentation<E> &P) {
  if constexpr (E::is_domain) {
    return minimal_domain_presentation(P);
  } else {
    return presentation_of(P.engine, invariants(P));
  }
}

template <class E>
ModuleInvariants<E> invariants(const Presentation<E> &P) {
  return coker_invariants(P.engine, P.generators, P.relations);
}

template <class E>
bool is_isomorphic(const Presentation<E> &P, const Presentation<E> &Q) {
  require_same_engine(P, Q);
  return invariants(P) == invariants(Q);
}

template <class E>
Presentation<E> dual(const Presentation<E> &P) {
  const E &eng = P.engine;
  // M* = Ker(F^T : R^m -> R^n), generated by the columns of S
  MatrixOf<E> S = kernel_gens(eng, P.relations.transpose());
  MatrixOf<E> rel = kernel_gens(eng, S);
  return Presentation<E>(eng, S.cols(), std::move(rel));
}

template <class E>
Presentation<E> ab_transpose(const Presentation<E> &P, TransposeMode mode) {
  const E &eng = P.engine;
  if (mode == TransposeMode::Raw) return Presentation<E>(eng, P.relation_count(), P.relations.transpose());
  if constexpr (E::is_domain) {
    Presentation<E> N = normalize(P);
    return Presentation<E>(eng, N.relation_count(), N.relations.transpose());
  } else {
    // Minimal projective presentation, one local ring Z/p^k at a time:
    // (+) Z/p^e (e < k) is presented by diag(p^e), free summands add
    // generators without relations. Transpose each block and view it as a
    // Z/n-module by adding the relations p^k.
    auto inv = invariants(P);
    Presentation<E> tr = free_module(eng, 0);
    for (const auto &part : inv.local) {
      std::vector<unsigned> tors;
      std::size_t free_count = 0;
      for (unsigned e : part.summands) {
        if (e < part.exponent)
          tors.push_back(e);
        else
          ++free_count;
      }
      const std::size_t t = tors.size();
      MatrixOf<E> local(t + free_count, t);
      for (std::size_t i = 0; i < t; ++i) local(i, i) = eng.reduce(power(part.prime, tors[i]));
      MatrixOf<E> pk(t, t);
      for (std::size_t i = 0; i < t; ++i) pk(i, i) = eng.reduce(power(part.prime, part.exponent));
      tr = direct_sum(tr, Presentation<E>(eng, t, hcat(local.transpose(), pk)));
    }
    return normalize(tr);
  }
}

template <class E>
DoubleDualMap<E> double_dual_map(const Presentation<E> &P) {
  const E &eng = P.engine;
  const MatrixOf<E> &F = P.relations;
  MatrixOf<E> S = kernel_gens(eng, F.transpose()); // m x s
  MatrixOf<E> R1 = kernel_gens(eng, S);            // relations of M*
  Presentation<E> dual_p(eng, S.cols(), R1);
  // M** = Hom(M*, R) = {y in R^s : R1^T y = 0}
  MatrixOf<E> S2 = kernel_gens(eng, R1.transpose()); // s x u
  MatrixOf<E> R2 = kernel_gens(eng, S2);
  Presentation<E> dd(eng, S2.cols(), R2);
  // sigma(e_i) is the functional f |-> f(e_i), i.e. row i of S
  MatrixOf<E> St = S.transpose();
  auto C = solve_matrix(eng, S2, St);
  if (!C) throw DomainError("double dual: evaluation map does not land in M**");
  auto sigma = ModuleMap<E>::make(P, dd, std::move(*C));
  ModuleInvariants<E> ker = subquotient(eng, kernel_gens(eng, St), F);
  ModuleInvariants<E> coker = subquotient(eng, S2, St);
  return {std::move(dual_p), std::move(S), std::move(dd), std::move(sigma), std::move(ker), std::move(coker)};
}

template <class E>
bool is_torsionless(const Presentation<E> &P) {
  return double_dual_map(P).kernel.is_zero();
}

template <class E>
ModuleInvariants<E> hom(const Presentation<E> &P0, const Presentation<E> &Q0) {
  require_same_engine(P0, Q0);
  // Domains: minimal presentations keep the Kronecker systems small.
  const Presentation<E> P = E::is_domain ? normalize(P0) : P0, Q = E::is_domain ? normalize(Q0) : Q0;
  const E &eng = P.engine;
  const MatrixOf<E> &F = P.relations, &G = Q.relations;
  const std::size_t m = P.generators, n = P.relation_count(), p = Q.generators;
  // X (p x m) with X F in Im(G): solve vec(X F) = vec(G Z)
  MatrixOf<E> phi = hcat(kron(eng, F.transpose(), identity(eng, p)), negated(eng, kron(eng, identity(eng, n), G)));
  MatrixOf<E> K = kernel_gens(eng, phi);
  MatrixOf<E> A = K.row_range(0, p * m);
  MatrixOf<E> B = kron(eng, identity(eng, m), G);
  return subquotient(eng, A, B);
}

template <class E>
ModuleInvariants<E> tensor(const Presentation<E> &P, const Presentation<E> &Q) {
  require_same_engine(P, Q);
  const E &eng = P.engine;
  const std::size_t m = P.generators, p = Q.generators;
  MatrixOf<E> rel = hcat(kron(eng, P.relations, identity(eng, p)), kron(eng, identity(eng, m), Q.relations));
  return invariants(Presentation<E>(eng, m * p, std::move(rel)));
}

template <class E>
ModuleInvariants<E> ext1(const Presentation<E> &P0, const Presentation<E> &Q) {
  require_same_engine(P0, Q);
  const E &eng = P0.engine;
  // Domains: the minimal presentation is a free resolution 0 -> R^n -> R^m.
  Presentation<E> P = E::is_domain ? normalize(P0) : P0;
  const MatrixOf<E> &F = P.relations, &G = Q.relations;
  const std::size_t n = P.relation_count(), p = Q.generators;
  MatrixOf<E> F2 = kernel_gens(eng, F); // one syzygy step: R^{n2} -> R^n
  const std::size_t n2 = F2.cols();
  // cocycles: X in N^n with X F2 = 0 in N^{n2}
  MatrixOf<E> phi = hcat(kron(eng, F2.transpose(), identity(eng, p)), negated(eng, kron(eng, identity(eng, n2), G)));
  MatrixOf<E> A = kernel_gens(eng, phi).row_range(0, p * n);
  // coboundaries Y F plus the relations of N^n
  MatrixOf<E> B = hcat(kron(eng, F.transpose(), identity(eng, p)), kron(eng, identity(eng, n), G));
  return subquotient(eng, A, B);
}

template <class E>
ModuleInvariants<E> tor1(const Presentation<E> &P0, const Presentation<E> &Q0) {
  require_same_engine(P0, Q0);
  // Domains: minimal presentations keep the Kronecker systems small.
  const Presentation<E> P = E::is_domain ? normalize(P0) : P0, Q = E::is_domain ? normalize(Q0) : Q0;
  const E &eng = P.engine;
  const MatrixOf<E> &F = P.relations, &G = Q.relations;
  const std::size_t m = P.generators, n = P.relation_count(), p = Q.generators;
  MatrixOf<E> F2 = kernel_gens(eng, F);
  // cycles: X in R^n (x) N with X F^T = 0 in R^m (x) N
  MatrixOf<E> phi = hcat(kron(eng, F, identity(eng, p)), negated(eng, kron(eng, identity(eng, m), G)));
  MatrixOf<E> A = kernel_gens(eng, phi).row_range(0, p * n);
  MatrixOf<E> B = hcat(kron(eng, F2, identity(eng, p)), kron(eng, identity(eng, n), G));
  return subquotient(eng, A, B);
}

template <class E>
bool is_projective(const E &, const ModuleInvariants<E> &inv) {
  if constexpr (E::is_domain) {
    return inv.torsion.empty();
  } else {
    for (const auto &part : inv.local)
      for (unsigned e : part.summands)
        if (e != part.exponent) return false;
    return true;
  }
}

template <class E>
bool is_stable(const E &, const ModuleInvariants<E> &inv) {
  if constexpr (E::is_domain) {
    return inv.free_rank == 0;
  } else {
    for (const auto &part : inv.local)
      for (unsigned e : part.summands)
        if (e == part.exponent) return false;
    return true;
  }
}

template <class E>
std::pair<ModuleInvariants<E>, ModuleInvariants<E>> split_invariants(const E &, const ModuleInvariants<E> &inv) {
  ModuleInvariants<E> proj, stab;
  if constexpr (E::is_domain) {
    proj.free_rank = inv.free_rank;
    stab.torsion = inv.torsion;
  } else {
    for (const auto &part : inv.local) {
      LocalPart pp{part.prime, part.exponent, {}}, sp{part.prime, part.exponent, {}};
      for (unsigned e : part.summands) (e == part.exponent ? pp : sp).summands.push_back(e);
      proj.local.push_back(std::move(pp));
      stab.local.push_back(std::move(sp));
    }
  }
  return {std::move(proj), std::move(stab)};
}

template <class E>
bool is_projective(const Presentation<E> &P) {
  return is_projective(P.engine, invariants(P));
}

template <class E>
bool is_stable(const Presentation<E> &P) {
  return is_stable(P.engine, invariants(P));
}

template <class E>
bool pd_le_1_certificate(const Presentation<E> &P) {
  return invariants(dual(ab_transpose(P))).is_zero();
}

namespace {

/// The projective summands of M over Z/n, mapped into M along the Smith
/// basis of the lifted relation lattice.
ModuleMap<ModEngine> projective_inclusion(const Presentation<ModEngine> &P) {
  const ModEngine &eng = P.engine;
  IntegerEngine Z;
  const std::size_t m = P.generators;
  auto snf = smith_normal_form(Z, hcat(reduce(eng, P.relations), modulus_identity(eng, m)));
  auto Uinv = solve_matrix(Z, snf.U, identity(Z, m));
  std::vector<std::vector<mpz_class>> images;
  std::vector<mpz_class> orders;
  for (std::size_t i = 0; i < m; ++i) {
    const mpz_class &d = snf.S(i, i);
    for (const auto &[p, k] : eng.prime_powers()) {
      if (valuation(d, p) != k) continue;
      mpz_class pk = power(p, k);
      std::vector<mpz_class> g = Uinv->column(i);
      for (auto &x : g) x = eng.reduce(x * (d / pk));
      images.push_back(std::move(g));
      orders.push_back(pk);
    }
  }
  const std::size_t t = images.size();
  MatrixOf<ModEngine> G(m, t), rel(t, t);
  for (std::size_t j = 0; j < t; ++j) {
    G.set_column(j, images[j]);
    rel(j, j) = orders[j];
  }
  return ModuleMap<ModEngine>::make(Presentation<ModEngine>(eng, t, std::move(rel)), P, std::move(G));
}

} // namespace

template <class E>
Decomposition<E> decompose(const Presentation<E> &P) {
  const E &eng = P.engine;
  Presentation<E> tr = ab_transpose(P);
  const bool applicable = pd_le_1_certificate(tr);
  if constexpr (E::is_domain) {
    auto dd = double_dual_map(P);
    ModuleInvariants<E> proj = invariants(dd.double_dual);
    ModuleInvariants<E> stab = ext1(tr, free_module(eng, 1));
    // sigma is onto the free module M**; any preimage of a basis is a section
    const std::size_t u = dd.double_dual.generators;
    auto s = solve_matrix(eng, dd.sigma.generator_matrix, identity(eng, u));
    if (!s) throw DomainError("decompose: sigma has no section");
    auto splitting = ModuleMap<E>::make(dd.double_dual, P, std::move(*s));
    return {proj, stab, std::move(splitting), SplittingKind::SectionOfSigma, applicable, proj, stab};
  } else {
    auto [proj, stab] = split_invariants(eng, invariants(P));
    Decomposition<E> out{std::move(proj), std::move(stab), projective_inclusion(P),
                         SplittingKind::InclusionOfProjectivePart, applicable, std::nullopt, std::nullopt};
    if (applicable) {
      out.double_dual = invariants(double_dual_map(P).double_dual);
      out.ext_transpose = ext1(tr, free_module(eng, 1));
    }
    return out;
  }
}

template <class E>
PeelingTrace<E> peel(const Presentation<E> &P, std::size_t max_steps) {
  const E &eng = P.engine;
  PeelingTrace<E> trace;
  ModuleInvariants<E> current = invariants(P);
  for (std::size_t k = 0; k <= max_steps; ++k) {
    if (is_stable(eng, current)) {
      trace.terminated = true;
      break;
    }
    if (k == max_steps) break;
    auto [proj, rest] = split_invariants(eng, current);
    trace.steps.push_back({proj, rest});
    current = std::move(rest);
  }
  return trace;
}

template <class E>
bool projectively_equivalent(const Presentation<E> &P, const Presentation<E> &Q) {
  require_same_engine(P, Q);
  return split_invariants(P.engine, invariants(P)).second == split_invariants(Q.engine, invariants(Q)).second;
}

namespace {

template <class E>
std::size_t primary_component_count(const E &eng, const ModuleInvariants<E> &inv) {
  std::size_t count = 0;
  if constexpr (E::is_domain) {
    for (const auto &d : inv.torsion) count += eng.count_prime_factors(d);
  } else {
    for (const auto &part : inv.local) count += part.summands.size();
  }
  return count;
}

} // namespace

template <class E>
DimensionValue udim(const Presentation<E> &P) {
  auto inv = invariants(P);
  return DimensionValue::finite(inv.free_rank + primary_component_count(P.engine, inv));
}

template <class E>
DimensionValue hdim(const Presentation<E> &P) {
  auto inv = invariants(P);
  // R itself has infinitely many maximal ideals, hence a coindependent family
  // of every size.
  if (inv.free_rank > 0) return DimensionValue::infinite();
  return DimensionValue::finite(primary_component_count(P.engine, inv));
}

template <class E>
MuEpsilonReport<E> verify_mu_epsilon(const Presentation<E> &P, const Presentation<E> &Q) {
  require_same_engine(P, Q);
  Presentation<E> tr = ab_transpose(P);
  MuEpsilonReport<E> r{ext1(P, Q), tensor(Q, tr), hom(tr, Q), tor1(P, Q), pd_le_1_certificate(P), Verdict::NotChecked,
                       Verdict::NotChecked};
  if (r.pd_le_1) {
    r.mu = r.ext1 == r.tensor_tr ? Verdict::True : Verdict::False;
    r.epsilon = r.hom_tr == r.tor1 ? Verdict::True : Verdict::False;
  }
  return r;
}

template <DomainEngine E>
Remark37Report<E> remark_3_7_instance(const Presentation<E> &projective, const El<E> &a) {
  const E &eng = projective.engine;
  if (eng.is_zero(a) || eng.is_unit(a))
    throw DomainError("remark37: a must be a nonzero non-unit, got " + eng.to_string(a));
  if (!is_projective(projective)) throw DomainError("remark37: the summand P must be projective");
  Presentation<E> U = direct_sum(projective, cyclic_module(eng, a));
  Presentation<E> tr = ab_transpose(U);
  ModuleInvariants<E> d = invariants(dual(U));
  const bool nonzero = !d.is_zero();
  const bool pd = pd_le_1_certificate(tr);
  return {std::move(U), std::move(tr), pd, std::move(d), nonzero};
}

template <class E>
std::string describe(const E &eng, const ModuleInvariants<E> &inv) {
  std::vector<std::string> parts;
  if constexpr (E::is_domain) {
    const std::string ring = std::is_same_v<E, IntegerEngine> ? std::string("Z") : "F" + eng.tag().substr(5, eng.tag().size() - 6) + "[x]";
    if (inv.free_rank == 1) parts.push_back(ring);
    if (inv.free_rank > 1) parts.push_back(ring + "^" + std::to_string(inv.free_rank));
    for (const auto &d : inv.torsion) parts.push_back(ring + "/(" + eng.to_string(d) + ")");
  } else {
    for (const auto &part : inv.local)
      for (unsigned e : part.summands) parts.push_back("Z/" + power(part.prime, e).get_str());
  }
  if (parts.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + parts[i];
  return s;
}

#define FPMOD_INSTANTIATE(E)                                                                                  \
  template struct Presentation<E>;                                                                            \
  template struct ModuleInvariants<E>;                                                                        \
  template struct ModuleMap<E>;                                                                               \
  template Presentation<E> free_module(const E &, std::size_t);                                               \
  template Presentation<E> cyclic_module(const E &, const El<E> &);                                           \
  template Presentation<E> direct_sum(const Presentation<E> &, const Presentation<E> &);                      \
  template Presentation<E> presentation_of(const E &, const ModuleInvariants<E> &);                           \
  template ModuleInvariants<E> direct_sum(const E &, const ModuleInvariants<E> &, const ModuleInvariants<E> &); \
  template Presentation<E> normalize(const Presentation<E> &);                                                \
  template ModuleInvariants<E> invariants(const Presentation<E> &);                                           \
  template bool is_isomorphic(const Presentation<E> &, const Presentation<E> &);                              \
  template Presentation<E> dual(const Presentation<E> &);                                                     \
  template Presentation<E> ab_transpose(const Presentation<E> &, TransposeMode);                              \
  template DoubleDualMap<E> double_dual_map(const Presentation<E> &);                                         \
  template bool is_torsionless(const Presentation<E> &);                                                      \
  template ModuleInvariants<E> hom(const Presentation<E> &, const Presentation<E> &);                         \
  template ModuleInvariants<E> tensor(const Presentation<E> &, const Presentation<E> &);                      \
  template ModuleInvariants<E> ext1(const Presentation<E> &, const Presentation<E> &);                        \
  template ModuleInvariants<E> tor1(const Presentation<E> &, const Presentation<E> &);                        \
  template bool is_projective(const E &, const ModuleInvariants<E> &);                                        \
  template bool is_stable(const E &, const ModuleInvariants<E> &);                                            \
  template std::pair<ModuleInvariants<E>, ModuleInvariants<E>> split_invariants(const E &,                    \
                                                                                const ModuleInvariants<E> &); \
  template bool is_projective(const Presentation<E> &);                                                       \
  template bool is_stable(const Presentation<E> &);                                                           \
  template bool pd_le_1_certificate(const Presentation<E> &);                                                 \
  template Decomposition<E> decompose(const Presentation<E> &);                                               \
  template PeelingTrace<E> peel(const Presentation<E> &, std::size_t);                                        \
  template bool projectively_equivalent(const Presentation<E> &, const Presentation<E> &);                    \
  template DimensionValue udim(const Presentation<E> &);                                                      \
  template DimensionValue hdim(const Presentation<E> &);                                                      \
  template MuEpsilonReport<E> verify_mu_epsilon(const Presentation<E> &, const Presentation<E> &);            \
  template std::string describe(const E &, const ModuleInvariants<E> &);

FPMOD_INSTANTIATE(IntegerEngine)
FPMOD_INSTANTIATE(PolyEngine)
FPMOD_INSTANTIATE(ModEngine)

template Remark37Report<IntegerEngine> remark_3_7_instance(const Presentation<IntegerEngine> &, const mpz_class &);
template Remark37Report<PolyEngine> remark_3_7_instance(const Presentation<PolyEngine> &, const Poly &);

#undef FPMOD_INSTANTIATE

} // namespace fpmod
