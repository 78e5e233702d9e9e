#pragma once

// Finitely presented modules M = Coker(F : R^n -> R^m). Columns of F are
// relations among the m generators, so dualizing a presentation is literally
// transposing F.
//
// Over the Euclidean engines every module is classified by its Smith form.
// Over Z/n a module is a finite abelian group killed by n; it splits along
// the prime powers p^k || n into modules over the local rings Z/p^k, where
// projective means free and a cyclic summand Z/p^e is projective iff e = k.

#include "fpmod/engine.hpp"
#include "fpmod/linalg.hpp"
#include "fpmod/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fpmod {

template <class E>
struct Presentation {
  E engine;
  std::size_t generators = 0;
  MatrixOf<E> relations; // generators x (number of relations)

  Presentation(E eng, std::size_t gens, MatrixOf<E> rel);
  Presentation(E eng, MatrixOf<E> rel) : Presentation(eng, rel.rows(), std::move(rel)) {}

  [[nodiscard]] std::size_t relation_count() const { return relations.cols(); }
  bool operator==(const Presentation &) const = default;
};

/// Cyclic summands over one local factor Z/p^k of Z/n: the module
/// (+)_j Z/p^{e_j}, exponents ascending, 1 <= e_j <= k.
struct LocalPart {
  mpz_class prime;
  unsigned exponent = 0; // k
  std::vector<unsigned> summands;
  bool operator==(const LocalPart &) const = default;
};

/// Isomorphism-class fingerprint. Domain engines: free rank and the
/// non-unit invariant factors. IntegersMod: one LocalPart per prime of n.
template <class E>
struct ModuleInvariants {
  std::size_t free_rank = 0;
  std::vector<typename E::Elem> torsion;
  std::vector<LocalPart> local;

  [[nodiscard]] bool is_zero() const;
  bool operator==(const ModuleInvariants &) const = default;
};

class DimensionValue {
public:
  static DimensionValue finite(std::size_t k) { return DimensionValue(false, k); }
  static DimensionValue infinite() { return DimensionValue(true, 0); }

  [[nodiscard]] bool is_infinite() const { return infinite_; }
  [[nodiscard]] std::size_t value() const;
  [[nodiscard]] std::string to_string() const { return infinite_ ? "infinite" : std::to_string(value_); }

  bool operator==(const DimensionValue &) const = default;

private:
  DimensionValue(bool inf, std::size_t v) : infinite_(inf), value_(v) {}
  bool infinite_;
  std::size_t value_;
};

/// A homomorphism Coker(F_source) -> Coker(F_target) given on generators.
/// The witness W satisfies generator_matrix * F_source = F_target * W.
template <class E>
struct ModuleMap {
  Presentation<E> source;
  Presentation<E> target;
  MatrixOf<E> generator_matrix; // target.generators x source.generators
  MatrixOf<E> lift_witness;

  /// Throws DomainError when the generator images do not respect relations.
  static ModuleMap make(Presentation<E> source, Presentation<E> target, MatrixOf<E> generator_matrix);
};

template <class E>
struct DoubleDualMap {
  Presentation<E> dual;        // M*, generated by the columns of dual_embedding
  MatrixOf<E> dual_embedding;  // m x s, functionals on R^m killing Im F
  Presentation<E> double_dual; // M**
  ModuleMap<E> sigma;          // M -> M**, m |-> (f |-> f(m))
  ModuleInvariants<E> kernel;
  ModuleInvariants<E> cokernel;
};

enum class SplittingKind {
  SectionOfSigma,          // s : M** -> M with sigma o s = id
  InclusionOfProjectivePart // local splitting over Z/n
};

template <class E>
struct Decomposition {
  ModuleInvariants<E> proj;
  ModuleInvariants<E> stab;
  ModuleMap<E> splitting;
  SplittingKind splitting_kind;
  /// pd(Tr M) <= 1 certified, so M ~ M** (+) Ext^1(Tr M, R) applies.
  bool formula_path_applicable = false;
  std::optional<ModuleInvariants<E>> double_dual;   // invariants(M**)
  std::optional<ModuleInvariants<E>> ext_transpose; // invariants(Ext^1(Tr M, R))
};

template <class E>
struct PeelingStep {
  ModuleInvariants<E> projective;
  ModuleInvariants<E> remainder;
};

template <class E>
struct PeelingTrace {
  std::vector<PeelingStep<E>> steps;
  bool terminated = false;
};

enum class Verdict { True, False, NotChecked };

std::string to_string(Verdict v);

template <class E>
struct MuEpsilonReport {
  ModuleInvariants<E> ext1;       // Ext^1(M, N)
  ModuleInvariants<E> tensor_tr;  // N (x) Tr M
  ModuleInvariants<E> hom_tr;     // Hom(Tr M, N)
  ModuleInvariants<E> tor1;       // Tor_1(M, N)
  bool pd_le_1 = false;
  Verdict mu = Verdict::NotChecked;
  Verdict epsilon = Verdict::NotChecked;
};

template <class E>
struct Remark37Report {
  Presentation<E> module;    // U = P (+) R/aR
  Presentation<E> transpose; // Tr U
  bool pd_transpose_le_1 = false;
  ModuleInvariants<E> dual;  // U*
  bool dual_nonzero = false;
};

enum class TransposeMode {
  Normalized, // transpose of the minimal presentation
  Raw         // transpose of the presentation exactly as given
};

// ------------------------------------------------------------ construction

template <class E>
Presentation<E> free_module(const E &eng, std::size_t rank);
/// R / aR
template <class E>
Presentation<E> cyclic_module(const E &eng, const typename E::Elem &a);
template <class E>
Presentation<E> direct_sum(const Presentation<E> &P, const Presentation<E> &Q);
/// A canonical presentation of the module with the given fingerprint.
template <class E>
Presentation<E> presentation_of(const E &eng, const ModuleInvariants<E> &inv);
template <class E>
ModuleInvariants<E> direct_sum(const E &eng, const ModuleInvariants<E> &a, const ModuleInvariants<E> &b);

// --------------------------------------------------------------- operations

template <class E>
Presentation<E> normalize(const Presentation<E> &P);
template <class E>
ModuleInvariants<E> invariants(const Presentation<E> &P);
template <class E>
bool is_isomorphic(const Presentation<E> &P, const Presentation<E> &Q);
template <class E>
Presentation<E> dual(const Presentation<E> &P);
template <class E>
Presentation<E> ab_transpose(const Presentation<E> &P, TransposeMode mode = TransposeMode::Normalized);
template <class E>
DoubleDualMap<E> double_dual_map(const Presentation<E> &P);
template <class E>
bool is_torsionless(const Presentation<E> &P);
template <class E>
ModuleInvariants<E> hom(const Presentation<E> &P, const Presentation<E> &Q);
template <class E>
ModuleInvariants<E> tensor(const Presentation<E> &P, const Presentation<E> &Q);
template <class E>
ModuleInvariants<E> ext1(const Presentation<E> &P, const Presentation<E> &Q);
template <class E>
ModuleInvariants<E> tor1(const Presentation<E> &P, const Presentation<E> &Q);
template <class E>
bool is_projective(const Presentation<E> &P);
template <class E>
bool is_stable(const Presentation<E> &P);
template <class E>
Decomposition<E> decompose(const Presentation<E> &P);
template <class E>
PeelingTrace<E> peel(const Presentation<E> &P, std::size_t max_steps);
template <class E>
bool projectively_equivalent(const Presentation<E> &P, const Presentation<E> &Q);
template <class E>
DimensionValue udim(const Presentation<E> &P);
template <class E>
DimensionValue hdim(const Presentation<E> &P);
/// True iff (Tr M)* = 0 for a presentation with monic differential; this
/// certifies pd(M) <= 1.
template <class E>
bool pd_le_1_certificate(const Presentation<E> &P);
template <class E>
MuEpsilonReport<E> verify_mu_epsilon(const Presentation<E> &P, const Presentation<E> &Q);
template <DomainEngine E>
Remark37Report<E> remark_3_7_instance(const Presentation<E> &projective, const typename E::Elem &a);

// Invariant-level helpers.
template <class E>
bool is_projective(const E &eng, const ModuleInvariants<E> &inv);
template <class E>
bool is_stable(const E &eng, const ModuleInvariants<E> &inv);
/// (projective part, stable part)
template <class E>
std::pair<ModuleInvariants<E>, ModuleInvariants<E>> split_invariants(const E &eng, const ModuleInvariants<E> &inv);

/// Z/n only: group-theoretic invariant factors d_1 | d_2 | ... (all > 1).
std::vector<mpz_class> group_invariant_factors(const ModEngine &eng, const ModuleInvariants<ModEngine> &inv);
/// Z/n only: |M|, |Soc(M)| and |Rad(M)|.
mpz_class module_order(const ModuleInvariants<ModEngine> &inv);
mpz_class socle_order(const ModuleInvariants<ModEngine> &inv);
mpz_class radical_order(const ModuleInvariants<ModEngine> &inv);

template <class E>
std::string describe(const E &eng, const ModuleInvariants<E> &inv);

} // namespace fpmod
