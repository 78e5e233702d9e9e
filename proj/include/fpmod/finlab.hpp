#pragma once

// Explicit finite rings and finite right modules given by full tables, with
// every lattice-theoretic notion evaluated by exhaustion. Element 0 is always
// the zero element and, for rings, element 1 is the identity.

#include "fpmod/engine.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace fpmod::finlab {

using Index = std::uint16_t;

struct Caps {
  std::size_t ring = 512;
  std::size_t module = 256; // hard upper bound of the ElemSet width
  std::size_t endomorphisms = std::size_t{1} << 20;
  std::size_t lattice = 50000;

  /// Defaults overridden by FPMOD_CAPS="ring=..,module=..,endomorphisms=..,lattice=..".
  static Caps from_env();
  /// "key=value,..." applied on top of base.
  static Caps parse(const std::string &text, Caps base);
  static Caps parse(const std::string &text) { return parse(text, Caps{}); }
};

class CapExceeded : public DomainError {
public:
  explicit CapExceeded(const std::string &what) : DomainError("cap exceeded: " + what) {}
};

/// Subset of a module with at most 256 elements.
struct ElemSet {
  std::array<std::uint64_t, 4> w{};

  void set(std::size_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  [[nodiscard]] bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  [[nodiscard]] std::size_t count() const;
  [[nodiscard]] std::vector<Index> elements() const;
  [[nodiscard]] bool subset_of(const ElemSet &o) const;
  ElemSet operator&(const ElemSet &o) const;
  ElemSet operator|(const ElemSet &o) const;
  auto operator<=>(const ElemSet &) const = default;
};

class FiniteRing {
public:
  /// Verifies the ring axioms on the full tables.
  FiniteRing(std::string name, std::size_t n, std::vector<Index> add, std::vector<Index> mul,
             std::vector<std::string> labels, const Caps &caps = {});

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] const std::string &name() const { return name_; }
  [[nodiscard]] const std::string &label(Index a) const { return labels_[a]; }
  [[nodiscard]] Index add(Index a, Index b) const { return add_[a * n_ + b]; }
  [[nodiscard]] Index mul(Index a, Index b) const { return mul_[a * n_ + b]; }
  [[nodiscard]] Index neg(Index a) const { return neg_[a]; }
  [[nodiscard]] Index sub(Index a, Index b) const { return add(a, neg(b)); }
  [[nodiscard]] bool is_unit(Index a) const { return unit_[a]; }
  [[nodiscard]] bool is_commutative() const { return commutative_; }
  [[nodiscard]] bool is_idempotent(Index a) const { return mul(a, a) == a; }
  [[nodiscard]] std::vector<Index> idempotents() const;

private:
  std::string name_;
  std::size_t n_;
  std::vector<Index> add_, mul_, neg_;
  std::vector<bool> unit_;
  std::vector<std::string> labels_;
  bool commutative_ = true;
};

using RingPtr = std::shared_ptr<const FiniteRing>;

RingPtr zmod(unsigned n, const Caps &caps = {});
RingPtr product(const FiniteRing &A, const FiniteRing &B, const Caps &caps = {});
/// F_p[x]/(f), f given by coefficients low to high with a nonzero leading one.
RingPtr polynomial_quotient(unsigned p, const std::vector<unsigned> &f, const Caps &caps = {});
/// Upper-triangular matrices [a b; 0 c] over R.
RingPtr triangular(const FiniteRing &R, const Caps &caps = {});

struct Idealization {
  RingPtr ring;
  /// The elements (0, s), s in S.
  std::vector<Index> zero_times_S;
};
/// R x S with (r,s)(r',s') = (rr', rs' + sr') for commutative R and
/// S = R/T, T the maximal ideal with the given position in lattice order.
Idealization idealization(const RingPtr &R, std::size_t maximal_ideal = 0, const Caps &caps = {});

/// z4 | zmod(n) | z2^3 | product(A,B,...) | quot(p,[c0,c1,..]) |
/// idealization(R[,i]) | triangular(R)
RingPtr parse_ring(const std::string &spec, const Caps &caps = {});

class FiniteModule {
public:
  /// Right module; verifies the module axioms on the full tables.
  FiniteModule(RingPtr ring, std::size_t n, std::vector<Index> add, std::vector<Index> act,
               std::vector<std::string> labels, const Caps &caps = {});

  [[nodiscard]] const RingPtr &ring() const { return ring_; }
  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] const std::string &label(Index x) const { return labels_[x]; }
  [[nodiscard]] Index add(Index a, Index b) const { return add_[a * n_ + b]; }
  [[nodiscard]] Index act(Index x, Index r) const { return act_[x * ring_->size() + r]; }
  [[nodiscard]] Index neg(Index a) const { return neg_[a]; }
  [[nodiscard]] ElemSet all() const;

private:
  RingPtr ring_;
  std::size_t n_;
  std::vector<Index> add_, act_, neg_;
  std::vector<std::string> labels_;
};

FiniteModule regular_module(const RingPtr &R, const Caps &caps = {});
FiniteModule free_module(const RingPtr &R, std::size_t rank, const Caps &caps = {});
FiniteModule direct_sum(const FiniteModule &A, const FiniteModule &B, const Caps &caps = {});
FiniteModule quotient(const FiniteModule &M, const ElemSet &K, const Caps &caps = {});
FiniteModule submodule(const FiniteModule &M, const ElemSet &K, const Caps &caps = {});
/// Coker of an m x r matrix over R (columns are relations), R^m / column span.
FiniteModule cokernel_module(const RingPtr &R, std::size_t m, const std::vector<std::vector<Index>> &columns,
                             const Caps &caps = {});

// ------------------------------------------------------------------ lattice

ElemSet span(const FiniteModule &M, const std::vector<Index> &gens);
ElemSet sum(const FiniteModule &M, const ElemSet &A, const ElemSet &B);
bool is_submodule(const FiniteModule &M, const ElemSet &K);

struct SubmoduleLattice {
  std::vector<ElemSet> submodules; // ascending size, then bit pattern; 0 first, M last
  [[nodiscard]] bool contains(const ElemSet &K) const;
};

SubmoduleLattice enumerate_submodules(const FiniteModule &M, const Caps &caps = {});

struct SubmodulePredicates {
  bool essential = false;
  bool small = false;
  bool maximal = false;
  bool simple = false;
};

SubmodulePredicates submodule_predicates(const FiniteModule &M, const SubmoduleLattice &L, const ElemSet &K);

struct SocleRadical {
  ElemSet socle;
  ElemSet radical;
};

SocleRadical socle_and_radical(const FiniteModule &M, const SubmoduleLattice &L);

struct UdimWitness {
  std::size_t independent_family = 0; // largest independent family of nonzero submodules
  std::size_t uniform_sum = 0;        // summands of an essential direct sum of uniforms
  std::vector<ElemSet> family;
};

struct HdimWitness {
  std::size_t value = 0;
  std::vector<ElemSet> family; // coindependent, hollow quotients, small intersection
};

UdimWitness udim_bruteforce(const FiniteModule &M, const SubmoduleLattice &L);
HdimWitness hdim_bruteforce(const FiniteModule &M, const SubmoduleLattice &L);

// ------------------------------------------------------ homomorphism search

/// A deterministic generating set, greedy by span growth.
std::vector<Index> generating_set(const FiniteModule &M);

/// Every homomorphism A -> B, each as the image table of A's elements.
std::vector<std::vector<Index>> homomorphisms(const FiniteModule &A, const FiniteModule &B, const Caps &caps = {});

bool isomorphic_bruteforce(const FiniteModule &A, const FiniteModule &B, const Caps &caps = {});

/// Split epimorphism R^g -> M from a fixed generating set, found through the
/// coordinates of a section in Hom(M, R). Throws CapExceeded instead of
/// answering false when the search is cut short.
bool is_projective_bruteforce(const FiniteModule &M, const Caps &caps = {});

std::vector<std::vector<Index>> idempotent_endomorphisms(const FiniteModule &M, const Caps &caps = {});

bool is_stable_bruteforce(const FiniteModule &M, const Caps &caps = {});

struct SummandPair {
  ElemSet projective;
  ElemSet stable;
};

struct BruteDecomposition {
  std::vector<SummandPair> pairs;
  bool pairwise_isomorphic = true;
};

BruteDecomposition decompose_bruteforce(const FiniteModule &M, const Caps &caps = {});

// -------------------------------------------------------------------- rings

struct RadicalReport {
  std::vector<Index> elements;
  bool is_ideal = false;
};

RadicalReport jacobson_radical(const FiniteRing &R);
/// Maximal right ideals, as maximal submodules of R_R.
std::vector<ElemSet> maximal_right_ideals(const RingPtr &R, const Caps &caps = {});
bool is_rickart(const FiniteRing &R);
bool is_baer(const FiniteRing &R);

/// Every right R-module with at most max_size elements, up to isomorphism.
std::vector<FiniteModule> enumerate_modules(const RingPtr &R, std::size_t max_size, const Caps &caps = {});

} // namespace fpmod::finlab
