#include "fpmod/suites.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <stdexcept>

namespace fpmod::suites {

using report::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Result named(const char *name) {
  Result r;
  r.name = name;
  return r;
}

struct Tally {
  Result &r;
  void record(bool ok) {
    ++r.cases;
    if (!ok) ++r.failures;
  }
};

// ----------------------------------------------------- decomposition identity

template <class E>
ordered_json corollary38_case(const Presentation<E> &P, bool &ok) {
  const E &eng = P.engine;
  auto inv = invariants(P);
  auto dec = decompose(P);
  auto dd = double_dual_map(P);
  const std::size_t u = dd.double_dual.generators;
  bool sums = direct_sum(eng, *dec.double_dual, *dec.ext_transpose) == inv;
  bool proj_projective = is_projective(eng, dec.proj);
  bool stab_dual_zero = invariants(dual(presentation_of(eng, dec.stab))).is_zero();
  bool section = multiply(eng, dd.sigma.generator_matrix, dec.splitting.generator_matrix) == identity(eng, u);
  ok = sums && proj_projective && stab_dual_zero && section && dec.formula_path_applicable;
  ordered_json j;
  j["input"] = report::presentation_json(P);
  j["fingerprints"] = ordered_json::array({report::fingerprint("invariants(M)", eng, inv),
                                           report::fingerprint("invariants(M**)", eng, *dec.double_dual),
                                           report::fingerprint("ext1(Tr M, R)", eng, *dec.ext_transpose),
                                           report::fingerprint("decompose.proj", eng, dec.proj),
                                           report::fingerprint("decompose.stab", eng, dec.stab)});
  j["checks"] = {{"M = M** + Ext1(Tr M, R)", sums},
                 {"proj projective", proj_projective},
                 {"stab dual zero", stab_dual_zero},
                 {"sigma o s = id", section}};
  j["ok"] = ok;
  return j;
}

template <class E, class Case>
void run_domain_cases(Result &r, ordered_json &cases, const std::vector<Presentation<E>> &mods, Case &&one) {
  Tally t{r};
  for (const auto &P : mods) {
    auto t0 = Clock::now();
    bool ok = false;
    ordered_json j = one(P, ok);
    r.max_case_seconds = std::max(r.max_case_seconds, since(t0));
    t.record(ok);
    cases.push_back(std::move(j));
  }
}

struct DomainCorpus {
  std::vector<Presentation<IntegerEngine>> integers;
  std::vector<Presentation<PolyEngine>> polys;
};

DomainCorpus domain_corpus(const Options &o) {
  const std::size_t count = o.count ? o.count : 300;
  Rng rng(o.seed);
  DomainCorpus c;
  PolyEngine F5(5);
  for (std::size_t k = 0; k < count; ++k) c.integers.push_back(random_integer_presentation(rng, 6, 6, 9));
  for (std::size_t k = 0; k < count; ++k) c.polys.push_back(random_poly_presentation(rng, F5, 6, 6, 2));
  return c;
}

Result corollary38(const Options &o) {
  Result r = named("corollary38");
  auto corpus = domain_corpus(o);
  ordered_json zc = ordered_json::array(), pc = ordered_json::array();
  auto one = [](const auto &P, bool &ok) { return corollary38_case(P, ok); };
  run_domain_cases(r, zc, corpus.integers, one);
  run_domain_cases(r, pc, corpus.polys, one);
  r.report["records"] = {{"int", zc}, {"poly(5)", pc}};
  return r;
}

// ---------------------------------------------------------------- round trip

Result roundtrip(const Options &o) {
  Result r = named("roundtrip");
  auto corpus = domain_corpus(o);
  auto one = [](const auto &P, bool &ok) {
    const auto &eng = P.engine;
    auto tt = ab_transpose(ab_transpose(P));
    ok = projectively_equivalent(tt, P);
    ordered_json j;
    j["input"] = report::presentation_json(P);
    j["fingerprints"] = ordered_json::array(
        {report::fingerprint("invariants(M)", eng, invariants(P)), report::fingerprint("invariants(Tr Tr M)", eng, invariants(tt))});
    j["projectively_equivalent"] = ok;
    return j;
  };
  ordered_json zc = ordered_json::array(), pc = ordered_json::array();
  run_domain_cases(r, zc, corpus.integers, one);
  run_domain_cases(r, pc, corpus.polys, one);
  r.report["records"] = {{"int", zc}, {"poly(5)", pc}};
  return r;
}

// ------------------------------------------------------- Ext / Tor identities

Result theorem32(const Options &o) {
  Result r = named("theorem32");
  const std::size_t count = o.count ? o.count : 200;
  Rng rng(o.seed);
  ordered_json cases = ordered_json::array();
  Tally t{r};
  IntegerEngine Z;
  for (std::size_t k = 0; k < count; ++k) {
    auto P = random_integer_presentation(rng, 6, 6, 9);
    auto Q = random_integer_presentation(rng, 6, 6, 9);
    auto t0 = Clock::now();
    auto rep = verify_mu_epsilon(P, Q);
    r.max_case_seconds = std::max(r.max_case_seconds, since(t0));
    bool ok = rep.mu == Verdict::True && rep.epsilon == Verdict::True;
    t.record(ok);
    ordered_json j;
    j["M"] = report::presentation_json(P);
    j["N"] = report::presentation_json(Q);
    j["fingerprints"] = ordered_json::array({report::fingerprint("ext1(M,N)", Z, rep.ext1),
                                             report::fingerprint("tensor(N,Tr M)", Z, rep.tensor_tr),
                                             report::fingerprint("hom(Tr M,N)", Z, rep.hom_tr),
                                             report::fingerprint("tor1(M,N)", Z, rep.tor1)});
    j["mu"] = to_string(rep.mu);
    j["epsilon"] = to_string(rep.epsilon);
    cases.push_back(std::move(j));
  }
  r.report["records"] = cases;
  return r;
}

// --------------------------------------------------- exhaustive Z/n corpus

constexpr long kModuli[] = {4, 6, 8, 9, 12};

/// Every presentation over Z/n with 1 or 2 generators and 0, 1 or 2 relations.
void for_each_small_zn(long n, const std::function<void(std::size_t, const MatrixOf<ModEngine> &)> &f) {
  for (std::size_t m = 1; m <= 2; ++m)
    for (std::size_t rels = 0; rels <= 2; ++rels) {
      const std::size_t cells = m * rels;
      std::vector<long> v(cells, 0);
      for (;;) {
        MatrixOf<ModEngine> F(m, rels);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < rels; ++j) F(i, j) = v[i * rels + j];
        f(m, F);
        std::size_t i = 0;
        while (i < cells && ++v[i] == n) v[i++] = 0;
        if (i == cells) break;
      }
    }
}

template <class E>
bool theorem36_holds(const Presentation<E> &P) {
  bool dual_zero = invariants(dual(P)).is_zero();
  return dual_zero == (is_stable(P) && pd_le_1_certificate(ab_transpose(P)));
}

Result theorem36(const Options &o) {
  Result r = named("theorem36");
  auto corpus = domain_corpus(o);
  auto one = [](const auto &P, bool &ok) {
    const auto &eng = P.engine;
    ok = theorem36_holds(P);
    ordered_json j;
    j["input"] = report::presentation_json(P);
    j["fingerprints"] = ordered_json::array({report::fingerprint("invariants(M)", eng, invariants(P)),
                                             report::fingerprint("invariants(dual(M))", eng, invariants(dual(P)))});
    j["stable"] = is_stable(P);
    j["pd(Tr M) <= 1"] = pd_le_1_certificate(ab_transpose(P));
    j["ok"] = ok;
    return j;
  };
  ordered_json zc = ordered_json::array(), pc = ordered_json::array();
  run_domain_cases(r, zc, corpus.integers, one);
  run_domain_cases(r, pc, corpus.polys, one);
  r.report["random"] = {{"int", zc}, {"poly(5)", pc}};

  ordered_json ex = ordered_json::array();
  Tally t{r};
  for (long n : kModuli) {
    ModEngine eng{mpz_class(n)};
    std::size_t cases = 0, dual_zero = 0, stable = 0, pd_tr = 0;
    ordered_json failures = ordered_json::array();
    for_each_small_zn(n, [&](std::size_t m, const MatrixOf<ModEngine> &F) {
      Presentation<ModEngine> P(eng, m, F);
      bool dz = invariants(dual(P)).is_zero(), st = is_stable(P), pd = pd_le_1_certificate(ab_transpose(P));
      bool ok = dz == (st && pd);
      t.record(ok);
      ++cases;
      dual_zero += dz;
      stable += st;
      pd_tr += pd;
      if (!ok) failures.push_back(report::presentation_json(P));
    });
    ex.push_back({{"ring", eng.tag()},
                  {"presentations", cases},
                  {"dual zero", dual_zero},
                  {"stable", stable},
                  {"pd(Tr M) <= 1", pd_tr},
                  {"failures", failures}});
  }
  r.report["exhaustive"] = ex;
  return r;
}

// ------------------------------------------------------ oracle equivalence

std::vector<long> divisors(long n) {
  std::vector<long> out;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

/// d |-> |M[d]| predicted from fpmod invariants.
std::vector<std::size_t> predicted_profile(long n, const ModuleInvariants<ModEngine> &inv) {
  std::vector<std::size_t> out;
  for (long d : divisors(n)) {
    mpz_class c = 1;
    for (const auto &part : inv.local)
      for (unsigned e : part.summands) {
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), part.prime.get_mpz_t(), e);
        mpz_class g;
        mpz_gcd_ui(g.get_mpz_t(), pe.get_mpz_t(), static_cast<unsigned long>(d));
        c *= g;
      }
    out.push_back(c.get_ui());
  }
  return out;
}

/// d |-> |S[d]| for a submodule S of a Z/n-module, by counting.
std::vector<std::size_t> counted_profile(long n, const finlab::FiniteModule &M, const finlab::ElemSet &S) {
  std::vector<std::size_t> out;
  for (long d : divisors(n)) {
    std::size_t c = 0;
    for (auto x : S.elements())
      if (M.act(x, static_cast<finlab::Index>(d % n)) == 0) ++c;
    out.push_back(c);
  }
  return out;
}

struct BruteVerdict {
  std::size_t udim = 0, hdim = 0;
  bool projective = false, stable = false, decomposes = false, unique = false;
  std::vector<std::size_t> proj_profile, stab_profile;
};

BruteVerdict brute_verdict(long n, const finlab::FiniteModule &M) {
  auto L = finlab::enumerate_submodules(M);
  BruteVerdict v;
  auto u = finlab::udim_bruteforce(M, L);
  v.udim = u.independent_family == u.uniform_sum ? u.independent_family : SIZE_MAX;
  v.hdim = finlab::hdim_bruteforce(M, L).value;
  v.projective = finlab::is_projective_bruteforce(M);
  v.stable = finlab::is_stable_bruteforce(M);
  auto dec = finlab::decompose_bruteforce(M);
  v.decomposes = !dec.pairs.empty();
  v.unique = dec.pairwise_isomorphic;
  if (v.decomposes) {
    v.proj_profile = counted_profile(n, M, dec.pairs[0].projective);
    v.stab_profile = counted_profile(n, M, dec.pairs[0].stable);
  }
  return v;
}

Result oracle_equivalence(const Options &) {
  Result r = named("oracle-equivalence");
  Tally t{r};
  ordered_json per_ring = ordered_json::array();
  for (long n : kModuli) {
    ModEngine eng{mpz_class(n)};
    auto R = finlab::zmod(static_cast<unsigned>(n));
    std::map<std::pair<std::size_t, finlab::ElemSet>, BruteVerdict> cache;
    std::vector<finlab::FiniteModule> frees{finlab::free_module(R, 0), finlab::free_module(R, 1), finlab::free_module(R, 2)};
    std::size_t presentations = 0;
    ordered_json modules = ordered_json::array(), disagreements = ordered_json::array();
    for_each_small_zn(n, [&](std::size_t m, const MatrixOf<ModEngine> &F) {
      ++presentations;
      const auto &Fm = frees[m];
      std::vector<finlab::Index> gens;
      for (std::size_t j = 0; j < F.cols(); ++j) {
        std::size_t x = 0;
        for (std::size_t i = 0; i < m; ++i) x = x * static_cast<std::size_t>(n) + F(i, j).get_ui();
        gens.push_back(static_cast<finlab::Index>(x));
      }
      auto K = finlab::span(Fm, gens);
      auto key = std::pair{m, K};
      auto it = cache.find(key);
      Presentation<ModEngine> P(eng, m, F);
      if (it == cache.end()) {
        auto M = finlab::quotient(Fm, K);
        it = cache.emplace(key, brute_verdict(n, M)).first;
        const auto &v = it->second;
        modules.push_back({{"presentation", report::presentation_json(P)},
                           {"size", M.size()},
                           {"fingerprint", report::fingerprint("invariants(M)", eng, invariants(P))},
                           {"udim", v.udim},
                           {"hdim", v.hdim},
                           {"projective", v.projective},
                           {"stable", v.stable},
                           {"decompositions unique", v.unique}});
      }
      const auto &v = it->second;
      auto inv = invariants(P);
      auto dec = decompose(P);
      bool ok = udim(P).value() == v.udim && hdim(P).value() == v.hdim && is_projective(P) == v.projective &&
                is_stable(P) == v.stable && v.decomposes && v.unique &&
                predicted_profile(n, dec.proj) == v.proj_profile && predicted_profile(n, dec.stab) == v.stab_profile;
      t.record(ok);
      if (!ok) disagreements.push_back(report::presentation_json(P));
    });
    per_ring.push_back({{"ring", eng.tag()},
                        {"presentations", presentations},
                        {"distinct modules", cache.size()},
                        {"modules", modules},
                        {"disagreements", disagreements}});
  }
  r.report["rings"] = per_ring;
  return r;
}

// --------------------------------------------------------------- semiperfect

Result semiperfect(const Options &) {
  Result r = named("semiperfect");
  Tally t{r};
  ordered_json rings = ordered_json::array();
  for (const char *spec : {"z4", "z9", "quot(2,[0,0,1])", "z2^2", "triangular(z2)", "idealization(z2)",
                           "idealization(z2^2)", "idealization(z2^3)"}) {
    auto R = finlab::parse_ring(spec);
    auto mods = finlab::enumerate_modules(R, 16);
    ordered_json list = ordered_json::array();
    for (const auto &M : mods) {
      auto t0 = Clock::now();
      auto dec = finlab::decompose_bruteforce(M);
      r.max_case_seconds = std::max(r.max_case_seconds, since(t0));
      bool ok = !dec.pairs.empty() && dec.pairwise_isomorphic;
      t.record(ok);
      ordered_json j{{"size", M.size()}, {"decompositions", dec.pairs.size()}, {"pairwise isomorphic", dec.pairwise_isomorphic}};
      if (!dec.pairs.empty()) {
        j["projective size"] = dec.pairs[0].projective.count();
        j["stable size"] = dec.pairs[0].stable.count();
      }
      list.push_back(std::move(j));
    }
    rings.push_back({{"ring", spec}, {"ring size", R->size()}, {"modules", mods.size()}, {"results", list}});
  }
  r.report["rings"] = rings;
  return r;
}

// ------------------------------------------------------- idealization radical

Result example47(const Options &) {
  Result r = named("example47");
  Tally t{r};
  ordered_json list = ordered_json::array();
  for (unsigned k = 1; k <= 4; ++k) {
    auto base = finlab::parse_ring("z2^" + std::to_string(k));
    auto A = finlab::idealization(base);
    auto J = finlab::jacobson_radical(*A.ring);
    bool shape = J.elements == A.zero_times_S && J.is_ideal;
    auto reg = finlab::regular_module(A.ring);
    finlab::ElemSet Jset;
    for (auto x : J.elements) Jset.set(x);
    auto AJ = finlab::quotient(reg, Jset);
    auto dec = finlab::decompose_bruteforce(AJ);
    bool decomposes = !dec.pairs.empty() && dec.pairwise_isomorphic;
    t.record(shape && decomposes);
    list.push_back({{"k", k},
                    {"ring", A.ring->name()},
                    {"ring size", A.ring->size()},
                    {"jacobson radical", report::ring_subset_json(*A.ring, J.elements)},
                    {"{0} x S", report::ring_subset_json(*A.ring, A.zero_times_S)},
                    {"radical is {0} x S", shape},
                    {"A/J size", AJ.size()},
                    {"A/J decompositions", dec.pairs.size()},
                    {"A/J projective part size", dec.pairs.empty() ? 0 : dec.pairs[0].projective.count()},
                    {"A/J decomposes", decomposes}});
  }
  r.report["records"] = list;
  return r;
}

// --------------------------------------------------------- Z + Z/2 regression

Result remark37(const Options &) {
  Result r = named("remark37");
  IntegerEngine Z;
  auto rep = remark_3_7_instance(free_module(Z, 1), mpz_class(2));
  bool ok = rep.pd_transpose_le_1 && rep.dual_nonzero;
  Tally{r}.record(ok);
  r.report["U"] = report::presentation_json(rep.module);
  r.report["normalized U"] = report::presentation_json(normalize(rep.module));
  r.report["Tr U"] = report::presentation_json(rep.transpose);
  r.report["fingerprints"] = ordered_json::array({report::fingerprint("invariants(U)", Z, invariants(rep.module)),
                                                  report::fingerprint("invariants(Tr U)", Z, invariants(rep.transpose)),
                                                  report::fingerprint("invariants(dual(U))", Z, rep.dual)});
  r.report["pd(Tr U) <= 1"] = rep.pd_transpose_le_1;
  r.report["U* nonzero"] = rep.dual_nonzero;
  return r;
}

// ------------------------------------------------------------ rickart / baer

Result rickart_baer(const Options &) {
  Result r = named("rickart-baer");
  Tally t{r};
  ordered_json list = ordered_json::array();
  struct Expect {
    const char *ring;
    const char *property;
    bool value;
  };
  for (const Expect &e : {Expect{"z4", "rickart", false}, Expect{"z2^3", "baer", true},
                          Expect{"quot(2,[0,0,1])", "rickart", false}}) {
    auto R = finlab::parse_ring(e.ring);
    bool got = std::string(e.property) == "rickart" ? finlab::is_rickart(*R) : finlab::is_baer(*R);
    t.record(got == e.value);
    list.push_back({{"ring", e.ring}, {"property", e.property}, {"verdict", got}, {"expected", e.value}});
  }
  r.report["records"] = list;
  return r;
}

const std::map<std::string, std::function<Result(const Options &)>> &registry() {
  static const std::map<std::string, std::function<Result(const Options &)>> reg{
      {"corollary38", corollary38},   {"roundtrip", roundtrip},
      {"theorem32", theorem32},       {"theorem36", theorem36},
      {"oracle-equivalence", oracle_equivalence}, {"semiperfect", semiperfect},
      {"example47", example47},       {"remark37", remark37},
      {"rickart-baer", rickart_baer}};
  return reg;
}

} // namespace

const std::vector<std::string> &names() {
  static const std::vector<std::string> n{"corollary38", "roundtrip",   "theorem32", "theorem36",   "oracle-equivalence",
                                          "semiperfect", "example47",   "remark37",  "rickart-baer"};
  return n;
}

Result run(const std::string &name, const Options &opts) {
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown suite '" + name + "'");
  auto t0 = Clock::now();
  Result r = it->second(opts);
  r.seconds = since(t0);
  r.passed = r.failures == 0 && r.cases > 0;
  ordered_json head;
  head["suite"] = name;
  head["seed"] = opts.seed;
  head["count"] = opts.count;
  head["cases"] = r.cases;
  head["failures"] = r.failures;
  head["passed"] = r.passed;
  for (auto &[k, v] : r.report.items()) head[k] = v;
  r.report = std::move(head);
  return r;
}

Presentation<IntegerEngine> random_integer_presentation(Rng &rng, std::size_t max_gens, std::size_t max_rels, long bound) {
  const auto m = static_cast<std::size_t>(rng.range(0, static_cast<long>(max_gens)));
  const auto n = static_cast<std::size_t>(rng.range(0, static_cast<long>(max_rels)));
  MatrixOf<IntegerEngine> F(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) F(i, j) = rng.range(-bound, bound);
  return Presentation<IntegerEngine>(IntegerEngine{}, m, std::move(F));
}

Presentation<PolyEngine> random_poly_presentation(Rng &rng, const PolyEngine &eng, std::size_t max_gens,
                                                  std::size_t max_rels, int max_degree) {
  const auto m = static_cast<std::size_t>(rng.range(0, static_cast<long>(max_gens)));
  const auto n = static_cast<std::size_t>(rng.range(0, static_cast<long>(max_rels)));
  MatrixOf<PolyEngine> F(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<long> c(static_cast<std::size_t>(max_degree) + 1);
      for (auto &v : c) v = rng.range(0, static_cast<long>(eng.prime()) - 1);
      F(i, j) = eng.from_coeffs(c);
    }
  return Presentation<PolyEngine>(eng, m, std::move(F));
}

} // namespace fpmod::suites
