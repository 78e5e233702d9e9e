#pragma once

// JSON encodings shared by the suites and the command-line tool.

#include "fpmod/finlab.hpp"
#include "fpmod/fpmod.hpp"

#include <json.hpp>

namespace fpmod::report {

using nlohmann::ordered_json;

template <class E>
ordered_json element_json(const E &eng, const typename E::Elem &a) {
  if constexpr (std::is_same_v<E, PolyEngine>) {
    (void)eng;
    return ordered_json(a.c);
  } else {
    mpz_class v = a;
    if constexpr (std::is_same_v<E, ModEngine>) v = eng.reduce(a);
    if (v.fits_slong_p()) return ordered_json(v.get_si());
    return ordered_json(v.get_str());
  }
}

template <class E>
ordered_json matrix_json(const E &eng, const MatrixOf<E> &A) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < A.cols(); ++j) row.push_back(element_json(eng, A(i, j)));
    rows.push_back(row);
  }
  return rows;
}

template <class E>
ordered_json presentation_json(const Presentation<E> &P) {
  return {{"ring", P.engine.tag()},
          {"generators", P.generators},
          {"relations", matrix_json(P.engine, P.relations)}};
}

template <class E>
ordered_json invariants_json(const E &eng, const ModuleInvariants<E> &inv) {
  ordered_json j;
  j["module"] = describe(eng, inv);
  if constexpr (E::is_domain) {
    j["free_rank"] = inv.free_rank;
    ordered_json t = ordered_json::array();
    for (const auto &d : inv.torsion) t.push_back(element_json(eng, d));
    j["torsion"] = t;
  } else {
    ordered_json loc = ordered_json::array();
    for (const auto &part : inv.local)
      loc.push_back({{"prime", part.prime.get_str()}, {"exponent", part.exponent}, {"summands", part.summands}});
    j["local"] = loc;
  }
  return j;
}

/// A fingerprint together with the operation that produced it.
template <class E>
ordered_json fingerprint(const std::string &op, const E &eng, const ModuleInvariants<E> &inv) {
  ordered_json j = invariants_json(eng, inv);
  j["op"] = op;
  return j;
}

ordered_json elemset_json(const finlab::FiniteModule &M, const finlab::ElemSet &S);
ordered_json ring_subset_json(const finlab::FiniteRing &R, const std::vector<finlab::Index> &S);

} // namespace fpmod::report
