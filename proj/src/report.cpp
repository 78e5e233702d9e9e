#include "fpmod/report.hpp"

namespace fpmod::report {

ordered_json elemset_json(const finlab::FiniteModule &M, const finlab::ElemSet &S) {
  ordered_json out = ordered_json::array();
  for (auto x : S.elements()) out.push_back(M.label(x));
  return out;
}

ordered_json ring_subset_json(const finlab::FiniteRing &R, const std::vector<finlab::Index> &S) {
  ordered_json out = ordered_json::array();
  for (auto x : S) out.push_back(R.label(x));
  return out;
}

} // namespace fpmod::report
