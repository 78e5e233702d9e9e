#pragma once

// Seeded property suites. Reports contain no timings, so two runs with the
// same options serialize to identical bytes.

#include "fpmod/report.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fpmod::suites {

struct Options {
  std::uint64_t seed = 7;
  std::size_t count = 0; // 0 selects the suite default
};

struct Result {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  std::size_t failures = 0;
  report::ordered_json report;
  double seconds = 0;
  double max_case_seconds = 0;
};

/// corollary38, roundtrip, theorem32, theorem36, oracle-equivalence,
/// semiperfect, example47, remark37, rickart-baer
const std::vector<std::string> &names();

/// Throws std::invalid_argument for an unknown name.
Result run(const std::string &name, const Options &opts = {});

/// Uniform integers from a 64-bit Mersenne Twister by plain reduction, so the
/// stream is identical on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  long range(long lo, long hi) { return lo + static_cast<long>(gen_() % static_cast<std::uint64_t>(hi - lo + 1)); }

private:
  std::mt19937_64 gen_;
};

Presentation<IntegerEngine> random_integer_presentation(Rng &rng, std::size_t max_gens, std::size_t max_rels, long bound);
Presentation<PolyEngine> random_poly_presentation(Rng &rng, const PolyEngine &eng, std::size_t max_gens,
                                                  std::size_t max_rels, int max_degree);

} // namespace fpmod::suites
