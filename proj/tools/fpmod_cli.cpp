#include "cli_io.hpp"

#include "fpmod/finlab.hpp"
#include "fpmod/report.hpp"
#include "fpmod/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace fpmod;
using cli::ParseError;
using report::ordered_json;

namespace {

struct Job {
  std::string op;
  std::string ring;
  std::string input;
  std::string relations, other_relations;
  std::optional<std::size_t> generators, other_generators;
  std::string element;
  std::string caps;
  std::size_t max_steps = 8;
  std::size_t max_size = 16;
  bool raw = false;
  bool machine = false;
  std::string subop;
  std::string suite;
  suites::Options suite_opts;
};

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ------------------------------------------------------------------ output

bool is_fingerprint(const ordered_json &v) { return v.is_object() && v.contains("module") && v["module"].is_string(); }

bool is_presentation(const ordered_json &v) {
  return v.is_object() && v.contains("generators") && v.contains("relations") && v.contains("ring");
}

std::string inline_value(const ordered_json &v) {
  if (v.is_string()) return v.get<std::string>();
  if (is_fingerprint(v)) {
    std::string s = v["module"].get<std::string>();
    if (v.contains("op")) s += "   [" + v["op"].get<std::string>() + "]";
    return s;
  }
  if (is_presentation(v)) {
    const auto g = v["generators"].get<std::size_t>();
    return std::to_string(g) + (g == 1 ? " generator" : " generators") + ", relations " + v["relations"].dump();
  }
  return v.dump();
}

bool is_leaf(const ordered_json &v) {
  return !v.is_structured() || is_fingerprint(v) || is_presentation(v) ||
         (v.is_array() && std::none_of(v.begin(), v.end(), [](const auto &x) { return x.is_structured(); }));
}

void render(std::ostream &os, const ordered_json &j, int indent) {
  auto line = [&](const std::string &key, const std::string &value) {
    os << std::string(static_cast<std::size_t>(indent), ' ') << std::left
       << std::setw(std::max(1, 28 - indent)) << key << value << "\n";
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = j.is_array() ? "[" + std::to_string(std::distance(j.begin(), it)) + "]" : it.key();
    if (is_leaf(*it)) {
      line(key, inline_value(*it));
    } else {
      line(key, "");
      render(os, *it, indent + 2);
    }
  }
}

void emit(const Job &job, const ordered_json &rep) {
  if (job.machine) {
    std::cout << rep.dump(2) << "\n";
  } else {
    render(std::cout, rep, 0);
  }
}

// ----------------------------------------------------------- module inputs

cli::RawDocument load_modules(const Job &job) {
  cli::RawDocument doc;
  if (!job.input.empty()) {
    doc = cli::parse_document(slurp(job.input));
    if (!job.ring.empty() && job.ring != doc.ring)
      throw DomainError("engine mismatch: --ring " + job.ring + " but the input declares " + doc.ring);
  } else {
    if (job.ring.empty()) throw ParseError("--ring is required without --input");
    doc.ring = job.ring;
  }
  if (!job.relations.empty() || job.generators) {
    if (!job.input.empty()) throw ParseError("give either --input or --relations, not both");
    doc.modules.push_back(cli::raw_from_matrix(job.relations.empty() ? "[]" : job.relations, job.generators));
  }
  if (!job.other_relations.empty() || job.other_generators) {
    if (doc.modules.empty()) throw ParseError("--other-relations needs a first module");
    doc.modules.push_back(cli::raw_from_matrix(job.other_relations.empty() ? "[]" : job.other_relations,
                                               job.other_generators));
  }
  return doc;
}

template <class E>
ordered_json normalization_json(const Presentation<E> &P) {
  const char *procedure = E::is_domain ? "Hermite column form of the relations, unit entries cancelled"
                                       : "canonical diagonal presentation rebuilt from the local invariants";
  return {{"procedure", procedure}, {"presentation", report::presentation_json(normalize(P))}};
}

ordered_json dimension_json(const DimensionValue &d) {
  return d.is_infinite() ? ordered_json("infinite") : ordered_json(d.value());
}

template <class E>
ordered_json decomposition_json(const E &eng, const Decomposition<E> &d) {
  ordered_json j;
  j["proj"] = report::fingerprint("decompose.proj", eng, d.proj);
  j["stab"] = report::fingerprint("decompose.stab", eng, d.stab);
  j["splitting"] = {{"kind", d.splitting_kind == SplittingKind::SectionOfSigma ? "section of sigma: M** -> M"
                                                                              : "inclusion of the projective part"},
                    {"source", report::presentation_json(d.splitting.source)},
                    {"generator_matrix", report::matrix_json(eng, d.splitting.generator_matrix)}};
  j["formula path applicable"] = d.formula_path_applicable;
  if (d.double_dual) j["M**"] = report::fingerprint("invariants(M**)", eng, *d.double_dual);
  if (d.ext_transpose) j["Ext1(Tr M, R)"] = report::fingerprint("ext1(Tr M, R)", eng, *d.ext_transpose);
  return j;
}

template <class E>
ordered_json run_module_op(const Job &job, const E &eng, const std::vector<Presentation<E>> &mods) {
  auto need = [&](std::size_t k) {
    if (mods.size() < k)
      throw ParseError(job.op + " needs " + std::to_string(k) + " module" + (k > 1 ? "s" : "") + ", got " +
                       std::to_string(mods.size()));
  };
  need(job.op == "remark37" ? 0 : 1);
  ordered_json rep;
  rep["op"] = job.op;
  rep["ring"] = eng.tag();
  ordered_json input = ordered_json::object(), norm = ordered_json::object();
  const char *names[] = {"M", "N"};
  for (std::size_t i = 0; i < mods.size() && i < 2; ++i) {
    input[names[i]] = report::presentation_json(mods[i]);
    norm[names[i]] = normalization_json(mods[i]);
  }
  rep["input"] = input;
  rep["normalization"] = norm;

  ordered_json res;
  const std::string &op = job.op;
  auto fp = [&](const std::string &what, const ModuleInvariants<E> &inv) { return report::fingerprint(what, eng, inv); };
  if (op == "invariants") {
    res["invariants"] = fp("invariants(M)", invariants(mods[0]));
  } else if (op == "dual") {
    auto D = dual(mods[0]);
    res["dual"] = report::presentation_json(D);
    res["invariants"] = fp("invariants(dual(M))", invariants(D));
  } else if (op == "transpose") {
    auto T = ab_transpose(mods[0], job.raw ? TransposeMode::Raw : TransposeMode::Normalized);
    res["mode"] = job.raw ? "raw" : "normalized";
    res["transpose"] = report::presentation_json(T);
    res["invariants"] = fp("invariants(Tr M)", invariants(T));
  } else if (op == "ext1" || op == "tor1" || op == "hom" || op == "tensor") {
    need(2);
    auto f = op == "ext1" ? ext1<E> : op == "tor1" ? tor1<E> : op == "hom" ? hom<E> : tensor<E>;
    res["value"] = fp(op + "(M,N)", f(mods[0], mods[1]));
  } else if (op == "decompose") {
    res = decomposition_json(eng, decompose(mods[0]));
  } else if (op == "peel") {
    auto tr = peel(mods[0], job.max_steps);
    ordered_json steps = ordered_json::array();
    for (std::size_t k = 0; k < tr.steps.size(); ++k) {
      const std::string at = "peel step " + std::to_string(k + 1);
      steps.push_back({{"projective", fp(at + " projective", tr.steps[k].projective)},
                       {"remainder", fp(at + " remainder", tr.steps[k].remainder)}});
    }
    res["steps"] = steps;
    res["terminated"] = tr.terminated;
  } else if (op == "stable" || op == "projective" || op == "torsionless") {
    bool v = op == "stable" ? is_stable(mods[0]) : op == "projective" ? is_projective(mods[0]) : is_torsionless(mods[0]);
    res[op] = v;
    res["invariants"] = fp("invariants(M)", invariants(mods[0]));
  } else if (op == "udim" || op == "hdim") {
    res[op] = dimension_json(op == "udim" ? udim(mods[0]) : hdim(mods[0]));
    res["invariants"] = fp("invariants(M)", invariants(mods[0]));
  } else if (op == "equiv") {
    need(2);
    res["projectively equivalent"] = projectively_equivalent(mods[0], mods[1]);
    res["isomorphic"] = is_isomorphic(mods[0], mods[1]);
    res["M"] = fp("invariants(M)", invariants(mods[0]));
    res["N"] = fp("invariants(N)", invariants(mods[1]));
  } else if (op == "verify-mu-epsilon") {
    need(2);
    auto r = verify_mu_epsilon(mods[0], mods[1]);
    res["Ext1(M,N)"] = fp("ext1(M,N)", r.ext1);
    res["N (x) Tr M"] = fp("tensor(N,Tr M)", r.tensor_tr);
    res["Hom(Tr M,N)"] = fp("hom(Tr M,N)", r.hom_tr);
    res["Tor1(M,N)"] = fp("tor1(M,N)", r.tor1);
    res["pd(M) <= 1 certified"] = r.pd_le_1;
    res["mu"] = to_string(r.mu);
    res["epsilon"] = to_string(r.epsilon);
  } else if (op == "remark37") {
    if constexpr (E::is_domain) {
      const auto P = mods.empty() ? free_module(eng, 1) : mods[0];
      typename E::Elem a;
      if (job.element.empty()) {
        if constexpr (std::is_same_v<E, PolyEngine>)
          a = eng.from_coeffs({0, 1});
        else
          a = 2;
      } else {
        cli::RawPresentation one = cli::raw_from_matrix("[[" + job.element + "]]", std::nullopt);
        a = cli::to_presentation(eng, one).relations(0, 0);
      }
      auto r = remark_3_7_instance(P, a);
      rep["input"]["M"] = report::presentation_json(P);
      rep["input"]["element"] = report::element_json(eng, a);
      res["U"] = report::presentation_json(r.module);
      res["Tr U"] = report::presentation_json(r.transpose);
      res["invariants(U)"] = fp("invariants(U)", invariants(r.module));
      res["U*"] = fp("invariants(dual(U))", r.dual);
      res["pd(Tr U) <= 1"] = r.pd_transpose_le_1;
      res["U* nonzero"] = r.dual_nonzero;
    } else {
      throw DomainError("remark37 needs a domain engine (int or poly(p))");
    }
  } else {
    throw ParseError("unknown operation '" + op + "'");
  }
  rep["result"] = res;
  return rep;
}

ordered_json module_command(const Job &job) {
  auto doc = load_modules(job);
  auto eng = cli::parse_engine(doc.ring);
  return std::visit(
      [&](const auto &e) {
        using E = std::decay_t<decltype(e)>;
        std::vector<Presentation<E>> mods;
        for (const auto &raw : doc.modules) mods.push_back(cli::to_presentation(e, raw));
        return run_module_op(job, e, mods);
      },
      eng);
}

// ------------------------------------------------------------------ oracle

ordered_json oracle_command(const Job &job) {
  if (job.ring.empty()) throw ParseError("oracle needs --ring");
  finlab::Caps caps = job.caps.empty() ? finlab::Caps::from_env() : finlab::Caps::parse(job.caps, finlab::Caps::from_env());
  finlab::RingPtr R;
  try {
    R = finlab::parse_ring(job.ring, caps);
  } catch (const std::logic_error &e) {
    throw ParseError(e.what());
  }
  ordered_json rep;
  rep["op"] = "oracle " + job.subop;
  rep["ring"] = {{"spec", job.ring}, {"name", R->name()}, {"size", R->size()}};
  rep["caps"] = {{"ring", caps.ring}, {"module", caps.module}, {"endomorphisms", caps.endomorphisms}, {"lattice", caps.lattice}};

  auto subset = [&](const finlab::FiniteModule &M, const finlab::ElemSet &S) { return report::elemset_json(M, S); };
  auto module = [&] {
    if (job.relations.empty() && !job.generators) return finlab::regular_module(R, caps);
    auto raw = cli::raw_from_matrix(job.relations.empty() ? "[]" : job.relations, job.generators);
    std::vector<std::vector<finlab::Index>> cols;
    const std::size_t rels = raw.rows.empty() ? 0 : raw.rows[0].size();
    for (std::size_t j = 0; j < rels; ++j) {
      std::vector<finlab::Index> c;
      for (std::size_t i = 0; i < raw.generators; ++i) {
        const auto &v = raw.rows[i][j];
        if (!v.is_number_unsigned() || v.get<std::size_t>() >= R->size())
          throw ParseError("oracle relations are ring element indices below " + std::to_string(R->size()) + ", got " +
                           v.dump());
        c.push_back(static_cast<finlab::Index>(v.get<std::size_t>()));
      }
      cols.push_back(c);
    }
    rep["input"] = {{"generators", raw.generators}, {"relations", raw.rows}};
    return finlab::cokernel_module(R, raw.generators, cols, caps);
  };

  ordered_json res;
  const std::string &s = job.subop;
  if (s == "jacobson") {
    auto J = finlab::jacobson_radical(*R);
    res["jacobson radical"] = report::ring_subset_json(*R, J.elements);
    res["size"] = J.elements.size();
    res["is two-sided ideal"] = J.is_ideal;
  } else if (s == "rickart" || s == "baer") {
    res[s] = s == "rickart" ? finlab::is_rickart(*R) : finlab::is_baer(*R);
  } else if (s == "elements") {
    ordered_json labels = ordered_json::array();
    for (std::size_t x = 0; x < R->size(); ++x) labels.push_back(R->label(static_cast<finlab::Index>(x)));
    res["elements"] = labels;
  } else if (s == "idempotents") {
    res["idempotents"] = report::ring_subset_json(*R, R->idempotents());
  } else if (s == "maximal-ideals") {
    auto reg = finlab::regular_module(R, caps);
    ordered_json list = ordered_json::array();
    for (const auto &I : finlab::maximal_right_ideals(R, caps)) list.push_back(subset(reg, I));
    res["maximal right ideals"] = list;
  } else if (s == "enumerate") {
    auto mods = finlab::enumerate_modules(R, job.max_size, caps);
    ordered_json list = ordered_json::array();
    for (const auto &M : mods) list.push_back(M.size());
    res["max size"] = job.max_size;
    res["modules"] = mods.size();
    res["sizes"] = list;
  } else {
    auto M = module();
    res["module size"] = M.size();
    if (s == "lattice") {
      auto L = finlab::enumerate_submodules(M, caps);
      ordered_json list = ordered_json::array();
      for (const auto &K : L.submodules) list.push_back(subset(M, K));
      res["submodules"] = list;
    } else if (s == "socle" || s == "radical") {
      auto sr = finlab::socle_and_radical(M, finlab::enumerate_submodules(M, caps));
      res[s] = subset(M, s == "socle" ? sr.socle : sr.radical);
    } else if (s == "udim") {
      auto w = finlab::udim_bruteforce(M, finlab::enumerate_submodules(M, caps));
      res["udim"] = w.independent_family;
      res["essential sum of uniforms"] = w.uniform_sum;
      ordered_json fam = ordered_json::array();
      for (const auto &K : w.family) fam.push_back(subset(M, K));
      res["witness"] = fam;
    } else if (s == "hdim") {
      auto w = finlab::hdim_bruteforce(M, finlab::enumerate_submodules(M, caps));
      res["hdim"] = w.value;
      ordered_json fam = ordered_json::array();
      for (const auto &K : w.family) fam.push_back(subset(M, K));
      res["witness"] = fam;
    } else if (s == "projective") {
      res["projective"] = finlab::is_projective_bruteforce(M, caps);
    } else if (s == "stable") {
      res["stable"] = finlab::is_stable_bruteforce(M, caps);
    } else if (s == "decompose") {
      auto d = finlab::decompose_bruteforce(M, caps);
      ordered_json pairs = ordered_json::array();
      for (const auto &p : d.pairs) pairs.push_back({{"projective", subset(M, p.projective)}, {"stable", subset(M, p.stable)}});
      res["decompositions"] = pairs;
      res["pairwise isomorphic"] = d.pairwise_isomorphic;
    } else {
      throw ParseError("unknown oracle operation '" + s + "'");
    }
  }
  rep["result"] = res;
  return rep;
}

// ------------------------------------------------------------------- main

void add_module_options(CLI::App *sub, Job &job, bool two) {
  sub->add_option("--ring", job.ring, "int | mod(n) | poly(p)");
  sub->add_option("--input", job.input, "presentation file (text or JSON)");
  sub->add_option("--relations", job.relations, "relation matrix of M as JSON rows");
  sub->add_option("--generators", job.generators, "generator count of M (default: number of rows)");
  if (two) {
    sub->add_option("--other-relations", job.other_relations, "relation matrix of N as JSON rows");
    sub->add_option("--other-generators", job.other_generators, "generator count of N");
  }
}

void print_error(const char *kind, const std::string &message, bool machine) {
  ordered_json err{{"error", {{"kind", kind}, {"message", message}}}};
  std::cout << err.dump(machine ? 2 : -1) << "\n";
  if (!machine) std::cerr << "fpmod: " << message << "\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Finitely presented modules: invariants, duals, transposes, decompositions, finite-ring oracle."};
  app.require_subcommand(1);
  app.fallthrough();
  Job job;
  app.add_flag("--machine", job.machine, "emit the structured JSON report");

  struct Spec {
    const char *name, *help;
    bool two;
  };
  const Spec specs[] = {
      {"invariants", "isomorphism-class fingerprint of M", false},
      {"dual", "M* = Hom(M, R)", false},
      {"transpose", "Auslander-Bridger transpose Tr M", false},
      {"ext1", "Ext^1(M, N)", true},
      {"tor1", "Tor_1(M, N)", true},
      {"hom", "Hom(M, N)", true},
      {"tensor", "M (x) N", true},
      {"decompose", "M = proj + stab with an explicit splitting", false},
      {"peel", "iterated removal of projective summands", false},
      {"stable", "M has no nonzero projective summand", false},
      {"projective", "M is projective", false},
      {"torsionless", "M -> M** is injective", false},
      {"udim", "uniform dimension", false},
      {"hdim", "hollow dimension", false},
      {"equiv", "projective equivalence and isomorphism of M and N", true},
      {"verify-mu-epsilon", "Ext^1(M,N) vs N (x) Tr M and Hom(Tr M,N) vs Tor_1(M,N)", true},
      {"remark37", "U = P + R/aR with pd(Tr U) <= 1 and U* != 0", false},
  };
  for (const auto &s : specs) {
    auto *sub = app.add_subcommand(s.name, s.help);
    add_module_options(sub, job, s.two);
    if (std::string(s.name) == "transpose") sub->add_flag("--raw", job.raw, "transpose the presentation as given");
    if (std::string(s.name) == "peel") sub->add_option("--max-steps", job.max_steps, "step limit")->capture_default_str();
    if (std::string(s.name) == "remark37") sub->add_option("--element", job.element, "a as a JSON entry (default 2 or x)");
    sub->callback([&job, name = std::string(s.name)] { job.op = name; });
  }

  auto *oracle = app.add_subcommand("oracle", "brute-force finite-ring laboratory");
  oracle->add_option("subop", job.subop,
                     "elements | jacobson | rickart | baer | idempotents | maximal-ideals | enumerate | lattice | socle | radical | "
                     "udim | hdim | projective | stable | decompose")
      ->required();
  oracle->add_option("--ring", job.ring, "finite ring spec, e.g. z4, z2^3, idealization(z2^3)");
  oracle->add_option("--relations", job.relations, "relations as ring element indices (default: the regular module)");
  oracle->add_option("--generators", job.generators, "generator count");
  oracle->add_option("--caps", job.caps, "ring=..,module=..,endomorphisms=..,lattice=.. (over FPMOD_CAPS)");
  oracle->add_option("--max-size", job.max_size, "module size bound for enumerate")->capture_default_str();
  oracle->callback([&job] { job.op = "oracle"; });

  auto *suite = app.add_subcommand("suite", "run a seeded acceptance suite");
  suite->add_option("name", job.suite, "suite name")->required()->check(CLI::IsMember(suites::names()));
  suite->add_option("--seed", job.suite_opts.seed, "random seed")->capture_default_str();
  suite->add_option("--count", job.suite_opts.count, "random cases per family (0: suite default)");
  suite->callback([&job] { job.op = "suite"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::string msg = e.what();
    if (app.get_subcommands().empty() && argc > 1 && argv[1][0] != '-')
      msg = "unknown subcommand '" + std::string(argv[1]) + "'";
    print_error("parse", msg, job.machine);
    return 2;
  }

  try {
    if (job.op == "suite") {
      auto r = suites::run(job.suite, job.suite_opts);
      if (job.machine) {
        std::cout << r.report.dump(2) << "\n";
      } else {
        std::cout << r.name << ": " << (r.passed ? "PASS" : "FAIL") << ", " << r.cases - r.failures << "/" << r.cases
                  << " cases ok (seed " << job.suite_opts.seed << ")\n";
      }
      return r.passed ? 0 : 1;
    }
    emit(job, job.op == "oracle" ? oracle_command(job) : module_command(job));
    return 0;
  } catch (const ParseError &e) {
    print_error("parse", e.what(), job.machine);
    return 2;
  } catch (const finlab::CapExceeded &e) {
    print_error("cap", e.what(), job.machine);
    return 1;
  } catch (const DomainError &e) {
    print_error("domain", e.what(), job.machine);
    return 1;
  }
}
