// Acceptance gate: one line per criterion, exit status 0 only if all pass.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cartanlab/boolean_monoid.hpp"
#include "cartanlab/errors.hpp"
#include "cartanlab/generators.hpp"
#include "cartanlab/kernel_rep.hpp"
#include "cartanlab/spectral_bimodule.hpp"
#include "cartanlab/vn_oracle.hpp"
#include "cli/commands.hpp"
#include "cli/document.hpp"
#include "support/oracles.hpp"

using namespace cartanlab;
using oracle::parse;
namespace fs = std::filesystem;

namespace {

constexpr double kTol = 1e-9;
constexpr double kExact = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

FiniteInverseMonoid i2_minus_swap() {
  auto el = rook_monoid(2).elements();
  el.erase(std::find(el.begin(), el.end(), parse("[10]")));
  return FiniteInverseMonoid::from_elements(2, el);
}

FiniteInverseMonoid block_monoid() { return equivalence_monoid({{0, 1}, {2}}); }

CocycleTable perturbed_cocycle(const FiniteInverseMonoid& m, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::add_coboundary(m, CocycleTable::trivial(m, k), oracle::random_cochain(m, k, rng));
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

Outcome axioms() {
  Outcome o;
  for (const auto& [name, m] : {std::pair{"I_2", rook_monoid(2)}, std::pair{"I_3", rook_monoid(3)},
                                std::pair{"block", block_monoid()}})
    o.require(check_axioms(m).cartan, std::string(name) + " not Cartan");
  const auto broken = check_axioms(i2_minus_swap());
  auto witness = broken.complete_d.witness;
  std::sort(witness.begin(), witness.end());
  o.require(!broken.cartan && !broken.complete_d.pass, "I_2 minus swap accepted");
  o.require(witness == std::vector<PartialBijection>{parse("[1-]"), parse("[-0]")}, "wrong missing-join witness");
  o.detail = o.pass ? "I_2, I_3, block pass; I_2 minus swap fails on {[1-], [-0]}" : o.detail;
  return o;
}

Outcome leech_suite() {
  Outcome o;
  const auto i3 = rook_monoid(3);
  const auto one = PartialBijection::identity(3);
  const Extension ext(i3, CocycleTable::trivial(i3, 2));
  const auto j = order_preserving_section(ext);
  std::size_t checks = 0;
  for (std::size_t s = 0; s < i3.size(); ++s) {
    std::vector<std::size_t> lower;
    for (std::size_t t = 0; t < i3.size(); ++t) {
      const auto g = oracle::glb(i3, i3[s], i3[t]);
      o.require(g && meet(i3[s], i3[t]) == *g, "meet differs from glb");
      o.require(meet(i3[s], i3[t]) == compose(i3[s], meet(compose(dagger(i3[s]), i3[t]), one)), "Leech identity");
      if (oracle::below(i3[t], i3[s])) lower.push_back(t);
      ++checks;
    }
    for (std::size_t a : lower)
      for (std::size_t b : lower) {
        const auto ta = compose(dagger(i3[s]), i3[a]);
        const auto tb = compose(dagger(i3[s]), i3[b]);
        o.require(ta.is_idempotent() && natural_leq(ta, compose(dagger(i3[s]), i3[s])), "tau_s leaves the interval");
        o.require(natural_leq(i3[a], i3[b]) == natural_leq(ta, tb), "tau_s not an order isomorphism");
        o.require((a == b) == (ta == tb), "tau_s not injective");
        ++checks;
      }
  }
  for (std::size_t r = 0; r < i3.size(); ++r)
    for (std::size_t s = 0; s < i3.size(); ++s) {
      const std::size_t rs = i3.require_index(*oracle::glb(i3, i3[r], i3[s]));
      for (std::size_t t = 0; t < i3.size(); ++t) {
        o.require((kernel(ext, j, t, r) & kernel(ext, j, t, s)) == kernel(ext, j, t, rs), "k_r k_s != k_(r meet s)");
        ++checks;
      }
    }
  if (o.pass) o.detail = std::to_string(checks) + " checks on I_3, 0 violations";
  return o;
}

Outcome chop_suite() {
  Outcome o;
  const auto i2 = rook_monoid(2);
  const auto i3 = rook_monoid(3);
  std::vector<PartialBijection> nonzero;
  for (const auto& s : i2.elements())
    if (!s.is_zero()) nonzero.push_back(s);
  std::size_t lists = 0;
  std::vector<std::size_t> idx;
  const std::function<void(std::size_t)> visit = [&](std::size_t depth) {
    if (depth > 0) {
      std::vector<PartialBijection> in;
      for (std::size_t i : idx) in.push_back(nonzero[i]);
      const auto v = oracle::chop_violation(i2, in, chop(in));
      o.require(v.empty(), "I_2 list: " + v);
      ++lists;
    }
    if (depth == 3) return;
    for (std::size_t i = 0; i < nonzero.size(); ++i) {
      idx.push_back(i);
      visit(depth + 1);
      idx.pop_back();
    }
  };
  visit(0);
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> pick(1, i3.size() - 1);
  std::uniform_int_distribution<std::size_t> length(1, 4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<PartialBijection> in;
    for (std::size_t n = length(rng); n > 0; --n) in.push_back(i3[pick(rng)]);
    const auto v = oracle::chop_violation(i3, in, chop(in));
    o.require(v.empty(), "I_3 list: " + v);
  }
  if (o.pass) o.detail = std::to_string(lists) + " I_2 lists + 500 random I_3 lists";
  return o;
}

Outcome sections() {
  Outcome o;
  std::size_t sections_checked = 0;
  std::size_t mutations = 0;
  std::size_t detected = 0;
  for (int n : {2, 3}) {
    const auto m = rook_monoid(n);
    for (int k : {1, 2, 4}) {
      std::vector<CocycleTable> cocycles{CocycleTable::trivial(m, k)};
      for (std::uint64_t seed = 1; seed <= 3 && k > 1; ++seed) cocycles.push_back(perturbed_cocycle(m, k, seed));
      for (std::size_t c = 0; c < cocycles.size(); ++c) {
        const Extension ext(m, cocycles[c]);
        const auto j = order_preserving_section(ext);
        const auto report = validate_section(ext, j);
        const std::string where = "I_" + std::to_string(n) + " k=" + std::to_string(k) + " cocycle " + std::to_string(c);
        o.require(report.order_preserving && report.idempotent_compatible && report.meet_preserving,
                  where + ": " + report.witness_a + report.witness_b + report.witness_c);
        o.require(j[m.unit_index()] == ext.unit(), where + ": j(1) != 1");
        for (std::size_t s = 0; s < m.size(); ++s) {
          o.require(j[m.dagger_of(s)] == ext.dagger(j[s]), where + ": j(s†) != j(s)† at " + m[s].to_string());
          if (c == 0) o.require(j[s] == PhasedElement::lift(m[s]), where + ": trivial cocycle section not zero-phased");
          for (std::size_t e : m.idempotents())
            for (std::size_t f : m.idempotents()) {
              const std::size_t esf = m.product(m.product(e, s), f);
              o.require(j[esf] == oracle::twisted_product(ext, oracle::twisted_product(ext, j[e], j[s]), j[f]),
                        where + ": j(esf) != j(e)j(s)j(f)");
            }
        }
        ++sections_checked;
        if (k == 1) continue;
        for (std::size_t s = 0; s < m.size(); ++s)
          for (int y : m[s].domain().atoms()) {
            auto phase = j[s].phase;
            phase[static_cast<std::size_t>(y)] = (phase[static_cast<std::size_t>(y)] + 1) % k;
            Section mutated = j;
            mutated.set(s, PhasedElement(m[s], phase));
            ++mutations;
            const auto broken = validate_section(ext, mutated);
            if (!broken.idempotent_compatible) ++detected;
          }
      }
    }
  }
  o.require(detected == mutations, std::to_string(mutations - detected) + " mutations not detected by (b)");
  if (o.pass)
    o.detail = std::to_string(sections_checked) + " sections; " + std::to_string(detected) + "/" +
               std::to_string(mutations) + " phase mutations break (b)";
  return o;
}

Outcome kernel_positivity() {
  Outcome o;
  double least = 0.0;
  const auto check = [&](const Extension& ext, const Section& j, const std::vector<std::size_t>& list) {
    try {
      kernel_psd_check(ext, j, list, kTol);
    } catch (const InvariantViolation& e) {
      o.require(false, e.what());
    }
    for (int atom = 0; atom < ext.atom_count(); ++atom) {
      const double ev = oracle::min_eigenvalue(kernel_atom_matrix(ext, j, list, atom));
      least = std::min(least, ev);
      o.require(ev >= -kTol, "negative eigenvalue");
    }
  };
  const auto i2 = rook_monoid(2);
  const Extension e2(i2, perturbed_cocycle(i2, 2, 5));
  const auto j2 = order_preserving_section(e2);
  for (std::uint32_t mask = 1; mask < (1U << i2.size()); ++mask) {
    std::vector<std::size_t> list;
    for (std::size_t i = 0; i < i2.size(); ++i)
      if (mask & (1U << i)) list.push_back(i);
    check(e2, j2, list);
  }
  const auto i3 = rook_monoid(3);
  const Extension e3(i3, perturbed_cocycle(i3, 4, 6));
  const auto j3 = order_preserving_section(e3);
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> pick(0, i3.size() - 1);
  std::uniform_int_distribution<std::size_t> length(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::size_t> list;
    for (std::size_t n = length(rng); n > 0; --n) list.push_back(pick(rng));
    check(e3, j3, list);
  }
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "127 I_2 subsets + 1000 I_3 subsets, min eigenvalue %.3g", least);
    o.detail = buf;
  }
  return o;
}

Outcome representation() {
  Outcome o;
  const auto i2 = rook_monoid(2);
  const auto model = CartanModel::build(Extension(i2, perturbed_cocycle(i2, 2, 8)));
  o.require(model.g.size() == 17, "|G| != 17");
  const auto rep = representation_check(model);
  o.require(rep.pairs == 289, "pairs != 289");
  o.require(rep.product_error <= kTol && rep.dagger_error <= kTol && rep.isometry_error <= kTol, "representation errors");
  o.require(rep.injective, "not injective");
  double oracle_error = 0.0;
  for (std::size_t a = 0; a < model.g.size(); ++a)
    for (std::size_t b = 0; b < model.g.size(); ++b) {
      const auto vw = oracle::twisted_product(model.ext, model.g[a], model.g[b]);
      const auto at = std::lower_bound(model.g.begin(), model.g.end(), vw) - model.g.begin();
      oracle_error = std::max(oracle_error, max_deviation(model.lambda_g[a] * model.lambda_g[b],
                                                          model.lambda_g[static_cast<std::size_t>(at)]));
    }
  o.require(oracle_error <= kExact, "product differs from the raw cocycle product");
  const auto gram = abstract_gram_check(model.ext, model.j, model.basis, model.g, kTol);
  o.require(gram.rank == 4, "gram rank != 4");
  o.require(gram.intertwining_error <= kTol && gram.isometry_error <= kTol, "U intertwining");
  o.require(gram.reproducing && gram.meet_rep, "reproducing identities");
  if (o.pass) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "289 products, max error %.1e; gram rank 4, intertwining error %.1e",
                  std::max(rep.product_error, oracle_error), gram.intertwining_error);
    o.detail = buf;
  }
  return o;
}

struct Config {
  std::string name;
  FiniteInverseMonoid monoid;
  CocycleTable cocycle;
};

std::vector<Config> cartan_configs() {
  const auto i2 = rook_monoid(2);
  const auto i3 = rook_monoid(3);
  const auto block = block_monoid();
  return {{"I_2 k=1", i2, CocycleTable::trivial(i2, 1)},
          {"I_2 k=2", i2, CocycleTable::trivial(i2, 2)},
          {"I_2 k=4 perturbed", i2, perturbed_cocycle(i2, 4, 3)},
          {"I_3 k=1", i3, CocycleTable::trivial(i3, 1)},
          {"I_3 k=2 perturbed", i3, perturbed_cocycle(i3, 2, 4)},
          {"block k=2", block, CocycleTable::trivial(block, 2)},
          {"block k=4 perturbed", block, perturbed_cocycle(block, 4, 5)}};
}

Outcome cartan() {
  Outcome o;
  for (const auto& c : cartan_configs()) {
    const auto model = CartanModel::build(Extension(c.monoid, c.cocycle), kTol);
    const auto report = cartan_report(model);
    for (const auto& check : report.checks()) o.require(check.pass, c.name + ": " + check.name + " " + check.detail);
    o.require(model.m_q.dimension() == oracle::relation_size(c.monoid), c.name + ": dim M != |R|");
    o.require(model.d_q.dimension() == static_cast<std::size_t>(c.monoid.atom_count()), c.name + ": dim D != |X|");
    const long commutant = oracle::commutant_dimension(model.m_q.basis(), model.d_q.basis());
    o.require(commutant == static_cast<long>(model.d_q.dimension()), c.name + ": relative commutant larger than D");
    const auto ex = expectation_properties(model);
    o.require(ex.delta_error <= kTol, c.name + ": E(lambda(v)) != lambda(Delta(v))");
    o.require(ex.faithful_eigenvalue > kTol, c.name + ": E not faithful");
  }
  if (o.pass) o.detail = std::to_string(cartan_configs().size()) + " configurations";
  return o;
}

Outcome recovery() {
  Outcome o;
  for (const auto& c : cartan_configs()) {
    const auto model = CartanModel::build(Extension(c.monoid, c.cocycle), kTol);
    const auto recovered = recover_extension(model.m_q, model.d_q);
    o.require(recovered.monoid.size() == c.monoid.size(), c.name + ": |S'| != |S|");
    o.require(isomorphism_by_atoms(recovered.monoid, c.monoid).has_value(), c.name + ": S' not isomorphic to S");
  }
  if (o.pass) o.detail = "S' isomorphic to S in " + std::to_string(cartan_configs().size()) + " configurations";
  return o;
}

Outcome spectral() {
  Outcome o;
  const auto m2 = CartanModel::build(Extension(rook_monoid(2), perturbed_cocycle(rook_monoid(2), 2, 9)));
  const auto& i2 = m2.ext.base();
  const auto sets2 = enumerate_spectral_sets(i2);
  std::size_t brute = 0;
  for (std::uint32_t mask = 0; mask < (1U << i2.size()); ++mask) {
    ElementSet a(i2.size());
    for (std::size_t i = 0; i < i2.size(); ++i) a[i] = (mask >> i) & 1U;
    brute += oracle::spectral(i2, a) ? 1 : 0;
  }
  o.require(sets2.size() == 16 && brute == 16, "I_2 spectral set count");
  for (const auto& a : sets2) o.require(theta(m2, psi(m2, a)) == a, "Theta Psi != id on I_2");
  const auto bimodules = enumerate_bimodules(m2);
  o.require(bimodules.size() == 16, "I_2 bimodule count");
  for (const auto& b : bimodules) o.require(psi(m2, theta(m2, b)).same_as(b), "Psi Theta != id on I_2");

  const auto m3 = CartanModel::build(Extension(rook_monoid(3), CocycleTable::trivial(rook_monoid(3), 1)));
  const auto& i3 = m3.ext.base();
  const auto sets3 = enumerate_spectral_sets(i3);
  o.require(sets3.size() == 512 && sets3.size() == (std::size_t{1} << oracle::relation_size(i3)), "I_3 count != 2^|R|");
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> pick(0, sets3.size() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto& a = sets3[pick(rng)];
    const auto& b = sets3[pick(rng)];
    o.require(oracle::spectral(i3, a), "enumerated set not spectral");
    o.require(theta(m3, psi(m3, a)) == a, "Theta Psi != id on I_3");
    o.require(psi(m3, join_span(i3, a, b)).same_as(psi(m3, a).sum(psi(m3, b))), "join span != sum");
    o.require(psi(m3, set_intersection(a, b)).same_as(psi(m3, a).intersect(psi(m3, b))), "meet != intersection");
  }
  if (o.pass) o.detail = "I_2: 16 sets, 16 bimodules; I_3: 512 = 2^9 sets, 50 sampled";
  return o;
}

Outcome aoi() {
  Outcome o;
  const auto m2 = CartanModel::build(Extension(rook_monoid(2), CocycleTable::trivial(rook_monoid(2), 2)));
  const auto r2 = intermediate_algebra_check(m2);
  o.require(r2.submonoids == 2 && r2.algebras == 2 && r2.bijective && r2.algebras_valid, "I_2 correspondence");
  const auto alg2 = intermediate_algebras(m2);
  const auto is_one_of = [](const OperatorSpace& b, const CartanModel& m) { return b.same_as(m.d_q) || b.same_as(m.m_q); };
  for (const auto& b : alg2) o.require(is_one_of(b, m2), "I_2 algebra other than D_q, M_q");

  const auto mb = CartanModel::build(Extension(block_monoid(), CocycleTable::trivial(block_monoid(), 2)));
  const auto rb = intermediate_algebra_check(mb);
  o.require(rb.bijective && rb.algebras_valid, "block correspondence");
  o.require(mb.m_q.dimension() == 5, "block algebra dimension != 2^2 + 1^2");
  const auto algb = intermediate_algebras(mb);
  o.require(algb.size() == rb.submonoids, "block algebra count");
  for (const auto& b : algb) o.require(is_one_of(b, mb), "block algebra other than D_q, M_q");
  if (o.pass)
    o.detail = "I_2: 2 full submonoids <-> {D_q, M_q}; block: " + std::to_string(rb.submonoids) +
               " <-> block-diagonal algebras";
  return o;
}

Outcome subdiagonal() {
  Outcome o;
  const auto i2 = rook_monoid(2);
  const auto model = CartanModel::build(Extension(i2, perturbed_cocycle(i2, 2, 10)));
  const auto sd = msd(i2);
  const auto tr = mtr(i2);
  o.require(sd.size() == 3, "|msd(I_2)| != 3");
  o.require(tr.size() == 2, "|mtr(I_2)| != 2");
  for (const auto& a : tr) o.require(std::find(sd.begin(), sd.end(), a) != sd.end(), "mtr not inside msd");
  double worst = 0.0;
  for (const auto& a : sd) {
    const auto r = verify_subdiagonal(model, a);
    worst = std::max(worst, r.multiplicative_error);
    o.require(r.multiplicative_error <= kTol, "Phi_N not multiplicative on " + describe(i2, a));
    o.require(r.spans, "A + A* != M_q for " + describe(i2, a));
    o.require(r.pass, "subdiagonal check failed for " + describe(i2, a));
  }
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "msd 3, mtr 2, max Phi_N error %.1e", worst);
    o.detail = buf;
  }
  return o;
}

Outcome cohomology() {
  Outcome o;
  const auto i2 = rook_monoid(2);
  const auto all = enumerate_cocycles_raw(i2, 2);
  for (const auto& c : all) {
    o.require(oracle::cocycle_identity(i2, c), "enumerated table is not a cocycle");
    const auto b = is_trivial(i2, c);
    o.require(b.has_value(), "cocycle not cohomologous to trivial");
    if (b) o.require(oracle::add_coboundary(i2, CocycleTable::trivial(i2, 2), *b) == c, "witness does not reproduce c");
  }
  std::mt19937_64 rng(41);
  std::size_t round_trips = 0;
  for (int n : {2, 3})
    for (int k : {2, 3, 4})
      for (int trial = 0; trial < 3; ++trial) {
        const auto m = rook_monoid(n);
        const auto c1 = perturbed_cocycle(m, k, rng());
        const auto c2 = oracle::add_coboundary(m, c1, oracle::random_cochain(m, k, rng));
        const auto b = cohomologous(m, c1, c2);
        o.require(b && oracle::add_coboundary(m, c1, *b) == c2, "round trip failed");
        ++round_trips;
      }
  if (o.pass)
    o.detail = std::to_string(all.size()) + " k=2 cocycles on I_2 trivial with witness; " + std::to_string(round_trips) +
               " round trips";
  return o;
}

Outcome cli_contract() {
  Outcome o;
  const fs::path fixtures = CARTANLAB_FIXTURES_DIR;
  std::vector<std::string> texts;
  for (const auto& name : {"rook2.json", "i2_minus_swap.json", "bad_cocycle.json"}) texts.push_back(slurp(fixtures / name));
  for (int n = 1; n <= 3; ++n) texts.push_back(cli::emit_document(cli::generate_rook(n)));
  texts.push_back(cli::emit_document(cli::generate_eqrel("0,1|2")));
  texts.push_back(cli::emit_document(cli::document_from(cli::build_extension(cli::parse_document(texts[0]), 4).ext, true)));
  for (const auto& text : texts) {
    const auto emitted = cli::emit_document(cli::parse_document(text));
    o.require(cli::emit_document(cli::parse_document(emitted)) == emitted, "emit is not byte stable");
    o.require(cli::parse_document(emitted) == cli::parse_document(text), "parse(emit(x)) != x");
  }
  o.require(cli::emit_document(cli::parse_document(texts[0])) == texts[0], "canonical fixture changed");
  std::size_t malformed = 0;
  std::ostringstream sink;
  for (const auto& entry : fs::directory_iterator(fixtures / "malformed")) {
    const int code = cli::run({"validate", entry.path().string()}, sink, sink);
    o.require(code == cli::kExitInputError, entry.path().filename().string() + " exited " + std::to_string(code));
    ++malformed;
  }
  o.require(malformed >= 10, "fewer than 10 malformed fixtures");
  o.require(cli::run({"validate", (fixtures / "rook2.json").string()}, sink, sink) == cli::kExitPass, "valid input");
  o.require(cli::run({"validate", (fixtures / "i2_minus_swap.json").string()}, sink, sink) == cli::kExitCheckFailed,
            "failed check exit code");
  if (o.pass)
    o.detail = std::to_string(texts.size()) + " documents byte stable; " + std::to_string(malformed) +
               " malformed fixtures exit 2";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"axioms", axioms},
      {"leech-meet", leech_suite},
      {"chop", chop_suite},
      {"sections", sections},
      {"kernel-positivity", kernel_positivity},
      {"representation", representation},
      {"cartan-pair", cartan},
      {"recovery", recovery},
      {"spectral", spectral},
      {"intermediate-algebras", aoi},
      {"msd-mtr", subdiagonal},
      {"cohomology", cohomology},
      {"cli", cli_contract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %-22s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
