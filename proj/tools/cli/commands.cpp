#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "cartanlab/boolean_monoid.hpp"
#include "cartanlab/errors.hpp"
#include "cartanlab/kernel_rep.hpp"
#include "cartanlab/spectral_bimodule.hpp"
#include "cartanlab/vn_oracle.hpp"
#include "cli/document.hpp"

namespace cartanlab::cli {

namespace {

struct Options {
  std::optional<int> k;
  std::optional<long long> guard;
  double tol = kDefaultTolerance;
  std::string out_path;
  std::string format = "text";
};

std::size_t guard_or(const Options& opts, std::size_t fallback) {
  if (opts.guard) return static_cast<std::size_t>(*opts.guard);
  if (const char* env = std::getenv("CARTANLAB_GUARD")) {
    const std::string text(env);
    std::size_t used = 0;
    long long value = -1;
    try {
      value = std::stoll(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || value < 1) throw FormatError("CARTANLAB_GUARD must be a positive integer, got \"" + text + "\"");
    return static_cast<std::size_t>(value);
  }
  return fallback;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path + ": cannot write file");
  out << text;
}

ExtensionDocument read_document(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_document(text);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

BuiltExtension load(const std::string& path, const Options& opts) {
  const auto doc = read_document(path);
  try {
    return build_extension(doc, opts.k);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  } catch (const ClosureError& e) {
    throw ClosureError(path + ": " + e.what());
  }
}

std::string first_violation(const CocycleReport& report, const std::vector<std::string>& names) {
  if (report.violations.empty()) return {};
  const auto& v = report.violations.front();
  if (!v.what.starts_with("cocycle identity")) return v.what + " at (" + names[v.s] + ", " + names[v.t] + ")";
  return v.what + " at (" + names[v.s] + ", " + names[v.t] + ", " + names[v.u] + ")";
}

/// Rejects inputs outside the domain of the constructions.
void require_cartan(const BuiltExtension& built) {
  const auto& base = built.ext.base();
  const auto axioms = check_axioms(base);
  if (!axioms.cartan) {
    for (const AxiomCheck* c : {&axioms.boolean_a, &axioms.boolean_b, &axioms.boolean_c, &axioms.complete_d})
      if (!c->pass) throw DomainError("monoid is not a Cartan inverse monoid: " + c->detail);
    throw DomainError(axioms.fundamental ? "monoid is not a Cartan inverse monoid"
                                         : "monoid is not fundamental");
  }
  const auto cocycle = validate_cocycle(base, built.ext.cocycle());
  if (!cocycle.pass) throw DomainError("invalid cocycle: " + first_violation(cocycle, built.names));
}

std::size_t require_name(const BuiltExtension& built, const std::string& name) {
  for (std::size_t i = 0; i < built.names.size(); ++i)
    if (built.names[i] == name) return i;
  throw DomainError("unknown element \"" + name + "\"");
}

std::string join(const std::vector<int>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out + "]";
}

void add_axiom(Report& report, const std::string& name, const AxiomCheck& check) {
  std::string detail = check.detail;
  for (const auto& w : check.witness) detail += " " + w.to_string();
  report.check(name, check.pass, detail);
}

Report validate_report(const BuiltExtension& built) {
  const auto& base = built.ext.base();
  Report report("validate");
  report.add("atoms", base.atom_count());
  report.add("k", built.ext.k());
  report.add("elements", static_cast<unsigned long long>(base.size()));
  report.add("idempotents", static_cast<unsigned long long>(base.idempotents().size()));
  report.add("added_zero", built.added_zero);
  report.add("added_unit", built.added_unit);
  report.add("extension_size", static_cast<unsigned long long>(built.ext.order()));
  const auto axioms = check_axioms(base);
  report.add("maximal_families_checked", static_cast<unsigned long long>(axioms.maximal_families_checked));
  report.add("character_count", static_cast<unsigned long long>(axioms.character_count));
  report.add("hyperstonean", axioms.hyperstonean_note);
  add_axiom(report, "boolean_a", axioms.boolean_a);
  add_axiom(report, "boolean_b", axioms.boolean_b);
  add_axiom(report, "boolean_c", axioms.boolean_c);
  add_axiom(report, "locally_complete", axioms.locally_complete);
  add_axiom(report, "complete_d", axioms.complete_d);
  report.check("fundamental", axioms.fundamental);
  report.check("cartan", axioms.cartan);
  const auto cocycle = validate_cocycle(base, built.ext.cocycle());
  report.check("cocycle_normalized", cocycle.normalized);
  report.check("cocycle_supported", cocycle.supported);
  report.check("cocycle_identity", cocycle.identity, first_violation(cocycle, built.names));
  return report;
}

Report section_report(const BuiltExtension& built, const Options& opts) {
  require_cartan(built);
  const auto& ext = built.ext;
  const auto j = order_preserving_section(ext);
  const auto result = validate_section(ext, j);
  Report report("section");
  report.add("atoms", ext.atom_count());
  report.add("k", ext.k());
  report.add("elements", static_cast<unsigned long long>(ext.base().size()));
  for (std::size_t i = 0; i < j.size(); ++i) report.add("j." + built.names[i], j[i].to_string());
  report.check("order_preserving", result.order_preserving, result.witness_a);
  report.check("idempotent_compatible", result.idempotent_compatible, result.witness_b);
  report.check("meet_preserving", result.meet_preserving, result.witness_c);
  report.check("dagger_preserving", result.dagger_preserving);
  report.check("conditions_agree", result.consistent());
  std::vector<std::size_t> all(ext.base().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  try {
    const auto psd = kernel_psd_check(ext, j, all, opts.tol);
    report.add_number("kernel.min_eigenvalue", psd.min_eigenvalue);
    report.check("kernel_positive", true);
  } catch (const InvariantViolation& e) {
    report.check("kernel_positive", false, e.what());
  }
  return report;
}

Report represent_report(const CartanModel& model) {
  Report report("represent");
  report.add("atoms", model.ext.atom_count());
  report.add("k", model.ext.k());
  report.add("extension_size", static_cast<unsigned long long>(model.g.size()));
  report.add("relation_size", static_cast<unsigned long long>(model.basis.size()));
  const auto rep = representation_check(model);
  report.add("pairs_checked", static_cast<unsigned long long>(rep.pairs));
  report.add_number("product_error", rep.product_error);
  report.add_number("dagger_error", rep.dagger_error);
  report.add_number("partial_isometry_error", rep.isometry_error);
  report.check("homomorphism", rep.product_error <= model.tol);
  report.check("dagger_compatible", rep.dagger_error <= model.tol);
  report.check("partial_isometries", rep.isometry_error <= model.tol);
  report.check("injective", rep.injective);

  const auto pv = projection_P_and_V(model.ext, model.j, model.basis, model.g);
  report.add_number("projection.compression_error", pv.compression_error);
  report.check("projection_compression", pv.compression_error <= model.tol);
  report.check("projection_isometry", pv.range_error <= model.tol && pv.isometry_error <= model.tol);
  try {
    const auto gram = abstract_gram_check(model.ext, model.j, model.basis, model.g, model.tol);
    report.add("gram.vectors", static_cast<unsigned long long>(gram.vectors));
    report.add("gram.rank", static_cast<unsigned long long>(gram.rank));
    report.add_number("gram.intertwining_error", gram.intertwining_error);
    report.check("gram", true);
  } catch (const InvariantViolation& e) {
    report.check("gram", false, e.what());
  }
  return report;
}

Report spectral_report(const CartanModel& model, std::size_t guard) {
  const auto& base = model.ext.base();
  const auto sets = enumerate_spectral_sets(base, guard);
  Report report("spectral");
  report.add("relation_size", static_cast<unsigned long long>(model.basis.size()));
  report.add("spectral_sets", static_cast<unsigned long long>(sets.size()));
  std::vector<OperatorSpace> images;
  std::size_t theta_psi_failures = 0;
  for (const auto& a : sets) {
    images.push_back(psi(model, a));
    if (theta(model, images.back()) != a) ++theta_psi_failures;
  }
  report.check("theta_psi_identity", theta_psi_failures == 0, std::to_string(theta_psi_failures) + " failures");

  const auto bimodules = enumerate_bimodules(model, guard);
  report.add("bimodules", static_cast<unsigned long long>(bimodules.size()));
  std::size_t psi_theta_failures = 0;
  for (const auto& b : bimodules)
    if (!psi(model, theta(model, b)).same_as(b)) ++psi_theta_failures;
  report.check("psi_theta_identity", psi_theta_failures == 0, std::to_string(psi_theta_failures) + " failures");
  report.check("counts_match", sets.size() == bimodules.size());

  std::size_t lattice_failures = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::size_t other = (7 * i + 3) % sets.size();
    const auto joined = psi(model, join_span(base, sets[i], sets[other]));
    const auto met = psi(model, set_intersection(sets[i], sets[other]));
    if (!joined.same_as(images[i].sum(images[other]))) ++lattice_failures;
    if (!met.same_as(images[i].intersect(images[other]))) ++lattice_failures;
  }
  report.add("lattice_pairs", static_cast<unsigned long long>(sets.size()));
  report.check("lattice", lattice_failures == 0, std::to_string(lattice_failures) + " failures");

  const auto aoi = intermediate_algebra_check(model, guard);
  report.add("full_submonoids", static_cast<unsigned long long>(aoi.submonoids));
  report.add("intermediate_algebras", static_cast<unsigned long long>(aoi.algebras));
  report.check("intermediate_bijective", aoi.bijective && aoi.algebras_valid);
  return report;
}

Report subdiagonal_report(const CartanModel& model, bool triangular, std::size_t guard) {
  const auto& base = model.ext.base();
  const auto list = triangular ? mtr(base, guard) : msd(base, guard);
  Report report(triangular ? "mtr" : "msd");
  report.add("count", static_cast<unsigned long long>(list.size()));
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string key = "member." + std::to_string(i);
    report.add(key, describe(base, list[i]));
    const auto sd = verify_subdiagonal(model, list[i], guard);
    report.add(key + ".dim_A", static_cast<unsigned long long>(sd.dim_a));
    report.add(key + ".dim_N", static_cast<unsigned long long>(sd.dim_n));
    report.add_number(key + ".multiplicative_error", sd.multiplicative_error);
    report.check(key + ".subdiagonal", sd.pass,
                 std::string(sd.algebra ? "" : "not an algebra ") + (sd.spans ? "" : "does not span ") +
                     (sd.maximal ? "" : "not maximal"));
  }
  return report;
}

Report equiv_report(const BuiltExtension& a, const BuiltExtension& b, std::size_t guard) {
  Report report("equiv");
  report.add("k", a.ext.k());
  report.add("elements", static_cast<unsigned long long>(a.ext.base().size()));
  const auto witness = extensions_equivalent(a.ext, b.ext, guard);
  report.add("equivalent", witness.has_value());
  if (witness) {
    report.add("atom_permutation", join(witness->atom_permutation));
    for (std::size_t i = 0; i < a.names.size(); ++i)
      report.add("coboundary." + a.names[i], join(witness->coboundary[i]));
  }
  report.check("equivalent", witness.has_value(), witness ? "" : "NotEquivalent");
  return report;
}

int emit(const Report& report, const Options& opts, std::ostream& out) {
  const auto machine = report_json(report).dump(2) + "\n";
  out << (opts.format == "json" ? machine : report.to_text());
  if (!opts.out_path.empty()) write_file(opts.out_path, machine);
  return report.passed() ? kExitPass : kExitCheckFailed;
}

int emit_text(const std::string& text, const Options& opts, std::ostream& out) {
  if (opts.out_path.empty()) out << text;
  else write_file(opts.out_path, text);
  return kExitPass;
}

}  // namespace

nlohmann::ordered_json report_json(const Report& report) {
  nlohmann::ordered_json out;
  out["report"] = report.title();
  nlohmann::ordered_json entries = nlohmann::ordered_json::object();
  for (const auto& e : report.entries()) entries[e.key] = e.value;
  out["entries"] = entries;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks()) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  out["checks"] = checks;
  out["result"] = report.passed() ? "pass" : "fail";
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite Cartan pairs and extensions of Cartan inverse monoids", "cartanlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opts;
  app.add_option("--k", opts.k, "Phase order k (documents without an explicit cocycle)")->check(CLI::PositiveNumber);
  app.add_option("--guard", opts.guard, "Size guard of the command")->check(CLI::PositiveNumber);
  app.add_option("--tol", opts.tol, "Numeric tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", opts.out_path, "Write the machine readable report here");
  app.add_option("--format", opts.format, "Standard output format")->check(CLI::IsMember({"text", "json"}));

  std::string doc_path;
  std::string second_path;
  std::string element;
  std::string phase;
  auto with_document = [&](const std::string& name, const std::string& about) {
    auto* sub = app.add_subcommand(name, about);
    sub->add_option("document", doc_path, "Extension document (JSON)")->required();
    return sub;
  };
  auto* validate = with_document("validate", "Check the monoid axioms and the cocycle");
  auto* section = with_document("section", "Build and verify an order preserving section");
  auto* represent = with_document("represent", "Verify the representation, or dump one matrix");
  represent->add_option("--element", element, "Dump lambda(j(element)) in the matrix format");
  represent->add_option("--phase", phase, "Comma separated phase over the domain, replacing j(element)");
  auto* oracle = with_document("oracle", "Full Cartan pair verification");
  auto* spectral = with_document("spectral", "Spectral sets against bimodules");
  auto* msd_cmd = with_document("msd", "Maximal subdiagonal spectral monoids");
  auto* mtr_cmd = with_document("mtr", "Maximal triangular spectral monoids");
  auto* equiv = app.add_subcommand("equiv", "Search for an equivalence of two extensions");
  equiv->add_option("first", doc_path, "Extension document")->required();
  equiv->add_option("second", second_path, "Extension document")->required();

  auto* gen = app.add_subcommand("gen", "Generate a document");
  gen->require_subcommand(1);
  gen->fallthrough();
  int rook_n = 0;
  std::string partition;
  auto* rook = gen->add_subcommand("rook", "All partial injections on n atoms");
  rook->add_option("n", rook_n, "Number of atoms")->required();
  auto* eqrel = gen->add_subcommand("eqrel", "Partial injections within the blocks of a partition");
  eqrel->add_option("partition", partition, "Blocks like 0,1|2")->required();
  auto* product = gen->add_subcommand("product", "Disjoint union of two documents");
  product->add_option("first", doc_path, "Extension document")->required();
  product->add_option("second", second_path, "Extension document")->required();
  rook->fallthrough();
  eqrel->fallthrough();
  product->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInputError;
  }

  try {
    if (validate->parsed()) return emit(validate_report(load(doc_path, opts)), opts, out);
    if (section->parsed()) return emit(section_report(load(doc_path, opts), opts), opts, out);
    if (equiv->parsed())
      return emit(equiv_report(load(doc_path, opts), load(second_path, opts), guard_or(opts, 40)), opts, out);
    if (gen->parsed()) {
      ExtensionDocument doc;
      if (rook->parsed()) doc = generate_rook(rook_n, static_cast<int>(std::min<std::size_t>(guard_or(opts, 5), 64)));
      else if (eqrel->parsed()) doc = generate_eqrel(partition);
      else doc = generate_product(read_document(doc_path), read_document(second_path));
      return emit_text(emit_document(doc), opts, out);
    }

    const auto built = load(doc_path, opts);
    require_cartan(built);
    const std::size_t set_guard = 25;
    const bool model_guarded = represent->parsed() || oracle->parsed();
    const auto model = CartanModel::build(built.ext, opts.tol, model_guarded ? guard_or(opts, 1000000) : 1000000);
    if (represent->parsed()) {
      if (element.empty()) {
        if (!phase.empty()) throw DomainError("--phase requires --element");
        return emit(represent_report(model), opts, out);
      }
      const std::size_t s = require_name(built, element);
      PhasedElement v = model.j[s];
      if (!phase.empty()) {
        const auto dom = v.bijection.domain().atoms();
        std::vector<int> given;
        std::stringstream in(phase);
        std::string item;
        while (std::getline(in, item, ',')) {
          try {
            given.push_back(std::stoi(item));
          } catch (const std::exception&) {
            throw FormatError("--phase: \"" + item + "\" is not an integer");
          }
        }
        if (given.size() != dom.size())
          throw DomainError("--phase needs " + std::to_string(dom.size()) + " exponents, one per atom of the domain");
        std::fill(v.phase.begin(), v.phase.end(), 0);
        for (std::size_t i = 0; i < dom.size(); ++i) v.phase[static_cast<std::size_t>(dom[i])] = given[i];
        if (!built.ext.contains(v)) throw DomainError("--phase exponents must lie in [0, k)");
      }
      return emit_text(dump_matrix(model.basis, built.ext.k(), lambda_matrix(built.ext, model.j, model.basis, v)),
                       opts, out);
    }
    if (oracle->parsed()) return emit(cartan_report(model), opts, out);
    if (spectral->parsed()) return emit(spectral_report(model, guard_or(opts, set_guard)), opts, out);
    if (msd_cmd->parsed()) return emit(subdiagonal_report(model, false, guard_or(opts, set_guard)), opts, out);
    if (mtr_cmd->parsed()) return emit(subdiagonal_report(model, true, guard_or(opts, set_guard)), opts, out);
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace cartanlab::cli
