#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cartanlab/extension.hpp"

namespace cartanlab::cli {

struct NamedElement {
  std::string name;
  PartialBijection map;

  bool operator==(const NamedElement&) const = default;
};

/// One explicit cocycle value: phases over dom(st) in increasing atom order.
struct CocycleEntry {
  std::string s;
  std::string t;
  std::vector<int> phase;

  bool operator==(const CocycleEntry&) const = default;
};

struct ExtensionDocument {
  int atoms = 1;
  int k = 1;
  std::vector<NamedElement> elements;
  /// Absent means the trivial cocycle.
  std::optional<std::vector<CocycleEntry>> cocycle;
  nlohmann::ordered_json metadata;

  bool operator==(const ExtensionDocument&) const = default;
};

/// Parses and structurally validates a document. Syntax errors carry
/// "line L, column C"; structural errors carry the JSON pointer of the
/// offending value. Throws FormatError.
ExtensionDocument parse_document(std::string_view text);

/// Canonical form: elements in canonical order, map keys ascending, cocycle
/// entries ordered by (s, t) in canonical element order, two-space indent.
std::string emit_document(const ExtensionDocument& doc);

struct BuiltExtension {
  Extension ext;
  /// Display name of each element of the monoid, by canonical index.
  std::vector<std::string> names;
  bool added_zero = false;
  bool added_unit = false;
};

/// Builds S (closure checked, 0 and 1 added if missing) and the cocycle
/// table. `k_override` replaces the document's k, which is only allowed when
/// the document has no explicit cocycle. Throws FormatError / ClosureError.
BuiltExtension build_extension(const ExtensionDocument& doc, std::optional<int> k_override = std::nullopt);

/// Document for an extension; elements named by their image strings.
ExtensionDocument document_from(const Extension& ext, bool explicit_cocycle);

/// Rook monoid I_n. Throws SizeGuardError when n > guard.
ExtensionDocument generate_rook(int n, int guard = 5);
/// Block monoid of a partition written like "0,1|2".
ExtensionDocument generate_eqrel(const std::string& partition);
/// Disjoint-union monoid; k is the lcm of both, phases rescaled.
ExtensionDocument generate_product(const ExtensionDocument& a, const ExtensionDocument& b);

}  // namespace cartanlab::cli
