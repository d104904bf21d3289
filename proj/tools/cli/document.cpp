#include "cli/document.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "cartanlab/errors.hpp"
#include "cartanlab/generators.hpp"

namespace cartanlab::cli {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail_at(const std::string& pointer, const std::string& what) {
  throw FormatError((pointer.empty() ? std::string("document root") : pointer) + ": " + what);
}

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t stop = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

int require_int(const json& value, const std::string& pointer, long long lo, long long hi) {
  if (!value.is_number_integer()) fail_at(pointer, "expected an integer");
  const auto v = value.get<long long>();
  if (v < lo || v > hi) fail_at(pointer, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

int parse_atom_key(const std::string& key, int atoms, const std::string& pointer) {
  const bool digits = !key.empty() && std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (!digits || (key.size() > 1 && key[0] == '0') || key.size() > 3)
    fail_at(pointer, "map key \"" + key + "\" is not an atom index");
  const int atom = std::stoi(key);
  if (atom >= atoms) fail_at(pointer, "atom " + key + " outside 0.." + std::to_string(atoms - 1));
  return atom;
}

std::string escape_pointer(const std::string& token) {
  std::string out;
  for (char c : token) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

int lcm(int a, int b) { return a / std::gcd(a, b) * b; }

}  // namespace

ExtensionDocument parse_document(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    const auto cut = what.find(": ");
    if (cut != std::string::npos) what = what.substr(cut + 2);
    throw FormatError(location(text, e.byte) + ": " + what);
  }
  if (!root.is_object()) fail_at("", "document must be a JSON object");
  for (const auto& [key, value] : root.items())
    if (key != "atoms" && key != "k" && key != "elements" && key != "cocycle" && key != "metadata")
      fail_at("/" + escape_pointer(key), "unknown key");

  ExtensionDocument doc;
  if (!root.contains("atoms")) fail_at("/atoms", "missing required key");
  doc.atoms = require_int(root["atoms"], "/atoms", 1, kMaxAtoms);
  doc.k = root.contains("k") ? require_int(root["k"], "/k", 1, 1 << 20) : 1;
  if (root.contains("metadata")) doc.metadata = root["metadata"];

  if (!root.contains("elements")) fail_at("/elements", "missing required key");
  const json& elements = root["elements"];
  if (!elements.is_array()) fail_at("/elements", "expected an array");
  std::map<std::string, std::size_t> by_name;
  std::map<PartialBijection, std::string> by_map;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string at = "/elements/" + std::to_string(i);
    const json& e = elements[i];
    if (!e.is_object()) fail_at(at, "expected an object");
    for (const auto& [key, value] : e.items())
      if (key != "name" && key != "map") fail_at(at + "/" + escape_pointer(key), "unknown key");
    if (!e.contains("name") || !e["name"].is_string()) fail_at(at + "/name", "expected a string name");
    const auto name = e["name"].get<std::string>();
    if (name.empty()) fail_at(at + "/name", "empty name");
    if (by_name.contains(name)) fail_at(at + "/name", "duplicate element name \"" + name + "\"");
    if (!e.contains("map") || !e["map"].is_object()) fail_at(at + "/map", "expected an object mapping atoms to atoms");
    std::vector<int> image(static_cast<std::size_t>(doc.atoms), PartialBijection::kUndefined);
    std::vector<bool> hit(static_cast<std::size_t>(doc.atoms), false);
    for (const auto& [key, value] : e["map"].items()) {
      const std::string vat = at + "/map/" + escape_pointer(key);
      const int from = parse_atom_key(key, doc.atoms, vat);
      const int to = require_int(value, vat, 0, doc.atoms - 1);
      if (hit[static_cast<std::size_t>(to)]) fail_at(vat, "map is not injective: atom " + std::to_string(to) + " hit twice");
      hit[static_cast<std::size_t>(to)] = true;
      image[static_cast<std::size_t>(from)] = to;
    }
    PartialBijection map(doc.atoms, std::move(image));
    if (auto it = by_map.find(map); it != by_map.end())
      fail_at(at + "/map", "same map as element \"" + it->second + "\"");
    by_map.emplace(map, name);
    by_name.emplace(name, doc.elements.size());
    doc.elements.push_back({name, std::move(map)});
  }

  if (root.contains("cocycle")) {
    const json& cocycle = root["cocycle"];
    if (!cocycle.is_array()) fail_at("/cocycle", "expected an array");
    std::vector<CocycleEntry> entries;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t i = 0; i < cocycle.size(); ++i) {
      const std::string at = "/cocycle/" + std::to_string(i);
      const json& c = cocycle[i];
      if (!c.is_object()) fail_at(at, "expected an object");
      for (const auto& [key, value] : c.items())
        if (key != "s" && key != "t" && key != "phase") fail_at(at + "/" + escape_pointer(key), "unknown key");
      CocycleEntry entry;
      for (const char* field : {"s", "t"}) {
        const std::string fat = at + "/" + field;
        if (!c.contains(field) || !c[field].is_string()) fail_at(fat, "expected an element name");
        const auto name = c[field].get<std::string>();
        if (!by_name.contains(name)) fail_at(fat, "unknown element \"" + name + "\"");
        (field[0] == 's' ? entry.s : entry.t) = name;
      }
      if (!seen.emplace(entry.s, entry.t).second)
        fail_at(at, "duplicate cocycle entry for (" + entry.s + ", " + entry.t + ")");
      if (!c.contains("phase") || !c["phase"].is_array()) fail_at(at + "/phase", "expected an array of exponents");
      const auto& s = doc.elements[by_name[entry.s]].map;
      const auto& t = doc.elements[by_name[entry.t]].map;
      const std::size_t expected = compose(s, t).rank();
      if (c["phase"].size() != expected)
        fail_at(at + "/phase", "expected " + std::to_string(expected) + " exponents, one per atom of dom(st)");
      for (std::size_t p = 0; p < expected; ++p)
        entry.phase.push_back(require_int(c["phase"][p], at + "/phase/" + std::to_string(p), 0, doc.k - 1));
      entries.push_back(std::move(entry));
    }
    doc.cocycle = std::move(entries);
  }
  return doc;
}

std::string emit_document(const ExtensionDocument& doc) {
  std::vector<std::size_t> order(doc.elements.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return doc.elements[a].map < doc.elements[b].map; });
  std::map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < order.size(); ++i) rank[doc.elements[order[i]].name] = i;

  json root;
  root["atoms"] = doc.atoms;
  root["k"] = doc.k;
  json elements = json::array();
  for (std::size_t i : order) {
    const auto& e = doc.elements[i];
    json map = json::object();
    for (int a : e.map.domain().atoms()) map[std::to_string(a)] = e.map(a);
    elements.push_back(json{{"name", e.name}, {"map", map}});
  }
  root["elements"] = elements;
  if (doc.cocycle) {
    auto entries = *doc.cocycle;
    std::sort(entries.begin(), entries.end(), [&](const CocycleEntry& a, const CocycleEntry& b) {
      return std::pair(rank.at(a.s), rank.at(a.t)) < std::pair(rank.at(b.s), rank.at(b.t));
    });
    json cocycle = json::array();
    for (const auto& c : entries) cocycle.push_back(json{{"s", c.s}, {"t", c.t}, {"phase", c.phase}});
    root["cocycle"] = cocycle;
  }
  if (!doc.metadata.is_null()) root["metadata"] = doc.metadata;
  return root.dump(2) + "\n";
}

BuiltExtension build_extension(const ExtensionDocument& doc, std::optional<int> k_override) {
  int k = doc.k;
  if (k_override && *k_override != doc.k) {
    if (doc.cocycle) throw FormatError("/k: --k cannot override a document with an explicit cocycle");
    if (*k_override < 1) throw FormatError("--k must be at least 1");
    k = *k_override;
  }
  std::vector<PartialBijection> maps;
  for (const auto& e : doc.elements) maps.push_back(e.map);
  auto monoid = FiniteInverseMonoid::from_elements(doc.atoms, maps);

  std::vector<std::string> names(monoid.size());
  std::set<std::string> used;
  for (const auto& e : doc.elements) {
    names[monoid.require_index(e.map)] = e.name;
    used.insert(e.name);
  }
  for (std::size_t i = 0; i < monoid.size(); ++i) {
    if (!names[i].empty()) continue;
    std::string name = monoid[i].to_string();
    while (used.contains(name)) name += "'";
    used.insert(name);
    names[i] = name;
  }

  CocycleTable table = CocycleTable::trivial(monoid, k);
  if (doc.cocycle) {
    table = CocycleTable::empty(monoid, k);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
    for (const auto& c : *doc.cocycle) {
      const std::size_t s = index.at(c.s);
      const std::size_t t = index.at(c.t);
      std::vector<int> phase(static_cast<std::size_t>(doc.atoms), 0);
      const auto dom = monoid[monoid.product(s, t)].domain().atoms();
      for (std::size_t p = 0; p < dom.size(); ++p) phase[static_cast<std::size_t>(dom[p])] = c.phase[p];
      table.set(s, t, std::move(phase));
    }
    for (std::size_t s = 0; s < monoid.size(); ++s)
      for (std::size_t t = 0; t < monoid.size(); ++t)
        if (table.required(s, t) && !table.has(s, t))
          throw FormatError("/cocycle: missing entry for (" + names[s] + ", " + names[t] + ")");
  }
  const bool added_zero = monoid.added_zero();
  const bool added_unit = monoid.added_unit();
  return {Extension(std::move(monoid), std::move(table)), std::move(names), added_zero, added_unit};
}

ExtensionDocument document_from(const Extension& ext, bool explicit_cocycle) {
  const auto& base = ext.base();
  ExtensionDocument doc;
  doc.atoms = base.atom_count();
  doc.k = ext.k();
  for (const auto& s : base.elements()) doc.elements.push_back({s.to_string(), s});
  if (explicit_cocycle) {
    std::vector<CocycleEntry> entries;
    for (std::size_t s = 0; s < base.size(); ++s)
      for (std::size_t t = 0; t < base.size(); ++t) {
        if (!ext.cocycle().required(s, t)) continue;
        CocycleEntry e{base[s].to_string(), base[t].to_string(), {}};
        const auto& phase = ext.cocycle().at(s, t);
        for (int y : base[base.product(s, t)].domain().atoms()) e.phase.push_back(phase[static_cast<std::size_t>(y)]);
        entries.push_back(std::move(e));
      }
    doc.cocycle = std::move(entries);
  }
  return doc;
}

ExtensionDocument generate_rook(int n, int guard) {
  if (n > guard) throw SizeGuardError("rook size " + std::to_string(n) + " exceeds the guard of " + std::to_string(guard));
  if (n < 1) throw DomainError("rook size must be at least 1");
  ExtensionDocument doc;
  doc.atoms = n;
  for (const auto& s : rook_elements(n)) doc.elements.push_back({s.to_string(), s});
  doc.metadata = json{{"generator", "rook"}, {"n", n}};
  return doc;
}

ExtensionDocument generate_eqrel(const std::string& partition) {
  std::vector<std::vector<int>> blocks;
  std::stringstream blocks_in(partition);
  std::string block;
  while (std::getline(blocks_in, block, '|')) {
    std::vector<int> atoms;
    std::stringstream atoms_in(block);
    std::string atom;
    while (std::getline(atoms_in, atom, ',')) {
      try {
        std::size_t used = 0;
        atoms.push_back(std::stoi(atom, &used));
        if (used != atom.size()) throw std::invalid_argument(atom);
      } catch (const std::exception&) {
        throw FormatError("partition \"" + partition + "\": \"" + atom + "\" is not an atom index");
      }
    }
    blocks.push_back(std::move(atoms));
  }
  const auto monoid = equivalence_monoid(blocks);
  auto doc = document_from(Extension(monoid, CocycleTable::trivial(monoid, 1)), false);
  doc.metadata = json{{"generator", "eqrel"}, {"partition", partition}};
  return doc;
}

ExtensionDocument generate_product(const ExtensionDocument& a, const ExtensionDocument& b) {
  const auto ba = build_extension(a);
  const auto bb = build_extension(b);
  const auto& sa = ba.ext.base();
  const auto& sb = bb.ext.base();
  const auto product = disjoint_union(sa, sb);
  const int na = sa.atom_count();
  const int k = lcm(a.k, b.k);
  const int scale_a = k / a.k;
  const int scale_b = k / b.k;

  auto split = [&](const PartialBijection& u) {
    std::vector<int> left(static_cast<std::size_t>(na), PartialBijection::kUndefined);
    std::vector<int> right(static_cast<std::size_t>(sb.atom_count()), PartialBijection::kUndefined);
    for (int y : u.domain().atoms()) {
      if (y < na) left[static_cast<std::size_t>(y)] = u(y);
      else right[static_cast<std::size_t>(y - na)] = u(y) - na;
    }
    return std::pair(sa.require_index(PartialBijection(na, left)),
                     sb.require_index(PartialBijection(sb.atom_count(), right)));
  };

  CocycleTable table = CocycleTable::trivial(product, k);
  const bool explicit_cocycle = a.cocycle.has_value() || b.cocycle.has_value();
  if (explicit_cocycle) {
    std::vector<std::pair<std::size_t, std::size_t>> parts;
    for (const auto& u : product.elements()) parts.push_back(split(u));
    for (std::size_t u = 0; u < product.size(); ++u)
      for (std::size_t v = 0; v < product.size(); ++v) {
        const auto& ca = ba.ext.cocycle().at(parts[u].first, parts[v].first);
        const auto& cb = bb.ext.cocycle().at(parts[u].second, parts[v].second);
        std::vector<int> phase;
        for (int p : ca) phase.push_back(p * scale_a);
        for (int p : cb) phase.push_back(p * scale_b);
        table.set(u, v, std::move(phase));
      }
  }
  auto doc = document_from(Extension(product, std::move(table)), explicit_cocycle);
  doc.metadata = json{{"generator", "product"}};
  return doc;
}

}  // namespace cartanlab::cli
