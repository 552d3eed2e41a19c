#include "kts/serialize.hpp"

#include "json.hpp"
#include "kts/errors.hpp"

namespace kts {

using Json = nlohmann::ordered_json;

namespace {

Json trace_json(const TraceNode& t) {
  Json j;
  j["step"] = t.step;
  j["detail"] = t.detail;
  j["group"] = t.group;
  j["relative"] = t.relative;
  j["catalog_ids"] = t.catalog_ids;
  j["digest"] = t.digest;
  Json children = Json::array();
  for (const auto& c : t.children) children.push_back(trace_json(c));
  j["children"] = std::move(children);
  return j;
}

TraceNode trace_value(const Json& j) {
  if (!j.is_object()) throw MalformedInput("trace node is not an object");
  TraceNode t;
  t.step = j.at("step").get<std::string>();
  t.detail = j.value("detail", "");
  t.group = j.value("group", "");
  t.relative = j.value("relative", "");
  t.catalog_ids = j.value("catalog_ids", std::vector<std::string>{});
  t.digest = j.value("digest", "");
  if (j.contains("children"))
    for (const auto& c : j.at("children")) t.children.push_back(trace_value(c));
  return t;
}

Json order_class_value(const OrderClass& c) {
  Json j;
  j["order"] = c.v;
  j["case"] = to_string(c.kind);
  j["n"] = c.n;
  if (c.kind == OrderCase::FortyEightPlus3) {
    j["e"] = c.e;
    j["m"] = c.m;
  }
  j["covered"] = c.covered;
  j["route"] = c.route;
  j["explanation"] = c.explanation;
  return j;
}

Json encoded(const Group& g, const std::optional<Element>& x) { return x ? Json(g.encode(*x)) : Json(nullptr); }

Json family_value(const FamilyWitness& w) {
  const Group& g = w.group;
  Json j;
  j["group"] = g.name();
  j["kind"] = to_string(w.kind);
  Json blocks = Json::array();
  for (const auto& b : w.blocks) blocks.push_back({g.encode(b[0]), g.encode(b[1]), g.encode(b[2])});
  j["blocks"] = std::move(blocks);
  if (w.spread_x) {
    j["spread_x"] = g.encode(*w.spread_x);
  } else {
    Json rel = Json::array();
    for (const auto& x : w.relative) rel.push_back(g.encode(x));
    j["relative_generators"] = std::move(rel);
  }
  j["j"] = encoded(g, w.j);
  j["a"] = encoded(g, w.a);
  j["b"] = encoded(g, w.b);
  if (w.j_alpha || w.j_beta) {
    j["j_alpha"] = encoded(g, w.j_alpha);
    j["j_beta"] = encoded(g, w.j_beta);
  }
  if (!w.translates.empty()) {
    Json t = Json::array();
    for (const auto& x : w.translates) t.push_back(g.encode(x));
    j["translates"] = std::move(t);
  }
  if (w.lambda != 1) j["lambda"] = w.lambda;
  if (w.multipliers) {
    Json m;
    m["atom"] = w.multipliers->atom;
    m["generators"] = w.multipliers->generators;
    m["order"] = w.multipliers->order;
    m["strong"] = w.multipliers->strong;
    j["multipliers"] = std::move(m);
  }
  return j;
}

Json matrix_value(const DifferenceMatrix& m) {
  Json j;
  j["group"] = m.group.name();
  Json rows = Json::array();
  for (const auto& row : m.rows) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(m.group.encode(x));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["j"] = encoded(m.group, m.j);
  return j;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("JSON syntax: ") + e.what());
  }
}

}  // namespace

std::string system_to_json(const KirkmanSystem& s, const AutomorphismWitness* automorphisms) {
  Json j;
  j["order"] = s.order;
  j["group"] = s.group.name();
  j["points"] = s.points;
  Json blocks = Json::array();
  for (const auto& b : s.blocks) blocks.push_back({b[0], b[1], b[2]});
  j["blocks"] = std::move(blocks);
  j["resolution"] = s.resolution;
  if (s.trace) j["trace"] = trace_json(*s.trace);
  if (automorphisms) {
    Json a;
    a["bound"] = automorphisms->bound;
    a["multiplier_order"] = automorphisms->multiplier_order;
    a["labels"] = automorphisms->labels;
    a["generators"] = automorphisms->generators;
    j["automorphisms"] = std::move(a);
  }
  return j.dump() + "\n";
}

KirkmanSystem system_from_json(const std::string& text, AutomorphismWitness* automorphisms) {
  const Json j = parse(text);
  KirkmanSystem s;
  try {
    if (!j.is_object()) throw MalformedInput("top level is not an object");
    s.order = j.at("order").get<int64_t>();
    s.points = j.at("points").get<std::vector<std::string>>();
    // The point list bounds the work of building the group's rings.
    if (static_cast<int64_t>(s.points.size()) != s.order) throw MalformedInput("order does not match the number of points");
    s.group = Group::parse(j.at("group").get<std::string>());
    for (const auto& b : j.at("blocks")) {
      const auto t = b.get<std::vector<int32_t>>();
      if (t.size() != 3) throw MalformedInput("block of size " + std::to_string(t.size()));
      s.blocks.push_back({t[0], t[1], t[2]});
    }
    s.resolution = j.at("resolution").get<std::vector<std::vector<int32_t>>>();
    if (j.contains("trace")) s.trace = trace_value(j.at("trace"));
    if (automorphisms && j.contains("automorphisms")) {
      const Json& a = j.at("automorphisms");
      automorphisms->bound = a.at("bound").get<int64_t>();
      automorphisms->multiplier_order = a.value("multiplier_order", int64_t{1});
      automorphisms->generators = a.at("generators").get<std::vector<std::vector<int32_t>>>();
      automorphisms->labels = a.value("labels", std::vector<std::string>{});
    }
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("JSON shape: ") + e.what());
  } catch (const std::logic_error& e) {
    throw MalformedInput(e.what());
  }
  if (s.order != s.group.order() + 3 || static_cast<int64_t>(s.points.size()) != s.order)
    throw MalformedInput("order does not match the group and the number of points");
  for (const auto& b : s.blocks)
    for (int32_t p : b)
      if (p < 0 || p >= s.order) throw MalformedInput("block names point " + std::to_string(p));
  for (const auto& c : s.resolution)
    for (int32_t b : c)
      if (b < 0 || static_cast<size_t>(b) >= s.blocks.size()) throw MalformedInput("class names block " + std::to_string(b));
  for (const auto& p : s.points) {
    bool label = false;
    for (const char* l : kInfinityLabels) label = label || p == l;
    if (label) continue;
    try {
      (void)s.group.decode(p);
    } catch (const std::exception& e) {
      throw MalformedInput("point '" + p + "': " + e.what());
    }
  }
  return s;
}

std::string trace_to_json(const TraceNode& t) { return trace_json(t).dump() + "\n"; }

TraceNode trace_from_json(const std::string& text) {
  try {
    return trace_value(parse(text));
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("trace shape: ") + e.what());
  }
}

std::string reports_to_json(const std::vector<Report>& reports) {
  Json out = Json::array();
  for (const auto& r : reports) {
    Json j;
    j["check"] = r.name;
    j["ok"] = r.ok;
    Json counts = Json::object();
    for (const auto& [k, v] : r.counts) counts[k] = v;
    j["counts"] = std::move(counts);
    j["violation_count"] = r.violation_count;
    j["violations"] = r.violations;
    out.push_back(std::move(j));
  }
  return out.dump() + "\n";
}

std::string order_class_to_json(const OrderClass& c) { return order_class_value(c).dump() + "\n"; }

std::string order_classes_to_json(const std::vector<OrderClass>& cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back(order_class_value(c));
  return out.dump() + "\n";
}

std::string family_to_json(const FamilyWitness& w) { return family_value(w).dump() + "\n"; }

std::string catalog_entry_to_json(const CatalogEntry& e) {
  Json j;
  j["id"] = e.id;
  j["description"] = e.description;
  j["verified"] = e.verified;
  if (!e.diagnosis.empty()) j["diagnosis"] = e.diagnosis;
  if (!e.repairs.empty()) j["repairs"] = e.repairs;
  if (e.family) j["family"] = family_value(*e.family);
  if (e.matrix) j["matrix"] = matrix_value(*e.matrix);
  return j.dump() + "\n";
}

}  // namespace kts
