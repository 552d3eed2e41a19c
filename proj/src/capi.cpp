#include "kts/kts.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <new>
#include <optional>

#include "json.hpp"
#include "kts/catalog.hpp"
#include "kts/errors.hpp"
#include "kts/pipeline.hpp"
#include "kts/selftest.hpp"
#include "kts/serialize.hpp"
#include "kts/verify.hpp"

struct kts_system {
  kts::KirkmanSystem system;
  std::optional<kts::AutomorphismWitness> automorphisms;
};

namespace {

thread_local std::string g_error;

kts_status fail(kts_status status, const char* what) {
  g_error = what;
  return status;
}

template <class F>
kts_status guarded(F&& f) {
  try {
    g_error.clear();
    return f();
  } catch (const kts::NotCovered& e) {
    return fail(KTS_NOT_COVERED, e.what());
  } catch (const kts::MalformedInput& e) {
    return fail(KTS_MALFORMED, e.what());
  } catch (const kts::UnknownId& e) {
    return fail(KTS_UNKNOWN_ID, e.what());
  } catch (const kts::PreconditionError& e) {
    return fail(KTS_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(KTS_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(KTS_INTERNAL, e.what());
  } catch (...) {
    return fail(KTS_INTERNAL, "unknown exception");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

kts_status require(bool cond, const char* what) { return cond ? KTS_OK : fail(KTS_INVALID, what); }

// Right translations by a generating set of G, read off the point labels.
kts::AutomorphismWitness translations_only(const kts::KirkmanSystem& s) {
  const kts::Group& g = s.group;
  std::map<std::string, int32_t> index;
  for (size_t p = 0; p < s.points.size(); ++p) index[s.points[p]] = static_cast<int32_t>(p);
  kts::AutomorphismWitness w;
  w.bound = g.order();
  for (const auto& t : kts::generating_set(g)) {
    std::vector<int32_t> perm(s.points.size());
    for (size_t p = 0; p < s.points.size(); ++p) {
      const std::string& label = s.points[p];
      if (label.rfind("inf", 0) == 0) {
        perm[p] = static_cast<int32_t>(p);
        continue;
      }
      const auto it = index.find(g.encode(g.add(g.decode(label), t)));
      if (it == index.end()) throw kts::MalformedInput("translate of point '" + label + "' is not a point");
      perm[p] = it->second;
    }
    w.generators.push_back(std::move(perm));
    w.labels.push_back("translation by " + g.encode(t));
  }
  return w;
}

}  // namespace

extern "C" {

const char* kts_last_error(void) { return g_error.c_str(); }

const char* kts_status_name(kts_status status) {
  switch (status) {
    case KTS_OK: return "ok";
    case KTS_INVALID: return "invalid argument";
    case KTS_VERIFY_FAILED: return "verification failed";
    case KTS_MALFORMED: return "malformed input";
    case KTS_NOT_COVERED: return "not covered";
    case KTS_INTERNAL: return "internal error";
    case KTS_UNKNOWN_ID: return "unknown id";
  }
  return "unknown status";
}

void kts_string_free(char* s) { std::free(s); }

kts_status kts_classify(int64_t order, char** json_out) {
  if (auto st = require(json_out != nullptr, "null output pointer")) return st;
  return guarded([&] {
    *json_out = copy_string(kts::order_class_to_json(kts::classify_order(order)));
    return KTS_OK;
  });
}

kts_status kts_coverage(int64_t max_order, int include_all, char** json_out) {
  if (auto st = require(json_out != nullptr, "null output pointer")) return st;
  if (auto st = require(max_order >= 9 && max_order <= 100000000, "max order must be in 9..10^8")) return st;
  return guarded([&] {
    std::vector<kts::OrderClass> rows;
    for (int64_t v = 9; v <= max_order; v += 6) {
      auto c = kts::classify_order(v);
      if (include_all || c.kind != kts::OrderCase::NotPyramidal) rows.push_back(std::move(c));
    }
    *json_out = copy_string(kts::order_classes_to_json(rows));
    return KTS_OK;
  });
}

kts_status kts_construct(int64_t order, kts_system** out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  *out = nullptr;
  return guarded([&] {
    auto c = kts::construct_for_order(order);
    auto h = std::make_unique<kts_system>();
    h->system = kts::build_kts(c.family);
    h->system.trace = std::move(c.trace);
    h->automorphisms = kts::automorphism_lower_bound(h->system, c.family);
    *out = h.release();
    return KTS_OK;
  });
}

kts_status kts_system_from_json(const char* text, kts_system** out) {
  if (auto st = require(text != nullptr && out != nullptr, "null argument")) return st;
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<kts_system>();
    kts::AutomorphismWitness aut;
    h->system = kts::system_from_json(text, &aut);
    if (!aut.generators.empty()) h->automorphisms = std::move(aut);
    *out = h.release();
    return KTS_OK;
  });
}

void kts_system_free(kts_system* s) { delete s; }

kts_status kts_system_order(const kts_system* s, int64_t* order_out) {
  if (auto st = require(s != nullptr && order_out != nullptr, "null argument")) return st;
  *order_out = s->system.order;
  return KTS_OK;
}

kts_status kts_system_to_json(const kts_system* s, int with_trace, int with_automorphisms, char** json_out) {
  if (auto st = require(s != nullptr && json_out != nullptr, "null argument")) return st;
  return guarded([&] {
    const kts::AutomorphismWitness* aut = with_automorphisms && s->automorphisms ? &*s->automorphisms : nullptr;
    if (with_trace || !s->system.trace) {
      *json_out = copy_string(kts::system_to_json(s->system, aut));
    } else {
      kts::KirkmanSystem bare = s->system;
      bare.trace.reset();
      *json_out = copy_string(kts::system_to_json(bare, aut));
    }
    return KTS_OK;
  });
}

kts_status kts_verify(const kts_system* s, const char* level, char** report_out) {
  if (auto st = require(s != nullptr && level != nullptr && report_out != nullptr, "null argument")) return st;
  *report_out = nullptr;
  return guarded([&] {
    const auto lv = kts::verify_level_from_string(level);
    auto reports = kts::verify_system(s->system, lv);
    if (lv == kts::VerifyLevel::Full && s->automorphisms)
      reports.push_back(kts::verify_automorphisms(s->system, s->automorphisms->generators));
    *report_out = copy_string(kts::reports_to_json(reports));
    if (kts::all_ok(reports)) return KTS_OK;
    for (const auto& r : reports)
      if (!r.ok) return fail(KTS_VERIFY_FAILED, r.summary().c_str());
    return KTS_VERIFY_FAILED;
  });
}

kts_status kts_automorphisms(const kts_system* s, int64_t* bound_out, int64_t* group_order_out) {
  if (auto st = require(s != nullptr && bound_out != nullptr && group_order_out != nullptr, "null argument")) return st;
  return guarded([&] {
    const auto w = s->automorphisms ? *s->automorphisms : translations_only(s->system);
    const auto rep = kts::verify_automorphisms(s->system, w.generators);
    if (!rep.ok) return fail(KTS_VERIFY_FAILED, rep.summary().c_str());
    *bound_out = w.bound;
    *group_order_out = rep.get("group_order");
    return KTS_OK;
  });
}

kts_status kts_catalog_list(char** json_out) {
  if (auto st = require(json_out != nullptr, "null output pointer")) return st;
  return guarded([&] {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& id : kts::catalog_ids()) {
      const auto& e = kts::catalog_entry(id);
      out.push_back({{"id", e.id}, {"description", e.description}, {"verified", e.verified}});
    }
    *json_out = copy_string(out.dump() + "\n");
    return KTS_OK;
  });
}

kts_status kts_catalog_show(const char* id, char** json_out) {
  if (auto st = require(id != nullptr && json_out != nullptr, "null argument")) return st;
  return guarded([&] {
    *json_out = copy_string(kts::catalog_entry_to_json(kts::catalog_entry(id)));
    return KTS_OK;
  });
}

kts_status kts_selftest(const int* ids, size_t count, uint64_t seed, char** text_out) {
  if (auto st = require(text_out != nullptr && (count == 0 || ids != nullptr), "null argument")) return st;
  return guarded([&] {
    const std::vector<int> which(ids, ids + count);
    const auto results = kts::run_selftest(which, seed);
    std::string text;
    bool ok = true;
    for (const auto& r : results) {
      text += r.line() + "\n";
      ok = ok && r.ok;
    }
    *text_out = copy_string(text);
    return ok ? KTS_OK : fail(KTS_VERIFY_FAILED, "a self-check failed");
  });
}

}  // extern "C"
