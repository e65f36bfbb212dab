#pragma once

// JSON and CSV forms of polygons, map specs, traces and reports. Exact
// numbers travel as strings ("p/q" or "p").

#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pentalab/height_lab.hpp"
#include "pentalab/lax.hpp"

namespace pentalab {

using Json = nlohmann::ordered_json;

namespace detail {

inline Rational parse_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw ParseError("expected a rational string");
  Rational q;
  const std::string s = j.get<std::string>();
  if (q.set_str(s, 10) != 0) throw ParseError("not a rational: '" + s + "'");
  if (sgn(q.get_den()) == 0) throw ParseError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline Json vector_json(std::span<const Integer> v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

inline IVector vector_from_json(const Json& j, std::size_t len) {
  if (!j.is_array() || j.size() != len) throw ParseError("expected an array of " + std::to_string(len) + " entries");
  QVector q;
  for (const auto& x : j) q.push_back(parse_rational(x));
  return canonical_homogeneous(q);
}

inline Json offsets_json(const Offsets& o) { return Json(o); }

inline Offsets offsets_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an integer array");
  return j.get<Offsets>();
}

inline IntMatrix rows_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected an array of integer arrays");
  IntMatrix m;
  for (const auto& r : j) m.push_back(offsets_from_json(r));
  return m;
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Polygons and strips

inline Json to_json(const TwistedPolygon& p) {
  Json vs = Json::array();
  for (const auto& v : p.vertices()) vs.push_back(detail::vector_json(v.coords()));
  Json m = Json::array();
  const IMatrix& a = p.monodromy().matrix();
  for (std::size_t r = 0; r < a.rows(); ++r) m.push_back(detail::vector_json(a.row(r)));
  return Json{{"d", p.dim()}, {"n", p.size()}, {"vertices", vs}, {"monodromy", m}};
}

inline TwistedPolygon polygon_from_json(const Json& j) {
  try {
    const auto d = detail::field(j, "d").get<std::size_t>();
    const auto n = detail::field(j, "n").get<std::size_t>();
    const Json& vs = detail::field(j, "vertices");
    if (!vs.is_array() || vs.size() != n) throw ParseError("'vertices' must hold n entries");
    std::vector<ProjPoint> pts;
    for (const auto& v : vs) pts.emplace_back(detail::vector_from_json(v, d + 1));
    const Json& m = detail::field(j, "monodromy");
    if (!m.is_array() || m.size() != d + 1) throw ParseError("'monodromy' must have d+1 rows");
    QMatrix q(d + 1, d + 1);
    for (std::size_t r = 0; r <= d; ++r) {
      if (!m[r].is_array() || m[r].size() != d + 1) throw ParseError("'monodromy' rows must have d+1 entries");
      for (std::size_t c = 0; c <= d; ++c) q(r, c) = detail::parse_rational(m[r][c]);
    }
    return TwistedPolygon(std::move(pts), ProjMap(q));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("polygon JSON: ") + e.what());
  }
}

inline Json to_json(const VertexStrip& s) {
  Json vs = Json::array();
  for (const auto& v : s.vertices()) vs.push_back(detail::vector_json(v.coords()));
  return Json{{"d", s.dim()}, {"lo", s.lo()}, {"vertices", vs}};
}

inline VertexStrip strip_from_json(const Json& j) {
  try {
    const auto d = detail::field(j, "d").get<std::size_t>();
    const auto lo = detail::field(j, "lo").get<long>();
    std::vector<ProjPoint> pts;
    for (const auto& v : detail::field(j, "vertices")) pts.emplace_back(detail::vector_from_json(v, d + 1));
    return VertexStrip(lo, std::move(pts));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("strip JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Map specs

inline Json to_json(const MapSpec& spec) {
  struct {
    Json operator()(const Generalized& g) const {
      return {{"kind", "generalized"}, {"I", g.jumps}, {"J", g.intersections}};
    }
    Json operator()(const Skew& s) const { return {{"kind", "skew"}, {"tuples", s.tuples}}; }
    Json operator()(const Universal& u) const {
      return {{"kind", "universal"}, {"I", u.jumps}, {"J", u.intersections}};
    }
    Json operator()(const Corrugated&) const { return {{"kind", "corrugated"}}; }
    Json operator()(const Mixed& m) const { return {{"kind", "mixed"}, {"A", m.first}, {"B", m.second}}; }
  } visitor;
  return std::visit(visitor, spec);
}

inline MapSpec map_spec_from_json(const Json& j, std::size_t d) {
  MapSpec spec;
  try {
    const auto kind = detail::field(j, "kind").get<std::string>();
    if (kind == "generalized")
      spec = Generalized{detail::offsets_from_json(detail::field(j, "I")), detail::offsets_from_json(detail::field(j, "J"))};
    else if (kind == "skew")
      spec = Skew{detail::rows_from_json(detail::field(j, "tuples"))};
    else if (kind == "universal")
      spec = Universal{detail::rows_from_json(detail::field(j, "I")), detail::rows_from_json(detail::field(j, "J"))};
    else if (kind == "corrugated")
      spec = Corrugated{};
    else if (kind == "mixed")
      spec = Mixed{detail::offsets_from_json(detail::field(j, "A")), detail::offsets_from_json(detail::field(j, "B"))};
    else
      throw ParseError("unknown map kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("map JSON: ") + e.what());
  }
  try {
    check_spec(spec, d);
  } catch (const UsageError& e) {
    throw ParseError(e.what());
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Traces and reports

inline std::string format_double(double x, const char* fmt = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

inline std::string trace_csv(const HeightTrace& trace, bool timing = true) {
  std::ostringstream out;
  out << "t,log10_height,digits,elapsed_ms\n";
  for (const auto& r : trace.records)
    out << r.t << ',' << format_double(r.log10_height) << ',' << r.digits << ','
        << (timing ? format_double(r.elapsed_ms, "%.3f") : std::string("0")) << '\n';
  return out.str();
}

inline Json to_json(const Classification& c) {
  return Json{{"label", to_string(c.label)}, {"loglog_slope", c.sigma}, {"r2", c.r2_exp},
              {"poly_exponent", c.alpha}, {"poly_r2", c.r2_poly}, {"points", c.points}};
}

inline Json to_json(const HeightTrace& trace, bool timing = true) {
  Json recs = Json::array();
  for (const auto& r : trace.records)
    recs.push_back({{"t", r.t}, {"log10_height", r.log10_height}, {"digits", r.digits},
                    {"elapsed_ms", timing ? r.elapsed_ms : 0.0}});
  return Json{{"records", recs}, {"truncated", trace.truncated}, {"seed_used", trace.seed_used},
              {"reseeds", trace.reseeds}};
}

inline Json to_json(const RowReport& r) {
  Json seeds = Json::array();
  for (const auto& s : r.seeds) {
    Json e{{"seed", s.seed}};
    if (s.trace) {
      e["seed_used"] = s.trace->seed_used;
      e["final_t"] = s.trace->records.back().t;
      e["final_log10_height"] = s.trace->records.back().log10_height;
      e["truncated"] = s.trace->truncated;
    }
    if (s.classification) e["classification"] = to_json(*s.classification);
    if (!s.error.empty()) e["error"] = s.error;
    seeds.push_back(std::move(e));
  }
  return Json{{"row_id", r.row.id},
              {"spec", r.row.spec},
              {"expected_label", to_string(r.row.expected)},
              {"observed_label", to_string(r.observed)},
              {"median_final_log10_height", r.median_final_log10_height},
              {"seeds", seeds},
              {"truncated_count", r.truncated_count},
              {"matched", r.matched()}};
}

inline Json to_json(const TableReport& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(to_json(r));
  return Json{{"rows", rows}, {"all_matched", t.all_matched()}};
}

inline Json to_json(const LaxReport& r) {
  Json lambdas = Json::array();
  for (const auto& l : r.lambdas) lambdas.push_back(l.get_str());
  return Json{{"variant", r.variant},
              {"d", r.d},
              {"n", r.n},
              {"lambda", lambdas},
              {"max_rel_dev", r.max_rel_dev},
              {"log10_max_rel_dev", r.log10_max_rel_dev},
              {"pass", r.pass},
              {"precision_bits", r.precision_bits},
              {"monodromy_sign", {r.sign_before, r.sign_after}}};
}

}  // namespace pentalab
