#include "hypercount/serialize.hpp"

#include <sstream>

#include "hypercount/errors.hpp"

namespace hypercount {

namespace {

Coords coords_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidArgument("expected an array of integers");
  Coords c;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InvalidArgument("expected an array of integers");
    c.push_back(x.get<std::int64_t>());
  }
  return c;
}

template <typename F>
auto field(const Json& j, const char* name, F&& get) {
  if (!j.is_object() || !j.contains(name)) {
    throw InvalidArgument(std::string("missing field '") + name + "'");
  }
  try {
    return get(j.at(name));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad field '") + name + "': " + e.what());
  }
}

}  // namespace

Json mpz_to_json(const mpz_class& v) {
  if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
  return Json(v.get_str());
}

mpz_class mpz_from_json(const Json& j) {
  if (j.is_number_integer()) {
    return mpz_class(static_cast<long>(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    mpz_class v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw InvalidArgument("bad integer string");
    return v;
  }
  throw InvalidArgument("expected an integer");
}

Json to_json(const ProjectivePoint& p) { return Json(p.coords()); }

ProjectivePoint point_from_json(const Json& j) { return normalize(coords_from_json(j)); }

Json to_json(const LinearSubspace& s) {
  Json pl = Json::array();
  for (const auto& c : s.pluecker()) pl.push_back(mpz_to_json(c));
  return {{"dim", s.dim()},
          {"ambient_dim", s.ambient_dim()},
          {"basis", s.basis()},
          {"pluecker", pl},
          {"height", mpz_to_json(s.height())}};
}

LinearSubspace subspace_from_json(const Json& j) {
  auto basis = field(j, "basis", [](const Json& b) {
    ZMatrix rows;
    for (const auto& r : b) {
      std::vector<mpz_class> row;
      for (auto x : coords_from_json(r)) row.emplace_back(static_cast<long>(x));
      rows.push_back(std::move(row));
    }
    return rows;
  });
  LinearSubspace s = subspace_from_rows(basis);
  if (j.contains("pluecker")) {
    std::vector<mpz_class> pl;
    for (const auto& x : j.at("pluecker")) pl.push_back(mpz_from_json(x));
    if (pl != s.pluecker()) throw InvalidArgument("Plücker vector does not match basis");
  }
  return s;
}

Json to_json(const CountReport& r) {
  Json buckets = Json::object();
  for (const auto& [k, c] : r.dyadic_buckets) buckets[std::to_string(k)] = c;
  Json j = {{"bound", r.bound},
            {"total", r.total},
            {"method", to_string(r.method)},
            {"dyadic_buckets", buckets},
            {"elapsed_ms", r.elapsed_ms}};
  if (r.points) {
    Json pts = Json::array();
    for (const auto& p : *r.points) pts.push_back(to_json(p));
    j["points"] = std::move(pts);
  }
  return j;
}

CountReport count_report_from_json(const Json& j) {
  CountReport r;
  r.bound = field(j, "bound", [](const Json& x) { return x.get<std::int64_t>(); });
  r.total = field(j, "total", [](const Json& x) { return x.get<std::uint64_t>(); });
  r.method = method_from_string(
      field(j, "method", [](const Json& x) { return x.get<std::string>(); }));
  r.elapsed_ms = field(j, "elapsed_ms", [](const Json& x) { return x.get<double>(); });
  field(j, "dyadic_buckets", [&](const Json& b) {
    for (const auto& [k, c] : b.items()) r.dyadic_buckets[std::stoi(k)] = c.get<std::uint64_t>();
    return 0;
  });
  if (j.contains("points")) {
    r.points.emplace();
    for (const auto& p : j.at("points")) r.points->push_back(point_from_json(p));
  }
  return r;
}

Json to_json(const AttributionReport& r) {
  Json subs = Json::array();
  for (const auto& s : r.subspaces) {
    subs.push_back({{"subspace", to_json(s.subspace)}, {"count", s.count}});
  }
  return {{"bound", r.bound},
          {"cover_height_bound", r.cover_height_bound},
          {"subspaces", subs},
          {"total", r.total},
          {"covered", r.covered},
          {"residual", r.residual},
          {"overcount", r.overcount},
          {"pairwise_overlap", r.pairwise_overlap}};
}

AttributionReport attribution_from_json(const Json& j) {
  auto u64 = [](const Json& x) { return x.get<std::uint64_t>(); };
  auto i64 = [](const Json& x) { return x.get<std::int64_t>(); };
  AttributionReport r;
  r.bound = field(j, "bound", i64);
  r.cover_height_bound = field(j, "cover_height_bound", i64);
  r.total = field(j, "total", u64);
  r.covered = field(j, "covered", u64);
  r.residual = field(j, "residual", u64);
  r.overcount = field(j, "overcount", u64);
  r.pairwise_overlap = field(j, "pairwise_overlap", u64);
  field(j, "subspaces", [&](const Json& subs) {
    for (const auto& s : subs) {
      r.subspaces.push_back({subspace_from_json(s.at("subspace")), s.at("count").get<std::uint64_t>()});
    }
    return 0;
  });
  return r;
}

Json to_json(const ExponentFit& fit) {
  Json samples = Json::array();
  for (const auto& [b, n] : fit.samples) samples.push_back({b, n});
  return {{"samples", samples},
          {"slope", fit.slope},
          {"intercept", fit.intercept},
          {"residual", fit.residual}};
}

ExponentFit fit_from_json(const Json& j) {
  auto dbl = [](const Json& x) { return x.get<double>(); };
  ExponentFit fit;
  fit.slope = field(j, "slope", dbl);
  fit.intercept = field(j, "intercept", dbl);
  fit.residual = field(j, "residual", dbl);
  fit.samples = field(j, "samples", [](const Json& s) {
    return s.get<std::vector<std::pair<std::int64_t, std::uint64_t>>>();
  });
  return fit;
}

Json to_json(const ConeEquations& cone) {
  Json eqs = Json::array();
  for (const auto& e : cone.equations) eqs.push_back(e.to_string());
  return {{"base_point", to_json(cone.base_point)},
          {"normal_form", cone.normal_form.to_string()},
          {"equations", eqs},
          {"degenerate", cone.degenerate}};
}

std::string series_to_csv(const std::vector<CountReport>& reports) {
  std::ostringstream out;
  out << "B,total\n";
  for (const auto& r : reports) out << r.bound << "," << r.total << "\n";
  return out.str();
}

std::vector<std::pair<std::int64_t, std::uint64_t>> series_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty series");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "B,total") throw InvalidArgument("series must start with header 'B,total'");
  std::vector<std::pair<std::int64_t, std::uint64_t>> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      std::size_t p1 = 0, p2 = 0;
      std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      std::int64_t bound = std::stoll(a, &p1);
      std::uint64_t total = std::stoull(b, &p2);
      if (p1 != a.size() || p2 != b.size() || b.front() == '-') throw std::invalid_argument("junk");
      out.emplace_back(bound, total);
    } catch (const std::exception&) {
      throw InvalidArgument("bad series line " + std::to_string(lineno) + ": '" + line + "'");
    }
  }
  return out;
}

}  // namespace hypercount
