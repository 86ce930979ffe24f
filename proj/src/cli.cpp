#include "hypercount/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "hypercount/bounds.hpp"
#include "hypercount/enumerate.hpp"
#include "hypercount/errors.hpp"
#include "hypercount/linear_loci.hpp"
#include "hypercount/serialize.hpp"

namespace hypercount::cli {

namespace {

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

struct Options {
  std::string form;
  std::string form_file;
  int ambient_dim = -1;
  std::string bounds;
  std::string sweep;
  std::string method = "sieved";
  std::int64_t height_bound = -1;
  std::string point;
  int dim = 1;
  int threads = 0;
  std::string memory_cap;
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::string input;
  // formulas
  bool intersection = false;
  bool fermat = false;
  bool line_bounds = false;
  std::string d = "3";
  std::string r = "-1..2";
  std::string m = "1";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::int64_t parse_int(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError(what, "not an integer: '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

/// "a..b", "a,b,c" or "a".
std::vector<int> parse_range(const std::string& s, const char* what) {
  std::vector<int> out;
  auto dots = s.find("..");
  if (dots != std::string::npos) {
    auto lo = parse_int(s.substr(0, dots), what), hi = parse_int(s.substr(dots + 2), what);
    if (hi < lo) throw CLI::ValidationError(what, "empty range '" + s + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    return out;
  }
  for (const auto& p : split(s, ',')) out.push_back(static_cast<int>(parse_int(p, what)));
  return out;
}

std::uint64_t parse_bytes(const std::string& s) {
  if (s.empty()) throw CLI::ValidationError("--memory-cap", "empty value");
  std::uint64_t mult = 1;
  std::string digits = s;
  switch (std::toupper(static_cast<unsigned char>(s.back()))) {
    case 'K': mult = 1ull << 10; break;
    case 'M': mult = 1ull << 20; break;
    case 'G': mult = 1ull << 30; break;
    default: break;
  }
  if (mult != 1) digits.pop_back();
  auto v = parse_int(digits, "--memory-cap");
  if (v <= 0) throw CLI::ValidationError("--memory-cap", "must be positive");
  return static_cast<std::uint64_t>(v) * mult;
}

std::vector<std::int64_t> bound_list(const Options& o) {
  std::vector<std::int64_t> out;
  if (!o.sweep.empty()) {
    auto parts = split(o.sweep, ':');
    if (parts.size() != 3) throw CLI::ValidationError("--sweep", "expected B0:ratio:count");
    auto b0 = parse_int(parts[0], "--sweep");
    double ratio = 0;
    try {
      ratio = std::stod(parts[1]);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--sweep", "bad ratio '" + parts[1] + "'");
    }
    auto count = parse_int(parts[2], "--sweep");
    if (b0 < 1 || !(ratio > 1) || count < 1) {
      throw CLI::ValidationError("--sweep", "need B0 >= 1, ratio > 1, count >= 1");
    }
    for (std::int64_t i = 0; i < count; ++i) {
      out.push_back(std::llround(static_cast<double>(b0) * std::pow(ratio, static_cast<double>(i))));
    }
  } else if (!o.bounds.empty()) {
    for (const auto& p : split(o.bounds, ',')) out.push_back(parse_int(p, "--B"));
  } else {
    throw CLI::ValidationError("--B", "one of --B or --sweep is required");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 1) throw CLI::ValidationError("--B", "bounds must be positive");
    if (i > 0 && out[i] <= out[i - 1]) {
      throw CLI::ValidationError("--B", "bounds must be strictly increasing");
    }
  }
  return out;
}

Form load_form(const Options& o) {
  std::string text;
  if (!o.form.empty() && !o.form_file.empty()) {
    throw CLI::ValidationError("--form", "give only one of --form and --form-file");
  }
  if (!o.form.empty()) {
    text = o.form;
  } else if (!o.form_file.empty()) {
    std::istringstream in(read_file(o.form_file));
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      text += line + " ";
    }
  } else {
    throw CLI::ValidationError("--form", "one of --form or --form-file is required");
  }
  std::optional<int> n;
  if (o.ambient_dim >= 0) n = o.ambient_dim;
  return parse_form(text, n);
}

ProjectivePoint load_point(const Options& o) {
  if (o.point.empty()) throw CLI::ValidationError("--point", "required");
  Coords c;
  for (const auto& p : split(o.point, ',')) c.push_back(parse_int(p, "--point"));
  return normalize(c);
}

std::int64_t require_height(const Options& o) {
  if (o.height_bound < 1) throw CLI::ValidationError("--height-bound", "positive value required");
  return o.height_bound;
}

int thread_count(const Options& o) {
  if (o.threads > 0) return o.threads;
  if (const char* env = std::getenv("HYPERCOUNT_THREADS")) {
    auto v = parse_int(env, "HYPERCOUNT_THREADS");
    if (v < 1) throw CLI::ValidationError("HYPERCOUNT_THREADS", "must be positive");
    return static_cast<int>(v);
  }
  return 1;
}

std::string coords_text(const Coords& c, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(c[i]);
  }
  return s;
}

std::string subspace_text(const LinearSubspace& s) {
  std::string t = "height " + s.height().get_str() + " basis";
  for (const auto& row : s.basis()) t += " [" + coords_text(row, ",") + "]";
  return t;
}

void check_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (o.format == a) return;
  }
  throw CLI::ValidationError("--format", "'" + o.format + "' not supported by this command");
}

std::string cmd_count(const Options& o, bool points) {
  check_format(o, {"json", "csv", "text"});
  Form f = load_form(o);
  CountOptions opts;
  opts.method = method_from_string(o.method);
  opts.threads = thread_count(o);
  opts.want_points = points;
  if (!o.memory_cap.empty()) opts.memory_cap = parse_bytes(o.memory_cap);
  auto bounds = bound_list(o);
  std::vector<CountReport> reports;
  for (auto b : bounds) reports.push_back(count_points(f, b, opts));

  std::ostringstream out;
  if (o.format == "json") {
    if (reports.size() == 1) return to_json(reports[0]).dump(2) + "\n";
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
  }
  if (o.format == "csv") {
    if (!points) return series_to_csv(reports);
    out << "B";
    for (int i = 0; i < f.num_vars(); ++i) out << ",x" << i;
    out << "\n";
    for (const auto& r : reports) {
      for (const auto& p : *r.points) out << r.bound << "," << coords_text(p.coords(), ",") << "\n";
    }
    return out.str();
  }
  for (const auto& r : reports) {
    out << "B=" << r.bound << " total=" << r.total << " method=" << to_string(r.method) << "\n";
    if (points) {
      for (const auto& p : *r.points) out << "  [" << coords_text(p.coords(), ",") << "]\n";
    }
  }
  return out.str();
}

std::string cmd_lines(const Options& o) {
  check_format(o, {"json", "text"});
  Form f = load_form(o);
  auto h = require_height(o);
  int threads = thread_count(o);
  std::vector<LinearSubspace> found;
  if (!o.point.empty()) {
    if (o.dim != 1) throw CLI::ValidationError("--point", "only lines (--dim 1) through a point");
    found = lines_through_point(f, load_point(o), h, threads);
  } else {
    found = rational_subspaces(f, o.dim, h, threads);
  }
  if (o.format == "json") {
    Json arr = Json::array();
    for (const auto& s : found) arr.push_back(to_json(s));
    return arr.dump(2) + "\n";
  }
  std::ostringstream out;
  out << found.size() << " subspaces of dimension " << o.dim << "\n";
  for (const auto& s : found) out << "  " << subspace_text(s) << "\n";
  return out.str();
}

std::string cmd_cone(const Options& o) {
  check_format(o, {"json", "text"});
  auto cone = cone_at_point(load_form(o), load_point(o));
  if (o.format == "json") return to_json(cone).dump(2) + "\n";
  std::ostringstream out;
  out << "base point [" << coords_text(cone.base_point.coords(), ",") << "]\n";
  out << "normal form " << cone.normal_form.to_string() << "\n";
  for (std::size_t i = 0; i < cone.equations.size(); ++i) {
    out << "F" << i + 2 << "(0,b) = " << cone.equations[i].to_string()
        << (cone.degenerate[i] ? "  (identically zero)" : "") << "\n";
  }
  return out.str();
}

std::string cmd_attribute(const Options& o) {
  check_format(o, {"json", "text"});
  Form f = load_form(o);
  auto bounds = bound_list(o);
  if (bounds.size() != 1) throw CLI::ValidationError("--B", "attribute takes a single bound");
  auto r = attribute_points(f, bounds[0], require_height(o), thread_count(o));
  if (o.format == "json") return to_json(r).dump(2) + "\n";
  std::ostringstream out;
  out << "B=" << r.bound << " total=" << r.total << " covered=" << r.covered
      << " residual=" << r.residual << " overcount=" << r.overcount << "\n";
  for (const auto& s : r.subspaces) {
    out << "  " << s.count << " on " << subspace_text(s.subspace) << "\n";
  }
  return out.str();
}

std::string cmd_fit(const Options& o) {
  check_format(o, {"json", "text"});
  if (o.input.empty()) throw CLI::ValidationError("--input", "series file required");
  auto fit = fit_exponent(series_from_csv(read_file(o.input)));
  if (o.format == "json") return to_json(fit).dump(2) + "\n";
  std::ostringstream out;
  out.precision(6);
  out << "slope=" << fit.slope << " intercept=" << fit.intercept
      << " residual=" << fit.residual << "\n";
  return out.str();
}

std::string cmd_formulas(const Options& o) {
  check_format(o, {"json", "text"});
  bool all = !o.intersection && !o.fermat && !o.line_bounds;
  auto ds = parse_range(o.d, "--d");
  Json j = Json::object();
  std::ostringstream out;
  if (o.intersection || all) {
    Json rows = Json::array();
    out << "intersection_degree d r value\n";
    for (int d : ds) {
      for (int r : parse_range(o.r, "--r")) {
        auto v = intersection_degree(d, r);
        rows.push_back({d, r, mpz_to_json(v)});
        out << "  " << d << " " << r << " " << v.get_str() << "\n";
      }
    }
    j["intersection_degree"] = rows;
  }
  if (o.fermat || all) {
    Json rows = Json::array();
    out << "fermat_plane_count m d value\n";
    for (int m : parse_range(o.m, "--m")) {
      for (int d : ds) {
        auto v = fermat_plane_count(m, d);
        rows.push_back({m, d, mpz_to_json(v)});
        out << "  " << m << " " << d << " " << v.get_str() << "\n";
      }
    }
    j["fermat_plane_count"] = rows;
  }
  if (o.line_bounds || all) {
    Json rows = Json::array();
    out << "line_count_bounds d flecnodal segre\n";
    for (int d : ds) {
      auto lc = line_count_bounds(d);
      rows.push_back({d, mpz_to_json(lc.flecnodal), mpz_to_json(lc.segre)});
      out << "  " << d << " " << lc.flecnodal.get_str() << " " << lc.segre.get_str() << "\n";
    }
    j["line_count_bounds"] = rows;
  }
  if (o.format == "json") return j.dump(2) + "\n";
  return out.str();
}

std::string cmd_singular(const Options& o) {
  check_format(o, {"json", "text"});
  auto pts = singular_point_search(load_form(o), require_height(o), thread_count(o));
  if (o.format == "json") {
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back(to_json(p));
    return Json{{"height_bound", o.height_bound}, {"points", arr}}.dump(2) + "\n";
  }
  std::ostringstream out;
  out << pts.size() << " singular points of height <= " << o.height_bound << "\n";
  for (const auto& p : pts) out << "  [" << coords_text(p.coords(), ",") << "]\n";
  return out.str();
}

void add_form(CLI::App* sub, Options& o) {
  sub->add_option("--form", o.form, "Form as text, e.g. \"x0*x1-x2*x3\"");
  sub->add_option("--form-file", o.form_file, "File holding the form ('#' starts a comment)");
  sub->add_option("--ambient-dim", o.ambient_dim, "n of P^n (default: largest variable index)");
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--threads", o.threads, "Worker threads (default $HYPERCOUNT_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--output", o.output, "Write the report to this file");
  sub->add_option("--format", o.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--seed", o.seed, "Seed for randomized harnesses (never affects counts)");
}

void add_bounds(CLI::App* sub, Options& o) {
  sub->add_option("--B", o.bounds, "Height bound, or comma-separated increasing list");
  sub->add_option("--sweep", o.sweep, "Geometric sweep B0:ratio:count");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Counting rational points of bounded height on projective hypersurfaces",
               "hypercount"};
  app.require_subcommand(1);

  auto* count = app.add_subcommand("count", "Count points of height <= B");
  auto* points = app.add_subcommand("points", "List points of height <= B");
  for (auto* sub : {count, points}) {
    add_form(sub, o);
    add_bounds(sub, o);
    add_common(sub, o);
    sub->add_option("--method", o.method, "naive, sieved or mitm")
        ->check(CLI::IsMember({"naive", "sieved", "mitm", "meet_in_middle"}));
    sub->add_option("--memory-cap", o.memory_cap, "Meet-in-the-middle table limit (bytes, K/M/G)");
  }
  auto* lines = app.add_subcommand("lines", "Rational lines (or m-planes) on X up to a height");
  add_form(lines, o);
  add_common(lines, o);
  lines->add_option("--height-bound", o.height_bound, "Plücker height cutoff");
  lines->add_option("--point", o.point, "Only lines through x0,...,xn");
  lines->add_option("--dim", o.dim, "Dimension m of the planes (default 1)")
      ->check(CLI::PositiveNumber);

  auto* cone = app.add_subcommand("cone", "Cone equations of lines through a point");
  add_form(cone, o);
  add_common(cone, o);
  cone->add_option("--point", o.point, "Point x0,...,xn on X");

  auto* attribute = app.add_subcommand("attribute", "Split points between lines/planes and the rest");
  add_form(attribute, o);
  add_bounds(attribute, o);
  add_common(attribute, o);
  attribute->add_option("--height-bound", o.height_bound, "Height cutoff for covering subspaces");

  auto* fit = app.add_subcommand("fit", "Least-squares exponent of a B,total series");
  add_common(fit, o);
  fit->add_option("--input", o.input, "CSV with header B,total");

  auto* formulas = app.add_subcommand("formulas", "Closed-form tables");
  add_common(formulas, o);
  formulas->add_flag("--intersection-degree", o.intersection, "(1-(1-d)^{r+1})/d");
  formulas->add_flag("--fermat-planes", o.fermat, "(2m+1)!! d^{m+1}");
  formulas->add_flag("--line-bounds", o.line_bounds, "11d^2-24d and 11d^2-28d+12");
  formulas->add_option("--d", o.d, "Degrees: a, a..b or a,b,c");
  formulas->add_option("--r", o.r, "Values of r");
  formulas->add_option("--m", o.m, "Plane dimensions m");

  auto* singular = app.add_subcommand("singular-search", "Singular points up to a height");
  add_form(singular, o);
  add_common(singular, o);
  singular->add_option("--height-bound", o.height_bound, "Height cutoff");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  try {
    std::string report;
    if (count->parsed()) report = cmd_count(o, false);
    else if (points->parsed()) report = cmd_count(o, true);
    else if (lines->parsed()) report = cmd_lines(o);
    else if (cone->parsed()) report = cmd_cone(o);
    else if (attribute->parsed()) report = cmd_attribute(o);
    else if (fit->parsed()) report = cmd_fit(o);
    else if (formulas->parsed()) report = cmd_formulas(o);
    else report = cmd_singular(o);

    if (o.output.empty()) {
      out << report;
    } else {
      std::ofstream file(o.output);
      if (!file || !(file << report)) throw IoError("cannot write '" + o.output + "'");
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << Json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

}  // namespace hypercount::cli
