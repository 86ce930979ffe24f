#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypercount/bounds.hpp"
#include "hypercount/cli.hpp"
#include "hypercount/enumerate.hpp"
#include "hypercount/errors.hpp"
#include "hypercount/linear_loci.hpp"
#include "hypercount/serialize.hpp"

namespace py = pybind11;
using namespace hypercount;

// Reports cross the boundary as JSON text; the Python package decodes them.
namespace {

Form form_arg(const std::string& text, std::optional<int> n) { return parse_form(text, n); }

std::string dump(const Json& j) { return j.dump(); }

Json subspaces_json(const std::vector<LinearSubspace>& v) {
  Json arr = Json::array();
  for (const auto& s : v) arr.push_back(to_json(s));
  return arr;
}

LinearSubspace subspace_arg(const std::vector<Coords>& basis) {
  ZMatrix rows;
  for (const auto& r : basis) {
    std::vector<mpz_class> row;
    for (auto x : r) row.emplace_back(static_cast<long>(x));
    rows.push_back(std::move(row));
  }
  return subspace_from_rows(rows);
}

mpq_class rational_arg(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw InvalidArgument("bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> error(m, "HypercountError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object args = py::make_tuple(e.kind(), e.what());
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  m.def("normalize_form", [](const std::string& text, std::optional<int> n) {
    Form f = form_arg(text, n);
    return py::make_tuple(f.to_string(), f.ambient_dim(), f.degree());
  }, py::arg("form"), py::arg("ambient_dim") = py::none());

  m.def("count_points", [](const std::string& text, std::int64_t b, const std::string& method,
                           bool want_points, int threads, std::uint64_t memory_cap,
                           std::optional<int> n) {
    CountOptions opts;
    opts.method = method_from_string(method);
    opts.want_points = want_points;
    opts.threads = threads;
    opts.memory_cap = memory_cap;
    Form f = form_arg(text, n);
    py::gil_scoped_release release;
    return dump(to_json(count_points(f, b, opts)));
  }, py::arg("form"), py::arg("bound"), py::arg("method") = "sieved",
     py::arg("want_points") = false, py::arg("threads") = 1,
     py::arg("memory_cap") = std::uint64_t{2} << 30, py::arg("ambient_dim") = py::none());

  m.def("rational_subspaces", [](const std::string& text, int dim, std::int64_t h, int threads,
                                 std::optional<int> n) {
    Form f = form_arg(text, n);
    py::gil_scoped_release release;
    return dump(subspaces_json(rational_subspaces(f, dim, h, threads)));
  }, py::arg("form"), py::arg("dim"), py::arg("height_bound"), py::arg("threads") = 1,
     py::arg("ambient_dim") = py::none());

  m.def("lines_through_point", [](const std::string& text, const Coords& x, std::int64_t h,
                                  int threads, std::optional<int> n) {
    Form f = form_arg(text, n);
    auto p = normalize(x);
    py::gil_scoped_release release;
    return dump(subspaces_json(lines_through_point(f, p, h, threads)));
  }, py::arg("form"), py::arg("point"), py::arg("height_bound"), py::arg("threads") = 1,
     py::arg("ambient_dim") = py::none());

  m.def("cone_at_point", [](const std::string& text, const Coords& x, std::optional<int> n) {
    return dump(to_json(cone_at_point(form_arg(text, n), normalize(x))));
  }, py::arg("form"), py::arg("point"), py::arg("ambient_dim") = py::none());

  m.def("contains_subspace", [](const std::string& text, const std::vector<Coords>& basis,
                                std::optional<int> n) {
    return contains_subspace(form_arg(text, n), subspace_arg(basis));
  }, py::arg("form"), py::arg("basis"), py::arg("ambient_dim") = py::none());

  m.def("subspace", [](const std::vector<Coords>& basis) {
    return dump(to_json(subspace_arg(basis)));
  }, py::arg("basis"));

  m.def("smallest_generators", [](const std::vector<Coords>& basis) {
    std::vector<Coords> out;
    for (const auto& p : smallest_generators(subspace_arg(basis))) out.push_back(p.coords());
    return out;
  }, py::arg("basis"));

  m.def("attribute_points", [](const std::string& text, std::int64_t b, std::int64_t h,
                               int threads, std::optional<int> n) {
    Form f = form_arg(text, n);
    py::gil_scoped_release release;
    return dump(to_json(attribute_points(f, b, h, threads)));
  }, py::arg("form"), py::arg("bound"), py::arg("height_bound"), py::arg("threads") = 1,
     py::arg("ambient_dim") = py::none());

  m.def("singular_point_search", [](const std::string& text, std::int64_t h, int threads,
                                    std::optional<int> n) {
    std::vector<Coords> out;
    for (const auto& p : singular_point_search(form_arg(text, n), h, threads)) {
      out.push_back(p.coords());
    }
    return out;
  }, py::arg("form"), py::arg("height_bound"), py::arg("threads") = 1,
     py::arg("ambient_dim") = py::none());

  m.def("lp_max_bound", [](const std::string& a, const std::string& b, const std::string& c,
                           double H) {
    return lp_max_bound(rational_arg(a), rational_arg(b), rational_arg(c), H);
  });
  m.def("lp_max_oracle", [](const std::string& a, const std::string& b, const std::string& c,
                            double H, int steps) {
    return lp_max_oracle(rational_arg(a), rational_arg(b), rational_arg(c), H, steps);
  });
  m.def("intersection_degree", [](int d, int r) { return intersection_degree(d, r).get_str(); });
  m.def("fermat_plane_count", [](int mm, int d) { return fermat_plane_count(mm, d).get_str(); });
  m.def("line_count_bounds", [](int d) {
    auto lc = line_count_bounds(d);
    return py::make_tuple(lc.flecnodal.get_str(), lc.segre.get_str());
  });
  m.def("fit_exponent", [](const std::vector<std::pair<std::int64_t, std::uint64_t>>& s) {
    return dump(to_json(fit_exponent(s)));
  });
  m.def("theta_iteration", &theta_iteration);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  });
}
