"""Rational points of bounded height on projective hypersurfaces.

Forms are given as text such as ``"x0*x1 - x2*x3"``. Reports come back as
plain dicts and lists with exact integers.
"""

import json
from fractions import Fraction

from . import _core
from ._core import HypercountError, contains_subspace, smallest_generators, theta_iteration

__all__ = [
    "HypercountError",
    "attribute_points",
    "cone_at_point",
    "contains_subspace",
    "count_points",
    "fermat_plane_count",
    "fit_exponent",
    "intersection_degree",
    "line_count_bounds",
    "lines_through_point",
    "lp_max_bound",
    "lp_max_oracle",
    "rational_lines",
    "rational_planes",
    "rational_subspaces",
    "run_cli",
    "singular_point_search",
    "smallest_generators",
    "subspace",
    "theta_iteration",
]


def _big(x):
    return int(x) if isinstance(x, str) else x


def _subspace(d):
    d["pluecker"] = [_big(c) for c in d["pluecker"]]
    d["height"] = _big(d["height"])
    return d


def count_points(form, bound, method="sieved", *, want_points=False, threads=1,
                 memory_cap=2 << 30, ambient_dim=None):
    r = json.loads(_core.count_points(form, bound, method, want_points, threads,
                                      memory_cap, ambient_dim))
    r["dyadic_buckets"] = {int(k): v for k, v in r["dyadic_buckets"].items()}
    return r


def rational_subspaces(form, dim, height_bound, *, threads=1, ambient_dim=None):
    raw = _core.rational_subspaces(form, dim, height_bound, threads, ambient_dim)
    return [_subspace(s) for s in json.loads(raw)]


def rational_lines(form, height_bound, **kw):
    return rational_subspaces(form, 1, height_bound, **kw)


def rational_planes(form, height_bound, **kw):
    return rational_subspaces(form, 2, height_bound, **kw)


def lines_through_point(form, point, height_bound, *, threads=1, ambient_dim=None):
    raw = _core.lines_through_point(form, list(point), height_bound, threads, ambient_dim)
    return [_subspace(s) for s in json.loads(raw)]


def cone_at_point(form, point, *, ambient_dim=None):
    return json.loads(_core.cone_at_point(form, list(point), ambient_dim))


def subspace(basis):
    return _subspace(json.loads(_core.subspace([list(r) for r in basis])))


def attribute_points(form, bound, height_bound, *, threads=1, ambient_dim=None):
    r = json.loads(_core.attribute_points(form, bound, height_bound, threads, ambient_dim))
    for s in r["subspaces"]:
        _subspace(s["subspace"])
    return r


def singular_point_search(form, height_bound, *, threads=1, ambient_dim=None):
    return _core.singular_point_search(form, height_bound, threads, ambient_dim)


def _q(x):
    return str(Fraction(x))


def lp_max_bound(a, b, c, H):
    return _core.lp_max_bound(_q(a), _q(b), _q(c), float(H))


def lp_max_oracle(a, b, c, H, steps=64):
    return _core.lp_max_oracle(_q(a), _q(b), _q(c), float(H), steps)


def intersection_degree(d, r):
    return int(_core.intersection_degree(d, r))


def fermat_plane_count(m, d):
    return int(_core.fermat_plane_count(m, d))


def line_count_bounds(d):
    return tuple(int(v) for v in _core.line_count_bounds(d))


def fit_exponent(samples):
    return json.loads(_core.fit_exponent([(int(b), int(n)) for b, n in samples]))


def run_cli(args):
    """Returns (exit code, stdout, stderr) of one command-line invocation."""
    return _core.run_cli([str(a) for a in args])
