"""Torus skein algebra, twisted Heisenberg algebra, TQFT trace sums and pillowcase operators.

Structured arguments may be given as Python objects; they are passed to the
compiled core as JSON. Structured results come back as Python objects.
"""

import json as _json

from . import _core
from ._core import ParseError, SkeinError

__all__ = [
    "ParseError",
    "SkeinError",
    "class_vanishes",
    "count_colorings",
    "heis_mul",
    "iso_sweep",
    "limit_trace",
    "normalized_trace",
    "operator_trace",
    "phi_map",
    "psi_commutator_error",
    "random_ribbon_graph",
    "ribbon_check",
    "run_cli",
    "skein_mul",
    "trace_sum",
    "tracei",
]


def skein_mul(*factors, spec="-1/2"):
    """Product of skein elements (records, single curves or bare multicurves)."""
    return _json.loads(_core.skein_mul([_json.dumps(f) for f in factors], spec))


def phi_map(x):
    """Image of a skein element at A = -i in the twisted Heisenberg algebra."""
    return _json.loads(_core.phi_map(_json.dumps(x)))


def heis_mul(x, y):
    return _json.loads(_core.heis_mul(_json.dumps(x), _json.dumps(y)))


def iso_sweep(max_copies=3, max_coord=5, labeling="reflected", threads=1):
    r = _core.iso_sweep(max_copies, max_coord, labeling, threads)
    r["failures"] = [(_json.loads(x), _json.loads(y)) for x, y in r["failures"]]
    return r


def ribbon_check(graph):
    return _core.ribbon_check(_json.dumps(graph))


def random_ribbon_graph(seed):
    return _json.loads(_core.random_ribbon_graph(seed))


def count_colorings(graph, p):
    return _core.count_colorings(_json.dumps(graph), p)


def trace_sum(graph, m, theta, contracted=False):
    return _core.trace_sum(_json.dumps(graph), _json.dumps(m), theta, contracted)


def normalized_trace(graph, m, n, base="-1/2", zeta="1", step=4):
    return _core.normalized_trace(_json.dumps(graph), _json.dumps(m), n, base, zeta, step)


def limit_trace(graph, m, base="-1/2", zeta="1", samples=200000, seed=1, threads=1):
    """Monte Carlo limit; returns (value, standard error)."""
    return _core.limit_trace(_json.dumps(graph), _json.dumps(m), base, zeta, samples, seed, threads)


def tracei(graph, m):
    """Limit at -1/2 with zeta = 1; returns (value, error bound)."""
    return _core.tracei(_json.dumps(graph), _json.dumps(m))


def class_vanishes(graph, m):
    return _core.class_vanishes(_json.dumps(graph), _json.dumps(m))


operator_trace = _core.operator_trace
psi_commutator_error = _core.psi_commutator_error


def run_cli(*args):
    """Run the command line in-process; returns (exit code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
