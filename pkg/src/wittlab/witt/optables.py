"""Universal Witt operation polynomials, derived and cached.

For each (p, m, op) the table holds the integer-coefficient polynomials
defining the ring-scheme operation on length-m vectors: they are solved
degree by degree from the triangular ghost system over Q, dividing by
p^n at stage n, and integrality of every coefficient is certified during
derivation (a fractional survivor raises IntegralityFailure and means a
bug, not bad input).

Tables are cached to disk as versioned JSON with a canonical monomial
ordering and a sha256 over the body; a version or hash mismatch forces
re-derivation.  The in-memory registry is write-once: concurrent readers
are fine, and a lock dedups concurrent derivation of the same key.
"""

import hashlib
import json
import logging
import os
import tempfile
import threading

from ..errors import DerivationLimitExceeded, IntegralityFailure
from ..rings.qpoly import QPoly
from ..rings.rat import q_is_integer, qnum

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
OPS = ("sum", "prod", "neg", "frobenius", "tmap")
DEFAULT_MAX_M = {2: 5, 3: 4, 5: 3}

_registry = {}
_lock = threading.RLock()  # re-entrant: tmap derivation pulls in the sum table


class OpPolyTable:
    def __init__(self, p, m, op, var_names, polys):
        self.p = p
        self.m = m
        self.op = op
        self.var_names = tuple(var_names)
        self.polys = list(polys)
        self.body_sha256 = _body_hash(p, m, op, self.var_names, self.polys)

    def __eq__(self, other):
        return isinstance(other, OpPolyTable) and other.body_sha256 == self.body_sha256

    def __repr__(self):
        return f"OpPolyTable(p={self.p}, m={self.m}, op={self.op}, sha={self.body_sha256[:12]})"


def _poly_payload(poly):
    return [[list(e), str(qnum(c))] for e, c in poly.items_sorted()]


def _body_hash(p, m, op, var_names, polys):
    body = json.dumps(
        {
            "format_version": FORMAT_VERSION,
            "p": p,
            "m": m,
            "op": op,
            "vars": list(var_names),
            "polys": [_poly_payload(q) for q in polys],
        },
        separators=(",", ":"),
        sort_keys=True,
    )
    return hashlib.sha256(body.encode()).hexdigest()


def phi(p, n, vals):
    """Witt polynomial Phi_n evaluated at vals[0..n] (any ring with +,*,int*)."""
    acc = vals[0] ** (p ** n)
    for i in range(1, n + 1):
        acc = acc + (vals[i] ** (p ** (n - i))) * (p ** i)
    return acc


def eval_int_poly(poly, values, from_int):
    """Evaluate an integer-coefficient QPoly at arbitrary ring values."""
    acc = from_int(0)
    pows = [dict() for _ in range(poly.nvars)]
    for e, c in poly.items_sorted():
        term = from_int(int(qnum(c)))
        for i, ei in enumerate(e):
            if ei:
                pw = pows[i].get(ei)
                if pw is None:
                    pw = values[i] ** ei
                    pows[i][ei] = pw
                term = term * pw
        acc = acc + term
    return acc


def _div_certified(poly, k, what):
    out = poly.scale(1) if k == 1 else QPoly(poly.nvars, {e: c / k for e, c in poly.terms.items()})
    if not out.is_integral_coeffs():
        raise IntegralityFailure(f"{what}: division by {k} left fractional coefficients")
    return out


def _derive_binary(p, m, combine):
    nv = 2 * m
    xs = [QPoly.gen(nv, i) for i in range(m)]
    ys = [QPoly.gen(nv, m + i) for i in range(m)]
    out = []
    for n in range(m):
        target = combine(phi(p, n, xs), phi(p, n, ys))
        for i in range(n):
            target = target - (out[i] ** (p ** (n - i))) * (p ** i)
        out.append(_div_certified(target, p ** n, f"component {n}"))
    return out


def _derive_neg(p, m):
    xs = [QPoly.gen(m, i) for i in range(m)]
    out = []
    for n in range(m):
        target = -phi(p, n, xs)
        for i in range(n):
            target = target - (out[i] ** (p ** (n - i))) * (p ** i)
        out.append(_div_certified(target, p ** n, f"neg component {n}"))
    return out


def _derive_frobenius(p, m):
    xs = [QPoly.gen(m, i) for i in range(m)]
    out = []
    for n in range(m - 1):
        target = phi(p, n + 1, xs)
        for i in range(n):
            target = target - (out[i] ** (p ** (n - i))) * (p ** i)
        out.append(_div_certified(target, p ** n, f"frobenius component {n}"))
    return out


def _derive_tmap(p, m, cache_dir):
    """Components of sum_n V^n([a_n].x) plus the symbolic phantom-law check."""
    nv = 2 * m
    avars = [QPoly.gen(nv, i) for i in range(m)]
    xvars = [QPoly.gen(nv, m + i) for i in range(m)]
    zero = QPoly.zero(nv)

    def teich_scaled_shifted(n):
        # V^n([a_n].x) at length m: n zeros then a_n^{p^i} x_i
        comps = [zero] * n
        for i in range(m - n):
            comps.append((avars[n] ** (p ** i)) * xvars[i])
        return comps

    sum_table = get_table(p, m, "sum", cache_dir=cache_dir)
    acc = teich_scaled_shifted(0)
    for n in range(1, m):
        nxt = teich_scaled_shifted(n)
        acc = [
            eval_int_poly(poly, acc + nxt, lambda k: QPoly.const(nv, k))
            for poly in sum_table.polys
        ]
    for comp in acc:
        if not comp.is_integral_coeffs():
            raise IntegralityFailure("t-map component has fractional coefficients")
    # phantom law: Phi_n(T_a x) = sum_i p^i a_i^{p^(n-i)} Phi_{n-i}(x)
    for n in range(m):
        lhs = phi(p, n, acc)
        rhs = zero
        for i in range(n + 1):
            rhs = rhs + (avars[i] ** (p ** (n - i))) * phi(p, n - i, xvars) * (p ** i)
        if lhs != rhs:
            raise IntegralityFailure(f"t-map phantom law failed at ghost index {n}")
    return acc


def _var_names(m, op):
    if op in ("sum", "prod"):
        return [f"x{i}" for i in range(m)] + [f"y{i}" for i in range(m)]
    if op == "tmap":
        return [f"a{i}" for i in range(m)] + [f"x{i}" for i in range(m)]
    return [f"x{i}" for i in range(m)]


def derive_op_polys(p, m, op, max_m=None, cache_dir=None):
    if op not in OPS:
        raise ValueError(f"unknown op {op!r}")
    limit = max_m if max_m is not None else DEFAULT_MAX_M.get(p, 3)
    if m > limit:
        raise DerivationLimitExceeded(f"length {m} exceeds the derivation bound {limit} for p={p}")
    if op == "sum":
        polys = _derive_binary(p, m, lambda a, b: a + b)
    elif op == "prod":
        polys = _derive_binary(p, m, lambda a, b: a * b)
    elif op == "neg":
        polys = _derive_neg(p, m)
    elif op == "frobenius":
        if m < 2:
            raise DerivationLimitExceeded("frobenius table needs length >= 2")
        polys = _derive_frobenius(p, m)
    else:
        polys = _derive_tmap(p, m, cache_dir)
    return OpPolyTable(p, m, op, _var_names(m, op), polys)


# ---- disk cache -------------------------------------------------------------


def default_cache_dir():
    env = os.environ.get("WITTLAB_CACHE_DIR")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "wittlab", "tables")


def _table_path(cache_dir, p, m, op):
    return os.path.join(cache_dir, f"witt_p{p}_m{m}_{op}.json")


def save_table(table, cache_dir):
    os.makedirs(cache_dir, exist_ok=True)
    payload = {
        "format_version": FORMAT_VERSION,
        "p": table.p,
        "m": table.m,
        "op": table.op,
        "vars": list(table.var_names),
        "polys": [_poly_payload(q) for q in table.polys],
        "body_sha256": table.body_sha256,
    }
    path = _table_path(cache_dir, table.p, table.m, table.op)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(payload, fh, separators=(",", ":"), sort_keys=True)
    os.replace(tmp, path)
    return path


def load_table(cache_dir, p, m, op):
    path = _table_path(cache_dir, p, m, op)
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError):
        log.warning("unreadable table cache %s; re-deriving", path)
        return None
    if payload.get("format_version") != FORMAT_VERSION:
        log.warning("table cache %s has a stale format version; re-deriving", path)
        return None
    nv = len(payload["vars"])
    polys = [
        QPoly(nv, {tuple(e): _int_q(c) for e, c in entries})
        for entries in payload["polys"]
    ]
    table = OpPolyTable(payload["p"], payload["m"], payload["op"], payload["vars"], polys)
    if table.body_sha256 != payload.get("body_sha256"):
        log.warning("table cache %s failed its hash check; re-deriving", path)
        return None
    return table


def _int_q(text):
    from ..rings.rat import Q

    return Q(int(text))


def get_table(p, m, op, cache_dir=None, use_disk=True):
    """Fetch a table: memory, then disk, then fresh derivation (cached)."""
    key = (p, m, op)
    table = _registry.get(key)
    if table is not None:
        return table
    with _lock:
        table = _registry.get(key)
        if table is not None:
            return table
        cdir = cache_dir or default_cache_dir()
        if use_disk:
            table = load_table(cdir, p, m, op)
        if table is None:
            table = derive_op_polys(p, m, op, cache_dir=cdir if use_disk else None)
            if use_disk:
                save_table(table, cdir)
        _registry[key] = table
        return table


def clear_registry():
    with _lock:
        _registry.clear()
