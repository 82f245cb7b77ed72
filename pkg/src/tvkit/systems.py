"""6j-systems: colour weights plus a symbol table.

Symbol tables are sparse and keyed by the lexicographically smallest
member of each tetrahedral-symmetry orbit; zero entries are absent.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

import mpmath

from .cyclotomic import DEFAULT_PRECISION, QContext
from .sixj import (canonical_key, face_triples, is_admissible, sixj,
                   tetrahedral_orbit)

PATTERNS = ("printed", "book")


class SystemDataError(ValueError):
    pass


@dataclass
class SixJSystem:
    order: int
    weights: tuple
    symbols: dict
    label: str = ""
    generator: dict = field(default_factory=dict)
    precision: int = DEFAULT_PRECISION
    admissible: Optional[frozenset] = None
    exact_weights: Optional[tuple] = None
    exact_symbols: Optional[dict] = None

    def __post_init__(self):
        nc = self.order - 1
        if len(self.weights) != nc:
            raise SystemDataError(f"expected {nc} weights for order {self.order}, got {len(self.weights)}")
        for key in self.symbols:
            if len(key) != 6 or not all(0 <= c < nc for c in key):
                raise SystemDataError(f"symbol key {key} outside C^6")
            if canonical_key(key) != key:
                raise SystemDataError(f"symbol key {key} is not canonical")
        if self.admissible is None:
            adm = set()
            for key in self.symbols:
                for t in face_triples(*key):
                    adm.add(tuple(sorted(t)))
            self.admissible = frozenset(adm)
        self._full = None

    @property
    def colours(self) -> range:
        return range(self.order - 1)

    def symbol(self, *key):
        return self.symbols.get(canonical_key(key), 0)

    def full_table(self) -> dict:
        """Every nonzero 6-tuple (all symmetry images) mapped to its value."""
        if self._full is None:
            full = {}
            for key, v in self.symbols.items():
                for o in tetrahedral_orbit(key):
                    full[o] = v
            self._full = full
        return self._full

    def triple_ok(self, a, b, c) -> bool:
        return tuple(sorted((a, b, c))) in self.admissible


@dataclass
class RelationReport:
    total: int
    max_residual: object
    worst_tuple: Optional[tuple]
    failures: list
    tolerance: object
    pattern: str

    @property
    def passed(self) -> bool:
        return not self.failures


# --- builders ---

def _tv_admissible(r: int) -> frozenset:
    return frozenset(t for t in itertools.combinations_with_replacement(range(r - 1), 3)
                     if is_admissible(r, *t))


def build_tv(ctx: QContext, flip: bool = False) -> SixJSystem:
    """Weights (-1)^i [i+1] and every nonzero 6j symbol of order ctx.r."""
    r = ctx.r
    exact_w = tuple(ctx.qint(i + 1) * (-1) ** i for i in range(r - 1))
    exact = {}
    seen = set()
    for key in itertools.product(range(r - 1), repeat=6):
        ck = canonical_key(key)
        if ck in seen:
            continue
        seen.add(ck)
        v = sixj(ctx, *ck, flip=flip)
        if not v.is_zero():
            exact[ck] = v
    p = ctx.precision
    with mpmath.workdps(p + 10):
        weights = tuple(w.embed(p) for w in exact_w)
        symbols = {k: v.embed(p) for k, v in exact.items()}
    return SixJSystem(r, weights, symbols, label=f"tv:{r}",
                      generator={"r": r, "m": ctx.m, "precision": p, "flip": flip},
                      precision=p, admissible=_tv_admissible(r),
                      exact_weights=exact_w, exact_symbols=exact)


def homologically_trivial(sys: SixJSystem) -> SixJSystem:
    r = sys.order
    if r % 2 == 0:
        raise SystemDataError(f"homologically trivial part needs odd order, got {r}")
    half = (r + 1) // 2
    weights = tuple(sys.weights[2 * i] for i in range(half - 1))
    symbols = {tuple(c // 2 for c in k): v for k, v in sys.symbols.items()
               if all(c % 2 == 0 for c in k)}
    exact_w = exact_s = None
    if sys.exact_weights is not None:
        exact_w = tuple(sys.exact_weights[2 * i] for i in range(half - 1))
        exact_s = {tuple(c // 2 for c in k): v for k, v in sys.exact_symbols.items()
                   if all(c % 2 == 0 for c in k)}
    adm = frozenset(tuple(c // 2 for c in t) for t in sys.admissible
                    if all(c % 2 == 0 for c in t))
    return SixJSystem(half, weights, symbols, label=f"th:{r}",
                      generator=dict(sys.generator, source=sys.label),
                      precision=sys.precision, admissible=adm,
                      exact_weights=exact_w, exact_symbols=exact_s)


def _sqrt(x):
    return mpmath.sqrt(x)  # principal branch; imaginary for negative reals


def epsilon_value(branch: int = 1, precision: int = DEFAULT_PRECISION):
    """Root of x^2 - x - 1: the positive one for branch=+1, negative for -1."""
    with mpmath.workdps(precision + 10):
        return (1 + branch * mpmath.sqrt(5)) / 2


def epsilon_system(branch: int = 1, precision: int = DEFAULT_PRECISION) -> SixJSystem:
    if branch not in (1, -1):
        raise SystemDataError("branch must be +1 or -1")
    with mpmath.workdps(precision + 10):
        e = epsilon_value(branch, precision)
        symbols = {
            (0, 0, 0, 0, 0, 0): mpmath.mpc(1),
            (0, 0, 0, 1, 1, 1): mpmath.mpc(1 / _sqrt(e)),
            (0, 1, 1, 0, 1, 1): mpmath.mpc(1 / e),
            (0, 1, 1, 1, 1, 1): mpmath.mpc(1 / e),
            (1, 1, 1, 1, 1, 1): mpmath.mpc(-1 / e ** 2),
        }
        weights = (mpmath.mpc(1), mpmath.mpc(e))
    return SixJSystem(3, weights, symbols, label="epsilon",
                      generator={"branch": branch, "precision": precision}, precision=precision)


def t_roots(precision: int = DEFAULT_PRECISION) -> tuple:
    """Real roots of x^3 - 2x^2 - x + 1 in decreasing order (gamma_1 > gamma_2 > gamma_3)."""
    with mpmath.workdps(precision + 20):
        roots = mpmath.polyroots([1, -2, -1, 1], maxsteps=200, extraprec=2 * precision)
        return tuple(sorted((mpmath.re(x) for x in roots), reverse=True))


def gamma_symbols(g) -> dict:
    s, s1 = _sqrt(g), _sqrt(g - 1)
    return {
        (0, 0, 0, 0, 0, 0): 1,
        (0, 0, 0, 1, 1, 1): -1 / s,
        (0, 0, 0, 2, 2, 2): s1 / s,
        (0, 1, 1, 0, 1, 1): 1 / g,
        (0, 1, 1, 1, 1, 1): 1 / g,
        (0, 1, 1, 1, 2, 2): -s1 / g,
        (0, 1, 1, 2, 1, 1): 1 / g,
        (0, 1, 1, 2, 2, 2): -s1 / g,
        (0, 2, 2, 0, 2, 2): (g - 1) / g,
        (0, 2, 2, 1, 2, 2): (g - 1) / g,
        (1, 1, 1, 1, 1, 1): 1 / g ** 3,
        (1, 1, 1, 1, 1, 2): -1 / (g * (g - 1)),
        (1, 1, 1, 1, 2, 2): -1 / (g * s),
        (1, 1, 1, 2, 2, 2): (g - 1) / (g * s),
        (1, 1, 2, 1, 1, 2): 1 / g ** 2,
        (1, 1, 2, 1, 2, 2): 1 / g,
        (1, 2, 2, 1, 2, 2): -(g - 1) / g ** 2,
    }


def gamma_system(root_index: int = 1, precision: int = DEFAULT_PRECISION, value=None) -> SixJSystem:
    """The order-4 system written in terms of a root gamma of x^3 - 2x^2 - x + 1.

    ``value`` overrides the root (e.g. an embedded [3]_7).
    """
    if value is None:
        if root_index not in (1, 2, 3):
            raise SystemDataError("root_index must be 1, 2 or 3")
        value = t_roots(precision)[root_index - 1]
    with mpmath.workdps(precision + 10):
        g = mpmath.mpf(mpmath.re(value))
        symbols = {k: mpmath.mpc(v) for k, v in gamma_symbols(g).items()}
        weights = (mpmath.mpc(1), mpmath.mpc(g), mpmath.mpc(g / (g - 1)))
    return SixJSystem(4, weights, symbols, label=f"gamma:{root_index}",
                      generator={"root_index": root_index, "precision": precision},
                      precision=precision)


def trivial_system(precision: int = DEFAULT_PRECISION) -> SixJSystem:
    """Order 2: the single colour 0 with weight 1 and symbol 1."""
    return SixJSystem(2, (mpmath.mpc(1),), {(0,) * 6: mpmath.mpc(1)}, label="trivial",
                      precision=precision)


# --- the defining relation ---

def relation_keys(pattern: str, i, j, k, l, m, n, l2, m2, n2, z):
    # the two patterns differ only in the middle factor: <j l n|z n' m'> as
    # originally printed, <j l n|z n' l'> as produced by a 2-3 move
    if pattern == "printed":
        return ((i, m, n, z, n2, m2), (j, l, n, z, n2, m2), (k, l, m, z, m2, l2))
    if pattern == "book":
        return ((i, m, n, z, n2, m2), (j, l, n, z, n2, l2), (k, l, m, z, m2, l2))
    raise SystemDataError(f"unknown relation pattern {pattern!r}; use one of {PATTERNS}")


def verify_relation(sys: SixJSystem, tolerance=None, pattern: str = "printed") -> RelationReport:
    """Check <ijk|lmn><ijk|l'm'n'> = sum_z w_z <..><..><..> over all of C^9."""
    if pattern not in PATTERNS:
        raise SystemDataError(f"unknown relation pattern {pattern!r}; use one of {PATTERNS}")
    nc = sys.order - 1
    if tolerance is None:
        tolerance = mpmath.mpf(10) ** (-(sys.precision // 2))
    tab = sys.full_table()
    get = tab.get
    w = sys.weights
    zs = range(nc)
    worst, worst_t, failures, total = mpmath.mpf(0), None, [], 0
    with mpmath.workdps(sys.precision + 10):
        for t in itertools.product(range(nc), repeat=9):
            i, j, k, l, m, n, l2, m2, n2 = t
            total += 1
            a = get((i, j, k, l, m, n))
            lhs = a * get((i, j, k, l2, m2, n2), 0) if a is not None else 0
            rhs = 0
            for z in zs:
                k1, k2, k3 = relation_keys(pattern, i, j, k, l, m, n, l2, m2, n2, z)
                x = get(k1)
                if x is None:
                    continue
                y = get(k2)
                if y is None:
                    continue
                u = get(k3)
                if u is None:
                    continue
                rhs += w[z] * x * y * u
            res = abs(lhs - rhs)
            if res > worst:
                worst, worst_t = res, t
            if res > tolerance:
                failures.append(t)
    failures.sort()
    return RelationReport(total, worst, worst_t, failures, tolerance, pattern)


# --- comparison and sign gauges ---

@dataclass
class EqualityReport:
    equal: bool
    first_difference: Optional[tuple] = None
    detail: str = ""
    gauge: tuple = ()

    def __bool__(self):
        return self.equal


def _gauge_solve(equations, variables):
    """Solve XOR equations (mask, bit) over GF(2); None when inconsistent."""
    pivots = {}
    for mask, bit in equations:
        for p, (pm, pb) in pivots.items():
            if mask >> p & 1:
                mask ^= pm
                bit ^= pb
        if not mask:
            if bit:
                return None
            continue
        p = mask.bit_length() - 1
        for q, (qm, qb) in list(pivots.items()):
            if qm >> p & 1:
                pivots[q] = (qm ^ mask, qb ^ bit)
        pivots[p] = (mask, bit)
    sol = 0
    for p, (pm, pb) in pivots.items():
        if pb:
            sol |= 1 << p
    return tuple(v for idx, v in enumerate(variables) if sol >> idx & 1)


def gauge_sign(key, flipped) -> int:
    s = 1
    for t in face_triples(*key):
        if tuple(sorted(t)) in flipped:
            s = -s
    return s


def apply_gauge(sys: SixJSystem, flipped) -> SixJSystem:
    """Negate the Delta root of each triple in ``flipped``.

    Each symbol picks up one sign per face; state sums and the defining
    relation are unchanged because every face occurs twice.
    """
    flipped = frozenset(tuple(sorted(t)) for t in flipped)
    with mpmath.workdps(sys.precision + 10):
        symbols = {k: v if gauge_sign(k, flipped) > 0 else -v for k, v in sys.symbols.items()}
    return SixJSystem(sys.order, sys.weights, symbols, label=sys.label,
                      generator=dict(sys.generator, gauge=sorted(flipped)),
                      precision=sys.precision, admissible=sys.admissible)


def global_flip(sys: SixJSystem) -> SixJSystem:
    """Flip the root of every admissible triple except (0,0,0)."""
    return apply_gauge(sys, [t for t in sys.admissible if t != (0, 0, 0)])


def systems_equal(a: SixJSystem, b: SixJSystem, tolerance=None, gauge: bool = False) -> EqualityReport:
    """Entrywise comparison of weights and symbols.

    With ``gauge`` the symbols may differ by a Delta-root sign choice, which
    is solved for and reported.
    """
    if a.order != b.order:
        raise SystemDataError(f"order mismatch: {a.order} vs {b.order}")
    if tolerance is None:
        tolerance = mpmath.mpf(10) ** (-(min(a.precision, b.precision) // 2))
    with mpmath.workdps(max(a.precision, b.precision) + 10):
        for i, (x, y) in enumerate(zip(a.weights, b.weights)):
            if abs(x - y) > tolerance:
                return EqualityReport(False, ("weight", i), f"w_{i}: {mpmath.nstr(x, 15)} vs {mpmath.nstr(y, 15)}")
        keys = sorted(set(a.symbols) | set(b.symbols))
        variables = sorted(a.admissible | b.admissible)
        index = {t: n for n, t in enumerate(variables)}
        equations = []
        for key in keys:
            x, y = a.symbols.get(key, 0), b.symbols.get(key, 0)
            if abs(x - y) <= tolerance:
                bit = 0
            elif gauge and abs(x + y) <= tolerance:
                bit = 1
            else:
                return EqualityReport(False, key, f"{key}: {mpmath.nstr(x, 15)} vs {mpmath.nstr(y, 15)}")
            if not gauge or abs(x) <= tolerance:
                continue
            mask = 0
            for t in face_triples(*key):
                mask ^= 1 << index[tuple(sorted(t))]
            equations.append((mask, bit))
        if not gauge:
            return EqualityReport(True)
        flipped = _gauge_solve(equations, variables)
        if flipped is None:
            return EqualityReport(False, None, "no consistent Delta sign gauge")
        aligned = apply_gauge(b, flipped)
        for key in keys:
            x, y = a.symbols.get(key, 0), aligned.symbols.get(key, 0)
            if abs(x - y) > tolerance:
                return EqualityReport(False, key, f"{key} differs after gauge")
        return EqualityReport(True, gauge=flipped)


# --- serialization ---

def _dec(x, precision: int) -> str:
    return mpmath.nstr(x, precision, strip_zeros=False, min_fixed=1, max_fixed=0)


def export_system(sys: SixJSystem) -> str:
    p = sys.precision
    with mpmath.workdps(p + 10):
        weights = []
        for w in sys.weights:
            w = mpmath.mpc(w)
            if abs(w.imag) > mpmath.mpf(10) ** (-(p // 2)):
                raise SystemDataError(f"weight {w} is not real")
            weights.append(_dec(w.real, p))
        symbols = []
        for key in sorted(sys.symbols):
            v = mpmath.mpc(sys.symbols[key])
            symbols.append({"key": list(key), "re": _dec(v.real, p), "im": _dec(v.imag, p)})
    doc = {
        "order": sys.order,
        "label": sys.label,
        "generator": _jsonable(sys.generator),
        "precision": p,
        "weights": weights,
        "symbols": symbols,
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)


def import_system(text: str) -> SixJSystem:
    doc = json.loads(text)
    p = int(doc.get("precision", DEFAULT_PRECISION))
    with mpmath.workdps(p + 10):
        weights = tuple(mpmath.mpc(mpmath.mpf(w)) for w in doc["weights"])
        symbols = {}
        for entry in doc["symbols"]:
            key = tuple(int(c) for c in entry["key"])
            ck = canonical_key(key)
            v = mpmath.mpc(mpmath.mpf(entry["re"]), mpmath.mpf(entry["im"]))
            if ck in symbols and symbols[ck] != v:
                raise SystemDataError(f"conflicting values in the symmetry orbit of {ck}")
            symbols[ck] = v
    return SixJSystem(int(doc["order"]), weights, symbols, label=doc.get("label", ""),
                      generator=doc.get("generator", {}), precision=p)


def named_system(name_spec: str, m: int = 1, precision: int = DEFAULT_PRECISION) -> SixJSystem:
    """Parse ``tv:R``, ``th:R``, ``epsilon[:-1]``, ``gamma:K`` or ``trivial``."""
    name, _, arg = name_spec.partition(":")
    if name == "tv":
        return build_tv(QContext(int(arg), m, precision))
    if name == "th":
        return homologically_trivial(build_tv(QContext(int(arg), m, precision)))
    if name == "epsilon":
        return epsilon_system(int(arg) if arg else 1, precision)
    if name == "gamma":
        return gamma_system(int(arg) if arg else 1, precision)
    if name == "trivial":
        return trivial_system(precision)
    raise SystemDataError(f"unknown system {name_spec!r}")
