"""Closed triangulations, edge classes and Turaev-Viro state sums.

The ``.tri`` text format::

    # comment
    tets 2
    tet 0: 1/0123 1/0123 1/0123 1/0123
    tet 1: 0/0123 0/0123 0/0123 0/0123

Entry k of a tetrahedron glues its face k (opposite vertex k) to the given
tetrahedron; the permutation lists the images of vertices 0, 1, 2, 3.
"""

from __future__ import annotations

import itertools
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import mpmath

from .systems import SixJSystem

# edge order feeding the 6j symbol <e01 e02 e12 | e23 e13 e03>
EDGES = ((0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3))
EDGE_INDEX = {e: n for n, e in enumerate(EDGES)}
DEFAULT_CAP = 10 ** 8


class TriangulationError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class EnumerationBudgetExceeded(RuntimeError):
    pass


def _edge(a, b):
    return EDGE_INDEX[(a, b) if a < b else (b, a)]


def _face_edges(k: int) -> tuple:
    vs = [v for v in range(4) if v != k]
    return tuple(_edge(a, b) for a, b in itertools.combinations(vs, 2))


FACE_EDGES = tuple(_face_edges(k) for k in range(4))


def _inverse(p):
    inv = [0] * 4
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


@dataclass
class Triangulation:
    gluings: list  # gluings[t][f] = (target tet, perm tuple)
    name: str = ""

    @property
    def tets(self) -> int:
        return len(self.gluings)

    def validate(self) -> "Triangulation":
        n = self.tets
        if n == 0:
            raise TriangulationError("no tetrahedra")
        for t, row in enumerate(self.gluings):
            if len(row) != 4:
                raise TriangulationError(f"tetrahedron {t} needs 4 face entries")
            for f, entry in enumerate(row):
                if entry is None:
                    raise TriangulationError(f"boundary face: tetrahedron {t} face {f} is unglued")
                u, p = entry
                if not 0 <= u < n:
                    raise TriangulationError(f"tetrahedron {t} face {f} glued to missing tetrahedron {u}")
                if sorted(p) != [0, 1, 2, 3]:
                    raise TriangulationError(f"tetrahedron {t} face {f}: {p} is not a permutation")
                g = p[f]
                if u == t and g == f:
                    raise TriangulationError(f"tetrahedron {t} face {f} glued to itself")
                back = self.gluings[u][g]
                if back is None or back[0] != t or tuple(back[1]) != _inverse(p):
                    raise TriangulationError(
                        f"gluing is not an involution: ({t},{f}) -> ({u},{g}) but ({u},{g}) -> {back}")
        return self

    def to_text(self) -> str:
        lines = []
        if self.name:
            lines.append(f"# {self.name}")
        lines.append(f"tets {self.tets}")
        for t, row in enumerate(self.gluings):
            entries = " ".join(f"{u}/{''.join(map(str, p))}" for u, p in row)
            lines.append(f"tet {t}: {entries}")
        return "\n".join(lines) + "\n"


_TET_LINE = re.compile(r"^tet\s+(\d+)\s*:\s*(.*)$")
_ENTRY = re.compile(r"^(\d+)/([0-3]{4})$")


def parse_triangulation(text: str, name: str = "") -> Triangulation:
    count = None
    rows: dict[int, list] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if count is None:
            m = re.fullmatch(r"tets\s+(\d+)", line)
            if not m:
                raise TriangulationError("expected 'tets <n>'", lineno)
            count = int(m.group(1))
            continue
        m = _TET_LINE.match(line)
        if not m:
            raise TriangulationError(f"cannot parse {line!r}", lineno)
        t = int(m.group(1))
        if t in rows:
            raise TriangulationError(f"tetrahedron {t} listed twice", lineno)
        if t >= count:
            raise TriangulationError(f"tetrahedron {t} out of range for tets {count}", lineno)
        entries = m.group(2).split()
        if len(entries) != 4:
            raise TriangulationError(f"tetrahedron {t} needs 4 face entries, got {len(entries)}", lineno)
        row = []
        for f, e in enumerate(entries):
            em = _ENTRY.match(e)
            if not em:
                raise TriangulationError(f"bad gluing {e!r}", lineno)
            perm = tuple(int(c) for c in em.group(2))
            if sorted(perm) != [0, 1, 2, 3]:
                raise TriangulationError(f"{em.group(2)} is not a permutation", lineno)
            row.append((int(em.group(1)), perm))
        rows[t] = row
    if count is None:
        raise TriangulationError("empty input")
    missing = [t for t in range(count) if t not in rows]
    if missing:
        raise TriangulationError(f"tetrahedra {missing} have no gluing line")
    tri = Triangulation([rows[t] for t in range(count)], name).validate()
    edge_classes(tri)  # Euler check
    return tri


def read_triangulation(path) -> Triangulation:
    with open(path, encoding="utf-8") as fh:
        return parse_triangulation(fh.read(), name=str(path))


# --- edge and vertex classes ---

class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.parity = [0] * n

    def find(self, x):
        par = 0
        root = x
        while self.parent[root] != root:
            par ^= self.parity[root]
            root = self.parent[root]
        # path compression with parity
        cur, cur_par = x, par
        while self.parent[cur] != cur:
            nxt, p = self.parent[cur], self.parity[cur]
            self.parent[cur], self.parity[cur] = root, cur_par
            cur, cur_par = nxt, cur_par ^ p
        return root, par

    def union(self, a, b, rel) -> bool:
        """Record parity(a) ^ parity(b) = rel; False on contradiction."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == rel
        if ra > rb:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ rel
        return True


@dataclass
class EdgeClassTable:
    classes: list  # class -> [(tet, edge index, orientation +-1)]
    edge_class: list  # edge_class[t][e] -> class index
    vertex_count: int
    vertex_class: list
    euler: int = 0

    @property
    def edge_count(self) -> int:
        return len(self.classes)


def edge_classes(tri: Triangulation) -> EdgeClassTable:
    n = tri.tets
    uf = _UnionFind(6 * n)
    vf = _UnionFind(4 * n)
    for t, row in enumerate(tri.gluings):
        for f, (u, p) in enumerate(row):
            for v in range(4):
                if v != f:
                    vf.union(4 * t + v, 4 * u + p[v], 0)
            vs = [v for v in range(4) if v != f]
            for a, b in itertools.combinations(vs, 2):
                pa, pb = p[a], p[b]
                rel = 0 if pa < pb else 1
                if not uf.union(6 * t + _edge(a, b), 6 * u + _edge(pa, pb), rel):
                    raise TriangulationError(f"edge {a}{b} of tetrahedron {t} is identified with itself reversed")
    roots: dict[int, int] = {}
    classes: list = []
    edge_class = [[0] * 6 for _ in range(n)]
    for slot in range(6 * n):
        root, par = uf.find(slot)
        if root not in roots:
            roots[root] = len(classes)
            classes.append([])
        c = roots[root]
        t, e = divmod(slot, 6)
        classes[c].append((t, e, -1 if par else 1))
        edge_class[t][e] = c
    vroots: dict[int, int] = {}
    vertex_class = [[0] * 4 for _ in range(n)]
    for slot in range(4 * n):
        root, _ = vf.find(slot)
        vroots.setdefault(root, len(vroots))
        t, v = divmod(slot, 4)
        vertex_class[t][v] = vroots[root]
    V, E, F, T = len(vroots), len(classes), 2 * n, n
    chi = V - E + F - T
    if chi != 0:
        raise TriangulationError(
            f"Euler characteristic V - E + F - T = {V} - {E} + {F} - {T} = {chi}, expected 0")
    return EdgeClassTable(classes, edge_class, V, vertex_class, chi)


# --- Pachner moves ---

def _rebuild(tri: Triangulation, removed: set, new_tets: list, rep: dict,
             internal: list) -> Triangulation:
    """Assemble a triangulation after a local move.

    ``new_tets`` are placeholders; ``rep[(old_t, old_f)] = (new_id, new_f, sigma)``
    says which new face replaces an external old face, with sigma mapping new
    vertex positions to old vertex positions. ``internal`` lists new-new gluings.
    """
    keep = [t for t in range(tri.tets) if t not in removed]
    index = {t: i for i, t in enumerate(keep)}
    base = len(keep)
    gl = [[None] * 4 for _ in range(base + len(new_tets))]

    def locate(t, f):
        if (t, f) in rep:
            nid, nf, sigma = rep[(t, f)]
            return base + nid, nf, sigma
        return index[t], f, (0, 1, 2, 3)

    for t, row in enumerate(tri.gluings):
        for f, (u, p) in enumerate(row):
            if t in removed and (t, f) not in rep:
                continue
            a, fa, s1 = locate(t, f)
            b, fb, s2 = locate(u, p[f])
            inv2 = _inverse(s2)
            perm = tuple(inv2[p[s1[v]]] for v in range(4))
            gl[a][fa] = (b, perm)
    for (x, fx, y, fy, perm) in internal:
        gl[base + x][fx] = (base + y, tuple(perm))
        gl[base + y][fy] = (base + x, _inverse(perm))
    return Triangulation(gl, tri.name).validate()


def _internal_gluings(names: list) -> list:
    """Glue faces of new tetrahedra that share three vertex names."""
    out = []
    for x, nx in enumerate(names):
        for y, ny in enumerate(names):
            if y <= x:
                continue
            common = set(nx) & set(ny)
            if len(common) != 3:
                continue
            (ox,) = set(nx) - common
            (oy,) = set(ny) - common
            fx, fy = nx.index(ox), ny.index(oy)
            perm = [0] * 4
            for v, name in enumerate(nx):
                perm[v] = ny.index(oy if name == ox else name)
            out.append((x, fx, y, fy, perm))
    return out


def pachner_1_4(tri: Triangulation, t: int = 0) -> Triangulation:
    """Cone tetrahedron t from a new interior vertex."""
    names = [[("v" if j == k else j) for j in range(4)] for k in range(4)]
    rep = {(t, k): (k, k, (0, 1, 2, 3)) for k in range(4)}
    return _rebuild(tri, {t}, names, rep, _internal_gluings(names))


def pachner_2_3(tri: Triangulation, t: int = 0, f: int = 0) -> Triangulation:
    """Replace the two tetrahedra meeting at face f of t by three around a new edge."""
    u, p = tri.gluings[t][f]
    if u == t:
        raise TriangulationError("2-3 move needs two distinct tetrahedra")
    face = [v for v in range(4) if v != f]
    names, rep = [], {}
    for c in face:
        uw = [v for v in face if v != c]
        nid = len(names)
        names.append(["A", "B", uw[0], uw[1]])
        # face opposite B is face c of t; opposite A is face p[c] of u
        rep[(t, c)] = (nid, 1, (f, c, uw[0], uw[1]))
        rep[(u, p[c])] = (nid, 0, (p[c], p[f], p[uw[0]], p[uw[1]]))
    return _rebuild(tri, {t, u}, names, rep, _internal_gluings(names))


# --- colourings and state sums ---

@dataclass
class StateSumOptions:
    normalization: str = "squares"  # N = sum w_i^2; "linear" uses sum w_i
    edge_exponent: int = 1
    colour_filter: Optional[Callable[[int], bool]] = None
    cap: int = DEFAULT_CAP
    threads: int = 1


def even_filter() -> Callable[[int], bool]:
    return lambda c: c % 2 == 0


def allowed_colours(sys: SixJSystem, colour_filter=None) -> list[int]:
    return [c for c in sys.colours if colour_filter is None or colour_filter(c)]


class _Plan:
    """Class order and the faces completed by each assignment step."""

    def __init__(self, tri: Triangulation, table: EdgeClassTable):
        self.nclass = table.edge_count
        checks = [set() for _ in range(self.nclass)]
        for t in range(tri.tets):
            for f in range(4):
                cls = tuple(sorted(table.edge_class[t][e] for e in FACE_EDGES[f]))
                # tested as soon as the last of its classes is coloured
                checks[cls[-1]].add(cls)
        self.checks = [sorted(c) for c in checks]


def _enumerate(plan: _Plan, sys: SixJSystem, colours, prefix, cap, counter) -> Iterator[tuple]:
    n = plan.nclass
    assign = list(prefix) + [0] * (n - len(prefix))
    adm = sys.admissible

    def ok(pos):
        for a, b, c in plan.checks[pos]:
            if tuple(sorted((assign[a], assign[b], assign[c]))) not in adm:
                return False
        return True

    for pos in range(len(prefix)):
        if not ok(pos):
            return

    def rec(pos):
        if pos == n:
            yield tuple(assign)
            return
        for c in colours:
            counter[0] += 1
            if counter[0] > cap:
                raise EnumerationBudgetExceeded(f"enumeration exceeded {cap} partial nodes")
            assign[pos] = c
            if ok(pos):
                yield from rec(pos + 1)

    yield from rec(len(prefix))


def enumerate_colourings(tri: Triangulation, sys: SixJSystem, colour_filter=None,
                         cap: int = DEFAULT_CAP) -> Iterator[tuple]:
    """Admissible colourings of the edge classes, in lexicographic order."""
    table = edge_classes(tri)
    plan = _Plan(tri, table)
    yield from _enumerate(plan, sys, allowed_colours(sys, colour_filter), (), cap, [0])


def _branch_sum(args):
    tri, sys, opts_tuple, first = args
    normalization, p, colours, cap = opts_tuple
    table = edge_classes(tri)
    plan = _Plan(tri, table)
    full = sys.full_table()
    w = sys.weights
    ec = table.edge_class
    tets = range(tri.tets)
    counter = [0]
    with mpmath.workdps(sys.precision + 10):
        total = mpmath.mpc(0)
        prefix = (first,) if plan.nclass else ()
        for col in _enumerate(plan, sys, colours, prefix, cap, counter):
            term = mpmath.mpc(1)
            for c in col:
                term *= w[c] ** p
            for t in tets:
                row = ec[t]
                v = full.get(tuple(col[row[e]] for e in range(6)))
                if v is None:
                    term = 0
                    break
                term *= v
            total += term
    return total, counter[0]


def state_sum(tri: Triangulation, sys: SixJSystem, options: Optional[StateSumOptions] = None):
    """N^-V * sum over colourings of prod_edges w^p * prod_tets <e01 e02 e12|e23 e13 e03>."""
    opts = options or StateSumOptions()
    if opts.normalization not in ("squares", "linear"):
        raise ValueError(f"unknown normalization {opts.normalization!r}")
    if opts.edge_exponent not in (1, 2):
        raise ValueError("edge exponent must be 1 or 2")
    table = edge_classes(tri)
    colours = allowed_colours(sys, opts.colour_filter)
    packed = (opts.normalization, opts.edge_exponent, colours, opts.cap)
    jobs = [(tri, sys, packed, c) for c in colours] if table.edge_count else [(tri, sys, packed, None)]
    if opts.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=opts.threads) as pool:
            parts = list(pool.map(_branch_sum, jobs))
    else:
        parts = [_branch_sum(j) for j in jobs]
    with mpmath.workdps(sys.precision + 10):
        if sum(n for _, n in parts) > opts.cap:
            raise EnumerationBudgetExceeded(f"enumeration exceeded {opts.cap} partial nodes")
        total = mpmath.mpc(0)
        for part, _ in parts:  # fixed order: by colour of the first edge class
            total += part
        if opts.normalization == "squares":
            N = sum(sys.weights[c] ** 2 for c in colours)
        else:
            N = sum(sys.weights[c] for c in colours)
        return total / N ** table.vertex_count
