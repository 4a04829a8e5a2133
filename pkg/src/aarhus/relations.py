"""Relation matrices, quotient bases and normal forms.

Sign conventions, fixed once here:

IHX.  Let an edge e join trivalent vertices u = (e, P, Q) and w = (e, R, S),
listed in cyclic order.  Put D2 with u = (Q, R, e), w = (e, P, S) and D3 with
u = (R, P, e), w = (e, Q, S).  The relator is D + D2 + D3.  Under a Lie
weight system this is the Jacobi identity
f_pqe f_ers + f_qre f_eps + f_rpe f_eqs = 0.

STU.  For attachments a below b, adjacent on one line, T has the original
order, U has a and b swapped, and S merges them into one attachment whose
stem leads to a new vertex with cyclic order (a's edge, b's edge, stem).
The relator is T - U - S.

AS is never a row: it is imposed by signed canonicalization.
"""

from __future__ import annotations

import fcntl
import hashlib
import os
import tempfile
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .canonical import canonical_form, sort_key
from .diagrams import ATT, TRI, Diagram, degree
from .enumerate import DEFAULT_CONFIG, enumerate_diagrams
from .errors import SpaceMismatch
from .gradedsum import GradedSum
from .linalg import Echelon, rank

SPACE_ALIASES = {"Aempty": "Aempty", "Aup": "AupX", "AupX": "AupX",
                 "B": "BX", "BX": "BX", "BplusX": "BX", "Bplus": "BX"}


def normalize_space(space: str) -> str:
    try:
        return SPACE_ALIASES[space]
    except KeyError:
        raise SpaceMismatch(f"unknown space {space!r}") from None


def _labels_for(space, labels):
    return () if space == "Aempty" else tuple(sorted(labels))


# -- relators ----------------------------------------------------------------

def _rewire(d: Diagram, stub_map, extra_edges, kinds=None):
    """Rebuild d, sending each half-edge in ``stub_map`` to its new position."""
    edges = []
    for a, b in d.edges:
        if a in stub_map or b in stub_map or a in extra_edges or b in extra_edges:
            continue
        edges.append((a, b))
    seen = set()
    for h, new in stub_map.items():
        other = d.partner(h)
        if h in seen:
            continue
        seen.add(h)
        if other in stub_map:
            seen.add(other)
            edges.append((new, stub_map[other]))
        else:
            edges.append((new, other))
    return Diagram(d.kinds if kinds is None else kinds, edges)


def ihx_relators(d: Diagram):
    """One relator per edge whose endpoints are two distinct trivalent vertices."""
    out = []
    for (u, i), (w, j) in d.edges:
        if u == w or d.kinds[u][0] != TRI or d.kinds[w][0] != TRI:
            continue
        e_u, e_w = (u, i), (w, j)
        P, Q = (u, (i + 1) % 3), (u, (i + 2) % 3)
        R, S = (w, (j + 1) % 3), (w, (j + 2) % 3)
        terms = []
        for layout in (
            {e_u: (u, 0), P: (u, 1), Q: (u, 2), e_w: (w, 0), R: (w, 1), S: (w, 2)},
            {Q: (u, 0), R: (u, 1), e_u: (u, 2), e_w: (w, 0), P: (w, 1), S: (w, 2)},
            {R: (u, 0), P: (u, 1), e_u: (u, 2), e_w: (w, 0), Q: (w, 1), S: (w, 2)},
        ):
            terms.append((1, _rewire(d, layout, ())))
        out.append(terms)
    return out


def stu_relators(d: Diagram):
    """One relator T - U - S per pair of adjacent attachments on one line."""
    out = []
    for x, pts in d.skeleton().items():
        for a, b in zip(pts, pts[1:]):
            pa, pb = d.kinds[a][2], d.kinds[b][2]
            kinds = list(d.kinds)
            kinds[a], kinds[b] = (ATT, x, pb), (ATT, x, pa)
            u = d.with_kinds(kinds)
            # S: a becomes the trivalent vertex, b becomes the merged attachment
            ha, hb = d.partner((a, 0)), d.partner((b, 0))
            skinds = list(d.kinds)
            skinds[a] = (TRI,)
            skinds[b] = (ATT, x, pa)
            edges = [e for e in d.edges if (a, 0) not in e and (b, 0) not in e]
            if ha == (b, 0):
                edges.append(((a, 0), (a, 1)))
            else:
                edges.append(((a, 0), ha))
                edges.append(((a, 1), hb))
            edges.append(((a, 2), (b, 0)))
            s = Diagram(skinds, edges)
            out.append([(1, d), (-1, u), (-1, s)])
    return out


def relators(d: Diagram, space: str):
    if space == "AupX":
        return stu_relators(d)
    return ihx_relators(d)


# -- quotient bases ------------------------------------------------------------

@dataclass
class RelationMatrix:
    columns: list
    rows: list = field(default_factory=list)


def spanning_set(space, deg, labels=(), config=DEFAULT_CONFIG):
    space = normalize_space(space)
    return [sc.canonical for sc in
            enumerate_diagrams(space, deg, labels, include_zero=True, config=config)]


def _signed_row(terms, index):
    row = {}
    for c, d in terms:
        sc = canonical_form(d)
        if sc.sign == 0:
            continue
        try:
            k = index[sc.canonical]
        except KeyError:
            raise SpaceMismatch("relator left the spanning set") from None
        row[k] = row.get(k, 0) + c * sc.sign
    return {k: v for k, v in row.items() if v}


def relation_matrix(space, deg, labels=(), config=DEFAULT_CONFIG) -> RelationMatrix:
    """Sparse integer relator rows over the spanning set (AS-zero columns unused)."""
    space = normalize_space(space)
    cols = spanning_set(space, deg, labels, config)
    index = {d: i for i, d in enumerate(cols)}
    m = RelationMatrix(cols)
    for d in cols:
        for terms in relators(d, space):
            row = _signed_row(terms, index)
            if row:
                m.rows.append(row)
    return m


@dataclass
class QuotientBasis:
    space: str
    labels: tuple
    degree: int
    basis: list
    table: dict

    def coords(self, d: Diagram):
        """Coordinates of a canonical diagram over the basis."""
        try:
            return self.table[d]
        except KeyError:
            raise SpaceMismatch(f"diagram not in the spanning set of {self.space} "
                                f"degree {self.degree}") from None

    def to_sum(self, coords, max_degree=None) -> GradedSum:
        return GradedSum._raw({b: Fraction(c) for b, c in zip(self.basis, coords)},
                              max_degree)

    @property
    def dim(self):
        return len(self.basis)


def _build(space, deg, labels, config):
    m = relation_matrix(space, deg, labels, config)
    ech = Echelon()
    for row in m.rows:
        ech.add(row)
    zero_cols = {i for i, d in enumerate(m.columns) if canonical_form(d).sign == 0}
    free = [i for i in range(len(m.columns)) if i not in ech.pivots and i not in zero_cols]
    pos = {c: k for k, c in enumerate(free)}
    solved = ech.solved()
    table = {}
    n = len(free)
    for i, d in enumerate(m.columns):
        vec = [Fraction(0)] * n
        if i in pos:
            vec[pos[i]] = Fraction(1)
        elif i in solved:
            for f, v in solved[i].items():
                if f in pos:
                    vec[pos[f]] += v
        table[d] = tuple(vec)
    return QuotientBasis(space, labels, deg, [m.columns[i] for i in free], table)


_MEM = {}
_LOCKS = {}
_LOCKS_GUARD = threading.Lock()
_CACHE_DIR = None


def set_cache_dir(path):
    """Persist quotient bases under ``path`` (None disables; env AARHUS_CACHE)."""
    global _CACHE_DIR
    _CACHE_DIR = path


def cache_dir():
    return _CACHE_DIR or os.environ.get("AARHUS_CACHE") or None


def _key_file(key):
    space, labels, deg = key
    digest = hashlib.sha256(repr(key).encode()).hexdigest()[:12]
    return f"{space}-d{deg}-{len(labels)}-{digest}.qb"


def _load_disk(key):
    root = cache_dir()
    if not root:
        return None
    path = os.path.join(root, _key_file(key))
    if not os.path.exists(path):
        return None
    from .io import parse_basis
    with open(path, encoding="utf-8") as fh:
        qb = parse_basis(fh.read())
    if (qb.space, qb.labels, qb.degree) != key:
        return None
    return qb


def _store_disk(key, qb):
    root = cache_dir()
    if not root:
        return
    from .io import serialize_basis
    os.makedirs(root, exist_ok=True)
    path = os.path.join(root, _key_file(key))
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(serialize_basis(qb))
    os.replace(tmp, path)


def quotient_basis(space, deg, labels=(), config=DEFAULT_CONFIG) -> QuotientBasis:
    space = normalize_space(space)
    labels = _labels_for(space, labels)
    key = (space, labels, deg)
    qb = _MEM.get(key)
    if qb is not None:
        return qb
    with _LOCKS_GUARD:
        lock = _LOCKS.setdefault(key, threading.Lock())
    with lock:
        qb = _MEM.get(key)
        if qb is not None:
            return qb
        root = cache_dir()
        if root:
            os.makedirs(root, exist_ok=True)
            lockpath = os.path.join(root, _key_file(key) + ".lock")
            with open(lockpath, "w") as lf:
                fcntl.flock(lf, fcntl.LOCK_EX)
                try:
                    qb = _load_disk(key)
                    if qb is None:
                        qb = _build(space, deg, labels, config)
                        _store_disk(key, qb)
                finally:
                    fcntl.flock(lf, fcntl.LOCK_UN)
        else:
            qb = _build(space, deg, labels, config)
        _MEM[key] = qb
    return qb


def clear_memory_cache():
    _MEM.clear()


def _space_of_terms(s: GradedSum):
    return {d.space_family() for d in s.terms}


def reduce(s: GradedSum, space, labels=()):
    """Coordinate vector per degree over the cached quotient bases."""
    space = normalize_space(space)
    labels = _labels_for(space, labels)
    out = {}
    for d, c in s.terms.items():
        if d.n and d.space_family() != space:
            raise SpaceMismatch(f"{d.space_family()} term in a {space} reduction")
        m = degree(d)
        qb = quotient_basis(space, m, labels)
        vec = out.setdefault(m, [Fraction(0)] * qb.dim)
        for i, x in enumerate(qb.coords(d)):
            if x:
                vec[i] += c * x
    return {m: tuple(v) for m, v in sorted(out.items())}


def normal_form(s: GradedSum, space, labels=()) -> GradedSum:
    """Rewrite ``s`` over the quotient bases."""
    space = normalize_space(space)
    labels = _labels_for(space, labels)
    acc = {}
    for m, vec in reduce(s, space, labels).items():
        qb = quotient_basis(space, m, labels)
        for b, x in zip(qb.basis, vec):
            if x:
                acc[b] = acc.get(b, 0) + x
    return GradedSum._raw(acc, s.max_degree)


def equal_mod_relations(a: GradedSum, b: GradedSum, space, labels=()):
    return normal_form(a - b, space, labels).is_zero()


def dimension(space, deg, labels=(), config=DEFAULT_CONFIG) -> int:
    return quotient_basis(space, deg, labels, config).dim


def primitive_dimension(deg, config=DEFAULT_CONFIG) -> int:
    """Dimension of the span of connected manifold diagrams in degree ``deg``."""
    if deg == 0:
        return 0
    qb = quotient_basis("Aempty", deg, (), config)
    vecs = [qb.table[d] for d in qb.table
            if d.n and len(d.components()) == 1]
    return rank(vecs)


# -- STU without imposing AS ------------------------------------------------

def oriented_key(d: Diagram):
    """Orientation class of d: (canonical, sign) without identifying opposite signs."""
    sc = canonical_form(d)
    return (sc.canonical, sc.sign)


def oriented_row(terms, index):
    row = {}
    for c, d in terms:
        k = oriented_key(d)
        if k not in index:
            index[k] = len(index)
        i = index[k]
        row[i] = row.get(i, 0) + c
    return {k: v for k, v in row.items() if v}


def stu_only_span(deg, lines, config=DEFAULT_CONFIG):
    """Echelon of STU rows on oriented diagrams, with no AS identification.

    Returns ``(echelon, index)`` where index maps oriented keys to columns.
    Columns are assigned in sorted order of the oriented keys.
    """
    cols = spanning_set("AupX", deg, lines, config)
    reps = []
    for d in cols:
        reps.append(d)
        tri = d.trivalent()
        if tri and canonical_form(d).sign != 0:
            reps.append(d.flip(tri[0]))
    keys = sorted({oriented_key(d) for d in reps},
                  key=lambda k: (sort_key(k[0]), k[1]))
    index = {k: i for i, k in enumerate(keys)}
    ech = Echelon()
    for d in reps:
        for terms in stu_relators(d):
            row = oriented_row(terms, index)
            if row:
                ech.add(row)
    return ech, index
