"""Text codecs: one container format with a manifest header and a kind tag.

    aarhus-format 1
    kind gradedsum          # diagram | gradedsum | matrix | liedata | pd | basis
    space B                 # Aempty | Aup | B
    labels x y
    truncate 3              # or 'none'

Diagram blocks list ``vertices n``, then ``leg``, ``internal`` and ``edge``
lines, optional ``skeleton`` lines, and close with ``end``.  Serialization
is canonical, so text round-trips byte for byte.  Matrix and Lie files may
omit the header.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .diagrams import ATT, LEG, TRI, Diagram, validate
from .errors import ParseError, SpaceMismatch, VersionMismatch
from .gradedsum import GradedSum

FORMAT_VERSION = "1"
KINDS = ("diagram", "gradedsum", "matrix", "liedata", "pd", "basis")
SPACE_TAGS = {"Aempty": "Aempty", "Aup": "AupX", "B": "BX"}
SPACE_NAMES = {v: k for k, v in SPACE_TAGS.items()}
_SLOT_NAMES = "abc"
_CYCLIC = re.compile(r"^internal\s+(\d+)\s+cyclic\s*\(\s*(\w)\s+(\w)\s+(\w)\s*\)$")


def _frac(tok, ln, what="rational p/q"):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(ln, what) from None


def _int(tok, ln, what="integer"):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(ln, what) from None


class _Lines:
    """Cursor over significant lines, remembering 1-based line numbers."""

    def __init__(self, text):
        self.items = []
        for ln, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self.items.append((ln, " ".join(line.split())))
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else (None, None)

    def next(self, expected):
        if self.i >= len(self.items):
            last = self.items[-1][0] + 1 if self.items else 1
            raise ParseError(last, expected)
        item = self.items[self.i]
        self.i += 1
        return item

    def done(self):
        return self.i >= len(self.items)


# -- header ---------------------------------------------------------------------

def _fmt_n(n):
    return "none" if n is None else str(n)


def _header(kind, space=None, labels=None, truncate="skip"):
    out = [f"aarhus-format {FORMAT_VERSION}", f"kind {kind}"]
    if space is not None:
        out.append(f"space {SPACE_NAMES[space]}")
    if labels is not None:
        out.append("labels" + "".join(" " + x for x in labels))
    if truncate != "skip":
        out.append(f"truncate {_fmt_n(truncate)}")
    return out


def _read_header(cur: _Lines, optional=False):
    meta = {}
    ln, line = cur.peek()
    if line is None or not line.startswith("aarhus-format"):
        if optional:
            return meta
        raise ParseError(ln or 1, "aarhus-format header")
    cur.next("header")
    parts = line.split()
    if len(parts) != 2:
        raise ParseError(ln, "aarhus-format <version>")
    if parts[1] != FORMAT_VERSION:
        raise VersionMismatch(ln, parts[1])
    ln, line = cur.next("kind line")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "kind" or parts[1] not in KINDS:
        raise ParseError(ln, "kind " + "|".join(KINDS))
    meta["kind"] = parts[1]
    while True:
        ln, line = cur.peek()
        if line is None:
            break
        word = line.split()[0]
        if word == "space":
            cur.next("space")
            meta["space"] = _space(line, ln)
        elif word == "labels":
            cur.next("labels")
            meta["labels"] = tuple(line.split()[1:])
        elif word == "truncate":
            cur.next("truncate")
            tok = line.split()[1:]
            if len(tok) != 1:
                raise ParseError(ln, "truncate N|none")
            meta["truncate"] = None if tok[0] == "none" else _int(tok[0], ln, "truncate N|none")
        elif word == "degree":
            cur.next("degree")
            meta["degree"] = _int(line.split()[1], ln, "degree N")
        else:
            break
    return meta


def _space(line, ln):
    parts = line.split()
    if len(parts) != 2 or parts[1] not in SPACE_TAGS:
        raise ParseError(ln, "space Aempty|Aup|B")
    return SPACE_TAGS[parts[1]]


# -- diagrams ---------------------------------------------------------------------

def diagram_block(d: Diagram):
    lines = [f"vertices {d.n}"]
    for v, k in enumerate(d.kinds):
        if k[0] == LEG:
            lines.append(f"leg {v} {k[1]}")
        elif k[0] == TRI:
            lines.append(f"internal {v} cyclic (a b c)")
    for a, b in d.edges:
        lines.append(f"edge {_half(d, a)} {_half(d, b)}")
    for x, pts in sorted(d.skeleton().items()):
        lines.append(f"skeleton {x} :" + "".join(f" {v}" for v in pts))
    lines.append("end")
    return lines


def _half(d, h):
    v, s = h
    return f"{v}.{_SLOT_NAMES[s]}" if d.kinds[v][0] == TRI else f"{v}._"


def _parse_half(tok, ln, names):
    m = re.fullmatch(r"(\d+)\.(\w+)", tok)
    if not m:
        raise ParseError(ln, "half-edge vertexId.name")
    v, name = int(m.group(1)), m.group(2)
    if v not in names:
        raise ParseError(ln, f"declared vertex id (got {v})")
    slots = names[v]
    if name not in slots:
        raise ParseError(ln, f"half-edge name in {sorted(slots)}")
    return (v, slots[name])


def parse_diagram_block(cur: _Lines) -> Diagram:
    ln, line = cur.next("vertices n")
    parts = line.split()
    if len(parts) != 2 or parts[0] != "vertices":
        raise ParseError(ln, "vertices n")
    n = _int(parts[1], ln)
    kinds = [None] * n
    names = {}
    edges = []
    while True:
        ln, line = cur.next("end")
        parts = line.split()
        word = parts[0]
        if word == "end":
            break
        if word == "leg":
            if len(parts) != 3:
                raise ParseError(ln, "leg id label")
            v = _vid(parts[1], ln, n, kinds)
            kinds[v] = (LEG, parts[2])
            names[v] = {"_": 0}
        elif word == "internal":
            m = _CYCLIC.match(line)
            if not m:
                raise ParseError(ln, "internal id cyclic (a b c)")
            v = _vid(m.group(1), ln, n, kinds)
            hs = m.group(2, 3, 4)
            if len(set(hs)) != 3:
                raise ParseError(ln, "three distinct half-edge names")
            kinds[v] = (TRI,)
            names[v] = {h: s for s, h in enumerate(hs)}
        elif word == "skeleton":
            if len(parts) < 3 or parts[2] != ":":
                raise ParseError(ln, "skeleton label : ids")
            for pos, tok in enumerate(parts[3:]):
                v = _vid(tok, ln, n, kinds)
                kinds[v] = (ATT, parts[1], pos)
                names[v] = {"_": 0}
        elif word == "edge":
            if len(parts) != 3:
                raise ParseError(ln, "edge v.h w.h")
            edges.append((ln, parts[1], parts[2]))
        else:
            raise ParseError(ln, "leg | internal | edge | skeleton | end")
    if any(k is None for k in kinds):
        raise ParseError(ln, f"a declaration for vertex {kinds.index(None)}")
    pairs = []
    for eln, a, b in edges:
        pairs.append((_parse_half(a, eln, names), _parse_half(b, eln, names)))
    try:
        d = Diagram(kinds, pairs)
    except ValueError as exc:
        raise ParseError(ln, f"a well-formed graph ({exc})") from None
    if not d.is_complete():
        raise ParseError(ln, "every half-edge used by an edge")
    return d


def _vid(tok, ln, n, kinds):
    v = _int(tok, ln, "vertex id")
    if not 0 <= v < n:
        raise ParseError(ln, f"vertex id below {n}")
    if kinds[v] is not None:
        raise ParseError(ln, f"vertex {v} declared once")
    return v


def _space_of(d: Diagram):
    return d.space_family()


def _labels_of(d: Diagram):
    return sorted({k[1] for k in d.kinds if k[0] in (LEG, ATT)})


def serialize_diagram(d: Diagram, space=None, labels=None) -> str:
    space = space or _space_of(d)
    labels = _labels_of(d) if labels is None else list(labels)
    return "\n".join(_header("diagram", space, labels) + diagram_block(d)) + "\n"


def _check_space(d, space, labels, ln):
    if space is None:
        return
    msg = validate(d, "BX" if space == "BX" else space, labels or None)
    if msg is not None:
        raise ParseError(ln, f"a {SPACE_NAMES[space]} diagram ({msg})")


# -- graded sums -----------------------------------------------------------------

def serialize_gradedsum(s: GradedSum, space=None, labels=None) -> str:
    if space is None:
        fams = {d.space_family() for d in s.terms if d.n}
        if len(fams) > 1:
            raise SpaceMismatch(f"sum mixes spaces {sorted(fams)}")
        space = fams.pop() if fams else "Aempty"
    if labels is None:
        labels = sorted({x for d in s.terms for x in _labels_of(d)})
    lines = _header("gradedsum", space, labels, s.max_degree)
    for d, c in s.items():
        lines.append(f"coeff {c}")
        lines.extend(diagram_block(d))
    return "\n".join(lines) + "\n"


def _parse_gradedsum(cur, meta):
    terms = []
    while not cur.done():
        ln, line = cur.next("coeff p/q")
        parts = line.split()
        if len(parts) != 2 or parts[0] != "coeff":
            raise ParseError(ln, "coeff p/q")
        c = _frac(parts[1], ln)
        d = parse_diagram_block(cur)
        _check_space(d, meta.get("space"), meta.get("labels"), ln)
        terms.append((d, c))
    return GradedSum(terms, meta.get("truncate"))


# -- matrices and Lie data --------------------------------------------------------

def serialize_matrix(m) -> str:
    lines = _header("matrix") + ["labels" + "".join(" " + x for x in m.labels)]
    for row in m.entries:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def _parse_matrix(cur, meta):
    from .gaussian import LinkingMatrix
    labels = meta.get("labels")
    if labels is None:
        ln, line = cur.next("labels x y ...")
        if not line.startswith("labels"):
            raise ParseError(ln, "labels x y ...")
        labels = tuple(line.split()[1:])
    rows = []
    for _ in labels:
        ln, line = cur.next("matrix row")
        row = [_frac(t, ln) for t in line.split()]
        if len(row) != len(labels):
            raise ParseError(ln, f"{len(labels)} entries")
        rows.append(row)
    if not cur.done():
        raise ParseError(cur.peek()[0], "end of matrix")
    try:
        return LinkingMatrix(labels, rows)
    except ValueError as exc:
        raise ParseError(ln, f"a symmetric matrix ({exc})") from None


def serialize_liedata(g) -> str:
    from .weights import dump_lie
    return "\n".join(_header("liedata")) + "\n" + dump_lie(g)


# -- PD codes -----------------------------------------------------------------------

def serialize_pd(expansion) -> str:
    lines = _header("pd")
    for t in expansion.terms:
        lines.append("term")
        lines.append(f"sign {t.sign:+d}")
        for k, fr in enumerate(t.framings):
            lines.append(f"component {k} framing {fr}")
        for x in t.pd_crossings:
            lines.append("X " + " ".join(str(a) for a in x))
    return "\n".join(lines) + "\n"


def _parse_pd(cur, meta):
    from .ogl import FramedPDLink, OGLExpansion
    terms = []
    while not cur.done():
        ln, line = cur.next("term")
        if line != "term":
            raise ParseError(ln, "term")
        sign, framings, xs = None, [], []
        while True:
            ln, line = cur.peek()
            if line is None or line == "term":
                break
            cur.next("pd line")
            parts = line.split()
            if parts[0] == "sign" and len(parts) == 2 and parts[1] in ("+1", "-1"):
                sign = int(parts[1])
            elif parts[0] == "component" and len(parts) == 4 and parts[2] == "framing":
                framings.append(_int(parts[3], ln))
            elif parts[0] == "X" and len(parts) == 6:
                xs.append(tuple(_int(p, ln) for p in parts[1:]))
            else:
                raise ParseError(ln, "sign ±1 | component k framing f | X a b c d o")
        if sign is None:
            raise ParseError(ln or 1, "sign line")
        terms.append(FramedPDLink(len(framings), xs, framings, sign))
    return OGLExpansion(None, terms)


# -- quotient bases (cache files) ----------------------------------------------------

def serialize_basis(qb) -> str:
    lines = _header("basis", qb.space, qb.labels)
    lines.append(f"degree {qb.degree}")
    for b in qb.basis:
        lines.append("basis")
        lines.extend(diagram_block(b))
    from .canonical import sort_key
    for d in sorted(qb.table, key=sort_key):
        lines.append("entry " + " ".join(str(c) for c in qb.table[d]))
        lines.extend(diagram_block(d))
    return "\n".join(lines) + "\n"


def parse_basis(text: str):
    from .relations import QuotientBasis
    cur = _Lines(text)
    meta = _read_header(cur)
    if meta.get("kind") != "basis":
        raise ParseError(1, "kind basis")
    basis, table = [], {}
    while not cur.done():
        ln, line = cur.next("basis | entry")
        parts = line.split()
        if parts[0] == "basis":
            basis.append(parse_diagram_block(cur))
        elif parts[0] == "entry":
            coords = tuple(_frac(t, ln) for t in parts[1:])
            table[parse_diagram_block(cur)] = coords
        else:
            raise ParseError(ln, "basis | entry")
    return QuotientBasis(meta.get("space"), tuple(meta.get("labels", ())),
                         meta.get("degree"), basis, table)


# -- front door -----------------------------------------------------------------------

def parse(text: str):
    """Parse any container; the result type follows the kind tag."""
    cur = _Lines(text)
    ln, first = cur.peek()
    if first is not None and not first.startswith("aarhus-format"):
        word = first.split()[0]
        if word == "dim":
            from .weights import load_lie
            return load_lie(text)
        if word == "labels":
            return _parse_matrix(cur, {})
    meta = _read_header(cur)
    kind = meta["kind"]
    if kind == "diagram":
        d = parse_diagram_block(cur)
        _check_space(d, meta.get("space"), meta.get("labels"), ln)
        if not cur.done():
            raise ParseError(cur.peek()[0], "end of file")
        return d
    if kind == "gradedsum":
        return _parse_gradedsum(cur, meta)
    if kind == "matrix":
        return _parse_matrix(cur, meta)
    if kind == "liedata":
        from .weights import load_lie
        rest = "\n".join(line for _, line in cur.items[cur.i:])
        return load_lie(rest)
    if kind == "pd":
        return _parse_pd(cur, meta)
    if kind == "basis":
        return parse_basis(text)
    raise ParseError(ln, "known kind")


def serialize(value, **kw) -> str:
    from .gaussian import LinkingMatrix
    from .ogl import OGLExpansion
    from .relations import QuotientBasis
    from .weights import LieData
    if isinstance(value, Diagram):
        return serialize_diagram(value, **kw)
    if isinstance(value, GradedSum):
        return serialize_gradedsum(value, **kw)
    if isinstance(value, LinkingMatrix):
        return serialize_matrix(value)
    if isinstance(value, LieData):
        return serialize_liedata(value)
    if isinstance(value, OGLExpansion):
        return serialize_pd(value)
    if isinstance(value, QuotientBasis):
        return serialize_basis(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def read(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write(path, value, **kw):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(value, **kw))
