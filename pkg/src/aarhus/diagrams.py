"""Jacobi diagrams stored as half-edge graphs.

A vertex is described by its *kind*:

    ("t",)              oriented trivalent vertex, slots 0, 1, 2 in cyclic order
    ("l", label)        univalent leg marked by ``label`` (one slot)
    ("a", label, pos)   attachment point on the skeleton line ``label`` at
                        height ``pos`` (one slot)

Edges pair half-edges ``(vertex, slot)``.  Multi-edges and self-loops are
allowed.  The same class serves manifold diagrams (only ``t``), uni-trivalent
diagrams (``t`` and ``l``) and pure tangle diagrams (``t`` and ``a``).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

TRI = "t"
LEG = "l"
ATT = "a"

SPACES = ("Aempty", "AupX", "BX", "BplusX")

DUAL_PREFIX = "∂"


def dual(label: str) -> str:
    """The dual label paired with ``label`` during Gaussian gluing."""
    return DUAL_PREFIX + label


def is_dual(label: str) -> bool:
    return label.startswith(DUAL_PREFIX)


def undual(label: str) -> str:
    if not is_dual(label):
        raise ValueError(f"{label!r} is not a dual label")
    return label[len(DUAL_PREFIX):]


def arity(kind) -> int:
    return 3 if kind[0] == TRI else 1


@dataclass(frozen=True)
class Diagram:
    kinds: tuple
    edges: tuple
    _partner: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        kinds = tuple(tuple(k) for k in self.kinds)
        edges = tuple(sorted(tuple(sorted((tuple(a), tuple(b)))) for a, b in self.edges))
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "edges", edges)
        partner = {}
        for a, b in edges:
            if a in partner or b in partner:
                raise ValueError(f"half-edge used twice in edge {a}-{b}")
            partner[a] = b
            partner[b] = a
        for (v, s) in partner:
            if not 0 <= v < len(kinds) or not 0 <= s < arity(kinds[v]):
                raise ValueError(f"bad half-edge {(v, s)}")
        object.__setattr__(self, "_partner", partner)

    # -- basic structure -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.kinds)

    def partner(self, half):
        return self._partner[half]

    def is_complete(self) -> bool:
        """Every slot of every vertex is used by exactly one edge."""
        return len(self._partner) == sum(arity(k) for k in self.kinds)

    def trivalent(self):
        return [v for v, k in enumerate(self.kinds) if k[0] == TRI]

    def legs(self):
        return [v for v, k in enumerate(self.kinds) if k[0] == LEG]

    def attachments(self):
        return [v for v, k in enumerate(self.kinds) if k[0] == ATT]

    def leg_labels(self):
        return sorted(self.kinds[v][1] for v in self.legs())

    def leg_counts(self) -> dict:
        counts = defaultdict(int)
        for v in self.legs():
            counts[self.kinds[v][1]] += 1
        return dict(counts)

    def skeleton(self) -> dict:
        """Map line label -> attachment vertex ids in upward order."""
        lines = defaultdict(list)
        for v in self.attachments():
            lines[self.kinds[v][1]].append((self.kinds[v][2], v))
        return {x: [v for _, v in sorted(pts)] for x, pts in lines.items()}

    def neighbours(self, v):
        return [self._partner[(v, s)][0] for s in range(arity(self.kinds[v]))
                if (v, s) in self._partner]

    def components(self):
        """Connected components of the internal graph (skeleton ignored)."""
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.neighbours(v):
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def has_self_loop(self) -> bool:
        return any(a[0] == b[0] for a, b in self.edges)

    def space_family(self) -> str:
        if self.attachments():
            return "AupX"
        if self.legs():
            return "BX"
        return "Aempty"

    # -- construction helpers --------------------------------------------
    def relabel_vertices(self, order):
        """Renumber vertices: ``order[new] = old``."""
        inv = {old: new for new, old in enumerate(order)}
        kinds = [self.kinds[old] for old in order]
        edges = [((inv[a[0]], a[1]), (inv[b[0]], b[1])) for a, b in self.edges]
        return Diagram(kinds, edges)

    def with_kinds(self, kinds):
        return Diagram(kinds, self.edges)

    def flip(self, v):
        """Transpose the cyclic order at trivalent vertex ``v`` (slots 1, 2)."""
        if self.kinds[v][0] != TRI:
            raise ValueError("only trivalent vertices carry an orientation")
        swap = {1: 2, 2: 1}

        def f(h):
            return (h[0], swap.get(h[1], h[1])) if h[0] == v else h

        return Diagram(self.kinds, [(f(a), f(b)) for a, b in self.edges])

    def subdiagram(self, vertices):
        vs = sorted(vertices)
        inv = {old: new for new, old in enumerate(vs)}
        kinds = [self.kinds[v] for v in vs]
        edges = [((inv[a[0]], a[1]), (inv[b[0]], b[1])) for a, b in self.edges
                 if a[0] in inv]
        return Diagram(kinds, edges)

    def __repr__(self):
        return f"Diagram(kinds={self.kinds!r}, edges={self.edges!r})"


def disjoint_union(*ds: Diagram) -> Diagram:
    kinds, edges, off = [], [], 0
    for d in ds:
        kinds.extend(d.kinds)
        edges.extend(((a[0] + off, a[1]), (b[0] + off, b[1])) for a, b in d.edges)
        off += d.n
    return Diagram(kinds, edges)


def degree(d: Diagram) -> int:
    """Half the number of trivalent vertices, legs and skeleton attachments."""
    total = len(d.kinds)
    if total % 2:
        raise ValueError("odd vertex count; diagram is not valid")
    return total // 2


def relabel_legs(d: Diagram, mapping) -> Diagram:
    kinds = [(k[0], mapping.get(k[1], k[1])) if k[0] == LEG else k for k in d.kinds]
    return d.with_kinds(kinds)


# -- named diagrams --------------------------------------------------------

EMPTY = Diagram((), ())


def strut(x: str, y: str) -> Diagram:
    return Diagram([(LEG, x), (LEG, y)], [((0, 0), (1, 0))])


def theta() -> Diagram:
    """Two vertices joined by three edges; both oriented (e0, e1, e2)."""
    return Diagram([(TRI,), (TRI,)], [((0, i), (1, i)) for i in range(3)])


def tadpole() -> Diagram:
    """The dumbbell: two self-looped vertices joined by a bridge (AS-zero)."""
    return Diagram([(TRI,), (TRI,)],
                   [((0, 0), (0, 1)), ((0, 2), (1, 0)), ((1, 1), (1, 2))])


def y_graph(a: str, b: str, c: str) -> Diagram:
    return Diagram([(TRI,), (LEG, a), (LEG, b), (LEG, c)],
                   [((0, 0), (1, 0)), ((0, 1), (2, 0)), ((0, 2), (3, 0))])


def wheel(labels) -> Diagram:
    """Planar wheel, every vertex oriented (leg, next rim edge, previous rim edge).

    Drawn with the rim counterclockwise and spokes pointing outward this is
    the counterclockwise orientation at every vertex.
    """
    labels = list(labels)
    n = len(labels)
    if n == 0:
        raise ValueError("a wheel needs at least one spoke")
    kinds = [(TRI,)] * n + [(LEG, x) for x in labels]
    edges = [((i, 0), (n + i, 0)) for i in range(n)]
    # rim edge i runs from vertex i (slot 1) to vertex i+1 (slot 2)
    edges += [((i, 1), ((i + 1) % n, 2)) for i in range(n)]
    return Diagram(kinds, edges)


def w2(x: str, y: str | None = None) -> Diagram:
    """The 2-wheel oriented so that gluing its legs by a strut gives +theta.

    This is the planar 2-wheel with one vertex flipped.
    """
    return wheel([x, x if y is None else y]).flip(0)


def chord(x: str, y: str | None = None) -> Diagram:
    """A single chord with ends on lines x and y (both on x if y is None)."""
    if y is None or y == x:
        return Diagram([(ATT, x, 0), (ATT, x, 1)], [((0, 0), (1, 0))])
    return Diagram([(ATT, x, 0), (ATT, y, 0)], [((0, 0), (1, 0))])


def k4() -> Diagram:
    """Tetrahedron graph with an arbitrary fixed orientation."""
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    nxt = [0] * 4
    edges = []
    for u, w in pairs:
        edges.append(((u, nxt[u]), (w, nxt[w])))
        nxt[u] += 1
        nxt[w] += 1
    return Diagram([(TRI,)] * 4, edges)


# -- validation -------------------------------------------------------------

def validate(d: Diagram, space: str, labels=None):
    """Return ``None`` if ``d`` belongs to ``space`` else a violation message."""
    if space not in SPACES:
        return f"unknown space {space!r}"
    if not d.is_complete():
        return "some vertex slot has no incident edge"
    if len(d.kinds) % 2:
        return "odd total vertex count"
    labels = None if labels is None else set(labels)
    legs, atts = d.legs(), d.attachments()
    if space == "Aempty":
        if legs or atts:
            return "manifold diagrams have no legs and no skeleton"
        return None
    if space == "AupX":
        if legs:
            return "pure tangle diagrams have no legs"
        if labels is not None:
            for v in atts:
                if d.kinds[v][1] not in labels:
                    return f"skeleton line {d.kinds[v][1]!r} not in label set"
        for x, pts in d.skeleton().items():
            pos = [d.kinds[v][2] for v in pts]
            if len(set(pos)) != len(pos):
                return f"two attachments share a position on line {x!r}"
        for comp in d.components():
            if not any(d.kinds[v][0] == ATT for v in comp):
                return "component not connected to the skeleton"
        return None
    if atts:
        return "uni-trivalent diagrams have no skeleton"
    if labels is not None:
        for v in legs:
            if d.kinds[v][1] not in labels:
                return f"leg label {d.kinds[v][1]!r} not in label set"
    for comp in d.components():
        if not any(d.kinds[v][0] == LEG for v in comp):
            return "closed component (no univalent vertex)"
        if space == "BplusX" and not any(d.kinds[v][0] == TRI for v in comp):
            return "component without a trivalent vertex"
    return None
