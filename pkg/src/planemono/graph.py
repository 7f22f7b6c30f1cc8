"""Weighted resolution dual graphs and their exact decorations.

A :class:`DualGraph` records the exceptional curves of an embedded resolution
of a plane-curve germ (vertices, weighted by self-intersection and genus), the
points where two exceptional curves meet (edges) and the branches of the
strict transform (arrows).  A :class:`Decoration` attaches to every vertex
the order of vanishing of the pulled-back function, the coefficient in the
relative canonical divisor and optionally an ample divisor supported on the
exceptional locus.

Everything here is exact: intersection numbers are integers and solutions
are :class:`fractions.Fraction`.
"""

import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import lcm

from planemono import _linalg
from planemono.exceptions import (
    GraphValidationError,
    NonIntegralMultiplicity,
    NonPositiveMultiplicity,
)

__all__ = [
    "Vertex",
    "Arrow",
    "DualGraph",
    "Decoration",
    "ValidationReport",
    "AmpleReport",
    "validate_graph",
    "check_graph",
    "solve_multiplicities",
    "solve_discrepancies",
    "decorate",
    "check_ample",
    "suggest_ample",
    "is_separated",
    "separation_defects",
    "separate",
    "blowup_edge",
    "blowup_arrow",
    "blowup_point",
]


@dataclass(frozen=True)
class Vertex:
    id: str
    self_intersection: int
    genus: int = 0


@dataclass(frozen=True)
class Arrow:
    attached_to: str
    branch_multiplicity: int = 1


@dataclass(frozen=True)
class DualGraph:
    """Resolution dual graph.

    ``edges`` is a multiset of unordered pairs, stored as a tuple of 2-tuples
    in insertion order.  ``tags`` carries optional metadata such as
    ``{"first_blowup": "D1"}``; it takes no part in the geometry.
    """

    vertices: tuple
    edges: tuple = ()
    arrows: tuple = ()
    tags: dict = field(default_factory=dict, compare=True, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(
            v if isinstance(v, Vertex) else Vertex(**v) for v in self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "arrows", tuple(
            a if isinstance(a, Arrow) else Arrow(**a) for a in self.arrows))
        object.__setattr__(self, "tags", dict(self.tags))

    @property
    def ids(self):
        return [v.id for v in self.vertices]

    def vertex(self, vid):
        for v in self.vertices:
            if v.id == vid:
                return v
        raise KeyError(vid)

    def index(self):
        return {v.id: k for k, v in enumerate(self.vertices)}

    def intersection_matrix(self):
        idx = self.index()
        n = len(self.vertices)
        mat = [[0] * n for _ in range(n)]
        for k, v in enumerate(self.vertices):
            mat[k][k] = v.self_intersection
        for a, b in self.edges:
            if a == b:
                continue
            mat[idx[a]][idx[b]] += 1
            mat[idx[b]][idx[a]] += 1
        return mat

    def neighbors(self, vid):
        """Adjacent vertex ids, repeated according to edge multiplicity."""
        out = []
        for a, b in self.edges:
            if a == vid:
                out.append(b)
            elif b == vid:
                out.append(a)
        return out

    def arrows_at(self, vid):
        return [(k, a) for k, a in enumerate(self.arrows) if a.attached_to == vid]

    def valence(self, vid):
        """Number of points where the curve ``vid`` meets the rest of the divisor."""
        return len(self.neighbors(vid)) + len(self.arrows_at(vid))

    @staticmethod
    def arrow_label(k):
        return f"arrow{k}"


@dataclass(frozen=True)
class Decoration:
    """Per-vertex multiplicity ``mult``, discrepancy and optional ample datum.

    Arrows carry multiplicity ``branch_multiplicity`` and zero discrepancy and
    ample coefficient; they are not stored here.
    """

    mult: dict
    discrepancy: dict
    ample: dict = None

    def with_ample(self, b):
        return replace(self, ample={k: Fraction(v) for k, v in b.items()})


@dataclass
class ValidationReport:
    connected: bool
    negative_definite: bool
    has_arrows: bool
    minors: list
    problems: list

    @property
    def ok(self):
        return not self.problems

    def raise_for_problems(self):
        if self.problems:
            raise GraphValidationError(self.problems)


@dataclass
class AmpleReport:
    """Intersection numbers ``H . D_i`` for every vertex, kept exact."""

    intersections: dict

    @property
    def ample(self):
        return all(x > 0 for x in self.intersections.values())

    def __bool__(self):
        return self.ample


def validate_graph(g):
    problems = []
    ids = g.ids
    if len(set(ids)) != len(ids):
        problems.append("duplicate vertex ids")
    if not ids:
        problems.append("graph has no vertices")
    known = set(ids)
    for v in g.vertices:
        if v.genus < 0:
            problems.append(f"vertex {v.id}: negative genus")
    for a, b in g.edges:
        if a not in known or b not in known:
            problems.append(f"edge ({a}, {b}) references an unknown vertex")
        elif a == b:
            problems.append(f"self-loop at vertex {a}")
    has_arrows = bool(g.arrows)
    if not has_arrows:
        problems.append("at least one arrow is required")
    for k, arrow in enumerate(g.arrows):
        if arrow.attached_to not in known:
            problems.append(f"arrow {k} attached to unknown vertex {arrow.attached_to}")
        if arrow.branch_multiplicity < 1:
            problems.append(f"arrow {k}: branch multiplicity must be positive")
    if problems:
        # the matrix is not well defined; skip the numeric checks
        return ValidationReport(False, False, has_arrows, [], problems)

    connected = _is_connected(g)
    if not connected:
        problems.append("graph is not connected")
    minors = _linalg.leading_principal_minors(
        [[-x for x in row] for row in g.intersection_matrix()])
    negdef = all(d > 0 for d in minors)
    if not negdef:
        problems.append("intersection matrix is not negative definite "
                        f"(leading minors of -M: {[str(d) for d in minors]})")
    return ValidationReport(connected, negdef, has_arrows, minors, problems)


def check_graph(g):
    """Validate ``g`` and raise :class:`GraphValidationError` on failure."""
    validate_graph(g).raise_for_problems()
    return g


def _is_connected(g):
    ids = g.ids
    if not ids:
        return False
    adj = {v: set() for v in ids}
    for a, b in g.edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {ids[0]}
    stack = [ids[0]]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    # arrows hang off a single vertex each, so they never join components
    return len(seen) == len(ids)


def solve_multiplicities(g):
    """Orders of vanishing ``m_i`` from principality of the total transform."""
    check_graph(g)
    rhs = [-sum(a.branch_multiplicity for _, a in g.arrows_at(v)) for v in g.ids]
    sol = _linalg.solve(g.intersection_matrix(), rhs)
    out = {}
    for vid, x in zip(g.ids, sol):
        if x.denominator != 1:
            raise NonIntegralMultiplicity(
                f"vertex {vid}: multiplicity {x} is not an integer; "
                "the graph is not the dual graph of a germ resolution")
        if x <= 0:
            raise NonPositiveMultiplicity(f"vertex {vid}: multiplicity {x} <= 0")
        out[vid] = int(x)
    return out


def solve_discrepancies(g):
    """Coefficients of the relative canonical divisor via adjunction.

    Solves ``sum_j M_ij a_j = -2 + 2 g_i - M_ii``; arrows contribute zero.
    """
    check_graph(g)
    rhs = [-2 + 2 * v.genus - v.self_intersection for v in g.vertices]
    sol = _linalg.solve(g.intersection_matrix(), rhs)
    if any(x.denominator != 1 for x in sol):
        warnings.warn("non-integral discrepancies; graph is not a smooth-surface resolution",
                      stacklevel=2)
    return dict(zip(g.ids, sol))


def decorate(g, ample=None):
    dec = Decoration(solve_multiplicities(g), solve_discrepancies(g))
    if ample is not None:
        dec = dec.with_ample(ample)
    return dec


def check_ample(g, b):
    mat = g.intersection_matrix()
    vec = [Fraction(b[v]) for v in g.ids]
    return AmpleReport(dict(zip(g.ids, _linalg.mat_vec(mat, vec))))


def suggest_ample(g, c=None):
    """An integral ample divisor supported on the exceptional curves.

    Solves ``M b = c`` for a positive integer vector ``c`` (all ones by
    default) and clears denominators.  Negative definiteness of ``M`` with
    nonnegative off-diagonal entries makes every ``b_i`` negative.
    """
    check_graph(g)
    if c is None:
        c = [1] * len(g.vertices)
    if any(x <= 0 for x in c):
        raise ValueError("c must be strictly positive")
    sol = _linalg.solve(g.intersection_matrix(), c)
    scale = lcm(*(x.denominator for x in sol))
    b = {vid: int(x * scale) for vid, x in zip(g.ids, sol)}
    assert all(x < 0 for x in b.values()), b
    assert check_ample(g, b).ample
    return b


def separation_defects(g, dec, m):
    """Intersection points whose two multiplicities sum to at most ``m``.

    Returns a list of ``("edge", k)`` / ``("arrow", k)`` markers in the order
    edges first, then arrow attachments.
    """
    bad = []
    for k, (a, b) in enumerate(g.edges):
        if dec.mult[a] + dec.mult[b] <= m:
            bad.append(("edge", k))
    for k, arrow in enumerate(g.arrows):
        if dec.mult[arrow.attached_to] + arrow.branch_multiplicity <= m:
            bad.append(("arrow", k))
    return bad


def is_separated(g, dec, m):
    return not separation_defects(g, dec, m)


def _fresh_id(g):
    taken = set(g.ids)
    k = len(taken) + 1
    while f"E{k}" in taken:
        k += 1
    return f"E{k}"


def _bump(vertices, ids, delta=-1):
    return tuple(
        replace(v, self_intersection=v.self_intersection + delta) if v.id in ids else v
        for v in vertices)


def _new_decoration(dec, new_id, mult, disc):
    return Decoration({**dec.mult, new_id: mult}, {**dec.discrepancy, new_id: disc}, None)


def blowup_edge(g, dec, k):
    """Blow up the intersection point recorded by edge ``k``.

    The ample datum is dropped: it does not pull back to an ample divisor.
    """
    a, b = g.edges[k]
    new = _fresh_id(g)
    vertices = _bump(g.vertices, {a, b}) + (Vertex(new, -1),)
    edges = g.edges[:k] + g.edges[k + 1:] + ((a, new), (new, b))
    g2 = DualGraph(vertices, edges, g.arrows, g.tags)
    dec2 = _new_decoration(dec, new, dec.mult[a] + dec.mult[b],
                           dec.discrepancy[a] + dec.discrepancy[b] + 1)
    return g2, dec2, new


def blowup_arrow(g, dec, k):
    """Blow up the point where arrow ``k`` meets its vertex; the arrow moves to the new curve."""
    arrow = g.arrows[k]
    a = arrow.attached_to
    new = _fresh_id(g)
    vertices = _bump(g.vertices, {a}) + (Vertex(new, -1),)
    edges = g.edges + ((a, new),)
    arrows = g.arrows[:k] + (replace(arrow, attached_to=new),) + g.arrows[k + 1:]
    g2 = DualGraph(vertices, edges, arrows, g.tags)
    dec2 = _new_decoration(dec, new, dec.mult[a] + arrow.branch_multiplicity,
                           dec.discrepancy[a] + 1)
    return g2, dec2, new


def blowup_point(g, dec, vid):
    """Blow up a point of curve ``vid`` that lies on no other component."""
    new = _fresh_id(g)
    vertices = _bump(g.vertices, {vid}) + (Vertex(new, -1),)
    edges = g.edges + ((vid, new),)
    g2 = DualGraph(vertices, edges, g.arrows, g.tags)
    dec2 = _new_decoration(dec, new, dec.mult[vid], dec.discrepancy[vid] + 1)
    return g2, dec2, new


def separate(g, dec, m):
    """Blow up intersection points until every pair of meeting curves has
    multiplicity sum greater than ``m``.

    Each blowup replaces a point with sum ``s <= m`` by two points with sums
    strictly larger than ``s``, so the loop terminates.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    while True:
        bad = separation_defects(g, dec, m)
        if not bad:
            return g, dec
        kind, k = bad[0]
        if kind == "edge":
            g, dec, _ = blowup_edge(g, dec, k)
        else:
            g, dec, _ = blowup_arrow(g, dec, k)
