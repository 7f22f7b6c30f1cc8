"""First page of the action-filtered spectral sequence for the m-th monodromy iterate.

For an ``m``-separating resolution with ample datum ``b`` the fixed points of
the ``m``-th iterate are the covers over the curves with ``m_i | m``.  Each
such cover sits in column ``p = m b_i / m_i`` and contributes its
Borel-Moore homology in degree ``n - 1 + p + q + CZ_i``, where
``CZ_i = 2 (m / m_i)(a_i + 1) - 2 m``.

Actions are compared as the exact pairs ``(m b_i / m_i, m / m_i)``: the
second entry carries the infinitesimally small positive shift, so it only
breaks ties in the first.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from planemono.covers import proper_transform_stratum, stratum_cover
from planemono.exceptions import (
    MissingAmple,
    NonIntegralColumn,
    NotSeparated,
    SearchBoundExceeded,
)
from planemono.graph import separation_defects

__all__ = [
    "Contribution",
    "SpectralPage",
    "cz_index",
    "action_key",
    "assemble_page",
    "action_order",
    "forbidden_arrows",
    "candidate_differentials",
    "Differential",
    "degeneration_feasibility",
    "euler_characteristic",
    "HOMOLOGICAL",
    "COHOMOLOGICAL",
]

# d_r : E_{p,q} -> E_{p + dp*r, q + dq*r + shift}
HOMOLOGICAL = (-1, 1, -1)
COHOMOLOGICAL = (1, -1, 1)


@dataclass(frozen=True)
class Contribution:
    vertex: str
    bm_degree: int
    rank: int


@dataclass
class SpectralPage:
    m: int
    n: int = 2
    entries: dict = field(default_factory=dict)
    cz: dict = field(default_factory=dict)
    action_key: dict = field(default_factory=dict)
    columns: dict = field(default_factory=dict)

    def rank(self, p, q):
        return sum(c.rank for c in self.entries.get((p, q), ()))

    def ranks(self):
        return {pq: self.rank(*pq) for pq in self.entries}

    def is_empty(self):
        return not any(self.ranks().values())

    def total_ranks(self):
        """Ranks summed along anti-diagonals, keyed by total degree ``p + q``."""
        out = defaultdict(int)
        for (p, q), r in self.ranks().items():
            out[p + q] += r
        return dict(out)


def cz_index(dec, vid, m):
    mi = dec.mult[vid]
    if m % mi:
        raise ValueError(f"m_{vid} = {mi} does not divide m = {m}")
    cz = 2 * Fraction(m, mi) * (Fraction(dec.discrepancy[vid]) + 1) - 2 * m
    assert cz.denominator == 1
    return int(cz)


def action_key(dec, vid, m):
    mi = dec.mult[vid]
    return (Fraction(m) * Fraction(dec.ample[vid]) / mi, Fraction(m, mi))


def _ranks_for(g, dec, vid, n, bm_override):
    if bm_override is not None and vid in bm_override:
        return list(bm_override[vid])
    if n != 2:
        raise ValueError(f"vertex {vid}: supply Borel-Moore ranks for n = {n}")
    return list(stratum_cover(g, dec, vid).bm_ranks)


def assemble_page(g, dec, m, n=2, bm_override=None, literal_arrows=False):
    """Populate ``E^1`` for the ``m``-th iterate.

    ``bm_override`` maps vertex ids to Borel-Moore rank vectors and replaces
    the surface computation (needed when ``n != 2``).
    """
    if dec.ample is None:
        raise MissingAmple("decoration carries no ample datum")
    bad = separation_defects(g, dec, m)
    if bad:
        raise NotSeparated(f"resolution is not {m}-separating at {bad}")
    page = SpectralPage(m=m, n=n)
    for vid in g.ids:
        mi = dec.mult[vid]
        if m % mi:
            continue
        p = Fraction(m) * Fraction(dec.ample[vid]) / mi
        if p.denominator != 1:
            raise NonIntegralColumn(
                f"vertex {vid}: m*b_i/m_i = {p} is not an integer")
        p = int(p)
        cz = cz_index(dec, vid, m)
        page.cz[vid] = cz
        page.action_key[vid] = action_key(dec, vid, m)
        page.columns[vid] = p
        for degree, rank in enumerate(_ranks_for(g, dec, vid, n, bm_override)):
            if rank:
                q = degree - (n - 1) - p - cz
                page.entries.setdefault((p, q), []).append(Contribution(vid, degree, rank))
    for k, arrow in enumerate(g.arrows):
        if m % arrow.branch_multiplicity:
            continue
        stratum = proper_transform_stratum(g, dec, k, literal_mode=literal_arrows)
        label = stratum.vertex
        cz = 2 * (m // arrow.branch_multiplicity) - 2 * m
        page.cz[label] = cz
        page.action_key[label] = (Fraction(0), Fraction(m, arrow.branch_multiplicity))
        page.columns[label] = 0
        for degree, rank in enumerate(stratum.bm_ranks):
            if rank:
                q = degree - (n - 1) - cz
                page.entries.setdefault((0, q), []).append(Contribution(label, degree, rank))
    return page


def euler_characteristic(page):
    """``sum (-1)^(p+q) rank E^1_{p,q}``."""
    return sum((-1) ** ((p + q) % 2) * r for (p, q), r in page.ranks().items())


def action_order(dec, m, vertices=None):
    """Vertices with ``m_i | m`` grouped by equal action, ascending.

    Returns a list of lists; members of one inner list have equal action.
    """
    if vertices is None:
        vertices = list(dec.mult)
    keys = {v: action_key(dec, v, m) for v in vertices if m % dec.mult[v] == 0}
    groups = []
    for v in sorted(keys, key=lambda v: keys[v]):
        if groups and keys[groups[-1][0]] == keys[v]:
            groups[-1].append(v)
        else:
            groups.append([v])
    return groups


def forbidden_arrows(page, order=None):
    """Column pairs ``(source, target)`` that carry no differential.

    Floer trajectories decrease action, so nothing flows from a family of
    smaller action to one of larger action.  A column pair is forbidden when
    every contributor of the source column has smaller action than every
    contributor of the target column.  ``order`` (from :func:`action_order`)
    restricts attention to the listed vertices; by default all contributors
    of the page are used.
    """
    contributors = {c.vertex for cs in page.entries.values() for c in cs}
    if order is not None:
        listed = {v for group in order for v in group}
        contributors &= listed
    by_col = defaultdict(list)
    for v in contributors:
        by_col[page.columns[v]].append(page.action_key[v])
    out = []
    for src, tgt in product(sorted(by_col), repeat=2):
        if src == tgt:
            continue
        if all(a < b for a in by_col[src] for b in by_col[tgt]):
            out.append((src, tgt))
    return out


@dataclass(frozen=True)
class Differential:
    r: int
    source: tuple
    target: tuple
    rank: int = 0


def _target(pq, r, bidegree):
    dp, dq, shift = bidegree
    p, q = pq
    return (p + dp * r, q + dq * r + shift)


def candidate_differentials(page, forbidden=(), bidegree=HOMOLOGICAL, r=1):
    """``d_r`` arrows between nonzero ``E^1`` entries that are not forbidden."""
    ranks = {pq: x for pq, x in page.ranks().items() if x}
    banned = set(forbidden)
    out = []
    for pq in sorted(ranks):
        tgt = _target(pq, r, bidegree)
        if tgt in ranks and (pq[0], tgt[0]) not in banned:
            out.append(Differential(r, pq, tgt))
    return out


def degeneration_feasibility(page, target, forbidden=(), bidegree=HOMOLOGICAL,
                             max_columns=4, max_total_rank=64):
    """Search for differential ranks turning ``E^1`` into the target limit.

    ``target`` maps total degree ``p + q`` to the expected rank of the limit
    (missing degrees mean rank zero).  Every differential ``d_r`` has the
    bidegree given by ``bidegree`` and may have any rank allowed by the
    current page, subject to ``rank(incoming) + rank(outgoing) <= rank`` at
    every entry.  Returns the list of nonzero :class:`Differential` records
    of one consistent pattern, or ``None`` when no pattern exists.
    """
    ranks = {pq: x for pq, x in page.ranks().items() if x}
    columns = {p for p, _ in ranks}
    total = sum(ranks.values())
    if len(columns) > max_columns or total > max_total_rank:
        raise SearchBoundExceeded(
            f"{len(columns)} columns / total rank {total} exceed "
            f"{max_columns} / {max_total_rank}")
    target = {d: r for d, r in target.items() if r}
    banned = set(forbidden)
    keys = sorted(ranks)
    # differentials only ever lower a p-distance that is bounded by the column span
    max_r = (max(columns) - min(columns)) if columns else 0
    tdeg = {pq: pq[0] + pq[1] for pq in keys}
    dtot = _target((0, 0), 1, bidegree)
    step = dtot[0] + dtot[1]  # change of total degree along d_r

    def totals(state):
        out = defaultdict(int)
        for pq, x in zip(keys, state):
            out[tdeg[pq]] += x
        return out

    def euler(d):
        return sum((-1) ** (k % 2) * v for k, v in d.items())

    # odd total-degree shift: every page has the same Euler characteristic
    if step % 2 and euler(totals([ranks[k] for k in keys])) != euler(target):
        return None

    def dominated(state):
        have = totals(state)
        return all(have.get(d, 0) >= r for d, r in target.items())

    @lru_cache(maxsize=None)
    def search(r, state):
        if not dominated(state):
            return None
        if r > max_r:
            have = {d: x for d, x in totals(state).items() if x}
            return () if have == target else None
        cur = dict(zip(keys, state))
        arrows = []
        for pq in keys:
            tgt = _target(pq, r, bidegree)
            if cur[pq] and cur.get(tgt) and (pq[0], tgt[0]) not in banned:
                arrows.append((pq, tgt))
        for choice in _rank_choices(arrows, cur):
            nxt = dict(cur)
            for (src, tgt), k in zip(arrows, choice):
                nxt[src] -= k
                nxt[tgt] -= k
            rest = search(r + 1, tuple(nxt[k] for k in keys))
            if rest is not None:
                here = tuple(Differential(r, s, t, k) for (s, t), k in zip(arrows, choice) if k)
                return here + rest
        return None

    found = search(1, tuple(ranks[k] for k in keys))
    return None if found is None else list(found)


def _rank_choices(arrows, cur):
    """All rank assignments with ``in + out <= rank`` at every entry, largest first."""
    if not arrows:
        yield ()
        return
    used = defaultdict(int)
    choice = []

    def rec(i):
        if i == len(arrows):
            yield tuple(choice)
            return
        src, tgt = arrows[i]
        cap = min(cur[src] - used[src], cur[tgt] - used[tgt])
        for k in range(cap, -1, -1):
            used[src] += k
            used[tgt] += k
            choice.append(k)
            yield from rec(i + 1)
            choice.pop()
            used[src] -= k
            used[tgt] -= k

    yield from rec(0)
