"""Topology of the cyclic covers sitting over the open strata of the divisor.

Over the open part ``D_i°`` of an exceptional curve (the curve minus its
intersection points with the rest of the divisor) the level set of the
function restricts to an unramified ``Z/m_i`` cover.  Near the point where
``D_i`` meets ``D_j`` the function is ``unit * z_i^{m_i} z_j^{m_j}``, so the
loop around that puncture acts on the fibre by translation by ``m_j mod
m_i``.  For a genus-zero curve this determines the cover completely.
"""

from dataclasses import dataclass
from math import gcd

from planemono.exceptions import ClosedStratum, PositiveGenusUnsupported

__all__ = [
    "StratumCover",
    "stratum_residues",
    "cover_from_residues",
    "stratum_cover",
    "bm_ranks",
    "proper_transform_stratum",
    "brute_force_cover",
]


@dataclass(frozen=True)
class StratumCover:
    vertex: str
    degree: int
    components: int
    genus: int
    punctures: int  # per component
    total_euler: int
    bm_ranks: tuple

    @property
    def per_component(self):
        return {"genus": self.genus, "punctures": self.punctures,
                "euler": 2 - 2 * self.genus - self.punctures}


def stratum_residues(g, dec, vid):
    """Monodromy residues of the cover over ``vid``: one per puncture of ``D_i°``."""
    m = dec.mult[vid]
    res = [dec.mult[j] % m for j in g.neighbors(vid)]
    res += [a.branch_multiplicity % m for _, a in g.arrows_at(vid)]
    return res


def cover_from_residues(degree, residues, vertex="?"):
    """Cyclic cover of the sphere minus ``len(residues)`` points.

    The group generated by the residues has order ``degree / c`` where
    ``c = gcd(degree, residues)`` is the number of components.  Over a
    puncture with residue ``r`` there are ``gcd(degree, r)`` punctures
    upstairs; the components are permuted transitively by the deck group,
    so they share punctures and genus evenly.
    """
    k = len(residues)
    if k == 0:
        raise ClosedStratum(f"vertex {vertex}: stratum has no punctures")
    components = gcd(degree, *residues)
    total_punctures = sum(gcd(degree, r) for r in residues)
    total_euler = degree * (2 - k)
    euler_c, rem = divmod(total_euler, components)
    punct_c, rem2 = divmod(total_punctures, components)
    assert rem == 0 and rem2 == 0
    twice_genus = 2 - euler_c - punct_c
    assert twice_genus >= 0 and twice_genus % 2 == 0, (degree, residues)
    genus = twice_genus // 2
    ranks = (0, components * (2 * genus + punct_c - 1), components)
    return StratumCover(vertex, degree, components, genus, punct_c, total_euler, ranks)


def stratum_cover(g, dec, vid):
    v = g.vertex(vid)
    if v.genus != 0:
        raise PositiveGenusUnsupported(f"vertex {vid} has genus {v.genus}")
    return cover_from_residues(dec.mult[vid], stratum_residues(g, dec, vid), vid)


def bm_ranks(cover):
    """Borel-Moore ranks ``[h0, h1, h2]`` of an open orientable surface.

    By Poincare duality ``H^BM_k = H^{2-k}``: nothing in degree 0, one class
    per component in degree 2, and ``2g + n - 1`` per component in degree 1.
    """
    h1 = cover.components * (2 * cover.genus + cover.punctures - 1)
    ranks = (0, h1, cover.components)
    assert ranks[2] - ranks[1] + ranks[0] == cover.total_euler
    return list(ranks)


def proper_transform_stratum(g, dec, k, literal_mode=False):
    """Stratum record for the branch of the strict transform given by arrow ``k``.

    Inside a Milnor ball this piece is a cone minus its vertex and has no
    Borel-Moore homology.  ``literal_mode`` instead models each piece as a
    punctured disk (Euler characteristic still zero).
    """
    label = g.arrow_label(k)
    mult = g.arrows[k].branch_multiplicity
    if literal_mode:
        return StratumCover(label, mult, 1, 0, 2, 0, (0, 1, 1))
    return StratumCover(label, mult, 1, 0, 0, 0, (0, 0, 0))


def brute_force_cover(degree, residues):
    """Enumerate the cover as ``Z/degree`` sheets glued by the puncture loops.

    Returns ``(components, punctures_per_residue)``.  Sheets are joined when a
    loop carries one to the other; punctures over a residue ``r`` are the
    orbits of ``x -> x + r`` on the sheets.
    """
    parent = list(range(degree))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in residues:
        for x in range(degree):
            a, b = find(x), find((x + r) % degree)
            if a != b:
                parent[a] = b
    components = len({find(x) for x in range(degree)})
    punctures = []
    for r in residues:
        seen, orbits = set(), 0
        for x in range(degree):
            if x in seen:
                continue
            orbits += 1
            y = x
            while y not in seen:
                seen.add(y)
                y = (y + r) % degree
        punctures.append(orbits)
    return components, punctures
