"""Classical monodromy invariants read off a decorated resolution graph."""

import warnings
from dataclasses import dataclass
from fractions import Fraction

from planemono.covers import bm_ranks, stratum_cover, stratum_residues
from planemono.exceptions import MissingFirstBlowupTag
from planemono.graph import decorate, separate, suggest_ample
from planemono.page import assemble_page

__all__ = [
    "InvariantReport",
    "stratum_euler",
    "lefschetz_numbers",
    "zeta_function",
    "zeta_product",
    "zeta_exp_sum",
    "euler_fiber",
    "milnor_number",
    "multiplicity",
    "page_multiplicity",
    "tangent_cone_column",
    "invariant_report",
]


@dataclass
class InvariantReport:
    lefschetz: dict
    zeta_coeffs: list
    euler_fiber: int
    milnor: int
    multiplicity: int
    tangent_cone_ranks: list = None
    tangent_cone_shift: int = None


def stratum_euler(g, vid):
    """Euler characteristic of the curve ``vid`` minus its intersection points."""
    return 2 - 2 * g.vertex(vid).genus - g.valence(vid)


def lefschetz_numbers(g, dec, max_m):
    """``Lambda(phi^m) = sum over m_i | m of chi(B_i°)`` for ``m = 1..max_m``.

    The strict-transform pieces have Euler characteristic zero and are left out.
    """
    chis = {v: stratum_cover(g, dec, v).total_euler for v in g.ids}
    return {m: sum(chi for v, chi in chis.items() if m % dec.mult[v] == 0)
            for m in range(1, max_m + 1)}


def _series_mul(a, b, order):
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[:order + 1]):
        if x:
            for j, y in enumerate(b[:order + 1 - i]):
                out[i + j] += x * y
    return out


def _binomial_power(k, e, order):
    """Coefficients of ``(1 - t^k)^e`` for integer ``e`` up to ``t^order``."""
    out = [Fraction(0)] * (order + 1)
    coeff = Fraction(1)
    j = 0
    while k * j <= order:
        out[k * j] = coeff * (-1) ** j
        coeff = coeff * (e - j) / (j + 1)
        j += 1
    return out


def zeta_product(g, dec, order):
    """``prod_i (1 - t^{m_i})^{-chi(D_i°)}`` truncated at ``t^order``."""
    out = [Fraction(1)] + [Fraction(0)] * order
    for v in g.ids:
        out = _series_mul(out, _binomial_power(dec.mult[v], -stratum_euler(g, v), order), order)
    return out


def zeta_exp_sum(lefschetz, order):
    """``exp(sum_m Lambda(m) t^m / m)`` truncated at ``t^order``.

    Uses ``n c_n = sum_{k=1..n} k s_k c_{n-k}`` for ``exp(S)`` with
    ``S = sum s_k t^k``.
    """
    s = [Fraction(0)] + [Fraction(lefschetz[m], m) for m in range(1, order + 1)]
    c = [Fraction(1)] + [Fraction(0)] * order
    for n in range(1, order + 1):
        c[n] = sum((k * s[k] * c[n - k] for k in range(1, n + 1)), Fraction(0)) / n
    return c


def zeta_function(g, dec, order):
    coeffs = zeta_product(g, dec, order)
    check = zeta_exp_sum(lefschetz_numbers(g, dec, order), order)
    assert coeffs == check, "product and exponential forms of the zeta function disagree"
    return coeffs


def euler_fiber(g, dec):
    return sum(dec.mult[v] * stratum_euler(g, v) for v in g.ids)


def milnor_number(g, dec):
    return 1 - euler_fiber(g, dec)


def page_multiplicity(g, dec, max_m=None):
    """Least ``m`` for which the first page on an ``m``-separating model is nonzero."""
    if max_m is None:
        max_m = max(dec.mult.values())
    for m in range(1, max_m + 1):
        gm, dm = separate(g, dec, m)
        dm = dm.with_ample(suggest_ample(gm))
        if not assemble_page(gm, dm, m).is_empty():
            return m
    raise AssertionError("first page vanished for every m up to the largest multiplicity")


def multiplicity(g, dec):
    nu = min(dec.mult.values())
    assert page_multiplicity(g, dec, nu) == nu
    return nu


def tangent_cone_column(g, dec):
    """Borel-Moore ranks of the Milnor fibre of the tangent cone.

    This is the cover over the first-blowup curve.  The limit group in degree
    ``*`` equals these ranks in degree ``* + 3n - 1 - 2 nu``; the shift is
    returned alongside (n = 2).
    """
    first = g.tags.get("first_blowup")
    if first is None:
        raise MissingFirstBlowupTag("graph has no first_blowup tag")
    nu = dec.mult[first]
    if nu != min(dec.mult.values()):
        raise ValueError(f"first-blowup curve {first} has multiplicity {nu}, not the minimum")
    cover = stratum_cover(g, dec, first)
    # a tangent line of order e gives residue e mod nu; reduced means e = 1 everywhere
    if nu > 1 and any(r != 1 for r in stratum_residues(g, dec, first)):
        warnings.warn("tangent cone is not reduced", stacklevel=2)
    return bm_ranks(cover), 3 * 2 - 1 - 2 * nu


def invariant_report(g, dec=None, max_m=12, zeta_order=20):
    if dec is None:
        dec = decorate(g)
    tc = shift = None
    if "first_blowup" in g.tags:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            tc, shift = tangent_cone_column(g, dec)
    return InvariantReport(
        lefschetz=lefschetz_numbers(g, dec, max_m),
        zeta_coeffs=zeta_function(g, dec, zeta_order),
        euler_fiber=euler_fiber(g, dec),
        milnor=milnor_number(g, dec),
        multiplicity=multiplicity(g, dec),
        tangent_cone_ranks=tc,
        tangent_cone_shift=shift,
    )
