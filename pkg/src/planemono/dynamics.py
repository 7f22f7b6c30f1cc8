"""Numeric checks of the monodromy at radius zero.

On the boundary stratum over a set ``I`` of divisor components a point has
simplex coordinates ``w_i`` (summing to one) and rounded coordinates
``u_i = eta(w_i)``.  The ``m``-th iterate of the monodromy rotates the
``j``-th angle by ``m * l_j`` turns with

    l_j = zeta(u_j) / sum_i m_i zeta(u_i).

A point is fixed exactly when every ``m * l_j`` is an integer.
"""

from dataclasses import dataclass, field
from math import exp, log

import numpy as np

from planemono.exceptions import DomainError, IdentityViolated, SeparationViolated

__all__ = [
    "SimplexPoint",
    "eta",
    "eta_inverse",
    "zeta_fn",
    "rotation_numbers",
    "fixed_point_test",
    "sample_face",
    "SeparationReport",
    "separation_bound_check",
    "IdentityReport",
    "calculus_identity_suite",
    "edge_strata",
]

SIMPLEX_TOL = 1e-12
INTEGRALITY_TOL = 1e-9
FD_STEP = 1e-6
FD_RTOL = 1e-6


def eta(s):
    """``(1 - log s)^-1`` on ``(0, 1]``, extended by ``eta(0) = 0``."""
    if not 0 <= s <= 1:
        raise DomainError(f"eta is defined on [0, 1], got {s}")
    if s == 0:
        return 0.0
    return 1.0 / (1.0 - log(s))


def eta_inverse(u):
    if not 0 <= u <= 1:
        raise DomainError(f"eta_inverse is defined on [0, 1], got {u}")
    return 0.0 if u == 0 else exp(1.0 - 1.0 / u)


def zeta_fn(s):
    """``s^-2 exp(1 - 1/s)``, the derivative of ``eta_inverse``; flat at 0."""
    if s < 0:
        raise DomainError(f"zeta is defined for s >= 0, got {s}")
    if s == 0:
        return 0.0
    return exp(1.0 - 1.0 / s) / (s * s)


@dataclass
class SimplexPoint:
    support: list
    w: dict

    def __post_init__(self):
        if set(self.w) != set(self.support):
            raise ValueError("weights must be given exactly on the support")
        if any(not 0 < x <= 1 for x in self.w.values()):
            raise DomainError("weights must lie in (0, 1]")
        if abs(sum(self.w.values()) - 1.0) > SIMPLEX_TOL:
            raise DomainError(f"weights sum to {sum(self.w.values())!r}, not 1")

    @property
    def u(self):
        return {i: eta(x) for i, x in self.w.items()}


def rotation_numbers(pt, mult):
    """Rotation numbers ``l_j`` for every ``j`` in the support."""
    z = {i: zeta_fn(u) for i, u in pt.u.items()}
    denom = sum(mult[i] * z[i] for i in pt.support)
    return {j: z[j] / denom for j in pt.support}


def fixed_point_test(pt, mult, m, tol=INTEGRALITY_TOL):
    ell = rotation_numbers(pt, mult)
    return all(abs(m * x - round(m * x)) <= tol for x in ell.values())


def sample_face(support, n, rng):
    """``n`` uniform (Dirichlet(1, ..., 1)) points in the open face over ``support``."""
    ws = rng.dirichlet(np.ones(len(support)), size=n)
    pts = []
    for row in ws:
        row = np.clip(row, np.finfo(float).tiny, None)
        row = row / row.sum()
        pts.append(SimplexPoint(list(support), dict(zip(support, map(float, row)))))
    return pts


def edge_strata(g, dec):
    """Two-element strata: meeting pairs of curves with their multiplicities.

    Arrows (branches of the strict transform) count as curves of multiplicity
    ``branch_multiplicity``.
    """
    out = []
    for a, b in g.edges:
        out.append(((a, b), {a: dec.mult[a], b: dec.mult[b]}))
    for k, arrow in enumerate(g.arrows):
        lab = g.arrow_label(k)
        out.append(((arrow.attached_to, lab),
                    {arrow.attached_to: dec.mult[arrow.attached_to],
                     lab: arrow.branch_multiplicity}))
    return out


@dataclass
class SeparationReport:
    m: int
    samples: int
    seed: int
    strata: list = field(default_factory=list)
    mixed_fixed_points: int = 0
    max_closure_error: float = 0.0

    @property
    def ok(self):
        return self.mixed_fixed_points == 0 and all(s["bound"] < 1 for s in self.strata)


def separation_bound_check(g, dec, m, samples=1000, seed=0, strict=True):
    """Sample every two-element stratum and check ``0 < m l_j < 1``.

    ``j`` is the support element with the smallest ``zeta(u_j)``, hence the
    smallest rotation number, so ``m l_j <= m / (m_a + m_b)``; that bound is
    below one exactly when the stratum is ``m``-separated.  ``zeta`` is not
    monotone on ``(1/2, 1]``, so the element of smallest weight is not
    always the right choice; its value is recorded as ``max_min_weight``.
    The midpoint ``w = (1/2, 1/2)`` attains the bound and is always
    included.  With ``strict`` a violation raises
    :class:`SeparationViolated`, otherwise it is only recorded.
    """
    rng = np.random.default_rng(seed)
    report = SeparationReport(m, samples, seed)
    for (a, b), mult in edge_strata(g, dec):
        bound = m / (mult[a] + mult[b])
        pts = sample_face([a, b], samples, rng)
        pts.append(SimplexPoint([a, b], {a: 0.5, b: 0.5}))
        lo, hi, hi_w, fixed, witness = float("inf"), float("-inf"), float("-inf"), 0, None
        for pt in pts:
            ell = rotation_numbers(pt, mult)
            closure = abs(sum(mult[i] * ell[i] for i in ell) - 1.0)
            report.max_closure_error = max(report.max_closure_error, closure)
            val = m * min(ell.values())
            lo, hi = min(lo, val), max(hi, val)
            hi_w = max(hi_w, m * ell[min(pt.support, key=lambda i: pt.w[i])])
            if fixed_point_test(pt, mult, m):
                fixed += 1
                witness = witness or pt
        report.mixed_fixed_points += fixed
        report.strata.append({"stratum": (a, b), "bound": bound, "min": lo, "max": hi,
                              "max_min_weight": hi_w, "fixed": fixed,
                              "near_miss": bound >= 1 and fixed == 0})
        if strict and (bound >= 1 or fixed):
            raise SeparationViolated(
                f"stratum {(a, b)} with multiplicities {mult[a]}+{mult[b]} <= {m}: "
                f"{fixed} sampled fixed point(s), max m*l_j = {hi!r}", witness=witness)
    return report


@dataclass
class IdentityReport:
    samples: int
    worst: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(v["rel_err"] <= FD_RTOL for v in self.worst.values())


def _central(f, x, h=FD_STEP):
    return (f(x + h) - f(x - h)) / (2 * h)


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def calculus_identity_suite(samples=1000, seed=0, mult=(2, 6), strict=True):
    """Finite-difference checks of the identities behind the dynamics.

    * ``eta'(w) = u^2 / w`` with ``u = eta(w)``;
    * ``dt/dg = t (1 - log t)^2`` where ``t = eta_inverse(g)``;
    * ``d eta_inverse / du = zeta(u)``;
    * along the edge path ``w = (s, 1 - s)`` with ``v = -u``:
      ``v_a l_a' + v_b l_b' = (v_a l_a + v_b l_b)'``, i.e.
      ``l_a v_a' + l_b v_b' = 0``.
    """
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.05, 0.95, size=samples)
    ma, mb = mult
    mult_map = {"a": ma, "b": mb}

    def ell_on_edge(s):
        return rotation_numbers(SimplexPoint(["a", "b"], {"a": s, "b": 1.0 - s}), mult_map)

    def telescoping(s):
        la, lb = ell_on_edge(s)["a"], ell_on_edge(s)["b"]
        va, vb = -eta(s), -eta(1.0 - s)
        lhs = va * _central(lambda x: ell_on_edge(x)["a"], s) \
            + vb * _central(lambda x: ell_on_edge(x)["b"], s)
        rhs = _central(lambda x: -eta(x) * ell_on_edge(x)["a"]
                       - eta(1.0 - x) * ell_on_edge(x)["b"], s)
        # both sides vanish in the symmetric case; compare against the term size
        scale = max(abs(va * la), abs(vb * lb), 1.0)
        return abs(lhs - rhs) / scale

    checks = {
        "eta_prime": lambda x: _rel(_central(eta, x), eta(x) ** 2 / x),
        "t_prime": lambda x: _rel(_central(eta_inverse, x),
                                  eta_inverse(x) * (1 - log(eta_inverse(x))) ** 2),
        "zeta_is_inverse_derivative": lambda x: _rel(_central(eta_inverse, x), zeta_fn(x)),
        "telescoping": telescoping,
    }
    report = IdentityReport(samples)
    for name, check in checks.items():
        errs = [check(float(x)) for x in xs]
        k = int(np.argmax(errs))
        report.worst[name] = {"rel_err": errs[k], "at": float(xs[k])}
    if strict and not report.ok:
        bad = {k: v for k, v in report.worst.items() if v["rel_err"] > FD_RTOL}
        raise IdentityViolated(f"identity check failed: {bad}", worst=bad)
    return report
