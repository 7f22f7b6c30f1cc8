"""Built-in corpus of plane-curve germs given by their minimal resolution graphs."""

from math import gcd

from planemono.exceptions import InvalidParams
from planemono.graph import Arrow, DualGraph, Vertex

__all__ = ["smooth", "cusp", "xk_yk", "xp_yq", "germ_generator", "GERMS", "corpus"]


def smooth():
    """A smooth branch, blown up once so that the first-blowup curve exists."""
    return DualGraph([Vertex("D1", -1)], [], [Arrow("D1")], {"first_blowup": "D1"})


def xk_yk(k):
    """``x^k - y^k``: k lines through the origin, resolved by one blowup."""
    k = _positive_int(k, "k")
    return DualGraph([Vertex("D1", -1)], [], [Arrow("D1")] * k, {"first_blowup": "D1"})


def xp_yq(p, q):
    """Minimal embedded resolution of the branch ``x^p = y^q`` with ``gcd(p, q) = 1``.

    Runs the blowup process directly: at every stage the strict transform is
    locally ``u^alpha = v^beta`` at a point where ``u = 0`` and ``v = 0`` may
    be exceptional curves.  Blowing up subtracts the smaller exponent from
    the larger one (the Euclidean algorithm) until the branch is smooth and
    meets the divisor transversally at a free point.
    """
    p, q = _positive_int(p, "p"), _positive_int(q, "q")
    if gcd(p, q) != 1:
        raise InvalidParams(f"xp-yq needs coprime exponents, got gcd({p}, {q}) = {gcd(p, q)}")
    if min(p, q) == 1:
        return smooth()

    selfint = {}
    edges = []
    alpha, beta = p, q
    du = dv = None  # exceptional curves through the point along u = 0 and v = 0
    count = 0
    while True:
        count += 1
        new = f"D{count}"
        selfint[new] = -1
        for d in (du, dv):
            if d is not None:
                selfint[d] -= 1
        if du is not None and dv is not None:
            edges.remove((du, dv) if (du, dv) in edges else (dv, du))
        for d in (du, dv):
            if d is not None:
                edges.append((d, new))
        if alpha == beta == 1:
            break
        if alpha < beta:
            beta, dv = beta - alpha, new
        else:
            alpha, du = alpha - beta, new
        # smooth branch, transverse to the only curve through the point
        if (alpha == 1 and du is None) or (beta == 1 and dv is None):
            break
    arrow_at = new
    vertices = [Vertex(k, v) for k, v in selfint.items()]
    return DualGraph(vertices, edges, [Arrow(arrow_at)], {"first_blowup": "D1"})


def cusp():
    """``x^2 - y^3``: the three-vertex chain D1(-3) - D3(-1) - D2(-2), arrow at D3."""
    return xp_yq(2, 3)


GERMS = {
    "smooth": (smooth, 0),
    "cusp": (cusp, 0),
    "xk-yk": (xk_yk, 1),
    "xp-yq": (xp_yq, 2),
}


def germ_generator(name, params=()):
    """Look up a germ by name; ``params`` are the integer parameters."""
    try:
        func, arity = GERMS[name]
    except KeyError:
        raise InvalidParams(f"unknown germ {name!r}; choose from {sorted(GERMS)}") from None
    if len(params) != arity:
        raise InvalidParams(f"germ {name!r} takes {arity} parameter(s), got {len(params)}")
    return func(*params)


def corpus():
    """The named test corpus: (label, graph) pairs."""
    out = [("cusp", cusp()), ("smooth", smooth())]
    out += [(f"xk-yk {k}", xk_yk(k)) for k in range(2, 7)]
    out += [(f"xp-yq {p} {q}", xp_yq(p, q)) for p, q in [(2, 3), (2, 5), (3, 4), (3, 5)]]
    return out


def _positive_int(x, name):
    try:
        val = int(x)
    except (TypeError, ValueError):
        raise InvalidParams(f"{name} must be an integer, got {x!r}") from None
    if val != x and not isinstance(x, str):
        raise InvalidParams(f"{name} must be an integer, got {x!r}")
    if val < 1:
        raise InvalidParams(f"{name} must be positive, got {val}")
    return val
