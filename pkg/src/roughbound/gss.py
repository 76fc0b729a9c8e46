"""Golden-section search on a unimodal function of one variable."""

import math

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_min(f, a, b, tol=1e-10):
    """Minimize a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x))`` where the final bracket has width <= tol.  The probe
    sequence depends only on (a, b, tol), so results are deterministic.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)

    n = int(math.ceil(math.log(tol / h) / math.log(_INV_PHI)))
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(n - 1):
        if yc < yd:
            b, d, yd = d, c, yc
            h *= _INV_PHI
            c = a + _INV_PHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= _INV_PHI
            d = a + _INV_PHI * h
            yd = f(d)
    x = 0.5 * (a + d) if yc < yd else 0.5 * (c + b)
    return x, f(x)


def golden_section_max(f, a, b, tol=1e-10):
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    x, neg = golden_section_min(lambda t: -f(t), a, b, tol)
    return x, -neg
