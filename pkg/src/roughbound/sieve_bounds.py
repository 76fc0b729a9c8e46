"""Upper bounds for the rough-number count: inclusion-exclusion, a pre-sieved
Bonferroni truncation, and a numerically explicit Selberg sieve.

The Selberg branch sieves the integers coprime to 30 (density 4/15, remainder
at most 14/15 per divisor) with the primes in (5, y]; the sieve level is tied
to the target through D = .03 x / (log y)^3 so that the remainder term is
exactly one percent of the target .6 x / log y.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analytic import AnalyticContext, DEFAULT_CONTEXT, li
from .errors import DomainError, InfeasibleError
from .gss import golden_section_min
from .primes import PrimeTable

log = logging.getLogger(__name__)

# Sum of 1/p over the pre-sieved primes 2, 3, 5, kept exact until use.
_PRESIEVE_RECIP = Fraction(1, 2) + Fraction(1, 3) + Fraction(1, 5)  # = 31/30
PRESIEVE_DENSITY = 4.0 / 15.0
PRESIEVE_REMAINDER = 14.0 / 15.0
PRESIEVE_EXCLUDED_FACTOR = 3.0 / 14.0   # product of (1 + 2/p)^-1 over p = 2, 3, 5
SELBERG_D_COEFF = 0.03
SELBERG_MIN_Y = 241
CLOSED_FORM_MIN_Y = 500_000


# ---------------------------------------------------------------------------
# elementary inclusion-exclusion
# ---------------------------------------------------------------------------

def elementary_bound(x: float, y: float, table: PrimeTable) -> float:
    """x * prod_{p<=y}(1 - 1/p) + 2^(pi(y)-1), an upper bound for Phi(x, y).

    For y < 2 the empty-product convention would give x + 1/2; the bound is
    clamped to ceil(x), which the exact count floor(x) never exceeds.
    """
    if x < 1:
        raise DomainError(f"elementary bound needs x >= 1, got {x}")
    k = table.pi(y) if y >= 2 else 0
    if k == 0:
        return float(math.ceil(x))
    prod = float(np.multiply.reduce(1.0 - 1.0 / table.primes[:k].astype(np.float64)))
    remainder = 2.0 ** (k - 1) if k <= 63 else math.pow(2.0, k - 1)
    return x * prod + remainder


def elementary_x_bound(y: float, target: float, table: PrimeTable) -> int:
    """Least integer X0 such that the elementary bound beats target*x/log(q)
    for every x >= X0, where q is the first prime above y (the worst log in
    the interval [y, q))."""
    k = table.pi(y)
    if k == 0:
        raise DomainError(f"x-bound needs at least one prime <= y, got y={y}")
    q = table.next_prime(y)
    prod = float(np.multiply.reduce(1.0 - 1.0 / table.primes[:k].astype(np.float64)))
    remainder = 2.0 ** (k - 1) if k <= 63 else math.pow(2.0, k - 1)
    slope = target / math.log(q) - prod
    if slope <= 0:
        raise InfeasibleError(
            f"target {target} never beats the Mertens product {prod} at y={y}"
        )

    def beats(x: float) -> bool:
        return prod * x + remainder < target * x / math.log(q)

    x0 = max(1, int(remainder / slope))
    while not beats(x0):
        x0 += 1
    while x0 > 1 and beats(x0 - 1):
        x0 -= 1
    return x0


# ---------------------------------------------------------------------------
# Bonferroni truncation after the mod-30 pre-sieve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BonferroniData:
    """Intermediates of the depth-4 truncated inclusion-exclusion."""

    y: float
    power_sums: tuple[float, float, float, float]
    elementary: tuple[float, float, float, float, float]  # e_0 .. e_4
    s_y: float
    b_y: int
    nu_truncation: int = 4


def newton_elementary(p1: float, p2: float, p3: float, p4: float):
    """Elementary symmetric functions e_1..e_4 from power sums p_1..p_4."""
    e1 = p1
    e2 = (e1 * p1 - p2) / 2.0
    e3 = (e2 * p1 - e1 * p2 + p3) / 3.0
    e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0
    return e1, e2, e3, e4


def bonferroni_bound(x: float, y: float, table: PrimeTable):
    """Upper bound x*s(y) + b(y) from the even-depth truncation at nu <= 4,
    applied to the integers coprime to 30 and the primes in (5, y]."""
    if y < 5:
        raise DomainError(f"the pre-sieved truncation needs y >= 5, got {y}")
    psums = tuple(table.power_sum(k, 5, y) for k in (1, 2, 3, 4))
    e1, e2, e3, e4 = newton_elementary(*psums)
    s_y = PRESIEVE_DENSITY * (1.0 - e1 + e2 - e3 + e4)
    k = table.pi(y) - 3
    b_y = sum(math.comb(k, i) for i in range(5))
    data = BonferroniData(y=float(y), power_sums=psums,
                          elementary=(1.0, e1, e2, e3, e4), s_y=s_y, b_y=b_y)
    return x * s_y + b_y, data


def bonferroni_x_bound(y: float, target: float, table: PrimeTable, *,
                       remainder_scale: float = PRESIEVE_REMAINDER) -> int:
    """Least integer X0 with x*s(y) + scale*b(y) < target*x/log(q) for x >= X0.

    Each pre-sieved remainder is at most 14/15 in absolute value, so the
    constant term b(y) may be scaled by 14/15; that refinement is what keeps
    every bound below 3e7 on the mid-y range.
    """
    _, data = bonferroni_bound(1.0, y, table)
    q = table.next_prime(y)
    slope = target / math.log(q) - data.s_y
    if slope <= 0:
        raise InfeasibleError(f"target {target} never beats s(y)={data.s_y} at y={y}")
    const = remainder_scale * data.b_y

    def beats(x: float) -> bool:
        return data.s_y * x + const < target * x / math.log(q)

    x0 = max(1, int(const / slope))
    while not beats(x0):
        x0 += 1
    while x0 > 1 and beats(x0 - 1):
        x0 -= 1
    return x0


# ---------------------------------------------------------------------------
# Selberg sieve, numerically explicit form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SieveConfig:
    """Parameters of one Selberg-sieve evaluation.

    With the mod-30 pre-sieve the sifted set has X = 4x/15 members up to a
    remainder of at most r = 14/15 per divisor, the sieving primes are those
    in (5, y], and the excluded primes 2, 3, 5 contribute the exact factor
    3/14 to the remainder estimate.  V is the product of (1 - 1/p) over the
    sieving primes and f_value is the Rankin bound for IV; the main term is
    X*V / (1 - f_value) whenever f_value < 1.
    """

    x: float
    y: float
    epsilon: float
    D: float
    X: float
    r: float
    excluded_factor: float
    V: float
    f_value: float
    presieve_modulus: int = 30


def default_sieve_level(x: float, y: float) -> float:
    """D = .03 x / (log y)^3, which makes the remainder .006 x / log y."""
    return SELBERG_D_COEFF * x / math.log(y) ** 3


def make_sieve_config(x: float, y: float, table: PrimeTable, epsilon: float, *,
                      D: float | None = None, presieve: bool = True) -> SieveConfig:
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if D is None:
        D = default_sieve_level(x, y)
    if presieve:
        lo, X, r, excl, modulus = 5.0, PRESIEVE_DENSITY * x, PRESIEVE_REMAINDER, PRESIEVE_EXCLUDED_FACTOR, 30
    else:
        lo, X, r, excl, modulus = 1.0, float(x), 1.0, 1.0, 1
    ps = table.primes_between(lo, y).astype(np.float64)
    V = float(np.exp(np.sum(np.log1p(-1.0 / ps))))
    s = float(np.sum(np.log1p((ps ** (2.0 * epsilon) - 1.0) / ps)))
    f = math.exp(s - epsilon * math.log(D))
    return SieveConfig(x=float(x), y=float(y), epsilon=float(epsilon), D=float(D),
                       X=X, r=r, excluded_factor=excl, V=V, f_value=f,
                       presieve_modulus=modulus)


def lemma2_remainder(y: float, D: float, r: float, excluded_factor: float) -> float:
    """r * D * (log y)^2 * excluded_factor, the divisor-count remainder bound.

    The (log y)^2 estimate for the divisor sum holds for y >= 53.
    """
    if y < 53:
        raise DomainError(f"the (log y)^2 divisor bound needs y >= 53, got {y}")
    if D <= 0:
        raise DomainError(f"sieve level D must be positive, got {D}")
    return r * D * math.log(y) ** 2 * excluded_factor


def selberg_upper(x: float, y: float, cfg: SieveConfig, table: PrimeTable) -> float:
    """The explicit Selberg upper bound X*V*(1 - f)^-1 + remainder at (x, y)."""
    if y < SELBERG_MIN_Y:
        raise DomainError(f"the explicit sieve bound needs y >= {SELBERG_MIN_Y}, got {y}")
    if cfg.f_value >= 1.0:
        raise InfeasibleError(
            f"Rankin factor f={cfg.f_value:.6f} >= 1 at epsilon={cfg.epsilon}; re-choose epsilon"
        )
    main = cfg.X * cfg.V / (1.0 - cfg.f_value)
    return main + lemma2_remainder(y, cfg.D, cfg.r, cfg.excluded_factor)


def optimize_epsilon(x: float, y: float, table: PrimeTable, *,
                     bracket: tuple[float, float] = (1e-3, 0.5), tol: float = 1e-6) -> float:
    """Exponent minimizing the Rankin factor f(D, epsilon) at D = .03x/(log y)^3.

    Deterministic golden-section search; f is log-convex in epsilon, so the
    minimum is unique.  If the minimum pins to a bracket end, that end is
    returned and a warning is logged.
    """
    if y < SELBERG_MIN_Y:
        raise DomainError(f"epsilon optimization targets y >= {SELBERG_MIN_Y}, got {y}")
    log_d = math.log(default_sieve_level(x, y))
    ps = table.primes_between(5, y).astype(np.float64)

    def f(eps: float) -> float:
        s = float(np.sum(np.log1p((ps ** (2.0 * eps) - 1.0) / ps)))
        return s - eps * log_d  # log f; same minimizer

    eps, _ = golden_section_min(f, bracket[0], bracket[1], tol=tol)
    if eps - bracket[0] < 2 * tol or bracket[1] - eps < 2 * tol:
        log.warning("epsilon optimizer pinned to bracket boundary at (x=%.3g, y=%s)", x, y)
    return eps


# ---------------------------------------------------------------------------
# closed-form branch for large y (x = y^7.5, epsilon = 1/log y)
# ---------------------------------------------------------------------------

def s_y_closed_form(y: float, ctx: AnalyticContext = DEFAULT_CONTEXT) -> float:
    """Closed-form exponent S(y) bounding the Rankin sum for y >= 500000.

    S(y) combines the explicit Mertens bound
    -sum_{5<p<=y} 1/p < -loglog y - .26 + 31/30 with the li-based bound for
    sum_{5<p<=y} p^(2 eps - 1) at eps = 1/log y, where li(y^(2 eps)) = li(e^2)
    exactly.
    """
    if y < CLOSED_FORM_MIN_Y:
        raise DomainError(
            f"closed form asserted for y >= {CLOSED_FORM_MIN_Y}, got {y}; "
            "use the finite-product branch below that"
        )
    eps = 1.0 / math.log(y)
    a = 2.0 * eps - 1.0
    recip_part = -math.log(math.log(y)) - 0.26 + float(_PRESIEVE_RECIP)
    power_part = (7.0 ** a) + (li(11.0) - 4.0) * 11.0 ** a + li(math.exp(2.0)) - li(11.0 ** (2.0 * eps))
    return recip_part + (1.0 + ctx.beta0) * power_part


def closed_form_factor(y: float, ctx: AnalyticContext = DEFAULT_CONTEXT) -> float:
    """(1 - D^-eps e^S(y))^-1 at x = y^7.5, eps = 1/log y."""
    eps = 1.0 / math.log(y)
    log_d = math.log(SELBERG_D_COEFF) + 7.5 * math.log(y) - 3.0 * math.log(math.log(y))
    f_upper = math.exp(s_y_closed_form(y, ctx) - eps * log_d)
    if f_upper >= 1.0:
        raise InfeasibleError(f"closed-form Rankin bound {f_upper:.4f} >= 1 at y={y}")
    return 1.0 / (1.0 - f_upper)


def final_large_y_bound(y: float, ctx: AnalyticContext = DEFAULT_CONTEXT) -> float:
    """Coefficient of x / log y in the closed-form sieve bound at x = y^7.5.

    (1 + 2.1e-5) e^-gamma (1 - D^-eps e^S)^-1 + .006; below .6 proves the
    target on this branch.
    """
    factor = closed_form_factor(y, ctx)
    return (1.0 + ctx.mertens_slack) * math.exp(-ctx.euler_gamma) * factor + 0.006


# ---------------------------------------------------------------------------
# verified sweep over consecutive primes (finite-product branch)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    """Audit record for one prime pair (y, q): coefficient of x/log q at x=y^7.5."""

    y: int
    q: int
    epsilon: float
    f_value: float
    coefficient: float
    margin: float


def selberg_sweep(table: PrimeTable, *, lo: int = SELBERG_MIN_Y, hi: int = CLOSED_FORM_MIN_Y,
                  target: float = 0.6, eps_grid: np.ndarray | None = None) -> list[SweepRow]:
    """Evaluate the sieve bound at x = p^7.5 for every consecutive-prime pair
    p < q with lo <= p <= hi, against target * x / log q.

    Because the sieving primes only change at primes, each pair needs a single
    product over primes <= p; products are accumulated incrementally via
    prefix sums, and epsilon is chosen per pair as the best point of a fixed
    grid (any grid point yields a valid bound).  The sieve level uses log q,
    the worst y in the interval.
    """
    if eps_grid is None:
        eps_grid = np.linspace(0.04, 0.26, 111)
    eps_grid = np.asarray(eps_grid, dtype=np.float64)

    last = table.next_prime(hi)
    ps = table.primes_between(5, last).astype(np.float64)   # sieving primes 7..last
    # prefix of log(1 + (p^2e - 1)/p) per epsilon, and of log(1 - 1/p)
    with np.errstate(over="raise"):
        mat = np.log1p((ps[:, None] ** (2.0 * eps_grid[None, :]) - 1.0) / ps[:, None])
    cum_eps = np.cumsum(mat, axis=0)
    cum_v = np.cumsum(np.log1p(-1.0 / ps))

    pairs_p = table.primes_between(lo - 1, hi)               # primes in [lo, hi]
    rows: list[SweepRow] = []
    for p in pairs_p:
        p = int(p)
        q = table.next_prime(p)
        i = int(np.searchsorted(ps, p, side="right")) - 1
        log_q = math.log(q)
        log_d = math.log(SELBERG_D_COEFF) + 7.5 * math.log(p) - 3.0 * math.log(log_q)
        f_vec = np.exp(cum_eps[i] - eps_grid * log_d)
        k = int(np.argmin(f_vec))
        f_best = float(f_vec[k])
        v_full = PRESIEVE_DENSITY * math.exp(cum_v[i])       # product over all p' <= p
        if f_best >= 1.0:
            rows.append(SweepRow(p, q, float(eps_grid[k]), f_best, math.inf, -math.inf))
            continue
        coefficient = v_full * log_q / (1.0 - f_best) + 0.006
        rows.append(SweepRow(p, q, float(eps_grid[k]), f_best, coefficient,
                             target - coefficient))
    return rows


# ---------------------------------------------------------------------------
# exact divisor enumerations (exponential in the number of primes; test-only)
# ---------------------------------------------------------------------------

def selberg_divisor_sums(primes, D):
    """Exact (J, I, V) over the squarefree divisors of the product of ``primes``:
    J sums 1/phi(d) over d < sqrt(D), I over d >= sqrt(D), V = prod (1 - 1/p).

    Cost is 2^len(primes); intended for identity checks on small prime sets.
    """
    primes = [int(p) for p in primes]
    j_sum = Fraction(0)
    i_sum = Fraction(0)
    divisors = [(1, Fraction(1))]  # (d, 1/phi(d))
    for p in primes:
        divisors += [(d * p, h / (p - 1)) for d, h in divisors]
    for d, h in divisors:
        if d * d < D:
            j_sum += h
        else:
            i_sum += h
    v = Fraction(1)
    for p in primes:
        v *= Fraction(p - 1, p)
    return j_sum, i_sum, v


def tau3_divisor_sum(primes, D):
    """Sum of tau_3(d) over squarefree d < D dividing the product of ``primes``;
    tau_3(d) = 3^(number of prime factors) for squarefree d."""
    primes = sorted(int(p) for p in primes)
    total = 0
    stack = [(0, 1, 0)]  # (next index, product, prime count)
    while stack:
        i, d, nu = stack.pop()
        total += 3 ** nu
        for k in range(i, len(primes)):
            nd = d * primes[k]
            if nd >= D:
                break
            stack.append((k + 1, nd, nu + 1))
    return total
