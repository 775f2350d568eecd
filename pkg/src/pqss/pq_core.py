"""Arithmetic layer for (p,q)-integers.

Everything downstream (basis weights, moments, convergence tables) reduces to
the bracket numbers

    [k] = (p^k - q^k) / (p - q),      [0] = 0,

their factorials and binomials, and the rising products
prod_{j=0}^{m-1} (p^j - q^j x) that appear in the operator weights.  Two
evaluation styles live here: plain double precision for small problems, and a
log-space path (sign, log magnitude) that stays finite when the direct
products under- or overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_FACTORIAL_CAP = 10_000


@dataclass(frozen=True)
class PQPair:
    """A validated parameter pair with 0 < q < p <= 1."""

    p: float
    q: float

    def __post_init__(self):
        if not (0.0 < self.q < self.p <= 1.0):
            raise ValueError(
                f"requires 0 < q < p <= 1 (got p={self.p}, q={self.q})"
            )


def pq_integer(k: int, pq: PQPair) -> float:
    """Bracket number [k] = (p^k - q^k)/(p - q), with [0] = 0.

    Evaluated as p^k * (1 - (q/p)^k) / (p - q) through expm1/log1p so that
    nearby p and q do not cancel; the naive difference loses ~3 digits at
    p=0.999, q=0.998 and that error compounds over long factorial sums.
    """
    if k < 0:
        raise ValueError(f"requires k >= 0 (got k={k})")
    if k == 0:
        return 0.0
    if k == 1:
        return 1.0
    p, q = pq.p, pq.q
    log_ratio = math.log1p((q - p) / p)
    return -(p ** k) * math.expm1(k * log_ratio) / (p - q)


def pq_factorial(k: int, pq: PQPair, cap: int = DEFAULT_FACTORIAL_CAP) -> float:
    """[k]! = [1][2]...[k], empty product 1.  Refuses k above `cap`."""
    if k < 0:
        raise ValueError(f"requires k >= 0 (got k={k})")
    if k > cap:
        raise ValueError(f"requires k <= {cap} (got k={k}); raise cap explicitly if intended")
    acc = 1.0
    for j in range(2, k + 1):
        acc *= pq_integer(j, pq)
    return acc


def pq_binomial(n: int, k: int, pq: PQPair) -> float:
    """[n]! / ([k]! [n-k]!).  Requires 0 <= k <= n."""
    if not (0 <= k <= n):
        raise ValueError(f"requires 0 <= k <= n (got n={n}, k={k})")
    return pq_factorial(n, pq) / (pq_factorial(k, pq) * pq_factorial(n - k, pq))


def rising_product(m: int, x: float, pq: PQPair) -> float:
    """Direct product prod_{j=0}^{m-1} (p^j - q^j x), empty product 1.

    Plain double precision; under/overflows for large m are the caller's
    problem (use log_rising_product there).
    """
    if m < 0:
        raise ValueError(f"requires m >= 0 (got m={m})")
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"requires x in [0, 1] (got x={x})")
    p, q = pq.p, pq.q
    acc = 1.0
    pj = 1.0
    qj = 1.0
    for _ in range(m):
        acc *= pj - qj * x
        pj *= p
        qj *= q
    return acc


def _log_rising_terms(m: int, x: float, pq: PQPair) -> list[float]:
    """Logs of the factors p^j - q^j x for j = 0..m-1, each factor > 0.

    Factor j is rewritten as p^j * (1 - x (q/p)^j) and the parenthesis taken
    through expm1, which stays accurate when x (q/p)^j is close to 1 (x near
    1 with p - q small), exactly where the direct subtraction cancels.
    """
    p, q = pq.p, pq.q
    log_p = math.log(p)
    log_ratio = math.log1p((q - p) / p)
    if x == 0.0:
        return [j * log_p for j in range(m)]
    log_x = math.log(x)
    return [
        j * log_p + math.log(-math.expm1(j * log_ratio + log_x))
        for j in range(m)
    ]


def log_rising_product(m: int, x: float, pq: PQPair) -> tuple[int, float]:
    """Rising product as (sign, log magnitude).

    sign is 0 exactly when a factor vanishes, which happens iff x = 1 and
    m >= 1 (the j = 0 factor); the log is then -inf.  All other factors are
    strictly positive under 0 < q < p, so sign is otherwise +1.  Agrees with
    rising_product to ~1e-13 relative wherever the direct product is
    representable.
    """
    if m < 0:
        raise ValueError(f"requires m >= 0 (got m={m})")
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"requires x in [0, 1] (got x={x})")
    if m >= 1 and x == 1.0:
        return 0, -math.inf
    return 1, math.fsum(_log_rising_terms(m, x, pq))


def compensated_cumsum(values) -> np.ndarray:
    """Running prefix sums with Neumaier compensation.

    Naive cumulative sums of ~2000 log-factorial terms drift around 1e-10;
    the compensated version keeps every prefix near 1e-13, which the long
    partition-of-unity checks rely on.
    """
    out = np.empty(len(values))
    s = 0.0
    c = 0.0
    for i, v in enumerate(values):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i] = s + c
    return out


@lru_cache(maxsize=512)
def cumulative_log_factorials(kmax: int, p: float, q: float) -> np.ndarray:
    """Array lf with lf[k] = log([k]!) for k = 0..kmax, compensated sums.

    Keyed on raw floats for caching; construct the PQPair internally so the
    usual validation still applies.  The returned array is read-only.
    """
    pq = PQPair(p, q)
    logs = [math.log(pq_integer(j, pq)) for j in range(1, kmax + 1)]
    lf = np.zeros(kmax + 1)
    if kmax >= 1:
        lf[1:] = compensated_cumsum(logs)
    lf.setflags(write=False)
    return lf
