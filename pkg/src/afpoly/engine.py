"""Anti-forcing polynomials: tail recurrence, chain recurrence, families.

The recurrence peels a tail off the system and expresses the polynomial
through those of at most four residual forests.  A brute-force route
(:func:`brute_af_poly`) sums ``x**af(G, M)`` over all perfect matchings
and serves as the oracle for everything else here.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional, Sequence, Union

from . import matchcore
from .exceptions import HexSystemError, InvariantError
from .hexmodel import (
    HexSystem,
    Tail,
    canonical_key,
    find_tail,
    hl_system,
    subsystems,
)
from .poly import ONE, X, Polynomial, degree_support, mono_mul

Forest = Union[HexSystem, Sequence[HexSystem]]

TWO_X = Polynomial({1: 2})


class MemoCache:
    """canonical key -> polynomial.  Inserting a different value for an
    existing key is an error; concurrent readers are fine."""

    def __init__(self):
        self._data: dict[bytes, Polynomial] = {}
        self._lock = threading.Lock()

    def get(self, key: bytes) -> Optional[Polynomial]:
        return self._data.get(key)

    def put(self, key: bytes, value: Polynomial) -> None:
        with self._lock:
            old = self._data.setdefault(key, value)
        if old != value:
            raise InvariantError(f"cache conflict for key {key!r}")

    def clear(self) -> None:
        with self._lock:
            self._data.clear()

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key: bytes) -> bool:
        return key in self._data


DEFAULT_CACHE = MemoCache()


def _as_forest(f: Forest) -> Sequence[HexSystem]:
    return (f,) if isinstance(f, HexSystem) else tuple(f)


def af_poly(f: Forest, cache: Optional[MemoCache] = DEFAULT_CACHE) -> Polynomial:
    """Anti-forcing polynomial of a system or a forest of systems.

    Components multiply; the empty forest gives 1.  Pass ``cache=None`` to
    disable memoisation.
    """
    result = ONE
    for comp in _as_forest(f):
        result = result * _component_poly(comp, cache)
    return result


def _component_poly(h: HexSystem, cache: Optional[MemoCache]) -> Polynomial:
    if len(h) == 1:
        return TWO_X
    key = canonical_key(h) if cache is not None else None
    if key is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit
    value = af_poly_with_tail(h, find_tail(h), cache)
    if key is not None:
        cache.put(key, value)
    return value


def af_poly_with_tail(h: HexSystem, tail: Tail, cache: Optional[MemoCache] = DEFAULT_CACHE) -> Polynomial:
    """One step of the tail recurrence at ``tail``; subproblems use default tails."""
    if len(h) == 1:
        return TWO_X
    subs = subsystems(h, tail)
    a1 = af_poly(subs.H1, cache)
    a2 = af_poly(subs.H2, cache)
    a3 = af_poly(subs.H3, cache)
    t1, t2, t3 = tail.t1, tail.t2, tail.t3
    if t2 == -1:
        result = mono_mul(a2, 1, 1) + mono_mul(a3, 1, 1)
        if t1 >= 0:
            result += mono_mul(a1, 1, 1) + mono_mul(a2, t1, 2) - mono_mul(a3, 1, 2)
    else:
        weight = Polynomial({2: 3, 3: 2 * (t1 + t2), 4: t1 * t2})
        result = mono_mul(a1, 1, 2) + weight * a2 - mono_mul(a3, 1, 3)
        if t3 == 0:
            a4 = af_poly(subs.H4, cache)
            result += mono_mul(a2, 1, 1) - mono_mul(a4, 1, 2)
        else:
            result += mono_mul(a3, 1, 2)
    if any(c <= 0 for _, c in result):
        raise InvariantError(f"non-positive coefficient in {result} for {h.to_hextree()}")
    return result


def brute_af_poly(h: HexSystem, certify: bool = True) -> Polynomial:
    """Sum of ``x**af(G, M)`` over all perfect matchings, from first principles."""
    g = matchcore.build_graph(h)
    counts: dict[int, int] = {}
    for m in matchcore.enumerate_perfect_matchings(g):
        k = matchcore.af_number(g, m, certify=certify)
        counts[k] = counts.get(k, 0) + 1
    return Polynomial(counts)


# ---------------------------------------------------------------------------
# hexagonal chains Hl(r_1, ..., r_n)
# ---------------------------------------------------------------------------

_EMPTY = None  # the empty graph in chain bookkeeping


def _decrement(r: tuple[int, ...]):
    """Hl(r_1..r_k - 1), with Hl(.., -1) = Hl(..) and Hl(r_0 - 1) empty."""
    if not r:
        return _EMPTY
    last = r[-1] - 1
    return r[:-1] if last == -1 else r[:-1] + (last,)


def chain_af_poly(r: Iterable[int]) -> Polynomial:
    """Anti-forcing polynomial of the chain whose segments hold r_i + 2 hexagons."""
    r = tuple(r)
    if any(v < 0 for v in r):
        raise ValueError("chain entries must be non-negative")
    memo: dict = {}

    def af(spec) -> Polynomial:
        if spec is _EMPTY:
            return ONE
        if not spec:
            return TWO_X
        if spec in memo:
            return memo[spec]
        n = len(spec)
        h2 = _decrement(spec[:-1])
        h3 = _EMPTY if n < 2 else _decrement(spec[:-2])
        value = (
            Polynomial({1: 1, 2: spec[-1]}) * af(h2)
            + Polynomial({1: 1, 2: -1}) * af(h3)
            + X * af(spec[:-1])
        )
        memo[spec] = value
        return value

    return af(r)


# ---------------------------------------------------------------------------
# the P / Q / R families
# ---------------------------------------------------------------------------

FAMILY_BASES = {
    "P": (Polynomial({2: 1, 1: 2}), Polynomial({4: 1, 3: 7, 2: 1}), Polynomial({6: 1, 5: 6, 4: 11, 3: 6})),
    "Q": (Polynomial({1: 2}), Polynomial({3: 1, 2: 3, 1: 1}), Polynomial({5: 1, 4: 4, 3: 8, 2: 1})),
    "R": (ONE, Polynomial({2: 1, 1: 2}), Polynomial({4: 1, 3: 2, 2: 5})),
}

_X2_MINUS_X3 = Polynomial({2: 2, 3: -2})
_X_PLUS_3X2 = Polynomial({1: 1, 2: 3})


def family_table(n_max: int, route: str = "QR") -> dict[str, list[Polynomial]]:
    """P, Q, R for 0..n_max, tabulated together from the nine base values.

    ``route="QR"`` closes Q and R on their own (Q from three lags of R,
    R from one lag of Q) and recovers P_n by solving the one-lag Q
    recurrence that involves P.  ``route="PQR"`` instead steps P with three
    lags of Q, and Q, R with one lag each.  The two routes share no
    recurrence for P, so their agreement is a genuine cross-check.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    p = list(FAMILY_BASES["P"])
    q = list(FAMILY_BASES["Q"])
    r = list(FAMILY_BASES["R"])
    if route == "QR":
        for n in range(3, n_max + 2):
            r.append(_r_step(q, r, n))
            q.append(_q_from_r(q, r, n))
        for n in range(3, n_max + 1):
            p.append(p_from_q(q, n))
    elif route == "PQR":
        for n in range(3, n_max + 1):
            p.append(p_step(p, q, n))
            q.append(q_from_p(p, q, n))
            r.append(_r_step(q, r, n))
    else:
        raise ValueError(f"unknown route {route!r}")
    return {"P": p[: n_max + 1], "Q": q[: n_max + 1], "R": r[: n_max + 1]}


def _r_step(q, r, n):
    return X * q[n - 1] + X * r[n - 1] + _X2_MINUS_X3 * r[n - 2]


def _q_from_r(q, r, n):
    return (
        mono_mul(q[n - 1], 1, 2)
        + _X_PLUS_3X2 * r[n - 1]
        - mono_mul(r[n - 2], 2, 4)
        - mono_mul(r[n - 3], 2, 3)
    )


def q_from_p(p, q, n) -> Polynomial:
    """Q_n from P_{n-1}, Q_{n-1}, Q_{n-2}."""
    return X * p[n - 1] + X * q[n - 1] + _X2_MINUS_X3 * q[n - 2]


def p_from_q(q, n) -> Polynomial:
    """P_n by inverting :func:`q_from_p` at n + 1."""
    return (q[n + 1] - X * q[n] - _X2_MINUS_X3 * q[n - 1]).div_x()


def p_step(p, q, n) -> Polynomial:
    """P_n from P_{n-1} and three lags of Q."""
    return (
        mono_mul(p[n - 1], 1, 2)
        + _X_PLUS_3X2 * q[n - 1]
        - mono_mul(q[n - 2], 2, 4)
        - mono_mul(q[n - 3], 2, 3)
    )


def family_poly(f: str, n: int) -> Polynomial:
    if f not in FAMILY_BASES:
        raise ValueError(f"family must be P, Q or R, got {f!r}")
    if n < 0:
        raise ValueError("n must be non-negative")
    return family_table(max(n, 2))[f][n]


def family_R_closed_form(n: int, literal_a_bound: bool = False) -> Polynomial:
    """R_n as four signed triple binomial sums.

    Each sum extracts the ``t**n`` coefficient of one numerator term times
    ``sum_a C(k+a, a) x^(2a) t^a (1+t)^a * sum_c C(k+c, c) 2^c x^(2c) t^(2c)``.
    The inner index ``b = n - k - a - 2c`` must lie in ``[0, a]``, so ``a``
    runs up to ``n - k``.  ``literal_a_bound`` caps it at ``(n - k) // 2``
    instead, which loses terms (kept only to demonstrate that).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    terms: dict[int, int] = {}
    for shift, offset, sign in ((0, 0, 1), (1, 1, 1), (2, 3, -1), (3, 3, -1)):
        m = n - shift
        for k in range(0, m + 1):
            a_top = (m - k) // 2 if literal_a_bound else m - k
            for a in range(0, a_top + 1):
                lo = max(0, -((-(m - k - 2 * a)) // 2))  # ceil, clamped at 0
                hi = (m - k - a) // 2
                for c in range(lo, hi + 1):
                    coef = comb(k + a, a) * _binom(a, m - k - a - 2 * c) * comb(k + c, c) * 2**c
                    if coef:
                        d = k + 2 * a + 2 * c + offset
                        terms[d] = terms.get(d, 0) + sign * coef
    return Polynomial(terms)


def _binom(top: int, bottom: int) -> int:
    return comb(top, bottom) if 0 <= bottom <= top else 0


def family_system(f: str, n: int) -> HexSystem:
    """The system whose polynomial is ``family_poly(f, n)``.

    R_n is a zig-zag spine X_1..X_n, each spine hexagon carrying one
    pendant so that every row {X_i, pendant} is a straight pair; Q adds a
    spine hexagon above X_n and P also adds one below X_1.
    """
    if f not in FAMILY_BASES:
        raise ValueError(f"family must be P, Q or R, got {f!r}")
    if n < 0:
        raise ValueError("n must be non-negative")
    if f == "R" and n == 0:
        raise HexSystemError("R_0 is the empty graph, not a hexagonal system")
    spine = [(0, 0)]
    for i in range(1, n + (f in "PQ")):
        q, r = spine[-1]
        spine.append((q - 1, r + 1) if i % 2 else (q, r + 1))
    cells = set(spine)
    for i in range(n):
        q, r = spine[i]
        cells.add((q + 1, r) if i % 2 == 0 else (q - 1, r))
    if f == "P":
        cells.add((0, -1))
    return HexSystem.from_cells(cells)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    degrees: frozenset[int]

    @property
    def min(self) -> int:
        return min(self.degrees)

    @property
    def max(self) -> int:
        return max(self.degrees)

    @property
    def contiguous(self) -> bool:
        return len(self.degrees) == self.max - self.min + 1

    def as_dict(self) -> dict:
        return {"degrees": sorted(self.degrees), "min": self.min, "max": self.max, "contiguous": self.contiguous}


def spectrum(f: Forest, cache: Optional[MemoCache] = DEFAULT_CACHE) -> Spectrum:
    s = Spectrum(frozenset(degree_support(af_poly(f, cache))))
    if not s.contiguous:
        raise InvariantError(f"non-contiguous anti-forcing spectrum {sorted(s.degrees)}")
    return s


def hl_af_poly(r: Iterable[int]) -> Polynomial:
    """Recurrence polynomial of the geometric chain Hl(r)."""
    return af_poly(hl_system(r))


def family_closed_form(f: str, n: int) -> Polynomial:
    """P_n, Q_n or R_n built only from closed-form R values.

    Q_n and P_n are peeled off the one-lag recurrences, each step an exact
    division by ``x``.
    """
    if f == "R":
        return family_R_closed_form(n)
    if f == "Q":
        if n == 0:
            return FAMILY_BASES["Q"][0]
        r = [family_R_closed_form(k) for k in range(n - 1, n + 2)]
        return (r[2] - X * r[1] - _X2_MINUS_X3 * r[0]).div_x()
    if f == "P":
        if n == 0:
            return FAMILY_BASES["P"][0]
        q = [family_closed_form("Q", k) for k in range(n - 1, n + 2)]
        return (q[2] - X * q[1] - _X2_MINUS_X3 * q[0]).div_x()
    raise ValueError(f"family must be P, Q or R, got {f!r}")
