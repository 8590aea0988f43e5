"""Sparse univariate polynomials with exact integer coefficients."""

from __future__ import annotations

import json
from typing import Iterable, Mapping


class Polynomial:
    """Immutable polynomial stored as ``{degree: coefficient}``.

    Zero coefficients are never stored, so two equal polynomials always
    have identical internal maps.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, int] = {}
        for k, v in items:
            k, v = int(k), int(v)
            if k < 0:
                raise ValueError(f"negative degree {k}")
            c[k] = c.get(k, 0) + v
        self._c = {k: v for k, v in sorted(c.items()) if v}
        self._hash = None

    @classmethod
    def monomial(cls, coeff: int = 1, degree: int = 0) -> "Polynomial":
        return cls({degree: coeff})

    @classmethod
    def constant(cls, value: int) -> "Polynomial":
        return cls({0: value})

    # -- access -----------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def __getitem__(self, degree: int) -> int:
        return self._c.get(degree, 0)

    def __iter__(self):
        return iter(self._c.items())

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    @property
    def degree(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return max(self._c)

    @property
    def min_degree(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return min(self._c)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative exponent")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "Polynomial":
        return mono_mul(self, 1, k)

    def div_x(self, k: int = 1) -> "Polynomial":
        """Exact division by ``x**k``; raises if a low-order term remains."""
        if any(d < k for d in self._c):
            raise ValueError(f"{self} is not divisible by x^{k}")
        return Polynomial({d - k: v for d, v in self._c.items()})

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    # -- rendering --------------------------------------------------------
    def __repr__(self) -> str:
        return f"Polynomial({self._c!r})"

    def __str__(self) -> str:
        return render(self)

    def to_json(self) -> dict[str, str]:
        return to_json(self)


def _coerce(value):
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, int):
        return Polynomial({0: value})
    return NotImplemented


ZERO = Polynomial()
ONE = Polynomial({0: 1})
X = Polynomial({1: 1})


def arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def mono_mul(p: Polynomial, c: int, k: int) -> Polynomial:
    """Return ``c * x**k * p``."""
    if k < 0:
        raise ValueError("negative shift")
    return Polynomial({d + k: c * v for d, v in p._c.items()})


def eval_at_one(p: Polynomial) -> int:
    return sum(v for _, v in p)


def degree_support(p: Polynomial) -> set[int]:
    if not p:
        raise ValueError("zero polynomial has empty support")
    return {d for d, _ in p}


def render(p: Polynomial) -> str:
    """Plain text with descending degrees, e.g. ``x^4 + 7x^3 + x^2``."""
    if not p:
        return "0"
    parts = []
    for d, v in sorted(p, reverse=True):
        mag = abs(v)
        if d == 0:
            body = str(mag)
        else:
            mono = "x" if d == 1 else f"x^{d}"
            body = mono if mag == 1 else f"{mag}{mono}"
        if not parts:
            parts.append(body if v > 0 else f"-{body}")
        else:
            parts.append(("+ " if v > 0 else "- ") + body)
    return " ".join(parts)


def to_json(p: Polynomial) -> dict[str, str]:
    """Degree and coefficient both as decimal strings, highest degree first."""
    return {str(d): str(v) for d, v in sorted(p, reverse=True)}


def from_json(obj: Mapping[str, str] | str) -> Polynomial:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return Polynomial({int(k): int(v) for k, v in obj.items()})


def parse(text: str) -> Polynomial:
    """Inverse of :func:`render` (accepts ``^`` exponents and ``-`` terms)."""
    s = text.replace(" ", "")
    if s == "0":
        return ZERO
    if not s.startswith(("+", "-")):
        s = "+" + s
    terms: dict[int, int] = {}
    i = 0
    while i < len(s):
        sign = -1 if s[i] == "-" else 1
        j = i + 1
        while j < len(s) and s[j] not in "+-":
            j += 1
        tok = s[i + 1:j]
        if "x" in tok:
            coef, _, exp = tok.partition("x")
            c = int(coef) if coef else 1
            d = int(exp[1:]) if exp.startswith("^") else (1 if not exp else None)
            if d is None:
                raise ValueError(f"bad term {tok!r}")
        else:
            c, d = int(tok), 0
        terms[d] = terms.get(d, 0) + sign * c
        i = j
    return Polynomial(terms)
