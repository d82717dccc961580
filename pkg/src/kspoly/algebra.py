"""Exact rational scalars and sparse bivariate polynomials.

Every coefficient in this package is a ``fractions.Fraction``: arithmetic is
exact, values are stored in lowest terms with positive denominator, and
``str()`` round-trips through the "p/q" wire format used by the exporters.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import perm
from typing import Iterator, Mapping, Union

Rational = Fraction

Scalar = Union[Fraction, int]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q". Decimal strings are rejected: exactness end to end."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not an exact rational: {text!r} (use 'p' or 'p/q')")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in rational {text!r}") from None


def format_rational(q: Scalar) -> str:
    """Inverse of parse_rational: "3", "-2/9", ..."""
    return str(Fraction(q))


def rising_factorial(z: Scalar, n: int) -> Fraction:
    """z(z+1)...(z+n-1); the empty product (n=0) is 1."""
    if n < 0:
        raise ValueError("rising factorial order must be nonnegative")
    out = Fraction(1)
    z = Fraction(z)
    for i in range(n):
        out *= z + i
    return out


def _term_key(item: tuple[tuple[int, int], Fraction]) -> tuple[int, int]:
    # graded lexicographic: total degree ascending, then x-exponent descending
    (i, j), _ = item
    return (i + j, -i)


class BivariatePoly:
    """Sparse polynomial in x and y over the rationals.

    Terms map exponent pairs (i, j) to nonzero Fraction coefficients; the
    zero polynomial stores nothing and reports degree -1.  Instances are
    immutable: every operation returns a fresh polynomial.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent ({i}, {j})")
                c = Fraction(c)
                if c:
                    clean[(i, j)] = c
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "BivariatePoly":
        return cls()

    @classmethod
    def constant(cls, c: Scalar) -> "BivariatePoly":
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def variable(cls, name: str) -> "BivariatePoly":
        if name == "x":
            return cls({(1, 0): Fraction(1)})
        if name == "y":
            return cls({(0, 1): Fraction(1)})
        raise ValueError(f"unknown variable {name!r}")

    @classmethod
    def monomial(cls, i: int, j: int, c: Scalar = 1) -> "BivariatePoly":
        return cls({(i, j): Fraction(c)})

    # -- inspection --------------------------------------------------------

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        """Terms in canonical order (degree ascending, x-exponent descending)."""
        return iter(sorted(self._terms.items(), key=_term_key))

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(i + j for (i, j) in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        out = dict(self._terms)
        for key, c in other._terms.items():
            s = out.get(key, Fraction(0)) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return _wrap(out)

    def __neg__(self) -> "BivariatePoly":
        return _wrap({key: -c for key, c in self._terms.items()})

    def __sub__(self, other: "BivariatePoly") -> "BivariatePoly":
        return self + (-other)

    def __mul__(self, other: Union["BivariatePoly", Scalar]) -> "BivariatePoly":
        if isinstance(other, BivariatePoly):
            out: dict[tuple[int, int], Fraction] = {}
            for (i1, j1), c1 in self._terms.items():
                for (i2, j2), c2 in other._terms.items():
                    key = (i1 + i2, j1 + j2)
                    s = out.get(key, Fraction(0)) + c1 * c2
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
            return _wrap(out)
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return BivariatePoly()
            return _wrap({key: v * c for key, v in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other: Scalar) -> "BivariatePoly":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "BivariatePoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = BivariatePoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, var: str, order: int = 1) -> "BivariatePoly":
        """Exact partial derivative of the given order with respect to x or y."""
        if var not in ("x", "y"):
            raise ValueError(f"unknown variable {var!r}")
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        if order == 0:
            return self
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in self._terms.items():
            e = i if var == "x" else j
            if e < order:
                continue
            scale = perm(e, order)  # e(e-1)...(e-order+1)
            key = (i - order, j) if var == "x" else (i, j - order)
            out[key] = c * scale
        return _wrap(out)

    def evaluate(self, x: Scalar, y: Scalar) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        total = Fraction(0)
        for (i, j), c in self._terms.items():
            total += c * x**i * y**j
        return total

    # -- structural maps ---------------------------------------------------

    def negate_var(self, var: str) -> "BivariatePoly":
        """p(-x, y) for var 'x', p(x, -y) for var 'y'."""
        if var not in ("x", "y"):
            raise ValueError(f"unknown variable {var!r}")
        pos = 0 if var == "x" else 1
        return _wrap(
            {key: (-c if key[pos] % 2 else c) for key, c in self._terms.items()}
        )

    def swap_vars(self) -> "BivariatePoly":
        """p(y, x)."""
        return _wrap({(j, i): c for (i, j), c in self._terms.items()})

    def halve_even_exponents(self) -> "BivariatePoly":
        """q with q(u, v) = p(sqrt(u), sqrt(v)); every exponent must be even."""
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in self._terms.items():
            if i % 2 or j % 2:
                raise ValueError(f"odd exponent ({i}, {j}) cannot be halved")
            out[(i // 2, j // 2)] = c
        return _wrap(out)

    # -- serialization -----------------------------------------------------

    def to_records(self) -> list[dict[str, object]]:
        return [{"i": i, "j": j, "c": str(c)} for (i, j), c in self.items()]

    @classmethod
    def from_records(cls, records: list[dict[str, object]]) -> "BivariatePoly":
        return cls(
            {
                (int(r["i"]), int(r["j"])): parse_rational(str(r["c"]))
                for r in records
            }
        )

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        # display with the highest degree first
        parts = []
        for (i, j), c in sorted(self._terms.items(), key=_term_key, reverse=True):
            mono = "".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in (("x", i), ("y", j))
                if e
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"BivariatePoly({self})"


def _wrap(terms: dict[tuple[int, int], Fraction]) -> BivariatePoly:
    # internal: terms are already clean (no zeros, valid exponents)
    p = BivariatePoly.__new__(BivariatePoly)
    p._terms = terms
    return p


X = BivariatePoly.variable("x")
Y = BivariatePoly.variable("y")
ONE = BivariatePoly.constant(1)
