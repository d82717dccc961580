"""Normal-ordered linear differential operators in two variables.

A term (i, j, k, l) -> c stands for c * x^i y^j d_x^k d_y^l, with every
multiplication operator to the left of every derivative.  The normal form
is unique, so two operators are equal exactly when their term dictionaries
are equal; all identity checks in this package reduce to that comparison.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, perm
from typing import Iterator, Mapping

from .algebra import BivariatePoly, Scalar, parse_rational

Key = tuple[int, int, int, int]


def _op_key(item: tuple[Key, Fraction]) -> tuple[int, ...]:
    # graded: derivative order, then coefficient degree, then lexicographic
    (i, j, k, l), _ = item
    return (k + l, i + j, i, j, k, l)


class DiffOp:
    """An element of the Weyl algebra in x, y with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, Scalar] | None = None):
        clean: dict[Key, Fraction] = {}
        if terms:
            for key, c in terms.items():
                i, j, k, l = key
                if min(i, j, k, l) < 0:
                    raise ValueError(f"negative index in term {key}")
                c = Fraction(c)
                if c:
                    clean[key] = clean.get(key, Fraction(0)) + c
        self._terms = {k: v for k, v in clean.items() if v}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "DiffOp":
        return cls()

    @classmethod
    def identity(cls) -> "DiffOp":
        return cls({(0, 0, 0, 0): 1})

    @classmethod
    def from_poly(cls, p: BivariatePoly) -> "DiffOp":
        """The multiplication operator f -> p*f."""
        return cls({(i, j, 0, 0): c for (i, j), c in p.items()})

    @classmethod
    def partial(cls, k: int, l: int) -> "DiffOp":
        """d_x^k d_y^l."""
        return cls({(0, 0, k, l): 1})

    @classmethod
    def coeff_term(cls, p: BivariatePoly, k: int, l: int) -> "DiffOp":
        """p(x, y) * d_x^k d_y^l, the building block for assembling operators."""
        return cls({(i, j, k, l): c for (i, j), c in p.items()})

    # -- inspection --------------------------------------------------------

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        """Terms in canonical graded order."""
        return iter(sorted(self._terms.items(), key=_op_key))

    def coefficient(self, i: int, j: int, k: int, l: int) -> Fraction:
        return self._terms.get((i, j, k, l), Fraction(0))

    @property
    def order(self) -> int:
        """Maximal derivative order; -1 for the zero operator."""
        if not self._terms:
            return -1
        return max(k + l for (_, _, k, l) in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "DiffOp") -> "DiffOp":
        if not isinstance(other, DiffOp):
            return NotImplemented
        out = dict(self._terms)
        for key, c in other._terms.items():
            s = out.get(key, Fraction(0)) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return _wrap(out)

    def __neg__(self) -> "DiffOp":
        return _wrap({key: -c for key, c in self._terms.items()})

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return self + (-other)

    def __mul__(self, other: Scalar) -> "DiffOp":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        c = Fraction(other)
        if not c:
            return DiffOp()
        return _wrap({key: v * c for key, v in self._terms.items()})

    def __rmul__(self, other: Scalar) -> "DiffOp":
        return self.__mul__(other)

    # -- composition ---------------------------------------------------------

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        """Normal-ordered product self o other.

        Derivatives of the left factor pass the coefficients of the right one
        via the Leibniz rule:
          d_x^k (x^i .) = sum_r C(k, r) * i!/(i-r)! * x^(i-r) d_x^(k-r)
        and independently in y.
        """
        if not isinstance(other, DiffOp):
            return NotImplemented
        out: dict[Key, Fraction] = {}
        for (i1, j1, k1, l1), c1 in self._terms.items():
            for (i2, j2, k2, l2), c2 in other._terms.items():
                base = c1 * c2
                for r in range(min(k1, i2) + 1):
                    cr = comb(k1, r) * perm(i2, r)
                    for s in range(min(l1, j2) + 1):
                        cs = comb(l1, s) * perm(j2, s)
                        key = (i1 + i2 - r, j1 + j2 - s, k1 - r + k2, l1 - s + l2)
                        inc = base * cr * cs
                        tot = out.get(key, Fraction(0)) + inc
                        if tot:
                            out[key] = tot
                        else:
                            out.pop(key, None)
        return _wrap(out)

    def commutator(self, other: "DiffOp") -> "DiffOp":
        return (self @ other) - (other @ self)

    def left_mul(self, p: BivariatePoly) -> "DiffOp":
        """p * self as an operator (coefficient multiplication from the left)."""
        out: dict[Key, Fraction] = {}
        for (a, b), pc in p.items():
            for (i, j, k, l), c in self._terms.items():
                key = (i + a, j + b, k, l)
                tot = out.get(key, Fraction(0)) + pc * c
                if tot:
                    out[key] = tot
                else:
                    out.pop(key, None)
        return _wrap(out)

    # -- action ---------------------------------------------------------------

    def apply(self, p: BivariatePoly) -> BivariatePoly:
        """Apply the operator to a polynomial, exactly."""
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j, k, l), c in self._terms.items():
            for (a, b), pc in p.items():
                if a < k or b < l:
                    continue
                inc = c * pc * perm(a, k) * perm(b, l)
                key = (a - k + i, b - l + j)
                tot = out.get(key, Fraction(0)) + inc
                if tot:
                    out[key] = tot
                else:
                    out.pop(key, None)
        return BivariatePoly(out)

    # -- serialization ----------------------------------------------------------

    def to_records(self) -> list[dict[str, object]]:
        return [
            {"i": i, "j": j, "k": k, "l": l, "c": str(c)}
            for (i, j, k, l), c in self.items()
        ]

    @classmethod
    def from_records(cls, records: list[dict[str, object]]) -> "DiffOp":
        return cls(
            {
                (int(r["i"]), int(r["j"]), int(r["k"]), int(r["l"])): parse_rational(
                    str(r["c"])
                )
                for r in records
            }
        )

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, j, k, l), c in self.items():
            factors = []
            if abs(c) != 1 or (i, j, k, l) == (0, 0, 0, 0):
                factors.append(str(abs(c)))
            for sym, e in (("x", i), ("y", j), ("Dx", k), ("Dy", l)):
                if e == 1:
                    factors.append(sym)
                elif e > 1:
                    factors.append(f"{sym}^{e}")
            parts.append(("-" if c < 0 else "+", "*".join(factors)))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"DiffOp({self})"


def _wrap(terms: dict[Key, Fraction]) -> DiffOp:
    op = DiffOp.__new__(DiffOp)
    op._terms = terms
    return op
