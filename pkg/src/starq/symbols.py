"""Exact polynomial symbols on T*R^n with a formal deformation parameter.

A symbol is a finite sum of terms ``c * nu^p * x^a * xi^b`` with rational
``c``.  ``nu`` stands for ``i*hbar``; keeping it as a real indeterminate lets
every coefficient stay in Q.  Indices of coordinates are 0-based in the
Python API and 1-based in the text grammar (``x1``, ``xi1``).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Union

Scalar = Fraction
Exponents = tuple[int, ...]
Key = tuple[Exponents, Exponents, int]

ScalarLike = Union[int, Fraction, str]


def scalar(value: ScalarLike) -> Fraction:
    """Coerce ``value`` to an exact rational; strings may be ``"p/q"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class DimensionError(ValueError):
    """Raised when two objects living over different R^n are combined."""


def _check_same_n(a: "SymbolPoly", b: "SymbolPoly") -> None:
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} != {b.n}")


def _add_vec(u: Exponents, v: Exponents) -> Exponents:
    return tuple(i + j for i, j in zip(u, v))


class SymbolPoly:
    """Immutable element of Pol(T*R^n)[nu] with rational coefficients.

    Terms are stored as ``{(a, b, p): coefficient}`` where ``a`` holds the
    x-exponents, ``b`` the xi-exponents and ``p`` the power of nu.  Zero
    coefficients are never stored.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: dict | None = None):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"dimension must be a positive integer, got {n!r}")
        clean: dict[Key, Fraction] = {}
        for key, value in (terms or {}).items():
            a, b, p = key
            a, b = tuple(a), tuple(b)
            if len(a) != n or len(b) != n:
                raise DimensionError(f"exponent vectors must have length {n}")
            if p < 0 or min(a + b, default=0) < 0:
                raise ValueError(f"negative exponent in {key!r}")
            c = scalar(value)
            if c:
                k = (a, b, p)
                c = clean.get(k, 0) + c
                if c:
                    clean[k] = c
                else:
                    clean.pop(k, None)
        self.n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "SymbolPoly":
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "SymbolPoly":
        return cls(n)

    @classmethod
    def const(cls, n: int, c: ScalarLike = 1) -> "SymbolPoly":
        return cls(n, {((0,) * n, (0,) * n, 0): c})

    @classmethod
    def one(cls, n: int) -> "SymbolPoly":
        return cls.const(n, 1)

    @classmethod
    def monomial(cls, n: int, a=None, b=None, p: int = 0, c: ScalarLike = 1) -> "SymbolPoly":
        a = tuple(a) if a is not None else (0,) * n
        b = tuple(b) if b is not None else (0,) * n
        return cls(n, {(a, b, p): c})

    @classmethod
    def x(cls, i: int, n: int) -> "SymbolPoly":
        """The coordinate function x^{i+1}."""
        _check_index(i, n)
        return cls.monomial(n, a=_unit(i, n))

    @classmethod
    def xi(cls, i: int, n: int) -> "SymbolPoly":
        """The fiber coordinate xi_{i+1}."""
        _check_index(i, n)
        return cls.monomial(n, b=_unit(i, n))

    @classmethod
    def nu(cls, n: int) -> "SymbolPoly":
        return cls.monomial(n, p=1)

    # -- container protocol -------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, a, b, p: int = 0) -> Fraction:
        return self._terms.get((tuple(a), tuple(b), p), Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, SymbolPoly):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == SymbolPoly.const(self.n, other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .parsing import format_symbol

        return f"SymbolPoly(n={self.n}, {format_symbol(self)!r})"

    def __str__(self) -> str:
        from .parsing import format_symbol

        return format_symbol(self)

    # -- ring operations ----------------------------------------------
    def _coerce(self, other) -> "SymbolPoly":
        if isinstance(other, SymbolPoly):
            _check_same_n(self, other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return SymbolPoly.const(self.n, other)
        raise TypeError(f"cannot combine SymbolPoly with {type(other).__name__}")

    def __add__(self, other) -> "SymbolPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return SymbolPoly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "SymbolPoly":
        return SymbolPoly._raw(self.n, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "SymbolPoly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SymbolPoly":
        return (-self) + other

    def scale(self, c: ScalarLike) -> "SymbolPoly":
        c = scalar(c)
        if not c:
            return SymbolPoly.zero(self.n)
        return SymbolPoly._raw(self.n, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other) -> "SymbolPoly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, SymbolPoly):
            return NotImplemented
        _check_same_n(self, other)
        out: dict[Key, Fraction] = {}
        for (a1, b1, p1), v1 in self._terms.items():
            for (a2, b2, p2), v2 in other._terms.items():
                k = (_add_vec(a1, a2), _add_vec(b1, b2), p1 + p2)
                s = out.get(k, 0) + v1 * v2
                if s:
                    out[k] = s
                else:
                    del out[k]
        return SymbolPoly._raw(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SymbolPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = SymbolPoly.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- calculus -----------------------------------------------------
    def diff_x(self, i: int, times: int = 1) -> "SymbolPoly":
        return self._diff(0, i, times)

    def diff_xi(self, i: int, times: int = 1) -> "SymbolPoly":
        return self._diff(1, i, times)

    def _diff(self, slot: int, i: int, times: int) -> "SymbolPoly":
        _check_index(i, self.n)
        if times == 0:
            return self
        out = {}
        for (a, b, p), v in self._terms.items():
            e = (a, b)[slot][i]
            if e < times:
                continue
            f = 1
            for j in range(times):
                f *= e - j
            if slot == 0:
                a = a[:i] + (e - times,) + a[i + 1:]
            else:
                b = b[:i] + (e - times,) + b[i + 1:]
            out[(a, b, p)] = v * f
        return SymbolPoly._raw(self.n, out)

    # -- gradings -----------------------------------------------------
    def xi_degree(self) -> int:
        """Largest |b| among the terms (-1 for the zero symbol)."""
        return max((sum(b) for _, b, _ in self._terms), default=-1)

    def x_degree(self) -> int:
        return max((sum(a) for a, _, _ in self._terms), default=-1)

    def nu_degree(self) -> int:
        return max((p for _, _, p in self._terms), default=-1)

    def xi_part(self, k: int) -> "SymbolPoly":
        return SymbolPoly._raw(
            self.n, {key: v for key, v in self._terms.items() if sum(key[1]) == k}
        )

    def nu_part(self, p: int) -> "SymbolPoly":
        """Coefficient of nu^p, returned as a nu-free symbol."""
        return SymbolPoly._raw(
            self.n, {(a, b, 0): v for (a, b, q), v in self._terms.items() if q == p}
        )

    def is_nu_free(self) -> bool:
        return all(p == 0 for _, _, p in self._terms)

    def is_x_only(self) -> bool:
        return all(p == 0 and not any(b) for _, b, p in self._terms)

    def conj(self) -> "SymbolPoly":
        """Complex conjugation of a real symbol: nu -> -nu."""
        return SymbolPoly._raw(
            self.n, {k: (-v if k[2] % 2 else v) for k, v in self._terms.items()}
        )

    def times_nu(self, power: int = 1) -> "SymbolPoly":
        return SymbolPoly._raw(self.n, {(a, b, p + power): v for (a, b, p), v in self._terms.items()})

    def div_nu(self) -> "SymbolPoly":
        """Exact division by nu; raises ``ValueError`` if a term has no nu."""
        out = {}
        for (a, b, p), v in self._terms.items():
            if p == 0:
                raise ValueError("symbol is not divisible by nu")
            out[(a, b, p - 1)] = v
        return SymbolPoly._raw(self.n, out)

    def truncate_nu(self, order: int) -> "SymbolPoly":
        """Drop every term with nu-power above ``order``."""
        return SymbolPoly._raw(self.n, {k: v for k, v in self._terms.items() if k[2] <= order})

    def monomials(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(self._terms.items())


def _unit(i: int, n: int) -> Exponents:
    return tuple(1 if j == i else 0 for j in range(n))


def _check_index(i: int, n: int) -> None:
    if not 0 <= i < n:
        raise IndexError(f"coordinate index {i} out of range for n={n}")


def linear_combination(n: int, pairs: Iterable[tuple[ScalarLike, SymbolPoly]]) -> SymbolPoly:
    out: dict[Key, Fraction] = {}
    for c, poly in pairs:
        c = scalar(c)
        if not c:
            continue
        if poly.n != n:
            raise DimensionError(f"dimension mismatch: {poly.n} != {n}")
        for k, v in poly._terms.items():
            s = out.get(k, 0) + c * v
            if s:
                out[k] = s
            else:
                del out[k]
    return SymbolPoly._raw(n, out)


def arith(op: str, A: SymbolPoly, B) -> SymbolPoly:
    """Dispatch ``add``, ``sub``, ``mul`` or ``scale`` by name."""
    if op == "add":
        return A + B
    if op == "sub":
        return A - B
    if op == "mul":
        return A * B
    if op == "scale":
        return A.scale(B)
    raise ValueError(f"unknown operation {op!r}")


def poisson(F: SymbolPoly, G: SymbolPoly) -> SymbolPoly:
    """Canonical bracket {F, G} = dF/dxi_i * dG/dx^i - dF/dx^i * dG/dxi_i."""
    _check_same_n(F, G)
    out = SymbolPoly.zero(F.n)
    for i in range(F.n):
        out = out + F.diff_xi(i) * G.diff_x(i) - F.diff_x(i) * G.diff_xi(i)
    return out


def euler(F: SymbolPoly, mode: str = "E") -> SymbolPoly:
    """Euler operator in xi (``"E"``) or its nu-weighted version (``"E_hat"``)."""
    if mode == "E":
        weight = lambda b, p: sum(b)  # noqa: E731
    elif mode == "E_hat":
        weight = lambda b, p: sum(b) + p  # noqa: E731
    else:
        raise ValueError(f"unknown Euler mode {mode!r}")
    out = {}
    for (a, b, p), v in F.items():
        w = weight(b, p)
        if w:
            out[(a, b, p)] = v * w
    return SymbolPoly._raw(F.n, out)


class GradedPart(NamedTuple):
    k: int
    part: SymbolPoly


def grade(F: SymbolPoly) -> list[GradedPart]:
    """Split ``F`` into xi-homogeneous parts, in increasing degree."""
    buckets: dict[int, dict] = {}
    for (a, b, p), v in F.items():
        buckets.setdefault(sum(b), {})[(a, b, p)] = v
    return [GradedPart(k, SymbolPoly._raw(F.n, buckets[k])) for k in sorted(buckets)]
