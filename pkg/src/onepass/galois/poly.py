"""Dense univariate polynomials over a :class:`Field`, plus irreducibility tests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .field import Field, FieldElement, FieldMismatchError, _prime_factors


def _trim(c: list[int]) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


@dataclass(frozen=True)
class DensePoly:
    """Polynomial with raw field coefficients, lowest degree first.

    The zero polynomial has an empty coefficient tuple.
    """

    field: Field
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [self.field.coerce(x) for x in self.coeffs]
        object.__setattr__(self, "coeffs", _trim(c))

    @classmethod
    def x(cls, field: Field) -> "DensePoly":
        return cls(field, (0, 1))

    @classmethod
    def constant(cls, field: Field, c: int) -> "DensePoly":
        return cls(field, (c,))

    @classmethod
    def from_roots(cls, field: Field, roots: Iterable[int]) -> "DensePoly":
        """Monic polynomial prod (X - r)."""
        out = [1]
        for r in roots:
            r = field.coerce(r)
            nxt = [0] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i + 1] = field.add(nxt[i + 1], c)
                nxt[i] = field.sub(nxt[i], field.mul(c, r))
            out = nxt
        return cls(field, tuple(out))

    # -- basic properties -------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def _check(self, other: "DensePoly"):
        if not isinstance(other, DensePoly):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return other

    # -- ring operations ----------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
        return DensePoly(F, tuple(out))

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [F.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
        return DensePoly(F, tuple(out))

    def __neg__(self):
        return DensePoly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(self.field.coerce(other))
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return DensePoly(F, ())
        out = [0] * (len(a) + len(b) - 1)
        add, mul = F.add, F.mul
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return DensePoly(F, tuple(out))

    def scale(self, c: int) -> "DensePoly":
        F = self.field
        return DensePoly(F, tuple(F.mul(c, x) for x in self.coeffs))

    def monic(self) -> "DensePoly":
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial has no monic normalisation")
        return self.scale(self.field.inv(self.lead))

    def __divmod__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        inv_lead = F.inv(b[-1])
        q = [0] * max(len(a) - db, 0)
        for top in range(len(a) - 1, db - 1, -1):
            c = a[top]
            if c:
                c = F.mul(c, inv_lead)
                q[top - db] = c
                off = top - db
                for t in range(db + 1):
                    if b[t]:
                        a[off + t] = F.sub(a[off + t], F.mul(c, b[t]))
        return DensePoly(F, tuple(q)), DensePoly(F, tuple(a[:db]))

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __eq__(self, other):
        if not isinstance(other, DensePoly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __call__(self, x):
        F = self.field
        x = F.coerce(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def derivative(self) -> "DensePoly":
        F = self.field
        return DensePoly(F, tuple(F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs) if i))

    def powmod(self, n: int, mod: "DensePoly") -> "DensePoly":
        result = DensePoly.constant(self.field, 1) % mod
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            n >>= 1
            if n:
                base = (base * base) % mod
        return result

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            coef = "" if (c == 1 and i) else str(c)
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{coef}X")
            else:
                terms.append(f"{coef}X^{i}")
        return " + ".join(terms)


def poly_gcd(a: DensePoly, b: DensePoly) -> DensePoly:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


# -- irreducibility -------------------------------------------------------------

def _gf2_mulmod(a: int, b: int, f: int, deg: int) -> int:
    r = 0
    top = 1 << deg
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= f
    return r


def _gf2_gcd(a: int, b: int) -> int:
    while b:
        while a and a.bit_length() >= b.bit_length():
            a ^= b << (a.bit_length() - b.bit_length())
        a, b = b, a
    return a


def _is_irreducible_gf2(f: int) -> bool:
    n = f.bit_length() - 1
    x = 2
    h = x
    frob = {}
    needed = {n // r for r in _prime_factors(n)}
    for i in range(1, n + 1):
        h = _gf2_mulmod(h, h, f, n)
        if i in needed:
            frob[i] = h
    if h != x:
        return False
    return all(_gf2_gcd(f, frob[i] ^ x) == 1 for i in needed)


def is_irreducible(f: DensePoly) -> bool:
    """Rabin's test: X^(q^n) = X mod f and gcd(X^(q^(n/r)) - X, f) = 1 for primes r | n.

    Tiny inputs go through trial division instead.
    """
    if not f.is_monic:
        raise ValueError("is_irreducible expects a monic polynomial")
    n = f.degree
    if n < 1:
        raise ValueError("degree must be at least 1")
    if n == 1:
        return True
    F = f.field
    q = F.order
    if F.base is None and q == 2:
        return _is_irreducible_gf2(sum(1 << i for i, c in enumerate(f.coeffs) if c))
    if q ** (n // 2) <= 64:
        return is_irreducible_trial(f)
    x = DensePoly.x(F) % f
    needed = {n // r for r in _prime_factors(n)}
    frob = {}
    h = x
    for i in range(1, n + 1):
        h = h.powmod(q, f)
        if i in needed:
            frob[i] = h
    if h != x:
        return False
    for i in needed:
        if poly_gcd(f, frob[i] - x).degree > 0:
            return False
    return True


def monic_polys(F: Field, degree: int):
    """All monic polynomials of the given degree."""
    for low in itertools.product(range(F.order), repeat=degree):
        yield DensePoly(F, tuple(low) + (1,))


def is_irreducible_trial(f: DensePoly) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    if not f.is_monic:
        raise ValueError("is_irreducible expects a monic polynomial")
    for d in range(1, f.degree // 2 + 1):
        for g in monic_polys(f.field, d):
            if (f % g).is_zero():
                return False
    return True


def _rank(F: Field, rows: list[list[int]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = F.inv(rows[rank][col])
        rows[rank] = [F.mul(inv, v) for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [F.sub(a, F.mul(c, b)) for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def berlekamp_factor_count(f: DensePoly) -> int:
    """Number of distinct irreducible factors of a squarefree ``f`` (Berlekamp).

    Raises ``ValueError`` if ``f`` is not squarefree.
    """
    F = f.field
    n = f.degree
    if poly_gcd(f, f.derivative()).degree != 0:
        raise ValueError("polynomial is not squarefree")
    xq = DensePoly.x(F).powmod(F.order, f)
    row = DensePoly.constant(F, 1)
    rows = []
    for i in range(n):
        vec = [row[j] for j in range(n)]
        vec[i] = F.sub(vec[i], 1)
        rows.append(vec)
        row = (row * xq) % f
    return n - _rank(F, rows)


def is_irreducible_berlekamp(f: DensePoly) -> bool:
    """Irreducibility via squarefreeness plus Berlekamp's factor count."""
    if f.degree < 1:
        raise ValueError("degree must be at least 1")
    if f.degree == 1:
        return True
    try:
        return berlekamp_factor_count(f) == 1
    except ValueError:
        return False
