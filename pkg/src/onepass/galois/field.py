"""Exact arithmetic in GF(p), GF(p^m) and towers GF(q^d).

Every element is stored as a plain ``int`` in ``[0, order)``.  For an
extension of degree ``d`` over a base field of order ``q`` the integer is
``c_0 + c_1 q + ... + c_{d-1} q^{d-1}`` where ``c_i`` are the (encoded) base
coefficients of the residue class modulo the defining polynomial.  Base-field
elements therefore keep their integer encoding inside every extension, which
makes the embedding GF(q) -> GF(q^d) the identity on encodings.

Hot loops work on raw ints through ``Field.add``/``Field.mul``...;
:class:`FieldElement` wraps a raw value for operator-style use.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

TABLE_LIMIT = 1 << 16


class FieldMismatchError(ValueError):
    pass


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return _prime_factors(n) == [n]


class Field:
    """Common interface; see :class:`PrimeField` and :class:`ExtensionField`."""

    p: int
    order: int
    degree: int
    base: "Field | None"
    abs_degree: int

    zero = 0
    one = 1

    # -- element construction -------------------------------------------------
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value.field} element given to {self}")
            return value
        return FieldElement(self, self.coerce(value))

    def coerce(self, value) -> int:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value.field} element given to {self}")
            return value.value
        value = int(value)
        if not 0 <= value < self.order:
            raise ValueError(f"{value} is not an element encoding of {self}")
        return value

    def elements(self) -> range:
        return range(self.order)

    def nonzero_elements(self) -> range:
        return range(1, self.order)

    @property
    def is_binary(self) -> bool:
        return self.p == 2

    @property
    def prime_field(self) -> "PrimeField":
        f = self
        while f.base is not None:
            f = f.base
        return f

    # -- derived arithmetic ---------------------------------------------------
    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def scalar_mul(self, c: int, a: int) -> int:
        """Multiply ``a`` by an element ``c`` of the base field."""
        return self.mul(c, a)

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` (i.e. ``n * 1``) in the field."""
        return n % self.p

    def sum(self, values: Iterable[int]) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def trace_abs(self, a: int) -> int:
        """Absolute trace to the prime field, sum of a^(p^i)."""
        acc = a
        x = a
        for _ in range(self.abs_degree - 1):
            x = self.frobenius(x)
            acc = self.add(acc, x)
        return acc


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.order = p
        self.degree = 1
        self.abs_degree = 1
        self.base = None
        self.modulus: tuple[int, ...] = ()

    @property
    def key(self):
        return (self.p,)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"GF({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        return pow(a, -1, self.p)

    def pow(self, a, n):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def vector(self, a) -> tuple[int, ...]:
        return (a,)

    def from_vector(self, vec: Sequence[int]) -> int:
        (c,) = vec
        return c % self.p


class ExtensionField(Field):
    """GF(q^d) = base[X] / (modulus); ``modulus`` is monic, lowest degree first.

    Irreducibility of ``modulus`` is the caller's responsibility; the public
    constructors in :mod:`onepass.galois.irreducible` verify it.
    """

    def __init__(self, base: Field, modulus: Sequence[int]):
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 1")
        self.base = base
        self.modulus = modulus
        self.p = base.p
        self.q = base.order
        self.degree = len(modulus) - 1
        self.abs_degree = base.abs_degree * self.degree
        self.order = self.q ** self.degree
        # binary fields encode digits as fixed-width bit groups
        self._width = self.q.bit_length() - 1 if self.p == 2 else 0
        self._mask = self.q - 1
        self._over_gf2 = self.p == 2 and base.base is None
        if self._over_gf2:
            self._modint = sum(1 << i for i, c in enumerate(modulus) if c)
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        # binary quadratic step over a table-driven base: X^2 = c1 X + c0
        self._quad = None
        if self.p == 2 and self.degree == 2 and getattr(base, "_exp", None) is not None:
            self._quad = (base._exp, base._log, modulus[0], modulus[1])
        if self.order <= TABLE_LIMIT:
            self._build_tables()

    # -- identity -------------------------------------------------------------
    @property
    def key(self):
        return (self.base.key, self.modulus)

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.base.base is None:
            return f"GF({self.p}^{self.degree})"
        return f"GF({self.q}^{self.degree})"

    # -- digit helpers ----------------------------------------------------------
    def split(self, a: int) -> list[int]:
        d = self.degree
        if self._width:
            w, m = self._width, self._mask
            return [(a >> (w * i)) & m for i in range(d)]
        q = self.q
        out = []
        for _ in range(d):
            a, r = divmod(a, q)
            out.append(r)
        return out

    def join(self, digits: Sequence[int]) -> int:
        acc = 0
        if self._width:
            w = self._width
            for i, c in enumerate(digits):
                acc |= c << (w * i)
            return acc
        for c in reversed(digits):
            acc = acc * self.q + c
        return acc

    def vector(self, a: int) -> tuple[int, ...]:
        out: list[int] = []
        for c in self.split(a):
            out.extend(self.base.vector(c))
        return tuple(out)

    def from_vector(self, vec: Sequence[int]) -> int:
        step = self.base.abs_degree
        if len(vec) != self.abs_degree:
            raise ValueError(f"expected {self.abs_degree} coefficients, got {len(vec)}")
        digits = [self.base.from_vector(vec[i:i + step]) for i in range(0, len(vec), step)]
        return self.join(digits)

    @property
    def generator_root(self) -> int:
        """The class of X, a root of the modulus."""
        return self.q if self.degree > 1 else self.neg(self.modulus[0])

    # -- additive structure -----------------------------------------------------
    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        ba = self.base.add
        return self.join([ba(x, y) for x, y in zip(self.split(a), self.split(b))])

    def sub(self, a, b):
        if self.p == 2:
            return a ^ b
        bs = self.base.sub
        return self.join([bs(x, y) for x, y in zip(self.split(a), self.split(b))])

    def neg(self, a):
        if self.p == 2:
            return a
        bn = self.base.neg
        return self.join([bn(x) for x in self.split(a)])

    def from_int(self, n: int) -> int:
        return self.base.from_int(n)

    # -- multiplicative structure ---------------------------------------------
    def mul(self, a, b):
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[self._log[a] + self._log[b]]
        return self._mul_slow(a, b)

    def _mul_slow(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._over_gf2:
            return self._clmul_mod(a, b)
        if self._quad is not None:
            return self._mul_quad(a, b)
        d = self.degree
        A = self.split(a)
        B = self.split(b)
        base = self.base
        mod = self.modulus
        prod = [0] * (2 * d - 1)
        blog = getattr(base, "_log", None)
        if self.p == 2 and blog is not None:
            bexp = base._exp
            la = [blog[x] if x else -1 for x in A]
            lb = [blog[x] if x else -1 for x in B]
            for i in range(d):
                li = la[i]
                if li < 0:
                    continue
                for j in range(d):
                    lj = lb[j]
                    if lj >= 0:
                        prod[i + j] ^= bexp[li + lj]
            lm = [blog[x] if x else -1 for x in mod[:d]]
            for top in range(2 * d - 2, d - 1, -1):
                c = prod[top]
                if c:
                    lc = blog[c]
                    off = top - d
                    for t in range(d):
                        if lm[t] >= 0:
                            prod[off + t] ^= bexp[lc + lm[t]]
            return self.join(prod[:d])
        bm, ba, bs = base.mul, base.add, base.sub
        for i in range(d):
            ai = A[i]
            if not ai:
                continue
            for j in range(d):
                bj = B[j]
                if bj:
                    prod[i + j] = ba(prod[i + j], bm(ai, bj))
        for top in range(2 * d - 2, d - 1, -1):
            c = prod[top]
            if c:
                off = top - d
                for t in range(d):
                    if mod[t]:
                        prod[off + t] = bs(prod[off + t], bm(c, mod[t]))
        return self.join(prod[:d])

    def _mul_quad(self, a, b):
        exp, log, c0, c1 = self._quad
        w, m = self._width, self._mask
        a0, a1 = a & m, a >> w
        b0, b1 = b & m, b >> w
        la0 = log[a0] if a0 else -1
        la1 = log[a1] if a1 else -1
        lb0 = log[b0] if b0 else -1
        lb1 = log[b1] if b1 else -1
        p0 = exp[la0 + lb0] if la0 >= 0 and lb0 >= 0 else 0
        p1 = exp[la0 + lb1] if la0 >= 0 and lb1 >= 0 else 0
        if la1 >= 0 and lb0 >= 0:
            p1 ^= exp[la1 + lb0]
        if la1 >= 0 and lb1 >= 0:
            lp2 = la1 + lb1
            if c0:
                p0 ^= exp[lp2 + log[c0]]
            if c1:
                p1 ^= exp[lp2 + log[c1]]
        return p0 | (p1 << w)

    def _clmul_mod(self, a, b):
        d = self.degree
        top = 1 << d
        modint = self._modint
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= modint
        return r

    def scalar_mul(self, c, a):
        if c == 0 or a == 0:
            return 0
        if self._exp is not None:
            return self._exp[self._log[c] + self._log[a]]
        base = self.base
        blog = getattr(base, "_log", None)
        if self._width and blog is not None:
            bexp = base._exp
            lc = blog[c]
            w, m = self._width, self._mask
            acc = 0
            shift = 0
            while a:
                x = a & m
                if x:
                    acc |= bexp[lc + blog[x]] << shift
                a >>= w
                shift += w
            return acc
        bm = base.mul
        return self.join([bm(c, x) for x in self.split(a)])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        if self._exp is not None:
            return self._exp[(self.order - 1) - self._log[a]]
        if self._over_gf2:
            return self._inv_gf2(a)
        if self._quad is not None:
            # (a0 + a1 X)^-1 = ((a0 + c1 a1) + a1 X) / (a0^2 + c1 a0 a1 + c0 a1^2)
            B = self.base
            c0, c1 = self.modulus[0], self.modulus[1]
            w, m = self._width, self._mask
            a0, a1 = a & m, a >> w
            t = B.add(a0, B.mul(c1, a1))
            inv_norm = B.inv(B.add(B.mul(a0, t), B.mul(c0, B.mul(a1, a1))))
            return B.mul(t, inv_norm) | (B.mul(a1, inv_norm) << w)
        return self._inv_euclid(a)

    def _inv_gf2(self, a):
        # extended Euclid in GF(2)[X] on bit-packed polynomials
        u, v = a, self._modint
        g1, g2 = 1, 0
        while u != 1:
            j = u.bit_length() - v.bit_length()
            if j < 0:
                u, v = v, u
                g1, g2 = g2, g1
                j = -j
            u ^= v << j
            g1 ^= g2 << j
        return g1

    def _inv_euclid(self, a):
        base = self.base
        r0 = list(self.modulus)
        r1 = _trim(self.split(a))
        s0: list[int] = []
        s1 = [1]
        while len(r1) > 1:
            q, r = _poly_divmod(base, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(base, s0, _poly_mul(base, q, s1))
        c = base.inv(r1[0])
        s = [base.mul(c, x) for x in s1]
        s = s + [0] * (self.degree - len(s))
        return self.join(s[: self.degree])

    def pow(self, a, n):
        if self._exp is not None:
            if a == 0:
                if n < 0:
                    raise ZeroDivisionError("0 has no inverse")
                return 1 if n == 0 else 0
            return self._exp[(self._log[a] * n) % (self.order - 1)]
        return Field.pow(self, a, n)

    def frobenius(self, a):
        if self._exp is not None:
            return self.pow(a, self.p)
        return Field.pow(self, a, self.p)

    # -- tables -------------------------------------------------------------------
    def _build_tables(self):
        n = self.order - 1
        factors = _prime_factors(n) if n > 1 else []
        g = None
        for cand in range(1, self.order):
            if all(Field.pow(self, cand, n // r) != 1 for r in factors):
                if Field.pow(self, cand, n) == 1:
                    g = cand
                    break
        if g is None:
            raise ValueError(f"modulus {self.modulus} does not define a field")
        # three periods so sums of up to three logs index directly
        exp = [0] * (3 * n + 1)
        log = [0] * self.order
        x = 1
        for i in range(n):
            if i and x == 1:
                raise ValueError(f"modulus {self.modulus} does not define a field")
            exp[i] = x
            log[x] = i
            x = self._mul_slow(x, g)
        for i in range(n, 3 * n + 1):
            exp[i] = exp[i - n]
        self.primitive_element = g
        self._exp, self._log = exp, log


# -- small list-polynomial helpers over a field (raw ints, lowest first) ----------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_sub(F: Field, a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([F.sub(x, y) for x, y in zip(a, b)])


def _poly_mul(F: Field, a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _trim(out)


def _poly_divmod(F: Field, a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    a = list(a)
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    q = [0] * max(len(a) - db, 0)
    for top in range(len(a) - 1, db - 1, -1):
        c = a[top]
        if c:
            c = F.mul(c, inv_lead)
            q[top - db] = c
            for t in range(db + 1):
                if b[t]:
                    a[top - db + t] = F.sub(a[top - db + t], F.mul(c, b[t]))
    return _trim(q), _trim(a[:db])


class FieldElement:
    """An element of a :class:`Field` with operator overloading."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = value

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.coerce(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.div(b, self.value))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.value, n))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    __index__ = __int__

    @property
    def vector(self) -> tuple[int, ...]:
        """Coefficients over the prime subfield, lowest degree first."""
        return self.field.vector(self.value)

    def __repr__(self):
        return f"{self.field}({self.value})"


def elements_of(field: Field, values: Iterable[int]) -> Iterator[FieldElement]:
    for v in values:
        yield FieldElement(field, field.coerce(v))
