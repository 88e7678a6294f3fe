"""Field constructors, the trace map and irreducible-polynomial constructions."""

from __future__ import annotations

import functools
import math
import random

from .field import ExtensionField, Field, FieldElement, PrimeField, _prime_factors
from .poly import DensePoly, is_irreducible


class IrreducibleSearchError(RuntimeError):
    """Randomised search exhausted its attempt budget; retry with another seed."""


def _lowest_first_candidates(p: int, m: int):
    for idx in range(p ** m):
        low = []
        for _ in range(m):
            idx, r = divmod(idx, p)
            low.append(r)
        yield tuple(low) + (1,)


@functools.lru_cache(maxsize=None)
def _default_modulus(p: int, m: int) -> tuple[int, ...]:
    F = PrimeField(p)
    for coeffs in _lowest_first_candidates(p, m):
        if m > 1 and coeffs[0] == 0:
            continue
        if is_irreducible(DensePoly(F, coeffs)):
            return coeffs
    raise AssertionError("unreachable")


@functools.lru_cache(maxsize=None)
def GF(p: int, m: int = 1, modulus: tuple[int, ...] | None = None) -> Field:
    """GF(p^m).  Without an explicit modulus the irreducible polynomial with the
    smallest coefficient encoding (c_0 + c_1 p + ...) is used, e.g. X^3+X+1 for 2^3."""
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    prime = PrimeField(p)
    if m == 1 and not modulus:
        return prime
    if modulus is None:
        modulus = _default_modulus(p, m)
    modulus = tuple(modulus)
    f = DensePoly(prime, modulus)
    if f.degree != m or not f.is_monic:
        raise ValueError(f"modulus must be monic of degree {m}")
    if not is_irreducible(f):
        raise ValueError(f"modulus {f} is reducible over GF({p})")
    if m == 1:
        return prime
    return ExtensionField(prime, modulus)


def field_of_order(q: int) -> Field:
    """GF(q) for a prime power q, with the default modulus."""
    fs = _prime_factors(q)
    if len(fs) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = fs[0]
    m = round(math.log(q, p))
    if p ** m != q:
        raise ValueError(f"{q} is not a prime power")
    return GF(p, m)


# -- trace --------------------------------------------------------------------------

def trace(x: FieldElement) -> FieldElement:
    """Absolute trace of x in GF(2^m): x + x^2 + x^4 + ... + x^(2^(m-1))."""
    F = x.field
    if F.p != 2:
        raise ValueError("trace is implemented for characteristic 2 only")
    acc = x.value
    y = x.value
    for _ in range(F.abs_degree - 1):
        y = F.mul(y, y)
        acc ^= y
    return FieldElement(F.prime_field, acc)


def find_trace_one(F: Field) -> FieldElement:
    """Smallest basis element of F over GF(2) with nonzero trace.

    Bit ``i`` of the integer encoding is a GF(2)-basis of F; for GF(2^m) built
    over GF(2) that basis element is alpha^i with alpha the root of the modulus.
    """
    if F.p != 2:
        raise ValueError("find_trace_one needs characteristic 2")
    for i in range(F.abs_degree):
        beta = FieldElement(F, 1 << i)
        if trace(beta).value:
            return beta
    raise AssertionError("trace map is never identically zero")


# -- irreducible polynomial constructions ------------------------------------------

def trace_recursion(F: Field, k: int) -> tuple[DensePoly, DensePoly]:
    """(A_k, B_k) with A_0 = X, B_0 = 1, A_{k+1} = A_k B_k, B_{k+1} = A_k^2 + B_k^2."""
    A = DensePoly.x(F)
    B = DensePoly.constant(F, 1)
    for _ in range(k):
        A, B = A * B, A * A + B * B
    return A, B


def irr_poly_char2(F: Field, d: int) -> DensePoly:
    """Deterministic irreducible of degree 2^k in [d, 2d] over a binary field.

    Returns the monic normalisation of A_k + beta * B_k where Tr(beta) = 1.
    """
    if F.p != 2:
        raise ValueError("irr_poly_char2 needs characteristic 2")
    if d < 1:
        raise ValueError("degree must be >= 1")
    k = (d - 1).bit_length()
    beta = find_trace_one(F).value
    A, B = trace_recursion(F, k)
    return (A + B.scale(beta)).monic()


def irr_poly_randomized(F: Field, d: int, delta: float = 2.0 ** -40, rng_seed: int = 0) -> DensePoly:
    """Random monic irreducible of degree exactly d (fails with prob. <= delta).

    Irreducibles have density >= 1/(2d) among monic degree-d polynomials, so
    2d ln(1/delta) independent samples suffice.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if d < 1:
        raise ValueError("degree must be >= 1")
    rng = random.Random(rng_seed)
    attempts = math.ceil(2 * d * math.log(1 / delta))
    for _ in range(attempts):
        low = tuple(rng.randrange(F.order) for _ in range(d))
        f = DensePoly(F, low + (1,))
        if is_irreducible(f):
            return f
    raise IrreducibleSearchError(f"no irreducible of degree {d} over {F} in {attempts} draws")


@functools.lru_cache(maxsize=None)
def extension_field(base: Field, d: int, rng_seed: int = 0) -> Field:
    """A field GF(q^d') containing ``base``, with d' = d except in characteristic 2,
    where d' is d rounded up to a power of two and the field is built as a tower
    of quadratic steps.  Use ``ext.order`` for the actual size.

    Base encodings are preserved, so :func:`embed` is the identity on values.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    if d == 1:
        return base
    if base.p == 2:
        # a chain of quadratic steps keeps every level up to 2^16 table-driven
        field = base
        for _ in range((d - 1).bit_length()):
            field = ExtensionField(field, irr_poly_char2(field, 2).coeffs)
        return field
    f = irr_poly_randomized(base, d, rng_seed=rng_seed)
    return ExtensionField(base, f.coeffs)


def embed(ext: Field, x: FieldElement) -> FieldElement:
    """Image of ``x`` (an element of a subfield in the tower) inside ``ext``."""
    f = ext
    while f is not None:
        if f == x.field:
            return FieldElement(ext, x.value)
        f = f.base
    raise ValueError(f"{x.field} is not a subfield of {ext} in this tower")


# -- modulus serialisation ------------------------------------------------------------

def format_modulus(F: Field) -> str:
    """``p m c_0 ... c_m`` (prime fields: ``p 1``)."""
    if F.base is None:
        return f"{F.p} 1"
    if F.base.base is not None:
        raise ValueError("only fields over their prime subfield are serialisable")
    return " ".join(str(v) for v in (F.p, F.degree, *F.modulus))


def parse_modulus(text: str) -> Field:
    parts = [int(t) for t in text.split()]
    if len(parts) < 2:
        raise ValueError(f"bad modulus descriptor {text!r}")
    p, m, coeffs = parts[0], parts[1], tuple(parts[2:])
    if not coeffs:
        if m != 1:
            raise ValueError("missing modulus coefficients")
        return GF(p)
    if len(coeffs) != m + 1:
        raise ValueError(f"expected {m + 1} coefficients, got {len(coeffs)}")
    if m == 1:
        return GF(p)
    return GF(p, m, coeffs)
