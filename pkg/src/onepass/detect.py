"""One-pass fingerprint error detectors.

A received word y is a codeword iff its syndrome s = H y vanishes.  The
detector evaluates S(X) = sum_i s_i X^i at a secret random point beta of an
extension field GF(Q), reordering the double sum so that each stream symbol
y_j is consumed once:

    S(beta) = sum_j y_j * w_j(beta),   w_j(beta) = sum_i beta^i h_ij.

A nonzero S has at most n - k - 1 roots, so a non-codeword survives with
probability below n / Q.
"""

from __future__ import annotations

import enum
import math
import random
from typing import Sequence

from .codes import CodeError, FoldedReedSolomon, LinearCode, ReedSolomon
from .galois import Field, extension_field
from .galois.poly import DensePoly


class Decision(enum.Enum):
    ACCEPT = "ACCEPT"
    REJECT = "REJECT"


class StreamOrderError(RuntimeError):
    """A symbol was fed out of order, twice, or after finalisation."""


class IncompleteStreamError(RuntimeError):
    pass


def extension_degree(n: int, q: int, a: float = 1.0) -> int:
    """Smallest d with q^d >= n^(1+a), i.e. ceil((1+a) log n / log q)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    e = 1 + a
    if float(e).is_integer():
        target = n ** int(e)
        d, Q = 1, q
        while Q < target:
            d += 1
            Q *= q
        return d
    return max(1, math.ceil(e * math.log(n) / math.log(q) - 1e-12))


def detector_field(base: Field, n: int, a: float = 1.0) -> Field:
    """GF(Q) containing ``base`` with Q >= n^(1+a) (degree rounded up in char 2).

    The field itself is public and fixed per (base, degree); only beta is secret.
    """
    return extension_field(base, extension_degree(n, base.order, a))


def sample_beta(ext: Field, seed: int) -> int:
    """Uniform element of GF(Q), zero included."""
    return random.Random(seed).randrange(ext.order)


def _underlying_rs(code: LinearCode):
    if isinstance(code, FoldedReedSolomon):
        return code.rs
    if isinstance(code, ReedSolomon):
        return code
    return None


def geometric_sum(ext: Field, x: int, m: int) -> int:
    """sum_{i<m} x^i = (x^m - 1)/(x - 1); equals m (mod char) when x = 1."""
    if m <= 0:
        return 0
    if x == 1:
        return ext.from_int(m)
    num = ext.sub(ext.pow(x, m), 1)
    return ext.div(num, ext.sub(x, 1))


def column_weight(code: LinearCode, ext: Field, beta: int, j: int, mode: str = "naive") -> int:
    """w_j(beta) = sum_{i < num_checks} beta^i h_ij in GF(Q), for field position ``j``.

    ``naive`` sums the parity column term by term.  ``fast`` needs a
    Reed-Solomon style code whose parity multipliers are all equal, and
    evaluates the geometric series h * ((beta a_j)^m - 1) / (beta a_j - 1).
    ``closed`` applies the same series with the column's own multiplier, which
    is valid for every RS/GRS code.
    """
    if mode == "naive":
        acc = 0
        bp = 1
        last = 0
        for i, h in code.parity_column(j):
            if i != last:
                bp = ext.mul(bp, ext.pow(beta, i - last))
                last = i
            if bp == 0:
                break
            acc = ext.add(acc, ext.scalar_mul(h, bp))
        return acc
    rs = _underlying_rs(code)
    if rs is None:
        raise CodeError(f"{mode} column weights need a Reed-Solomon style code, got {code.variant}")
    if mode == "fast" and not rs.has_constant_multiplier:
        raise CodeError("fast column weights need a constant parity multiplier")
    if mode not in ("fast", "closed"):
        raise ValueError(f"unknown mode {mode!r}")
    x = ext.scalar_mul(rs.points[j], beta)
    g = geometric_sum(ext, x, rs.num_checks)
    return ext.scalar_mul(rs.parity_multipliers[j], g)


def _closed_weights(rs: ReedSolomon, ext: Field, beta: int):
    """Column-weight function for RS/GRS, same arithmetic as ``column_weight(..., "closed")``."""
    m = rs.num_checks
    pts = rs.points
    mults = rs.parity_multipliers
    smul, pw, sub, div = ext.scalar_mul, ext.pow, ext.sub, ext.div
    m_char = ext.from_int(m)

    def weight(pos: int) -> int:
        if m <= 0:
            return 0
        x = smul(pts[pos], beta)
        if x == 1:
            g = m_char
        else:
            g = div(sub(pw(x, m), 1), sub(x, 1))
        return smul(mults[pos], g)

    return weight


def _default_mode(code: LinearCode) -> str:
    rs = _underlying_rs(code)
    if rs is None:
        return "naive"
    return "fast" if rs.has_constant_multiplier else "closed"


class _StreamCursor:
    """Strict in-order symbol cursor shared by the detectors."""

    def __init__(self, total: int):
        self.total = total
        self.next_index = 0
        self.finalized = False

    def advance(self, j: int):
        if self.finalized:
            raise StreamOrderError("detector already finalised")
        if j != self.next_index:
            raise StreamOrderError(f"expected symbol {self.next_index}, got {j}")
        if j >= self.total:
            raise StreamOrderError(f"symbol {j} beyond stream length {self.total}")
        self.next_index += 1

    def finish(self):
        if self.finalized:
            raise StreamOrderError("detector already finalised")
        if self.next_index != self.total:
            raise IncompleteStreamError(f"only {self.next_index} of {self.total} symbols fed")
        self.finalized = True


def _symbol_values(code: LinearCode, j: int, y) -> list[tuple[int, int]]:
    F = code.field
    if not isinstance(y, (tuple, list)) and not isinstance(code, FoldedReedSolomon):
        return ((j, F.coerce(y)),)
    pos = code.symbol_positions(j)
    vals = list(y)
    if len(vals) != len(pos):
        raise CodeError(f"symbol {j} has {len(vals)} field elements, expected {len(pos)}")
    return [(p, F.coerce(v)) for p, v in zip(pos, vals)]


class ErrorDetector:
    """Single-pass codeword membership test keeping one GF(Q) accumulator."""

    def __init__(
        self,
        code: LinearCode,
        a: float = 1.0,
        seed: int = 0,
        *,
        beta: int | None = None,
        ext: Field | None = None,
        mode: str | None = None,
    ):
        if code.n < 1:
            raise ValueError("code must have positive length")
        self.code = code
        self.a = a
        self.ext = ext if ext is not None else detector_field(code.field, code.n, a)
        self.beta = sample_beta(self.ext, seed) if beta is None else self.ext.coerce(beta)
        self.mode = mode or _default_mode(code)
        if self.mode != "naive":
            # validates eligibility once
            column_weight(code, self.ext, self.beta, 0, self.mode)
            self._weight = _closed_weights(_underlying_rs(code), self.ext, self.beta)
        else:
            self._weight = lambda pos: column_weight(code, self.ext, self.beta, pos, "naive")
        self.sigma = 0
        self._cursor = _StreamCursor(code.num_symbols)

    @property
    def soundness_bound(self) -> float:
        """Upper bound n / Q on the false-accept probability."""
        return self.code.n / self.ext.order

    @property
    def next_index(self) -> int:
        return self._cursor.next_index

    def state_size(self) -> int:
        """GF(Q) elements retained between symbols (sigma and beta)."""
        return 2

    def feed(self, j: int, y) -> None:
        self._cursor.advance(j)
        ext = self.ext
        for pos, v in _symbol_values(self.code, j, y):
            if v:
                w = self._weight(pos)
                self.sigma = ext.add(self.sigma, ext.scalar_mul(v, w))

    def feed_all(self, word: Sequence) -> "ErrorDetector":
        for j, y in enumerate(word):
            self.feed(j, y)
        return self

    def finalize(self) -> Decision:
        self._cursor.finish()
        return Decision.ACCEPT if self.sigma == 0 else Decision.REJECT


def pad_positions(n: int, erased: Sequence[int], e_max: int) -> list[int]:
    """``erased`` extended to exactly ``e_max`` positions by the smallest unused indices."""
    erased = list(dict.fromkeys(erased))
    if len(erased) > e_max:
        raise ValueError(f"{len(erased)} erased positions exceed e_max={e_max}")
    if not all(0 <= p < n for p in erased):
        raise ValueError("erased positions out of range")
    used = set(erased)
    out = list(erased)
    p = 0
    while len(out) < e_max:
        if p not in used:
            out.append(p)
        p += 1
    return out


class DeferredDetector:
    """Membership test for y restricted to S minus E, with E revealed after the stream.

    Keeps e_max + 1 accumulators Q_b = sum_j y_j alpha_j^b w'_j(beta) where w'
    are the column weights of RS_S[k + e_max].  For the monic vanishing
    polynomial P_E'(X) = sum_b p_b X^b of the padded set E', the combination
    sum_b p_b Q_b is exactly the fingerprint of y_{S \\ E'} against the
    punctured code RS_{S \\ E'}[k].
    """

    def __init__(
        self,
        code: LinearCode,
        e_max: int,
        a: float = 1.0,
        seed: int = 0,
        *,
        beta: int | None = None,
        ext: Field | None = None,
    ):
        rs = _underlying_rs(code)
        if rs is None:
            raise CodeError("deferred puncturing needs a Reed-Solomon style code")
        if e_max < 0 or rs.k + e_max > rs.n:
            raise CodeError(f"need 0 <= e_max and k + e_max <= n (k={rs.k}, e_max={e_max}, n={rs.n})")
        self.code = code
        self.rs = rs
        self.e_max = e_max
        self.a = a
        self.wide = rs.with_dimension(rs.k + e_max)
        self.ext = ext if ext is not None else detector_field(code.field, rs.n, a)
        self.beta = sample_beta(self.ext, seed) if beta is None else self.ext.coerce(beta)
        self.acc = [0] * (e_max + 1)
        self._cursor = _StreamCursor(code.num_symbols)

    @property
    def next_index(self) -> int:
        return self._cursor.next_index

    def state_size(self) -> int:
        """GF(Q) elements retained between symbols (accumulators and beta)."""
        return len(self.acc) + 1

    def feed(self, j: int, y) -> None:
        self._cursor.advance(j)
        ext = self.ext
        acc = self.acc
        for pos, v in _symbol_values(self.code, j, y):
            if not v:
                continue
            w = ext.scalar_mul(v, column_weight(self.wide, ext, self.beta, pos, "closed"))
            a = self.rs.points[pos]
            for b in range(len(acc)):
                acc[b] = ext.add(acc[b], w)
                w = ext.scalar_mul(a, w)

    def feed_all(self, word: Sequence) -> "DeferredDetector":
        for j, y in enumerate(word):
            self.feed(j, y)
        return self

    def padded(self, erased: Sequence[int]) -> list[int]:
        return pad_positions(self.rs.n, erased, self.e_max)

    def finalize(self, erased: Sequence[int] = ()) -> Decision:
        """Verdict for y outside ``erased`` (field positions), padded to e_max."""
        self._cursor.finish()
        return self.verdict(erased)

    def verdict(self, erased: Sequence[int]) -> Decision:
        """Decision for one erased set; may be called repeatedly after finalize."""
        if not self._cursor.finalized:
            raise IncompleteStreamError("stream not finished")
        E = self.padded(erased)
        F = self.code.field
        P = DensePoly.from_roots(F, [self.rs.points[p] for p in E])
        ext = self.ext
        total = 0
        for b, Qb in enumerate(self.acc):
            pb = P[b]
            if pb:
                total = ext.add(total, ext.scalar_mul(pb, Qb))
        return Decision.ACCEPT if total == 0 else Decision.REJECT


def direct_punctured_verdict(code: LinearCode, word: Sequence, kept: Sequence[int], ext: Field, beta: int) -> Decision:
    """Plain detector on y restricted to the field positions ``kept``."""
    rs = _underlying_rs(code)
    flat = code.flatten(word)
    sub = rs.puncture(kept)
    sub = ReedSolomon(sub.field, sub.points, rs.k, sub.column_multipliers)
    det = ErrorDetector(sub, ext=ext, beta=beta, mode="closed")
    return det.feed_all([flat[p] for p in kept]).finalize()
