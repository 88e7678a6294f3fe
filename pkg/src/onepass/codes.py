"""Linear codes given by strongly explicit parity-check oracles.

Positions are 0-based throughout.  Codewords and received words are lists of
raw field values (ints); a folded Reed-Solomon word is a list of ``s``-tuples.
"""

from __future__ import annotations

import itertools
import random
from functools import cached_property
from typing import Sequence

import numpy as np

from .galois import Field, FieldElement

ENUMERATION_LIMIT = 1 << 20


class CodeError(ValueError):
    pass


def _raw(F: Field, x) -> int:
    return F.coerce(x)


class LinearCode:
    """Shared surface: ``parity_entry(i, j)``, ``encode``, ``syndrome``."""

    variant: str
    field: Field
    n: int
    k: int

    @property
    def num_checks(self) -> int:
        return self.n - self.k

    @property
    def num_symbols(self) -> int:
        """Length of the stream, in code symbols."""
        return self.n

    def symbol_positions(self, j: int) -> range:
        """Underlying field positions carried by stream symbol ``j``."""
        return range(j, j + 1)

    def flatten(self, word: Sequence) -> list[int]:
        F = self.field
        return [_raw(F, x) for x in word]

    def parity_entry(self, i: int, j: int) -> int:
        raise NotImplementedError

    def parity_column(self, j: int):
        """Yield the nonzero ``(i, h_ij)`` of column ``j`` in increasing ``i``."""
        for i in range(self.num_checks):
            h = self.parity_entry(i, j)
            if h:
                yield i, h

    def _check_entry(self, i: int, j: int):
        if not 0 <= i < self.num_checks:
            raise IndexError(f"row {i} out of range [0, {self.num_checks})")
        if not 0 <= j < self.n:
            raise IndexError(f"column {j} out of range [0, {self.n})")

    def syndrome(self, word: Sequence) -> list[int]:
        F = self.field
        y = self.flatten(word)
        if len(y) != self.n:
            raise CodeError(f"word of length {len(y)}, expected {self.n}")
        s = [0] * self.num_checks
        for j, yj in enumerate(y):
            if yj:
                for i, h in self.parity_column(j):
                    s[i] = F.add(s[i], F.mul(yj, h))
        return s

    def is_codeword(self, word: Sequence) -> bool:
        return not any(self.syndrome(word))

    def generator_rows(self) -> list[list[int]]:
        """Encodings of the unit messages (flattened)."""
        rows = []
        for t in range(self.k):
            m = [0] * self.k
            m[t] = 1
            rows.append(self.flatten(self.encode(m)))
        return rows

    def encode(self, message: Sequence) -> list:
        raise NotImplementedError

    def random_message(self, rng: random.Random) -> list[int]:
        return [rng.randrange(self.field.order) for _ in range(self.k)]


class ReedSolomon(LinearCode):
    """RS_S[k] (or GRS with column multipliers ``u``: c_j = u_j P(alpha_j)).

    Parity checks are h_ij = (v_j / u_j) alpha_j^i for 0 <= i < n - k with
    v_j = 1 / prod_{l != j} (alpha_j - alpha_l).
    """

    def __init__(self, field: Field, points: Sequence, k: int, column_multipliers: Sequence | None = None):
        self.field = field
        self.points = tuple(_raw(field, a) for a in points)
        self.n = len(self.points)
        self.k = int(k)
        if len(set(self.points)) != self.n:
            raise CodeError("evaluation points must be pairwise distinct")
        if not 0 <= self.k <= self.n:
            raise CodeError(f"need 0 <= k <= n, got k={k}, n={self.n}")
        if column_multipliers is not None:
            u = tuple(_raw(field, c) for c in column_multipliers)
            if len(u) != self.n or any(c == 0 for c in u):
                raise CodeError("column multipliers must be n nonzero elements")
            self.column_multipliers = u
            self.variant = "GRS"
        else:
            self.column_multipliers = None
            self.variant = "RS"

    def __repr__(self):
        return f"{self.variant}({self.field}, n={self.n}, k={self.k})"

    def __eq__(self, other):
        return (
            isinstance(other, ReedSolomon)
            and self.field == other.field
            and self.points == other.points
            and self.k == other.k
            and self.column_multipliers == other.column_multipliers
        )

    def __hash__(self):
        return hash((self.field, self.points, self.k, self.column_multipliers))

    def with_dimension(self, k: int) -> "ReedSolomon":
        return ReedSolomon(self.field, self.points, k, self.column_multipliers)

    # -- multipliers --------------------------------------------------------------
    def rs_multiplier(self, j: int) -> int:
        """v_j = 1 / prod_{l != j} (alpha_j - alpha_l); O(n) field operations."""
        if not 0 <= j < self.n:
            raise IndexError(f"position {j} out of range")
        F = self.field
        aj = self.points[j]
        prod = 1
        for l, al in enumerate(self.points):
            if l != j:
                prod = F.mul(prod, F.sub(aj, al))
        return F.inv(prod)

    @cached_property
    def multipliers(self) -> tuple[int, ...]:
        """All v_j; each is the same O(n) product as :meth:`rs_multiplier`."""
        F = self.field
        pts = self.points
        log = getattr(F, "_log", None)
        if F.p == 2 and log is not None:
            exp = F._exp
            order1 = F.order - 1
            out = []
            for aj in pts:
                s = 0
                for al in pts:
                    if al != aj:
                        s += log[aj ^ al]
                out.append(exp[(-s) % order1])
            return tuple(out)
        return tuple(self.rs_multiplier(j) for j in range(self.n))

    @cached_property
    def parity_multipliers(self) -> tuple[int, ...]:
        v = self.multipliers
        if self.column_multipliers is None:
            return v
        F = self.field
        return tuple(F.div(a, b) for a, b in zip(v, self.column_multipliers))

    @cached_property
    def has_constant_multiplier(self) -> bool:
        return len(set(self.parity_multipliers)) <= 1

    def parity_entry(self, i: int, j: int) -> int:
        self._check_entry(i, j)
        F = self.field
        return F.mul(self.parity_multipliers[j], F.pow(self.points[j], i))

    def parity_column(self, j: int):
        F = self.field
        h = self.parity_multipliers[j]
        a = self.points[j]
        for i in range(self.num_checks):
            yield i, h
            h = F.mul(h, a)

    # -- encoding -------------------------------------------------------------------
    def encode(self, message: Sequence) -> list[int]:
        F = self.field
        m = [_raw(F, x) for x in message]
        if len(m) != self.k:
            raise CodeError(f"message of length {len(m)}, expected {self.k}")
        out = []
        for a in self.points:
            acc = 0
            for c in reversed(m):
                acc = F.add(F.mul(acc, a), c)
            out.append(acc)
        if self.column_multipliers is not None:
            out = [F.mul(u, c) for u, c in zip(self.column_multipliers, out)]
        return out

    def puncture(self, positions: Sequence[int]) -> "ReedSolomon":
        """The code projected onto ``positions`` (kept in the given order)."""
        positions = list(positions)
        if not positions:
            raise CodeError("cannot puncture to an empty position set")
        if len(set(positions)) != len(positions) or not all(0 <= p < self.n for p in positions):
            raise CodeError("puncture positions must be distinct and in range")
        pts = [self.points[p] for p in positions]
        u = None if self.column_multipliers is None else [self.column_multipliers[p] for p in positions]
        return ReedSolomon(self.field, pts, min(self.k, len(pts)), u)


class FoldedReedSolomon(LinearCode):
    """RS codeword regrouped into n/s consecutive blocks of s field elements."""

    variant = "FoldedRS"

    def __init__(self, rs: ReedSolomon, s: int):
        if s < 1 or rs.n % s:
            raise CodeError(f"folding parameter {s} must divide n={rs.n}")
        self.rs = rs
        self.s = s
        self.field = rs.field
        self.n = rs.n
        self.k = rs.k

    def __repr__(self):
        return f"FoldedRS({self.field}, n={self.n}, k={self.k}, s={self.s})"

    @property
    def points(self):
        return self.rs.points

    @property
    def num_symbols(self) -> int:
        return self.n // self.s

    def symbol_positions(self, j: int) -> range:
        return range(j * self.s, (j + 1) * self.s)

    def flatten(self, word: Sequence) -> list[int]:
        F = self.field
        out: list[int] = []
        for sym in word:
            if isinstance(sym, (int, FieldElement)):
                raise CodeError("folded words are sequences of s-tuples")
            if len(sym) != self.s:
                raise CodeError(f"folded symbol of size {len(sym)}, expected {self.s}")
            out.extend(_raw(F, x) for x in sym)
        return out

    def fold(self, flat: Sequence[int]) -> list[tuple[int, ...]]:
        s = self.s
        return [tuple(flat[i:i + s]) for i in range(0, len(flat), s)]

    def parity_entry(self, i, j):
        return self.rs.parity_entry(i, j)

    def parity_column(self, j):
        return self.rs.parity_column(j)

    def encode(self, message):
        return self.fold(self.rs.encode(message))

    def puncture(self, symbols: Sequence[int]) -> "FoldedReedSolomon":
        pos = [p for j in symbols for p in self.symbol_positions(j)]
        return FoldedReedSolomon(self.rs.puncture(pos), self.s)


class SparseLinearCode(LinearCode):
    """Code whose parity-check matrix is a seeded (c, d)-biregular 0/1 incidence matrix.

    Gallager-style: ``c`` bands of n/d checks, each band a random permutation of
    the columns cut into groups of ``d``, so every column meets exactly ``c``
    distinct checks.  Expansion is not certified.
    """

    variant = "SparseLinear"

    def __init__(self, field: Field, n: int, column_degree: int, row_degree: int, seed: int = 0):
        if n % row_degree:
            raise CodeError("row degree must divide n")
        self.field = field
        self.n = n
        self.column_degree = column_degree
        self.row_degree = row_degree
        self.seed = seed
        rng = random.Random(seed)
        per_band = n // row_degree
        self._rows_of: list[list[int]] = [[] for _ in range(n)]
        for b in range(column_degree):
            perm = list(range(n))
            rng.shuffle(perm)
            for slot, col in enumerate(perm):
                self._rows_of[col].append(b * per_band + slot // row_degree)
        self._m = per_band * column_degree
        self._build_encoder()

    def __repr__(self):
        return f"SparseLinear({self.field}, n={self.n}, k={self.k}, seed={self.seed})"

    @property
    def num_checks(self) -> int:
        return self._m

    def parity_entry(self, i, j):
        self._check_entry(i, j)
        return 1 if i in self._rows_of[j] else 0

    def parity_column(self, j):
        for i in sorted(self._rows_of[j]):
            yield i, 1

    def _build_encoder(self):
        F = self.field
        H = [[0] * self.n for _ in range(self._m)]
        for j, rows in enumerate(self._rows_of):
            for i in rows:
                H[i][j] = 1
        pivots = []
        r = 0
        for col in range(self.n):
            piv = next((i for i in range(r, self._m) if H[i][col]), None)
            if piv is None:
                continue
            H[r], H[piv] = H[piv], H[r]
            inv = F.inv(H[r][col])
            H[r] = [F.mul(inv, x) for x in H[r]]
            for i in range(self._m):
                if i != r and H[i][col]:
                    c = H[i][col]
                    H[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(H[i], H[r])]
            pivots.append(col)
            r += 1
        self.rank = r
        self.parity_positions = tuple(pivots)
        pivset = set(pivots)
        self.info_positions = tuple(j for j in range(self.n) if j not in pivset)
        self.k = self.n - r
        self._rref = [[H[t][f] for f in self.info_positions] for t in range(r)]

    def encode(self, message):
        F = self.field
        m = [_raw(F, x) for x in message]
        if len(m) != self.k:
            raise CodeError(f"message of length {len(m)}, expected {self.k}")
        out = [0] * self.n
        for pos, v in zip(self.info_positions, m):
            out[pos] = v
        for t, p in enumerate(self.parity_positions):
            acc = 0
            for c, v in zip(self._rref[t], m):
                if c and v:
                    acc = F.add(acc, F.mul(c, v))
            out[p] = F.neg(acc)
        return out


# -- brute-force oracles ---------------------------------------------------------------

class _VecArith:
    """Vectorised add / scalar-multiply for raw field values in numpy arrays."""

    def __init__(self, F: Field):
        self.F = F
        q = F.order
        if F.base is None:
            self.kind = "prime"
        elif F.p == 2 and q <= 1 << 16:
            self.kind = "xor"
            self.mul_row = {}
        elif q <= 1 << 10:
            self.kind = "table"
            self.add_tab = np.array([[F.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
            self.mul_row = {}
        else:
            raise CodeError(f"brute-force oracles do not support {F}")

    def add(self, a, b):
        if self.kind == "prime":
            return (a + b) % self.F.p
        if self.kind == "xor":
            return a ^ b
        return self.add_tab[a, b]

    def scale(self, c: int, vec):
        F = self.F
        if self.kind == "prime":
            return (c * vec) % F.p
        row = self.mul_row.get(c)
        if row is None:
            row = np.array([F.mul(c, x) for x in range(F.order)], dtype=np.int64)
            self.mul_row[c] = row
        return row[vec]


def _check_budget(code: LinearCode):
    total = code.field.order ** code.k
    if total > ENUMERATION_LIMIT:
        raise CodeError(f"q^k = {total} exceeds the enumeration bound {ENUMERATION_LIMIT}")


def _codeword_blocks(code: LinearCode):
    """Yield (messages, codewords) arrays covering all q^k codewords."""
    _check_budget(code)
    F = code.field
    q = F.order
    ar = _VecArith(F)
    G = [np.array(g, dtype=np.int64) for g in code.generator_rows()]
    n = code.n
    if code.k == 0:
        yield np.zeros((1, 0), dtype=np.int64), np.zeros((1, n), dtype=np.int64)
        return
    words = np.zeros((1, n), dtype=np.int64)
    msgs = np.zeros((1, 0), dtype=np.int64)
    for t in range(code.k - 1):
        parts_w, parts_m = [], []
        for c in range(q):
            parts_w.append(ar.add(words, ar.scale(c, G[t])[None, :]))
            parts_m.append(np.hstack([msgs, np.full((len(msgs), 1), c, dtype=np.int64)]))
        words = np.vstack(parts_w)
        msgs = np.vstack(parts_m)
    last = G[code.k - 1]
    for c in range(q):
        yield (
            np.hstack([msgs, np.full((len(msgs), 1), c, dtype=np.int64)]),
            ar.add(words, ar.scale(c, last)[None, :]),
        )


def _symbol_mismatch(code: LinearCode, words, y):
    diff = words != y[None, :]
    if isinstance(code, FoldedReedSolomon):
        diff = diff.reshape(len(words), code.num_symbols, code.s).any(axis=2)
    return diff


def _as_output(code: LinearCode, flat) -> list:
    flat = [int(x) for x in flat]
    if isinstance(code, FoldedReedSolomon):
        return code.fold(flat)
    return flat


def distance_to_code_bruteforce(code: LinearCode, word: Sequence) -> tuple[int, list]:
    """Exact Hamming distance (in code symbols) to the nearest codeword, by enumeration."""
    y = np.array(code.flatten(word), dtype=np.int64)
    if len(y) != code.n:
        raise CodeError(f"word of length {len(y)}, expected {code.n}")
    best, best_word = None, None
    for _, words in _codeword_blocks(code):
        dist = _symbol_mismatch(code, words, y).sum(axis=1)
        i = int(np.argmin(dist))
        if best is None or dist[i] < best:
            best, best_word = int(dist[i]), words[i]
    return best, _as_output(code, best_word)


def agreeing_codewords_bruteforce(code: LinearCode, word: Sequence, a: int) -> list[tuple[list, frozenset]]:
    """All codewords agreeing with ``word`` on at least ``a`` symbols, with their agreement sets."""
    y = np.array(code.flatten(word), dtype=np.int64)
    if len(y) != code.n:
        raise CodeError(f"word of length {len(y)}, expected {code.n}")
    out = []
    for _, words in _codeword_blocks(code):
        agree = ~_symbol_mismatch(code, words, y)
        hits = np.nonzero(agree.sum(axis=1) >= a)[0]
        for i in hits:
            out.append((_as_output(code, words[i]), frozenset(int(p) for p in np.nonzero(agree[i])[0])))
    return out


def all_codewords(code: LinearCode) -> list:
    out = []
    for _, words in _codeword_blocks(code):
        out.extend(_as_output(code, w) for w in words)
    return out


def hamming_distance(code: LinearCode, a: Sequence, b: Sequence) -> int:
    if isinstance(code, FoldedReedSolomon):
        return sum(tuple(x) != tuple(y) for x, y in zip(a, b))
    return sum(int(x) != int(y) for x, y in zip(a, b))


def full_field_rs(field: Field, k: int) -> ReedSolomon:
    """RS over every field element; its parity multipliers are all equal (to -1)."""
    return ReedSolomon(field, list(field.elements()), k)


def first_points(field: Field, n: int) -> list[int]:
    return list(itertools.islice(field.elements(), n))
