"""Non-adaptive group testing: list-disjunct matrices, verifiers and the threshold decoder.

Rows are tests, columns are items.  A row is treated as the subset of columns
where it has a one.  Indices are 0-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .galois import GF, field_of_order
from .seeds import MASK64, derive, splitmix64_array

MATERIALIZE_LIMIT = 1 << 26
VERIFY_LIMIT = 1 << 24

ForbiddenFamily = Callable[[frozenset], Iterable[Iterable[int]]]


class MatrixParameterError(ValueError):
    pass


class BudgetExceededError(ValueError):
    pass


@dataclass(frozen=True)
class DisjunctParams:
    e: int
    ell: int
    gamma: float = 0.0
    b1: int = 0
    b2: int = 1

    def __post_init__(self):
        if not 0 <= self.b1 < self.b2:
            raise MatrixParameterError(f"need 0 <= b1 < b2, got b1={self.b1}, b2={self.b2}")
        if not 0.0 <= self.gamma <= 1.0:
            raise MatrixParameterError("gamma must lie in [0, 1]")


def gamma_thresholds(t: int, e: int) -> tuple[int, int]:
    """(b1, b2) for the gamma-list-disjunct decoder: b2 = ceil(t/(16e)), b1 = floor((t/e)(1/50 + 147/4000))."""
    b2 = max(1, math.ceil(t / (16 * e)))
    b1 = math.floor(t / e * (1 / 50 + 147 / 4000))
    return min(b1, b2 - 1), b2


# -- k-wise independent bits ------------------------------------------------------------

def _width_for(length: int) -> int:
    for w in (8, 16, 32):
        if length <= 1 << w:
            return w
    raise MatrixParameterError(f"length {length} exceeds 2^32 evaluation points")


def _modint(w: int) -> int:
    F = GF(2, w)
    return sum(c << i for i, c in enumerate(F.modulus))


def _clmul_mod(a: np.ndarray, b: np.ndarray, w: int, modint: int) -> np.ndarray:
    """Elementwise product in GF(2^w) of uint64 arrays (polynomial basis)."""
    one = np.uint64(1)
    r = np.zeros(np.broadcast(a, b).shape, dtype=np.uint64)
    for bit in range(w):
        sel = (b >> np.uint64(bit)) & one
        r ^= (a << np.uint64(bit)) * sel
    for bit in range(2 * w - 2, w - 1, -1):
        sel = (r >> np.uint64(bit)) & one
        r ^= np.uint64(modint << (bit - w)) * sel
    return r


class KWiseFamily:
    """Bits b_x = lowest bit of P(x), P a uniformly seeded polynomial of degree k-1 over GF(2^w).

    Distinct points give independent uniform values of P, so any k bits are independent.
    """

    def __init__(self, k: int, length: int, seed: int):
        if k < 1:
            raise MatrixParameterError("independence k must be >= 1")
        self.k = k
        self.length = length
        self.w = _width_for(length)
        self.modint = _modint(self.w)
        mask = (1 << self.w) - 1
        self.coeffs = [derive(seed, 0xC0EF, i) & mask for i in range(k)]

    def values(self, points: np.ndarray) -> np.ndarray:
        x = np.asarray(points, dtype=np.uint64)
        if x.size and int(x.max()) >= self.length:
            raise MatrixParameterError("evaluation point outside the declared length")
        acc = np.zeros(x.shape, dtype=np.uint64)
        for c in reversed(self.coeffs):
            acc = _clmul_mod(acc, x, self.w, self.modint) ^ np.uint64(c)
        return acc

    def bits(self, points: np.ndarray) -> np.ndarray:
        return (self.values(points) & np.uint64(1)).astype(np.uint8)


def kwise_bits(k: int, length: int, seed: int) -> np.ndarray:
    """``length`` k-wise independent unbiased bits from a seed of k*w bits."""
    return KWiseFamily(k, length, seed).bits(np.arange(length, dtype=np.uint64))


# -- matrices ---------------------------------------------------------------------------

class BinMatrix:
    """t x n 0/1 matrix, either materialised or recomputed row by row from a seed."""

    def __init__(self, t: int, n: int, params: DisjunctParams | None = None, *,
                 rows: np.ndarray | None = None, generator: "_Generator | None" = None,
                 seed: int | None = None, materialize: bool | None = None):
        self.t = t
        self.n = n
        self.params = params
        self.seed = seed
        self.generator = generator
        if rows is not None:
            rows = np.asarray(rows, dtype=bool)
            if rows.shape != (t, n):
                raise MatrixParameterError(f"rows of shape {rows.shape}, expected {(t, n)}")
        elif generator is None:
            raise MatrixParameterError("need explicit rows or a generator")
        elif materialize or (materialize is None and t * n <= MATERIALIZE_LIMIT):
            rows = np.zeros((t, n), dtype=bool)
            step = max(1, (1 << 18) // max(n, 1))
            for i0 in range(0, t, step):
                i1 = min(t, i0 + step)
                rows[i0:i1] = generator.block(i0, i1)
        self._rows = rows

    @classmethod
    def from_rows(cls, rows, params: DisjunctParams | None = None) -> "BinMatrix":
        rows = np.asarray(rows, dtype=bool)
        return cls(rows.shape[0], rows.shape[1], params, rows=rows)

    def __repr__(self):
        kind = "dense" if self.materialized else "seeded"
        return f"BinMatrix({self.t}x{self.n}, {kind})"

    @property
    def materialized(self) -> bool:
        return self._rows is not None

    def with_params(self, params: DisjunctParams) -> "BinMatrix":
        out = BinMatrix.__new__(BinMatrix)
        out.__dict__.update(self.__dict__)
        out.params = params
        return out

    def row(self, i: int) -> np.ndarray:
        if not 0 <= i < self.t:
            raise IndexError(f"row {i} out of range")
        if self._rows is not None:
            return self._rows[i]
        return self.generator.row(i)

    def rows(self):
        for i in range(self.t):
            yield self.row(i)

    def row_set(self, i: int) -> list[int]:
        return np.flatnonzero(self.row(i)).tolist()

    def entry(self, i: int, j: int) -> int:
        if not 0 <= j < self.n:
            raise IndexError(f"column {j} out of range")
        if self._rows is not None:
            if not 0 <= i < self.t:
                raise IndexError(f"row {i} out of range")
            return int(self._rows[i, j])
        return int(self.generator.entry(i, j))

    def dense(self) -> np.ndarray:
        if self._rows is not None:
            return self._rows
        return self.generator.block(0, self.t) if self.t else np.zeros((0, self.n), dtype=bool)

    def row_supports(self) -> np.ndarray:
        if self._rows is not None:
            return self._rows.sum(axis=1)
        return np.array([int(self.row(i).sum()) for i in range(self.t)])

    def column_weights(self) -> np.ndarray:
        return self.dense().sum(axis=0)

    def min_row_support(self) -> int:
        return int(self.row_supports().min()) if self.t else 0


class _Generator:
    name: str

    def row(self, i: int) -> np.ndarray:
        raise NotImplementedError

    def entry(self, i: int, j: int) -> int:
        return int(self.row(i)[j])

    def block(self, i0: int, i1: int) -> np.ndarray:
        """Rows i0..i1-1 as a dense array."""
        return np.vstack([self.row(i) for i in range(i0, i1)])


class BernoulliGenerator(_Generator):
    """entry(i, j) = 1 iff trial_seed(seed, i*n + j) < floor(2^64 / e)."""

    def __init__(self, n: int, e: int, seed: int):
        self.n, self.e, self.seed = n, e, seed
        self.name = f"bernoulli:{e}"
        self.threshold = np.uint64((MASK64 + 1) // e)

    def row(self, i):
        ctr = np.arange(i * self.n, (i + 1) * self.n, dtype=np.uint64)
        return splitmix64_array(ctr, self.seed) < self.threshold

    def entry(self, i, j):
        ctr = np.array([i * self.n + j], dtype=np.uint64)
        return bool(splitmix64_array(ctr, self.seed)[0] < self.threshold)

    def block(self, i0, i1):
        ctr = np.arange(i0 * self.n, i1 * self.n, dtype=np.uint64)
        return (splitmix64_array(ctr, self.seed) < self.threshold).reshape(i1 - i0, self.n)


class KWiseGenerator(_Generator):
    """entry(i, j) = AND of L = max(1, ceil(log2 e)) bits of a k-wise family.

    The bits used are those at points (i*n + j)*L + l, so the density is 2^-L.
    """

    def __init__(self, t: int, n: int, e: int, k: int, seed: int):
        self.n = n
        self.L = max(1, math.ceil(math.log2(e)))
        self.k = k
        self.family = KWiseFamily(k, t * n * self.L, seed)
        self.name = f"kwise:{k}:{e}"

    def _cells(self, cells: np.ndarray) -> np.ndarray:
        L = self.L
        pts = (cells.astype(np.uint64)[:, None] * np.uint64(L) + np.arange(L, dtype=np.uint64)).ravel()
        return self.family.bits(pts).reshape(-1, L).all(axis=1)

    def row(self, i):
        return self._cells(np.arange(i * self.n, (i + 1) * self.n))

    def entry(self, i, j):
        return bool(self._cells(np.array([i * self.n + j]))[0])

    def block(self, i0, i1):
        return self._cells(np.arange(i0 * self.n, i1 * self.n)).reshape(i1 - i0, self.n)


def rows_for(n: int, e: int, c: float) -> int:
    return math.ceil(c * e * math.log2(n))


def random_list_disjunct(n: int, e: int, c: float = 12.0, seed: int = 0, kwise: int | None = None,
                         *, ell: int | None = None, params: DisjunctParams | None = None,
                         strict: bool = True, materialize: bool | None = None) -> BinMatrix:
    """Random t x n matrix with t = ceil(c e log2 n) rows and Bernoulli(1/e) entries.

    With ``kwise`` set the entries come from a ``kwise``-wise independent bit
    family instead of the seeded PRNG.  ``strict`` enforces t <= n.
    """
    if e < 2:
        raise MatrixParameterError("random construction needs e >= 2")
    if n < 2:
        raise MatrixParameterError("need n >= 2")
    t = rows_for(n, e, c)
    if strict and t > n:
        raise MatrixParameterError(f"t = ceil(c e log2 n) = {t} exceeds n = {n}")
    if params is None:
        params = DisjunctParams(e=e, ell=e if ell is None else ell)
    gen = BernoulliGenerator(n, e, seed) if kwise is None else KWiseGenerator(t, n, e, kwise, seed)
    return BinMatrix(t, n, params, generator=gen, seed=seed, materialize=materialize)


def explicit_rs_disjunct(qp: int, kp: int) -> BinMatrix:
    """Kautz-Singleton matrix from RS_{GF(q')}[k'].

    Column m (message digits m_0 + m_1 q' + ...) has a one in row (a, b),
    index a*q' + b, iff sum_i m_i a^i = b.  It is e-disjunct for
    e = floor((q'-1)/(k'-1)) (every column when k' = 1).
    """
    if not 1 <= kp <= qp:
        raise MatrixParameterError("need 1 <= k' <= q'")
    F = field_of_order(qp)
    n = qp ** kp
    t = qp * qp
    if t * n > MATERIALIZE_LIMIT:
        raise BudgetExceededError(f"t*n = {t * n} exceeds {MATERIALIZE_LIMIT}")
    rows = np.zeros((t, n), dtype=bool)
    for col, msg in enumerate(itertools.product(range(qp), repeat=kp)):
        msg = msg[::-1]  # digit 0 varies fastest
        for a in range(qp):
            acc = 0
            for c in reversed(msg):
                acc = F.add(F.mul(acc, a), c)
            rows[a * qp + acc, col] = True
    e = n - 1 if kp == 1 else (qp - 1) // (kp - 1)
    return BinMatrix(t, n, DisjunctParams(e=e, ell=1), rows=rows)


# -- verification -------------------------------------------------------------------------

def _column_masks(M: BinMatrix) -> list[int]:
    dense = M.dense()
    masks = []
    for j in range(M.n):
        col = np.flatnonzero(dense[:, j])
        masks.append(sum(1 << int(i) for i in col))
    return masks


def verify_list_disjunct_bruteforce(M: BinMatrix, e: int, ell: int) -> bool:
    """True iff for all disjoint S (|S| = e) and T (|T| = ell) some row hits T and misses S."""
    n = M.n
    if e + ell > n:
        return True
    if math.comb(n, e) * math.comb(n - e, ell) > VERIFY_LIMIT:
        raise BudgetExceededError("C(n,e) C(n-e,ell) exceeds the verification budget")
    cols = _column_masks(M)
    full = (1 << M.t) - 1
    for S in itertools.combinations(range(n), e):
        hit = 0
        for s in S:
            hit |= cols[s]
        free = full & ~hit
        Sset = set(S)
        uncovered = sum(1 for j in range(n) if j not in Sset and not cols[j] & free)
        if uncovered >= ell:
            return False
    return True


def verify_disjunct_bruteforce(M: BinMatrix, e: int) -> bool:
    return verify_list_disjunct_bruteforce(M, e, 1)


def _contained_rows(rows_masks: list[int], family: Iterable[Iterable[int]]) -> int:
    """Bitmask over rows whose support lies inside some forbidden set."""
    out = 0
    for V in family:
        vmask = 0
        for j in V:
            vmask |= 1 << j
        for i, rm in enumerate(rows_masks):
            if rm and not rm & ~vmask:
                out |= 1 << i
    return out


def verify_gamma_list_disjunct_bruteforce(M: BinMatrix, params: DisjunctParams,
                                          forbidden: ForbiddenFamily | None = None) -> bool:
    """Check both conditions of the (e, ell, gamma, F)-list-disjunct property for every |T| <= e.

    1. every U disjoint from T with |U| >= ell has a column with at least b2
       rows that contain it and avoid T;
    2. at most gamma*e columns i of T have more than b1 rows containing i that
       lie inside a forbidden set of F(T).
    """
    n, e, ell = M.n, params.e, params.ell
    total = sum(math.comb(n, s) for s in range(e + 1))
    if total * n > VERIFY_LIMIT:
        raise BudgetExceededError("too many subsets T to verify")
    dense = M.dense()
    cols = _column_masks(M)
    rows_masks = [sum(1 << int(j) for j in np.flatnonzero(dense[i])) for i in range(M.t)]
    full = (1 << M.t) - 1
    for size in range(e + 1):
        for T in itertools.combinations(range(n), size):
            Tset = frozenset(T)
            hit = 0
            for s in T:
                hit |= cols[s]
            free = full & ~hit
            weak = sum(1 for j in range(n) if j not in Tset and (cols[j] & free).bit_count() < params.b2)
            if weak >= ell:
                return False
            if forbidden is not None and T:
                inside = _contained_rows(rows_masks, forbidden(Tset))
                bad = sum(1 for i in T if (cols[i] & inside).bit_count() > params.b1)
                if bad > params.gamma * e:
                    return False
    return True


# -- testing and decoding -------------------------------------------------------------------

def simulate_outcomes(M: BinMatrix, defectives: Iterable[int],
                      forbidden: ForbiddenFamily | None = None) -> np.ndarray:
    """Outcome r_i: 0 if row i misses D or lies inside a forbidden set of F(D), else 1."""
    D = frozenset(defectives)
    dl = sorted(D)
    family = [frozenset(V) for V in forbidden(D)] if (forbidden is not None and D) else []
    r = np.zeros(M.t, dtype=np.uint8)
    for i in range(M.t):
        row = M.row(i)
        if not dl or not row[dl].any():
            continue
        if family:
            support = set(np.flatnonzero(row).tolist())
            if any(support <= V for V in family):
                continue
        r[i] = 1
    return r


def decode(M: BinMatrix, r: Sequence[int], b2: int = 1) -> list[int]:
    """Columns kept after removing every column with >= b2 rows where M = 1 and r = 0."""
    r = np.asarray(r)
    if r.shape != (M.t,):
        raise ValueError(f"outcome vector of length {len(r)}, expected {M.t}")
    zero = np.flatnonzero(r == 0)
    if M.materialized:
        counts = M.dense()[zero].sum(axis=0)
    else:
        counts = np.zeros(M.n, dtype=np.int64)
        for i in zero:
            counts += M.row(int(i))
    return np.flatnonzero(counts < b2).tolist()


# -- interchange format --------------------------------------------------------------------

def format_matrix(M: BinMatrix) -> str:
    """Header ``t n e ell gamma b1 b2 seed`` then ``dense`` + hex rows or ``seeded <generator>``.

    A dense row is the hex integer sum_j M[i, j] 2^j, zero-padded to ceil(n/4) digits.
    The seed is ``-`` when absent.
    """
    p = M.params or DisjunctParams(e=1, ell=1)
    seed = "-" if M.seed is None else str(M.seed)
    lines = [f"{M.t} {M.n} {p.e} {p.ell} {p.gamma!r} {p.b1} {p.b2} {seed}"]
    if M.materialized or M.generator is None:
        lines.append("dense")
        width = (M.n + 3) // 4
        for row in M.rows():
            val = sum(1 << int(j) for j in np.flatnonzero(row))
            lines.append(format(val, f"0{width}x"))
    else:
        lines.append(f"seeded {M.generator.name}")
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> BinMatrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ValueError("matrix text needs a header and a body")
    head = lines[0].split()
    if len(head) != 8:
        raise ValueError("header must be: t n e ell gamma b1 b2 seed")
    t, n, e, ell = (int(x) for x in head[:4])
    params = DisjunctParams(e=e, ell=ell, gamma=float(head[4]), b1=int(head[5]), b2=int(head[6]))
    seed = None if head[7] == "-" else int(head[7])
    kind = lines[1].split()
    if kind[0] == "dense":
        body = lines[2:]
        if len(body) != t:
            raise ValueError(f"expected {t} rows, got {len(body)}")
        rows = np.zeros((t, n), dtype=bool)
        for i, h in enumerate(body):
            val = int(h, 16)
            if val >> n:
                raise ValueError(f"row {i} has bits beyond column {n - 1}")
            for j in range(n):
                rows[i, j] = (val >> j) & 1
        return BinMatrix(t, n, params, rows=rows, seed=seed)
    if kind[0] == "seeded":
        if seed is None or len(kind) != 2:
            raise ValueError("seeded matrices need a seed and a generator name")
        name, *args = kind[1].split(":")
        if name == "bernoulli" and len(args) == 1:
            gen = BernoulliGenerator(n, int(args[0]), seed)
        elif name == "kwise" and len(args) == 2:
            gen = KWiseGenerator(t, n, int(args[1]), int(args[0]), seed)
        else:
            raise ValueError(f"unknown generator {name!r}")
        return BinMatrix(t, n, params, generator=gen, seed=seed, materialize=False)
    raise ValueError(f"unknown matrix body kind {kind[0]!r}")
