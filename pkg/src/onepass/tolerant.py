"""One-pass tolerant testers for Reed-Solomon and folded Reed-Solomon codes.

The tester runs one fingerprint per test row of a list-disjunct matrix M (row
i checks y restricted to M_i against the punctured code), decodes the
outcome vector into a candidate error set, and in the same pass maintains a
deferred detector that finally checks y outside the candidates.

Regimes:
  * ``worst_case_a``: min row support s > k + e, worst-case errors;
  * ``random_b``:     s >= 4k, random errors;
  * ``iterative_c``:  rounds of gamma-list-disjunct matrices with shrinking
    error budgets, all fused into one pass with deferred row detectors.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .codes import CodeError, FoldedReedSolomon, LinearCode, ReedSolomon
from .detect import DeferredDetector, Decision, extension_degree, sample_beta
from .galois import Field, extension_field
from .galois.poly import DensePoly
from .group_testing import (
    BinMatrix,
    DisjunctParams,
    decode,
    gamma_thresholds,
    random_list_disjunct,
    rows_for,
)
from .seeds import derive

REGIMES = ("worst_case_a", "random_b", "iterative_c")
DEFAULT_GAMMA = 1 / 60
MAX_MATRIX_ATTEMPTS = 4096


class Outcome(enum.Enum):
    AT_MOST_E = "AT_MOST_E"
    AT_LEAST_THRESHOLD = "AT_LEAST_THRESHOLD"


class RegimeViolation(ValueError):
    pass


@dataclass
class Verdict:
    decision: Outcome
    T: list[int]
    threshold: float
    multiplier: float
    reason: str = ""
    candidates: list[int] = field(default_factory=list)
    dropped_rows: int = 0

    @property
    def at_most_e(self) -> bool:
        return self.decision is Outcome.AT_MOST_E


def _rs(code: LinearCode) -> ReedSolomon:
    if isinstance(code, FoldedReedSolomon):
        return code.rs
    if isinstance(code, ReedSolomon):
        return code
    raise CodeError(f"tolerant testing needs an RS or folded RS code, got {code.variant}")


def _fold(code: LinearCode) -> int:
    return code.s if isinstance(code, FoldedReedSolomon) else 1


def regime_check(code: LinearCode, e: int, regime: str, s: int | None = None) -> tuple[bool, str]:
    """Whether min row support ``s`` (in code symbols) suits the regime.

    ``s`` defaults to ceil(n / 2e).  Regime a needs s > k + e and s >= n/(2e);
    regime b needs s >= 4k and s >= n/(2e); regime c is recorded, not enforced.
    """
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    if e == 0:
        return True, "e = 0: plain error detection"
    n, k = code.num_symbols, code.k
    if s is None:
        s = math.ceil(n / (2 * e))
    problems = []
    if 2 * e * s < n:
        problems.append(f"s = {s} < n/(2e) = {n / (2 * e):.3f}")
    if regime == "worst_case_a" and not s > k + e:
        problems.append(f"s = {s} <= k + e = {k + e}")
    if regime == "random_b" and s < 4 * k:
        problems.append(f"s = {s} < 4k = {4 * k}")
    if regime == "iterative_c":
        bound = (code.num_symbols * _fold(code) / max(k, 1)) ** (1 / (_fold(code) + 1))
        note = f"part (c) domain e <~ (sn/k)^(1/(s+1)) = {bound:.3f}, not enforced"
        if problems:
            return False, "; ".join(problems + [note])
        return True, note
    if problems:
        return False, "; ".join(problems)
    return True, "ok"


def auto_density_constant(n: int, e: int, c: float = 12.0) -> float:
    """Largest c' <= c with ceil(c' e log2 n) <= n."""
    return min(c, n / (e * math.log2(n)))


def sample_matrix(n: int, e: int, seed: int, min_support: int, c: float | None = None,
                  kwise: int | None = None, params: DisjunctParams | None = None,
                  max_attempts: int = MAX_MATRIX_ATTEMPTS) -> BinMatrix:
    """Random list-disjunct matrix resampled (over derived seeds) until every row has
    at least ``min_support`` ones."""
    e_eff = max(e, 2)
    c = auto_density_constant(n, e_eff) if c is None else c
    for attempt in range(max_attempts):
        M = random_list_disjunct(n, e_eff, c, derive(seed, 0x3A7, attempt), kwise, params=params)
        if M.min_row_support() >= min_support:
            return M
    raise RegimeViolation(f"no matrix with row support >= {min_support} in {max_attempts} draws")


@dataclass
class TesterConfig:
    code: LinearCode
    e: int
    regime: str
    matrices: list[BinMatrix]
    budgets: list[int]
    a: float = 1.0
    gamma: float = DEFAULT_GAMMA
    note: str = ""
    iterative: bool = False

    @property
    def matrix(self) -> BinMatrix | None:
        return self.matrices[0] if self.matrices else None

    @property
    def rounds(self) -> int:
        return len(self.matrices)

    @property
    def multiplier(self) -> float:
        if self.iterative:
            g = self.gamma
            return 2 * (2 - g) / (1 - g) + 1 / self.e
        return 2.0

    @property
    def threshold(self) -> float:
        """Error count at or above which AT_LEAST_THRESHOLD is the expected verdict."""
        if self.iterative:
            g = self.gamma
            return 2 * self.e * (2 - g) / (1 - g) + 1
        return 2 * self.e

    @property
    def step2_budget(self) -> int:
        """Deferred-check capacity in code symbols."""
        if self.iterative:
            return sum(2 * b for b in self.budgets)
        return max(2 * self.e - 1, 0)


def round_budgets(e: int, gamma: float) -> list[int]:
    """e_1 = e, e_j = ceil(gamma^(j-1) e) for R = ceil(log e / log(1/gamma)) rounds."""
    if e <= 1:
        return [e]
    R = max(1, math.ceil(math.log(e) / math.log(1 / gamma)))
    return [math.ceil(gamma ** j * e - 1e-12) for j in range(R)]


def build_config(code: LinearCode, e: int, regime: str = "worst_case_a", seed: int = 0, *,
                 a: float = 1.0, c: float | None = None, kwise: int | None = None,
                 gamma: float = DEFAULT_GAMMA, matrix: BinMatrix | None = None,
                 enforce: bool = True) -> TesterConfig:
    """Sample the test matrices for a run and validate the regime."""
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    _rs(code)  # rejects non-RS codes early
    n = code.num_symbols
    if e < 0 or e > n - code.k:
        raise RegimeViolation(f"need 0 <= e <= n - k, got e={e}")
    if e == 0:
        return TesterConfig(code, 0, regime, [], [], a, gamma, "e = 0: plain error detection")
    if regime == "iterative_c" and e <= code.k:
        cfg = build_config(code, e, "worst_case_a", seed, a=a, c=c, kwise=kwise, matrix=matrix, enforce=enforce)
        cfg.note = "e <= k: delegated to the worst-case tester"
        cfg.regime = "iterative_c"
        cfg.gamma = gamma
        return cfg
    s_req = math.ceil(n / (2 * e))
    if regime == "worst_case_a":
        s_req = max(s_req, code.k + e + 1)
    elif regime == "random_b":
        s_req = max(s_req, 4 * code.k)
    if regime != "iterative_c":
        if matrix is None:
            matrix = sample_matrix(n, e, seed, s_req, c, kwise)
        if matrix.n != n:
            raise RegimeViolation(f"matrix has {matrix.n} columns, code has {n} symbols")
        ok, msg = regime_check(code, e, regime, matrix.min_row_support())
        if not ok and enforce:
            raise RegimeViolation(msg)
        return TesterConfig(code, e, regime, [matrix], [e], a, gamma, msg)
    budgets = round_budgets(e, gamma)
    mats = []
    for j, ej in enumerate(budgets):
        ed = max(ej, 2)
        cj = auto_density_constant(n, ed) if c is None else c
        t = rows_for(n, ed, cj)
        b1, b2 = gamma_thresholds(t, ed)
        params = DisjunctParams(e=ej, ell=ej, gamma=gamma, b1=b1, b2=b2)
        mats.append(sample_matrix(n, ed, derive(seed, j), math.ceil(n / (2 * ed)), cj, kwise, params))
    ok, msg = regime_check(code, e, regime, min(M.min_row_support() for M in mats))
    if not ok and enforce:
        raise RegimeViolation(msg)
    return TesterConfig(code, e, regime, mats, budgets, a, gamma, msg, iterative=True)


class RowBank:
    """Per-row fingerprints of y restricted to each row of a matrix, sharing one beta.

    With ``e_max`` > 0 every row is a deferred detector over RS_{M_i}[k + e_max]
    (e_max counted in field positions); otherwise a plain detector over RS_{M_i}[k].
    Rows with no parity checks left are dropped: their outcome is fixed to 1 so
    they never clear a column.
    """

    def __init__(self, code: LinearCode, matrix: BinMatrix, ext: Field, beta: int, e_max: int = 0):
        self.code = code
        self.rs = _rs(code)
        self.matrix = matrix
        self.ext = ext
        self.beta = beta
        self.e_max = e_max
        s = _fold(code)
        k = self.rs.k
        self.row_positions: list[list[int] | None] = []
        self.by_pos: list[list[tuple[int, int, int]]] = [[] for _ in range(self.rs.n)]
        self.dropped: list[int] = []
        for i in range(matrix.t):
            pos = [p for j in matrix.row_set(i) for p in range(j * s, (j + 1) * s)]
            m = len(pos) - k - e_max
            if m <= 0:
                self.dropped.append(i)
                self.row_positions.append(None)
                continue
            self.row_positions.append(pos)
            mults = self.rs.puncture(pos).parity_multipliers
            for p, v in zip(pos, mults):
                self.by_pos[p].append((i, v, m))
        self.maxm = [max((m for _, _, m in lst), default=0) for lst in self.by_pos]
        width = e_max + 1
        self.acc = [[0] * width if rp is not None else None for rp in self.row_positions]

    def state_size(self) -> int:
        return sum(len(a) for a in self.acc if a is not None)

    def feed_position(self, p: int, y: int) -> None:
        if not y or not self.by_pos[p]:
            return
        ext, F = self.ext, self.code.field
        alpha = self.rs.points[p]
        x = ext.scalar_mul(alpha, self.beta)
        maxm = self.maxm[p]
        G = [0] * (maxm + 1)
        xp = 1
        for m in range(1, maxm + 1):
            G[m] = ext.add(G[m - 1], xp)
            xp = ext.mul(xp, x)
        add, smul, fmul = ext.add, ext.scalar_mul, F.mul
        for i, v, m in self.by_pos[p]:
            c = fmul(y, v)
            acc = self.acc[i]
            g = G[m]
            for b in range(len(acc)):
                acc[b] = add(acc[b], smul(c, g))
                c = fmul(c, alpha)

    def outcomes(self) -> list[int]:
        """Plain rows: r_i = 0 iff the restricted word passes."""
        if self.e_max:
            raise ValueError("deferred rows need an erased set; use deferred_outcomes")
        return [1 if a is None or a[0] else 0 for a in self.acc]

    def row_verdict(self, i: int, erased: Sequence[int]) -> int:
        acc = self.acc[i]
        if acc is None:
            return 1
        pos = self.row_positions[i]
        inside = set(pos)
        E = [p for p in erased if p in inside]
        if len(E) > self.e_max:
            raise ValueError("erased set exceeds the row's capacity")
        used = set(E)
        for p in pos:
            if len(E) == self.e_max:
                break
            if p not in used:
                E.append(p)
        P = DensePoly.from_roots(self.code.field, [self.rs.points[p] for p in E])
        ext = self.ext
        total = 0
        for b, Qb in enumerate(acc):
            if P[b]:
                total = ext.add(total, ext.scalar_mul(P[b], Qb))
        return 1 if total else 0

    def deferred_outcomes(self, erased: Iterable[int]) -> list[int]:
        erased = list(erased)
        return [self.row_verdict(i, erased) for i in range(self.matrix.t)]


class TolerantRun:
    """A single pass of the tolerant tester over one received word."""

    def __init__(self, cfg: TesterConfig, seed: int = 0, *, ext: Field | None = None, beta: int | None = None):
        self.cfg = cfg
        code = cfg.code
        self.code = code
        self.rs = _rs(code)
        s = _fold(code)
        self.s = s
        t_total = sum(M.t for M in cfg.matrices)
        span = max(t_total, 1) * self.rs.n
        if ext is None:
            ext = extension_field(code.field, extension_degree(span, code.field.order, cfg.a))
        self.ext = ext
        self.beta = sample_beta(ext, seed) if beta is None else ext.coerce(beta)
        self.banks: list[RowBank] = []
        cum = 0
        for j, M in enumerate(cfg.matrices):
            self.banks.append(RowBank(code, M, ext, self.beta, e_max=cum * s))
            cum += 2 * cfg.budgets[j]
        self.step2_symbols = cfg.step2_budget
        e_max_pts = min(self.step2_symbols * s, self.rs.n - self.rs.k)
        self.step2 = DeferredDetector(code, e_max_pts, cfg.a, ext=ext, beta=self.beta)
        dropped = sum(len(b.dropped) for b in self.banks)
        if dropped:
            warnings.warn(f"{dropped} test rows have too few positions and were dropped", RuntimeWarning)
        self.dropped = dropped

    def state_size(self) -> int:
        """GF(Q) elements retained across the pass (all accumulators plus beta)."""
        return sum(b.state_size() for b in self.banks) + self.step2.state_size()

    @property
    def next_index(self) -> int:
        return self.step2.next_index

    def feed(self, j: int, y) -> None:
        F = self.code.field
        self.step2.feed(j, y)
        if self.s == 1 and not isinstance(y, (tuple, list)):
            vals = [(j, F.coerce(y))]
        else:
            vals = list(zip(self.code.symbol_positions(j), (F.coerce(v) for v in y)))
        for bank in self.banks:
            for p, v in vals:
                bank.feed_position(p, v)

    def feed_all(self, word: Sequence) -> "TolerantRun":
        for j, y in enumerate(word):
            self.feed(j, y)
        return self

    def _positions(self, symbols: Iterable[int]) -> list[int]:
        s = self.s
        return [p for j in sorted(symbols) for p in range(j * s, (j + 1) * s)]

    def _verdict(self, decision: Outcome, T: Sequence[int], reason: str, candidates: Sequence[int]) -> Verdict:
        cfg = self.cfg
        return Verdict(decision, sorted(T) if decision is Outcome.AT_MOST_E else [], cfg.threshold,
                       cfg.multiplier, reason, sorted(candidates), self.dropped)

    def finalize(self) -> Verdict:
        self.step2.finalize(())
        cfg = self.cfg
        G: set[int] = set()
        for j, (bank, M) in enumerate(zip(self.banks, cfg.matrices)):
            if j == 0:
                r = bank.outcomes()
            else:
                r = bank.deferred_outcomes(self._positions(G))
            b2 = M.params.b2 if (cfg.iterative and M.params) else 1
            new = set(decode(M, r, b2)) - G
            if len(new) >= 2 * cfg.budgets[j]:
                return self._verdict(Outcome.AT_LEAST_THRESHOLD, [], f"round {j + 1}: {len(new)} candidates >= 2e", G | new)
            G |= new
        if len(G) > self.step2_symbols or len(G) * self.s > self.step2.e_max:
            return self._verdict(Outcome.AT_LEAST_THRESHOLD, [], "candidate set exceeds the deferred capacity", G)
        dec = self.step2.verdict(self._positions(G))
        if dec is Decision.ACCEPT:
            return self._verdict(Outcome.AT_MOST_E, G, "outside-candidates check passed", G)
        return self._verdict(Outcome.AT_LEAST_THRESHOLD, [], "outside-candidates check failed", G)


def tolerant_test_stream(cfg: TesterConfig, stream: Iterable[tuple[int, object]], seed: int = 0) -> Verdict:
    """Consume ``(j, y_j)`` pairs once, in order, and return the verdict."""
    run = TolerantRun(cfg, seed)
    for j, y in stream:
        run.feed(j, y)
    return run.finalize()


def iterative_tolerant_test(cfg: TesterConfig, stream: Iterable[tuple[int, object]], seed: int = 0) -> Verdict:
    if cfg.regime != "iterative_c":
        raise ValueError("iterative_tolerant_test needs an iterative_c configuration")
    return tolerant_test_stream(cfg, stream, seed)


def tolerant_test(code: LinearCode, word: Sequence, e: int, regime: str = "worst_case_a", seed: int = 0,
                  **kwargs) -> Verdict:
    """Build a configuration from ``seed`` and test ``word`` in one pass."""
    cfg = build_config(code, e, regime, derive(seed, 1), **kwargs)
    return tolerant_test_stream(cfg, enumerate(word), derive(seed, 2))
