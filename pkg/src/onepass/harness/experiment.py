"""Seeded trial runner with brute-force ground truth, plus the timing bench."""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Sequence

from ..codes import (
    ENUMERATION_LIMIT,
    FoldedReedSolomon,
    LinearCode,
    ReedSolomon,
    SparseLinearCode,
    distance_to_code_bruteforce,
)
from ..detect import Decision, ErrorDetector
from ..galois import field_of_order
from ..seeds import derive, trial_seed
from ..tolerant import build_config, tolerant_test_stream
from .corrupt import corrupt_random
from .report import RunReport

VARIANTS = ("RS", "GRS", "FoldedRS", "SparseLinear")


def make_code(variant: str, q: int, n: int, k: int | None = None, *, fold: int = 1, seed: int = 0,
              cdeg: int = 3, rdeg: int = 6) -> LinearCode:
    """Code over GF(q) on the points 0, 1, ..., n-1 (element encodings).

    GRS multipliers are seeded nonzero elements; SparseLinear ignores ``k``
    (its dimension follows from the rank of the seeded parity-check matrix).
    """
    F = field_of_order(q)
    if variant == "SparseLinear":
        return SparseLinearCode(F, n, cdeg, rdeg, seed)
    if n > q:
        raise ValueError(f"n = {n} exceeds the field size {q}")
    if k is None:
        raise ValueError("k is required for RS variants")
    points = list(range(n))
    if variant == "RS":
        return ReedSolomon(F, points, k)
    if variant == "GRS":
        rng = random.Random(derive(seed, 0x6125))
        return ReedSolomon(F, points, k, [rng.randrange(1, q) for _ in range(n)])
    if variant == "FoldedRS":
        return FoldedReedSolomon(ReedSolomon(F, points, k), fold)
    raise ValueError(f"unknown variant {variant!r}")


def symbol_distance_bound(code: LinearCode) -> int | None:
    """Guaranteed minimum distance in stream symbols (None when unknown)."""
    if isinstance(code, FoldedReedSolomon):
        return math.ceil((code.n - code.k + 1) / code.s)
    if isinstance(code, ReedSolomon):
        return code.n - code.k + 1
    return None


def ground_truth(code: LinearCode, word: Sequence, planted: int, oracle: bool) -> tuple[int | None, str]:
    """(distance, method).  Methods: oracle, unique (planted below half the distance), unknown."""
    if planted == 0:
        return 0, "codeword"
    if oracle and code.field.order ** code.k <= ENUMERATION_LIMIT:
        return distance_to_code_bruteforce(code, word)[0], "oracle"
    d = symbol_distance_bound(code)
    if d is not None and 2 * planted < d:
        return planted, "unique"
    return None, "unknown"


@dataclass
class ExperimentConfig:
    kind: str = "detect"
    variant: str = "RS"
    q: int = 256
    n: int = 255
    k: int = 4
    fold: int = 1
    cdeg: int = 3
    rdeg: int = 6
    code_seed: int = 0
    errors: list[int] = field(default_factory=lambda: [1])
    a: float = 1.0
    e: int = 1
    regime: str = "worst_case_a"
    c: float | None = None
    kwise: int | None = None
    gamma: float = 1 / 60
    trials: int = 100
    seed: int = 0
    oracle: bool = True
    only_trial: int | None = None

    def build_code(self) -> LinearCode:
        return make_code(self.variant, self.q, self.n, self.k, fold=self.fold, seed=self.code_seed,
                         cdeg=self.cdeg, rdeg=self.rdeg)


def _params(cfg: ExperimentConfig, code: LinearCode) -> dict:
    p = {k: v for k, v in asdict(cfg).items() if k != "only_trial"}
    p["code_k"] = code.k
    if cfg.kind == "detect":
        for key in ("e", "regime", "c", "kwise", "gamma"):
            p.pop(key)
    return p


def _detect_trial(code, cfg, i, seed, rep):
    rng = random.Random(seed)
    msg = code.random_message(rng)
    word = code.encode(msg)
    planted = cfg.errors[i % len(cfg.errors)]
    word, _ = corrupt_random(code, word, planted, rng)
    dist, how = ground_truth(code, word, planted, cfg.oracle)
    if how == "unknown":
        is_cw = code.is_codeword(word)
        dist, how = (0 if is_cw else None), "syndrome"
    else:
        is_cw = dist == 0
    det = ErrorDetector(code, cfg.a, derive(seed, 2))
    for j, y in enumerate(word):
        det.feed(j, y)
    verdict = det.finalize()
    accepted = verdict is Decision.ACCEPT
    rep.add_count("false_reject", not accepted, is_cw)
    rep.add_count("false_accept", accepted, not is_cw)
    correct = accepted == is_cw
    return [i, seed, planted, dist, how, verdict.value, correct]


def _tolerant_trial(code, cfg, i, seed, rep, threshold):
    rng = random.Random(seed)
    word = code.encode(code.random_message(rng))
    planted = cfg.errors[i % len(cfg.errors)]
    word, positions = corrupt_random(code, word, planted, rng)
    dist, how = ground_truth(code, word, planted, cfg.oracle)
    tcfg = build_config(code, cfg.e, cfg.regime, derive(seed, 1), a=cfg.a, c=cfg.c, kwise=cfg.kwise,
                        gamma=cfg.gamma)
    v = tolerant_test_stream(tcfg, enumerate(word), derive(seed, 2))
    near = dist is not None and dist <= cfg.e
    far = dist is not None and dist >= threshold
    located = set(positions) <= set(v.T)
    if near:
        rep.add_count("completeness", v.at_most_e)
        rep.add_count("localization", v.at_most_e and located)
    else:
        rep.add_count("completeness", False, False)
        rep.add_count("localization", False, False)
    rep.add_count("soundness", not v.at_most_e, far)
    correct = (v.at_most_e and located) if near else (not v.at_most_e) if far else None
    return [i, seed, planted, dist, how, v.decision.value, v.T, located, correct]


def run_experiment(cfg: ExperimentConfig) -> RunReport:
    """Independent seeded trials; trial i uses ``trial_seed(cfg.seed, i)``."""
    start = time.perf_counter()
    code = cfg.build_code()
    rep = RunReport(mode=f"experiment-{cfg.kind}", params=_params(cfg, code))
    if cfg.kind == "detect":
        rep.columns = ["trial", "seed", "planted", "distance", "truth", "verdict", "correct"]
        for name in ("false_reject", "false_accept"):
            rep.counts[name] = (0, 0)
    elif cfg.kind == "tolerant":
        rep.columns = ["trial", "seed", "planted", "distance", "truth", "verdict", "T", "planted_in_T", "correct"]
        for name in ("completeness", "localization", "soundness"):
            rep.counts[name] = (0, 0)
    else:
        raise ValueError(f"unknown experiment kind {cfg.kind!r}")
    threshold = None
    if cfg.kind == "tolerant":
        probe = build_config(code, cfg.e, cfg.regime, 0, a=cfg.a, c=cfg.c, kwise=cfg.kwise, gamma=cfg.gamma)
        threshold = probe.threshold
        rep.results["threshold"] = threshold
        if cfg.regime == "iterative_c":
            rep.results["guarantee"] = "empirical only; the analytic constant for this regime is not certified"
    indices = range(cfg.trials) if cfg.only_trial is None else [cfg.only_trial]
    for i in indices:
        seed = trial_seed(cfg.seed, i)
        if cfg.kind == "detect":
            row = _detect_trial(code, cfg, i, seed, rep)
        else:
            row = _tolerant_trial(code, cfg, i, seed, rep, threshold)
        rep.trials.append(row)
    rep.results["trials_run"] = len(rep.trials)
    rep.wall_time = time.perf_counter() - start
    return rep


# -- bench --------------------------------------------------------------------------------

BENCH_SUITES = ("detect", "tolerant", "all")


def run_bench(suite: str = "all", seed: int = 0, repeats: int = 3) -> RunReport:
    """Wall-clock timings; rows are (suite, case, n, seconds per word)."""
    if suite not in BENCH_SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    start = time.perf_counter()
    rep = RunReport(mode="bench", params={"suite": suite, "seed": seed, "repeats": repeats})
    rep.columns = ["suite", "case", "n", "seconds"]
    rng = random.Random(seed)
    if suite in ("detect", "all"):
        warm = make_code("RS", 256, 8, 2)
        ErrorDetector(warm, 1.0, seed).feed_all(warm.encode([0, 0])).finalize()  # build field tables untimed
        for n in (32, 64, 128, 255):
            code = make_code("RS", 256, n, max(1, n // 4))
            word = code.encode(code.random_message(rng))
            for mode in ("naive", "closed"):
                t0 = time.perf_counter()
                for r in range(repeats):
                    ErrorDetector(code, 1.0, derive(seed, r), mode=mode).feed_all(word).finalize()
                rep.trials.append(["detect", mode, n, (time.perf_counter() - t0) / repeats])
    if suite in ("tolerant", "all"):
        for n in (64, 128, 255):
            code = make_code("RS", 256, n, 2)
            e = 4
            word = code.encode(code.random_message(rng))
            t0 = time.perf_counter()
            for r in range(repeats):
                cfg = build_config(code, e, "worst_case_a", derive(seed, r, 1))
                tolerant_test_stream(cfg, enumerate(word), derive(seed, r, 2))
            rep.trials.append(["tolerant", "worst_case_a", n, (time.perf_counter() - t0) / repeats])
    rep.wall_time = time.perf_counter() - start
    return rep

