"""Exact eavesdropper-leakage accounting for linear hashes over binary side channels.

The secret is S = X @ M^T for a uniform n-bit string X observed by the
eavesdropper through a memoryless channel. Everything here reduces to
column-subset ranks of M, aggregated once per matrix into a profile
counting subsets by (size, rank); erasure-side quantities and the
maximum-likelihood erasure decoding error are weighted sums over it.

Enumeration limits: 2^n patterns with n <= 26 for the exact paths, and
|Z|^n * 2^n for the brute-force oracle (n <= 12 for the 3-letter erasure
alphabet, n <= 14 for the 2-letter one).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channels import JointSource
from .errors import InputParseError, InvariantViolationError, SizeLimitError
from .gf2 import BinMatrix, random_matrix, rank

__all__ = [
    "LeakageReport",
    "PmlResult",
    "exact_leakage_bec",
    "exact_leakage_bsc",
    "brute_force_leakage",
    "p_ml_erasure",
    "mc_p_ml_erasure",
    "verify_leakage_bound",
    "best_matrix_search",
]

LN2 = math.log(2.0)

_ENUM_MAX_COLS = 26
_BRUTE_MAX_COLS = {2: 14, 3: 12}
_SLACK_FLOOR = -1e-9
_MC_CHUNK = 1 << 16
_PARALLEL_MIN_COLS = 20
_THREADS_ENV = "LEAKEXP_THREADS"

_COMB = [[math.comb(r, t) for t in range(r + 1)] for r in range(_ENUM_MAX_COLS + 1)]


@dataclass(frozen=True)
class LeakageReport:
    """Leakage I(S; Z^n) in nats plus the hash output entropy rank(M)*ln 2.

    For erasure side channels the report carries the decoding-error bound
    n * P_ML and its slack (bound - leakage); both are None otherwise.
    """

    leakage_nats: float
    hash_entropy_nats: float
    bound_nats: float | None = None
    slack_nats: float | None = None

    def __post_init__(self) -> None:
        if self.leakage_nats < 0.0:
            raise ValueError("leakage cannot be negative")
        if self.leakage_nats > self.hash_entropy_nats + 1e-9:
            raise ValueError("leakage cannot exceed the hash output entropy")


@dataclass(frozen=True)
class PmlResult:
    """Maximum-likelihood erasure decoding error probability estimate."""

    value: float
    method: str
    ci_halfwidth: float = 0.0
    samples: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"probability {self.value} outside [0, 1]")
        if self.method not in ("exact-enumeration", "monte-carlo"):
            raise ValueError(f"unknown method {self.method!r}")


def _check_enum_cols(m: BinMatrix) -> None:
    if m.cols > _ENUM_MAX_COLS:
        raise SizeLimitError(
            f"matrix has {m.cols} columns; 2^n enumeration capped at n={_ENUM_MAX_COLS}"
        )


def _check_prob(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name}={p} outside [0, 1]")


def _worker_count() -> int:
    raw = os.environ.get(_THREADS_ENV, "0")
    try:
        val = int(raw)
    except ValueError:
        raise InputParseError(f"{_THREADS_ENV}={raw!r} is not an integer") from None
    if val < 0:
        raise InputParseError(f"{_THREADS_ENV} must be >= 0")
    if val == 0:
        return os.cpu_count() or 1
    return val


def _pow_table(x: float, n: int) -> list[float]:
    # Iterated products, never libm pow: keeps summation inputs platform-stable.
    out = [1.0]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def _profile_task(
    colints: tuple[int, ...], n: int, k: int, prefix_bits: int, pattern: int
) -> list[list[int]]:
    """Count column subsets by (size, rank) for one inclusion pattern of the
    first `prefix_bits` columns, enumerating the remaining columns by DFS."""
    counts = [[0] * (k + 1) for _ in range(n + 1)]
    pivots: dict[int, int] = {}
    size0 = 0
    rank0 = 0
    for j in range(prefix_bits):
        if (pattern >> j) & 1:
            size0 += 1
            v = colints[j]
            while v:
                p = v.bit_length() - 1
                b = pivots.get(p)
                if b is None:
                    pivots[p] = v
                    rank0 += 1
                    break
                v ^= b

    def rec(i: int, size: int, rnk: int) -> None:
        if rnk == k:
            # Every remaining column is already in the span: close the
            # subtree with binomial counts instead of walking it.
            rem = n - i
            crow = _COMB[rem]
            row_base = size
            for t in range(rem + 1):
                counts[row_base + t][k] += crow[t]
            return
        if i == n:
            counts[size][rnk] += 1
            return
        rec(i + 1, size, rnk)
        v = colints[i]
        while v:
            p = v.bit_length() - 1
            b = pivots.get(p)
            if b is None:
                break
            v ^= b
        if v:
            p = v.bit_length() - 1
            pivots[p] = v
            rec(i + 1, size + 1, rnk + 1)
            del pivots[p]
        else:
            rec(i + 1, size + 1, rnk)

    rec(prefix_bits, size0, rank0)
    return counts


def _rank_profile_impl(m: BinMatrix, prefix_bits: int | None) -> tuple[tuple[int, ...], ...]:
    n, k = m.cols, m.rows
    colints = m.column_ints()
    if prefix_bits is None:
        workers = _worker_count() if n >= _PARALLEL_MIN_COLS else 1
        prefix_bits = min(6, n) if workers > 1 else 0
    else:
        workers = _worker_count()
    if prefix_bits == 0:
        counts = _profile_task(colints, n, k, 0, 0)
        return tuple(tuple(row) for row in counts)
    patterns = range(1 << prefix_bits)
    totals = [[0] * (k + 1) for _ in range(n + 1)]
    # Partition-independent by construction: per-task counts are integers,
    # summed in fixed pattern order.
    with ProcessPoolExecutor(max_workers=min(workers, len(patterns))) as pool:
        for part in pool.map(
            _profile_task,
            [colints] * len(patterns),
            [n] * len(patterns),
            [k] * len(patterns),
            [prefix_bits] * len(patterns),
            patterns,
            chunksize=max(1, len(patterns) // (4 * workers)),
        ):
            for s in range(n + 1):
                row = totals[s]
                prow = part[s]
                for r in range(k + 1):
                    row[r] += prow[r]
    return tuple(tuple(row) for row in totals)


@lru_cache(maxsize=128)
def _rank_profile(m: BinMatrix) -> tuple[tuple[int, ...], ...]:
    return _rank_profile_impl(m, None)


def _rank_from_profile(profile: tuple[tuple[int, ...], ...], m: BinMatrix) -> int:
    full_row = profile[m.cols]
    for r, c in enumerate(full_row):
        if c:
            return r
    return 0


def p_ml_erasure(m: BinMatrix, delta: float) -> PmlResult:
    """Exact ML decoding error probability of the code generated by `m` on an
    erasure channel with erasure probability `delta`.

    A received word decodes wrongly (ties included) exactly when the surviving
    columns have rank below the message length k.
    """
    _check_enum_cols(m)
    _check_prob("delta", delta)
    n, k = m.cols, m.rows
    profile = _rank_profile(m)
    keep_pows = _pow_table(1.0 - delta, n)
    lose_pows = _pow_table(delta, n)
    total = 0.0
    for s in range(n + 1):
        err = sum(profile[s][r] for r in range(k))
        if err:
            total += keep_pows[s] * lose_pows[n - s] * err
    return PmlResult(value=min(total, 1.0), method="exact-enumeration")


def mc_p_ml_erasure(m: BinMatrix, delta: float, samples: int, seed: int) -> PmlResult:
    """Monte Carlo estimate of p_ml_erasure with a 1.96-sigma normal-approximation
    half-width; identical (matrix, delta, samples, seed) reproduces exactly."""
    _check_prob("delta", delta)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    n, k = m.cols, m.rows
    colints = m.column_ints()
    rng = np.random.default_rng(seed)
    shifts = np.arange(n, dtype=np.uint64)
    errors = 0
    done = 0
    while done < samples:
        c = min(_MC_CHUNK, samples - done)
        u = rng.random((c, n))
        kept = (u >= delta).astype(np.uint64)
        masks = (kept << shifts[None, :]).sum(axis=1) if n else np.zeros(c, np.uint64)
        uniq, inverse = np.unique(masks, return_inverse=True)
        bad = np.empty(len(uniq), dtype=bool)
        for idx, mask in enumerate(uniq):
            mask = int(mask)
            pivots: dict[int, int] = {}
            r = 0
            while mask and r < k:
                j = (mask & -mask).bit_length() - 1
                mask &= mask - 1
                v = colints[j]
                while v:
                    p = v.bit_length() - 1
                    b = pivots.get(p)
                    if b is None:
                        pivots[p] = v
                        r += 1
                        break
                    v ^= b
            bad[idx] = r < k
        errors += int(bad[inverse].sum())
        done += c
    value = errors / samples
    ci = 1.96 * math.sqrt(value * (1.0 - value) / samples)
    return PmlResult(value=value, method="monte-carlo", ci_halfwidth=ci, samples=samples)


def exact_leakage_bec(m: BinMatrix, eps: float) -> LeakageReport:
    """Exact leakage in nats for an erasure side channel, with the decoding bound.

    Conditioned on the erased set J, the hash output entropy is rank of the
    J-columns times ln 2, so the leakage is

        ln 2 * (rank(M) - sum_J eps^|J| (1-eps)^(n-|J|) rank(M_J)).

    The report also carries bound = n * p_ml_erasure(m, 1-eps) and its slack.
    """
    _check_enum_cols(m)
    _check_prob("eps", eps)
    n = m.cols
    profile = _rank_profile(m)
    rnk = _rank_from_profile(profile, m)
    erase_pows = _pow_table(eps, n)
    keep_pows = _pow_table(1.0 - eps, n)
    expected = 0.0
    for s in range(n + 1):
        inner = sum(r * c for r, c in enumerate(profile[s]))
        if inner:
            expected += erase_pows[s] * keep_pows[n - s] * inner
    leakage = max(0.0, LN2 * (rnk - expected))
    bound = n * p_ml_erasure(m, 1.0 - eps).value
    return LeakageReport(
        leakage_nats=leakage,
        hash_entropy_nats=rnk * LN2,
        bound_nats=bound,
        slack_nats=bound - leakage,
    )


def _row_basis(m: BinMatrix) -> list[int]:
    pivots: dict[int, int] = {}
    basis = []
    for v in m.bits:
        while v:
            p = v.bit_length() - 1
            b = pivots.get(p)
            if b is None:
                pivots[p] = v
                basis.append(v)
                break
            v ^= b
    return basis


def _xor_fold_table(values: list[int]) -> np.ndarray:
    """Entry u is the XOR of values[j] over set bits j of u."""
    out = np.zeros(1, dtype=np.int64)
    for v in values:
        out = np.concatenate([out, out ^ np.int64(v)])
    return out


def _weight_table(count: int) -> np.ndarray:
    out = np.zeros(1, dtype=np.int64)
    for _ in range(count):
        out = np.concatenate([out, out + 1])
    return out


def exact_leakage_bsc(m: BinMatrix, eps: float) -> LeakageReport:
    """Exact leakage in nats for a bit-flip side channel.

    With X uniform, Z is uniform and the flip pattern V is independent of Z,
    so conditioned on any observation the hash output is a fixed shift of
    V @ M^T. Leakage is rank(M)*ln 2 minus the entropy of that syndrome
    distribution. (Cross-checked against brute_force_leakage in the tests.)
    """
    _check_enum_cols(m)
    _check_prob("eps", eps)
    n = m.cols
    # The syndrome entropy only depends on the row space; a basis keeps the
    # packed syndrome values within rank(M) <= n bits.
    basis = _row_basis(m)
    r = len(basis)
    reduced = BinMatrix(r, n, tuple(basis))
    colints = reduced.column_ints()
    lo = min(n, 13)
    syn_lo = _xor_fold_table([colints[j] for j in range(lo)])
    syn_hi = _xor_fold_table([colints[j] for j in range(lo, n)])
    wt_lo = _weight_table(lo)
    wt_hi = _weight_table(n - lo)
    flip_pows = np.array(_pow_table(eps, n))
    keep_pows = np.array(_pow_table(1.0 - eps, n))
    pattern_w = flip_pows[:n + 1] * keep_pows[:n + 1][::-1]
    q = np.zeros(1 << r)
    if n <= 22:
        syn = (syn_hi[:, None] ^ syn_lo[None, :]).ravel()
        wt = (wt_hi[:, None] + wt_lo[None, :]).ravel()
        q = np.bincount(syn, weights=pattern_w[wt], minlength=1 << r)
    else:
        for h0 in range(0, len(syn_hi), 512):
            h1 = min(h0 + 512, len(syn_hi))
            syn = (syn_hi[h0:h1, None] ^ syn_lo[None, :]).ravel()
            wt = (wt_hi[h0:h1, None] + wt_lo[None, :]).ravel()
            np.add.at(q, syn, pattern_w[wt])
    mass = q[q > 0.0]
    h_q = -float(np.sum(mass * np.log(mass)))
    leakage = min(max(0.0, r * LN2 - h_q), r * LN2)
    return LeakageReport(leakage_nats=leakage, hash_entropy_nats=r * LN2)


def brute_force_leakage(m: BinMatrix, src: JointSource) -> float:
    """Ground-truth leakage I(S; Z^n) by direct enumeration.

    Builds the joint distribution of (S, Z^n) by summing the product source
    over hash preimages, then returns H(S) + H(Z^n) - H(S, Z^n). No rank or
    symmetry shortcuts; cost is |Z|^n * 2^n.
    """
    n, k = m.cols, m.rows
    d = len(src.z_alphabet)
    limit = _BRUTE_MAX_COLS.get(d)
    if limit is None:
        raise ValueError(f"unsupported side alphabet size {d}")
    if n > limit:
        raise SizeLimitError(
            f"brute force enumerates {d}^n * 2^n patterns; n={n} exceeds {limit}"
        )
    if k > 62:
        raise SizeLimitError("packed syndromes support at most 62 rows")
    w_rows = [np.array(src.probs[0]), np.array(src.probs[1])]
    syn = _xor_fold_table(list(m.column_ints()))
    order = np.argsort(syn, kind="stable")
    sorted_syn = syn[order]
    # Group x-patterns by syndrome; accumulate each group's conditional mass
    # over all |Z|^n observation words.
    starts = [0] + list(np.flatnonzero(np.diff(sorted_syn)) + 1) + [len(order)]
    z_count = d**n
    p_z = np.zeros(z_count)
    p_s = []
    h_sz = 0.0
    for g in range(len(starts) - 1):
        acc = np.zeros(z_count)
        for x in order[starts[g]:starts[g + 1]]:
            x = int(x)
            vec = np.ones(1)
            for i in range(n):
                vec = (vec[:, None] * w_rows[(x >> i) & 1][None, :]).ravel()
            acc += vec
        mass = acc[acc > 0.0]
        h_sz -= float(np.sum(mass * np.log(mass)))
        p_z += acc
        p_s.append(float(acc.sum()))
    mass = p_z[p_z > 0.0]
    h_z = -float(np.sum(mass * np.log(mass)))
    h_s = -sum(p * math.log(p) for p in p_s if p > 0.0)
    return max(0.0, h_s + h_z - h_sz)


def verify_leakage_bound(m: BinMatrix, eps: float) -> LeakageReport:
    """Exact erasure leakage with the n * P_ML bound checked; raises
    InvariantViolationError if the slack drops below -1e-9."""
    report = exact_leakage_bec(m, eps)
    assert report.slack_nats is not None
    if report.slack_nats < _SLACK_FLOOR:
        raise InvariantViolationError(
            f"leakage {report.leakage_nats} exceeds bound {report.bound_nats} "
            f"(slack {report.slack_nats})"
        )
    return report


def best_matrix_search(
    k: int,
    n: int,
    eps: float,
    trials: int,
    seed: int,
    channel: str = "bec",
) -> tuple[BinMatrix, LeakageReport]:
    """Smallest exact leakage over `trials` seeded random k x n matrices.

    Candidates of full rank k are preferred (a rank-deficient hash trivially
    leaks little but wastes output bits); ties keep the first occurrence.
    Falls back to the overall best only if no trial has full rank.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if channel not in ("bec", "bsc"):
        raise ValueError(f"channel must be 'bec' or 'bsc', got {channel!r}")
    evaluate = exact_leakage_bec if channel == "bec" else exact_leakage_bsc
    rng = np.random.default_rng(seed)
    trial_seeds = rng.integers(0, 2**63, size=trials, dtype=np.int64)
    best_full: tuple[float, BinMatrix, LeakageReport] | None = None
    best_any: tuple[float, BinMatrix, LeakageReport] | None = None
    for t in range(trials):
        cand = random_matrix(k, n, int(trial_seeds[t]))
        report = evaluate(cand, eps)
        entry = (report.leakage_nats, cand, report)
        if best_any is None or entry[0] < best_any[0]:
            best_any = entry
        if rank(cand) == k and (best_full is None or entry[0] < best_full[0]):
            best_full = entry
    chosen = best_full if best_full is not None else best_any
    assert chosen is not None
    return chosen[1], chosen[2]
