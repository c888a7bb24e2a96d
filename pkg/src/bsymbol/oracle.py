"""Brute-force ground truth and lemma verifiers.

Nothing in this module trusts the closed forms: enumerators come from
materialized codewords and the raw window definition of w_b, Gaussian
periods from exact trace-count spectra.  The closed forms are only pulled
in by :func:`verify_all`, which compares the two routes.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .code import CodeParams, WeightEnumerator, check_b, codeword_matrix, window_weights
from .errors import BOutOfRangeError, BudgetExceededError, NonDivisorError
from .theory import (
    SemiprimitiveData,
    build_P,
    bsymbol_enumerator_closed,
    bsymbol_weights,
    gaussian_period_closed,
    hamming_enumerator_closed,
    mds_check,
    mu_profile,
    one_weight_enumerator,
    theory_params,
)

__all__ = [
    "DEFAULT_BUDGET",
    "CheckResult",
    "TraceSpectrum",
    "VerificationReport",
    "codeword_weights",
    "enumerator_brute",
    "gaussian_period_exact",
    "resolve_budget",
    "verify_all",
    "verify_lemma_weight_identity",
    "verify_mu_collapse",
    "verify_multiset_lemma",
]

DEFAULT_BUDGET = 1 << 20
#: full (unsampled) weight-identity check up to this field order
EXHAUSTIVE_IDENTITY_LIMIT = 1 << 14
IDENTITY_SAMPLE = 1000
# cells (rows * n) per brute-force chunk
_CHUNK_CELLS = 1 << 23


def resolve_budget(budget: int | None = None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("BSYMBOL_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _require_budget(params: CodeParams, budget: int | None) -> None:
    limit = resolve_budget(budget)
    if params.size > limit:
        raise BudgetExceededError(f"q^r = {params.size} exceeds the budget {limit}")


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: dict | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "witness": self.witness, "detail": self.detail}


@dataclass
class VerificationReport:
    params: dict
    checks: list[CheckResult] = field(default_factory=list)
    seed: int | None = None
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, witness: dict | None = None, detail: str = "") -> None:
        self.checks.append(CheckResult(name, bool(passed), witness if not passed else None, detail))

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    def to_json(self, include_timing: bool = False) -> dict:
        out = {"params": self.params, "seed": self.seed, "passed": self.passed,
               "checks": [c.as_dict() for c in self.checks]}
        if include_timing:
            out["elapsed_s"] = round(self.elapsed, 6)
        return out


# --------------------------------------------------------------------------
# brute force


def codeword_weights(params: CodeParams, bs: Iterable[int], *,
                     exponents: np.ndarray | None = None,
                     budget: int | None = None, workers: int = 1) -> dict[int, np.ndarray]:
    """w_b(c(gamma^k)) for each requested b and each exponent k.

    By default k runs over all of 0..q^r-2.  Rows are processed in chunks;
    with ``workers > 1`` the chunks are spread over a thread pool.
    """
    bs = sorted(set(bs))
    if bs and not 1 <= bs[0] <= bs[-1] < params.n:
        raise BOutOfRangeError(f"window sizes {bs} outside [1, {params.n - 1}]")
    if exponents is None:
        _require_budget(params, budget)
        exponents = np.arange(params.size - 1, dtype=np.int64)
    exponents = np.asarray(exponents, dtype=np.int64)
    rows_per_chunk = max(1, _CHUNK_CELLS // params.n)
    chunks = [exponents[lo:lo + rows_per_chunk]
              for lo in range(0, exponents.size, rows_per_chunk)]

    def run(ks: np.ndarray) -> dict[int, np.ndarray]:
        return window_weights(codeword_matrix(params, ks), bs)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(ks) for ks in chunks]
    if not parts:
        return {b: np.zeros(0, dtype=np.int64) for b in bs}
    return {b: np.concatenate([part[b] for part in parts]) for b in bs}


def _tally(weights: np.ndarray) -> WeightEnumerator:
    values, counts = np.unique(weights, return_counts=True)
    return WeightEnumerator(zip(values.tolist(), counts.tolist()))


def enumerator_brute(params: CodeParams, b: int, *, budget: int | None = None,
                     workers: int = 1) -> WeightEnumerator:
    """Weight enumerator from every codeword c(a), a in F_{q^r}."""
    check_b(params, b)
    weights = codeword_weights(params, [b], budget=budget, workers=workers)[b]
    return WeightEnumerator({0: 1}) + _tally(weights)


@dataclass(frozen=True)
class TraceSpectrum:
    """Counts of absolute-trace values over one cyclotomic class.

    With zeta a primitive p-th root of unity, the Gaussian period equals
    sum_j counts[j] * zeta^j; it is an integer exactly when the counts at
    j = 1..p-1 agree, and then equals counts[0] - counts[1].
    """

    u: int
    i: int
    counts: tuple[int, ...]

    @property
    def size(self) -> int:
        return sum(self.counts)

    @property
    def flat(self) -> bool:
        return len(set(self.counts[1:])) <= 1

    @property
    def value(self) -> int | None:
        return self.counts[0] - self.counts[1] if self.flat else None


def gaussian_period_exact(params: CodeParams, u: int, i: int, *,
                          budget: int | None = None) -> TraceSpectrum:
    """Walk gamma^i <gamma^u> and bin by trace to F_p."""
    F = params.field
    m = F.order - 1
    if u < 1 or m % u:
        raise NonDivisorError(f"u={u} does not divide {m}")
    _require_budget(params, budget)
    exps = np.arange(i % u, m, u, dtype=np.int64)
    counts = np.bincount(F.trace_p[exps], minlength=F.p)
    return TraceSpectrum(u, i % u, tuple(int(c) for c in counts))


# --------------------------------------------------------------------------
# lemma verifiers


def verify_lemma_weight_identity(params: CodeParams, b: int,
                                 sample: Sequence[int] | None = None, *,
                                 seed: int = 0,
                                 weights: dict[int, np.ndarray] | None = None) -> VerificationReport:
    """q^(b-1) * w_b(c(a)) == sum over theta in P(b) of w_H(c(theta*a)).

    ``sample`` holds discrete logs of the elements a to test; by default
    every nonzero a when q^r <= 2^14, otherwise a seeded random sample.
    ``weights`` may pass precomputed full arrays for b and 1.
    """
    report = VerificationReport(params.as_dict(), seed=seed)
    t0 = time.perf_counter()
    check_b(params, b)
    m = params.size - 1
    if sample is None:
        if params.size <= EXHAUSTIVE_IDENTITY_LIMIT:
            ks = np.arange(m, dtype=np.int64)
        else:
            rng = np.random.default_rng(seed)
            ks = rng.choice(m, size=min(IDENTITY_SAMPLE, m), replace=False).astype(np.int64)
    else:
        ks = np.asarray(sample, dtype=np.int64) % m
    P = np.asarray(build_P(params, b).exponents, dtype=np.int64)
    shifted = (ks[:, None] + P[None, :]) % m

    if weights is not None and b in weights and 1 in weights:
        lhs_w = weights[b][ks]
        w_h = weights[1]
        rhs = w_h[shifted].sum(axis=1)
    else:
        lhs_w = codeword_weights(params, [b], exponents=ks)[b]
        needed, inverse = np.unique(shifted, return_inverse=True)
        w_h = codeword_weights(params, [1], exponents=needed)[1]
        rhs = w_h[inverse.reshape(shifted.shape)].sum(axis=1)
    lhs = lhs_w * params.q ** (b - 1)
    bad = np.nonzero(lhs != rhs)[0]
    name = f"weight_identity[b={b}]"
    if bad.size:
        j = int(bad[0])
        report.add(name, False, {"a_log": int(ks[j]), "q^(b-1)*w_b": int(lhs[j]),
                                 "sum_w_H": int(rhs[j])},
                   f"{bad.size} of {ks.size} elements fail")
    else:
        report.add(name, True, detail=f"{ks.size} nonzero elements plus a = 0")
    report.elapsed = time.perf_counter() - t0
    return report


def verify_multiset_lemma(params: CodeParams, i: int | Iterable[int] | None = None) -> VerificationReport:
    """{x*y : x in gamma^i <gamma^N>, y in F_q^*} == ((q-1)u/N) copies of gamma^i <gamma^u>.

    F_q^* is taken as the literal subfield elements 1..q-1, located inside
    F_{q^r} through the log table, not as powers of gamma^Delta.
    """
    report = VerificationReport(params.as_dict())
    t0 = time.perf_counter()
    F = params.field
    m = params.size - 1
    N, n, u, q = params.N, params.n, params.u, params.q
    indices = range(N) if i is None else ([i] if isinstance(i, int) else list(i))
    mult = (q - 1) * u // N
    y_logs = np.asarray([F.log(y) for y in range(1, q)], dtype=np.int64)
    base = (N * np.arange(n, dtype=np.int64)[:, None] + y_logs[None, :]).ravel()
    failures = []
    for idx in indices:
        hits = np.bincount((base + idx) % m, minlength=m)
        expected = np.zeros(m, dtype=np.int64)
        expected[idx % u::u] = mult
        bad = np.nonzero(hits != expected)[0]
        if bad.size:
            k = int(bad[0])
            failures.append({"i": int(idx), "element_log": k,
                             "multiplicity": int(hits[k]), "expected": int(expected[k])})
    name = "multiset_lemma"
    if failures:
        report.add(name, False, failures[0], f"{len(failures)} class indices fail")
    else:
        report.add(name, True, detail=f"{len(indices)} class indices, multiplicity {mult}")
    report.elapsed = time.perf_counter() - t0
    return report


def verify_mu_collapse(params: CodeParams) -> VerificationReport:
    """mu_(i)(r) == Delta/u for every class index i."""
    report = VerificationReport(params.as_dict())
    t0 = time.perf_counter()
    mu = mu_profile(params, params.r)
    target = params.Delta // params.u
    bad = [i for i, v in enumerate(mu.mu) if v != target]
    if bad:
        report.add("mu_collapse", False, {"i": bad[0], "mu": mu.mu[bad[0]], "expected": target})
    else:
        report.add("mu_collapse", True, detail=f"mu_(i)({params.r}) = {target} for all {params.u} classes")
    report.elapsed = time.perf_counter() - t0
    return report


# --------------------------------------------------------------------------
# orchestration


def _first_diff(a: WeightEnumerator, b: WeightEnumerator) -> dict:
    w, (ca, cb) = next(iter(a.difference(b).items()))
    return {"weight": w, "closed_count": ca, "brute_count": cb}


def verify_all(params: CodeParams, b_range: Iterable[int] | None = None, *,
               sp: SemiprimitiveData | None = None,
               inject_delta_flip: bool = False,
               budget: int | None = None,
               seed: int = 0,
               lemmas: bool = True,
               workers: int = 1) -> VerificationReport:
    """Compare every closed form against brute force for each b in ``b_range``.

    ``inject_delta_flip`` feeds the closed forms a wrong delta; the report
    must then fail with a witness.
    """
    t0 = time.perf_counter()
    if sp is None:
        sp = theory_params(params)
    if inject_delta_flip:
        sp = sp.flipped()
    bs = sorted(set(b_range)) if b_range is not None else list(range(1, params.max_b + 1))
    for b in bs:
        check_b(params, b)
    report = VerificationReport(dict(params.as_dict(), **sp.as_dict()), seed=seed)
    _require_budget(params, budget)

    m = params.size - 1
    u = sp.u
    need = sorted(set(bs) | {1, params.r})
    weights = codeword_weights(params, need, budget=budget, workers=workers)
    classes = np.arange(m, dtype=np.int64) % u

    # Gaussian periods: exact spectra vs closed form
    bad_period = None
    for i in range(u):
        spec = gaussian_period_exact(params, u, i, budget=budget)
        closed = gaussian_period_closed(i, sp, params)
        if not spec.flat or spec.value != closed:
            bad_period = {"i": i, "spectrum": list(spec.counts), "exact": spec.value,
                          "closed": closed}
            break
    report.add("gaussian_periods", bad_period is None, bad_period, f"{u} classes")

    # Hamming enumerator (b = 1 brute force) vs the two-weight formula
    ham_closed = hamming_enumerator_closed(params, sp)
    ham_brute = WeightEnumerator({0: 1}) + _tally(weights[1])
    report.add("hamming_enumerator", ham_closed == ham_brute,
               _first_diff(ham_closed, ham_brute) if ham_closed != ham_brute else None,
               ham_closed.to_text())

    for b in bs:
        mu = mu_profile(params, b)
        closed_ws = bsymbol_weights(params, sp, b, mu)
        closed = bsymbol_enumerator_closed(params, sp, b, mu)
        brute = WeightEnumerator({0: 1}) + _tally(weights[b])
        report.add(f"enumerator[b={b}]", closed == brute,
                   _first_diff(closed, brute) if closed != brute else None, closed.to_text())

        # per-codeword: a in class i must have weight W_i^(b)
        predicted = np.asarray(closed_ws, dtype=np.int64)[classes]
        bad = np.nonzero(predicted != weights[b])[0]
        witness = None
        if bad.size:
            k = int(bad[0])
            witness = {"a_log": k, "class": int(classes[k]), "predicted": int(predicted[k]),
                       "actual": int(weights[b][k])}
        report.add(f"class_weights[b={b}]", witness is None, witness)

        if b == 1:
            report.add("b1_matches_hamming", closed == ham_closed,
                       _first_diff(closed, ham_closed) if closed != ham_closed else None)
        if u == 1:
            one = one_weight_enumerator(params, b)
            report.add(f"one_weight[b={b}]", one == closed,
                       _first_diff(one, closed) if one != closed else None)
        if lemmas:
            report.extend(verify_lemma_weight_identity(params, b, seed=seed, weights=weights))

    if lemmas:
        report.extend(verify_multiset_lemma(params))
        report.extend(verify_mu_collapse(params))

    # validated codes have r < n; w_r(c(a)) = n for all a != 0 and the Singleton equality at b = r
    w_r = weights[params.r]
    bad = np.nonzero(w_r != params.n)[0]
    report.add("w_r_equals_n", bad.size == 0,
               {"a_log": int(bad[0]), "w_r": int(w_r[bad[0]]), "n": params.n} if bad.size else None)
    d_r = int(w_r.min()) if w_r.size else params.n
    singleton = params.n - d_r + params.r
    closed_report = mds_check(params, sp, params.r)
    ok = singleton == params.r and closed_report.is_mds
    report.add("mds_singleton[b=r]", ok,
               {"brute_d_r": d_r, "singleton_exponent": singleton,
                "closed": closed_report.as_dict()} if not ok else None,
               f"q^{params.r} = q^(n - d_r + r) with d_r = {d_r}")

    report.elapsed = time.perf_counter() - t0
    return report

