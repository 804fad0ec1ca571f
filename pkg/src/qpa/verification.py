"""Exact checks of the universal_2 privacy-amplification bounds.

Every ensemble expectation is a full enumeration over the hash family
(exact up to floating point), never a sampled estimate. Checks cover the
two hashing bounds, the finite-size key-quality bound, the pinching
inequalities, and the scalar-to-matrix inequality lemmas used by the
hashing-bound proofs.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from ._parallel import map_ordered
from .cqstate import AlphabetMismatchError, CQState, apply_function, eve_marginal, preset, random_cq, tensor_power
from .hashing import HashFamily, enumerate_members, make_family
from .hermitian import HermitianMatrix, identity, matrix_log, matrix_power, pinch, spectral_utilities
from .optimize import golden_max
from .quantities import StateDecomposition

SLACK_TOL = 1e-9

DEFAULT_S_GRID = tuple(round(0.1 * i, 10) for i in range(1, 11))


@dataclasses.dataclass(frozen=True)
class BoundReport:
    """One verified inequality: both sides over the order grid plus the verdict."""

    check: str
    lhs: float
    rhs_by_s: dict[float, float]
    best_s: float
    slack: float
    passed: bool
    metadata: dict

    def to_json_dict(self) -> dict:
        return {
            "check": self.check,
            "state": self.metadata.get("state", ""),
            "family": self.metadata.get("family", ""),
            "lhs": self.lhs,
            "rhs_by_s": {f"{s:g}": rhs for s, rhs in sorted(self.rhs_by_s.items())},
            "best_s": self.best_s,
            "slack": self.slack,
            "passed": self.passed,
            "metadata": {k: v for k, v in sorted(self.metadata.items())},
        }


def _require_matching_domain(state: CQState, family: HashFamily) -> None:
    if family.domain_size != state.alphabet_size:
        raise AlphabetMismatchError(
            f"family domain {family.domain_size} != alphabet {state.alphabet_size}"
        )


def _check_s_grid(s_grid) -> tuple[float, ...]:
    grid = tuple(float(s) for s in s_grid)
    if not grid or any(not (0.0 < s <= 1.0) for s in grid):
        raise ValueError(f"the hashing bounds hold for s in (0, 1]; got grid {s_grid}")
    return grid


def _member_values(state: CQState, family: HashFamily, extractor):
    members = list(enumerate_members(family))
    return map_ordered(lambda mem: extractor(apply_function(state, mem.function)), members)


def ensemble_avg_I_prime(state: CQState, family: HashFamily) -> float:
    """Exact family average of the uniformity-adjusted leaked information I'."""
    _require_matching_domain(state, family)
    vals = _member_values(state, family, lambda st: StateDecomposition(st).mutual_info_variants()["I_prime"])
    return math.fsum(vals) / family.member_count


def avg_leak_bound_rhs(state: CQState, big_m: int, s: float) -> float:
    """Hashing bound on the averaged I': ``v^s M^s exp(-s H_{1+s}) / s``."""
    if not (0.0 < s <= 1.0):
        raise ValueError(f"the bound needs s in (0, 1], got {s}")
    v = spectral_utilities(eve_marginal(state)).distinct_count_v
    h = StateDecomposition(state).renyi_cond(s)
    return (v**s) * math.exp(s * (math.log(big_m) - h)) / s


def verify_avg_leak_bound(state: CQState, family: HashFamily, s_grid=DEFAULT_S_GRID, *, name: str = "") -> BoundReport:
    """Check ``E_X I' <= min_s v^s M^s exp(-s H_{1+s}) / s`` by enumeration."""
    _require_matching_domain(state, family)
    s_grid = _check_s_grid(s_grid)
    dec = StateDecomposition(state)
    v = dec.v_count
    big_m = family.range_size

    def rhs(s: float) -> float:
        return (v**s) * math.exp(s * (math.log(big_m) - dec.renyi_cond(s))) / s

    rhs_by_s = {float(s): rhs(float(s)) for s in s_grid}
    coarse_best = min(rhs_by_s, key=rhs_by_s.get)
    lo = max(min(s_grid) / 10.0, coarse_best - 0.1)
    hi = min(1.0, coarse_best + 0.1)
    best_s, neg_min = golden_max(lambda s: -rhs(s), lo, hi, tol=1e-4)
    rhs_min = -neg_min
    rhs_by_s[round(best_s, 12)] = rhs_min

    member_stats = _member_values(
        state, family, lambda st: StateDecomposition(st).mutual_info_variants()
    )
    i_prime_vals = [ms["I_prime"] for ms in member_stats]
    i_vals = [ms["I"] for ms in member_stats]
    lhs = math.fsum(i_prime_vals) / family.member_count
    avg_i = math.fsum(i_vals) / family.member_count
    slack = rhs_min - lhs
    chain_ok = avg_i <= lhs + SLACK_TOL
    witness = min(range(len(i_prime_vals)), key=lambda idx: i_prime_vals[idx])
    return BoundReport(
        check="hashing-bound-I-prime",
        lhs=lhs,
        rhs_by_s=rhs_by_s,
        best_s=best_s,
        slack=slack,
        passed=bool(slack >= -SLACK_TOL and chain_ok),
        metadata={
            "state": name,
            "family": family.describe(),
            "v": v,
            "M": big_m,
            "avg_I": avg_i,
            "chain_avg_I_le_avg_I_prime": chain_ok,
            "best_member_index": witness,
            "best_member_I_prime": i_prime_vals[witness],
        },
    )


def ensemble_avg_exp_sI_bar_prime(state: CQState, family: HashFamily, s: float) -> float:
    """Exact family average of ``exp(s * Ibar')``."""
    if not (0.0 < s <= 1.0):
        raise ValueError(f"the bound needs s in (0, 1], got {s}")
    _require_matching_domain(state, family)
    vals = _member_values(
        state, family, lambda st: StateDecomposition(st).mutual_info_variants()["I_bar_prime"]
    )
    return math.fsum(math.exp(s * val) for val in vals) / family.member_count


def verify_exp_leak_bound(state: CQState, family: HashFamily, s_grid=DEFAULT_S_GRID, *, name: str = "") -> BoundReport:
    """Check ``E_X exp(s Ibar') <= 1 + M^s exp(-s Hbar*_{1+s})`` on the grid.

    Also checks the averaged consequence
    ``s E_X Ibar' <= exp(s (log M - Hbar*_{1+s}))``.
    """
    _require_matching_domain(state, family)
    s_grid = _check_s_grid(s_grid)
    dec = StateDecomposition(state)
    big_m = family.range_size
    ibar_vals = _member_values(
        state, family, lambda st: StateDecomposition(st).mutual_info_variants()["I_bar_prime"]
    )
    avg_ibar = math.fsum(ibar_vals) / family.member_count

    rhs_by_s = {}
    lhs_by_s = {}
    slack = math.inf
    best_s = float(s_grid[0])
    derived_ok = True
    for s in s_grid:
        s = float(s)
        hbar = dec.renyi_cond_bar_star(s)
        rhs = 1.0 + math.exp(s * (math.log(big_m) - hbar))
        lhs = math.fsum(math.exp(s * val) for val in ibar_vals) / family.member_count
        rhs_by_s[s] = rhs
        lhs_by_s[s] = lhs
        if rhs - lhs < slack:
            slack = rhs - lhs
            best_s = s
        if s * avg_ibar > math.exp(s * (math.log(big_m) - hbar)) + SLACK_TOL:
            derived_ok = False
    return BoundReport(
        check="hashing-bound-exp-Ibar-prime",
        lhs=lhs_by_s[best_s],
        rhs_by_s=rhs_by_s,
        best_s=best_s,
        slack=slack,
        passed=bool(slack >= -SLACK_TOL and derived_ok),
        metadata={
            "state": name,
            "family": family.describe(),
            "M": big_m,
            "lhs_by_s": {f"{s:g}": lhs for s, lhs in sorted(lhs_by_s.items())},
            "avg_I_bar_prime": avg_ibar,
            "derived_avg_bound_ok": derived_ok,
        },
    )


def finite_size_bound(state: CQState, big_m: int, s: float) -> float:
    """Key-quality bound ``log v + (log 2)/s + max(0, log M - H_{1+s})``."""
    if not (0.0 < s <= 1.0):
        raise ValueError(f"the bound needs s in (0, 1], got {s}")
    v = spectral_utilities(eve_marginal(state)).distinct_count_v
    h = StateDecomposition(state).renyi_cond(s)
    return math.log(v) + math.log(2.0) / s + max(0.0, math.log(big_m) - h)


def finite_size_min(state: CQState, big_m: int, s_grid=DEFAULT_S_GRID) -> tuple[float, float]:
    """Minimum of the finite-size bound over the grid; returns ``(value, s)``."""
    best = math.inf
    best_s = float(s_grid[0])
    for s in s_grid:
        val = finite_size_bound(state, big_m, float(s))
        if val < best:
            best, best_s = val, float(s)
    return best, best_s


@dataclasses.dataclass(frozen=True)
class LemmaReport:
    """Minimum eigenvalues of the two lemma difference matrices over the grid."""

    min_eig_power: float  # (I + X^s) - (I + X)^s
    min_eig_log: float  # X^s / s - log(I + X)
    passed: bool


def matrix_lemma_checks(seed: int, dim: int, s_grid=DEFAULT_S_GRID) -> LemmaReport:
    """Check ``(I+X)^s <= I + X^s`` and ``log(I+X) <= X^s / s`` on a seeded PSD X."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    x = HermitianMatrix(g @ g.conj().T, atol=None)
    eye = identity(dim)
    one_plus_x = HermitianMatrix(eye.mat + x.mat, atol=None)
    log_one_plus_x = matrix_log(one_plus_x)
    min_pow = math.inf
    min_log = math.inf
    for s in s_grid:
        s = float(s)
        x_s = matrix_power(x, s)
        diff_pow = HermitianMatrix(eye.mat + x_s.mat - matrix_power(one_plus_x, s).mat, atol=None)
        diff_log = HermitianMatrix(x_s.mat / s - log_one_plus_x.mat, atol=None)
        min_pow = min(min_pow, diff_pow.min_eigenvalue())
        min_log = min(min_log, diff_log.min_eigenvalue())
    return LemmaReport(min_pow, min_log, bool(min_pow >= -SLACK_TOL and min_log >= -SLACK_TOL))


@dataclasses.dataclass(frozen=True)
class PinchReport:
    """Pinching inequality and log-equality data for one state."""

    i_original: float
    i_pinched: float
    i_bar_pinched: float
    log_v: float
    passed: bool


def pinching_bound_check(state: CQState, *, name: str = "") -> PinchReport:
    """Check ``I <= I(pinched) + log v`` and ``I = Ibar`` on the pinched state."""
    eve = eve_marginal(state)
    v = spectral_utilities(eve).distinct_count_v
    pinched = CQState(state.probs, [pinch(eve, rho) for rho in state.eve_states])
    i_orig = StateDecomposition(state).mutual_info_variants()["I"]
    pinched_info = StateDecomposition(pinched).mutual_info_variants()
    log_v = math.log(v)
    ok = (
        i_orig <= pinched_info["I"] + log_v + SLACK_TOL
        and abs(pinched_info["I"] - pinched_info["I_bar"]) <= SLACK_TOL
    )
    return PinchReport(i_orig, pinched_info["I"], pinched_info["I_bar"], log_v, bool(ok))


# -- standard corpus ----------------------------------------------------------


def default_corpus() -> list[tuple[str, CQState]]:
    """Presets, their in-cap 2-fold powers, and 20 seeded random states."""
    names = ["copy", "product", "tilted-qubit", "bb84(0.39269908169872414)", "depolarized(0.3)"]
    out = [(n, preset(n)) for n in names]
    for n, st in list(out):
        if st.alphabet_size == 2 and st.eve_dim == 2:
            out.append((f"{n}^2", tensor_power(st, 2)))
    for i in range(20):
        d_e = 2 if i % 2 == 0 else 3
        out.append((f"random(seed={i},|A|=4,d_E={d_e})", random_cq(i, 4, d_e)))
    return out


def families_for(alphabet_size: int, big_ms=(2, 4), q: int = 2) -> list[HashFamily]:
    """Both matrix family kinds over F_q matching the alphabet, one per range size."""
    k = 0
    n = alphabet_size
    while n > 1 and n % q == 0:
        n //= q
        k += 1
    if n != 1 or k == 0:
        raise AlphabetMismatchError(f"alphabet size {alphabet_size} is not a power of {q}")
    out = []
    for big_m in big_ms:
        m = round(math.log(big_m, q))
        if q**m != big_m or m > k:
            continue
        out.append(make_family("toeplitz", q, k, m))
        out.append(make_family("modified_toeplitz", q, k, m))
    return out


def run_full_suite(s_grid=DEFAULT_S_GRID) -> list[BoundReport]:
    """Both hashing bounds over the whole corpus, plus lemma and pinching checks."""
    reports: list[BoundReport] = []
    for name, state in default_corpus():
        for family in families_for(state.alphabet_size):
            reports.append(verify_avg_leak_bound(state, family, s_grid, name=name))
            reports.append(verify_exp_leak_bound(state, family, s_grid, name=name))

    lemma_mins = ([], [])
    idx = 0
    for dim in (2, 3, 4, 5, 6):
        for _ in range(40):
            rep = matrix_lemma_checks(seed=idx, dim=dim, s_grid=s_grid)
            lemma_mins[0].append(rep.min_eig_power)
            lemma_mins[1].append(rep.min_eig_log)
            idx += 1
    lemma_pass = min(lemma_mins[0]) >= -SLACK_TOL and min(lemma_mins[1]) >= -SLACK_TOL
    reports.append(
        BoundReport(
            check="matrix-lemmas",
            lhs=min(min(lemma_mins[0]), min(lemma_mins[1])),
            rhs_by_s={},
            best_s=0.0,
            slack=min(min(lemma_mins[0]), min(lemma_mins[1])),
            passed=bool(lemma_pass),
            metadata={"state": "200 seeded PSD matrices, dims 2-6", "family": ""},
        )
    )

    pinch_slack = math.inf
    pinch_ok = True
    for name, state in default_corpus():
        rep = pinching_bound_check(state, name=name)
        pinch_slack = min(pinch_slack, rep.i_pinched + rep.log_v - rep.i_original)
        pinch_ok = pinch_ok and rep.passed
    reports.append(
        BoundReport(
            check="pinching-bound",
            lhs=0.0,
            rhs_by_s={},
            best_s=0.0,
            slack=pinch_slack,
            passed=bool(pinch_ok),
            metadata={"state": "corpus", "family": ""},
        )
    )
    return reports
