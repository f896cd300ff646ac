"""Empirical probes of the best-possible constants in the bound chains.

Two tools:

* :func:`extremal_thm23` builds the exact two-point configuration (ys = xs,
  endpoints of the enclosure) on which the first link of the "2.3" chain is
  attained with equality, for any weight split and any dimension.

* :func:`search` runs randomized restarts of hypothesis-preserving hill
  climbing that maximizes functional / bound for a named target ratio. Every
  candidate is projected into the hypothesis ball before evaluation, so the
  certified inequality itself guards the search: a ratio above 1 + 1e-9
  raises :class:`SoundnessError` with the offending witness.

Ratios carry the target's constant in the denominator, so "sharp" reads as
ratio -> 1. Budgets are consumed in fixed-size restarts, each owning a
generator seeded by (seed, restart_index); the evaluation stream of a
smaller budget is a prefix of a larger one, hence results are deterministic
and non-decreasing in the budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import (
    BoundChain,
    bound_chebyshev,
    bound_chebyshev_gruss,
    bound_forward_difference,
    bound_scalar_weighted,
)
from .conditions import Enclosure
from .errors import ContractViolationError, SoundnessError
from .functionals import WeightedSequence, chebyshev_centered, vector_gruss_centered
from .instancefile import instance_document
from .space import ProbabilityVector, Space, norm

#: Candidate evaluations per restart.
RESTART_SIZE = 500

#: A ratio above 1 + this aborts the search (inequality violated).
RATIO_GUARD = 1e-9


@dataclass(frozen=True)
class TargetInfo:
    constant: float  # the constant baked into the denominator link
    equation: str  # report tag of the chain the ratio comes from
    link_index: int  # which link is the denominator
    free_weights: bool
    uses_ys: bool
    uses_alphas: bool
    constrain_ys: bool


TARGETS: dict[str, TargetInfo] = {
    "thm23_first": TargetInfo(0.5, "2.3", 0, True, True, False, False),
    "thm23_second": TargetInfo(0.5, "2.3", 1, True, True, False, False),
    "rem24_final": TargetInfo(0.25, "2.7", 2, True, True, False, True),
    "thm25_first": TargetInfo(0.5, "2.9", 0, True, False, True, False),
    "fd_equal_weights_max": TargetInfo(1.0 / 12.0, "1.7", 0, False, True, False, False),
}


@dataclass(frozen=True, eq=False)
class SharpnessResult:
    target: str
    target_constant: float
    achieved_ratio: float
    witness: dict  # instance document reproducing the best candidate
    trials: int
    seed: int


def extremal_thm23(p1: float = 0.5, space: Space | None = None, lo=None, hi=None) -> SharpnessResult:
    """Exact equality configuration for the first link of the "2.3" chain.

    Defaults to p = (1/2, 1/2) and endpoints 0, 1 on the real line. The
    ratio is 1 for every 0 < p1 < 1 and any distinct endpoints: both sides
    scale by 2 p1 p2 times the squared endpoint distance.
    """
    if not 0.0 < p1 < 1.0:
        raise ContractViolationError(f"p1 must lie strictly between 0 and 1, got {p1!r}")
    if space is None:
        space = Space(1)
    lo = space.zero() if lo is None else space.vector(lo)
    if hi is None:
        e = np.zeros(space.dim, dtype=space.dtype)
        e[0] = 1.0
        hi = space.vector(e)
    else:
        hi = space.vector(hi)
    encl = Enclosure(space, lo, hi)
    pts = np.array([lo, hi])
    ws = WeightedSequence(space, ProbabilityVector(np.array([p1, 1.0 - p1])), xs=pts, ys=pts)
    chain = bound_chebyshev(encl, ws)
    denom = chain.links[0].value
    ratio = chain.functional_value / denom if denom > 0.0 else 0.0
    witness = instance_document(
        space, weights=ws.p, xs=ws.xs, ys=ws.ys, enclosures={"x": encl, "y": encl}
    )
    return SharpnessResult("thm23_first", 0.5, ratio, witness, trials=1, seed=0)


class _Problem:
    """Target-specific candidate handling for the hill climber."""

    def __init__(self, target: str, n: int, dim: int):
        self.info = TARGETS[target]
        self.target = target
        self.n = n
        self.dim = dim
        self.space = Space(dim)
        e = np.zeros(dim)
        e[0] = 1.0
        self.encl_x = Enclosure(self.space, -e, e)
        self.encl_y = Enclosure(self.space, -e, e) if self.info.constrain_ys else None
        self.uniform = ProbabilityVector.uniform(n)
        blocks = ["xs"]
        if self.info.uses_ys:
            blocks.append("ys")
        if self.info.uses_alphas:
            blocks.append("alphas")
        self.vector_blocks = blocks

    # -- candidate construction -------------------------------------------

    def _ball_point(self, rng: np.random.Generator) -> np.ndarray:
        u = rng.standard_normal(self.dim)
        nrm = float(np.linalg.norm(u))
        if nrm == 0.0:
            u = np.zeros(self.dim)
            u[0] = 1.0
            nrm = 1.0
        return (u / nrm) * rng.random() ** (1.0 / self.dim)

    def _project(self, row: np.ndarray, encl: Enclosure) -> np.ndarray:
        c = encl.center
        cap = encl.radius * (1.0 - 1e-12)
        dist = float(np.linalg.norm(row - c))
        if dist > cap:
            row = c + (row - c) * (cap / dist)
        return row

    def _normalize(self, cand: dict) -> dict:
        # the forward-difference ratio is shift- and scale-invariant in both
        # sequences; pinning them to centered unit scale keeps max||delta||
        # bounded away from zero, so the ratio never degenerates into
        # rounding noise the climber could chase
        if self.target != "fd_equal_weights_max":
            return cand
        for key in ("xs", "ys"):
            rows = cand[key] - cand[key].mean(axis=0)
            top = float(np.linalg.norm(rows, axis=1).max())
            if top > 0.0:
                cand[key] = rows / top
        return cand

    def initial(self, rng: np.random.Generator) -> dict:
        cand: dict = {}
        if self.info.free_weights:
            w = rng.exponential(size=self.n)
            cand["p"] = w / w.sum()
        cand["xs"] = np.array([self._ball_point(rng) for _ in range(self.n)])
        if self.info.uses_ys:
            ys = rng.standard_normal((self.n, self.dim))
            if self.info.constrain_ys:
                ys = np.array([self._project(row, self.encl_y) for row in ys])
            cand["ys"] = ys
        if self.info.uses_alphas:
            cand["alphas"] = rng.standard_normal(self.n)
        return self._normalize(cand)

    def propose(self, rng: np.random.Generator, cand: dict, sigma: float) -> dict:
        new = {k: (v.copy() if isinstance(v, np.ndarray) else v) for k, v in cand.items()}
        if self.info.free_weights and rng.random() < 0.35:
            w = new["p"] * np.exp(sigma * rng.standard_normal(self.n))
            new["p"] = w / w.sum()
            return new
        block = self.vector_blocks[int(rng.integers(len(self.vector_blocks)))]
        i = int(rng.integers(self.n))
        if block == "alphas":
            new["alphas"][i] += sigma * rng.standard_normal()
            return new
        row = new[block][i] + sigma * rng.standard_normal(self.dim)
        if block == "xs":
            row = self._project(row, self.encl_x)
        elif self.info.constrain_ys:
            row = self._project(row, self.encl_y)
        new[block][i] = row
        return self._normalize(new)

    # -- evaluation ---------------------------------------------------------

    def _weights(self, cand: dict) -> ProbabilityVector:
        return ProbabilityVector(cand["p"]) if self.info.free_weights else self.uniform

    def chain(self, cand: dict) -> BoundChain:
        p = self._weights(cand)
        if self.target in ("thm23_first", "thm23_second"):
            ws = WeightedSequence(self.space, p, xs=cand["xs"], ys=cand["ys"])
            return bound_chebyshev(self.encl_x, ws)
        if self.target == "rem24_final":
            ws = WeightedSequence(self.space, p, xs=cand["xs"], ys=cand["ys"])
            return bound_chebyshev_gruss(self.encl_x, self.encl_y, ws)
        if self.target == "thm25_first":
            ws = WeightedSequence(self.space, p, xs=cand["xs"], alphas=cand["alphas"])
            return bound_scalar_weighted(self.encl_x, ws)
        ws = WeightedSequence(self.space, p, xs=cand["xs"], ys=cand["ys"])
        return bound_forward_difference(ws, holder_p=2.0)

    def _stable_functional(self, cand: dict) -> float:
        # re-centered evaluation at the enclosure center: same value as the
        # chain functional, but the Cauchy-Schwarz steps of the bound then
        # hold for the computed arrays themselves (numerator and denominator
        # share the identical centered rows), so rounding alone can never
        # push the ratio past 1
        p = self._weights(cand)
        c = self.encl_x.center
        if self.info.uses_alphas:
            ws = WeightedSequence(self.space, p, xs=cand["xs"], alphas=cand["alphas"])
            return norm(self.space, vector_gruss_centered(ws, center=c))
        ws = WeightedSequence(self.space, p, xs=cand["xs"], ys=cand["ys"])
        return abs(chebyshev_centered(ws, center=c))

    def _stable_denominator(self, cand: dict, chain: BoundChain) -> float:
        if self.target != "thm23_second":
            return chain.links[self.info.link_index].value
        # displacement-form standard deviation instead of the second-moment
        # difference, for the same cancellation reason as the numerator
        p = self._weights(cand)
        ys = np.asarray(cand["ys"])
        dev = np.linalg.norm(ys - p.weights @ ys, axis=1)
        return 0.5 * self.encl_x.diameter * float(np.sqrt(p.weights @ (dev * dev)))

    def ratio(self, cand: dict) -> float:
        chain = self.chain(cand)
        denom = self._stable_denominator(cand, chain)
        value = self._stable_functional(cand) / denom if denom > 0.0 else 0.0
        if value > 1.0 + RATIO_GUARD:
            raise SoundnessError(
                f"target {self.target}: ratio {value!r} exceeds 1 + {RATIO_GUARD:g}; "
                "either the inequality or the implementation is broken",
                witness=self.witness(cand),
            )
        return value

    def witness(self, cand: dict) -> dict:
        p = self._weights(cand)
        enclosures = {"x": self.encl_x}
        if self.encl_y is not None:
            enclosures["y"] = self.encl_y
        return instance_document(
            self.space,
            weights=p,
            xs=cand["xs"],
            ys=cand.get("ys"),
            alphas=cand.get("alphas"),
            enclosures=enclosures,
            holder_p=2.0 if self.target == "fd_equal_weights_max" else None,
        )


def _climb(problem: _Problem, budget_slice: int, seed: int, restart_index: int) -> tuple[float, dict, int]:
    rng = np.random.default_rng([seed, restart_index])
    best = problem.initial(rng)
    best_ratio = problem.ratio(best)
    evals = 1
    sigma = 0.4
    rejects = 0
    while evals < budget_slice:
        prop = problem.propose(rng, best, sigma)
        value = problem.ratio(prop)
        evals += 1
        if value > best_ratio:
            best_ratio, best = value, prop
            rejects = 0
        else:
            rejects += 1
            if rejects >= 20:
                sigma = max(sigma * 0.5, 1e-9)
                rejects = 0
    return best_ratio, best, evals


def search(target: str, n: int, dim: int, budget: int, seed: int) -> SharpnessResult:
    """Maximize functional / bound for a named target ratio.

    Restarts of hypothesis-preserving hill climbing (multiplicative weight
    moves, Gaussian row moves with radial projection into the hypothesis
    ball, step halved after 20 consecutive rejections). Deterministic for
    fixed (target, n, dim, budget, seed).
    """
    if target not in TARGETS:
        raise ContractViolationError(f"unknown target {target!r}; valid: {', '.join(sorted(TARGETS))}")
    if n < 2:
        raise ContractViolationError("n must be >= 2")
    if dim < 1:
        raise ContractViolationError("dim must be >= 1")
    if budget < 1:
        raise ContractViolationError("budget must be >= 1")
    if seed < 0:
        raise ContractViolationError("seed must be >= 0")
    problem = _Problem(target, n, dim)
    best_ratio = -np.inf
    best_cand: dict | None = None
    done = 0
    restart = 0
    while done < budget:
        slice_budget = min(RESTART_SIZE, budget - done)
        ratio, cand, used = _climb(problem, slice_budget, seed, restart)
        if ratio > best_ratio:
            best_ratio, best_cand = ratio, cand
        done += used
        restart += 1
    return SharpnessResult(
        target=target,
        target_constant=TARGETS[target].constant,
        achieved_ratio=float(best_ratio),
        witness=problem.witness(best_cand),
        trials=done,
        seed=seed,
    )
