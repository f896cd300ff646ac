"""Reverse Jensen inequality for differentiable convex functions.

For a convex ``F`` with gradient ``grad F`` on a real space, nonnegative
weights ``q`` (positive total, normalized internally) and points ``z_i``:

* ``jensen_gap``    sum p_i F(z_i) - F(sum p_i z_i)         (>= 0 for convex F)
* ``pairing_gap``   sum p_i <grad F(z_i), z_i> - <mean grad, mean z>

The gap never exceeds the pairing gap, and both are dominated by the chain
built from an enclosure (m, M) of the gradient set:

    gap <= diam(grad)/2 * mad(z) <= diam(grad)/2 * std(z)
        <= diam(grad)/4 * diam(z)          (when a z-enclosure also holds)

Gradient enclosures are fitted from the finite set {grad F(z_i)} when not
supplied. Everything here is real: complex spaces are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import BoundChain, BoundLink
from .conditions import Enclosure, check_ball, fit_enclosure
from .errors import ContractViolationError, DegenerateInputError, HypothesisError
from .functionals import WeightedSequence, chebyshev, mad, variance
from .space import ProbabilityVector, Space, inner, weighted_mean


@dataclass(frozen=True, eq=False)
class ConvexOracle:
    """Pointwise evaluation and gradient of a convex function on a space.

    Both callables must be pure; ``grad`` returns the gradient representer
    with respect to the space's inner product.
    """

    name: str
    eval: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class JensenReport:
    gap: float
    pairing_gap: float
    chain: BoundChain
    improvement_ratio: float | None
    grad_encl: Enclosure
    z_encl: Enclosure | None


def _metric(space: Space) -> np.ndarray:
    return space.metric if space.metric is not None else np.ones(space.dim)


def squared_norm_oracle(space: Space) -> ConvexOracle:
    """F(z) = ||z||^2 with gradient 2z."""

    def value(z: np.ndarray) -> float:
        return float(np.real(inner(space, z, z)))

    def gradient(z: np.ndarray) -> np.ndarray:
        return 2.0 * np.asarray(z, dtype=np.float64)

    return ConvexOracle("squared_norm", value, gradient)


def diagonal_quadratic_oracle(space: Space, diag=None) -> ConvexOracle:
    """F(z) = <Qz, z> for a positive diagonal Q (default q_k = 1 + k/dim)."""
    if diag is None:
        diag = 1.0 + np.arange(space.dim, dtype=np.float64) / space.dim
    diag = np.asarray(diag, dtype=np.float64)
    if diag.shape != (space.dim,) or np.any(diag <= 0.0):
        raise ContractViolationError("diag must be a strictly positive vector of length dim")
    m = _metric(space)

    def value(z: np.ndarray) -> float:
        z = np.asarray(z, dtype=np.float64)
        return float((m * diag * z * z).sum())

    def gradient(z: np.ndarray) -> np.ndarray:
        return 2.0 * diag * np.asarray(z, dtype=np.float64)

    return ConvexOracle("diag_quadratic", value, gradient)


def log_sum_exp_oracle(space: Space) -> ConvexOracle:
    """F(z) = log sum_k exp(z_k); the representer divides softmax by the metric."""
    m = _metric(space)

    def value(z: np.ndarray) -> float:
        z = np.asarray(z, dtype=np.float64)
        zmax = float(z.max())
        return zmax + math.log(float(np.exp(z - zmax).sum()))

    def gradient(z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=np.float64)
        e = np.exp(z - z.max())
        return (e / e.sum()) / m

    return ConvexOracle("log_sum_exp", value, gradient)


def norm_fourth_oracle(space: Space) -> ConvexOracle:
    """F(z) = ||z||^4 with gradient 4 ||z||^2 z."""

    def value(z: np.ndarray) -> float:
        return float(np.real(inner(space, z, z))) ** 2

    def gradient(z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=np.float64)
        return 4.0 * float(np.real(inner(space, z, z))) * z

    return ConvexOracle("norm_fourth", value, gradient)


def faulty_squared_norm_oracle(space: Space) -> ConvexOracle:
    """Deliberately mis-scaled gradient (2.2z); ships for fault-injection tests."""
    base = squared_norm_oracle(space)

    def gradient(z: np.ndarray) -> np.ndarray:
        return 1.1 * base.grad(z)

    return ConvexOracle("faulty_squared_norm", base.eval, gradient)


ORACLE_FACTORIES: dict[str, Callable[[Space], ConvexOracle]] = {
    "squared_norm": squared_norm_oracle,
    "diag_quadratic": diagonal_quadratic_oracle,
    "log_sum_exp": log_sum_exp_oracle,
    "norm_fourth": norm_fourth_oracle,
    "faulty_squared_norm": faulty_squared_norm_oracle,
}


def get_oracle(name: str, space: Space) -> ConvexOracle:
    _require_real(space)
    try:
        factory = ORACLE_FACTORIES[name]
    except KeyError:
        raise ContractViolationError(
            f"unknown oracle {name!r}; available: {', '.join(sorted(ORACLE_FACTORIES))}"
        ) from None
    return factory(space)


def _require_real(space: Space) -> None:
    if space.is_complex:
        raise ContractViolationError("convex-function machinery is defined on real spaces only")


def gradient_check(space: Space, oracle: ConvexOracle, samples, h: float = 1e-5) -> float:
    """Max relative error of <grad, d> against central differences of eval.

    Directions are drawn from a fixed-seed generator, so the check is
    deterministic. Relative error uses max(1, |fd|, |<grad,d>|) as scale.
    """
    _require_real(space)
    if not 0.0 < h <= 1e-2:
        raise ContractViolationError(f"step h must lie in (0, 1e-2], got {h!r}")
    samples = space.matrix(samples)
    rng = np.random.default_rng(1754)
    worst = 0.0
    for z in samples:
        g = oracle.grad(z)
        for _ in range(4):
            d = rng.standard_normal(space.dim)
            d /= float(np.sqrt((d * d).sum()))
            fd = (oracle.eval(z + h * d) - oracle.eval(z - h * d)) / (2.0 * h)
            ip = float(np.real(inner(space, g, d)))
            worst = max(worst, abs(fd - ip) / max(1.0, abs(fd), abs(ip)))
    return worst


def convexity_probe(space: Space, oracle: ConvexOracle, samples) -> float:
    """Min slack of F(u) - F(v) - <grad(v), u - v> over all sample pairs (>= 0 if convex)."""
    _require_real(space)
    samples = space.matrix(samples)
    worst = math.inf
    for v in samples:
        gv = oracle.grad(v)
        fv = oracle.eval(v)
        for u in samples:
            slack = oracle.eval(u) - fv - float(np.real(inner(space, gv, u - v)))
            worst = min(worst, slack)
    return worst


def _normalized(space: Space, q, zs) -> tuple[ProbabilityVector, np.ndarray]:
    _require_real(space)
    zs = space.matrix(zs)
    p = ProbabilityVector.from_nonnegative(q)
    if len(p) != zs.shape[0]:
        raise ContractViolationError(f"{zs.shape[0]} points but {len(p)} weights")
    return p, zs


def jensen_gap(space: Space, oracle: ConvexOracle, q, zs) -> float:
    """sum p_i F(z_i) - F(sum p_i z_i) with p = q / sum(q)."""
    p, zs = _normalized(space, q, zs)
    values = np.array([oracle.eval(z) for z in zs])
    return float(p.weights @ values - oracle.eval(weighted_mean(p, zs)))


def pairing_gap(space: Space, oracle: ConvexOracle, q, zs) -> float:
    """sum p_i <grad F(z_i), z_i> - <mean grad, mean z> (the gradient/point pairing)."""
    p, zs = _normalized(space, q, zs)
    grads = np.array([oracle.grad(z) for z in zs], dtype=np.float64)
    return float(np.real(chebyshev(WeightedSequence(space, p, xs=grads, ys=zs))))


def _fit_or_degenerate(space: Space, pts: np.ndarray) -> Enclosure:
    try:
        return fit_enclosure(space, pts)
    except DegenerateInputError:
        return Enclosure(space, pts[0], pts[0], allow_degenerate=True)


def reverse_jensen(
    space: Space,
    oracle: ConvexOracle,
    q,
    zs,
    grad_encl: Enclosure | None = None,
    z_encl: Enclosure | None = None,
) -> JensenReport:
    """Evaluate the reverse-Jensen chain for one weighted instance.

    Enclosures not supplied are fitted: the gradient enclosure from
    {grad F(z_i)} (mandatory for the chain; a one-point gradient set yields
    the degenerate all-zero chain), the z-enclosure from {z_i} (enables the
    final quarter link and the improvement ratio). Supplied enclosures are
    verified and a failure raises :class:`HypothesisError`.
    """
    p, zs = _normalized(space, q, zs)
    gap = jensen_gap(space, oracle, q, zs)
    pgap = pairing_gap(space, oracle, q, zs)

    grads = np.array([oracle.grad(z) for z in zs], dtype=np.float64)
    if grad_encl is None:
        grad_encl = _fit_or_degenerate(space, grads)
    report_g = check_ball(grad_encl, grads)
    if not report_g.holds:
        i = int(report_g.failing_indices()[0])
        raise HypothesisError(f"gradient enclosure fails the ball condition at index {i}", report=report_g)
    if z_encl is None:
        z_encl = _fit_or_degenerate(space, zs)
    report_z = check_ball(z_encl, zs)
    if not report_z.holds:
        i = int(report_z.failing_indices()[0])
        raise HypothesisError(f"z-enclosure fails the ball condition at index {i}", report=report_z)

    dg = grad_encl.diameter
    quarter = 0.25 * dg * z_encl.diameter
    links = (
        BoundLink("0.5*diam(grad)*mad(z)", 0.5 * dg * mad(space, p, zs), "3.4"),
        BoundLink("0.5*diam(grad)*std(z)", 0.5 * dg * math.sqrt(variance(space, p, zs)), "3.4"),
        BoundLink("0.25*diam(grad)*diam(z)", quarter, "3.9"),
    )
    improvement = links[0].value / quarter if quarter > 0.0 else None

    chain = BoundChain(
        equation="3.9",
        functional_label="jensen_gap",
        functional_value=max(gap, 0.0),
        links=links,
        hypothesis_reports=(report_g, report_z),
    )
    return JensenReport(
        gap=gap,
        pairing_gap=pgap,
        chain=chain,
        improvement_ratio=improvement,
        grad_encl=grad_encl,
        z_encl=z_encl,
    )
