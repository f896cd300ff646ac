"""Upper-bound chains for the weighted-sequence functionals.

Each builder evaluates one inequality family and returns a
:class:`BoundChain`: the functional value together with its ordered bound
links (or, for the forward-difference families, three parallel alternative
bounds, since no ordering among the branches holds in general).

Chains are tagged with the equation identifiers used throughout reports:
"2.3", "2.7", "2.8", "2.9", "2.11", "R2.7" for the enclosure-hypothesis
families, and "1.6"/"1.8" for the forward-difference families whose final
links carry the classical tags "1.2", "1.4", "1.5".

Hypotheses (ball condition on sequences, disc condition on scalars) are
verified by default; builders raise :class:`HypothesisError` on failure.
With ``check=False`` the chain is still evaluated and the reports recorded,
but nothing is raised; the chain is then marked as carrying an unverified
hypothesis, because the inequalities are false in general without it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conditions import ConditionReport, Enclosure, check_ball, check_scalar_disc
from .errors import (
    ContractViolationError,
    DegenerateInputError,
    DimensionMismatchError,
    HypothesisError,
)
from .functionals import (
    WeightedSequence,
    alpha_abs_deviation,
    alpha_variance,
    chebyshev,
    mad,
    variance,
    vector_gruss,
)
from .space import ProbabilityVector, Space, forward_differences, norm, row_norms

#: Relative slack allowed when verifying chain ordering.
CHAIN_TOL = 1e-10


@dataclass(frozen=True)
class BoundLink:
    label: str
    value: float
    equation: str


@dataclass(frozen=True, eq=False)
class BoundChain:
    """A functional value with the bound links that dominate it.

    ``ordered=True`` means links form a chain (each dominates the previous
    value); ``ordered=False`` means parallel alternatives, each of which
    individually dominates the functional.
    """

    equation: str
    functional_label: str
    functional_value: float
    links: tuple[BoundLink, ...]
    hypothesis_reports: tuple[ConditionReport, ...] = field(default=())
    ordered: bool = True
    hypothesis_verified: bool = True

    def values(self) -> tuple[float, ...]:
        return (self.functional_value,) + tuple(link.value for link in self.links)

    def scale(self) -> float:
        return max(1.0, *(abs(v) for v in self.values()))

    def tightest_index(self) -> int:
        return int(np.argmin([link.value for link in self.links]))

    def ordering_violation(self) -> float:
        """Largest amount by which the claimed dominance fails (<= 0 when it holds)."""
        if not self.links:
            return 0.0
        if self.ordered:
            seq = self.values()
            return max(prev - nxt for prev, nxt in zip(seq, seq[1:]))
        return max(self.functional_value - link.value for link in self.links)

    def holds(self, tol: float = CHAIN_TOL) -> bool:
        return self.ordering_violation() <= tol * self.scale()


def _same_space(a: Space, b: Space, what: str) -> None:
    if not a.compatible(b):
        raise DimensionMismatchError(f"{what} lives in an incompatible space")


def _gate(report: ConditionReport, check: bool, what: str) -> bool:
    if report.holds:
        return True
    if check:
        bad = report.failing_indices()
        i = int(bad[0])
        raise HypothesisError(
            f"{what} fails at index {i} (slack {report.slacks[i]:.6g}, {bad.size} of {len(report)} fail)",
            report=report,
        )
    return False


def bound_chebyshev(encl_x: Enclosure, ws: WeightedSequence, *, check: bool = True) -> BoundChain:
    """Chain "2.3": |chebyshev| <= diam(x)/2 * mad(y) <= diam(x)/2 * std(y).

    Requires the ball condition on xs for the enclosure ``encl_x``.
    """
    ws.require_ys()
    _same_space(encl_x.space, ws.space, "enclosure")
    report = check_ball(encl_x, ws.xs)
    verified = _gate(report, check, "ball condition on xs")
    dx = encl_x.diameter
    l1 = 0.5 * dx * mad(ws.space, ws.p, ws.ys)
    l2 = 0.5 * dx * math.sqrt(variance(ws.space, ws.p, ws.ys))
    return BoundChain(
        equation="2.3",
        functional_label="|chebyshev(p;x,y)|",
        functional_value=abs(chebyshev(ws)),
        links=(
            BoundLink("0.5*diam(x)*mad(y)", l1, "2.3"),
            BoundLink("0.5*diam(x)*std(y)", l2, "2.3"),
        ),
        hypothesis_reports=(report,),
        hypothesis_verified=verified,
    )


def bound_chebyshev_gruss(
    encl_x: Enclosure, encl_y: Enclosure, ws: WeightedSequence, *, check: bool = True
) -> BoundChain:
    """Chain "2.7": the "2.3" chain extended by diam(x)*diam(y)/4.

    Requires the ball condition on xs and on ys (both enclosures).
    """
    ys = ws.require_ys()
    _same_space(encl_y.space, ws.space, "y-enclosure")
    base = bound_chebyshev(encl_x, ws, check=check)
    report_y = check_ball(encl_y, ys)
    verified = _gate(report_y, check, "ball condition on ys") and base.hypothesis_verified
    final = BoundLink("0.25*diam(x)*diam(y)", 0.25 * encl_x.diameter * encl_y.diameter, "1.4")
    return BoundChain(
        equation="2.7",
        functional_label=base.functional_label,
        functional_value=base.functional_value,
        links=base.links + (final,),
        hypothesis_reports=base.hypothesis_reports + (report_y,),
        hypothesis_verified=verified,
    )


def bound_variance(encl: Enclosure, p: ProbabilityVector, xs, *, check: bool = True) -> BoundChain:
    """Chain "2.8": variance <= diam(x)/2 * mad(x) <= diam(x)^2 / 4."""
    space = encl.space
    xs = space.matrix(xs)
    report = check_ball(encl, xs)
    verified = _gate(report, check, "ball condition on xs")
    dx = encl.diameter
    return BoundChain(
        equation="2.8",
        functional_label="variance(p;x)",
        functional_value=variance(space, p, xs),
        links=(
            BoundLink("0.5*diam(x)*mad(x)", 0.5 * dx * mad(space, p, xs), "2.8"),
            BoundLink("0.25*diam(x)^2", 0.25 * dx * dx, "1.5"),
        ),
        hypothesis_reports=(report,),
        hypothesis_verified=verified,
    )


def bound_scalar_weighted(
    encl_x: Enclosure, ws: WeightedSequence, disc: tuple | None = None, *, check: bool = True
) -> BoundChain:
    """Chain "2.9" (or "2.11" with a scalar disc): bounds ||vector_gruss||.

    Links: diam(x)/2 * sum p|a - abar|, then diam(x)/2 * std(a); when a disc
    ``(a, A)`` containing the scalars is supplied, the classical final link
    |A - a| * diam(x) / 4 is appended and the disc condition checked.
    """
    al = ws.require_alphas()
    _same_space(encl_x.space, ws.space, "enclosure")
    report = check_ball(encl_x, ws.xs)
    verified = _gate(report, check, "ball condition on xs")
    reports = (report,)
    dx = encl_x.diameter
    links = [
        BoundLink("0.5*diam(x)*amad(alpha)", 0.5 * dx * alpha_abs_deviation(ws.p, al), "2.9"),
        BoundLink("0.5*diam(x)*astd(alpha)", 0.5 * dx * math.sqrt(alpha_variance(ws.p, al)), "2.9"),
    ]
    equation = "2.9"
    if disc is not None:
        a, A = disc
        disc_report = check_scalar_disc(a, A, al)
        verified = _gate(disc_report, check, "disc condition on alphas") and verified
        reports = reports + (disc_report,)
        links.append(BoundLink("0.25*|A-a|*diam(x)", 0.25 * abs(complex(A) - complex(a)) * dx, "1.2"))
        equation = "2.11"
    return BoundChain(
        equation=equation,
        functional_label="||gruss(p;alpha,x)||",
        functional_value=norm(ws.space, vector_gruss(ws)),
        links=tuple(links),
        hypothesis_reports=reports,
        hypothesis_verified=verified,
    )


def bound_complex_sequence(a, A, p: ProbabilityVector, alphas, *, check: bool = True) -> BoundChain:
    """Chain "R2.7" for scalars: |sum p a^2 - (sum p a)^2| under a disc condition."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=np.complex128))
    if alphas.shape[0] != len(p):
        raise DimensionMismatchError(f"{alphas.shape[0]} scalars but {len(p)} weights")
    report = check_scalar_disc(a, A, alphas)
    verified = _gate(report, check, "disc condition on alphas")
    w = p.weights
    functional = abs((w * alphas**2).sum() - ((w * alphas).sum()) ** 2)
    width = abs(complex(A) - complex(a))
    return BoundChain(
        equation="R2.7",
        functional_label="|sq_gruss(p;alpha)|",
        functional_value=float(functional),
        links=(
            BoundLink("0.5*|A-a|*amad(alpha)", 0.5 * width * alpha_abs_deviation(p, alphas), "R2.7"),
            BoundLink("0.5*|A-a|*astd(alpha)", 0.5 * width * math.sqrt(alpha_variance(p, alphas)), "R2.7"),
        ),
        hypothesis_reports=(report,),
        hypothesis_verified=verified,
    )


def index_variance(p: ProbabilityVector) -> float:
    """sum_i i^2 p_i - (sum_i i p_i)^2 over 1-based indices."""
    i = np.arange(1, len(p) + 1, dtype=np.float64)
    w = p.weights
    return float((i * i * w).sum() - ((i * w).sum()) ** 2)


def pair_index_coefficient(p: ProbabilityVector) -> float:
    """sum_{j<i} p_i p_j (i - j) over 1-based indices."""
    i = np.arange(1, len(p) + 1, dtype=np.float64)
    gaps = i[:, None] - i[None, :]
    w = p.weights
    return float((np.outer(w, w) * np.where(gaps > 0, gaps, 0.0)).sum())


def pair_index_sq_coefficient(p: ProbabilityVector) -> float:
    """sum_{j<i} p_i p_j (i - j)^2; equals index_variance for every p."""
    i = np.arange(1, len(p) + 1, dtype=np.float64)
    gaps = i[:, None] - i[None, :]
    w = p.weights
    return float((np.outer(w, w) * np.where(gaps > 0, gaps * gaps, 0.0)).sum())


def half_complementary_weight(p: ProbabilityVector) -> float:
    """(1/2) sum_i p_i (1 - p_i)."""
    w = p.weights
    return 0.5 * float((w * (1.0 - w)).sum())


def equal_weight_coefficients(n: int) -> tuple[float, float, float]:
    """Closed forms of the three coefficients at uniform weights: (n^2-1)/12, (n^2-1)/(6n), (n-1)/(2n)."""
    if n < 2:
        raise DegenerateInputError("coefficients need n >= 2")
    return ((n * n - 1) / 12.0, (n * n - 1) / (6.0 * n), (n - 1) / (2.0 * n))


def _holder_factor(norms: np.ndarray, exponent: float) -> float:
    if math.isinf(exponent):
        return float(norms.max())
    return float((norms**exponent).sum() ** (1.0 / exponent))


def _holder_pair(holder_p: float) -> tuple[float, float]:
    hp = float(holder_p)
    if not hp > 1.0:
        raise ContractViolationError(f"holder exponent must be > 1 (or inf), got {holder_p!r}")
    if math.isinf(hp):
        return math.inf, 1.0
    return hp, hp / (hp - 1.0)


def _difference_links(
    cx: np.ndarray, cy: np.ndarray, p: ProbabilityVector, holder_p: float, squared_label: bool
) -> tuple[BoundLink, ...]:
    hp, hq = _holder_pair(holder_p)
    c1 = index_variance(p)
    c2 = pair_index_coefficient(p)
    c3 = half_complementary_weight(p)
    sx = "dx"
    sy = "dx" if squared_label else "dy"
    eq = "1.8" if squared_label else "1.6"
    hp_txt = "inf" if math.isinf(hp) else f"{hp:g}"
    hq_txt = "inf" if math.isinf(hq) else f"{hq:g}"
    return (
        BoundLink(f"idxvar(p)*max|{sx}|*max|{sy}|", c1 * float(cx.max()) * float(cy.max()), eq),
        BoundLink(
            f"pairidx(p)*pnorm({sx},{hp_txt})*pnorm({sy},{hq_txt})",
            c2 * _holder_factor(cx, hp) * _holder_factor(cy, hq),
            eq,
        ),
        BoundLink(f"gini(p)/2*sum|{sx}|*sum|{sy}|", c3 * float(cx.sum()) * float(cy.sum()), eq),
    )


def bound_forward_difference(ws: WeightedSequence, holder_p: float = 2.0) -> BoundChain:
    """Parallel bounds "1.6" on |chebyshev| from forward differences.

    Three alternatives, each individually dominating the functional:
    the index-variance branch (max-norms of the differences), the Holder
    branch with conjugate exponents (holder_p, holder_p/(holder_p-1)), and
    the complementary-weight branch (1-norms). ``holder_p=inf`` selects the
    (max-norm, 1-norm) endpoint of the Holder family. No enclosure
    hypothesis is involved.
    """
    ys = ws.require_ys()
    if ws.n < 2:
        raise DegenerateInputError("forward-difference bounds need n >= 2")
    cx = row_norms(ws.space, forward_differences(ws.xs))
    cy = row_norms(ws.space, forward_differences(ys))
    return BoundChain(
        equation="1.6",
        functional_label="|chebyshev(p;x,y)|",
        functional_value=abs(chebyshev(ws)),
        links=_difference_links(cx, cy, ws.p, holder_p, squared_label=False),
        ordered=False,
    )


def bound_forward_difference_self(
    space: Space, p: ProbabilityVector, xs, holder_p: float = 2.0
) -> BoundChain:
    """Parallel bounds "1.8" on the variance from forward differences of xs."""
    xs = space.matrix(xs)
    if xs.shape[0] != len(p):
        raise DimensionMismatchError(f"{xs.shape[0]} vectors but {len(p)} weights")
    if xs.shape[0] < 2:
        raise DegenerateInputError("forward-difference bounds need n >= 2")
    cx = row_norms(space, forward_differences(xs))
    return BoundChain(
        equation="1.8",
        functional_label="variance(p;x)",
        functional_value=variance(space, p, xs),
        links=_difference_links(cx, cx, p, holder_p, squared_label=True),
        ordered=False,
    )
