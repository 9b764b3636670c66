"""Construction of SSP dense-output weights and executable non-existence barriers.

Two closed-form recipes cover most practical needs: scaling the step weights
linearly in theta always keeps the full SSP coefficient at first order, and a
quadratic recipe gives second order whenever the first row of A is zero.  For
anything else, lp_search assembles a collocation LP over the free polynomial
coefficients and decides feasibility with a phase-1 simplex, then certifies
the continuous conditions a posteriori in the Bernstein basis so the final
answer is sound despite the finite collocation grid.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import poly
from .certify import (
    CertStatus,
    monotonicity_feasible_dense,
    monotonicity_feasible_method,
    poly_nonneg_on_unit,
    resolvent,
)
from .errors import (
    DimensionMismatchError,
    NumericalCycleError,
    RepeatedAbscissaeError,
    StructureError,
)
from .simplex import phase1_feasible
from .tableau import (
    EXACT_TOL,
    ButcherTableau,
    DenseWeights,
    dense_order_residuals,
    method_order_residuals,
    validate_tableau,
)


def family_tableau(s: int) -> ButcherTableau:
    """Optimal second-order SSP method with s stages: a_ij = 1/(s-1) below the
    diagonal, b_j = 1/s, SSP coefficient s-1."""
    if s < 2:
        raise ValueError("the family needs s >= 2 (abscissas divide by s-1)")
    A = np.zeros((s, s))
    A[np.tril_indices(s, -1)] = 1.0 / (s - 1)
    b = np.full(s, 1.0 / s)
    return validate_tableau(A, b, name=f"family-s{s}")


def is_family_member(tab: ButcherTableau, tol: float = 1e-12) -> bool:
    if tab.s < 2:
        return False
    reference = family_tableau(tab.s)
    return bool(
        np.all(np.abs(tab.A - reference.A) <= tol)
        and np.all(np.abs(tab.b - reference.b) <= tol)
    )


def first_order_weights(tab: ButcherTableau) -> DenseWeights:
    """First-order dense weights b_j * theta; keeps the method's SSP coefficient."""
    report = method_order_residuals(tab)
    if report.order < 1:
        raise StructureError("method must be at least first order")
    coeffs = np.zeros((tab.s, 2))
    coeffs[:, 1] = tab.b
    return DenseWeights(coeffs)


def second_order_weights(tab: ButcherTableau) -> DenseWeights:
    """Second-order quadratic dense weights.

    Requires the first row of A to be zero (necessary for any order-2 dense
    output with a positive combined SSP coefficient) and method order >= 2.
    Stage 1 gets theta - (1-b_1)*theta^2, every other stage b_j*theta^2; the
    result matches b at theta = 1 by construction.
    """
    if np.any(tab.A[0] != 0.0):
        raise StructureError(
            "quadratic dense recipe needs the first row of A identically zero"
        )
    report = method_order_residuals(tab)
    if report.order < 2:
        raise StructureError("method must be at least second order")
    coeffs = np.zeros((tab.s, 3))
    coeffs[0, 1] = 1.0
    coeffs[0, 2] = -(1.0 - tab.b[0])
    coeffs[1:, 2] = tab.b[1:]
    return DenseWeights(coeffs)


def barrier_first_derivative(
    tab: ButcherTableau, weights: DenseWeights, tol: float = EXACT_TOL
) -> bool:
    """True iff the weight derivatives at 0 are pinned the way any order-2
    dense output with positive combined SSP coefficient must have them:
    1 on stage 1 and 0 elsewhere."""
    if weights.s != tab.s:
        raise DimensionMismatchError("weights/tableau stage counts differ")
    d1 = weights.coeffs[:, 1] if weights.degree >= 1 else np.zeros(weights.s)
    return bool(abs(d1[0] - 1.0) <= tol and np.all(np.abs(d1[1:]) <= tol))


@dataclass(frozen=True)
class BarrierVerdict:
    """Outcome of the order-3 quadrature barrier check.

    kind is "contradiction" when the hypotheses (distinct nonnegative
    abscissas, weights nonnegative near 0) are verified, in which case
    failed_relation names the first derivative relation at theta=0 that an
    order-3 claim forces but the given weights cannot satisfy.  kind is
    "not_applicable" when a hypothesis fails, with the reason and witness.
    """

    kind: str
    failed_relation: str | None = None
    hypothesis: str | None = None
    witness_theta: float | None = None
    lhs: float | None = None
    rhs: float | None = None

    @property
    def contradiction(self) -> bool:
        return self.kind == "contradiction"


def quadrature_barrier_order3(
    c, weights: DenseWeights, tol: float = EXACT_TOL
) -> BarrierVerdict:
    """Run the order-3 barrier argument on concrete abscissas and weights.

    The chain: weights nonnegative near 0 plus the quadrature conditions force
    b(0)=0, then sum b'(0) c = 0, then sum b''(0) c^2 = 0, which pins every
    second derivative with positive abscissa to zero; the second derivative of
    the order-2 condition then demands sum b''(0) c = 1, which is impossible.
    The verdict reports the first link the supplied weights break.
    """
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or len(c) != weights.s:
        raise DimensionMismatchError("abscissas must match the weight rows")
    diffs = np.abs(c[:, None] - c[None, :])
    np.fill_diagonal(diffs, np.inf)
    if diffs.min() <= 1e-13:
        i, j = np.unravel_index(np.argmin(diffs), diffs.shape)
        raise RepeatedAbscissaeError(
            f"abscissas {i + 1} and {j + 1} coincide ({c[i]!r})"
        )
    if np.any(c < -tol):
        j = int(np.argmin(c))
        return BarrierVerdict(
            kind="not_applicable",
            hypothesis="negative abscissa present",
            witness_theta=None,
            lhs=float(c[j]),
        )
    # Nonnegativity near 0: certify each weight on [0, 0.1] by rescaling.
    scale = np.power(0.1, np.arange(weights.degree + 1))
    for j in range(weights.s):
        report = poly_nonneg_on_unit(weights.coeffs[j] * scale)
        if report.certified is CertStatus.NEGATIVE:
            return BarrierVerdict(
                kind="not_applicable",
                hypothesis=f"weight {j + 1} negative near 0",
                witness_theta=0.1 * report.witness_theta,
                lhs=report.witness_value,
            )
        if report.certified is CertStatus.INCONCLUSIVE:
            return BarrierVerdict(
                kind="not_applicable",
                hypothesis=f"weight {j + 1} nonnegativity near 0 not certifiable",
            )
    d0 = weights.left_values()
    d1 = weights.coeffs[:, 1] if weights.degree >= 1 else np.zeros(weights.s)
    d2 = 2.0 * weights.coeffs[:, 2] if weights.degree >= 2 else np.zeros(weights.s)
    if np.any(np.abs(d0) > tol):
        j = int(np.argmax(np.abs(d0)))
        return BarrierVerdict(
            kind="contradiction",
            failed_relation="weights must vanish at 0",
            lhs=float(d0[j]),
            rhs=0.0,
        )
    lhs = float(d1 @ c)
    if abs(lhs) > tol:
        return BarrierVerdict(
            kind="contradiction",
            failed_relation="sum of c-weighted first derivatives at 0 must vanish",
            lhs=lhs,
            rhs=0.0,
        )
    lhs = float(d2 @ (c * c))
    if abs(lhs) > tol:
        return BarrierVerdict(
            kind="contradiction",
            failed_relation="sum of c^2-weighted second derivatives at 0 must vanish",
            lhs=lhs,
            rhs=0.0,
        )
    # All pins hold, so the second derivative of the quadratic-exactness
    # condition cannot: it needs sum b''(0) c = 1 while the pins force 0.
    return BarrierVerdict(
        kind="contradiction",
        failed_relation="second derivative of the order-2 condition at 0 "
        "needs sum b''(0) c = 1, but nonnegativity forces 0",
        lhs=float(d2 @ c),
        rhs=1.0,
    )


@dataclass(frozen=True)
class PrescreenViolation:
    condition: str
    detail: str
    theta: float | None = None
    lhs: float | None = None
    rhs: float | None = None

    def as_record(self) -> dict:
        return {
            "condition": self.condition,
            "detail": self.detail,
            "theta": self.theta,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


@dataclass(frozen=True)
class LpProblem:
    """Collocation LP over the free weight coefficients (powers 1..degree;
    the constant terms are pinned to zero by construction)."""

    s: int
    degree: int
    r: float
    order: int
    thetas: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    A_ub: np.ndarray
    b_ub: np.ndarray

    @property
    def n_variables(self) -> int:
        return self.s * self.degree


@dataclass(frozen=True)
class SearchResult:
    status: str                       # "feasible" | "infeasible"
    weights: DenseWeights | None
    certified: bool
    violated_necessary: PrescreenViolation | None = None
    collocation: int | None = None
    rounds: int = 0
    hint: str | None = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def as_record(self) -> dict:
        return {
            "status": self.status,
            "certified": self.certified,
            "weights": None if self.weights is None else self.weights.coeffs.tolist(),
            "violated_necessary": (
                None
                if self.violated_necessary is None
                else self.violated_necessary.as_record()
            ),
            "collocation": self.collocation,
            "rounds": self.rounds,
            "hint": self.hint,
        }


def chebyshev_lobatto(n: int) -> np.ndarray:
    """n Chebyshev-distributed points on [0,1] including both endpoints."""
    if n < 2:
        raise ValueError("need at least the two endpoints")
    return 0.5 * (1.0 - np.cos(np.pi * np.arange(n) / (n - 1)))


def _prescreen(tab, order, degree, r) -> PrescreenViolation | None:
    check = monotonicity_feasible_method(tab, r)
    stage_bad = [v for v in check.violations if v.condition.startswith("stage")]
    if check.singular or stage_bad:
        worst = stage_bad[0] if stage_bad else check.violations[0]
        return PrescreenViolation(
            condition="stage-conditions-at-r",
            detail="the stage conditions fail at the requested r regardless of "
            f"weights (first violation: {worst.condition} at {worst.index})",
            lhs=worst.value,
        )
    if order >= 2 and r > 0 and np.any(tab.A[0] != 0.0):
        return PrescreenViolation(
            condition="zero-first-row",
            detail="order-2 dense output with positive SSP coefficient needs "
            "the first row of A identically zero",
        )
    if order == 2 and degree == 2 and is_family_member(tab):
        s = tab.s
        # Uniqueness pins the quadratic coefficients to 1/s, so the first
        # weight is theta - ((s-1)/s) theta^2; its peak must respect 1/r.
        theta_star = s / (2.0 * (s - 1.0))
        if theta_star <= 1.0:
            peak = theta_star - (s - 1.0) / s * theta_star**2
            if peak > 1.0 / r + 1e-12:
                return PrescreenViolation(
                    condition="family-quadratic-peak",
                    detail="the unique quadratic candidate exceeds the step "
                    "budget at its peak",
                    theta=theta_star,
                    lhs=peak,
                    rhs=1.0 / r,
                )
    return None


def build_lp(
    tab: ButcherTableau,
    order: int,
    degree: int,
    r: float,
    n_collocation: int,
) -> LpProblem:
    """Assemble the collocation LP.

    Equalities match monomial coefficients of the dense order conditions up
    to the requested order (rows that are structurally zero are dropped; a
    zero row with nonzero right-hand side is kept and makes the LP
    infeasible).  When order >= 2 and r > 0 the derivative pins at theta=0
    (first-stage linear coefficient 1, all others 0) are added; they are
    necessary for any order-2 dense output with positive SSP coefficient and
    they close the gap between the collocation LP and the continuous problem.
    Inequalities impose the transformed-weight nonnegativity and the step
    budget at the collocation points.
    """
    s, D = tab.s, degree
    n_var = s * D

    def var(j, k):  # stage j (0-based), power k (1..D)
        return j * D + (k - 1)

    rows_eq, rhs_eq = [], []

    def add_condition(stage_factors, target):
        target = poly.pad(target, D + 1)
        for k in range(1, D + 1):
            row = np.zeros(n_var)
            for j in range(s):
                row[var(j, k)] = stage_factors[j]
            rows_eq.append(row)
            rhs_eq.append(target[k])
        # Powers above D carry no variables; a nonzero demand there is a
        # structural contradiction the LP must report.
        for k in range(D + 1, len(target)):
            if target[k] != 0.0:
                rows_eq.append(np.zeros(n_var))
                rhs_eq.append(target[k])

    add_condition(np.ones(s), [0.0, 1.0])
    if order >= 2:
        add_condition(tab.c, [0.0, 0.0, 0.5])
    if order >= 3:
        add_condition(tab.c * tab.c, [0.0, 0.0, 0.0, 1.0 / 3.0])
        add_condition(tab.A @ tab.c, [0.0, 0.0, 0.0, 1.0 / 6.0])
    if order >= 2 and r > 0:
        row = np.zeros(n_var)
        row[var(0, 1)] = 1.0
        rows_eq.append(row)
        rhs_eq.append(1.0)
        for j in range(1, s):
            row = np.zeros(n_var)
            row[var(j, 1)] = 1.0
            rows_eq.append(row)
            rhs_eq.append(0.0)

    keep = [
        i
        for i, row in enumerate(rows_eq)
        if np.any(row != 0.0) or rhs_eq[i] != 0.0
    ]
    A_eq = np.array([rows_eq[i] for i in keep]) if keep else np.zeros((0, n_var))
    b_eq = np.array([rhs_eq[i] for i in keep])

    M = resolvent(tab, r)
    Me = M @ np.ones(s)
    thetas = chebyshev_lobatto(n_collocation)
    rows_ub, rhs_ub = [], []
    for theta in thetas:
        if theta == 0.0:
            continue  # every constraint is structurally 0 >= 0 there
        powers = np.power(theta, np.arange(1, D + 1))
        for jp in range(s):
            row = np.zeros(n_var)
            for j in range(s):
                row[var(j, 1) : var(j, D) + 1] = -M[j, jp] * powers
            rows_ub.append(row)
            rhs_ub.append(0.0)
        row = np.zeros(n_var)
        for j in range(s):
            row[var(j, 1) : var(j, D) + 1] = r * Me[j] * powers
        rows_ub.append(row)
        rhs_ub.append(1.0)
    A_ub = np.array(rows_ub) if rows_ub else np.zeros((0, n_var))
    b_ub = np.array(rhs_ub)
    return LpProblem(
        s=s,
        degree=D,
        r=r,
        order=order,
        thetas=thetas,
        A_eq=A_eq,
        b_eq=b_eq,
        A_ub=A_ub,
        b_ub=b_ub,
    )


def _solve_lp(problem: LpProblem) -> np.ndarray | None:
    """Solve the LP in split-variable form; return free-variable values or None."""
    n = problem.n_variables

    def split(mat):
        if mat.size == 0:
            return np.zeros((mat.shape[0], 2 * n))
        out = np.empty((mat.shape[0], 2 * n))
        out[:, 0::2] = mat
        out[:, 1::2] = -mat
        return out

    result = phase1_feasible(
        A_eq=split(problem.A_eq),
        b_eq=problem.b_eq,
        A_ub=split(problem.A_ub),
        b_ub=problem.b_ub,
    )
    if not result.feasible:
        return None
    return result.x[0::2] - result.x[1::2]


def _weights_from_solution(problem: LpProblem, x: np.ndarray) -> DenseWeights:
    coeffs = np.zeros((problem.s, problem.degree + 1))
    coeffs[:, 1:] = x.reshape(problem.s, problem.degree)
    return DenseWeights(coeffs)


def _certify_candidate(tab, weights, order, r) -> bool:
    report = dense_order_residuals(tab, weights)
    if any(
        norm > 1e-10
        for lvl, norm in zip(report.levels, report.max_norms)
        if lvl <= order
    ):
        return False
    check = monotonicity_feasible_dense(tab, weights, r)
    return check.feasible


def lp_search(
    tab: ButcherTableau,
    order: int,
    degree: int,
    r: float,
    n_collocation: int | None = None,
) -> SearchResult:
    """Search for dense weights of the requested order and degree feasible at r.

    Closed-form necessary conditions are screened first so an infeasible
    verdict carries an interpretable cause; otherwise the collocation LP runs
    and any feasible point is certified continuously.  Certification failure
    doubles the collocation set for up to 4 refinement rounds before returning
    the candidate uncertified with a refinement hint.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2, or 3")
    if degree < 1:
        raise ValueError("degree must be at least 1")
    if r <= 0:
        raise ValueError("r must be positive")
    minimum = 2 * degree + 2
    if n_collocation is None:
        n_collocation = minimum
    elif n_collocation < minimum:
        raise ValueError(f"need at least {minimum} collocation points")
    if not monotonicity_feasible_method(tab, r).feasible:
        warnings.warn(
            "requested r exceeds the method's SSP coefficient", stacklevel=2
        )
    violation = _prescreen(tab, order, degree, r)
    if violation is not None:
        return SearchResult(
            status="infeasible",
            weights=None,
            certified=False,
            violated_necessary=violation,
            collocation=n_collocation,
        )
    n = n_collocation
    weights = None
    for round_index in range(5):
        problem = build_lp(tab, order, degree, r, n)
        try:
            x = _solve_lp(problem)
        except NumericalCycleError:
            if weights is None:
                raise
            # a refined LP failed numerically; fall back to the last
            # uncertified candidate rather than guessing a verdict
            return SearchResult(
                status="feasible",
                weights=weights,
                certified=False,
                collocation=n // 2,
                rounds=round_index,
                hint="refinement became numerically degenerate; the candidate "
                "is LP-feasible but not continuously certified",
            )
        if x is None:
            return SearchResult(
                status="infeasible",
                weights=None,
                certified=False,
                collocation=n,
                rounds=round_index,
            )
        weights = _weights_from_solution(problem, x)
        if _certify_candidate(tab, weights, order, r):
            return SearchResult(
                status="feasible",
                weights=weights,
                certified=True,
                collocation=n,
                rounds=round_index,
            )
        n *= 2
    return SearchResult(
        status="feasible",
        weights=weights,
        certified=False,
        collocation=n // 2,
        rounds=4,
        hint="collocation refinement exhausted; increase n_collocation",
    )
