"""Executable certificates for the spectral bounds on walk operators.

Every check evaluates both sides of a bound on concrete cochains and
reports the slack (bound minus quadratic form); a theorem "passes" when
the slack never drops below -1e-9.  The contraction coefficients all come
from one closed form over the gamma profile,

    lambda(i, k) = 1 - (1 / (k - i + 1)) * prod_{j=i-1}^{k-1} (1 - gamma_j),

which is the contraction certified for a proper i-level k-cochain; i = 0
recovers the single worst-case coefficient that ignores structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complex_core import ComplexError, link_of
from .cochain_ops import (
    Cochain,
    inner_product,
    multi_down,
    multi_up,
    nonlazy,
    norm_sq,
    up_down,
    weight_vector,
)
from .level_decomp import RESTRICTION, level_space, proper_decompose, view
from .spectral import HypothesisError, gamma_profile, lambda2_skeleton

__all__ = [
    "BoundReport",
    "BootstrapCertificate",
    "LambdaTable",
    "TricklingReport",
    "advantage_check",
    "alev_lau_check",
    "bootstrap_certificate",
    "fine_grained_check",
    "lambda_table",
    "random_mean_zero_cochain",
    "trickling_down_check",
    "updown_corollary_check",
]

SLACK_TOL = 1e-9


@dataclass(frozen=True)
class LambdaTable:
    """Closed-form contraction coefficients over a gamma profile.

    ``value(i, k)`` is the certified bound on the Rayleigh quotient of the
    non-lazy k-walk on proper i-level cochains.
    """

    gamma: dict
    values: dict = field(repr=False)

    def value(self, i, k):
        return self.values[(i, k)]

    def coefficients(self, k):
        return {i: self.values[(i, k)] for i in range(0, k + 1)}


def lambda_table(profile, max_k) -> LambdaTable:
    """Fill the closed form for all 0 <= i <= k <= max_k."""
    gamma = dict(profile.gamma)
    values = {}
    for k in range(0, max_k + 1):
        for i in range(0, k + 1):
            prod = 1.0
            for j in range(i - 1, k):
                prod *= 1.0 - gamma[j]
            values[(i, k)] = 1.0 - prod / (k - i + 1)
    return LambdaTable(gamma, values)


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound: quadratic form (lhs), bound (rhs), and the
    per-level coefficients against the component masses."""

    lhs: float
    rhs: float
    per_level: dict
    details: dict = field(default_factory=dict)

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def passed(self):
        return self.slack >= -SLACK_TOL


def _require_mean_zero(X, f):
    w = weight_vector(X, f.dim)
    nrm = float(np.sqrt(f.values @ (w * f.values)))
    mean = float(w @ f.values)
    if abs(mean) > 1e-9 * max(1.0, nrm):
        raise ComplexError("cochain has a nonzero constant component")


def advantage_check(X, k, f: Cochain) -> BoundReport:
    """Downward-energy bound for 0-level k-cochains:
    ``|d*_0 ... d*_{k-1} f|^2 <= (1 - (k/(k+1)) (1 - gamma)) |f|^2`` with
    gamma the second eigenvalue of the vertex walk."""
    if not 1 <= k <= X.top_dim:
        raise ComplexError(f"advantage_check needs 1 <= k <= {X.top_dim}")
    if f.dim != k:
        raise ComplexError(f"cochain dimension {f.dim} != k={k}")
    _require_mean_zero(X, f)
    gamma = lambda2_skeleton(X)
    down = multi_down(X, 0, k)(f)
    lhs = norm_sq(X, down)
    nsq = norm_sq(X, f)
    coeff = 1.0 - (k / (k + 1)) * (1.0 - gamma)
    return BoundReport(lhs, coeff * nsq, {0: (coeff, nsq)}, {"gamma": gamma})


def fine_grained_check(X, k, f: Cochain) -> BoundReport:
    """Level-resolved bound on the non-lazy k-walk: after the proper level
    decomposition, each component contracts by its own closed-form
    coefficient instead of the worst-case one."""
    if not 0 <= k <= X.top_dim - 1:
        raise ComplexError(f"fine_grained_check needs 0 <= k < {X.top_dim}")
    if f.dim != k:
        raise ComplexError(f"cochain dimension {f.dim} != k={k}")
    _require_mean_zero(X, f)
    table = lambda_table(gamma_profile(X), X.top_dim - 1)
    decomp = proper_decompose(X, f)
    lhs = inner_product(X, nonlazy(X, k)(f), f)
    per_level = {}
    rhs = 0.0
    for i in range(0, k + 1):
        coeff = table.value(i, k)
        nsq = decomp.norms_sq[i]
        per_level[i] = (coeff, nsq)
        rhs += coeff * nsq
    return BoundReport(lhs, rhs, per_level, {"constant_mass": decomp.norms_sq[-1]})


def alev_lau_check(X, k, f: Cochain) -> BoundReport:
    """Worst-case bound (single coefficient ``lambda(0, k)``); also reports
    how much the fine-grained bound improves on it for this cochain."""
    if not 0 <= k <= X.top_dim - 1:
        raise ComplexError(f"alev_lau_check needs 0 <= k < {X.top_dim}")
    if f.dim != k:
        raise ComplexError(f"cochain dimension {f.dim} != k={k}")
    _require_mean_zero(X, f)
    table = lambda_table(gamma_profile(X), X.top_dim - 1)
    coeff = table.value(0, k)
    nsq = norm_sq(X, f)
    lhs = inner_product(X, nonlazy(X, k)(f), f)
    fine = fine_grained_check(X, k, f)
    return BoundReport(
        lhs,
        coeff * nsq,
        {0: (coeff, nsq)},
        {"fine_grained_rhs": fine.rhs, "dominance_gap": coeff * nsq - fine.rhs},
    )


def updown_corollary_check(X, k, f: Cochain) -> BoundReport:
    """The fine-grained bound transported to the (lazy) up-down walk through
    the exact identity ``U = ((k+1) M + I) / (k+2)``."""
    fine = fine_grained_check(X, k, f)
    lhs = inner_product(X, up_down(X, k, 1)(f), f)
    per_level = {}
    rhs = 0.0
    for i, (lam, nsq) in fine.per_level.items():
        coeff = ((k + 1) * lam + 1.0) / (k + 2)
        per_level[i] = (coeff, nsq)
        rhs += coeff * nsq
    return BoundReport(lhs, rhs, per_level)


@dataclass(frozen=True)
class BootstrapCertificate:
    """Numerical check of the two recursion conditions behind the bounds.

    ``worst_slack_first`` is the margin of the advantage condition
    (quadratic-form maximization over the 0-level subspace),
    ``worst_slack_second`` the margin of the link-to-global table
    condition.  Both must be >= -1e-9.
    """

    k: int
    table: LambdaTable
    link_tables: dict
    worst_slack_first: float
    worst_slack_second: float

    @property
    def passed(self):
        return (
            self.worst_slack_first >= -SLACK_TOL
            and self.worst_slack_second >= -SLACK_TOL
        )


def bootstrap_certificate(X, k) -> BootstrapCertificate:
    """Certify the recursion that bootstraps vertex-walk expansion into the
    k-dimensional bound.

    Condition 2: for each level, the worst link coefficient one level down
    is dominated by the global coefficient.  Condition 1: on the 0-level
    subspace, ``lam(1,k) |g|^2 + (1 - lam(1,k)) E_v |const-part of g in the
    link of v|^2 <= lam(0,k) |g|^2``; the expectation collapses to
    ``|d*_0 ... d*_{k-1} g|^2``, so the condition is one top-eigenvalue
    computation of a weighted-self-adjoint form restricted to that
    subspace.
    """
    if not 1 <= k <= X.top_dim - 1:
        raise ComplexError(f"bootstrap_certificate needs 1 <= k < {X.top_dim}")
    r = k - 1
    table = lambda_table(gamma_profile(X), X.top_dim - 1)
    link_tables = {}
    for v in X.faces(0):
        link = link_of(X, v)
        link_tables[v] = lambda_table(gamma_profile(link), link.top_dim - 1)

    worst_second = np.inf
    for i in range(1, k + 1):
        worst_link = max(t.value(i - 1, r) for t in link_tables.values())
        worst_second = min(worst_second, table.value(i, k) - worst_link)

    lam0 = table.value(0, k)
    lam1 = table.value(1, k)
    D = multi_down(X, 0, k).matrix
    U = multi_up(X, 0, k).matrix
    n = X.n_faces(k)
    A = lam1 * np.eye(n) + (1.0 - lam1) * (U @ D) - lam0 * np.eye(n)
    B = level_space(X, k, 0).vectors
    w = weight_vector(X, k)
    R = B.T @ (w[:, None] * (A @ B))
    R = (R + R.T) / 2.0
    if R.shape[0] == 0:
        worst_first = np.inf
    else:
        worst_first = -float(np.linalg.eigvalsh(R)[-1])
    return BootstrapCertificate(k, table, link_tables, float(worst_first), float(worst_second))


@dataclass(frozen=True)
class TricklingReport:
    lambda_local: float
    bound: float
    actual: float
    advantage_residual: float
    passed: bool


def trickling_down_check(X, samples=5, seed=0) -> TricklingReport:
    """Certify that vertex-link expansion trickles down one dimension.

    With every vertex link a ``lam``-expander (lam < 1) and the complex
    connected, the global vertex walk is a ``lam / (1 - lam)``-expander.
    Also certifies the identity that powers the advantage here: averaging a
    restricted cochain over a vertex link equals the non-lazy walk applied
    at that vertex.
    """
    if X.top_dim < 2:
        raise ComplexError("trickling down needs a complex of dimension >= 2")
    lam = -np.inf
    for v in X.faces(0):
        link = link_of(X, v)
        try:
            lam = max(lam, lambda2_skeleton(link))
        except HypothesisError:
            raise HypothesisError(
                f"link of {v} has a disconnected 1-skeleton"
            ) from None
    actual = lambda2_skeleton(X)
    if lam >= 1.0 - 1e-12:
        raise HypothesisError(f"vertex links are not expanders (lambda={lam!r})")
    bound = lam / (1.0 - lam)

    rng = np.random.default_rng(seed)
    M = nonlazy(X, 0)
    residual = 0.0
    for _ in range(samples):
        f = Cochain(X, 0, rng.standard_normal(X.n_faces(0)))
        Mf = M(f)
        for v in X.faces(0):
            link = link_of(X, v)
            fv = view(RESTRICTION, X, f, v, link=link)
            local_mean = float(weight_vector(link, 0) @ fv.values)
            residual = max(residual, abs(local_mean - Mf(v)))
    passed = bool(actual <= bound + SLACK_TOL and residual <= 1e-12)
    return TricklingReport(float(lam), float(bound), float(actual), float(residual), passed)


def random_mean_zero_cochain(X, k, rng) -> Cochain:
    """Standard-normal cochain projected off the constants and normalized
    to unit weighted norm (uniform on the sphere of the 0-level space)."""
    w = weight_vector(X, k)
    vals = rng.standard_normal(X.n_faces(k))
    vals -= vals @ w
    nrm = float(np.sqrt(vals @ (w * vals)))
    if nrm < 1e-14:
        raise ComplexError("degenerate sample (no mean-zero directions)")
    return Cochain(X, k, vals / nrm)
