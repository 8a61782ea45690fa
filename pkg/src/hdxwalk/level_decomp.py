"""Link viewers, level-cochain spaces, and the orthogonal decomposition.

A link viewer is a linear, unit-preserving, composable way to see a global
cochain inside each link that is compatible with the weighted inner product
in expectation.  Two are implemented: restriction (copy values, no change
of dimension) and localization (``f_s(t) = f(s | t)``, dimension drops by
``dim(s) + 1``).

A k-cochain is *i-level* (localization viewer) when its viewed mean
vanishes at every (i-1)-face; equivalently it lies in the kernel of the
adjoint chain ``d*_{i-1} ... d*_{k-1}``.  Level spaces are nested downward,
so splitting each level against the next gives an orthogonal decomposition
``f = f_{-1} + f_0 + ... + f_k`` into proper level components, with the
constant part at level -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complex_core import ComplexError, link_of
from .cochain_ops import (
    Cochain,
    inner_product,
    localize,
    multi_down,
    multi_up,
    nonlazy,
    norm_sq,
    up_down,
    weight_vector,
)
from .spectral import psd_sqrt

__all__ = [
    "LOCALIZATION",
    "RESTRICTION",
    "LevelBasis",
    "LevelDecomposition",
    "Viewer",
    "level_constraint_matrix",
    "level_projector",
    "level_space",
    "lift_to_zero",
    "proper_decompose",
    "proper_level_basis",
    "respects_walk_residual",
    "restriction_level_space",
    "view",
]

KERNEL_TOL = 1e-10


@dataclass(frozen=True)
class Viewer:
    """One of the two link viewers; ``dim_diff`` is the drop in cochain
    dimension when viewing in a vertex link (0 for restriction, 1 for
    localization)."""

    kind: str
    dim_diff: int


RESTRICTION = Viewer("restriction", 0)
LOCALIZATION = Viewer("localization", 1)


def view(viewer: Viewer, X, f: Cochain, sigma, link=None) -> Cochain:
    """View ``f`` in the link of ``sigma`` through the given viewer."""
    from .complex_core import canonical_face

    sigma = canonical_face(sigma)
    if viewer.kind == "localization":
        return localize(X, f, sigma, link=link)
    if viewer.kind != "restriction":
        raise ComplexError(f"unknown viewer kind {viewer.kind!r}")
    if sigma not in X.weight:
        raise ComplexError(f"face {sigma} is not in the complex")
    i = len(sigma) - 1
    if f.dim + i + 1 > X.top_dim:
        raise ComplexError(
            f"cannot restrict a {f.dim}-cochain to the link of a face of "
            f"dimension {i} in a {X.top_dim}-dimensional complex"
        )
    if sigma == ():
        return f
    if link is None:
        link = link_of(X, sigma)
    vals = np.array([f.values[X.index_of(tau)] for tau in link.faces(f.dim)])
    return Cochain(link, f.dim, vals)


def respects_walk_residual(viewer: Viewer, X, k, f: Cochain) -> float:
    """|<M_k f, f> - E_v <M_{k-D} V_v f, V_v f>| over the vertex links.

    Both viewers provably respect the walk, so this is a numerical-zero
    certificate (<= 1e-10 in practice).
    """
    if f.dim != k:
        raise ComplexError(f"cochain dimension {f.dim} != k={k}")
    r = k - viewer.dim_diff
    if viewer.kind == "localization" and k < 1:
        raise ComplexError("localization to vertex links needs k >= 1")
    if k > X.top_dim - 1 or r > X.top_dim - 2:
        raise ComplexError(
            f"walk dimensions out of range for k={k} under {viewer.kind}"
        )
    M = nonlazy(X, k)
    lhs = inner_product(X, M(f), f)
    rhs = 0.0
    for v in X.faces(0):
        link = link_of(X, v)
        fv = view(viewer, X, f, v, link=link)
        Mv = nonlazy(link, r)
        rhs += X.weight[v] * inner_product(link, Mv(fv), fv)
    return abs(lhs - rhs)


@dataclass(frozen=True)
class LevelBasis:
    """W-orthonormal basis (columns) of the i-level k-cochains."""

    k: int
    i: int
    vectors: np.ndarray = field(repr=False)

    @property
    def dimension(self):
        return self.vectors.shape[1]

    def cochains(self, X):
        return [Cochain(X, self.k, self.vectors[:, c]) for c in range(self.dimension)]


def _orthonormalize(B, w):
    """W-orthonormalize the columns of B (assumed independent)."""
    if B.shape[1] == 0:
        return B
    G = B.T @ (w[:, None] * B)
    L = np.linalg.cholesky(G)
    return B @ np.linalg.inv(L).T


def _kernel_basis(A, w, tol=KERNEL_TOL):
    """W-orthonormal basis of ker(A); singular values below tol are zero."""
    n = A.shape[1]
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    rank = int(np.sum(s > tol))
    B = vh[rank:].T
    if B.shape[1] == 0:
        return np.zeros((n, 0))
    return _orthonormalize(B, w)


def level_space(X, k, i) -> LevelBasis:
    """i-level k-cochains under localization, as the kernel of the adjoint
    chain ``d*_{i-1} ... d*_{k-1}`` (one nullspace computation instead of
    per-face constraints; the constraint form is kept in
    :func:`level_constraint_matrix` as a cross-check)."""
    if not 0 <= i <= k <= X.top_dim:
        raise ComplexError(f"level_space needs 0 <= i <= k <= {X.top_dim}")
    key = ("level_space", k, i)
    if key not in X._cache:
        A = multi_down(X, i - 1, k - i + 1).matrix
        w = weight_vector(X, k)
        X._cache[key] = LevelBasis(k, i, _kernel_basis(A, w))
    return X._cache[key]


def level_constraint_matrix(X, k, i) -> np.ndarray:
    """Per-face constraint rows: row ``s`` (an (i-1)-face) holds the link
    weights ``w_s(t - s)`` against which an i-level cochain must average to
    zero.  Built independently of the operator chain."""
    import math

    if not 0 <= i <= k <= X.top_dim:
        raise ComplexError(f"constraints need 0 <= i <= k <= {X.top_dim}")
    rows = X.faces(i - 1)
    cols = X.faces(k)
    mat = np.zeros((len(rows), len(cols)))
    denom = math.comb(k + 1, i)
    for r, sigma in enumerate(rows):
        sset = set(sigma)
        for c, tau in enumerate(cols):
            if sset <= set(tau):
                mat[r, c] = X.weight[tau] / (denom * X.weight[sigma])
    return mat


def restriction_level_space(X, i) -> LevelBasis:
    """i-level vertex cochains under restriction (k = 0 only; this is all
    the trickling-down argument needs).  Level 0 is the mean-zero space,
    level 1 the kernel of the non-lazy vertex walk."""
    if i not in (0, 1):
        raise ComplexError("restriction level spaces are implemented for i in {0, 1}")
    w = weight_vector(X, 0)
    if i == 0:
        A = w[None, :]
    else:
        A = w[:, None] * nonlazy(X, 0).matrix
    return LevelBasis(0, i, _kernel_basis(A, w))


def level_projector(X, k, i) -> np.ndarray:
    """Matrix of the W-orthogonal projection onto the i-level space."""
    key = ("level_projector", k, i)
    if key not in X._cache:
        B = level_space(X, k, i).vectors
        w = weight_vector(X, k)
        X._cache[key] = B @ (B.T * w[None, :])
    return X._cache[key]


def proper_level_basis(X, k, i) -> np.ndarray:
    """W-orthonormal basis of the proper i-level space (i-level and
    orthogonal to the (i+1)-level space)."""
    w = weight_vector(X, k)
    if i == -1:
        ones = np.ones((X.n_faces(k), 1))
        return _orthonormalize(ones, w)
    B = level_space(X, k, i).vectors
    if i + 1 <= k:
        B = B - level_projector(X, k, i + 1) @ B
    if B.shape[1] == 0:
        return B
    # drop the directions swallowed by the higher level
    G = B.T @ (w[:, None] * B)
    vals, vecs = np.linalg.eigh(G)
    keep = vals > KERNEL_TOL
    if not np.any(keep):
        return np.zeros((B.shape[0], 0))
    return B @ (vecs[:, keep] / np.sqrt(vals[keep])[None, :])


@dataclass(frozen=True)
class LevelDecomposition:
    """Orthogonal split ``f = sum of components[i]`` into proper level
    cochains, with the constant part at level -1."""

    components: dict
    norms_sq: dict

    def reconstruction(self):
        total = None
        for f in self.components.values():
            total = f.values if total is None else total + f.values
        return total


def proper_decompose(X, f: Cochain) -> LevelDecomposition:
    """Split a k-cochain into proper level components, top level first.

    Working downward, each component is the i-level projection of what the
    higher levels have not claimed yet, which keeps the pieces orthogonal
    by construction; the remainder is the constant part.
    """
    k = f.dim
    if k > X.top_dim:
        raise ComplexError(f"cochain dimension {k} exceeds top dimension")
    components = {}
    residual = f.values.copy()
    for i in range(k, -1, -1):
        P = level_projector(X, k, i)
        vals = P @ residual
        components[i] = Cochain(X, k, vals)
        residual = residual - vals
    components[-1] = Cochain(X, k, residual)
    norms_sq = {i: norm_sq(X, g) for i, g in components.items()}
    return LevelDecomposition(components, norms_sq)


def lift_to_zero(X, f0: Cochain):
    """Vertex-cochain shadow of a proper 0-level k-cochain.

    Solves ``multi_up(X, 0, k) g = f0`` by weighted least squares (minimum
    norm) and returns ``(g, f_eq0)`` with ``f_eq0 = sqrt(up_down(X, 0, k))
    g``.  The shadow has zero mean, the same norm as ``f0``, and its lifted
    energy matches the downward energy of ``f0``.
    """
    k = f0.dim
    if not 1 <= k <= X.top_dim:
        raise ComplexError(f"lift_to_zero needs 1 <= dim <= {X.top_dim}")
    wk = weight_vector(X, k)
    nrm = float(np.sqrt(f0.values @ (wk * f0.values)))
    mean = float(wk @ f0.values)
    if abs(mean) > 1e-9 * max(1.0, nrm):
        raise ComplexError("cochain is not 0-level (nonzero weighted mean)")
    U = multi_up(X, 0, k).matrix
    sw = np.sqrt(wk)
    g_vals, *_ = np.linalg.lstsq(sw[:, None] * U, sw * f0.values, rcond=None)
    resid = float(np.sqrt(((U @ g_vals - f0.values) ** 2 * wk).sum()))
    if resid > 1e-6 * max(1.0, nrm):
        raise ComplexError(
            f"cochain is not a lift from the vertices (fit residual {resid:.3e})"
        )
    g = Cochain(X, 0, g_vals)
    S = psd_sqrt(X, up_down(X, 0, k))
    f_eq0 = S(g)
    return g, f_eq0
