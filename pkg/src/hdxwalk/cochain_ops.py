"""Cochains and the averaging/walk operators of a weighted complex.

A ``k``-cochain is a real vector over the canonically ordered ``k``-faces,
paired with the weighted inner product ``<f, g> = sum_s w(s) f(s) g(s)``.
The one-step averaging operator ``diff`` (signless differential ``d_k``) and
its exact adjoint ``adjoint_diff`` (``d*_k``) generate everything else:
multi-step averages, the up-down and down-up walks, and the non-lazy walk.

Every operator is materialized as a dense matrix (rows indexed by target
faces, columns by source faces); the complexes here are desk scale, which
keeps adjointness and spectrum checks exact to near machine precision.
Alongside the compositional definitions, the explicit entrywise formulas
(``*_explicit``) are implemented independently so the two routes can be
compared rather than trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .complex_core import ComplexError, canonical_face

__all__ = [
    "Cochain",
    "LinOp",
    "adjoint_diff",
    "compose",
    "constant_projection",
    "diff",
    "down_up",
    "down_up_explicit",
    "identity_op",
    "inner_product",
    "localize",
    "multi_down",
    "multi_down_explicit",
    "multi_up",
    "multi_up_explicit",
    "nonlazy",
    "nonlazy_from_iup",
    "norm_sq",
    "up_down",
    "up_down_explicit",
    "weight_vector",
]


@dataclass(frozen=True, eq=False)
class Cochain:
    """Real-valued function on the ``dim``-faces of ``complex``."""

    complex: object
    dim: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.complex.n_faces(self.dim),):
            raise ComplexError(
                f"cochain of dimension {self.dim} needs "
                f"{self.complex.n_faces(self.dim)} values, got {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, X, k):
        return cls(X, k, np.zeros(X.n_faces(k)))

    @classmethod
    def ones(cls, X, k):
        return cls(X, k, np.ones(X.n_faces(k)))

    @classmethod
    def from_dict(cls, X, k, mapping, default=0.0):
        vals = np.full(X.n_faces(k), float(default))
        for face, value in mapping.items():
            vals[X.index_of(canonical_face(face))] = float(value)
        return cls(X, k, vals)

    def __call__(self, face):
        return float(self.values[self.complex.index_of(canonical_face(face))])


@dataclass(frozen=True, eq=False)
class LinOp:
    """Dense linear map between cochain spaces of one complex.

    ``matrix`` has shape ``(#target faces, #source faces)``.
    """

    source_dim: int
    target_dim: int
    matrix: np.ndarray = field(repr=False)

    def apply(self, f: Cochain) -> Cochain:
        if f.dim != self.source_dim:
            raise ComplexError(
                f"operator expects a {self.source_dim}-cochain, got dimension {f.dim}"
            )
        return Cochain(f.complex, self.target_dim, self.matrix @ f.values)

    def __call__(self, f: Cochain) -> Cochain:
        return self.apply(f)


def compose(A: LinOp, B: LinOp) -> LinOp:
    """The map ``A after B``."""
    if B.target_dim != A.source_dim:
        raise ComplexError(
            f"cannot compose: inner dimensions {B.target_dim} != {A.source_dim}"
        )
    return LinOp(B.source_dim, A.target_dim, A.matrix @ B.matrix)


def identity_op(X, k) -> LinOp:
    return LinOp(k, k, np.eye(X.n_faces(k)))


def weight_vector(X, k) -> np.ndarray:
    """Face weights of dimension ``k`` in canonical order (sums to 1)."""
    key = ("weights", k)
    if key not in X._cache:
        X._cache[key] = np.array([X.weight[f] for f in X.faces(k)])
    return X._cache[key]


def _same_space(X, f: Cochain):
    if f.complex is X:
        return
    if f.complex.top_dim == X.top_dim and f.complex.faces(f.dim) == X.faces(f.dim):
        return
    raise ComplexError("cochain does not live on the given complex")


def inner_product(X, f: Cochain, g: Cochain) -> float:
    """Weighted inner product ``sum_s w(s) f(s) g(s)`` of two k-cochains."""
    if f.dim != g.dim:
        raise ComplexError(f"dimension mismatch: {f.dim} vs {g.dim}")
    _same_space(X, f)
    _same_space(X, g)
    w = weight_vector(X, f.dim)
    return float(np.dot(w * f.values, g.values))


def norm_sq(X, f: Cochain) -> float:
    return inner_product(X, f, f)


def localize(X, f: Cochain, sigma, link=None) -> Cochain:
    """Localization ``f_sigma(t) = f(sigma | t)`` on the link of ``sigma``.

    Requires ``dim(sigma) < dim(f)``; the result lives on ``link_of(X,
    sigma)`` and has dimension ``dim(f) - dim(sigma) - 1``.
    """
    from .complex_core import link_of

    _same_space(X, f)
    sigma = canonical_face(sigma)
    if sigma not in X.weight:
        raise ComplexError(f"face {sigma} is not in the complex")
    i = len(sigma) - 1
    if i >= f.dim:
        raise ComplexError(
            f"cannot localize a {f.dim}-cochain at a face of dimension {i}"
        )
    if sigma == ():
        return f
    if link is None:
        link = link_of(X, sigma)
    j = f.dim - i - 1
    vals = np.empty(link.n_faces(j))
    for pos, tau in enumerate(link.faces(j)):
        vals[pos] = f.values[X.index_of(canonical_face(sigma + tau))]
    return Cochain(link, j, vals)


def _cached_op(X, key, builder) -> LinOp:
    if key not in X._cache:
        X._cache[key] = builder()
    return X._cache[key]


def diff(X, k) -> LinOp:
    """Signless differential ``d_k``: average a k-cochain over the
    (k+1)-subfaces, ``(d f)(s) = mean of f over k-faces inside s``.

    Rows sum to 1 and constants are preserved.  Defined for ``-1 <= k < d``.
    """
    if not -1 <= k <= X.top_dim - 1:
        raise ComplexError(f"diff needs -1 <= k < {X.top_dim}, got {k}")

    def build():
        rows = X.faces(k + 1)
        mat = np.zeros((len(rows), X.n_faces(k)))
        coeff = 1.0 / (k + 2)
        from itertools import combinations

        for r, sigma in enumerate(rows):
            for tau in combinations(sigma, k + 1):
                mat[r, X.face_index[tau]] += coeff
        return LinOp(k, k + 1, mat)

    return _cached_op(X, ("diff", k), build)


def adjoint_diff(X, k) -> LinOp:
    """Adjoint ``d*_k`` of :func:`diff` under the weighted inner products.

    Explicitly, ``(d* f)(t) = sum over vertices v of the link of t of
    w_t(v) f(t | v)``, a link-weighted average one dimension down.
    """
    if not -1 <= k <= X.top_dim - 1:
        raise ComplexError(f"adjoint_diff needs -1 <= k < {X.top_dim}, got {k}")

    def build():
        rows = X.faces(k)
        cols = X.faces(k + 1)
        mat = np.zeros((len(rows), len(cols)))
        from itertools import combinations

        for c, sigma in enumerate(cols):
            w_sigma = X.weight[sigma]
            for tau in combinations(sigma, k + 1):
                # w_tau(sigma \ tau) = w(sigma) / ((k+2) w(tau))
                mat[X.face_index[tau], c] += w_sigma / ((k + 2) * X.weight[tau])
        return LinOp(k + 1, k, mat)

    return _cached_op(X, ("adjoint_diff", k), build)


def multi_up(X, k, i) -> LinOp:
    """Composition ``d_{k+i-1} ... d_k`` lifting k-cochains to (k+i)-cochains."""
    if i < 0 or not -1 <= k or k + i > X.top_dim:
        raise ComplexError(f"multi_up range violation: k={k}, i={i}, d={X.top_dim}")
    if i == 0:
        return identity_op(X, k)

    def build():
        op = diff(X, k)
        for j in range(k + 1, k + i):
            op = compose(diff(X, j), op)
        return op

    return _cached_op(X, ("multi_up", k, i), build)


def multi_down(X, k, i) -> LinOp:
    """Composition ``d*_k ... d*_{k+i-1}`` dropping (k+i)-cochains to k."""
    if i < 0 or not -1 <= k or k + i > X.top_dim:
        raise ComplexError(f"multi_down range violation: k={k}, i={i}, d={X.top_dim}")
    if i == 0:
        return identity_op(X, k)

    def build():
        op = adjoint_diff(X, k + i - 1)
        for j in range(k + i - 2, k - 1, -1):
            op = compose(adjoint_diff(X, j), op)
        return op

    return _cached_op(X, ("multi_down", k, i), build)


def multi_up_explicit(X, k, i) -> LinOp:
    """Closed form of :func:`multi_up`: uniform average over contained k-faces."""
    if i < 0 or not -1 <= k or k + i > X.top_dim:
        raise ComplexError(f"multi_up range violation: k={k}, i={i}, d={X.top_dim}")
    if i == 0:
        return identity_op(X, k)
    from itertools import combinations

    rows = X.faces(k + i)
    mat = np.zeros((len(rows), X.n_faces(k)))
    coeff = 1.0 / math.comb(k + i + 1, k + 1)
    for r, sigma in enumerate(rows):
        for tau in combinations(sigma, k + 1):
            mat[r, X.face_index[tau]] += coeff
    return LinOp(k, k + i, mat)


def multi_down_explicit(X, k, i) -> LinOp:
    """Closed form of :func:`multi_down`: link-weighted average over the
    (k+i)-faces containing each k-face."""
    if i < 0 or not -1 <= k or k + i > X.top_dim:
        raise ComplexError(f"multi_down range violation: k={k}, i={i}, d={X.top_dim}")
    if i == 0:
        return identity_op(X, k)
    from itertools import combinations

    rows = X.faces(k)
    cols = X.faces(k + i)
    mat = np.zeros((len(rows), len(cols)))
    denom = math.comb(k + i + 1, k + 1)
    for c, rho in enumerate(cols):
        w_rho = X.weight[rho]
        for tau in combinations(rho, k + 1):
            mat[X.face_index[tau], c] += w_rho / (denom * X.weight[tau])
    return LinOp(k + i, k, mat)


def up_down(X, k, i=1) -> LinOp:
    """``i``-fold up-down walk on k-cochains: up ``i`` averaging steps, then
    down ``i`` adjoint steps (``d*_k ... d*_{k+i-1} d_{k+i-1} ... d_k``)."""
    if i < 1 or k < 0 or k + i > X.top_dim:
        raise ComplexError(f"up_down range violation: k={k}, i={i}, d={X.top_dim}")
    return _cached_op(
        X, ("up_down", k, i), lambda: compose(multi_down(X, k, i), multi_up(X, k, i))
    )


def down_up(X, k, i=1) -> LinOp:
    """``i``-fold down-up walk on k-cochains: ``i`` adjoint steps down to
    dimension ``k-i``, then ``i`` averaging steps back up.

    ``i = k+1`` runs through the empty face and yields the projection onto
    constants (the lift of the weighted mean).
    """
    if i < 1 or k > X.top_dim or k - i < -1:
        raise ComplexError(f"down_up range violation: k={k}, i={i}")
    return _cached_op(
        X,
        ("down_up", k, i),
        lambda: compose(multi_up(X, k - i, i), multi_down(X, k - i, i)),
    )


def up_down_explicit(X, k) -> LinOp:
    """Entrywise table of the one-step up-down walk: diagonal ``1/(k+2)``,
    neighbour entry ``w_s(t - s) / (k+2)`` when ``s | t`` is a (k+1)-face."""
    if k < 0 or k + 1 > X.top_dim:
        raise ComplexError(f"up_down range violation: k={k}, d={X.top_dim}")
    n = X.n_faces(k)
    mat = np.zeros((n, n))
    for s in range(n):
        mat[s, s] = 1.0 / (k + 2)
    _add_neighbor_entries(X, k, mat, 1.0 / (k + 2))
    return LinOp(k, k, mat)


def down_up_explicit(X, k) -> LinOp:
    """Entrywise table of the one-step down-up walk."""
    if k < 0 or k > X.top_dim:
        raise ComplexError(f"down_up range violation: k={k}")
    from itertools import combinations

    faces_k = X.faces(k)
    n = len(faces_k)
    mat = np.zeros((n, n))
    coeff = 1.0 / (k + 1)
    for r, sigma in enumerate(faces_k):
        # diagonal: average over the (k-1)-subfaces t of w_t(sigma \ t)
        for tau in combinations(sigma, k):
            mat[r, r] += coeff * X.weight[sigma] / ((k + 1) * X.weight[tau])
    for r, sigma in enumerate(faces_k):
        sset = set(sigma)
        for c, tau in enumerate(faces_k):
            if c == r:
                continue
            inter = tuple(v for v in tau if v in sset)
            if len(inter) == k and inter in X.weight:
                # w_inter(tau \ inter) with dim(inter)=k-1, |tau \ inter|=1
                mat[r, c] = coeff * X.weight[tau] / ((k + 1) * X.weight[inter])
    return LinOp(k, k, mat)


def _add_neighbor_entries(X, k, mat, scale):
    """Add ``scale * w_s(t - s)`` at [s, t] for all k-face pairs sharing a
    (k+1)-face, by sweeping the (k+1)-faces once."""
    from itertools import combinations

    for rho in X.faces(k + 1):
        w_rho = X.weight[rho]
        subs = [X.face_index[t] for t in combinations(rho, k + 1)]
        for a in subs:
            w_a = X.weight[X.faces(k)[a]]
            for b in subs:
                if a != b:
                    # w_sigma(v) = w(rho) / ((k+2) w(sigma))
                    mat[a, b] += scale * w_rho / ((k + 2) * w_a)


def nonlazy(X, k) -> LinOp:
    """Non-lazy k-dimensional walk: move between two k-faces that span a
    common (k+1)-face, never stay in place.

    Entry ``[s, t] = w_s(t - s) / (k+1)`` when ``s | t`` is a (k+1)-face,
    zero otherwise (in particular on the diagonal).  Row-stochastic,
    self-adjoint under the weighted inner product, and equal to
    ``((k+2) U_k - I) / (k+1)``.
    """
    if not 0 <= k <= X.top_dim - 1:
        raise ComplexError(f"nonlazy needs 0 <= k < {X.top_dim}, got {k}")

    def build():
        n = X.n_faces(k)
        mat = np.zeros((n, n))
        # entry w_s(v)/(k+1) = w(rho) / ((k+1)(k+2) w(s)); the helper divides
        # by (k+2) already
        _add_neighbor_entries(X, k, mat, 1.0 / (k + 1))
        return LinOp(k, k, mat)

    return _cached_op(X, ("nonlazy", k), build)


def nonlazy_from_iup(X, i) -> LinOp:
    """The vertex walk recovered from the i-fold up-down operator:
    ``((i+1)/i) * up_down(X, 0, i) - (1/i) * I`` for any ``1 <= i <= d``."""
    if not 1 <= i <= X.top_dim:
        raise ComplexError(f"nonlazy_from_iup needs 1 <= i <= {X.top_dim}, got {i}")
    U = up_down(X, 0, i)
    n = X.n_faces(0)
    mat = ((i + 1) / i) * U.matrix - (1.0 / i) * np.eye(n)
    return LinOp(0, 0, mat)


def constant_projection(X, k) -> LinOp:
    """Projection of k-cochains onto constants: ``f -> <f, 1> * 1``."""
    w = weight_vector(X, k)
    mat = np.tile(w, (len(w), 1))
    return LinOp(k, k, mat)
