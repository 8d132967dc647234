"""Vectors of the neutral-metric 4-space.

Vectors are plain float64 numpy arrays of shape ``(4,)`` (broadcasting over
leading axes is supported where noted).  The ambient bilinear form has
signature (+, +, -, -):

    <v, w> = v1*w1 + v2*w2 - v3*w3 - v4*w4

Curves live in the Minkowski 3-subspace span{e1, e2, e3} with the fourth
coordinate held at zero, so every object in the package is a 4-vector.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import FrameDegenerate

__all__ = [
    "METRIC_DIAG",
    "TAU_NULL",
    "CONGRUENCE_T",
    "CausalCharacter",
    "inner",
    "norm_squared",
    "causal_character",
    "apply_congruence",
    "gram_matrix",
    "minkowski_cross",
    "triple_det",
    "pseudo_normalize",
    "frame_normal",
    "orthonormalize_frame",
    "basis",
]

#: diagonal of the ambient metric in the canonical basis
METRIC_DIAG = np.array([1.0, 1.0, -1.0, -1.0])

#: default threshold when classifying computed (inexact) vectors;
#: pass tol=0.0 for exact literal inputs
TAU_NULL = 1e-10

#: coordinate permutation (x1, x2, x3, x4) -> (x4, x3, x1, x2).  It swaps the
#: positive- and negative-definite planes of the metric, so it reverses the
#: sign of the bilinear form: <T v, T w> = -<v, w>.  It maps each meridian
#: surface built around the timelike axis onto its twin built around a
#: spacelike axis (see meridian_surfaces.axis_swapped_point).
CONGRUENCE_T = np.array(
    [
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]
)


def basis(i):
    """Canonical basis vector e_i, i in 1..4."""
    e = np.zeros(4)
    e[i - 1] = 1.0
    return e


def inner(v, w):
    """Neutral inner product; accepts (..., 4) arrays and broadcasts."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    prod = (
        v[..., 0] * w[..., 0]
        + v[..., 1] * w[..., 1]
        - v[..., 2] * w[..., 2]
        - v[..., 3] * w[..., 3]
    )
    return float(prod) if prod.ndim == 0 else prod


def norm_squared(v):
    """<v, v>; may be negative or zero."""
    return inner(v, v)


class CausalCharacter(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    NULL = "null"


def causal_character(v, tol=TAU_NULL):
    """Classify a vector as spacelike, timelike or null.

    The zero vector is spacelike by convention.  ``tol`` bounds both the
    self inner product (for the null band) and the Euclidean norm (for the
    zero test); computed vectors should use the default, literal exact
    inputs may pass ``tol=0.0``.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    v = np.asarray(v, dtype=float)
    q = inner(v, v)
    euclid = float(np.linalg.norm(v))
    if euclid <= tol:
        return CausalCharacter.SPACELIKE
    if abs(q) <= tol:
        return CausalCharacter.NULL
    return CausalCharacter.SPACELIKE if q > 0 else CausalCharacter.TIMELIKE


def apply_congruence(v):
    """Apply the axis-swapping congruence T to a vector (or (..., 4) array)."""
    v = np.asarray(v, dtype=float)
    return v @ CONGRUENCE_T.T


def gram_matrix(vectors):
    """Matrix of pairwise inner products of a sequence of 4-vectors."""
    vs = np.asarray(vectors, dtype=float)
    return np.array([[inner(a, b) for b in vs] for a in vs])


def minkowski_cross(a, b):
    """Metric-adjoint cross product in span{e1, e2, e3}.

    Characterized by <cross(a, b), w> = det[a, b, w] for the 3x3 determinant
    in coordinates (x1, x2, x3); the fourth coordinates of the inputs are
    ignored and the result has fourth coordinate zero.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.cross(a[:3], b[:3])
    return np.array([c[0], c[1], -c[2], 0.0])


def triple_det(a, b, c):
    """Determinant of [a, b, c] restricted to coordinates (x1, x2, x3)."""
    m = np.array([np.asarray(a)[:3], np.asarray(b)[:3], np.asarray(c)[:3]])
    return float(np.linalg.det(m))


def pseudo_normalize(v, tol=TAU_NULL):
    """v / sqrt(|<v, v>|); raises FrameDegenerate for (near-)null input."""
    q = inner(v, v)
    if abs(q) <= tol:
        raise FrameDegenerate("cannot normalize a (near-)null vector")
    return np.asarray(v, dtype=float) / np.sqrt(abs(q))


def frame_normal(position, tangent, sigma_l, sigma_t, tol=1e-12):
    """Third frame vector of a curve in span{e1, e2, e3}.

    For an orthonormal pair (l, t) with <l,l> = sigma_l, <t,t> = sigma_t the
    cross product already has unit norm of the required sign -sigma_l*sigma_t;
    the overall sign is fixed by requiring det[l, t, n] > 0.
    """
    raw = minkowski_cross(position, tangent)
    if float(np.linalg.norm(raw)) <= tol:
        raise FrameDegenerate("position and tangent do not span a plane")
    return -float(sigma_l * sigma_t) * raw


def orthonormalize_frame(vectors, signs):
    """Gram-Schmidt for the indefinite metric with sign restoration.

    ``vectors`` is an iterable of 4-vectors, ``signs`` the target self inner
    products (+1/-1).  Projections divide by the *signed* norm of the already
    processed vectors; normalization uses |<v, v>|, which preserves the causal
    character instead of silently remixing it.
    """
    out = []
    for v, sign in zip(vectors, signs):
        v = np.array(v, dtype=float)
        for w in out:
            v -= (inner(v, w) / inner(w, w)) * w
        v = pseudo_normalize(v)
        got = inner(v, v)
        if got * sign < 0:
            raise FrameDegenerate(
                f"vector has causal character {got:+.1f}, expected {sign:+d}"
            )
        out.append(v)
    return out
