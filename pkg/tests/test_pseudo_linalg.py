import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorentz_meridian.pseudo_linalg import (
    CONGRUENCE_T,
    METRIC_DIAG,
    CausalCharacter,
    apply_congruence,
    basis,
    causal_character,
    frame_normal,
    gram_matrix,
    inner,
    minkowski_cross,
    orthonormalize_frame,
    pseudo_normalize,
    triple_det,
)

E1, E2, E3, E4 = (basis(i) for i in (1, 2, 3, 4))

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
vec4 = st.tuples(finite, finite, finite, finite).map(np.array)


def test_metric_signature_on_basis():
    assert inner(E1, E1) == 1.0
    assert inner(E2, E2) == 1.0
    assert inner(E3, E3) == -1.0
    assert inner(E4, E4) == -1.0


def test_null_vector():
    v = np.array([1.0, 0.0, 1.0, 0.0])
    assert inner(v, v) == 0.0


@given(vec4, vec4, vec4, finite)
@settings(max_examples=100, deadline=None)
def test_inner_bilinear_symmetric(v, w, x, lam):
    assert inner(v, w) == pytest.approx(inner(w, v), abs=1e-12)
    lhs = inner(v + lam * x, w)
    rhs = inner(v, w) + lam * inner(x, w)
    scale = 1.0 + abs(lhs) + abs(rhs)
    assert abs(lhs - rhs) <= 1e-9 * scale


@pytest.mark.parametrize(
    "v,expected",
    [
        ((0, 0, 1, 0), CausalCharacter.TIMELIKE),
        ((1, 0, 0, 0), CausalCharacter.SPACELIKE),
        ((1, 0, 1, 0), CausalCharacter.NULL),
        ((0, 0, 0, 0), CausalCharacter.SPACELIKE),
    ],
)
def test_causal_character(v, expected):
    assert causal_character(np.array(v, dtype=float)) is expected


@pytest.mark.parametrize("lam", [-2.0, -0.5, 0.25, 3.0])
@pytest.mark.parametrize(
    "v", [(1.0, 2.0, 0.5, 0.0), (0.1, 0.0, 1.0, 1.0), (1.0, 0.0, 1.0, 0.0)]
)
def test_causal_character_scale_invariant(v, lam):
    v = np.array(v)
    assert causal_character(v) is causal_character(lam * v)


def test_congruence_matrix_action():
    assert np.array_equal(apply_congruence(E1), E3)
    assert np.array_equal(apply_congruence(E2), E4)
    assert np.array_equal(apply_congruence(E3), E2)
    assert np.array_equal(apply_congruence(E4), E1)
    assert np.array_equal(CONGRUENCE_T[2], np.array([1.0, 0.0, 0.0, 0.0]))


def test_congruence_flips_inner_products():
    # T swaps the definite planes, so it is an anti-isometry: the Gram matrix
    # of the transformed basis is the negated metric, and every pairing
    # changes sign.  Pointwise congruence of the surfaces is unaffected.
    gram = gram_matrix([apply_congruence(basis(i)) for i in range(1, 5)])
    assert np.array_equal(gram, -np.diag(METRIC_DIAG))
    rng = np.random.default_rng(20240517)
    for _ in range(1000):
        v, w = rng.normal(size=4), rng.normal(size=4)
        assert inner(apply_congruence(v), apply_congruence(w)) == pytest.approx(
            -inner(v, w), abs=1e-12
        )


def test_cross_product_characterization():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = np.append(rng.normal(size=3), 0.0)
        b = np.append(rng.normal(size=3), 0.0)
        w = np.append(rng.normal(size=3), 0.0)
        assert inner(minkowski_cross(a, b), w) == pytest.approx(
            triple_det(a, b, w), rel=1e-12, abs=1e-12
        )


def test_frame_normal_convention():
    n = frame_normal(E1, E2, sigma_l=1.0, sigma_t=1.0)
    assert np.allclose(n, [0.0, 0.0, 1.0, 0.0])
    assert inner(n, n) == -1.0
    assert triple_det(E1, E2, n) > 0


def test_orthonormalize_indefinite():
    rng = np.random.default_rng(11)
    base = [
        np.array([1.0, 0.1, 0.05, 0.0]),
        np.array([0.2, 1.0, 0.1, 0.0]),
        np.array([0.1, 0.2, 1.3, 0.0]),
    ]
    out = orthonormalize_frame(base, (1.0, 1.0, -1.0))
    gram = gram_matrix(out)
    assert np.allclose(gram, np.diag([1.0, 1.0, -1.0]), atol=1e-12)


def test_pseudo_normalize_rejects_null():
    from lorentz_meridian.errors import FrameDegenerate

    with pytest.raises(FrameDegenerate):
        pseudo_normalize(np.array([1.0, 0.0, 1.0, 0.0]))
