import numpy as np
import pytest

from qnlab import (
    InputError,
    QuasiNormedSpace,
    lq_space,
    weak_l1_space,
    weak_l1_vector_norm,
)


def test_lq_norm_closed_forms():
    X1 = lq_space(3, 1.0)
    X2 = lq_space(3, 2.0)
    Xh = lq_space(3, 0.5)
    v = np.array([1.0, -2.0, 2.0])
    assert X1.norm(v) == pytest.approx(5.0, rel=1e-15)
    assert X2.norm(v) == pytest.approx(3.0, rel=1e-15)
    assert Xh.norm(v) == pytest.approx((1 + np.sqrt(2) + np.sqrt(2)) ** 2, rel=1e-14)


def test_norms_rowwise_matches_norm():
    rng = np.random.default_rng(3)
    for X in (lq_space(4, 1.0), lq_space(4, 0.5), lq_space(4, 2.0), weak_l1_space(4)):
        vs = rng.standard_normal((20, 4))
        batch = X.norms(vs)
        single = np.array([X.norm(v) for v in vs])
        assert np.allclose(batch, single, rtol=1e-14, atol=0.0)


def test_weak_l1_vector_norm_values():
    assert weak_l1_vector_norm(np.array([3.0, 0.0, 0.0])) == 3.0
    # harmonic vector: every prefix product k * (1/k) equals one
    h = 1.0 / np.arange(1, 6)
    assert weak_l1_vector_norm(h) == pytest.approx(1.0, rel=1e-15)
    assert weak_l1_vector_norm(np.array([-1.0, 2.0])) == pytest.approx(2.0)
    X = weak_l1_space(3)
    assert X.norm(np.array([1.0, 1.0, 1.0])) == pytest.approx(3.0)


def test_kappa_values():
    assert lq_space(2, 1.0).kappa == 1.0
    assert lq_space(2, 2.0).kappa == 1.0
    assert lq_space(2, 0.5).kappa == pytest.approx(2.0, rel=1e-15)
    assert lq_space(2, 1.0 / 3.0).kappa == pytest.approx(4.0, rel=1e-12)
    assert weak_l1_space(2).kappa == 2.0
    assert lq_space(2, 1.0).is_banach and not lq_space(2, 0.5).is_banach


def test_quasi_triangle_inequality_with_kappa():
    rng = np.random.default_rng(9)
    for X in (lq_space(5, 0.5), lq_space(5, 1.0), weak_l1_space(5)):
        for _ in range(200):
            x = rng.standard_normal(5)
            y = rng.standard_normal(5)
            lhs = X.norm(x + y)
            rhs = X.kappa * (X.norm(x) + X.norm(y))
            assert lhs <= rhs * (1 + 1e-12)


def test_weak_l1_triangle_genuinely_fails():
    # weak-l1 is a quasi-norm only: some pair beats the triangle inequality
    # by a clear margin (a seeded sparse search finds ratio > 1.2 easily)
    X = weak_l1_space(8)
    rng = np.random.default_rng(1)
    xs = np.abs(rng.standard_normal((20000, 8))) * (rng.random((20000, 8)) < 0.7)
    ys = np.abs(rng.standard_normal((20000, 8))) * (rng.random((20000, 8)) < 0.7)
    denom = X.norms(xs) + X.norms(ys)
    keep = denom > 0
    ratios = X.norms(xs[keep] + ys[keep]) / denom[keep]
    assert float(ratios.max()) > 1.2
    assert float(ratios.max()) <= X.kappa * (1 + 1e-12)


def test_custom_space_validation():
    X = QuasiNormedSpace(
        dim=2, kind="custom",
        evaluator=lambda v: float(np.max(np.abs(v))),
        kappa_custom=1.0, name="linf",
    )
    assert X.norm(np.array([1.0, -3.0])) == 3.0
    with pytest.raises(InputError):
        QuasiNormedSpace(dim=2, kind="custom", evaluator=None, kappa_custom=1.0)
    with pytest.raises(InputError):
        QuasiNormedSpace(dim=2, kind="custom",
                         evaluator=lambda v: float(np.max(np.abs(v))),
                         kappa_custom=0.5)
    with pytest.raises(InputError):
        # not homogeneous
        QuasiNormedSpace(dim=2, kind="custom",
                         evaluator=lambda v: float(np.max(np.abs(v))) + 1.0,
                         kappa_custom=1.0)
    with pytest.raises(InputError):
        QuasiNormedSpace(dim=0, kind="lq", q=1.0)
    with pytest.raises(InputError):
        QuasiNormedSpace(dim=2, kind="lq", q=-1.0)
    with pytest.raises(InputError):
        QuasiNormedSpace(dim=2, kind="nope")


def test_norm_shape_errors():
    X = lq_space(3, 1.0)
    with pytest.raises(InputError):
        X.norm(np.ones(2))
    with pytest.raises(InputError):
        X.norms(np.ones((2, 2)))
