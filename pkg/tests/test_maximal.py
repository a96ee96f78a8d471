import numpy as np
import pytest

from qnlab import (
    CubeSpec,
    DegenerateCubeError,
    GridSpace,
    InputError,
    Lp,
    ScalarField,
    TensorRep,
    VectorField,
    cube_average,
    default_scales,
    differentiation_report,
    hl_maximal,
    j_map,
    lq_space,
    profile_value,
    series_domination_report,
    vector_maximal,
    weak11_constant,
    weak_l1_space,
)
from oracles import maximal_oracle, vector_maximal_oracle


# ---------------------------------------------------------------------------
# grid geometry
# ---------------------------------------------------------------------------

def test_grid_space_validation_and_geometry():
    with pytest.raises(InputError):
        GridSpace(3, 8)
    with pytest.raises(InputError):
        GridSpace(1, 1)
    g1 = GridSpace(1, 8)
    assert g1.n_atoms == 8
    assert g1.cell_mass == pytest.approx(1.0 / 8.0)
    assert np.allclose(g1.axis_centers(), (np.arange(8) + 0.5) / 8.0)
    g2 = GridSpace(2, 4)
    assert g2.n_atoms == 16
    assert g2.cell_mass == pytest.approx(1.0 / 16.0)
    assert g2.flat_index(2, 3) == 11
    assert g2.cell_center(11) == (2.5 / 4.0, 3.5 / 4.0)
    ms = g2.to_measure_space()
    assert len(ms) == 16
    assert ms.total_mass == pytest.approx(1.0)


def test_cube_spec_validation():
    with pytest.raises(InputError):
        CubeSpec(center=(0.5,), halfwidth=0.0)
    with pytest.raises(InputError):
        CubeSpec(center=(0.5,), halfwidth=-0.1)
    c = CubeSpec(center=0.5, halfwidth=0.1)
    assert c.center == (0.5,)


# ---------------------------------------------------------------------------
# cube averages
# ---------------------------------------------------------------------------

def test_cube_average_hand_means_1d():
    g = GridSpace(1, 4)  # centers 0.125, 0.375, 0.625, 0.875
    f = ScalarField(np.array([1.0, 2.0, 4.0, 8.0]))
    # halfwidth 0.3 around 0.375 covers centers 0.125..0.625
    assert cube_average(g, f, CubeSpec((0.375,), 0.3)) == pytest.approx(7.0 / 3.0)
    # cube faces exactly on cell centers include them (snap tolerance)
    assert cube_average(g, f, CubeSpec((0.375,), 0.25)) == pytest.approx(7.0 / 3.0)
    # clipped at the boundary
    assert cube_average(g, f, CubeSpec((0.0,), 0.2)) == pytest.approx(1.0)


def test_cube_average_hand_means_2d():
    g = GridSpace(2, 2)
    f = ScalarField(np.array([1.0, 2.0, 3.0, 4.0]))  # rows (1,2), (3,4)
    assert cube_average(g, f, CubeSpec((0.5, 0.5), 0.5)) == pytest.approx(2.5)
    assert cube_average(g, f, CubeSpec((0.25, 0.25), 0.1)) == pytest.approx(1.0)
    assert cube_average(g, f, CubeSpec((0.75, 0.5), 0.3)) == pytest.approx(3.5)


def test_cube_average_locally_constant_is_bitwise_exact():
    # mean of three copies of 0.1 rounds to 0.1 + 1 ulp when summed naively;
    # the all-equal shortcut must return the common value itself
    g = GridSpace(1, 8)
    f = ScalarField(np.full(8, 0.1))
    avg = cube_average(g, f, CubeSpec((0.5,), 0.2))
    assert avg == 0.1


def test_cube_average_vector_fields():
    g = GridSpace(1, 4)
    X = lq_space(2, 1.0)
    vf = VectorField(np.array([[1.0, 0.0], [3.0, 2.0], [1.0, 4.0], [0.0, 0.0]]), X)
    avg = cube_average(g, vf, CubeSpec((0.375,), 0.3))
    assert np.allclose(avg, np.array([5.0, 6.0]) / 3.0)
    const = VectorField(np.tile([0.1, 0.3], (4, 1)), X)
    got = cube_average(g, const, CubeSpec((0.5,), 0.4))
    assert np.array_equal(got, np.array([0.1, 0.3]))


def test_cube_average_errors():
    g = GridSpace(1, 4)
    f = ScalarField(np.ones(4))
    with pytest.raises(DegenerateCubeError):
        cube_average(g, f, CubeSpec((-0.5,), 0.01))
    with pytest.raises(InputError):
        cube_average(g, f, CubeSpec((0.5, 0.5), 0.1))
    with pytest.raises(InputError):
        cube_average(g, ScalarField(np.ones(5)), CubeSpec((0.5,), 0.2))


def test_default_scales_run_down_to_subcell():
    g = GridSpace(1, 32)
    scales = default_scales(g)
    assert scales == (0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625)
    assert scales[-1] == 1.0 / (2 * g.cells)


# ---------------------------------------------------------------------------
# maximal operators vs direct enumeration
# ---------------------------------------------------------------------------

def test_hl_maximal_matches_enumeration_1d():
    rng = np.random.default_rng(50)
    g = GridSpace(1, 32)
    values = rng.uniform(-1.0, 2.0, size=32)
    scales = (0.5, 0.21, 0.0625, 0.01)
    got = hl_maximal(g, values, scales).values
    want = maximal_oracle(g, values, scales)
    assert np.allclose(got, want, rtol=1e-12, atol=1e-14)


def test_hl_maximal_matches_enumeration_2d():
    rng = np.random.default_rng(51)
    g = GridSpace(2, 8)
    values = rng.uniform(0.0, 3.0, size=64)
    scales = (0.5, 0.2, 0.0625)
    got = hl_maximal(g, values, scales).values
    want = maximal_oracle(g, values, scales)
    assert np.allclose(got, want, rtol=1e-12, atol=1e-14)


def test_vector_maximal_matches_enumeration():
    rng = np.random.default_rng(52)
    for g, X in ((GridSpace(1, 16), lq_space(2, 1.0)),
                 (GridSpace(1, 16), lq_space(3, 0.5)),
                 (GridSpace(2, 6), weak_l1_space(2))):
        vectors = rng.normal(size=(g.n_atoms, X.dim))
        scales = (0.5, 0.13, 1.0 / 16.0)
        got = vector_maximal(g, VectorField(vectors, X), scales).values
        want = vector_maximal_oracle(g, vectors, X, scales)
        assert np.allclose(got, want, rtol=1e-12, atol=1e-14)


def test_maximal_of_constant_field_is_exactly_one():
    for g in (GridSpace(1, 32), GridSpace(2, 8)):
        out = hl_maximal(g, np.ones(g.n_atoms)).values
        assert np.all(out == 1.0)
        X = lq_space(2, 1.0)
        vec = vector_maximal(g, VectorField(np.tile([0.6, 0.8], (g.n_atoms, 1)), X))
        assert np.all(vec.values == pytest.approx(1.4, rel=1e-15))


def test_subcell_scale_reproduces_absolute_value_bitwise():
    rng = np.random.default_rng(53)
    g = GridSpace(1, 16)
    values = rng.uniform(-1.0, 1.0, size=16)
    out = hl_maximal(g, values, scales=(1.0 / 64.0,)).values
    assert np.array_equal(out, np.abs(values))


def test_maximal_monotone_in_the_scale_set():
    rng = np.random.default_rng(54)
    g = GridSpace(1, 32)
    values = rng.uniform(0.0, 1.0, size=32)
    small = hl_maximal(g, values, scales=(0.25,)).values
    more = hl_maximal(g, values, scales=(0.25, 0.5, 0.0625)).values
    assert np.all(more >= small - 1e-15)
    assert np.all(hl_maximal(g, values).values >= np.abs(values) - 1e-15)


def test_maximal_input_validation():
    g = GridSpace(1, 8)
    with pytest.raises(InputError):
        hl_maximal(g, np.ones(7))
    with pytest.raises(InputError):
        hl_maximal(g, np.ones(8), scales=())
    with pytest.raises(InputError):
        hl_maximal(g, np.ones(8), scales=(0.0,))
    with pytest.raises(InputError):
        vector_maximal(g, np.ones((8, 2)))  # raw array without a target
    with pytest.raises(InputError):
        vector_maximal(g, np.ones((7, 2)), target=lq_space(2, 1.0))


# ---------------------------------------------------------------------------
# cancellation
# ---------------------------------------------------------------------------

def test_vector_maximal_sees_cancellation():
    # two opposite bumps: every cube containing both averages to zero, so
    # the vector maximal stays below the scalar maximal of the norm field
    N = 64
    g = GridSpace(1, N)
    X = lq_space(1, 1.0)
    vecs = np.zeros((N, 1))
    vecs[N // 4, 0] = 1.0
    vecs[3 * N // 4, 0] = -1.0
    vm = vector_maximal(g, VectorField(vecs, X)).values
    sm = hl_maximal(g, np.abs(vecs[:, 0])).values
    # Banach target: averaging commutes with the triangle inequality,
    # so domination holds at every cell
    assert np.all(vm <= sm + 1e-15)
    mid = N // 2
    assert vm[mid] < sm[mid] - 1e-4


# ---------------------------------------------------------------------------
# differentiation
# ---------------------------------------------------------------------------

def test_differentiation_of_half_indicator_is_exact_away_from_jump():
    N = 256
    g = GridSpace(1, N)
    f = ScalarField((np.arange(N) < N // 2).astype(float))
    samples = [i for i in range(N)
               if abs((i + 0.5) / N - 0.5) >= 0.125 + 1.0 / N]
    scales = (0.0625, 0.03125, 1.0 / N)
    rep = differentiation_report(g, f, samples, scales)
    assert rep.max_error == 0.0
    assert all(err == 0.0 for _, err in rep.per_scale)
    assert [h for h, _ in rep.per_scale] == list(scales)


def test_differentiation_vector_field_and_errors():
    N = 64
    g = GridSpace(1, N)
    X = lq_space(2, 1.0)
    vecs = np.tile([0.25, 0.5], (N, 1))
    vecs[N - 1] = [5.0, 5.0]
    vf = VectorField(vecs, X)
    rep = differentiation_report(g, vf, [N // 2], (0.125, 1.0 / N))
    assert rep.max_error == 0.0
    rep2 = differentiation_report(g, vf, [N - 2], (0.125,))
    assert rep2.max_error > 0.0  # the outlier leaks into this sample's cubes
    with pytest.raises(InputError):
        differentiation_report(g, vf, [], (0.125,))
    with pytest.raises(InputError):
        differentiation_report(g, vf, [N], (0.125,))


# ---------------------------------------------------------------------------
# weak-(1,1) ratios
# ---------------------------------------------------------------------------

def test_weak11_point_mass_anchors():
    g = GridSpace(1, 256)
    f = np.zeros(256)
    f[128] = 1.0
    rep = weak11_constant(g, f)
    assert rep.input_size == pytest.approx(1.0 / 256.0, rel=1e-15)
    assert rep.constant == pytest.approx(1.9846153846153847, rel=1e-12)
    g2 = GridSpace(2, 16)
    f2 = np.zeros(256)
    f2[8 * 16 + 8] = 1.0
    rep2 = weak11_constant(g2, f2)
    assert rep2.constant == pytest.approx(3.24, rel=1e-12)


def test_weak11_constant_field_ratio_is_one():
    g = GridSpace(1, 32)
    rep = weak11_constant(g, np.full(32, 0.7))
    assert rep.constant == pytest.approx(1.0, rel=1e-12)


def test_weak11_tensor_rep_path():
    rng = np.random.default_rng(55)
    g = GridSpace(1, 16)
    X = lq_space(2, 1.0)
    rep = TensorRep(xs=rng.normal(size=(3, 2)), fs=rng.normal(size=(3, 16)),
                    target=X, lam=Lp(1.0))
    report = weak11_constant(g, rep)
    space = g.to_measure_space()
    assert report.input_size == pytest.approx(profile_value(rep, space), rel=1e-15)
    assert report.constant == pytest.approx(
        report.weak_norm / report.input_size, rel=1e-15
    )
    assert report.weak_norm > 0


def test_weak11_zero_input_is_rejected():
    g = GridSpace(1, 8)
    with pytest.raises(InputError):
        weak11_constant(g, np.zeros(8))


# ---------------------------------------------------------------------------
# series domination
# ---------------------------------------------------------------------------

def test_series_domination_pointwise():
    rng = np.random.default_rng(56)
    for t in range(20):
        N = int(rng.choice([8, 16]))
        d = int(rng.integers(1, 3))
        g = GridSpace(d, N)
        k = int(rng.integers(1, 5))
        dim = int(rng.integers(1, 4))
        if t % 3 == 0:
            X, lam = lq_space(dim, 1.0), Lp(1.0)
        elif t % 3 == 1:
            X, lam = lq_space(dim, 2.0), Lp(1.0)
        else:
            X, lam = lq_space(dim, 0.5), Lp(0.5)
        rep = TensorRep(xs=rng.normal(size=(k, dim)),
                        fs=rng.normal(size=(k, g.n_atoms)), target=X, lam=lam)
        report = series_domination_report(rep, g)
        assert report.max_gap <= 1e-12 * max(1.0, report.maximal_at_argmax)
        assert report.maximal_at_argmax <= report.dominator_at_argmax * (1 + 1e-12)
        assert 0 <= report.argmax_cell < g.n_atoms


def test_series_domination_single_term_is_equality():
    # one term: M_vec(f x) = ||x|| M f cell by cell, so the gap is zero
    rng = np.random.default_rng(57)
    g = GridSpace(1, 16)
    X = lq_space(2, 1.0)
    rep = TensorRep(xs=np.array([[3.0, 4.0]]),
                    fs=rng.uniform(0.1, 1.0, size=(1, 16)), target=X, lam=Lp(1.0))
    report = series_domination_report(rep, g)
    assert abs(report.max_gap) <= 1e-12 * report.maximal_at_argmax
