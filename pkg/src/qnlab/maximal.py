"""Grid geometry, cube averages, and maximal operators.

Every maximal quantity here runs over the same cube family: all
axis-aligned cubes of the current scale, centered at grid cell centers,
that contain the evaluation point.  Cubes are clipped to the unit domain
and averages use the clipped cube's actual mass, so the constant field is
reproduced exactly at every point and every scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import ndimage

from .errors import DegenerateCubeError, InputError
from .galb_tensor import TensorRep, j_map, profile_value
from .gauges import gauge_values_rows
from .measure import (
    MeasureSpace,
    ScalarField,
    VectorField,
    counting_space,
    weak_l1_value,
)
from .spaces import QuasiNormedSpace

_SNAP = 1e-12


@dataclass(frozen=True)
class GridSpace:
    """Uniform grid on the unit interval (d=1) or unit square (d=2).

    Cell k along an axis spans [k/N, (k+1)/N) with center (k + 1/2)/N;
    two-dimensional cells are enumerated row-major, so the flat atom
    index of cell (i, j) is i * N + j.  Every cell carries mass N**(-d).
    """

    d: int
    cells: int

    def __post_init__(self) -> None:
        if self.d not in (1, 2):
            raise InputError("grid dimension must be 1 or 2")
        if self.cells < 2:
            raise InputError("need at least two cells per axis")

    @property
    def n_atoms(self) -> int:
        return self.cells ** self.d

    @property
    def cell_mass(self) -> float:
        return float(self.cells) ** (-self.d)

    def axis_centers(self) -> np.ndarray:
        return (np.arange(self.cells) + 0.5) / self.cells

    def flat_index(self, i: int, j: int = 0) -> int:
        if self.d == 1:
            return int(i)
        return int(i) * self.cells + int(j)

    def cell_center(self, flat: int) -> Tuple[float, ...]:
        n = self.cells
        if self.d == 1:
            return ((flat + 0.5) / n,)
        return (((flat // n) + 0.5) / n, ((flat % n) + 0.5) / n)

    def to_measure_space(self) -> MeasureSpace:
        return MeasureSpace(np.full(self.n_atoms, self.cell_mass))


@dataclass(frozen=True)
class CubeSpec:
    """Axis-aligned cube given by center coordinates and a halfwidth."""

    center: Tuple[float, ...]
    halfwidth: float

    def __post_init__(self) -> None:
        center = self.center
        if np.isscalar(center):
            center = (float(center),)
        object.__setattr__(self, "center", tuple(float(c) for c in center))
        if not self.halfwidth > 0.0:
            raise InputError("cube halfwidth must be positive")


def _axis_cell_range(center: float, halfwidth: float, n: int) -> Tuple[int, int]:
    """Indices of cells whose centers fall in [center - h, center + h].

    The closed interval is widened by a snap tolerance so that cube faces
    landing exactly on a cell center include that cell despite rounding.
    """
    lo = int(np.ceil((center - halfwidth - _SNAP) * n - 0.5))
    hi = int(np.floor((center + halfwidth + _SNAP) * n - 0.5))
    return max(lo, 0), min(hi, n - 1)


def _cube_flat_indices(grid: GridSpace, cube: CubeSpec) -> np.ndarray:
    if len(cube.center) != grid.d:
        raise InputError("cube center dimension does not match the grid")
    n = grid.cells
    ranges = [
        _axis_cell_range(c, cube.halfwidth, n) for c in cube.center
    ]
    if any(lo > hi for lo, hi in ranges):
        raise DegenerateCubeError("cube contains no cell centers")
    if grid.d == 1:
        lo, hi = ranges[0]
        return np.arange(lo, hi + 1)
    (rlo, rhi), (clo, chi) = ranges
    rows = np.arange(rlo, rhi + 1)
    cols = np.arange(clo, chi + 1)
    return (np.add.outer(rows * n, cols)).ravel()


def cube_average(
    grid: GridSpace,
    f: Union[ScalarField, VectorField],
    cube: CubeSpec,
) -> Union[float, np.ndarray]:
    """Average of f over the cube clipped to the domain.

    When every selected value is bitwise identical the common value is
    returned as-is, so averaging a locally constant field is exact.
    """
    idx = _cube_flat_indices(grid, cube)
    if isinstance(f, VectorField):
        block = f.vectors[idx]
        if bool(np.all(block == block[0])):
            return block[0].copy()
        return block.mean(axis=0)
    values = f.values if isinstance(f, ScalarField) else np.asarray(f, dtype=float)
    if values.shape != (grid.n_atoms,):
        raise InputError("field length does not match the grid")
    block = values[idx]
    first = block[0]
    if bool(np.all(block == first)):
        return float(first)
    return float(block.mean())


def default_scales(grid: GridSpace) -> Tuple[float, ...]:
    """Dyadic halfwidths 1/2, 1/4, ... down to the sub-cell scale 1/(2N)."""
    top = int(np.ceil(np.log2(2 * grid.cells)))
    return tuple(2.0 ** (-j) for j in range(1, top + 1))


def _radii(grid: GridSpace, scales: Optional[Iterable[float]]) -> Tuple[int, ...]:
    if scales is None:
        scales = default_scales(grid)
    scales = [float(h) for h in scales]
    if not scales:
        raise InputError("need at least one scale")
    if any(not h > 0.0 for h in scales):
        raise InputError("scales must be positive")
    n = grid.cells
    rr = sorted({min(int(np.floor(h * n + 1e-9)), n) for h in scales})
    return tuple(rr)


def _window_means_1d(vals: np.ndarray, r: int) -> np.ndarray:
    n = vals.shape[0]
    prefix = np.concatenate(([0.0], np.cumsum(vals)))
    lo = np.maximum(np.arange(n) - r, 0)
    hi = np.minimum(np.arange(n) + r, n - 1)
    return (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1)


def _window_means_2d(vals: np.ndarray, r: int) -> np.ndarray:
    n = vals.shape[0]
    prefix = np.zeros((n + 1, n + 1))
    prefix[1:, 1:] = np.cumsum(np.cumsum(vals, axis=0), axis=1)
    lo = np.maximum(np.arange(n) - r, 0)
    hi = np.minimum(np.arange(n) + r, n - 1)
    sums = (
        prefix[np.ix_(hi + 1, hi + 1)]
        - prefix[np.ix_(lo, hi + 1)]
        - prefix[np.ix_(hi + 1, lo)]
        + prefix[np.ix_(lo, lo)]
    )
    counts = np.outer(hi - lo + 1, hi - lo + 1)
    return sums / counts


def _slide_max(means: np.ndarray, r: int) -> np.ndarray:
    return ndimage.maximum_filter(
        means, size=2 * r + 1, mode="constant", cval=-np.inf
    )


def hl_maximal(
    grid: GridSpace,
    f: Union[ScalarField, np.ndarray],
    scales: Optional[Iterable[float]] = None,
) -> ScalarField:
    """Hardy-Littlewood-style maximal field of |f| over the cube family.

    At each cell center y the value is the largest average of |f| over a
    cube of one of the given halfwidths that contains y.  A halfwidth
    below the cell spacing selects only the cell itself, contributing
    |f(y)| bitwise exactly.
    """
    values = f.values if isinstance(f, ScalarField) else np.asarray(f, dtype=float)
    if values.shape != (grid.n_atoms,):
        raise InputError("field length does not match the grid")
    vals = np.abs(values)
    if grid.d == 2:
        vals = vals.reshape(grid.cells, grid.cells)
    best = np.full(vals.shape, -np.inf)
    for r in _radii(grid, scales):
        if r == 0:
            cand = vals
        elif grid.d == 1:
            cand = _slide_max(_window_means_1d(vals, r), r)
        else:
            cand = _slide_max(_window_means_2d(vals, r), r)
        best = np.maximum(best, cand)
    return ScalarField(best.ravel())


def vector_maximal(
    grid: GridSpace,
    vf: Union[VectorField, np.ndarray],
    scales: Optional[Iterable[float]] = None,
    target: Optional[QuasiNormedSpace] = None,
) -> ScalarField:
    """max over cubes containing y of || average of the vector field ||.

    The cube family is identical to hl_maximal's; only the value averaged
    inside each cube changes (vectors, measured in the target norm, with
    no absolute value: cancellation between cells is kept).
    """
    if isinstance(vf, VectorField):
        vectors, target = vf.vectors, vf.target
    else:
        vectors = np.asarray(vf, dtype=float)
        if target is None:
            raise InputError("raw vector arrays need an explicit target space")
    if vectors.shape[0] != grid.n_atoms:
        raise InputError("vector field length does not match the grid")
    dim = vectors.shape[1]
    n = grid.cells
    best = np.full(grid.n_atoms, -np.inf)
    for r in _radii(grid, scales):
        if r == 0:
            norms = target.norms(vectors)
        elif grid.d == 1:
            prefix = np.zeros((n + 1, dim))
            prefix[1:] = np.cumsum(vectors, axis=0)
            lo = np.maximum(np.arange(n) - r, 0)
            hi = np.minimum(np.arange(n) + r, n - 1)
            avg = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1)[:, None]
            norms = target.norms(avg)
        else:
            cube_vals = vectors.reshape(n, n, dim)
            prefix = np.zeros((n + 1, n + 1, dim))
            prefix[1:, 1:] = np.cumsum(np.cumsum(cube_vals, axis=0), axis=1)
            lo = np.maximum(np.arange(n) - r, 0)
            hi = np.minimum(np.arange(n) + r, n - 1)
            sums = (
                prefix[np.ix_(hi + 1, hi + 1)]
                - prefix[np.ix_(lo, hi + 1)]
                - prefix[np.ix_(hi + 1, lo)]
                + prefix[np.ix_(lo, lo)]
            )
            counts = np.outer(hi - lo + 1, hi - lo + 1)
            avg = sums / counts[:, :, None]
            norms = target.norms(avg.reshape(-1, dim)).reshape(n, n)
        if r > 0:
            norms = _slide_max(norms, r)
        best = np.maximum(best, np.asarray(norms).ravel())
    return ScalarField(best)


@dataclass(frozen=True)
class DifferentiationReport:
    per_scale: Tuple[Tuple[float, float], ...]  # (halfwidth, max error)
    max_error: float


def differentiation_report(
    grid: GridSpace,
    f: Union[ScalarField, VectorField],
    samples: Sequence[int],
    scales: Iterable[float],
) -> DifferentiationReport:
    """Worst |cube average - field value| over sample cells, per scale.

    Averages go through cube_average (with its exact locally-constant
    shortcut), so a field constant on a neighborhood of a sample point
    differentiates with error exactly 0.0 once the scale fits inside.
    """
    samples = [int(s) for s in samples]
    if not samples:
        raise InputError("need at least one sample cell")
    for s in samples:
        if not (0 <= s < grid.n_atoms):
            raise InputError("sample cell out of range")
    vector = isinstance(f, VectorField)
    rows: list = []
    worst = 0.0
    for h in scales:
        err = 0.0
        for s in samples:
            avg = cube_average(grid, f, CubeSpec(grid.cell_center(s), float(h)))
            if vector:
                err = max(err, float(f.target.norm(np.asarray(avg) - f.vectors[s])))
            else:
                err = max(err, abs(float(avg) - float(f.values[s])))
        rows.append((float(h), err))
        worst = max(worst, err)
    return DifferentiationReport(per_scale=tuple(rows), max_error=worst)


@dataclass(frozen=True)
class Weak11Report:
    weak_norm: float   # weak-L1 quasi-norm of the maximal field
    input_size: float  # L1 mass of |f|, or the representation certificate
    constant: float    # their ratio


def weak11_constant(
    grid: GridSpace,
    data: Union[ScalarField, np.ndarray, TensorRep],
    scales: Optional[Iterable[float]] = None,
) -> Weak11Report:
    """Observed weak-(1,1) ratio of the maximal operator on one input.

    Scalar input: weak-L1 norm of the maximal field over the L1 mass of
    the input.  Tensor-representation input: weak-L1 norm of the vector
    maximal field of its atom-wise contraction over the representation's
    cost certificate.
    """
    space = grid.to_measure_space()
    if isinstance(data, TensorRep):
        mfield = vector_maximal(grid, j_map(data, space), scales)
        size = profile_value(data, space)
    else:
        values = data.values if isinstance(data, ScalarField) else np.asarray(data, dtype=float)
        mfield = hl_maximal(grid, values, scales)
        size = float(np.sum(space.weights * np.abs(values)))
    if size <= 0.0:
        raise InputError("weak-(1,1) ratio needs a nonzero input")
    weak = weak_l1_value(space, mfield)
    return Weak11Report(weak_norm=weak, input_size=size, constant=weak / size)


@dataclass(frozen=True)
class DominationReport:
    max_gap: float        # max over cells of M_vec - dominator (<= 0 up to rounding)
    argmax_cell: int
    maximal_at_argmax: float
    dominator_at_argmax: float


def series_domination_report(
    rep: TensorRep,
    grid: GridSpace,
    scales: Optional[Iterable[float]] = None,
) -> DominationReport:
    """Check M_vec(J rep) <= lam(( ||x_j|| * M f_j )_j) cell by cell.

    The right-hand side applies the representation's cost gauge to the
    per-term scalar maximal fields, weighted by the term vectors' norms;
    the left-hand side is the vector maximal field of the contraction.
    """
    space = grid.to_measure_space()
    mvec = vector_maximal(grid, j_map(rep, space), scales).values
    xnorms = rep.target.norms(rep.xs)
    cols = [
        xnorms[j] * hl_maximal(grid, rep.fs[j], scales).values
        for j in range(rep.n_terms)
    ]
    rows = np.stack(cols, axis=1)
    dom = gauge_values_rows(rep.lam, counting_space(rep.n_terms), rows)
    gap = mvec - dom
    k = int(np.argmax(gap))
    return DominationReport(
        max_gap=float(gap[k]),
        argmax_cell=k,
        maximal_at_argmax=float(mvec[k]),
        dominator_at_argmax=float(dom[k]),
    )
