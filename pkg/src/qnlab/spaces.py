"""Finite-dimensional quasi-normed targets for vector-valued fields.

A target space is R^dim equipped with one of:

  * the l_q quasi-norm, q > 0  (a genuine norm when q >= 1),
  * the weak-l1 quasi-norm over `dim` atoms of unit mass,
    ||v|| = max_k k * v*_k with v* the decreasing rearrangement of |v|,
  * a caller-supplied evaluator (``custom``).

The modulus of concavity kappa is the smallest constant with
||x + y|| <= kappa (||x|| + ||y||); for l_q with q < 1 it equals
2^(1/q - 1), for weak-l1 it is 2, for norms it is 1.  For custom
evaluators the stored value is a caller-asserted bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InputError

_HOMOGENEITY_RTOL = 1e-12
# fixed probe set used by validation; not configurable on purpose
_PROBE_SCALES = (2.0, 0.5, 3.7)


def weak_l1_vector_norm(v: np.ndarray) -> float:
    """max_k k * (k-th largest |entry|), the weak-l1 norm over unit atoms."""
    a = np.sort(np.abs(np.asarray(v, dtype=float)).ravel())[::-1]
    if a.size == 0:
        return 0.0
    return float(np.max(a * np.arange(1, a.size + 1)))


@dataclass(frozen=True)
class QuasiNormedSpace:
    """R^dim with an l_q, weak-l1, or custom quasi-norm."""

    dim: int
    kind: str = "lq"  # "lq" | "weak_l1" | "custom"
    q: Optional[float] = None
    evaluator: Optional[Callable[[np.ndarray], float]] = None
    kappa_custom: Optional[float] = None
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InputError("space dimension must be >= 1")
        if self.kind == "lq":
            if self.q is None or self.q <= 0:
                raise InputError("lq target needs an exponent q > 0")
        elif self.kind == "weak_l1":
            pass
        elif self.kind == "custom":
            if self.evaluator is None:
                raise InputError("custom target needs an evaluator")
            if self.kappa_custom is None or self.kappa_custom < 1:
                raise InputError("custom target needs kappa >= 1")
        else:
            raise InputError(f"unknown target kind {self.kind!r}")
        self._validate()

    # -- norm evaluation ----------------------------------------------------

    def norm(self, v) -> float:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise InputError(f"expected vector of shape ({self.dim},), got {v.shape}")
        if self.kind == "lq":
            q = self.q
            if q == 1.0:
                return float(np.sum(np.abs(v)))
            if q == 2.0:
                return float(np.linalg.norm(v))
            return float(np.sum(np.abs(v) ** q) ** (1.0 / q))
        if self.kind == "weak_l1":
            return weak_l1_vector_norm(v)
        return float(self.evaluator(v))

    def norms(self, vs: np.ndarray) -> np.ndarray:
        """Row-wise norms of an (n, dim) array."""
        vs = np.asarray(vs, dtype=float)
        if vs.ndim != 2 or vs.shape[1] != self.dim:
            raise InputError(f"expected (n, {self.dim}) array, got {vs.shape}")
        if self.kind == "lq":
            q = self.q
            if q == 1.0:
                return np.sum(np.abs(vs), axis=1)
            if q == 2.0:
                return np.linalg.norm(vs, axis=1)
            return np.sum(np.abs(vs) ** q, axis=1) ** (1.0 / q)
        if self.kind == "weak_l1":
            a = np.sort(np.abs(vs), axis=1)[:, ::-1]
            ranks = np.arange(1, vs.shape[1] + 1)
            return np.max(a * ranks, axis=1)
        return np.array([self.evaluator(v) for v in vs], dtype=float)

    @property
    def kappa(self) -> float:
        if self.kind == "lq":
            return 1.0 if self.q >= 1.0 else 2.0 ** (1.0 / self.q - 1.0)
        if self.kind == "weak_l1":
            return 2.0
        return float(self.kappa_custom)

    @property
    def is_banach(self) -> bool:
        return self.kappa <= 1.0

    # -- construction-time sanity checks ------------------------------------

    def _validate(self) -> None:
        basis = np.eye(self.dim)
        for e in basis:
            n = self.norm(e)
            if not (n > 0.0) or not np.isfinite(n):
                raise InputError("norm must be positive and finite on basis vectors")
        # homogeneity on a fixed deterministic probe set
        probe = np.cos(np.arange(1, self.dim + 1, dtype=float))
        base = self.norm(probe)
        if base > 0:
            for t in _PROBE_SCALES:
                if abs(self.norm(t * probe) - t * base) > _HOMOGENEITY_RTOL * t * base:
                    raise InputError("norm evaluator is not positively homogeneous")


def lq_space(dim: int, q: float) -> QuasiNormedSpace:
    return QuasiNormedSpace(dim=dim, kind="lq", q=float(q), name=f"l{q:g}^{dim}")


def weak_l1_space(dim: int) -> QuasiNormedSpace:
    return QuasiNormedSpace(dim=dim, kind="weak_l1", name=f"weakL1^{dim}")
