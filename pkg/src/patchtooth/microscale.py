"""Periodic heterogeneous diffusivity fields and full-lattice reference operators.

The microscale model is diffusion on a lattice of spacing d,

    d^2 du_i/dt = kappa_{i+1/2} (u_{i+1} - u_i) + kappa_{i-1/2} (u_{i-1} - u_i),

with p-periodic positive diffusivities located on the bonds between lattice
points, kappa_{m+1/2} = values[m mod p].  The 2D analogue is the five-point
stencil with two bond fields, kx[i][j] = kappa_{i+1/2, j} for horizontal bonds
and ky[i][j] = kappa_{i, j+1/2} for vertical bonds, both (p_x, p_y) periodic.

The full-lattice operators built here serve as the consistency references for
the patch scheme.  They are symmetric by construction, annihilate constants,
and have nonpositive spectra.

Index convention: physical lattice nodes are labelled from 1, so matrix row g
describes node g+1 and

    A[g][(g+1) mod M] = values[(g+1) mod p] / d^2,
    A[g][(g-1) mod M] = values[g mod p] / d^2.

With this labelling the patch operator at size ratio r = 1 equals the
full-lattice operator entry for entry (patch-local bonds use the same 1-based
rule).  The 2D operator applies the same shift in both axes and orders the
unknowns row-major over (i, j) with i fastest: storage index = j*M_x + i.

Random profiles are drawn from numpy.random.default_rng (the PCG64 generator),
which is versioned and reproducible across platforms for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse


@dataclass
class DiffusivityProfile1D:
    """Positive p-periodic bond diffusivities, values[m] = kappa_{m+1/2}."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("diffusivity profile must be a nonempty 1D sequence")
        if not np.all(self.values > 0.0):
            raise ValueError("all diffusivities must be strictly positive")

    @property
    def period(self) -> int:
        return int(self.values.size)

    def to_json(self) -> dict:
        return {"period": self.period, "values": [float(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj: dict) -> "DiffusivityProfile1D":
        profile = cls(np.asarray(obj["values"], dtype=float))
        if "period" in obj and int(obj["period"]) != profile.period:
            raise ValueError("period field disagrees with len(values)")
        return profile


@dataclass
class DiffusivityProfile2D:
    """Bond diffusivities on a doubly periodic 2D lattice.

    kx[i, j] = kappa_{i+1/2, j} and ky[i, j] = kappa_{i, j+1/2}, both of shape
    (p_x, p_y) and indexed modulo the periods in both axes.
    """

    kx: np.ndarray
    ky: np.ndarray

    def __post_init__(self):
        self.kx = np.asarray(self.kx, dtype=float)
        self.ky = np.asarray(self.ky, dtype=float)
        if self.kx.ndim != 2 or self.kx.shape != self.ky.shape:
            raise ValueError("kx and ky must be 2D arrays of identical shape")
        if not (np.all(self.kx > 0.0) and np.all(self.ky > 0.0)):
            raise ValueError("all diffusivities must be strictly positive")

    @property
    def periods(self) -> tuple[int, int]:
        return (int(self.kx.shape[0]), int(self.kx.shape[1]))

    def kappa_x_at(self, i: int, j: int) -> float:
        """kappa_{i+1/2, j} with modular indices."""
        px, py = self.periods
        return float(self.kx[i % px, j % py])

    def kappa_y_at(self, i: int, j: int) -> float:
        """kappa_{i, j+1/2} with modular indices."""
        px, py = self.periods
        return float(self.ky[i % px, j % py])

    def to_json(self) -> dict:
        return {
            "periods": list(self.periods),
            "kx": self.kx.tolist(),
            "ky": self.ky.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DiffusivityProfile2D":
        profile = cls(np.asarray(obj["kx"], float), np.asarray(obj["ky"], float))
        if "periods" in obj and tuple(obj["periods"]) != profile.periods:
            raise ValueError("periods field disagrees with the array shapes")
        return profile


def kappa_at(profile: DiffusivityProfile1D, half_index: int) -> float:
    """Bond diffusivity kappa_{m+1/2} for any integer m, wrapping modulo p."""
    return float(profile.values[half_index % profile.period])


def _full_1d_matrix(profile: DiffusivityProfile1D, M: int, d: float) -> np.ndarray:
    vals = profile.values
    p = profile.period
    A = np.zeros((M, M))
    inv_d2 = 1.0 / (d * d)
    for g in range(M):
        right = vals[(g + 1) % p] * inv_d2
        left = vals[g % p] * inv_d2
        A[g, (g + 1) % M] += right
        A[g, (g - 1) % M] += left
        A[g, g] -= right + left
    return A


def full_lattice_operator_1d(profile: DiffusivityProfile1D, M: int, d: float = 1.0):
    """Periodic heterogeneous second-difference operator on M lattice points.

    Args:
        profile: p-periodic bond diffusivities; M must be divisible by p so the
            periodic wrap is seamless.
        M: number of lattice points, at least 3.
        d: lattice spacing; all entries carry the 1/d^2 scaling.

    Returns:
        AssembledOperator holding the dense symmetric M x M matrix.
    """
    if M < 3:
        raise ValueError("full lattice needs at least 3 points")
    if M % profile.period != 0:
        raise ValueError(
            f"point count {M} not divisible by diffusivity period "
            f"{profile.period}; the heterogeneity would be discontinuous "
            "at the periodic wrap"
        )
    if d <= 0:
        raise ValueError("lattice spacing must be positive")
    from .assembly import AssembledOperator

    A = _full_1d_matrix(profile, M, d)
    layout = {
        "kind": "full1d",
        "M": M,
        "d": d,
        "ordering": "storage row g is physical node g+1",
    }
    return AssembledOperator(matrix=A, layout=layout, profile=profile)


def _full_2d_entries(profile: DiffusivityProfile2D, shape, spacing):
    """Yield (row, col, value) triples of the five-point operator."""
    Mx, My = shape
    dx, dy = spacing
    px, py = profile.periods
    ivx = 1.0 / (dx * dx)
    ivy = 1.0 / (dy * dy)
    kx, ky = profile.kx, profile.ky

    def idx(i, j):
        return (j % My) * Mx + (i % Mx)

    for j in range(My):
        for i in range(Mx):
            a = idx(i, j)
            kxr = kx[(i + 1) % px, (j + 1) % py] * ivx
            kxl = kx[i % px, (j + 1) % py] * ivx
            kyu = ky[(i + 1) % px, (j + 1) % py] * ivy
            kyd = ky[(i + 1) % px, j % py] * ivy
            yield a, idx(i + 1, j), kxr
            yield a, idx(i - 1, j), kxl
            yield a, idx(i, j + 1), kyu
            yield a, idx(i, j - 1), kyd
            yield a, a, -(kxr + kxl + kyu + kyd)


def _check_2d_args(profile, shape, spacing):
    Mx, My = int(shape[0]), int(shape[1])
    if np.isscalar(spacing):
        spacing = (float(spacing), float(spacing))
    dx, dy = float(spacing[0]), float(spacing[1])
    px, py = profile.periods
    if Mx % px != 0 or My % py != 0:
        raise ValueError(
            f"lattice shape ({Mx}, {My}) not divisible by periods ({px}, {py})"
        )
    if Mx < 3 or My < 3:
        raise ValueError("full 2D lattice needs at least 3 points per axis")
    if dx <= 0 or dy <= 0:
        raise ValueError("lattice spacings must be positive")
    return (Mx, My), (dx, dy)


def full_lattice_operator_2d(profile: DiffusivityProfile2D, shape, spacing=(1.0, 1.0)):
    """Dense five-point heterogeneous diffusion operator, doubly periodic.

    Unknowns are ordered row-major over (i, j) with i fastest, storage index
    j*M_x + i.  Entry scalings are 1/d_x^2 for horizontal and 1/d_y^2 for
    vertical bonds.
    """
    (Mx, My), (dx, dy) = _check_2d_args(profile, shape, spacing)
    from .assembly import AssembledOperator

    size = Mx * My
    A = np.zeros((size, size))
    for a, b, v in _full_2d_entries(profile, (Mx, My), (dx, dy)):
        A[a, b] += v
    layout = {
        "kind": "full2d",
        "shape": (Mx, My),
        "spacing": (dx, dy),
        "ordering": "row-major over (i, j), i fastest: index = j*M_x + i",
    }
    return AssembledOperator(matrix=A, layout=layout, profile=profile)


def full_lattice_operator_2d_sparse(profile, shape, spacing=(1.0, 1.0)):
    """Sparse CSR variant of full_lattice_operator_2d for large lattices."""
    (Mx, My), (dx, dy) = _check_2d_args(profile, shape, spacing)
    rows, cols, vals = [], [], []
    for a, b, v in _full_2d_entries(profile, (Mx, My), (dx, dy)):
        rows.append(a)
        cols.append(b)
        vals.append(v)
    size = Mx * My
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(size, size))


def random_lognormal_profile(p: int, sigma: float, seed: int) -> DiffusivityProfile1D:
    """Seeded log-normal profile, values[l] = exp(sigma * z_l), z standard normal.

    Uses numpy.random.default_rng(seed) (PCG64), so a fixed seed reproduces the
    profile bit for bit on any platform.
    """
    if p < 1:
        raise ValueError("period must be at least 1")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    return DiffusivityProfile1D(np.exp(sigma * rng.standard_normal(p)))


def random_lognormal_profile_2d(px: int, py: int, sigma: float, seed: int):
    """2D variant of random_lognormal_profile; kx is drawn before ky."""
    if px < 1 or py < 1:
        raise ValueError("periods must be at least 1")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    kx = np.exp(sigma * rng.standard_normal((px, py)))
    ky = np.exp(sigma * rng.standard_normal((px, py)))
    return DiffusivityProfile2D(kx, ky)
