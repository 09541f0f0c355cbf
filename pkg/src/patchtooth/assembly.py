"""Assembly of the self-adjoint patch operators.

Inside a patch the operator is the plain heterogeneous second difference over
the interior points i = 1..n.  The rows at i = 1 and i = n reference the edge
values i = 0 and i = n+1, which are eliminated by the inter-patch stencils:
the right-edge bond of patch I couples its i = n row to the i = 1 unknowns of
all patches J with weight w_right[(J - I) mod N], and the left-edge bond
couples i = 1 to the i = n unknowns with w_left.  Every entry carries the
microscale 1/d^2 scaling.

Symmetry comes from three facts: the interior stencil is symmetric, the two
edge stencils are mirrors of each other (w_left[m] = w_right[-m]), and both
sides of every gap see the same bond diffusivity.  The last point is automatic
for single-phase patches with p | n; for general n the phase-shift ensemble
restores it by routing each edge coupling to the member whose phase matches
across the gap (member shifted by -n at the left edge, +n at the right).

Unknown ordering is member-major, then patch, then interior point:

    1D: index = (member * N + I) * n + (i - 1)
    2D: index = ((member * N_y + J) * N_x + I) * (n_x n_y) + (j - 1) n_x + (i - 1)

The wave operator wraps a diffusion operator A into the first-order system
d/dt (u, v) = (v, A u + eps B v), where B is the same patch construction with
unit diffusivities; its matrix is [[0, I], [A, eps B]].
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import geometry
from .coupling import CouplingSpec, weights_for
from .microscale import DiffusivityProfile1D, DiffusivityProfile2D


@dataclass
class AssembledOperator:
    """A dense operator matrix plus enough layout metadata to interpret it."""

    matrix: np.ndarray
    layout: dict
    grid: object = None
    profile: object = None
    coupling: object = None

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    def save_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for row in self.matrix:
                writer.writerow(["%.17g" % v for v in row])


@dataclass
class SymmetryReport:
    defect: float
    scale: float
    relative: float


def symmetry_defect(op) -> SymmetryReport:
    """Largest asymmetry max|L - L^T|, absolute and relative to max|L|."""
    matrix = op.matrix if hasattr(op, "matrix") else np.asarray(op)
    defect = float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0
    scale = float(np.max(np.abs(matrix))) if matrix.size else 0.0
    relative = defect / scale if scale > 0 else 0.0
    return SymmetryReport(defect=defect, scale=scale, relative=relative)


def _raise_on_errors(diagnostics, allow_incompatible):
    errors = [msg for severity, msg in diagnostics if severity == "error"]
    if errors and not allow_incompatible:
        raise ValueError("; ".join(errors))


def assemble_patch_1d(
    grid: geometry.PatchGrid1D,
    profile: DiffusivityProfile1D,
    coupling: CouplingSpec,
    ensemble: bool = False,
    allow_incompatible: bool = False,
) -> AssembledOperator:
    """Assemble the 1D patch operator, single-phase or phase-shift ensemble.

    Args:
        grid: patch geometry (N patches of n points, spacing d).
        profile: p-periodic bond diffusivities.
        coupling: inter-patch interpolation scheme.
        ensemble: simulate all p phase shifts, coupling members across gaps.
        allow_incompatible: assemble even when the compatibility check fails
            (the result is then deliberately asymmetric; used for diagnostics).

    Returns:
        AssembledOperator of dimension (p if ensemble else 1) * N * n.
    """
    diagnostics = geometry.validate_compatibility(grid, profile, ensemble=ensemble)
    _raise_on_errors(diagnostics, allow_incompatible)
    N, n, d = grid.N, grid.n, grid.d
    p = profile.period
    vals = profile.values
    weights = weights_for(coupling, N, grid.r)
    wr, wl = weights.w_right, weights.w_left
    members = p if ensemble else 1
    dim = members * N * n
    L = np.zeros((dim, dim))
    inv_d2 = 1.0 / (d * d)

    def idx(ell, I, i):
        return (ell * N + I) * n + (i - 1)

    for ell in range(members):
        for I in range(N):
            for i in range(1, n + 1):
                row = idx(ell, I, i)
                kr = vals[(i + ell) % p] * inv_d2
                kl = vals[(i - 1 + ell) % p] * inv_d2
                L[row, row] -= kr + kl
                if i < n:
                    L[row, idx(ell, I, i + 1)] += kr
                else:
                    tgt = (ell + n) % p if ensemble else ell
                    for m in range(N):
                        L[row, idx(tgt, (I + m) % N, 1)] += kr * wr[m]
                if i > 1:
                    L[row, idx(ell, I, i - 1)] += kl
                else:
                    src = (ell - n) % p if ensemble else ell
                    for m in range(N):
                        L[row, idx(src, (I + m) % N, n)] += kl * wl[m]

    layout = {
        "kind": "diffusion1d",
        "N": N,
        "n": n,
        "members": members,
        "ensemble": bool(ensemble),
        "ordering": "index = (member*N + patch)*n + (i-1)",
        "diagnostics": diagnostics,
    }
    return AssembledOperator(
        matrix=L, layout=layout, grid=grid, profile=profile, coupling=coupling
    )


def assemble_patch_2d(
    grid: geometry.PatchGrid2D,
    profile: DiffusivityProfile2D,
    coupling: CouplingSpec,
    ensemble: bool = False,
    allow_incompatible: bool = False,
) -> AssembledOperator:
    """Assemble the 2D patch operator on a tensor-product grid.

    The edge eliminations act axis by axis (x edges interpolate over patch
    column I at fixed J and vice versa), and in ensemble mode each crossing
    shifts one phase of the member pair (phi, psi) by the patch size of that
    axis.  Corner values are never referenced by the five-point stencil.
    """
    diagnostics = geometry.validate_compatibility_2d(grid, profile, ensemble=ensemble)
    _raise_on_errors(diagnostics, allow_incompatible)
    gx, gy = grid.x, grid.y
    Nx, nx, dx = gx.N, gx.n, gx.d
    Ny, ny, dy = gy.N, gy.n, gy.d
    px, py = profile.periods
    kx, ky = profile.kx, profile.ky
    wx = weights_for(coupling, Nx, gx.r)
    wy = weights_for(coupling, Ny, gy.r)
    if ensemble:
        # Build-time consistency check of the member permutations.
        from .ensemble import build_permutations_2d

        build_permutations_2d(profile, nx, ny)
    members = px * py if ensemble else 1
    per_patch = nx * ny
    dim = members * Ny * Nx * per_patch
    L = np.zeros((dim, dim))
    ivx = 1.0 / (dx * dx)
    ivy = 1.0 / (dy * dy)

    def idx(e, I, J, i, j):
        return ((e * Ny + J) * Nx + I) * per_patch + (j - 1) * nx + (i - 1)

    for e in range(members):
        phi, psi = divmod(e, py) if ensemble else (0, 0)
        for J in range(Ny):
            for I in range(Nx):
                for j in range(1, ny + 1):
                    for i in range(1, nx + 1):
                        row = idx(e, I, J, i, j)
                        kxr = kx[(i + phi) % px, (j + psi) % py] * ivx
                        kxl = kx[(i - 1 + phi) % px, (j + psi) % py] * ivx
                        kyu = ky[(i + phi) % px, (j + psi) % py] * ivy
                        kyd = ky[(i + phi) % px, (j - 1 + psi) % py] * ivy
                        L[row, row] -= kxr + kxl + kyu + kyd
                        if i < nx:
                            L[row, idx(e, I, J, i + 1, j)] += kxr
                        else:
                            te = ((phi + nx) % px) * py + psi if ensemble else e
                            for m in range(Nx):
                                L[row, idx(te, (I + m) % Nx, J, 1, j)] += (
                                    kxr * wx.w_right[m]
                                )
                        if i > 1:
                            L[row, idx(e, I, J, i - 1, j)] += kxl
                        else:
                            se = ((phi - nx) % px) * py + psi if ensemble else e
                            for m in range(Nx):
                                L[row, idx(se, (I + m) % Nx, J, nx, j)] += (
                                    kxl * wx.w_left[m]
                                )
                        if j < ny:
                            L[row, idx(e, I, J, i, j + 1)] += kyu
                        else:
                            te = phi * py + (psi + ny) % py if ensemble else e
                            for m in range(Ny):
                                L[row, idx(te, I, (J + m) % Ny, i, 1)] += (
                                    kyu * wy.w_right[m]
                                )
                        if j > 1:
                            L[row, idx(e, I, J, i, j - 1)] += kyd
                        else:
                            se = phi * py + (psi - ny) % py if ensemble else e
                            for m in range(Ny):
                                L[row, idx(se, I, (J + m) % Ny, i, ny)] += (
                                    kyd * wy.w_left[m]
                                )

    layout = {
        "kind": "diffusion2d",
        "N": (Nx, Ny),
        "n": (nx, ny),
        "members": members,
        "ensemble": bool(ensemble),
        "ordering": "index = ((member*N_y + J)*N_x + I)*(n_x*n_y) + (j-1)*n_x + (i-1)",
        "diagnostics": diagnostics,
    }
    return AssembledOperator(
        matrix=L, layout=layout, grid=grid, profile=profile, coupling=coupling
    )


def _unit_profile_like(op: AssembledOperator):
    if isinstance(op.profile, DiffusivityProfile2D):
        px, py = op.profile.periods
        if op.layout.get("ensemble"):
            return DiffusivityProfile2D(np.ones((px, py)), np.ones((px, py)))
        return DiffusivityProfile2D(np.ones((1, 1)), np.ones((1, 1)))
    if op.layout.get("ensemble"):
        return DiffusivityProfile1D(np.ones(op.profile.period))
    return DiffusivityProfile1D(np.ones(1))


def assemble_wave(op: AssembledOperator, epsilon: float = 0.02) -> AssembledOperator:
    """Wrap a diffusion patch operator A into the damped wave system.

    The state is (u, v) with d/dt u = v and d/dt v = A u + eps B v, where B is
    the same patch assembly with unit diffusivities (in ensemble mode: the
    unit profile on the same member structure, so dimensions match).  eps = 0
    gives the undamped system with purely imaginary spectrum.
    """
    if op.layout.get("kind") not in ("diffusion1d", "diffusion2d"):
        raise ValueError("wave assembly needs a diffusion patch operator")
    if epsilon < 0:
        raise ValueError("damping must be nonnegative")
    ones = _unit_profile_like(op)
    assemble = (
        assemble_patch_2d if op.layout["kind"] == "diffusion2d" else assemble_patch_1d
    )
    B = assemble(op.grid, ones, op.coupling, ensemble=op.layout.get("ensemble", False))
    if B.dimension != op.dimension:
        raise RuntimeError("damping operator dimension mismatch")
    M = op.dimension
    W = np.block(
        [
            [np.zeros((M, M)), np.eye(M)],
            [op.matrix, epsilon * B.matrix],
        ]
    )
    layout = {
        "kind": "wave",
        "half": M,
        "epsilon": float(epsilon),
        "base": op.layout,
        "ordering": "state (u, v) stacked, u first",
    }
    return AssembledOperator(
        matrix=W, layout=layout, grid=op.grid, profile=op.profile, coupling=op.coupling
    )
