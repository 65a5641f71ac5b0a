"""Uniform square rasters on a slice plane C_I and scalar fields on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SliceGrid", "GridField"]


@dataclass(frozen=True)
class SliceGrid:
    """Node-centered square raster over [alpha_min, alpha_max] x [beta_min, beta_max].

    Spacing must be uniform and equal in both directions.
    """

    alpha_min: float
    alpha_max: float
    beta_min: float
    beta_max: float
    nx: int
    ny: int

    def __post_init__(self):
        hx = (self.alpha_max - self.alpha_min) / (self.nx - 1)
        hy = (self.beta_max - self.beta_min) / (self.ny - 1)
        if abs(hx - hy) > 1e-12 * max(abs(hx), abs(hy)):
            raise ValueError(f"grid cells must be square: hx={hx} hy={hy}")

    @property
    def h(self):
        return (self.alpha_max - self.alpha_min) / (self.nx - 1)

    @staticmethod
    def square(center, half_width, h):
        """Square grid of spacing ~h centered at a complex point."""
        n = int(round(2 * half_width / h)) + 1
        cx, cy = center.real, center.imag
        return SliceGrid(cx - half_width, cx + half_width,
                         cy - half_width, cy + half_width, n, n)

    def alphas(self):
        return np.linspace(self.alpha_min, self.alpha_max, self.nx)

    def betas(self):
        return np.linspace(self.beta_min, self.beta_max, self.ny)

    def mesh(self):
        """Complex node coordinates, shape (ny, nx); row = beta, col = alpha."""
        a, b = np.meshgrid(self.alphas(), self.betas())
        return a + 1j * b

    def to_json(self):
        return {
            "alpha_min": self.alpha_min, "alpha_max": self.alpha_max,
            "beta_min": self.beta_min, "beta_max": self.beta_max,
            "nx": self.nx, "ny": self.ny,
        }


class GridField:
    """Scalar field on a SliceGrid with an explicit mask of invalid nodes."""

    def __init__(self, grid: SliceGrid, values, mask=None):
        self.grid = grid
        self.values = np.asarray(values, dtype=float)
        if self.values.shape != (grid.ny, grid.nx):
            raise ValueError("field shape does not match grid")
        if mask is None:
            mask = np.zeros_like(self.values, dtype=bool)
        self.mask = np.asarray(mask, dtype=bool)

    def masked_fraction(self):
        return float(np.mean(self.mask))

    def cell_sum(self):
        """Sum of values * h^2 over unmasked nodes."""
        h2 = self.grid.h ** 2
        return float(np.sum(np.where(self.mask, 0.0, self.values)) * h2)
