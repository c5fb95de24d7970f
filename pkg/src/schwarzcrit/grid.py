"""Polar sampling grids on a closed disk ``|z| <= radius``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class GridSpec:
    radius: float = 0.99
    radial_steps: int = 32
    angular_steps: int = 256

    def __post_init__(self):
        if not (0.0 < self.radius < 1.0):
            raise DomainError(f"grid radius must lie in (0, 1), got {self.radius}")
        if self.radial_steps < 8 or self.angular_steps < 8:
            raise DomainError("grid needs at least 8 radial and 8 angular steps")

    def points(self) -> np.ndarray:
        """Origin plus ``radial_steps`` rings of ``angular_steps`` points, flattened.

        The outermost ring lies on ``|z| = radius``; ring order is inner to outer.
        """
        r = self.radius * np.arange(1, self.radial_steps + 1) / self.radial_steps
        theta = 2.0 * np.pi * np.arange(self.angular_steps) / self.angular_steps
        ring = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
        return np.concatenate(([0j], ring))
