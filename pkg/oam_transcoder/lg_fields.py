"""Laguerre-Gaussian transverse fields on a polar grid."""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .cavity import CavityParams, mode_waist
from .exceptions import GridError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_N_R = 256
DEFAULT_N_ALPHA = 512
DEFAULT_EXTENT_W = 4.0


@dataclass(frozen=True)
class LGParams:
    """
    Gaussian beam parameters.

    Args:
        w0: Waist radius in metres
        wavelength: Wavelength in metres
    """

    w0: float
    wavelength: float = 795e-9

    def __post_init__(self):
        if not (self.w0 > 0 and self.wavelength > 0):
            raise ValidationError("Waist and wavelength must be positive", field='lg.w0_um')

    @property
    def z_r(self) -> float:
        """Rayleigh range pi w0^2 / lambda."""
        return math.pi * self.w0 ** 2 / self.wavelength

    @property
    def k0(self) -> float:
        return 2.0 * math.pi / self.wavelength

    def beam_radius(self, z: float) -> float:
        return self.w0 * math.sqrt(1.0 + (z / self.z_r) ** 2)

    @classmethod
    def from_cavity(cls, params: CavityParams) -> 'LGParams':
        """Beam matched to the cavity eigenmode."""
        return cls(w0=mode_waist(params), wavelength=params.wavelength)


@dataclass(frozen=True)
class IntensityGrid:
    """Intensity sampled on a uniform polar grid (rows are radii, columns are angles)."""

    r: np.ndarray
    alpha: np.ndarray
    values: np.ndarray
    extent: float

    def __post_init__(self):
        if self.values.shape != (self.r.size, self.alpha.size):
            raise GridError(f"Grid values have shape {self.values.shape}, expected {(self.r.size, self.alpha.size)}")
        if self.alpha.size % 2:
            raise GridError("Angular sample count must be even", field='lg.n_alpha')
        if np.any(self.values < 0):
            raise GridError("Intensity grid contains negative values")

    @property
    def n_r(self) -> int:
        return self.r.size

    @property
    def n_alpha(self) -> int:
        return self.alpha.size

    def rows(self) -> List[Tuple[float, float, float]]:
        """(r, alpha, intensity) triples in row-major order."""
        rr, aa = np.meshgrid(self.r, self.alpha, indexing='ij')
        return list(zip(rr.ravel().tolist(), aa.ravel().tolist(), self.values.ravel().tolist()))

    def grayscale(self, levels: int = 255) -> np.ndarray:
        """Values scaled to integers in [0, levels]."""
        peak = self.values.max()
        if peak <= 0:
            return np.zeros(self.values.shape, dtype=int)
        return np.rint(self.values / peak * levels).astype(int)


def lg_field(params: LGParams, p: int, l: int, z: float, r, alpha):
    """
    Complex LG_{p,l} field amplitude.

    Args:
        params: Beam parameters
        p: Radial index
        l: Topological charge
        z: Axial distance from the waist in metres
        r: Radius in metres (scalar or array, >= 0)
        alpha: Azimuthal angle in radians (broadcast against r)

    Returns:
        Complex field, unit power normalization
    """
    if p < 0:
        raise ValidationError(f"Radial index must be non-negative, got p={p}", field='p')
    r = np.asarray(r, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if np.any(r < 0):
        raise ValidationError("Radius must be non-negative", field='r')

    m = abs(l)
    w = params.beam_radius(z)
    z_r = params.z_r
    # sqrt(2 p! / (pi (p + |l|)!)) / w in log space
    log_norm = 0.5 * (math.log(2.0) + gammaln(p + 1) - math.log(math.pi) - gammaln(p + m + 1)) - math.log(w)
    x = 2.0 * r ** 2 / w ** 2
    amplitude = np.exp(log_norm) * (math.sqrt(2.0) * r / w) ** m * eval_genlaguerre(p, m, x) * np.exp(-r ** 2 / w ** 2)
    curvature = params.k0 * r ** 2 * z / (2.0 * (z ** 2 + z_r ** 2))
    gouy = (2 * p + m + 1) * math.atan2(z, z_r)
    field = amplitude * np.exp(1j * (l * alpha + curvature - gouy))
    return complex(field) if field.ndim == 0 else field


def quadrature_grid(extent: float, n_r: int = DEFAULT_N_R, n_alpha: int = DEFAULT_N_ALPHA):
    """
    Polar quadrature nodes: Gauss-Legendre in r, uniform in alpha.

    Returns:
        (r nodes, r weights including the r Jacobian, alpha nodes, alpha step)
    """
    if n_r < 2 or n_alpha < 2 or n_alpha % 2:
        raise GridError(f"Invalid grid size n_r={n_r}, n_alpha={n_alpha}", field='lg.n_alpha')
    nodes, weights = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * extent * (nodes + 1.0)
    weights = 0.5 * extent * weights * r
    alpha = np.arange(n_alpha) * (2.0 * math.pi / n_alpha)
    return r, weights, alpha, 2.0 * math.pi / n_alpha


def mode_overlap(
    params_a: LGParams,
    mode_a: Tuple[int, int],
    params_b: LGParams,
    mode_b: Tuple[int, int],
    z: float = 0.0,
    n_r: int = DEFAULT_N_R,
    n_alpha: int = DEFAULT_N_ALPHA,
    extent: Optional[float] = None,
) -> complex:
    """
    Transverse overlap <a|b> by numerical quadrature.

    Args:
        params_a, params_b: Beam parameters of each mode
        mode_a, mode_b: (p, l) of each mode
        z: Common axial plane
        n_r, n_alpha: Grid size
        extent: Radial extent in metres, 4 beam radii of the wider beam by default

    Returns:
        Complex overlap

    Raises:
        GridError: when the grid cannot resolve either mode
    """
    (p_a, l_a), (p_b, l_b) = mode_a, mode_b
    w_max = max(params_a.beam_radius(z), params_b.beam_radius(z))
    extent = DEFAULT_EXTENT_W * w_max if extent is None else extent
    if extent < DEFAULT_EXTENT_W * w_max * (1.0 - 1e-12):
        raise GridError(f"Radial extent {extent:.4g} m is below {DEFAULT_EXTENT_W:g} beam radii", field='lg.extent_w')
    if abs(l_a - l_b) >= n_alpha // 2:
        raise GridError(f"{n_alpha} angular samples cannot resolve charge difference {l_a - l_b}", field='lg.n_alpha')

    r, weights, alpha, d_alpha = quadrature_grid(extent, n_r, n_alpha)
    rr, aa = np.meshgrid(r, alpha, indexing='ij')
    field_a = lg_field(params_a, p_a, l_a, z, rr, aa)
    field_b = lg_field(params_b, p_b, l_b, z, rr, aa)
    integrand = np.conj(field_a) * field_b
    return complex(np.sum(integrand.sum(axis=1) * weights) * d_alpha)


def mirror_interference_pattern(
    params: LGParams,
    l: int,
    z: float = 0.0,
    n_r: int = DEFAULT_N_R,
    n_alpha: int = DEFAULT_N_ALPHA,
    extent_w: float = DEFAULT_EXTENT_W,
    rotation: float = 0.0,
) -> IntensityGrid:
    """
    Intensity of a beam interfered with its own mirror image, |LG_{0,l} + LG_{0,-l}|^2.

    `rotation` turns the whole pattern, as when the camera or the image is rotated.
    """
    if l < 0:
        raise ValidationError(f"Mirror pattern needs l >= 0, got {l}", field='l')
    if n_alpha % 2:
        raise GridError("Angular sample count must be even", field='lg.n_alpha')
    extent = extent_w * params.beam_radius(z)
    r = np.linspace(0.0, extent, n_r)
    alpha = np.arange(n_alpha) * (2.0 * math.pi / n_alpha)
    rr, aa = np.meshgrid(r, alpha - rotation, indexing='ij')
    field = lg_field(params, 0, l, z, rr, aa) + lg_field(params, 0, -l, z, rr, aa)
    return IntensityGrid(r=r, alpha=alpha, values=np.abs(field) ** 2, extent=extent)


def count_fringes(grid: IntensityGrid) -> int:
    """
    Number of azimuthal lobes on the brightest ring.

    The lobes of a mirror-image pattern are what the lab calls radial fringes; the count
    is the dominant nonzero harmonic of the angular profile, 0 for a uniform ring.
    """
    ring_power = grid.values.mean(axis=1)
    if not np.any(ring_power > 0):
        raise GridError("No bright ring found in the intensity grid")
    ring = int(np.argmax(ring_power))
    harmonics = np.abs(np.fft.rfft(grid.values[ring]))
    if harmonics[1:].max() <= 1e-9 * harmonics[0]:
        return 0
    return int(np.argmax(harmonics[1:])) + 1
