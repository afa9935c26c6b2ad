"""Genus-2 surface built from two flat tori glued along an annulus by inversion.

Each torus carries one marked chart disk.  Chart coordinates live on the disk
``|x| <= 8`` (chart units); the open disk of radius 1/8 is removed from each
torus and the remaining annulus ``1/8 <= |x| <= 8`` of side 1 is identified
with the annulus of side 2 through the inversion ``psi(x) = x / |x|^2``.

All heavy operations are vectorized: a point set is a pair of arrays
``(side, xy)`` with ``side`` in {1, 2} and ``xy`` torus coordinates in
[0, 1)^2.  ``SurfacePoint`` is the scalar convenience wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

INNER_RADIUS = 0.125   # chart radius of the removed disk boundary
OUTER_RADIUS = 8.0     # chart radius of the gluing annulus outer edge
LARGE = 1.0e9          # sentinel distance: exceeds every threshold in use
_VALID_TOL = 1e-9      # slack on the removed-disk boundary, chart units

DEFAULT_CHART_SCALE = 1.0 / 512.0


class InvalidPointError(ValueError):
    """Point falls inside a removed disk (not on the surface)."""


class DomainError(ValueError):
    """Input outside the operation's domain."""


def golden_frame() -> np.ndarray:
    """Orthonormal frame aligning the chart axes with the cat-map eigenbasis.

    Column 0 is the contracting eigendirection of [[2,1],[1,1]] (eigenvalue
    (3-sqrt5)/2), column 1 the expanding one.  det = +1.
    """
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    es = np.array([1.0, -phi])
    eu = np.array([1.0, phi - 1.0])
    frame = np.column_stack([es / np.linalg.norm(es), eu / np.linalg.norm(eu)])
    if np.linalg.det(frame) < 0:
        frame[:, 1] = -frame[:, 1]
    return frame


@dataclass(frozen=True, eq=False)
class ChartSpec:
    """One marked chart: side, torus center, scale and orientation frame."""

    side: int
    center: np.ndarray
    scale: float
    frame: np.ndarray

    def __post_init__(self):
        if self.side not in (1, 2):
            raise ValueError("side must be 1 or 2")
        if self.scale <= 0:
            raise ValueError("chart scale must be positive")
        # doubled chart disk (radius 16) must stay well inside one
        # fundamental-domain neighborhood of the center
        if 2.0 * OUTER_RADIUS * self.scale > 0.25 + 1e-12:
            raise ValueError(
                f"chart scale {self.scale} too large: doubled disk leaves the "
                "safe torus neighborhood"
            )
        f = np.asarray(self.frame, dtype=float)
        if f.shape != (2, 2):
            raise ValueError("frame must be 2x2")
        if not np.allclose(f.T @ f, np.eye(2), atol=1e-12):
            raise ValueError("frame must be orthonormal")
        if np.linalg.det(f) < 0:
            raise ValueError("frame must have determinant +1")


@dataclass(frozen=True, eq=False)
class Atlas:
    """The two chart specs; both sides share scale and frame by default."""

    chart1: ChartSpec
    chart2: ChartSpec

    @property
    def scale(self) -> float:
        return self.chart1.scale

    def chart(self, side: int) -> ChartSpec:
        return self.chart1 if side == 1 else self.chart2


def default_atlas(scale: float = DEFAULT_CHART_SCALE) -> Atlas:
    frame = golden_frame()
    center = np.zeros(2)
    return Atlas(
        chart1=ChartSpec(1, center, scale, frame),
        chart2=ChartSpec(2, center, scale, frame),
    )


@dataclass(frozen=True)
class SurfacePoint:
    """A single surface point: side tag plus torus coordinates in [0,1)^2."""

    side: int
    xy: tuple[float, float]

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array([self.side], dtype=np.int8), np.array([self.xy], dtype=float)


def point(side: int, x: float, y: float) -> SurfacePoint:
    return SurfacePoint(int(side), (x % 1.0, y % 1.0))


# ----------------------------------------------------------------------------
# array plumbing


def wrap_disp(d: np.ndarray) -> np.ndarray:
    """Wrap displacements componentwise into [-1/2, 1/2]."""
    return d - np.round(d)


def chart_coords(atlas: Atlas, side_arr: np.ndarray, xy: np.ndarray) -> np.ndarray:
    """Chart coordinates of torus points relative to their own side's chart."""
    spec = atlas.chart1  # both charts share center/scale/frame
    d = wrap_disp(xy - spec.center)
    return (d @ spec.frame) / spec.scale  # rows: frame^T d / s


def torus_coords(atlas: Atlas, chart_xy: np.ndarray) -> np.ndarray:
    """Torus coordinates from chart coordinates (either side)."""
    spec = atlas.chart1
    return (spec.center + (chart_xy @ spec.frame.T) * spec.scale) % 1.0


def chart_radius(atlas: Atlas, side_arr: np.ndarray, xy: np.ndarray) -> np.ndarray:
    spec = atlas.chart1
    d = wrap_disp(xy - spec.center)
    return np.linalg.norm(d, axis=-1) / spec.scale


def inversion(chart_xy: np.ndarray) -> np.ndarray:
    """The gluing inversion x -> x/|x|^2 on the annulus 1/8 <= |x| <= 8.

    Raises DomainError outside the annulus.  Involutive; radius r maps to 1/r.
    """
    x = np.asarray(chart_xy, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    r = np.sqrt(r2)
    if np.any(r < INNER_RADIUS - _VALID_TOL) or np.any(r > OUTER_RADIUS + _VALID_TOL):
        raise DomainError("inversion input outside the annulus 1/8 <= |x| <= 8")
    return x / r2[..., None]


def _psi_raw(chart_xy: np.ndarray) -> np.ndarray:
    r2 = np.sum(chart_xy * chart_xy, axis=-1)
    return chart_xy / r2[..., None]


def psi_jacobian(chart_xy: np.ndarray) -> np.ndarray:
    """Derivative of the inversion, shape (..., 2, 2)."""
    x = np.asarray(chart_xy, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    eye = np.broadcast_to(np.eye(2), x.shape[:-1] + (2, 2))
    outer = x[..., :, None] * x[..., None, :]
    return eye / r2[..., None, None] - 2.0 * outer / (r2 * r2)[..., None, None]


def validate_points(atlas: Atlas, side_arr: np.ndarray, xy: np.ndarray) -> np.ndarray:
    """True where the point lies on the surface (outside its removed disk)."""
    return chart_radius(atlas, side_arr, xy) >= INNER_RADIUS - _VALID_TOL


def canonicalize_arrays(
    atlas: Atlas, side_arr: np.ndarray, xy: np.ndarray, check: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """Canonical representatives for the gluing quotient.

    Own-side chart radius in [1/8, 1) switches to the psi-twin on the other
    side; the tie at radius exactly 1 is stored on side 1.  Idempotent.
    """
    side_arr = np.asarray(side_arr, dtype=np.int8).copy()
    xy = np.asarray(xy, dtype=float) % 1.0
    r = chart_radius(atlas, side_arr, xy)
    if check and np.any(r < INNER_RADIUS - _VALID_TOL):
        bad = np.argmin(r)
        raise InvalidPointError(
            f"point inside removed disk: side {side_arr.flat[bad]}, chart radius {r.flat[bad]:.6g}"
        )
    # the tie band around radius 1 resolves to side 1 deterministically
    tie = np.abs(r - 1.0) <= 1e-12
    switch = ((r < 1.0) & ~tie) | ((side_arr == 2) & tie)
    switch &= r >= INNER_RADIUS - _VALID_TOL
    if np.any(switch):
        cx = chart_coords(atlas, side_arr[switch], xy[switch])
        twin = _psi_raw(cx)
        xy = xy.copy()
        xy[switch] = torus_coords(atlas, twin)
        side_arr[switch] = 3 - side_arr[switch]
    return side_arr, xy


def canonicalize(atlas: Atlas, p: SurfacePoint) -> SurfacePoint:
    s, xy = p.arrays()
    s2, xy2 = canonicalize_arrays(atlas, s, xy)
    return SurfacePoint(int(s2[0]), (float(xy2[0, 0]), float(xy2[0, 1])))


def representations(
    atlas: Atlas, side_arr: np.ndarray, xy: np.ndarray
) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """Per-side torus coordinates of each point, with availability masks.

    A point is representable on its own side always, and on the opposite side
    when it lies in the gluing annulus.
    """
    n = len(side_arr)
    out: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    r = chart_radius(atlas, side_arr, xy)
    in_annulus = (r >= INNER_RADIUS - _VALID_TOL) & (r <= OUTER_RADIUS + _VALID_TOL)
    cx = chart_coords(atlas, side_arr, xy)
    safe = np.where(in_annulus[:, None], cx, 1.0)
    twin_xy = torus_coords(atlas, _psi_raw(safe))
    for side in (1, 2):
        have = np.zeros(n, dtype=bool)
        coords = np.zeros((n, 2))
        native = side_arr == side
        have |= native
        coords[native] = xy[native]
        other = (~native) & in_annulus
        have |= other
        coords[other] = twin_xy[other]
        out[side] = (have, coords)
    return out


def dist_arrays(
    atlas: Atlas,
    side_a: np.ndarray,
    xy_a: np.ndarray,
    side_b: np.ndarray,
    xy_b: np.ndarray,
) -> np.ndarray:
    """Chart-local proxy metric in torus units.

    Minimum over the sides on which both points are representable of the flat
    torus distance; LARGE where no side is shared.
    """
    rep_a = representations(atlas, side_a, xy_a)
    rep_b = representations(atlas, side_b, xy_b)
    n = len(side_a)
    best = np.full(n, LARGE)
    for side in (1, 2):
        ha, ca = rep_a[side]
        hb, cb = rep_b[side]
        both = ha & hb
        if np.any(both):
            d = np.linalg.norm(wrap_disp(ca[both] - cb[both]), axis=-1)
            best[both] = np.minimum(best[both], d)
    return best


def dist(atlas: Atlas, a: SurfacePoint, b: SurfacePoint) -> float:
    sa, xa = a.arrays()
    sb, xb = b.arrays()
    return float(dist_arrays(atlas, sa, xa, sb, xb)[0])


def dist_to_one(
    atlas: Atlas,
    side_arr: np.ndarray,
    xy: np.ndarray,
    side_ref: int,
    xy_ref: np.ndarray,
) -> np.ndarray:
    """Proxy distance from many points to one reference point."""
    n = len(side_arr)
    ref_sides = np.full(n, side_ref, dtype=np.int8)
    ref_xy = np.broadcast_to(np.asarray(xy_ref, dtype=float), (n, 2))
    return dist_arrays(atlas, side_arr, xy, ref_sides, ref_xy)


# ----------------------------------------------------------------------------
# chart-1 polar coordinates on the annulus


def chart1_polar(
    atlas: Atlas, side_arr: np.ndarray, xy: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(theta, rho, ok): chart-1 polar coordinates of annulus points.

    Side-2 points are carried through the inversion.  ``ok`` is False for
    points with no chart-1 representation in the annulus.
    """
    rep = representations(atlas, side_arr, xy)
    have, coords = rep[1]
    cx = chart_coords(atlas, np.ones(len(side_arr), dtype=np.int8), coords)
    rho = np.linalg.norm(cx, axis=-1)
    theta = np.arctan2(cx[:, 1], cx[:, 0])
    ok = have & (rho >= INNER_RADIUS - _VALID_TOL) & (rho <= OUTER_RADIUS + _VALID_TOL)
    return theta, rho, ok


def surface_from_polar(
    atlas: Atlas, theta: np.ndarray, rho: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Canonical surface points from chart-1 polar coordinates on the annulus."""
    theta = np.asarray(theta, dtype=float)
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < INNER_RADIUS - _VALID_TOL) or np.any(rho > OUTER_RADIUS + _VALID_TOL):
        raise DomainError("polar radius outside the annulus")
    cx = np.stack([rho * np.cos(theta), rho * np.sin(theta)], axis=-1)
    xy = torus_coords(atlas, cx)
    side = np.ones(len(np.atleast_1d(theta)), dtype=np.int8)
    return canonicalize_arrays(atlas, side, xy)


# ----------------------------------------------------------------------------
# polar rectangles


@dataclass(frozen=True)
class PolarRect:
    """Rectangle [theta0, theta0+dtheta] x [rho0, rho0+drho] in chart-1 polar."""

    theta0: float
    dtheta: float
    rho0: float
    drho: float
    side: int = 1

    def __post_init__(self):
        if self.dtheta <= 0 or self.drho <= 0:
            raise ValueError("degenerate polar rectangle")
        if self.rho0 < INNER_RADIUS - _VALID_TOL or self.rho0 + self.drho > OUTER_RADIUS + _VALID_TOL:
            raise ValueError("polar rectangle leaves the annulus [1/8, 8]")

    @property
    def theta1(self) -> float:
        return self.theta0 + self.dtheta

    @property
    def rho1(self) -> float:
        return self.rho0 + self.drho

    def contains(self, theta: np.ndarray, rho: np.ndarray, slack: float = 0.0) -> np.ndarray:
        return (
            (theta >= self.theta0 - slack)
            & (theta <= self.theta1 + slack)
            & (rho >= self.rho0 - slack)
            & (rho <= self.rho1 + slack)
        )

    def contains_rect(self, other: "PolarRect") -> bool:
        return (
            self.theta0 <= other.theta0 + 1e-15
            and other.theta1 <= self.theta1 + 1e-15
            and self.rho0 <= other.rho0 + 1e-15
            and other.rho1 <= self.rho1 + 1e-15
        )


def d_rect(index: int, nu: float) -> PolarRect:
    """The marked rectangles around the diagonal ray theta = pi/4.

    index 0: [pi/4 - nu/6, pi/4 + nu/6] x [1/8, 8]
    index 1: [pi/4 - nu/3, pi/4 + nu/3] x [1, 2]
    index 2: [pi/4 - nu/6, pi/4 + nu/6] x [3/2, 3]
    index 3: [pi/4 - nu/2, pi/4 + nu/2] x [1/8, 8]
    """
    if not 0 < nu < np.pi / 2:
        raise ValueError("nu must lie in (0, pi/2)")
    q = np.pi / 4
    if index == 0:
        return PolarRect(q - nu / 6, nu / 3, INNER_RADIUS, OUTER_RADIUS - INNER_RADIUS)
    if index == 1:
        return PolarRect(q - nu / 3, 2 * nu / 3, 1.0, 1.0)
    if index == 2:
        return PolarRect(q - nu / 6, nu / 3, 1.5, 1.5)
    if index == 3:
        return PolarRect(q - nu / 2, nu, INNER_RADIUS, OUTER_RADIUS - INNER_RADIUS)
    raise ValueError("index must be 0..3")


def sample_grid(
    atlas: Atlas, rect: PolarRect, n_theta: int, n_rho: int
) -> tuple[np.ndarray, np.ndarray]:
    """Row-major lattice of canonical surface points covering the rectangle.

    Includes all four corners; rows sweep theta, columns rho.
    """
    if n_theta < 2 or n_rho < 2:
        raise ValueError("need at least a 2x2 lattice")
    thetas = np.linspace(rect.theta0, rect.theta1, n_theta)
    rhos = np.linspace(rect.rho0, rect.rho1, n_rho)
    tt, rr = np.meshgrid(thetas, rhos, indexing="ij")
    return surface_from_polar(atlas, tt.ravel(), rr.ravel())
