"""Independent brute-force oracles used by the test suite.

Everything here deliberately avoids the library's own geometry and gradient
code paths: point membership goes through matplotlib's Path, areas come from
1-nm cell rasterization, and gradients come from central finite differences.
"""

from __future__ import annotations

import numpy as np
from matplotlib.path import Path

from dfmscore.geometry import Point, Polygon, Rect


def poly_path(poly: Polygon) -> Path:
    verts = [(v.x, v.y) for v in poly.vertices]
    verts.append(verts[0])  # Path(closed=True) consumes the final vertex
    return Path(np.asarray(verts, dtype=float), closed=True)


def cell_mask(poly: Polygon, window: Rect) -> np.ndarray:
    """Boolean (ny, nx) grid over the window's 1-nm cells; True where the cell
    midpoint lies inside the polygon."""
    xs = np.arange(window.lo.x, window.hi.x) + 0.5
    ys = np.arange(window.lo.y, window.hi.y) + 0.5
    if len(xs) == 0 or len(ys) == 0:
        return np.zeros((len(ys), len(xs)), dtype=bool)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    return poly_path(poly).contains_points(pts).reshape(len(ys), len(xs))


def raster_overlap_area(poly: Polygon, window: Rect) -> int:
    """Exact area of poly in window for integer geometry (1-nm cells)."""
    return int(cell_mask(poly, window).sum())


def raster_intersects(poly: Polygon, window: Rect) -> bool:
    return raster_overlap_area(poly, window) > 0


def sample_enclosure(via: Rect, metal: Polygon) -> dict[str, int]:
    """Grid-sampling enclosure oracle: walk 1-nm cells outward from each via
    side and report the shortest run of metal cells."""
    path = poly_path(metal)
    b = metal.bbox

    def inside(x_cells: np.ndarray, y_cells: np.ndarray) -> np.ndarray:
        gx, gy = np.meshgrid(x_cells + 0.5, y_cells + 0.5)
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        return path.contains_points(pts).reshape(len(y_cells), len(x_cells))

    def min_run(grid: np.ndarray) -> int:
        # per row: count of leading True cells; result is the minimum row run
        n_rows, n_cols = grid.shape
        if n_cols == 0:
            return 0
        runs = np.where(~grid, np.arange(n_cols)[None, :], n_cols).min(axis=1)
        return int(runs.min())

    side_y = np.arange(via.lo.y, via.hi.y)
    side_x = np.arange(via.lo.x, via.hi.x)
    xl = np.arange(via.lo.x - 1, b.lo.x - 1, -1)
    xr = np.arange(via.hi.x, b.hi.x)
    yb = np.arange(via.lo.y - 1, b.lo.y - 1, -1)
    yt = np.arange(via.hi.y, b.hi.y)
    return {
        "left": min_run(inside(xl, side_y)) if len(xl) else 0,
        "right": min_run(inside(xr, side_y)) if len(xr) else 0,
        "bottom": min_run(inside(side_x, yb).T) if len(yb) else 0,
        "top": min_run(inside(side_x, yt).T) if len(yt) else 0,
    }


# --- random shape construction for property tests ---------------------------

def random_polygon(rng: np.random.Generator, max_dim: int = 60) -> Polygon:
    """A random simple rectilinear polygon from a family of templates."""
    d = lambda lo, hi: int(rng.integers(lo, hi + 1))
    kind = rng.integers(0, 6)
    w, h = d(12, max_dim), d(12, max_dim)
    x0, y0 = d(-40, 40), d(-40, 40)
    if kind == 0:  # rectangle
        pts = [(0, 0), (w, 0), (w, h), (0, h)]
    elif kind == 1:  # L: notch out of the top-right corner
        nw, nh = d(4, w - 4), d(4, h - 4)
        pts = [(0, 0), (w, 0), (w, h - nh), (w - nw, h - nh), (w - nw, h), (0, h)]
    elif kind == 2:  # T: bar on top of a centered stem
        sw = d(4, w - 8)
        sx = d(2, w - sw - 2)
        sh = d(4, h - 4)
        pts = [(sx, 0), (sx + sw, 0), (sx + sw, sh), (w, sh), (w, h), (0, h), (0, sh), (sx, sh)]
    elif kind == 3:  # U: notch out of the top middle
        nw = d(4, w - 8)
        nx = d(2, w - nw - 2)
        nh = d(4, h - 4)
        pts = [(0, 0), (w, 0), (w, h), (nx + nw, h), (nx + nw, h - nh), (nx, h - nh),
               (nx, h), (0, h)]
    elif kind == 4:  # Z: two offset stacked rects
        ox = d(4, w - 4)
        oh = d(4, h - 4)
        pts = [(0, 0), (w, 0), (w, oh), (ox, oh), (ox, h), (ox - w, h), (ox - w, oh), (0, oh)]
        pts = [(x + w, y) for x, y in pts]  # shift to keep coordinates tame
    else:  # plus / cross
        aw, ah = d(4, w - 8), d(4, h - 8)
        ax, ay = d(2, w - aw - 2), d(2, h - ah - 2)
        pts = [(ax, 0), (ax + aw, 0), (ax + aw, ay), (w, ay), (w, ay + ah),
               (ax + aw, ay + ah), (ax + aw, h), (ax, h), (ax, ay + ah),
               (0, ay + ah), (0, ay), (ax, ay)]
    return Polygon(tuple((x + x0, y + y0) for x, y in pts))


def random_layout_layers(rng: np.random.Generator, n_layers: int = 2,
                         n_polys: int = 8, spread: int = 300) -> dict[str, list[Polygon]]:
    layers: dict[str, list[Polygon]] = {}
    for li in range(n_layers):
        polys = []
        for _ in range(int(rng.integers(0, n_polys + 1))):
            dx = int(rng.integers(-spread, spread))
            dy = int(rng.integers(-spread, spread))
            polys.append(random_polygon(rng).translated(dx, dy))
        layers[f"L{li}"] = polys
    return layers


# --- finite-difference gradient oracle ---------------------------------------

def fd_loss_gradient(w_ih: np.ndarray, w_ho: np.ndarray, inputs: np.ndarray,
                     target: float, step: float = 1e-4) -> tuple[np.ndarray, np.ndarray]:
    """Central finite differences of the halved squared-error loss
    L = (target - out)^2 / 2 with respect to every weight."""

    def loss(wi, wo):
        hidden = 1.0 / (1.0 + np.exp(-(inputs @ wi)))
        out = 1.0 / (1.0 + np.exp(-(hidden @ wo)))
        return 0.5 * (target - out) ** 2

    g_ih = np.zeros_like(w_ih)
    for i in range(w_ih.shape[0]):
        for j in range(w_ih.shape[1]):
            up = w_ih.copy(); up[i, j] += step
            dn = w_ih.copy(); dn[i, j] -= step
            g_ih[i, j] = (loss(up, w_ho) - loss(dn, w_ho)) / (2 * step)
    g_ho = np.zeros_like(w_ho)
    for j in range(w_ho.shape[0]):
        up = w_ho.copy(); up[j] += step
        dn = w_ho.copy(); dn[j] -= step
        g_ho[j] = (loss(w_ih, up) - loss(w_ih, dn)) / (2 * step)
    return g_ih, g_ho
