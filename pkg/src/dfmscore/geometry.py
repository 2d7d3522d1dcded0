"""Axis-aligned layout geometry.

Integer-nanometer points, rectangles, rectilinear polygons, layered layouts,
a line-oriented text format for them, and rectangular window queries with
optional clipping. All shapes are immutable after construction; queries are
read-only and safe to run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

import numpy as np

COORD_MIN = -(2**63)
COORD_MAX = 2**63 - 1


class GeometryError(ValueError):
    """A shape violates a geometric invariant."""


class LayoutParseError(ValueError):
    """Layout document is malformed; message carries the offending line."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


def _check_coord(value) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise GeometryError(f"coordinate {value!r} is not an integer")
    value = int(value)
    if not COORD_MIN <= value <= COORD_MAX:
        raise GeometryError(f"coordinate {value} outside 64-bit signed range")
    return value


class Point(NamedTuple):
    x: int
    y: int

    def translated(self, dx: int, dy: int) -> "Point":
        return Point(self.x + dx, self.y + dy)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle with positive area (lo strictly below hi)."""

    lo: Point
    hi: Point

    def __post_init__(self):
        lo = Point(_check_coord(self.lo[0]), _check_coord(self.lo[1]))
        hi = Point(_check_coord(self.hi[0]), _check_coord(self.hi[1]))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (lo.x < hi.x and lo.y < hi.y):
            raise GeometryError(f"degenerate rectangle {lo} .. {hi}")

    @classmethod
    def from_coords(cls, x0: int, y0: int, x1: int, y1: int) -> "Rect":
        return cls(Point(x0, y0), Point(x1, y1))

    @property
    def width(self) -> int:
        return self.hi.x - self.lo.x

    @property
    def height(self) -> int:
        return self.hi.y - self.lo.y

    @property
    def area(self) -> int:
        return self.width * self.height

    def coords(self) -> tuple[int, int, int, int]:
        return (self.lo.x, self.lo.y, self.hi.x, self.hi.y)

    def intersects(self, other: "Rect") -> bool:
        """Positive-area overlap; a shared edge or corner does not count."""
        return (self.lo.x < other.hi.x and other.lo.x < self.hi.x
                and self.lo.y < other.hi.y and other.lo.y < self.hi.y)

    def closed_intersects(self, other: "Rect") -> bool:
        """Closed-area overlap; boundary touch counts."""
        return (self.lo.x <= other.hi.x and other.lo.x <= self.hi.x
                and self.lo.y <= other.hi.y and other.lo.y <= self.hi.y)

    def intersection(self, other: "Rect") -> "Rect | None":
        """The overlap rectangle, or None when the overlap has zero area."""
        if not self.intersects(other):
            return None
        return Rect(Point(max(self.lo.x, other.lo.x), max(self.lo.y, other.lo.y)),
                    Point(min(self.hi.x, other.hi.x), min(self.hi.y, other.hi.y)))

    def contains_rect(self, other: "Rect") -> bool:
        return (self.lo.x <= other.lo.x and other.hi.x <= self.hi.x
                and self.lo.y <= other.lo.y and other.hi.y <= self.hi.y)

    def contains_point_strict(self, p: Point) -> bool:
        return self.lo.x < p.x < self.hi.x and self.lo.y < p.y < self.hi.y

    def translated(self, dx: int, dy: int) -> "Rect":
        return Rect(self.lo.translated(dx, dy), self.hi.translated(dx, dy))

    def expanded(self, margin: int) -> "Rect":
        return Rect(Point(self.lo.x - margin, self.lo.y - margin),
                    Point(self.hi.x + margin, self.hi.y + margin))

    def to_polygon(self) -> "Polygon":
        return Polygon(((self.lo.x, self.lo.y), (self.hi.x, self.lo.y),
                        (self.hi.x, self.hi.y), (self.lo.x, self.hi.y)))


def _signed_area2(vertices: tuple[Point, ...]) -> int:
    """Twice the signed shoelace area; positive for counter-clockwise."""
    total = 0
    n = len(vertices)
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        total += a.x * b.y - b.x * a.y
    return total


def _segments_touch(a0: Point, a1: Point, b0: Point, b1: Point) -> bool:
    """Closed contact between two axis-aligned segments."""
    a_horiz = a0.y == a1.y
    b_horiz = b0.y == b1.y
    if a_horiz and b_horiz:
        if a0.y != b0.y:
            return False
        ax0, ax1 = sorted((a0.x, a1.x))
        bx0, bx1 = sorted((b0.x, b1.x))
        return ax0 <= bx1 and bx0 <= ax1
    if not a_horiz and not b_horiz:
        if a0.x != b0.x:
            return False
        ay0, ay1 = sorted((a0.y, a1.y))
        by0, by1 = sorted((b0.y, b1.y))
        return ay0 <= by1 and by0 <= ay1
    if a_horiz:
        h0, h1, v0, v1 = a0, a1, b0, b1
    else:
        h0, h1, v0, v1 = b0, b1, a0, a1
    hx0, hx1 = sorted((h0.x, h1.x))
    vy0, vy1 = sorted((v0.y, v1.y))
    return hx0 <= v0.x <= hx1 and vy0 <= h0.y <= vy1


@dataclass
class Polygon:
    """Simple rectilinear polygon, closed implicitly, normalized to
    counter-clockwise orientation with a canonical start vertex."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(Point(_check_coord(x), _check_coord(y)) for x, y in self.vertices)
        if len(verts) < 4:
            raise GeometryError(f"polygon needs at least 4 vertices, got {len(verts)}")
        n = len(verts)
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            if a == b:
                raise GeometryError(f"repeated consecutive vertex {a}")
            if a.x != b.x and a.y != b.y:
                raise GeometryError(f"non-rectilinear edge {a} -> {b}")
        for i in range(n):
            prev = verts[(i - 1) % n]
            cur = verts[i]
            nxt = verts[(i + 1) % n]
            if (prev.x == cur.x) == (cur.x == nxt.x):
                raise GeometryError(f"consecutive edges at {cur} do not alternate "
                                    "horizontal/vertical")
        area2 = _signed_area2(verts)
        if area2 == 0:
            raise GeometryError("polygon has zero area")
        if area2 < 0:
            verts = verts[:1] + tuple(reversed(verts[1:]))
        start = min(range(n), key=lambda i: verts[i])
        verts = verts[start:] + verts[:start]
        for i in range(n):
            for j in range(i + 1, n):
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue  # adjacent edges may share their corner
                if _segments_touch(verts[i], verts[(i + 1) % n],
                                   verts[j], verts[(j + 1) % n]):
                    raise GeometryError(
                        f"self-intersection between edges {i} and {j}")
        self.vertices = verts

    @cached_property
    def bbox(self) -> Rect:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return Rect(Point(min(xs), min(ys)), Point(max(xs), max(ys)))

    @cached_property
    def rects(self) -> tuple[Rect, ...]:
        """Disjoint rectangle decomposition by vertical slabs between
        consecutive distinct x coordinates."""
        hedges = []
        n = len(self.vertices)
        for i in range(n):
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            if a.y == b.y:
                hedges.append((a.y, min(a.x, b.x), max(a.x, b.x)))
        xs = sorted({v.x for v in self.vertices})
        out = []
        for x0, x1 in zip(xs, xs[1:]):
            ys = sorted(y for (y, ex0, ex1) in hedges if ex0 <= x0 and ex1 >= x1)
            if len(ys) % 2:
                raise GeometryError("odd edge parity in slab decomposition")
            for y0, y1 in zip(ys[0::2], ys[1::2]):
                out.append(Rect(Point(x0, y0), Point(x1, y1)))
        return tuple(out)

    @property
    def area(self) -> int:
        return abs(_signed_area2(self.vertices)) // 2

    def is_rect(self) -> bool:
        return len(self.vertices) == 4

    def to_rect(self) -> Rect:
        if not self.is_rect():
            raise GeometryError("polygon is not a rectangle")
        return self.bbox

    def translated(self, dx: int, dy: int) -> "Polygon":
        return Polygon(tuple(v.translated(dx, dy) for v in self.vertices))

    def mirrored_x(self, axis: int = 0) -> "Polygon":
        """Reflection about the vertical line x = axis."""
        return Polygon(tuple(Point(2 * axis - v.x, v.y) for v in self.vertices))

    def contains_rect(self, r: Rect) -> bool:
        """Closed containment of a rectangle in the polygon."""
        if not self.bbox.contains_rect(r):
            return False
        covered = 0
        for cell in self.rects:
            inter = cell.intersection(r)
            if inter is not None:
                covered += inter.area
        return covered == r.area

    def intersects_window(self, window: Rect) -> bool:
        """Positive-area overlap with the window (boundary touch excluded)."""
        if not self.bbox.intersects(window):
            return False
        return any(cell.intersects(window) for cell in self.rects)

    def convex_corners(self) -> tuple[Point, ...]:
        """Vertices where the boundary turns left (interior angle 90 degrees)."""
        out = []
        n = len(self.vertices)
        for i in range(n):
            p, c, q = self.vertices[(i - 1) % n], self.vertices[i], self.vertices[(i + 1) % n]
            cross = (c.x - p.x) * (q.y - c.y) - (c.y - p.y) * (q.x - c.x)
            if cross > 0:
                out.append(c)
        return tuple(out)

    def sort_key(self):
        return (self.bbox.lo.x, self.bbox.lo.y, self.vertices)


def _net_intervals(items: list[tuple[int, int, int]]) -> Iterator[tuple[int, int, int]]:
    """Given (c0, c1, direction) interval contributions on one grid line,
    yield elementary intervals with their net direction (zero suppressed)."""
    points = sorted({c for c0, c1, _ in items for c in (c0, c1)})
    for p0, p1 in zip(points, points[1:]):
        net = sum(d for c0, c1, d in items if c0 <= p0 and p1 <= c1)
        if net:
            if abs(net) > 1:
                raise GeometryError("overlapping rectangles in boundary merge")
            yield (p0, p1, net)


def merge_rects(rects: Iterable[Rect]) -> list[Polygon]:
    """Reassemble a set of disjoint-interior rectangles into the rectilinear
    polygons bounding their union. Multiple disjoint pieces come back as
    separate polygons."""
    rects = list(rects)
    if not rects:
        return []
    vert: dict[int, list[tuple[int, int, int]]] = {}
    horz: dict[int, list[tuple[int, int, int]]] = {}
    for r in rects:
        horz.setdefault(r.lo.y, []).append((r.lo.x, r.hi.x, 1))   # bottom, rightward
        vert.setdefault(r.hi.x, []).append((r.lo.y, r.hi.y, 1))   # right, upward
        horz.setdefault(r.hi.y, []).append((r.lo.x, r.hi.x, -1))  # top, leftward
        vert.setdefault(r.lo.x, []).append((r.lo.y, r.hi.y, -1))  # left, downward
    segs: dict[Point, Point] = {}

    def add_seg(a: Point, b: Point):
        if a in segs:
            raise GeometryError("ambiguous boundary: two outgoing edges at one point")
        segs[a] = b

    for x, items in vert.items():
        for c0, c1, net in _net_intervals(items):
            if net > 0:
                add_seg(Point(x, c0), Point(x, c1))
            else:
                add_seg(Point(x, c1), Point(x, c0))
    for y, items in horz.items():
        for c0, c1, net in _net_intervals(items):
            if net > 0:
                add_seg(Point(c0, y), Point(c1, y))
            else:
                add_seg(Point(c1, y), Point(c0, y))

    loops = []
    while segs:
        start = min(segs)
        loop = [start]
        cur = segs.pop(start)
        while cur != start:
            loop.append(cur)
            cur = segs.pop(cur)
        loops.append(loop)

    out = []
    for loop in loops:
        # drop vertices interior to straight runs (wrap-around included)
        n = len(loop)
        kept = []
        for i in range(n):
            p, c, q = loop[(i - 1) % n], loop[i], loop[(i + 1) % n]
            straight = (p.x == c.x == q.x) or (p.y == c.y == q.y)
            if not straight:
                kept.append(c)
        out.append(Polygon(tuple(kept)))
    out.sort(key=Polygon.sort_key)
    return out


@dataclass
class Layout:
    """Named, layered collection of rectilinear polygons."""

    name: str = "unnamed"
    layers: dict[str, tuple[Polygon, ...]] = field(default_factory=dict)
    _bbox_cache: dict[str, np.ndarray] = field(default_factory=dict, repr=False,
                                               compare=False)

    def __post_init__(self):
        fixed = {}
        for layer, polys in self.layers.items():
            if not isinstance(layer, str) or not layer:
                raise GeometryError(f"invalid layer name {layer!r}")
            fixed[layer] = tuple(polys)
        self.layers = fixed

    def layer_bboxes(self, layer: str) -> np.ndarray:
        """(N, 4) int64 array of per-polygon bounding boxes, built lazily."""
        cached = self._bbox_cache.get(layer)
        if cached is None:
            polys = self.layers.get(layer, ())
            cached = np.array([p.bbox.coords() for p in polys],
                              dtype=np.int64).reshape(len(polys), 4)
            self._bbox_cache[layer] = cached
        return cached

    def window_candidates(self, layer: str, window: Rect) -> list[Polygon]:
        """Polygons whose bounding box has positive-area overlap with window."""
        polys = self.layers.get(layer, ())
        if not polys:
            return []
        b = self.layer_bboxes(layer)
        mask = ((b[:, 0] < window.hi.x) & (window.lo.x < b[:, 2])
                & (b[:, 1] < window.hi.y) & (window.lo.y < b[:, 3]))
        return [polys[i] for i in np.nonzero(mask)[0]]

    def translated(self, dx: int, dy: int) -> "Layout":
        return Layout(self.name,
                      {layer: tuple(p.translated(dx, dy) for p in polys)
                       for layer, polys in self.layers.items()})

    def mirrored_x(self, axis: int = 0) -> "Layout":
        return Layout(self.name,
                      {layer: tuple(p.mirrored_x(axis) for p in polys)
                       for layer, polys in self.layers.items()})


def query_window(layout: Layout, layer: str, window: Rect,
                 clip: bool = False) -> list[Polygon]:
    """Polygons on `layer` whose closed area overlaps `window` with positive
    area. With clip=True each result is replaced by its intersection with the
    window (one polygon per connected piece). Results are ordered by lower-left
    bounding-box corner, then vertex list."""
    out = []
    for poly in layout.window_candidates(layer, window):
        cells = [c for c in poly.rects if c.intersects(window)]
        if not cells:
            continue
        if clip:
            clipped = [c.intersection(window) for c in cells]
            out.extend(merge_rects(clipped))
        else:
            out.append(poly)
    out.sort(key=Polygon.sort_key)
    return out


def parse_layout(document: str) -> Layout:
    """Parse the line-oriented layout format.

    Statements: `layout <name>`, `layer <name>`, `rect x0 y0 x1 y1`,
    `poly x1 y1 x2 y2 ...` (even count, at least 8 numbers). `#` starts a
    comment. Rectangles become 4-vertex polygons.
    """
    name = "unnamed"
    saw_header = False
    layers: dict[str, list[Polygon]] = {}
    current: str | None = None
    shape_index = 0
    for line_no, raw in enumerate(document.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword, args = tokens[0], tokens[1:]
        if keyword == "layout":
            if saw_header:
                raise LayoutParseError(line_no, "duplicate layout header")
            if len(args) != 1:
                raise LayoutParseError(line_no, "layout statement needs one name")
            name = args[0]
            saw_header = True
        elif keyword == "layer":
            if len(args) != 1:
                raise LayoutParseError(line_no, "layer statement needs one name")
            if args[0] in layers:
                raise LayoutParseError(line_no, f"duplicate layer {args[0]!r}")
            layers[args[0]] = []
            current = args[0]
            shape_index = 0
        elif keyword in ("rect", "poly"):
            if current is None:
                raise LayoutParseError(line_no, f"{keyword} before any layer")
            try:
                nums = [int(t) for t in args]
            except ValueError:
                raise LayoutParseError(line_no, f"non-integer coordinate in {keyword}")
            if keyword == "rect":
                if len(nums) != 4:
                    raise LayoutParseError(line_no, "rect needs exactly 4 coordinates")
                try:
                    poly = Rect.from_coords(*nums).to_polygon()
                except GeometryError as exc:
                    raise LayoutParseError(
                        line_no, f"{exc} (shape {shape_index} of layer {current!r})")
            else:
                if len(nums) < 8 or len(nums) % 2:
                    raise LayoutParseError(
                        line_no, "poly needs an even count of at least 8 numbers")
                pts = tuple(zip(nums[0::2], nums[1::2]))
                try:
                    poly = Polygon(pts)
                except GeometryError as exc:
                    raise LayoutParseError(
                        line_no, f"{exc} (shape {shape_index} of layer {current!r})")
            layers[current].append(poly)
            shape_index += 1
        else:
            raise LayoutParseError(line_no, f"unknown statement {keyword!r}")
    return Layout(name, {k: tuple(v) for k, v in layers.items()})


def write_layout(layout: Layout) -> str:
    """Render a layout in the text format; parse_layout inverts this exactly."""
    lines = [f"layout {layout.name}"]
    for layer, polys in layout.layers.items():
        lines.append(f"layer {layer}")
        for poly in polys:
            if poly.is_rect():
                r = poly.bbox
                lines.append(f"rect {r.lo.x} {r.lo.y} {r.hi.x} {r.hi.y}")
            else:
                coords = " ".join(f"{v.x} {v.y}" for v in poly.vertices)
                lines.append(f"poly {coords}")
    return "\n".join(lines) + "\n"
