"""Exact polygonal curves on the flat twice-punctured torus.

The model surface is R^2 / L minus the images of Z^2, where L is the
lattice spanned by (2,0) and (0,1).  The integer points all become
punctures (two puncture classes, even and odd x), and the quotient is a
twice-punctured torus.

A curve is a polygonal path with exact rational vertices, closing up
after one period with a lattice displacement.  Three tools drive all the
topology here:

* crossing words with the grid lines x in Z, y in Z, y - x in Z.  These
  lines cut the surface into four ideal triangles, the dual graph is a
  spine, and the reduced cyclic crossing word is a complete
  free-homotopy invariant.
* overlay of two curves with exact crossing points, followed by
  combinatorial bigon removal, which yields geometric intersection
  numbers.
* boundary walks of a regular neighborhood of a union of two curves,
  which yield the subsurface boundary that tightness checks need.

Everything is exact rational arithmetic; no floats anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import BrickforgeError

LATTICE = ((2, 0), (0, 1))

Point = tuple[Fraction, Fraction]


class GenericityError(BrickforgeError):
    """A polygonal representative is in degenerate position."""


def _pt(x, y) -> Point:
    return (Fraction(x), Fraction(y))


def _add(a, b) -> Point:
    return (a[0] + b[0], a[1] + b[1])


def _sub(a, b) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def _scale(v, s):
    return (v[0] * s, v[1] * s)


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _is_int(x) -> bool:
    return Fraction(x).denominator == 1


def _on_grid(p: Point) -> bool:
    return _is_int(p[0]) or _is_int(p[1]) or _is_int(p[1] - p[0])


def seg_cross(a1: Point, a2: Point, b1: Point, b2: Point):
    """Interior transverse crossing of segments a and b.

    Returns (t, u, point) with t, u strictly in (0,1), or None.  Collinear
    overlaps and endpoint touches raise GenericityError so the caller
    knows the representatives need a nudge.
    """
    d1 = _sub(a2, a1)
    d2 = _sub(b2, b1)
    denom = _cross(d1, d2)
    diff = _sub(b1, a1)
    if denom == 0:
        if _cross(d1, diff) == 0:
            def param(p):
                if d1[0] != 0:
                    return (p[0] - a1[0]) / d1[0]
                return (p[1] - a1[1]) / d1[1]

            lo, hi = sorted([param(b1), param(b2)])
            if hi > 0 and lo < 1:
                raise GenericityError("collinear overlapping segments")
        return None
    t = _cross(diff, d2) / denom
    u = _cross(diff, d1) / denom
    if 0 < t < 1 and 0 < u < 1:
        point = (a1[0] + t * d1[0], a1[1] + t * d1[1])
        return (t, u, point)
    if 0 <= t <= 1 and 0 <= u <= 1 and (t in (0, 1) or u in (0, 1)):
        # endpoint contact between otherwise transverse segments: only a
        # genuine degeneracy when the touch is not a shared polyline vertex
        if not (t in (0, 1) and u in (0, 1)):
            raise GenericityError("segment touches the interior of another")
    return None


# ---------------------------------------------------------------------------
# crossing words


def _inv_letter(letter):
    fam, cls, sign = letter
    return (fam, cls, -sign)


def _segment_word(p: Point, q: Point):
    """Grid-crossing letters along the open segment p -> q, in order."""
    d = _sub(q, p)
    events = []
    if d[0] != 0:
        lo, hi = sorted([p[0], q[0]])
        for a in range(math.floor(lo) + 1, math.ceil(hi)):
            t = (Fraction(a) - p[0]) / d[0]
            y = p[1] + t * d[1]
            if _is_int(y):
                raise GenericityError("segment passes through a puncture")
            events.append((t, ("V", a % 2, 1 if d[0] > 0 else -1)))
    if d[1] != 0:
        lo, hi = sorted([p[1], q[1]])
        for b in range(math.floor(lo) + 1, math.ceil(hi)):
            t = (Fraction(b) - p[1]) / d[1]
            x = p[0] + t * d[0]
            if _is_int(x):
                raise GenericityError("segment passes through a puncture")
            cls = math.floor(x) % 2
            events.append((t, ("H", cls, 1 if d[1] > 0 else -1)))
    dd = d[1] - d[0]
    if dd != 0:
        v1 = p[1] - p[0]
        v2 = q[1] - q[0]
        lo, hi = sorted([v1, v2])
        for k in range(math.floor(lo) + 1, math.ceil(hi)):
            t = (Fraction(k) - v1) / dd
            x = p[0] + t * d[0]
            if _is_int(x):
                raise GenericityError("segment crosses a diagonal at a puncture")
            cls = math.floor(x) % 2
            events.append((t, ("D", cls, 1 if dd > 0 else -1)))
    events.sort(key=lambda e: e[0])
    for (t1, _), (t2, _) in zip(events, events[1:]):
        if t1 == t2:
            raise GenericityError("segment crosses two grid lines at one point")
    return [letter for _, letter in events]


def path_word(points, closed_disp=None):
    """Crossing word of a polygonal path.

    If closed_disp is given, the path closes up from the last vertex to
    points[0] + closed_disp.
    """
    for p in points:
        if _on_grid(p):
            raise GenericityError("vertex lies on a grid line")
    pts = list(points)
    if closed_disp is not None:
        pts = pts + [_add(points[0], closed_disp)]
    word = []
    for p, q in zip(pts, pts[1:]):
        word.extend(_segment_word(p, q))
    return word


def reduce_cyclic(word):
    out = []
    for letter in word:
        if out and out[-1] == _inv_letter(letter):
            out.pop()
        else:
            out.append(letter)
    while len(out) >= 2 and out[0] == _inv_letter(out[-1]):
        out = out[1:-1]
    return out


def canonical_class(word):
    """Canonical form of a cyclic word up to rotation and inversion."""
    w = reduce_cyclic(word)
    if not w:
        return ()
    candidates = []
    rev = [_inv_letter(l) for l in reversed(w)]
    for base in (w, rev):
        for i in range(len(base)):
            candidates.append(tuple(base[i:] + base[:i]))
    return min(candidates)


def word_displacement(word):
    dx = sum(l[2] for l in word if l[0] == "V")
    dy = sum(l[2] for l in word if l[0] == "H")
    return (dx, dy)


_COORD_KEYS = (("V", 0), ("V", 1), ("H", 0), ("H", 1), ("D", 0), ("D", 1))


def normal_coords_of(word):
    """Minimal crossing counts with the six triangulation edge classes."""
    w = reduce_cyclic(word)
    counts = {k: 0 for k in _COORD_KEYS}
    for fam, cls, _ in w:
        counts[(fam, cls)] += 1
    return tuple(counts[k] for k in _COORD_KEYS)


def _puncture_loop_word(center):
    cx, cy = center
    r = Fraction(1, 5)
    s = Fraction(1, 9)
    pts = [
        (cx + r, cy + s),
        (cx + s, cy + r),
        (cx - s, cy + r),
        (cx - r, cy + s),
        (cx - r, cy - s),
        (cx - s, cy - r),
        (cx + s, cy - r),
        (cx + r, cy - s),
    ]
    return canonical_class(path_word([_pt(*p) for p in pts], (0, 0)))


PERIPHERAL_CLASSES = {_puncture_loop_word((0, 0)), _puncture_loop_word((1, 0))}


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class FlatCurve:
    """A polygonal closed curve: one period of vertices plus the lattice
    displacement picked up when the period closes."""

    points: tuple
    disp: tuple

    def __post_init__(self):
        if self.disp[0] % 2 != 0:
            raise ValueError("displacement must lie in the lattice")

    def segments(self):
        pts = list(self.points) + [_add(self.points[0], self.disp)]
        return list(zip(pts, pts[1:]))

    def bbox(self):
        xs = [p[0] for p in self.points] + [self.points[0][0] + self.disp[0]]
        ys = [p[1] for p in self.points] + [self.points[0][1] + self.disp[1]]
        return (min(xs), min(ys), max(xs), max(ys))

    def word(self):
        return path_word(self.points, self.disp)

    def canonical(self):
        return canonical_class(self.word())

    def normal_coords(self):
        return normal_coords_of(self.word())

    def is_null(self):
        return self.canonical() == ()

    def is_peripheral(self):
        return self.canonical() in PERIPHERAL_CLASSES

    def translated(self, lam):
        return FlatCurve(tuple(_add(p, lam) for p in self.points), self.disp)

    def point_at(self, key):
        i, t = key
        a, b = self.segments()[i]
        return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def same_class(c1: FlatCurve, c2: FlatCurve) -> bool:
    return c1.canonical() == c2.canonical()


def _lattice_range(bb1, bb2):
    """Lattice vectors lam with bbox1 possibly meeting bbox2 + lam."""
    ax0, ay0, ax1, ay1 = bb1
    bx0, by0, bx1, by1 = bb2
    out = []
    imin = math.floor(Fraction(ax0 - bx1, 2)) - 1
    imax = math.ceil(Fraction(ax1 - bx0, 2)) + 1
    jmin = math.floor(ay0 - by1) - 1
    jmax = math.ceil(ay1 - by0) + 1
    for i in range(imin, imax + 1):
        for j in range(jmin, jmax + 1):
            out.append((2 * i, j))
    return out


def validate_embedded(c: FlatCurve):
    """Check that the curve is embedded on the torus."""
    segs = c.segments()
    for lam in _lattice_range(c.bbox(), c.bbox()):
        for i, (a1, a2) in enumerate(segs):
            for j, (b1, b2) in enumerate(segs):
                if lam == (0, 0) and j <= i:
                    continue
                hit = seg_cross(a1, a2, _add(b1, lam), _add(b2, lam))
                if hit is not None:
                    raise GenericityError("curve is not embedded")
    return True


# ---------------------------------------------------------------------------
# constructors


def line_curve(a: int, b: int, band: int = 0, anchor=Fraction(3, 7)) -> FlatCurve:
    """Straight closed geodesic in direction (a, b).

    Parallel geodesics fall into puncture-free bands; `band` selects one.
    Directions with even a admit two bands, odd a only one.
    """
    if gcd(abs(a), abs(b)) != 1:
        raise ValueError("direction must be primitive")
    k = 1 if a % 2 == 0 else 2
    disp = (k * a, k * b)
    # deterministic per-direction jitter so distinct fixture curves do not
    # share rational alignments
    salt = (3 * a + 5 * b + 7 * band) % 11
    anchor = anchor + Fraction(salt, 113)
    for num in (3, 4, 5, 9, 11, 13, 17, 19, 23):
        # keep the transversal constant inside the band but off every
        # rational alignment that the other fixture curves use
        c = Fraction(band) + Fraction(1, 2) + Fraction(num, 101)
        if a != 0:
            x0 = anchor + Fraction(num, 97)
            y0 = (b * x0 - c) / a
        else:
            x0 = c / b if b > 0 else -c / b
            y0 = anchor + Fraction(num, 97)
        if _on_grid((x0, y0)):
            continue
        curve = FlatCurve(((x0, y0),), disp)
        try:
            curve.word()
        except GenericityError:
            continue
        return curve
    raise GenericityError("could not find a generic anchor")


def slot_curve(p, q) -> FlatCurve:
    """Boundary of a corridor around the straight arc between punctures p
    and q (integer points of opposite x-parity, primitive difference)."""
    u, v = q[0] - p[0], q[1] - p[1]
    if u % 2 == 0:
        raise ValueError("endpoints must lie in different puncture classes")
    if gcd(abs(u), abs(v)) != 1:
        raise ValueError("arc direction must be primitive")
    s = abs(u) + abs(v)
    d = (Fraction(u), Fraction(v))
    n = (Fraction(-v), Fraction(u))
    pf = (Fraction(p[0]), Fraction(p[1]))
    qf = (Fraction(q[0]), Fraction(q[1]))
    for e1_den, e2_den in ((4, 5), (4, 7), (5, 9), (7, 11), (8, 13)):
        e1 = Fraction(1, e1_den * s)
        # the normal direction is not unit length, so the half-width must
        # shrink like 1/s^2 to keep neighboring lattice points outside
        e2 = Fraction(1, e2_den * s * s + 1)
        corners = (
            _add(_add(pf, _scale(d, -e1)), _scale(n, e2)),
            _add(_add(pf, _scale(d, -e1)), _scale(n, -e2)),
            _add(_add(qf, _scale(d, e1)), _scale(n, -e2)),
            _add(_add(qf, _scale(d, e1)), _scale(n, e2)),
        )
        if any(_on_grid(c) for c in corners):
            continue
        curve = FlatCurve(corners, (0, 0))
        try:
            curve.word()
        except GenericityError:
            continue
        inside = _lattice_points_inside(corners)
        if set(inside) != {tuple(p), tuple(q)}:
            raise GenericityError("corridor swallowed an extra puncture")
        return curve
    raise GenericityError("could not build a generic corridor")


def _lattice_points_inside(corners):
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    out = []
    for ix in range(math.floor(min(xs)), math.ceil(max(xs)) + 1):
        for iy in range(math.floor(min(ys)), math.ceil(max(ys)) + 1):
            if winding(list(corners), (Fraction(ix), Fraction(iy))) != 0:
                out.append((ix, iy))
    return out


def winding(poly_points, pt):
    """Winding number of the closed polygon around pt (not on the polygon)."""
    wn = 0
    m = len(poly_points)
    for i in range(m):
        a = poly_points[i]
        b = poly_points[(i + 1) % m]
        if a[1] <= pt[1]:
            if b[1] > pt[1] and _cross(_sub(b, a), _sub(pt, a)) > 0:
                wn += 1
        else:
            if b[1] <= pt[1] and _cross(_sub(b, a), _sub(pt, a)) < 0:
                wn -= 1
    return wn


# ---------------------------------------------------------------------------
# overlay, arcs, bigon removal


@dataclass(frozen=True)
class Crossing:
    key1: tuple  # (segment index, parameter) on curve 1
    key2: tuple  # (segment index, parameter) on curve 2
    lam: tuple  # lattice translate applied to curve 2
    point: Point  # location in curve 1's frame
    sign: int


def overlay(c1: FlatCurve, c2: FlatCurve):
    """All torus crossings between two embedded curves, with exact data."""
    segs1 = c1.segments()
    segs2 = c2.segments()
    out = []
    for lam in _lattice_range(c1.bbox(), c2.bbox()):
        for i, (a1, a2) in enumerate(segs1):
            for j, (b1, b2) in enumerate(segs2):
                hit = seg_cross(a1, a2, _add(b1, lam), _add(b2, lam))
                if hit is None:
                    continue
                t, u, point = hit
                if _on_grid(point):
                    raise GenericityError("crossing point on a grid line")
                sign = 1 if _cross(_sub(a2, a1), _sub(b2, b1)) > 0 else -1
                out.append(Crossing((i, t), (j, u), lam, point, sign))
    return out


def arc_points(curve: FlatCurve, key_from, key_to, start_point, direction=1):
    """Polyline along the curve from key_from to key_to, lifted so the arc
    begins at start_point.  direction=+1 walks forward, -1 backward."""
    segs = curve.segments()
    n = len(segs)
    i, t = key_from
    j, u = key_to
    pos = curve.point_at(key_from)
    off = _sub(start_point, pos)
    pts = [start_point]
    cur = i
    steps = 0
    if direction == 1:
        while not (cur == j and (steps > 0 or u > t)):
            pts.append(_add(segs[cur][1], off))
            cur += 1
            if cur == n:
                cur = 0
                off = _add(off, curve.disp)
            steps += 1
            if steps > 2 * n + 2:
                raise RuntimeError("arc walk failed to terminate")
    else:
        while not (cur == j and (steps > 0 or u < t)):
            pts.append(_add(segs[cur][0], off))
            cur -= 1
            if cur < 0:
                cur = n - 1
                off = _sub(off, curve.disp)
            steps += 1
            if steps > 2 * n + 2:
                raise RuntimeError("arc walk failed to terminate")
    end = _add(curve.point_at(key_to), off)
    pts.append(end)
    return pts


def _loop_is_trivial(loop_pts):
    """True when the closed polygonal loop is null-homotopic on the
    punctured torus: zero displacement (checked by the caller) and zero
    winding about every puncture."""
    xs = [p[0] for p in loop_pts]
    ys = [p[1] for p in loop_pts]
    for ix in range(math.floor(min(xs)), math.ceil(max(xs)) + 1):
        for iy in range(math.floor(min(ys)), math.ceil(max(ys)) + 1):
            if winding(loop_pts, (Fraction(ix), Fraction(iy))) != 0:
                return False
    return True


def _cyclic_next(order, x):
    i = order.index(x)
    return order[(i + 1) % len(order)]


def _find_bigon(c1, c2, crossings, live):
    """Search for a removable bigon pair among live crossings."""
    lv = [crossings[k] for k in sorted(live)]
    if len(lv) < 2:
        return None
    order1 = sorted(live, key=lambda k: crossings[k].key1)
    order2 = sorted(live, key=lambda k: crossings[k].key2)
    for idx, ka in enumerate(order1):
        kb = order1[(idx + 1) % len(order1)]
        if ka == kb:
            continue
        x = crossings[ka]
        y = crossings[kb]
        # adjacency along curve 2, in either direction
        for direction in (1, -1):
            if direction == 1:
                if _cyclic_next(order2, ka) != kb:
                    continue
            else:
                if _cyclic_next(order2, kb) != ka:
                    continue
            arc1 = arc_points(c1, x.key1, y.key1, x.point, 1)
            start2 = x.point  # lift of x on the translated copy of c2
            arc2 = arc_points(c2, x.key2, y.key2, start2, direction)
            end1 = arc1[-1]
            end2 = arc2[-1]
            mu = _sub(end2, end1)
            if mu != (0, 0):
                continue
            loop = arc1[:-1] + list(reversed(arc2))[:-1]
            if _loop_is_trivial(loop):
                return (ka, kb)
    return None


def generic_overlay_pair(c1: FlatCurve, c2: FlatCurve):
    """Nudge c2 by a tiny translation until the overlay is generic.

    A translation small enough not to sweep a puncture is an isotopy, and
    the crossing-word check below certifies exactly that, so the returned
    curve is in the same class as c2.
    """
    target = c2.canonical()
    cand = c2
    for k in range(24):
        try:
            overlay(c1, cand)
            return cand
        except GenericityError:
            tau = (Fraction(1, 911 + 37 * k) / 7, Fraction(1, 1013 + 41 * k) / 7)
            cand = c2.translated(tau)
            if cand.canonical() != target:
                continue
    raise GenericityError("could not reach generic position by nudging")


def flat_intersection(c1: FlatCurve, c2: FlatCurve):
    """Geometric intersection number of two embedded curves."""
    if same_class(c1, c2):
        return 0
    c2 = generic_overlay_pair(c1, c2)
    crossings = overlay(c1, c2)
    live = set(range(len(crossings)))
    while True:
        pair = _find_bigon(c1, c2, crossings, live)
        if pair is None:
            break
        live.discard(pair[0])
        live.discard(pair[1])
    return len(live)


def minimal_overlay(c1: FlatCurve, c2: FlatCurve):
    """Overlay, but insisting the representatives are already tight.

    Returns (crossings, c2') where c2' is the possibly-nudged second
    curve; raises GenericityError when a bigon is present, since the
    neighborhood-boundary walk needs honest geometry.
    """
    c2 = generic_overlay_pair(c1, c2)
    crossings = overlay(c1, c2)
    live = set(range(len(crossings)))
    if _find_bigon(c1, c2, crossings, live) is not None:
        raise GenericityError("representatives form a bigon; not in minimal position")
    return crossings, c2


# ---------------------------------------------------------------------------
# neighborhood boundary walks


def _angle_key(v):
    """Total order on directions by angle, exact."""
    x, y = v
    if y > 0 or (y == 0 and x > 0):
        half = 0
    else:
        half = 1
    return (half, Fraction(-x, y) if y != 0 else (Fraction(-10**9) if x > 0 else Fraction(10**9)), )


def _sort_by_angle(items):
    """Sort (direction, payload) pairs counterclockwise starting at +x."""
    def key(it):
        x, y = it[0]
        if y == 0:
            base = 0 if x > 0 else 2
            return (base, Fraction(0))
        if y > 0:
            return (1, Fraction(-x, y))
        return (3, Fraction(-x, y))

    return sorted(items, key=key)


def boundary_walk_classes(c1: FlatCurve, c2: FlatCurve):
    """Canonical classes of the boundary walks of a regular neighborhood
    of c1 union c2 (curves in tight position).

    Returns a list of canonical word classes, one per complementary face
    walk of the union.  When the curves are disjoint the neighborhood is
    just two annuli and the classes are those of the curves themselves.
    """
    crossings, c2 = minimal_overlay(c1, c2)
    if not crossings:
        return [c1.canonical(), c2.canonical()]
    order1 = sorted(range(len(crossings)), key=lambda k: crossings[k].key1)
    order2 = sorted(range(len(crossings)), key=lambda k: crossings[k].key2)

    # arcs: (curve index, from crossing, to crossing) following the curve
    arcs = []
    for cidx, order, curve in ((0, order1, c1), (1, order2, c2)):
        for pos, ka in enumerate(order):
            kb = order[(pos + 1) % len(order)]
            arcs.append((cidx, ka, kb))

    # half-edges: (arc index, direction); direction +1 from ka to kb
    # at each crossing, the four outgoing half-edges with their tangents
    outgoing = {k: [] for k in range(len(crossings))}
    segs = (c1.segments(), c2.segments())
    curves = (c1, c2)
    for aidx, (cidx, ka, kb) in enumerate(arcs):
        key_a = crossings[ka].key1 if cidx == 0 else crossings[ka].key2
        key_b = crossings[kb].key1 if cidx == 0 else crossings[kb].key2
        sa, _ = key_a
        sb, _ = key_b
        da = _sub(segs[cidx][sa][1], segs[cidx][sa][0])
        db = _sub(segs[cidx][sb][1], segs[cidx][sb][0])
        outgoing[ka].append((da, (aidx, 1)))
        outgoing[kb].append((_scale(db, -1), (aidx, -1)))

    rotation = {}
    for k, items in outgoing.items():
        ordered = _sort_by_angle(items)
        for i, (_, he) in enumerate(ordered):
            nxt = ordered[(i + 1) % len(ordered)][1]
            rotation[(k, he)] = nxt

    def he_endpoints(he):
        aidx, d = he
        cidx, ka, kb = arcs[aidx]
        return (ka, kb) if d == 1 else (kb, ka)

    # face traversal: next half-edge = rotate(reverse(he)) at the endpoint
    visited = set()
    classes = []
    for start in list(rotation.keys()):
        k0, he0 = start
        src, dst = he_endpoints(he0)
        if src != k0 or (k0, he0) in visited:
            continue
        walk_points = []
        cur_pt = crossings[k0].point
        he = he0
        at = k0
        guard = 0
        while True:
            visited.add((at, he))
            aidx, d = he
            cidx, ka, kb = arcs[aidx]
            curve = curves[cidx]
            key_from = crossings[ka].key1 if cidx == 0 else crossings[ka].key2
            key_to = crossings[kb].key1 if cidx == 0 else crossings[kb].key2
            if d == 1:
                pts = arc_points(curve, key_from, key_to, cur_pt, 1)
            else:
                pts = arc_points(curve, key_to, key_from, cur_pt, -1)
            walk_points.extend(pts[:-1])
            cur_pt = pts[-1]
            _, end = he_endpoints(he)
            rev = (he[0], -he[1])
            he = rotation[(end, rev)]
            at = end
            guard += 1
            if at == k0 and he == he0:
                break
            if guard > 4 * len(arcs) + 4:
                raise RuntimeError("face walk failed to close")
        disp = _sub(cur_pt, walk_points[0])
        ddx, ddy = disp
        if ddx.denominator != 1 or ddy.denominator != 1 or int(ddx) % 2 != 0:
            raise RuntimeError("face walk closed with a non-lattice offset")
        word = path_word(walk_points, (int(ddx), int(ddy)))
        classes.append(canonical_class(word))
    return classes
