"""Coordinate charts for curves on the supported model surfaces.

Ambient surfaces are the one-holed torus (complexity 4, pure slope
arithmetic) and the twice-punctured torus (complexity 5, backed by the
polygonal engine in flatcurves).  Proper essential subdomains of the
twice-punctured torus get charts too:

* cutting along a vertical nonseparating curve leaves a four-holed
  sphere "strip" whose realizable slopes are the even integers (corridor
  curves between the puncture columns) together with infinity (the other
  vertical line),
* cutting along a separating corridor curve leaves a one-holed torus
  side whose realizable slopes are an integer fan of straight lines,
  plus a three-holed sphere side that carries no curves,
* each simplex curve also spawns an annulus domain whose "curves" are
  arc classes recorded by an integer twist.

Realization is budget-bounded: a class that cannot be matched inside the
enumerated curve family raises BudgetExceeded rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from . import flatcurves as fc
from .farey import Slope


# ---------------------------------------------------------------------------
# the ambient twice-punctured torus


def _bezout(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_s, s = s, old_s - k * s
        old_t, t = t, old_t - k * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


@dataclass(frozen=True)
class CurveDesc:
    """Constructive description of an ambient curve."""

    kind: str  # "lin" or "slot"
    data: tuple

    def build(self) -> fc.FlatCurve:
        if self.kind == "lin":
            a, b, band = self.data
            return fc.line_curve(a, b, band)
        p, q = self.data
        return fc.slot_curve(p, q)

    def serial(self):
        return (self.kind,) + tuple(self.data)


class AmbientFlatChart:
    """Curve bookkeeping on the twice-punctured torus.

    Holds a registry from canonical crossing words to constructive
    descriptions, filled lazily from an enumerated family of straight
    lines and corridor curves.
    """

    def __init__(self):
        self._by_class: dict = {}
        self._curve_cache: dict = {}
        self._enumerated = 0

    def curve(self, desc: CurveDesc) -> fc.FlatCurve:
        if desc not in self._curve_cache:
            c = desc.build()
            fc.validate_embedded(c)
            self._curve_cache[desc] = c
            self._by_class.setdefault(c.canonical(), desc)
        return self._curve_cache[desc]

    def descs(self, radius: int):
        """Deterministic enumeration of curve descriptions up to a size."""
        out = []
        for a in range(-radius, radius + 1):
            for b in range(-radius, radius + 1):
                if (a, b) == (0, 0) or gcd(abs(a), abs(b)) != 1:
                    continue
                bands = (0, 1) if a % 2 == 0 else (0,)
                for band in bands:
                    out.append(CurveDesc("lin", (a, b, band)))
        for px in (0, 1):
            for u in range(-radius, radius + 1):
                for v in range(-radius, radius + 1):
                    if u % 2 == 0 or gcd(abs(u), abs(v)) != 1:
                        continue
                    out.append(CurveDesc("slot", ((px, 0), (px + u, v))))
        return out

    def ensure_enumerated(self, radius: int):
        if self._enumerated >= radius:
            return
        for desc in self.descs(radius):
            try:
                self.curve(desc)
            except fc.GenericityError:
                continue
        self._enumerated = radius

    def lookup(self, canonical, radius: int = 3):
        """Find a constructive description realizing a canonical class."""
        if canonical in self._by_class:
            return self._by_class[canonical]
        self.ensure_enumerated(radius)
        return self._by_class.get(canonical)

    def is_separating(self, c: fc.FlatCurve) -> bool:
        return fc.word_displacement(fc.reduce_cyclic(c.word())) == (0, 0)


AMBIENT = AmbientFlatChart()


# ---------------------------------------------------------------------------
# subdomain charts


class StripChart:
    """Four-holed sphere obtained by cutting along a vertical line.

    wall_band 0 leaves the puncture columns x = 1, 2 inside the strip,
    wall_band 1 the columns x = 2, 3.  Realizable slopes: 2n for the
    corridor between the columns with n vertical twists, infinity for
    the vertical line inside the strip.
    """

    doubled = True

    def __init__(self, wall_band: int):
        self.wall_band = wall_band
        self.c1 = 1 + wall_band
        self.c2 = 2 + wall_band

    def wall_desc(self):
        return CurveDesc("lin", (0, 1, self.wall_band))

    def realize(self, s: Slope) -> CurveDesc | None:
        if s.q == 0:
            return CurveDesc("lin", (0, 1, 1 - self.wall_band))
        if s.q == 1 and s.p % 2 == 0:
            n = s.p // 2
            return CurveDesc("slot", ((self.c1, 0), (self.c2, n)))
        return None

    def realizable_slopes(self, bound: int):
        out = [Slope(1, 0)]
        for n in range(-bound, bound + 1):
            out.append(Slope(2 * n, 1))
        return out

    def classify(self, canonical) -> Slope | None:
        """Slope of an ambient class lying in the strip, if realizable."""
        for s in self.realizable_slopes(8):
            desc = self.realize(s)
            if desc is not None and AMBIENT.curve(desc).canonical() == canonical:
                return s
        return None


class TorusSideChart:
    """One-holed torus side of a separating corridor curve.

    For the corridor around the straight arc from (0,0) to (u,v), the
    realizable curves are the straight lines in direction (u,v) (slope
    infinity) and the family f + 2k(u,v) with det = 1 (slope k).
    """

    doubled = False

    def __init__(self, u: int, v: int, base=(0, 0)):
        self.u, self.v = u, v
        self.base = base
        fy, fx = None, None
        s, t = _bezout(u, v)
        # s*u + t*v = 1; we need u*fy - v*fx = 1
        fx, fy = -t, s
        if fx % 2 != 0:
            fx, fy = fx + u, fy + v
        assert fx % 2 == 0 and u * fy - v * fx == 1
        self.f = (fx, fy)

    def sigma_desc(self):
        return CurveDesc("slot", (self.base, (self.base[0] + self.u, self.base[1] + self.v)))

    def realize(self, s: Slope) -> CurveDesc | None:
        sigma = AMBIENT.curve(self.sigma_desc())
        if s.q == 0:
            cands = [CurveDesc("lin", (self.u, self.v, 0))]
        elif s.q == 1:
            k = s.p
            ex = self.f[0] + 2 * k * self.u
            ey = self.f[1] + 2 * k * self.v
            g = gcd(abs(ex), abs(ey))
            if g != 1:
                return None
            cands = [CurveDesc("lin", (ex, ey, band)) for band in (0, 1)]
        else:
            return None
        for desc in cands:
            try:
                c = AMBIENT.curve(desc)
            except fc.GenericityError:
                continue
            if fc.flat_intersection(c, sigma) == 0:
                return desc
        return None

    def realizable_slopes(self, bound: int):
        out = [Slope(1, 0)]
        for n in range(-bound, bound + 1):
            out.append(Slope(n, 1))
        return out

    def classify(self, canonical) -> Slope | None:
        for s in self.realizable_slopes(8):
            desc = self.realize(s)
            if desc is not None and AMBIENT.curve(desc).canonical() == canonical:
                return s
        return None


def project_to_chart(chart, w: fc.FlatCurve):
    """Subsurface projection of an ambient curve into a chart.

    Computed as the essential boundary-walk classes of a regular
    neighborhood of the curve together with the cutting curve, filtered
    down to classes the chart can realize.  Curves already inside the
    chart classify directly.
    """
    if isinstance(chart, StripChart):
        cut = AMBIENT.curve(chart.wall_desc())
    else:
        cut = AMBIENT.curve(chart.sigma_desc())
    if fc.same_class(cut, w):
        return []
    if fc.flat_intersection(cut, w) == 0:
        s = chart.classify(w.canonical())
        return [s] if s is not None else []
    walks = fc.boundary_walk_classes(cut, w)
    out = []
    for cls in walks:
        if cls == () or cls in fc.PERIPHERAL_CLASSES or cls == cut.canonical():
            continue
        s = chart.classify(cls)
        if s is not None and s not in out:
            out.append(s)
    return sorted(out)
