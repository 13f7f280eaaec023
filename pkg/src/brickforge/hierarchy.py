"""Tight geodesics with markings, hierarchies, resolutions, cut systems.

A hierarchy is a finite family of tight geodesics: one main geodesic on
the full surface, one geodesic per complexity-4 component domain arising
between consecutive main vertices, and annular twist geodesics.  Every
distance claim on the twice-punctured torus is certified inside a finite
curve enumeration; constructions that would need curves outside it raise
BudgetExceeded instead of guessing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace

from . import charts
from . import surfaces as sf
from .errors import (
    BudgetExceeded,
    NoTightGeodesic,
    NonSaturable,
    NotComponentDomain,
)
from .farey import Slope


@dataclass(frozen=True)
class TightGeodesic:
    gid: str
    domain: sf.EssentialSubsurface
    simplices: tuple
    initial: object = None  # Marking or LaminationDescriptor
    terminal: object = None
    parent: tuple | None = None  # (gid, simplex index) this domain comes from

    def __len__(self):
        return len(self.simplices) - 1

    def simplex(self, j):
        return self.simplices[j]


@dataclass(frozen=True)
class Hierarchy:
    domain: sf.EssentialSubsurface
    geodesics: tuple
    main_gid: str
    initial: object = None
    terminal: object = None
    certificate: object = field(default=None, compare=False, repr=False)

    @property
    def main(self) -> TightGeodesic:
        return self.geodesic(self.main_gid)

    def geodesic(self, gid) -> TightGeodesic:
        for g in self.geodesics:
            if g.gid == gid:
                return g
        raise KeyError(gid)

    def vertex_curves(self):
        """All distinct non-annular curves across the hierarchy, keyed."""
        out = []
        for g in self.geodesics:
            if g.domain.kind == "annulus":
                continue
            for s in g.simplices:
                for c in s.curves:
                    if c not in out:
                        out.append(c)
        return out


# ---------------------------------------------------------------------------
# subordinacy


def _pred_marking(g: TightGeodesic, j: int):
    if j > 0:
        return sf.Marking(g.simplex(j - 1))
    return g.initial if isinstance(g.initial, sf.Marking) else None


def _succ_marking(g: TightGeodesic, j: int):
    if j < len(g.simplices) - 1:
        return sf.Marking(g.simplex(j + 1))
    return g.terminal if isinstance(g.terminal, sf.Marking) else None


def subordinacy(g: TightGeodesic, j: int, y: sf.EssentialSubsurface):
    """Subordinacy type of a component domain at a geodesic vertex.

    Returns (kind, backward witness, forward witness) where kind is one
    of "both", "forward", "backward", "none" and the witnesses are the
    restricted markings (or None).
    """
    doms = sf.component_domains(g.domain, g.simplex(j))
    if all(d.token != y.token for d in doms):
        raise NotComponentDomain(f"{y.token} is not a component domain here")
    pred = _pred_marking(g, j)
    succ = _succ_marking(g, j)
    back = sf.restrict_marking(pred, y) if pred is not None else None
    fwd = sf.restrict_marking(succ, y) if succ is not None else None
    if back is not None and fwd is not None:
        kind = "both"
    elif fwd is not None:
        kind = "forward"
    elif back is not None:
        kind = "backward"
    else:
        kind = "none"
    return kind, back, fwd


# ---------------------------------------------------------------------------
# geodesic construction helpers


def _fan_geodesic(domain, s1: Slope, s2: Slope):
    """Geodesic between chart slopes, routed through 1/0 when possible.

    Component-domain charts realize the slope fan {infinity} union a set
    of integers, and the fan is geodesically closed via 1/0, so routing
    through it keeps every vertex realizable.
    """
    u = sf.Curve(domain, sf.FareySlope(s1))
    w = sf.Curve(domain, sf.FareySlope(s2))
    if s1 == s2:
        return (sf.Simplex.of(domain, u),)
    if sf.are_adjacent(u, w):
        return (sf.Simplex.of(domain, u), sf.Simplex.of(domain, w))
    inf = sf.Curve(domain, sf.FareySlope(Slope(1, 0)))
    if s1 != Slope(1, 0) and s2 != Slope(1, 0):
        if sf.are_adjacent(u, inf) and sf.are_adjacent(inf, w):
            return (
                sf.Simplex.of(domain, u),
                sf.Simplex.of(domain, inf),
                sf.Simplex.of(domain, w),
            )
    path = sf.farey_geodesic(u, w)
    return tuple(path)


def _twist_geodesic(domain, t1: int, t2: int):
    step = 1 if t2 >= t1 else -1
    return tuple(
        sf.Simplex.of(domain, sf.arc_curve(domain, t))
        for t in range(t1, t2 + step, step)
    )


def ambient_universe(budget_radius: int = 2):
    """Deduplicated curve enumeration on the twice-punctured torus."""
    d = sf.full_surface(sf.TORUS_1_2)
    charts.AMBIENT.ensure_enumerated(budget_radius)
    seen = {}
    for desc in charts.AMBIENT.descs(budget_radius):
        try:
            flat = charts.AMBIENT.curve(desc)
        except Exception:
            continue
        key = flat.canonical()
        if key not in seen:
            seen[key] = sf.flat_curve(d, desc)
    return list(seen.values())


def _bfs_path(curves, u, w):
    index = {c: i for i, c in enumerate(curves)}
    if u not in index or w not in index:
        raise BudgetExceeded("geodesic endpoint outside the enumeration")
    if u == w:
        return [u]
    adj_cache = {}

    def adjacent(i, j):
        key = (min(i, j), max(i, j))
        if key not in adj_cache:
            adj_cache[key] = sf.are_adjacent(curves[key[0]], curves[key[1]])
        return adj_cache[key]

    src, dst = index[u], index[w]
    parent = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y in range(len(curves)):
            if y not in parent and y != x and adjacent(x, y):
                parent[y] = x
                if y == dst:
                    path = [y]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return [curves[i] for i in reversed(path)]
                queue.append(y)
    raise NoTightGeodesic("endpoints not connected inside the enumeration")


def _tighten(domain, path, certificate):
    """Enforce the boundary condition on interior vertices of a path."""
    verts = list(path)
    for _ in range(len(verts) + 2):
        changed = False
        for i in range(1, len(verts) - 1):
            sb = sf.subsurface_boundary(
                sf.Simplex.of(domain, verts[i - 1]), sf.Simplex.of(domain, verts[i + 1])
            )
            if sb.filling:
                raise NoTightGeodesic("consecutive-but-one vertices fill the surface")
            cs = sb.sorted_curves()
            if len(cs) == 1 and cs[0] != verts[i]:
                verts[i] = cs[0]
                changed = True
        if not changed:
            break
    seq = [sf.Simplex.of(domain, v) for v in verts]
    if not sf.is_tight_sequence(seq, certificate):
        raise NoTightGeodesic("tightening failed inside the enumeration")
    return tuple(seq)


# ---------------------------------------------------------------------------
# hierarchy construction


def _base_vertex(m):
    if isinstance(m, sf.Marking):
        cs = m.base.sorted_curves()
        if not cs:
            raise ValueError("marking with empty base")
        return cs[0]
    if isinstance(m, sf.LaminationDescriptor):
        raise NoTightGeodesic("lamination endpoint needs a finite prefix")
    raise TypeError("expected a Marking")


def _truncate_lamination(domain, lam: sf.LaminationDescriptor, depth: int):
    """Finite marking standing in for a lamination endpoint: the convergent
    of an irrational slope at the budget depth, or the last prefix vertex."""
    rep = lam.rep
    if isinstance(rep, sf.IrrationalSlope):
        coeffs = rep.coefficients[: max(depth, 1)]
        num, den = coeffs[-1], 1
        for a in reversed(coeffs[:-1]):
            num, den = a * num + den, num
        return sf.Marking(sf.Simplex.of(domain, sf.slope_curve(domain, num, den)))
    if isinstance(rep, sf.SymbolicFilling):
        if not rep.prefix:
            raise NoTightGeodesic("symbolic lamination has an empty prefix")
        last = rep.prefix[-1]
        return sf.Marking(sf.Simplex.of(domain, last))
    raise TypeError("unknown lamination representation")


def build_hierarchy(s: sf.Surface, initial, terminal, budget: int = 10**4):
    """Hierarchy of tight geodesics from an initial to a terminal marking.

    The terminal datum may be a lamination descriptor; it is truncated to
    a certified finite prefix and kept as the geodesic's terminal record.
    """
    if s.complexity() not in (4, 5):
        raise BudgetExceeded("hierarchies supported on complexity 4 and 5 only")
    d = sf.full_surface(s)
    depth = max(2, min(12, budget // 100))
    terminal_record = terminal
    if isinstance(terminal, sf.LaminationDescriptor):
        terminal_marking = _truncate_lamination(d, terminal, depth)
    else:
        terminal_marking = terminal
    geodesics = []

    if s.complexity() == 4:
        u = _base_vertex(initial)
        w = _base_vertex(terminal_marking)
        path = sf.farey_geodesic(u, w)
        main = TightGeodesic(
            gid="g0",
            domain=d,
            simplices=tuple(path),
            initial=initial,
            terminal=terminal_record,
        )
        geodesics.append(main)
        certificate = None
    else:
        universe = ambient_universe(2)
        for m in (initial, terminal_marking):
            if isinstance(m, sf.Marking):
                for c in m.base.curves:
                    if c not in universe:
                        universe.append(c)
                for _, t in m.transversals:
                    if t not in universe:
                        universe.append(t)
        certificate = sf.DistanceCertificate(universe)
        u = _base_vertex(initial)
        w = _base_vertex(terminal_marking)
        path = _bfs_path(certificate.curves, u, w)
        main_simplices = _tighten(d, path, certificate)
        main = TightGeodesic(
            gid="g0",
            domain=d,
            simplices=main_simplices,
            initial=initial,
            terminal=terminal_record,
        )
        geodesics.append(main)

        # one geodesic per complexity-4 component domain with two-sided
        # subordinacy data, processed in vertex order for determinism
        gnum = 1
        for j, v in enumerate(main_simplices):
            for y in sf.component_domains(d, v):
                if y.kind != "proper" or y.complexity() != 4:
                    continue
                if y.chart is None:
                    raise BudgetExceeded(
                        f"no coordinate chart for component domain {y.token}"
                    )
                kind, back, fwd = subordinacy(
                    replace(main, initial=initial, terminal=terminal_marking), j, y
                )
                if kind != "both":
                    continue
                s1 = _marking_slope(back)
                s2 = _marking_slope(fwd)
                sub = TightGeodesic(
                    gid=f"g{gnum}",
                    domain=y,
                    simplices=_fan_geodesic(y, s1, s2),
                    initial=back,
                    terminal=fwd,
                    parent=("g0", j),
                )
                geodesics.append(sub)
                gnum += 1

    # annular geodesics: one per interior vertex curve of the main geodesic
    gnum = len(geodesics)
    main = geodesics[0]
    for j, v in enumerate(main.simplices):
        if j == 0 or j == len(main.simplices) - 1:
            continue
        for y in sf.component_domains(d, v):
            if y.kind != "annulus":
                continue
            kind, back, fwd = subordinacy(main, j, y)
            if kind != "both":
                continue
            t1 = back.base.sorted_curves()[0].rep.twist
            t2 = fwd.base.sorted_curves()[0].rep.twist
            geodesics.append(
                TightGeodesic(
                    gid=f"g{gnum}",
                    domain=y,
                    simplices=_twist_geodesic(y, t1, t2),
                    initial=back,
                    terminal=fwd,
                    parent=("g0", j),
                )
            )
            gnum += 1

    return Hierarchy(
        domain=d,
        geodesics=tuple(geodesics),
        main_gid="g0",
        initial=initial,
        terminal=terminal_record,
        certificate=certificate,
    )


def _marking_slope(m: sf.Marking) -> Slope:
    c = m.base.sorted_curves()[0]
    if not isinstance(c.rep, sf.FareySlope):
        raise BudgetExceeded("restricted marking is not in slope coordinates")
    return c.rep.slope


# ---------------------------------------------------------------------------
# verification


def verify_hierarchy(h: Hierarchy):
    """Check the hierarchy properties; returns (ok, list of violations)."""
    violations = []
    mains = [g for g in h.geodesics if g.domain.token == h.domain.token]
    if len(mains) != 1:
        violations.append("main not unique")
    seen_domains = {}
    for g in h.geodesics:
        if g.domain.token in seen_domains:
            violations.append(f"two geodesics on domain {g.domain.token}")
        seen_domains[g.domain.token] = g
    for g in h.geodesics:
        try:
            if g.domain.kind == "annulus":
                ok = all(
                    sf.are_adjacent(
                        a.sorted_curves()[0], b.sorted_curves()[0]
                    )
                    for a, b in zip(g.simplices, g.simplices[1:])
                )
            elif g.domain.token == h.domain.token and h.certificate is not None:
                ok = sf.is_tight_sequence(list(g.simplices), h.certificate)
            else:
                ok = sf.is_tight_sequence(list(g.simplices))
            if not ok:
                violations.append(f"{g.gid} is not tight")
        except Exception as exc:
            violations.append(f"{g.gid} tightness check failed: {exc}")
    for g in h.geodesics:
        if g.gid == h.main_gid:
            continue
        if g.parent is None:
            violations.append(f"{g.gid} has no subordinacy witness")
            continue
        pgid, j = g.parent
        try:
            parent = h.geodesic(pgid)
        except KeyError:
            violations.append(f"{g.gid} parent {pgid} missing")
            continue
        doms = sf.component_domains(parent.domain, parent.simplex(j))
        if all(y.token != g.domain.token for y in doms):
            violations.append(f"{g.gid} domain is not a component domain of its parent")
        if g.initial is None or g.terminal is None:
            violations.append(f"{g.gid} lacks subordinacy markings")
    # 4-completeness on the main geodesic
    main = h.main
    for j, v in enumerate(main.simplices):
        if main.domain.complexity() <= 4:
            break
        for y in sf.component_domains(main.domain, v):
            if y.kind != "proper" or y.complexity() != 4:
                continue
            try:
                kind, _, _ = subordinacy(main, j, y)
            except BudgetExceeded:
                continue
            if kind == "both" and y.token not in seen_domains:
                violations.append(f"missing geodesic on component domain {y.token}")
    return (not violations, violations)


# ---------------------------------------------------------------------------
# resolutions


@dataclass(frozen=True)
class Slice:
    pairs: tuple  # of (gid, simplex index); pairs[0] is the bottom pair

    @property
    def bottom(self):
        return self.pairs[0]


def resolve(h: Hierarchy):
    """Sweep the hierarchy into a list of non-annular saturated slices.

    Consecutive slices differ by elementary moves: advancing one simplex
    along one geodesic, with subdomain geodesics traversed completely
    while their supporting main vertex is current.
    """
    ok, violations = verify_hierarchy(h)
    if not ok:
        raise NonSaturable("; ".join(violations))
    main = h.main
    subs_at = {}
    for g in h.geodesics:
        if g.gid == h.main_gid or g.domain.kind == "annulus":
            continue
        if g.parent is None or g.parent[0] != h.main_gid:
            raise NonSaturable(f"{g.gid} is not anchored on the main geodesic")
        subs_at.setdefault(g.parent[1], []).append(g)
    slices = []
    for j in range(len(main.simplices)):
        subs = subs_at.get(j, [])
        if not subs:
            slices.append(Slice(((h.main_gid, j),)))
            continue
        if len(subs) > 1:
            # simultaneous disjoint supports advance together
            length = max(len(g.simplices) for g in subs)
        else:
            length = len(subs[0].simplices)
        for t in range(length):
            pairs = [(h.main_gid, j)]
            for g in subs:
                pairs.append((g.gid, min(t, len(g.simplices) - 1)))
            slices.append(Slice(tuple(pairs)))
    # drop exact repeats produced by uneven subdomain lengths
    out = [slices[0]]
    for s in slices[1:]:
        if s != out[-1]:
            out.append(s)
    return out


def ambient_curve(h: Hierarchy, c: sf.Curve) -> sf.Curve:
    """Realize a hierarchy vertex as a curve on the full surface."""
    if c.domain.kind == "full":
        return c
    if c.domain.kind == "annulus":
        return c.domain.boundary[0]
    chart = c.domain.chart
    if chart is None or not isinstance(c.rep, sf.FareySlope):
        raise BudgetExceeded(f"cannot realize {c!r} on the full surface")
    if isinstance(chart, sf.SlopeChart):
        raise BudgetExceeded("abstract slope domains have no ambient model")
    desc = chart.realize(c.rep.slope)
    if desc is None:
        raise BudgetExceeded(f"slope {c.rep.slope} is outside the realizable fan")
    return sf.flat_curve(h.domain, desc)


def slice_base(h: Hierarchy, s: Slice):
    """The multicurve carried by a slice, expressed on the full surface
    when the hierarchy has an ambient curve model."""
    realize = h.domain.ambient == sf.TORUS_1_2
    curves = []
    for gid, idx in s.pairs:
        g = h.geodesic(gid)
        for c in g.simplex(idx).curves:
            if realize:
                c = ambient_curve(h, c)
            if c not in curves:
                curves.append(c)
    return curves


# ---------------------------------------------------------------------------
# cut systems


@dataclass(frozen=True)
class CutSystem:
    hierarchy: Hierarchy
    d1: int
    slices: tuple  # of Slice

    def bottom_indices(self, gid):
        return sorted(idx for s in self.slices for (g, idx) in [s.bottom] if g == gid)


def build_cut_system(h: Hierarchy, d1: int) -> CutSystem:
    """Greedy slice placement along each long geodesic.

    Bottom simplices march from the initial vertex at stride 2*d1 and the
    final stretch is adjusted so every gap lies in [d1, 3*d1]; geodesics
    shorter than d1 contribute no slices.
    """
    if d1 <= 5:
        raise ValueError("the spacing constant must exceed 5")
    ok, violations = verify_hierarchy(h)
    if not ok:
        raise NonSaturable("; ".join(violations))
    slices = []
    used_bottoms = set()
    for g in h.geodesics:
        n = len(g.simplices) - 1
        if n < d1:
            continue
        positions = list(range(2 * d1, n + 1, 2 * d1))
        if positions and n - positions[-1] < d1:
            # re-balance the final stretch so both closing gaps stay legal
            prev = positions[-2] if len(positions) > 1 else 0
            positions[-1] = (prev + n) // 2
            if positions[-1] - prev < d1:
                positions.pop()
        cuts = []
        for idx in positions:
            key = (g.gid, idx)
            if key in used_bottoms:
                continue
            used_bottoms.add(key)
            pairs = [(g.gid, idx)]
            # saturate with first vertices of geodesics supported on
            # component domains of the bottom simplex
            for other in h.geodesics:
                if other.gid == g.gid or other.domain.kind == "annulus":
                    continue
                if other.parent == (g.gid, idx):
                    pairs.append((other.gid, 0))
            cuts.append(Slice(tuple(pairs)))
        slices.extend(cuts)
    system = CutSystem(hierarchy=h, d1=d1, slices=tuple(slices))
    _check_cut_spacing(system)
    return system


def _check_cut_spacing(cs: CutSystem):
    for g in cs.hierarchy.geodesics:
        n = len(g.simplices) - 1
        idxs = cs.bottom_indices(g.gid)
        if not idxs:
            continue
        gaps = []
        prev = 0
        for i in idxs:
            gaps.append(i - prev)
            prev = i
        gaps.append(n - prev)
        for gap in gaps:
            if not (cs.d1 <= gap <= 3 * cs.d1):
                raise NonSaturable(
                    f"cut spacing {gap} outside [{cs.d1}, {3 * cs.d1}] on {g.gid}"
                )
