"""Block decomposition pipeline: normalization, tube placement, merging,
and assembly into standard blocks.

Tubes realize tight geodesics inside bricks: one vertical tube per
geodesic vertex, placed at exact rational sub-intervals of the brick's
band.  Complexity-4 placements leave gap bands between consecutive tubes
so that the annuli stay pairwise disjoint.  After placement, tubes that
are homotopic in the model are merged, and the remaining material is cut
into blocks of the three standard types.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from . import bricks as bk
from . import hierarchy as hy
from . import surfaces as sf
from .config import get_budget
from .errors import (
    BudgetExceeded,
    DomainError,
    ELViolation,
    IterationOverflow,
    MissingLabel,
    NoTightGeodesic,
)

BLOCK_TYPES = ("S03", "S04", "S11")


@dataclass(frozen=True)
class Tube:
    tid: str
    core: sf.Curve  # ambient curve class
    band: tuple  # (lo, hi) rationals
    origin: tuple  # (round number, brick id or "boundary")
    token: str  # placement domain token
    interface: str = "annulus"  # M[0]-interface: "torus" or "annulus"
    merged_from: frozenset = frozenset()
    twist: int = 0


@dataclass(frozen=True)
class TubeUnion:
    tubes: tuple
    rounds: tuple  # pairs (round number, tuple of tube ids)

    def tube(self, tid) -> Tube:
        for t in self.tubes:
            if t.tid == tid:
                return t
        raise KeyError(tid)


@dataclass(frozen=True)
class Block:
    blid: str
    btype: str
    support_token: str
    interval: tuple
    gap: tuple = None  # gap band inside the interval, complexity-4 only
    tube: str = None  # id of the tube whose vertex interval this is
    support: object = None  # placement domain, for metric bookkeeping

    def __post_init__(self):
        if self.btype not in BLOCK_TYPES:
            raise ValueError(f"unknown block type {self.btype}")


@dataclass(frozen=True)
class BlockDecomposition:
    base: sf.Surface
    blocks: tuple
    tubes: TubeUnion  # after merging
    placed: tuple  # tubes before merging, for per-round accounting
    torus_tubes: tuple  # tube ids with torus interface
    gf_bricks: tuple
    graph: tuple  # gluing edges (block id, tube id)
    adjustments: tuple  # (BB) re-leveling records
    tails: tuple  # truncated-ray descriptors
    rounds_used: int


# ---------------------------------------------------------------------------
# exact tube intervals


def tube_intervals(n: int, variant: str):
    """Sub-intervals of [0,1] for a geodesic with vertices v_0..v_n.

    closed-wide: the full partition used above complexity 4; closed-gap:
    the complexity-4 variant leaving gaps; ray-wide / ray-gap: the
    half-open counterparts accumulating at 1.
    """
    if n < 0:
        raise ValueError("need at least one vertex")
    if variant == "closed-wide":
        return [
            (Fraction(i, n + 1), Fraction(i + 1, n + 1)) for i in range(n + 1)
        ]
    if variant == "closed-gap":
        return [
            (Fraction(i, n + 1), Fraction(2 * i + 1, 2 * n + 2))
            for i in range(n + 1)
        ]
    if variant == "ray-wide":
        return [
            (1 - Fraction(1, 2**i), 1 - Fraction(1, 2 ** (i + 1)))
            for i in range(n + 1)
        ]
    if variant == "ray-gap":
        return [
            (1 - Fraction(1, 2**i), 1 - Fraction(3, 2 ** (i + 2)))
            for i in range(n + 1)
        ]
    raise ValueError(f"unknown variant {variant}")


def _scale(iv, lo, hi):
    width = hi - lo
    return (lo + iv[0] * width, lo + iv[1] * width)


def _mirror(iv):
    return (1 - iv[1], 1 - iv[0])


# ---------------------------------------------------------------------------
# normalization


def _is_gf(b: bk.Brick) -> bool:
    return b.label is not None and b.label.kind == "geometrically-finite"


def _merge_pair(k: bk.BrickComplex, j: bk.Joint) -> bk.BrickComplex:
    up = k.brick(j.upper)
    low = k.brick(j.lower)
    kind = "closed"
    if low.open_below() and up.open_above():
        kind = "open"
    elif low.open_below():
        kind = "half-open-below"
    elif up.open_above():
        kind = "half-open-above"
    merged = bk.Brick(
        bid=f"{j.lower}+{j.upper}",
        support=low.support,
        kind=kind,
        lo=low.lo,
        hi=up.hi,
        collars=tuple(sorted(set(low.collars) | set(up.collars))),
        initial=low.initial,
        terminal=up.terminal,
    )
    rename = {j.lower: merged.bid, j.upper: merged.bid}
    bricks = tuple(
        b for b in k.bricks if b.bid not in (j.lower, j.upper)
    ) + (merged,)
    joints = tuple(
        replace(
            jj,
            upper=rename.get(jj.upper, jj.upper),
            lower=rename.get(jj.lower, jj.lower),
        )
        for jj in k.joints
        if jj != j
    )
    return bk.BrickComplex(k.base, bricks, joints)


def _front_cores(m: bk.LabelledBrickManifold, e: bk.LeafEmbedding, b, level):
    """Boundary-annulus cores attached to the brick front at a level."""
    out = []
    for comp in bk.boundary_components(m.complex, e):
        if level not in comp.interval:
            continue
        c = comp.core
        if b.support.kind == "full" or bk.curve_in_domain(b.support, c):
            if c not in out:
                out.append(c)
    return out


def _split_brick(b: bk.Brick, c: sf.Curve):
    """Replace a brick by the complement pieces of a vertical annulus."""
    if b.support.kind != "full":
        raise DomainError("splitting is only needed on full-support bricks")
    full = sf.full_surface(b.support.ambient)
    domains = sf.component_domains(full, sf.Simplex.of(full, c))
    pieces = [y for y in domains if y.kind == "proper"]
    tag = bk.curve_tag(c)
    out = []
    for i, y in enumerate(pieces):
        out.append(
            bk.Brick(
                bid=f"{b.bid}/{i}",
                support=y,
                kind=b.kind,
                lo=b.lo,
                hi=b.hi,
                collars=b.collars + ((tag,) if i == 0 else ()),
                label=b.label,
                initial=b.initial,
                terminal=b.terminal,
            )
        )
    return tuple(out)


def _reattach_joints(k: bk.BrickComplex, bid, pieces):
    joints = []
    for jj in k.joints:
        if bid not in (jj.upper, jj.lower):
            joints.append(jj)
            continue
        attached = False
        for piece in pieces:
            if jj.surface.kind == "full":
                surf = piece.support
            elif jj.surface.token == piece.support.token or all(
                bk.curve_in_domain(piece.support, c) for c in jj.surface.boundary
            ):
                surf = jj.surface
            else:
                continue
            attached = True
            if jj.upper == bid:
                joints.append(replace(jj, upper=piece.bid, surface=surf))
            else:
                joints.append(replace(jj, lower=piece.bid, surface=surf))
        if not attached:
            if jj.upper == bid:
                joints.append(replace(jj, upper=pieces[0].bid))
            else:
                joints.append(replace(jj, lower=pieces[0].bid))
    return tuple(joints)


def normalize(m: bk.LabelledBrickManifold) -> bk.LabelledBrickManifold:
    """Merge internal inessential joints; split full closed bricks with a
    lower-front boundary annulus missing every upper-front one.
    Idempotent."""
    k = m.complex
    dirty = True
    while dirty:
        dirty = False
        changed = True
        while changed:
            changed = False
            for j in k.joints:
                up, low = k.brick(j.upper), k.brick(j.lower)
                if up.label is not None or low.label is not None:
                    continue
                if set(up.collars) != set(low.collars):
                    continue
                if j.is_inessential(k):
                    k = _merge_pair(k, j)
                    changed = dirty = True
                    break
        mm = bk.LabelledBrickManifold(k)
        e = bk.identity_embedding(k)
        for b in k.bricks:
            if b.kind != "closed" or _is_gf(b) or b.support.kind != "full":
                continue
            lower = _front_cores(mm, e, b, b.lo)
            upper = _front_cores(mm, e, b, b.hi)
            offender = next(
                (
                    c
                    for c in lower
                    if upper
                    and all(
                        c != cu and sf.intersection_number(c, cu) == 0
                        for cu in upper
                    )
                ),
                None,
            )
            if offender is None:
                continue
            pieces = _split_brick(b, offender)
            bricks = tuple(bb for bb in k.bricks if bb.bid != b.bid) + pieces
            joints = _reattach_joints(k, b.bid, pieces)
            k = bk.BrickComplex(k.base, bricks, joints)
            dirty = True
            break
    return bk.LabelledBrickManifold(k)


# ---------------------------------------------------------------------------
# boundary data


def boundary_data(m: bk.LabelledBrickManifold, e: bk.LeafEmbedding):
    """Marking sources: horizontal-annulus cores, per-brick pants systems
    on geometrically finite labels, per-brick lamination descriptors on
    simply degenerate labels."""
    k = m.complex
    ha = [
        (comp.core, comp.interval) for comp in bk.boundary_components(k, e)
    ]
    s = {}
    mu = {}
    for b in k.bricks:
        if b.label is None:
            continue
        if b.label.kind == "geometrically-finite":
            s[b.bid] = tuple(c for c, _, _ in (b.label.conformal or ()))
        else:
            mu[b.bid] = b.label.lamination
    has_explicit = any(
        b.initial is not None or b.terminal is not None for b in k.bricks
    )
    if not ha and not s and not mu and not has_explicit:
        raise MissingLabel("model carries no marking data")
    return {"H_A": ha, "s": s, "mu": mu}


def _joint_partners(k: bk.BrickComplex, b: bk.Brick, level):
    out = []
    for j in k.joints:
        if j.level != level:
            continue
        if j.upper == b.bid:
            out.append((k.brick(j.lower), j))
        elif j.lower == b.bid:
            out.append((k.brick(j.upper), j))
    return out


def _endpoint_marking(m, e, b, side, data):
    """Endpoint datum of a brick front: explicit record, label
    lamination, pants system of a geometrically finite neighbor across an
    inessential joint, boundary-annulus cores, or partner frontiers."""
    k = m.complex
    explicit = b.initial if side == "lower" else b.terminal
    if explicit is not None:
        return explicit
    is_open = b.open_below() if side == "lower" else b.open_above()
    if is_open:
        if b.label is not None and b.label.kind == "simply-degenerate":
            return b.label.lamination
        return None
    level = b.lo if side == "lower" else b.hi
    curves = []
    for partner, j in _joint_partners(k, b, level):
        if _is_gf(partner) and j.is_inessential(k):
            for c in data["s"].get(partner.bid, ()):
                if c not in curves:
                    curves.append(c)
        elif partner.support.kind == "proper":
            for c in partner.support.boundary:
                if c not in curves and all(
                    sf.intersection_number(c, c2) == 0 for c2 in curves
                ):
                    curves.append(c)
    for c in _front_cores(m, e, b, level):
        if c not in curves and all(
            sf.intersection_number(c, c2) == 0 for c2 in curves
        ):
            curves.append(c)
    if not curves:
        return None
    full = sf.full_surface(k.base)
    domain = full if b.support.kind == "full" else b.support
    usable = [c for c in curves if c.domain.token == domain.token]
    if not usable:
        return None
    return sf.Marking(sf.Simplex(domain, frozenset(usable)))


# ---------------------------------------------------------------------------
# geodesics and placement


def _main_geodesic(base: sf.Surface, start, end, budget):
    """Vertex curves of the main tight geodesic on a complexity-5 base,
    from a marking toward a marking or lamination.  Returns the vertex
    list, the finite stand-in for the far end, and the ray tail."""
    d = sf.full_surface(base)
    depth = max(2, min(12, budget // 100))
    tail = None
    end_marking = end
    if isinstance(end, sf.LaminationDescriptor):
        end_marking = hy._truncate_lamination(d, end, depth)
        tail = end
    universe = hy.ambient_universe(2)
    for mk in (start, end_marking):
        if isinstance(mk, sf.Marking):
            for c in mk.base.curves:
                if c not in universe:
                    universe.append(c)
            for _, t in mk.transversals:
                if t not in universe:
                    universe.append(t)
    certificate = sf.DistanceCertificate(universe)
    u = start.base.sorted_curves()[0]
    w = end_marking.base.sorted_curves()[0]
    path = hy._bfs_path(certificate.curves, u, w)
    simplices = hy._tighten(d, path, certificate)
    return [v.sorted_curves()[0] for v in simplices], end_marking, tail


def _xi4_path(domain, u, w):
    if domain.kind == "full":
        simplices = sf.farey_geodesic(u, w)
    else:
        simplices = hy._fan_geodesic(domain, u.rep.slope, w.rep.slope)
    return [v.sorted_curves()[0] for v in simplices]


def _realizable(domain, vertices):
    if domain.kind == "full":
        return True
    return all(domain.chart.realize(v.rep.slope) is not None for v in vertices)


def _xi4_vertices(domain, start, end, budget):
    """Vertex curves of a complexity-4 tight geodesic, plus the ray tail.
    Lamination ends are truncated at the deepest budget level whose whole
    geodesic is realizable in the domain's chart."""
    depth = max(2, min(12, budget // 100))
    u = start.base.sorted_curves()[0]
    if not isinstance(u.rep, sf.FareySlope):
        raise BudgetExceeded("endpoint marking is not in slope coordinates")
    if isinstance(end, sf.LaminationDescriptor):
        tail = end
        for dep in range(depth, 0, -1):
            finite = hy._truncate_lamination(domain, end, dep)
            w = finite.base.sorted_curves()[0]
            vertices = _xi4_path(domain, u, w)
            if _realizable(domain, vertices):
                return vertices, finite, tail
        raise BudgetExceeded("no realizable truncation of the lamination ray")
    w = end.base.sorted_curves()[0]
    if not isinstance(w.rep, sf.FareySlope):
        raise BudgetExceeded("endpoint marking is not in slope coordinates")
    vertices = _xi4_path(domain, u, w)
    if not _realizable(domain, vertices):
        raise BudgetExceeded("geodesic leaves the chart's realizable slopes")
    return vertices, end, None


def _intervals_for(n, kind, gap: bool):
    """(tube band, wide band) pairs in brick coordinates; the first band
    sits at the real front of a half-open brick."""
    wide_variant = "ray-wide" if kind != "closed" else "closed-wide"
    tube_variant = (
        ("ray-gap" if kind != "closed" else "closed-gap") if gap else wide_variant
    )
    tubes = tube_intervals(n, tube_variant)
    wides = tube_intervals(n, wide_variant)
    if kind == "half-open-below":
        tubes = [_mirror(iv) for iv in tubes]
        wides = [_mirror(iv) for iv in wides]
    return list(zip(tubes, wides))


def _nearby_tube_marking(domain, level, placed, side):
    """Marking read off the nearest placed tube beyond a brick front, by
    projecting its core into the brick's chart."""
    if side == "below":
        cands = sorted(
            (t for t in placed if t.band[1] <= level),
            key=lambda t: t.band[1],
            reverse=True,
        )
    else:
        cands = sorted(
            (t for t in placed if t.band[0] >= level), key=lambda t: t.band[0]
        )
    for t in cands:
        try:
            pcs = sf._project_curve(domain, t.core)
        except (DomainError, BudgetExceeded):
            continue
        if pcs:
            return sf.Marking(sf.Simplex.of(domain, pcs[0]))
    return None


def _ambient_core(full, domain, curve):
    if domain.kind == "full":
        return curve
    desc = domain.chart.realize(curve.rep.slope)
    if desc is None:
        raise BudgetExceeded(
            f"slope {curve.rep.slope} has no realization in {domain.token}"
        )
    return sf.flat_curve(full, desc)


def _block_type(domain):
    g, ends = domain.ttype
    if (g, ends) == (1, 1):
        return "S11"
    if (g, ends) == (0, 4):
        return "S04"
    if (g, ends) == (0, 3):
        return "S03"
    raise DomainError(f"no block type for {domain.token}")


def tube_union_for(b: bk.Brick, initial, terminal, budget: int = None):
    """Tubes realizing the tight geodesic of one brick, at the exact
    sub-intervals of its band.  Returns (tubes, ray tail or None)."""
    if budget is None:
        budget = get_budget()
    if initial is None or terminal is None:
        raise DomainError(f"brick {b.bid} is not connectable")
    domain = b.support
    if domain.complexity() < 4:
        raise DomainError("tube placement needs complexity at least 4")
    full = sf.full_surface(domain.ambient)
    start, end = initial, terminal
    if b.kind == "half-open-below":
        start, end = end, start
    if isinstance(start, sf.LaminationDescriptor):
        raise NoTightGeodesic("lamination datum on the closed front")
    if domain.complexity() >= 5:
        vertices, _, tail = _main_geodesic(domain.ambient, start, end, budget)
        gap = False
    else:
        vertices, _, tail = _xi4_vertices(domain, start, end, budget)
        gap = True
    pairs = _intervals_for(len(vertices) - 1, b.kind, gap)
    tubes = []
    for i, (v, (tiv, _)) in enumerate(zip(vertices, pairs)):
        tubes.append(
            Tube(
                tid=f"{b.bid}.v{i}",
                core=_ambient_core(full, domain, v),
                band=_scale(tiv, b.lo, b.hi),
                origin=(1, b.bid),
                token=domain.token,
            )
        )
    return tubes, tail


# ---------------------------------------------------------------------------
# merging


def _core_serial(c: sf.Curve):
    kind, val = c.key()
    return (kind, str(val))


def _between_clear(core, lo, hi, k, e, tubes):
    """Product region between two bands: inside the model and crossed by
    no other tube."""
    for iv, mid in bk._sample_intervals(k, e):
        if iv[1] <= lo or iv[0] >= hi:
            continue
        if bk.curve_meets_slit(core, bk.slit_at(k, e, mid)):
            return False
    for t in tubes:
        if t.band[0] >= hi or t.band[1] <= lo:
            continue
        if t.core != core and sf.intersection_number(t.core, core) > 0:
            return False
    return True


def merge_homotopic(tubes, m: bk.LabelledBrickManifold, e: bk.LeafEmbedding):
    """Merge tubes homotopic in the model minus the remaining tubes.
    Pairs are processed in ascending (level, core-serial) order until no
    merge-eligible pair remains."""
    k = m.complex
    out = list(tubes)
    while True:
        out.sort(key=lambda t: (t.band[0], _core_serial(t.core)))
        merged = None
        for i, a in enumerate(out):
            for b in out[i + 1 :]:
                if a.core != b.core:
                    continue
                lo, hi = min(a.band[1], b.band[1]), max(a.band[0], b.band[0])
                if lo > hi:
                    continue
                rest = [t for t in out if t is not a and t is not b]
                if not _between_clear(a.core, lo, hi, k, e, rest):
                    continue
                interface = (
                    "torus"
                    if "torus" in (a.interface, b.interface)
                    else "annulus"
                )
                merged = Tube(
                    tid=a.tid,
                    core=a.core,
                    band=(min(a.band[0], b.band[0]), max(a.band[1], b.band[1])),
                    origin=a.origin,
                    token=a.token,
                    interface=interface,
                    merged_from=a.merged_from | b.merged_from | {a.tid, b.tid},
                    twist=a.twist + b.twist,
                )
                out = rest + [merged]
                break
            if merged is not None:
                break
        if merged is None:
            break
    out.sort(key=lambda t: (t.band[0], _core_serial(t.core)))
    return out


def _merge_eligible_pairs(tubes, k, e):
    pairs = []
    for i, a in enumerate(tubes):
        for b in tubes[i + 1 :]:
            if a.core != b.core:
                continue
            lo, hi = min(a.band[1], b.band[1]), max(a.band[0], b.band[0])
            if lo > hi:
                continue
            rest = [t for t in tubes if t is not a and t is not b]
            if _between_clear(a.core, lo, hi, k, e, rest):
                pairs.append((a.tid, b.tid))
    return pairs


# ---------------------------------------------------------------------------
# decomposition


def decompose(m: bk.LabelledBrickManifold, budget: int = None) -> BlockDecomposition:
    """Cut the model into standard blocks and a tube union."""
    if budget is None:
        budget = get_budget()
    conds = bk.check_conditions(m, bk.identity_embedding(m.complex))
    if not conds["EL"]:
        raise ELViolation(
            "simply degenerate descriptors repeat on homotopic supports"
        )
    m = normalize(m)
    k = m.complex
    e = bk.identity_embedding(k)
    base = k.base
    full = sf.full_surface(base)
    max_rounds = base.complexity() - 3
    data = boundary_data(m, e)

    placed = []
    blocks = []
    tails = []
    rounds = {}
    counter = [0]
    bcounter = [0]

    def new_tube(core, band, rnd, origin_id, token, interface="annulus"):
        tid = f"v{counter[0]}"
        counter[0] += 1
        t = Tube(tid, core, band, (rnd, origin_id), token, interface)
        placed.append(t)
        rounds.setdefault(rnd, []).append(tid)
        return t

    def new_block(btype, token, interval, gap=None, tube=None, support=None):
        blid = f"b{bcounter[0]}"
        bcounter[0] += 1
        blocks.append(Block(blid, btype, token, interval, gap, tube, support))

    # round 0: tubes along the model boundary
    for comp in bk.boundary_components(k, e):
        interface = "torus" if comp.kind == "torus" else "annulus"
        new_tube(comp.core, comp.interval, 0, "boundary", "boundary", interface)

    gf_bricks = []
    # queue entries: (domain, band, kind, start datum, end datum, origin id)
    xi4_queue = []
    xi5_queue = []

    for b in k.bricks:
        alpha, beta = e.level_of(b.bid)
        if _is_gf(b):
            gf_bricks.append(b.bid)
            continue
        xi = b.support.complexity()
        if xi == 3:
            new_block("S03", b.support.token, (alpha, beta), support=b.support)
            continue
        if xi >= 5:
            xi5_queue.append(b)
            continue
        start = _endpoint_marking(m, e, b, "lower", data)
        end = _endpoint_marking(m, e, b, "upper", data)
        if b.kind == "half-open-below":
            start, end = end, start
        xi4_queue.append((b.support, (alpha, beta), b.kind, start, end, b.bid))

    rounds_used = 0

    # first round: complexity >= 5 bricks, recut into component pieces
    if xi5_queue:
        rounds_used += 1
        for b in xi5_queue:
            alpha, beta = e.level_of(b.bid)
            start = _endpoint_marking(m, e, b, "lower", data)
            end = _endpoint_marking(m, e, b, "upper", data)
            if b.kind == "half-open-below":
                start, end = end, start
            if start is None or end is None:
                raise DomainError(f"brick {b.bid} is not connectable")
            if isinstance(start, sf.LaminationDescriptor):
                raise NoTightGeodesic("lamination datum on the closed front")
            vertices, end_marking, tail = _main_geodesic(base, start, end, budget)
            if tail is not None:
                tails.append((b.bid, tail))
            n = len(vertices) - 1
            pairs = _intervals_for(n, b.kind, gap=False)
            for i, (v, (tiv, _)) in enumerate(zip(vertices, pairs)):
                band = _scale(tiv, alpha, beta)
                new_tube(v, band, rounds_used, b.bid, full.token)
                simplex = sf.Simplex.of(full, v)
                for y in sf.component_domains(full, simplex):
                    if y.kind == "annulus":
                        continue
                    if y.complexity() == 3:
                        new_block("S03", y.token, band, support=y)
                        continue
                    if y.chart is None:
                        new_block(_block_type(y), y.token, band, support=y)
                        continue
                    if i == 0:
                        back = sf.restrict_marking(start, y)
                    else:
                        prev = sf.Marking(sf.Simplex.of(full, vertices[i - 1]))
                        back = sf.restrict_marking(prev, y)
                    if i == n:
                        fwd = sf.restrict_marking(end_marking, y)
                    else:
                        nxt = sf.Marking(sf.Simplex.of(full, vertices[i + 1]))
                        fwd = sf.restrict_marking(nxt, y)
                    if back is None or fwd is None:
                        new_block(_block_type(y), y.token, band, support=y)
                        continue
                    xi4_queue.append((y, band, "closed", back, fwd, b.bid))

    # final round: complexity-4 placements with gap bands
    if xi4_queue:
        rounds_used += 1
        for domain, band, kind, start, end, origin_id in xi4_queue:
            if domain.chart is not None:
                if start is None:
                    level, side = (
                        (band[1], "above")
                        if kind == "half-open-below"
                        else (band[0], "below")
                    )
                    start = _nearby_tube_marking(domain, level, placed, side)
                if end is None:
                    level, side = (
                        (band[0], "below")
                        if kind == "half-open-below"
                        else (band[1], "above")
                    )
                    end = _nearby_tube_marking(domain, level, placed, side)
            if start is None or end is None or domain.chart is None:
                new_block(_block_type(domain), domain.token, band, support=domain)
                continue
            if isinstance(start, sf.LaminationDescriptor):
                raise NoTightGeodesic("lamination datum on the closed front")
            vertices, _, tail = _xi4_vertices(domain, start, end, budget)
            if tail is not None:
                tails.append((origin_id, tail))
            pairs = _intervals_for(len(vertices) - 1, kind, gap=True)
            for v, (tiv, wiv) in zip(vertices, pairs):
                core = _ambient_core(full, domain, v)
                tband = _scale(tiv, band[0], band[1])
                wband = _scale(wiv, band[0], band[1])
                t = new_tube(core, tband, rounds_used, origin_id, domain.token)
                gap = (
                    (tband[1], wband[1])
                    if tband[1] < wband[1]
                    else (wband[0], tband[0])
                )
                if gap[0] == gap[1]:
                    gap = None
                new_block(
                    _block_type(domain), domain.token, wband,
                    gap=gap, tube=t.tid, support=domain,
                )

    if rounds_used > max_rounds:
        raise IterationOverflow("round count exceeded the complexity bound")

    tubes = merge_homotopic(placed, m, e)
    blocks, adjustments = _enforce_bb(blocks, k)

    union = TubeUnion(
        tubes=tuple(tubes),
        rounds=tuple((r, tuple(tids)) for r, tids in sorted(rounds.items())),
    )
    torus = tuple(t.tid for t in tubes if t.interface == "torus")
    graph = []
    for bl in blocks:
        for t in tubes:
            if t.band[0] < bl.interval[1] and bl.interval[0] < t.band[1]:
                graph.append((bl.blid, t.tid))
    return BlockDecomposition(
        base=base,
        blocks=tuple(blocks),
        tubes=union,
        placed=tuple(placed),
        torus_tubes=torus,
        gf_bricks=tuple(gf_bricks),
        graph=tuple(graph),
        adjustments=tuple(adjustments),
        tails=tuple(tails),
        rounds_used=rounds_used,
    )


# ---------------------------------------------------------------------------
# vertical re-leveling of fronts crossing gap bands


def _bb_violations(blocks, k: bk.BrickComplex, adjusted=frozenset()):
    out = []
    fronts = sorted({b.lo for b in k.bricks} | {b.hi for b in k.bricks})
    for bl in blocks:
        if bl.gap is None:
            continue
        for f in fronts:
            if f in adjusted:
                continue
            if bl.gap[0] < f < bl.gap[1]:
                out.append((bl.blid, f))
    return out


def _enforce_bb(blocks, k: bk.BrickComplex):
    """Re-level brick fronts landing inside a complexity-4 gap band to
    the tube boundary just below the gap."""
    adjustments = []
    moved = {}
    for blid, f in _bb_violations(blocks, k):
        bl = next(b for b in blocks if b.blid == blid)
        if f not in moved:
            moved[f] = bl.gap[0]
            adjustments.append({"front": f, "to": bl.gap[0], "flag": "bb"})
    if not moved:
        return tuple(blocks), ()
    out = []
    for bl in blocks:
        iv = tuple(moved.get(x, x) for x in bl.interval)
        gap = bl.gap
        if gap is not None:
            gap = tuple(moved.get(x, x) for x in gap)
        out.append(replace(bl, interval=iv, gap=gap))
    return tuple(out), tuple(adjustments)


# ---------------------------------------------------------------------------
# verification


def verify_decomposition(d: BlockDecomposition, m: bk.LabelledBrickManifold):
    """Structural report: block types, tube interfaces, disjoint bands
    for crossing cores, no merge-eligible pair, gap bands clear of brick
    fronts."""
    report = []
    k = m.complex
    e = bk.identity_embedding(k)
    for bl in d.blocks:
        if bl.btype not in BLOCK_TYPES:
            report.append(f"block {bl.blid} has type {bl.btype}")
        if bl.gap is not None and not (
            bl.interval[0] <= bl.gap[0] <= bl.gap[1] <= bl.interval[1]
        ):
            report.append(f"block {bl.blid} gap outside its interval")
    for t in d.tubes.tubes:
        if t.interface not in ("torus", "annulus"):
            report.append(f"tube {t.tid} interface {t.interface}")
    for i, a in enumerate(d.tubes.tubes):
        for b in d.tubes.tubes[i + 1 :]:
            overlap = a.band[0] < b.band[1] and b.band[0] < a.band[1]
            if not overlap:
                continue
            if a.core == b.core:
                report.append(f"tubes {a.tid},{b.tid} overlap with one core")
            elif sf.intersection_number(a.core, b.core) > 0:
                report.append(
                    f"tubes {a.tid},{b.tid} overlap with crossing cores"
                )
    for a, b in _merge_eligible_pairs(list(d.tubes.tubes), k, e):
        report.append(f"tubes {a},{b} are still merge-eligible")
    adjusted = frozenset(a["front"] for a in d.adjustments)
    for blid, f in _bb_violations(d.blocks, k, adjusted):
        report.append(f"front at {f} crosses the gap of block {blid}")
    return (not report, report)


# ---------------------------------------------------------------------------
# hierarchy cross-check


def hierarchy_crosscheck(b: bk.Brick, d: BlockDecomposition, budget: int = None) -> bool:
    """Single-brick models: the hierarchy built from the brick's endpoint
    markings must induce the same tubes, with three-holed-sphere blocks
    matched up to halving."""
    if budget is None:
        budget = get_budget()
    base = b.support.ambient
    h = hy.build_hierarchy(base, b.initial, b.terminal, budget)

    expected = {}
    for g in sorted(h.geodesics, key=lambda g: g.gid):
        if g.domain.kind == "annulus":
            continue
        seq = expected.setdefault(g.domain.token, [])
        for v in g.simplices:
            for c in v.sorted_curves():
                seq.append(hy.ambient_curve(h, c))

    tubes = [t for t in d.placed if t.origin[1] != "boundary"]
    got = {}
    for t in sorted(tubes, key=lambda t: t.band[0]):
        got.setdefault(t.token, []).append(t.core)
    if got != expected:
        return False
    if h.domain.complexity() >= 5:
        pants_expected = 0
        for v in h.main.simplices:
            for y in sf.component_domains(h.domain, v):
                if y.kind == "proper" and y.complexity() == 3:
                    pants_expected += 1
        s03 = sum(1 for bl in d.blocks if bl.btype == "S03")
        if pants_expected and s03 not in (pants_expected, 2 * pants_expected):
            return False
    return True
