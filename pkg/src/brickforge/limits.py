"""Scenario generators and the geometric-limit pipeline driver.

The built-in scenarios are product models of a surface times an interval
with material removed at interior levels: a single thickened tube
(twist-family limits), a zero-thickness subsurface leaf (whose two faces
become simply degenerate ends), and a finite tower of tubes with
alternating crossing cores (nested-cusp limits).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd

from . import blocks as bl
from . import bricks as bk
from . import hierarchy as hy
from . import serialize as sz
from . import surfaces as sf
from .config import get_budget
from .errors import ObstructionSearchFailure, ParseError

SCENARIO_KINDS = ("kerckhoff-thurston", "brock", "bonahon-otal", "custom")


@dataclass(frozen=True)
class Scenario:
    kind: str
    base: sf.Surface
    curve: object = None  # tube core for kerckhoff-thurston
    subsurface: object = None  # removed leaf support for brock
    depth: int = 1
    document: object = None  # parsed JSON for custom

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(f"unknown scenario kind {self.kind}")
        if self.kind == "bonahon-otal" and self.depth < 1:
            raise ValueError("nesting depth must be at least 1")


def _pants_curves(full):
    """A pants decomposition of the base, for inert conformal records."""
    if full.ambient == sf.TORUS_1_2:
        return (sf.line_class(full, 0, 1, 0), sf.line_class(full, 0, 1, 1))
    return (sf.slope_curve(full, 0, 1),)


def _gf_label(bid, full, twist=Fraction(0)):
    conformal = tuple((c, Fraction(1), twist) for c in _pants_curves(full))
    return bk.EndLabel(bid, "geometrically-finite", conformal=conformal)


def _default_core(full):
    if full.ambient == sf.TORUS_1_2:
        return sf.line_class(full, 0, 1, 0)
    return sf.slope_curve(full, 0, 1)


def _proper_pieces(full, core):
    domains = sf.component_domains(full, sf.Simplex.of(full, core))
    return [y for y in domains if y.kind == "proper"]


def _assemble(base, removals, lo_m, hi_m, top_twist=Fraction(0)):
    """Product model minus the given thickened tubes, with full buffer
    bricks so that both geometrically finite fronts are inessential
    joints.  removals is a level-sorted list of (core, (lo, hi)) with
    pairwise disjoint bands inside (lo_m, hi_m)."""
    full = sf.full_surface(base)
    d = len(removals)
    bricks = []
    joints = []

    def add_joint(upper, lower, surface, level):
        joints.append(bk.Joint(upper=upper, lower=lower, surface=surface, level=level))

    bricks.append(
        bk.Brick("gf0", full, "half-open-below", Fraction(0), lo_m,
                 label=_gf_label("gf0", full))
    )
    prev_top = lo_m
    for k, (core, (t_lo, t_hi)) in enumerate(removals, start=1):
        buf = f"buf{k - 1}"
        bricks.append(bk.Brick(buf, full, "closed", prev_top, t_lo))
        if k == 1:
            add_joint(buf, "gf0", full, prev_top)
        else:
            for i, y in enumerate(_proper_pieces(full, removals[k - 2][0])):
                add_joint(buf, f"t{k - 1}p{i}", y, prev_top)
        for i, y in enumerate(_proper_pieces(full, core)):
            bid = f"t{k}p{i}"
            bricks.append(bk.Brick(bid, y, "closed", t_lo, t_hi))
            add_joint(bid, buf, y, t_lo)
        prev_top = t_hi
    top_buf = f"buf{d}"
    bricks.append(bk.Brick(top_buf, full, "closed", prev_top, hi_m))
    if removals:
        for i, y in enumerate(_proper_pieces(full, removals[-1][0])):
            add_joint(top_buf, f"t{d}p{i}", y, prev_top)
    else:
        add_joint(top_buf, "gf0", full, prev_top)
    bricks.append(
        bk.Brick("gf1", full, "half-open-above", hi_m, Fraction(1),
                 label=_gf_label("gf1", full, twist=top_twist))
    )
    add_joint("gf1", top_buf, full, hi_m)
    k = bk.BrickComplex(base=base, bricks=tuple(bricks), joints=tuple(joints))
    return bk.LabelledBrickManifold(k), bk.identity_embedding(k)


def _tower(base, cores, top_twist=Fraction(0)):
    d = len(cores)
    lo_m, hi_m = Fraction(1, 8), Fraction(7, 8)
    width = Fraction(1, 8 * (d + 1))
    centers = [lo_m + Fraction(3 * k, 4 * (d + 1)) for k in range(1, d + 1)]
    removals = [
        (core, (center - width, center + width))
        for core, center in zip(cores, centers)
    ]
    return _assemble(base, removals, lo_m, hi_m, top_twist=top_twist)


def _generate_kt(s: Scenario):
    full = sf.full_surface(s.base)
    core = s.curve if s.curve is not None else _default_core(full)
    return _tower(s.base, [core], top_twist=Fraction(s.depth))


def _generate_bo(s: Scenario):
    full = sf.full_surface(s.base)
    if s.base == sf.TORUS_1_2:
        pair = (sf.line_class(full, 0, 1, 0), sf.line_class(full, 1, 0))
    else:
        pair = (sf.slope_curve(full, 0, 1), sf.slope_curve(full, 1, 0))
    cores = [pair[k % 2] for k in range(s.depth)]
    return _tower(s.base, cores)


def _generate_brock(s: Scenario):
    if s.base != sf.TORUS_1_2:
        raise ValueError("removed-leaf scenarios need a separating curve")
    full = sf.full_surface(s.base)
    if s.subsurface is not None:
        sigma = s.subsurface.boundary[0]
    else:
        sigma = sf.slot_class(full, (0, 0), (1, 0))
    domains = sf.component_domains(full, sf.Simplex.of(full, sigma))
    torus_side = next(y for y in domains if y.token.startswith("torus-side"))
    pants_side = next(y for y in domains if y.token.startswith("pants"))
    tag = bk.curve_tag(sigma)
    half = Fraction(1, 2)
    a, b = Fraction(2, 5), Fraction(3, 5)
    lo_m, hi_m = Fraction(1, 8), Fraction(7, 8)

    def lam(coeffs):
        return sf.LaminationDescriptor(torus_side, sf.IrrationalSlope(coeffs))

    bricks = (
        bk.Brick("gf0", full, "half-open-below", Fraction(0), lo_m,
                 label=_gf_label("gf0", full)),
        bk.Brick("buf0", full, "closed", lo_m, a),
        bk.Brick("p", pants_side, "closed", a, b, collars=(tag,)),
        bk.Brick("h0", torus_side, "half-open-above", a, half,
                 label=bk.EndLabel("h0", "simply-degenerate", lamination=lam((1, 1, 1, 1)))),
        bk.Brick("h1", torus_side, "half-open-below", half, b,
                 label=bk.EndLabel("h1", "simply-degenerate", lamination=lam((2, 2, 2, 2)))),
        bk.Brick("buf1", full, "closed", b, hi_m),
        bk.Brick("gf1", full, "half-open-above", hi_m, Fraction(1),
                 label=_gf_label("gf1", full)),
    )
    joints = (
        bk.Joint("buf0", "gf0", full, lo_m),
        bk.Joint("p", "buf0", pants_side, a),
        bk.Joint("h0", "buf0", torus_side, a),
        bk.Joint("buf1", "p", pants_side, b),
        bk.Joint("buf1", "h1", torus_side, b),
        bk.Joint("gf1", "buf1", full, hi_m),
    )
    k = bk.BrickComplex(base=s.base, bricks=bricks, joints=joints)
    return bk.LabelledBrickManifold(k), bk.identity_embedding(k)


def _generate_custom(s: Scenario):
    doc = s.document
    if isinstance(doc, str):
        doc = sz.loads(doc)
    if not isinstance(doc, dict):
        raise ParseError("custom scenario needs a document")
    k, e = sz.parse_complex(doc)
    return bk.LabelledBrickManifold(k), e


def generate(s: Scenario):
    """Build (LabelledBrickManifold, LeafEmbedding) for a scenario."""
    if s.kind == "kerckhoff-thurston":
        return _generate_kt(s)
    if s.kind == "bonahon-otal":
        return _generate_bo(s)
    if s.kind == "brock":
        return _generate_brock(s)
    return _generate_custom(s)


# ---------------------------------------------------------------------------
# ascending exhaustions


@dataclass(frozen=True)
class ExhaustionState:
    n: int
    window: tuple  # (lo, hi) truncation levels of this stage
    w: bk.BrickComplex  # W_n, the truncated sub-brick-manifold
    w_embedding: bk.LeafEmbedding
    stable: tuple  # (brick id, canonical doc) for untruncated bricks
    ext: tuple  # tube ids whose band crosses the window boundary
    obstructors: tuple  # added (core, band) pairs
    z: bk.LabelledBrickManifold  # product minus tubes and obstructors
    z_embedding: bk.LeafEmbedding
    acylindrical: bool


def _truncate_model(m, e, window):
    """Restriction of the model to a level window; half-open bricks cut
    at the window edge become closed there."""
    w_lo, w_hi = window
    bricks = []
    levels = []
    for b in m.complex.bricks:
        alpha, beta = e.level_of(b.bid)
        if beta <= w_lo or alpha >= w_hi:
            continue
        lo, hi = max(alpha, w_lo), min(beta, w_hi)
        open_below = b.open_below() and lo == alpha
        open_above = b.open_above() and hi == beta
        if open_below and open_above:
            kind = "open"
        elif open_below:
            kind = "half-open-below"
        elif open_above:
            kind = "half-open-above"
        else:
            kind = "closed"
        bricks.append(replace(b, kind=kind, lo=lo, hi=hi))
        levels.append((b.bid, (lo, hi)))
    kept = {b.bid for b in bricks}
    joints = tuple(
        j
        for j in m.complex.joints
        if j.upper in kept and j.lower in kept and w_lo < j.level < w_hi
    )
    k = bk.BrickComplex(base=m.complex.base, bricks=tuple(bricks), joints=joints)
    return bk.LabelledBrickManifold(k), bk.LeafEmbedding(tuple(levels))


def _crossing_candidates(base, core):
    """Curves meeting the core, cheapest first."""
    full = sf.full_surface(base)
    if base == sf.TORUS_1_2:
        pool = hy.ambient_universe(1)
    else:
        pool = []
        for q in range(4):
            for p in range(-3, 4):
                if gcd(p, q) == 1 and (q > 0 or p > 0):
                    pool.append(sf.slope_curve(full, p, q))
    scored = []
    budget = get_budget()
    for c in pool[:budget]:
        i = sf.intersection_number(c, core)
        if i > 0:
            scored.append((i, repr(c), c))
    scored.sort(key=lambda t: t[:2])
    return [c for _, _, c in scored]


def _clear_annulus_gaps(k, e):
    """Same-core boundary pairs joined by an unobstructed vertical
    annulus, as (core, lo, hi) level gaps."""
    comps = bk.boundary_components(k, e)
    samples = bk._sample_intervals(k, e)
    out = []
    cores = []
    for c in comps:
        if c.core not in cores:
            cores.append(c.core)
    for core in cores:
        gaps = sorted(c.interval for c in comps if c.core == core)
        for i in range(len(gaps)):
            for j in range(i + 1, len(gaps)):
                lo, hi = gaps[i][1], gaps[j][0]
                clear = True
                for iv, mid in samples:
                    if iv[1] <= lo or iv[0] >= hi:
                        continue
                    if bk.curve_meets_slit(core, bk.slit_at(k, e, mid)):
                        clear = False
                        break
                if clear:
                    out.append((core, lo, hi))
    return out


def _disjoint_bands(pairs):
    """Greedy maximal subset of (core, band) with pairwise disjoint
    level bands, sorted by band."""
    out = []
    for core, band in sorted(pairs, key=lambda t: t[1]):
        if out and band[0] < out[-1][1][1]:
            continue
        out.append((core, band))
    return out


def _assemble_z(base, removals, obstructors):
    pairs = _disjoint_bands(list(removals) + list(obstructors))
    if not pairs:
        return _assemble(base, [], Fraction(1, 8), Fraction(7, 8))
    lo_m = pairs[0][1][0] / 2
    hi_m = (pairs[-1][1][1] + 1) / 2
    return _assemble(base, pairs, lo_m, hi_m)


def _find_obstructors(base, removals):
    """Tubes killing every unobstructed annulus between the removed
    tubes, chosen greedily with minimal crossing cores."""
    obstructors = []
    limit = len(removals) + 8
    for _ in range(limit):
        zm, ze = _assemble_z(base, removals, obstructors)
        gaps = _clear_annulus_gaps(zm.complex, ze)
        if not gaps:
            return obstructors, zm, ze
        core, lo, hi = gaps[0]
        width = (hi - lo) / 8
        mid = (lo + hi) / 2
        candidates = _crossing_candidates(base, core)
        if not candidates:
            raise ObstructionSearchFailure(
                f"no crossing curve for {core!r} in the enumeration"
            )
        obstructors.append((candidates[0], (mid - width, mid + width)))
    raise ObstructionSearchFailure(
        "obstructor search did not stabilize within the iteration bound"
    )


def exhaust(m, e, stages: int, budget=None):
    """Ascending truncations W_n with externally crossing tubes, plus
    acylindrical finite approximants Z_n."""
    d = bl.decompose(m, budget)
    tubes = sorted(d.tubes.tubes, key=lambda v: (v.band, v.tid))
    span_lo = min(lv for lv, _ in (e.level_of(b.bid) for b in m.complex.bricks))
    span_hi = max(hv for _, hv in (e.level_of(b.bid) for b in m.complex.bricks))
    width = span_hi - span_lo
    out = []
    margin = width / 8
    for n in range(1, stages + 1):
        margin = margin / 2
        window = (span_lo + margin, span_hi - margin)
        want = min(n, len(tubes))
        while (
            sum(
                1
                for v in tubes
                if window[0] <= v.band[0] and v.band[1] <= window[1]
            )
            < want
        ):
            margin = margin / 2
            window = (span_lo + margin, span_hi - margin)
        wm, we = _truncate_model(m, e, window)
        stable = tuple(
            (b.bid, sz.dumps(sz.brick_doc(b)))
            for b in wm.complex.bricks
            if e.level_of(b.bid) == we.level_of(b.bid)
        )
        ext = tuple(
            v.tid
            for v in tubes
            if v.band[0] < window[0] < v.band[1]
            or v.band[0] < window[1] < v.band[1]
        )
        # removed regions come from the model's own boundary tori, which
        # keep parallel tubes separate even when the tube union merges
        # them into one homotopy class
        removals = [
            (c.core, c.interval)
            for c in bk.boundary_components(m.complex, e)
            if c.kind == "torus"
            and window[0] < c.interval[1]
            and c.interval[0] < window[1]
        ]
        obstructors, zm, ze = _find_obstructors(m.complex.base, removals)
        acyl = bk.check_a2(zm.complex, ze) and bk.check_a2_bruteforce(
            zm.complex, ze
        )
        out.append(
            ExhaustionState(
                n=n,
                window=window,
                w=wm.complex,
                w_embedding=we,
                stable=stable,
                ext=ext,
                obstructors=tuple(obstructors),
                z=zm,
                z_embedding=ze,
                acylindrical=acyl,
            )
        )
    return out


def exhaustion_doc(state: ExhaustionState) -> dict:
    """Per-stage report in the shared document format."""
    return {
        "stage": state.n,
        "window": [sz.frac_str(state.window[0]), sz.frac_str(state.window[1])],
        "w": sz.complex_doc(state.w, state.w_embedding),
        "stable-bricks": sorted(bid for bid, _ in state.stable),
        "external-tubes": list(state.ext),
        "obstructors": [
            {
                "core": sz.curve_str(core),
                "band": [sz.frac_str(band[0]), sz.frac_str(band[1])],
            }
            for core, band in state.obstructors
        ],
        "z": sz.complex_doc(state.z.complex, state.z_embedding),
        "acylindrical": state.acylindrical,
        "assumed": [
            "hyperbolization of the finite approximant",
            "quasi-Fuchsian approximation",
            "strong convergence of the approximants",
        ],
    }


# ---------------------------------------------------------------------------
# limit classification report


def verify_theorem_a(m, e) -> dict:
    """End and boundary classification report for a labelled model."""
    k = m.complex
    conditions = bk.check_conditions(m, e)
    comps = bk.boundary_components(k, e)
    ends = bk.classify_ends(m, e)
    gf_bricks = [
        b.bid
        for b in k.bricks
        if b.label is not None and b.label.kind == "geometrically-finite"
    ]
    peripheral = bk.peripheral_gf_bricks(m, e)
    gf_ends = [x for x in ends if x.kind == "GF"]
    bound = 4 * k.base.genus - 4 + 2 * k.base.punctures
    basepoint = min(
        (e.level_of(b.bid), b.bid) for b in k.bricks
    )
    checks = {
        "boundary-types": conditions["A1"]
        and all(c.kind in ("torus", "open-annulus") for c in comps),
        "acylindrical": conditions["A2"],
        "wild-ends": conditions["A3"],
        "leaf-embedding": conditions["A4"] and conditions["A5"],
        "peripheral-gf": set(gf_bricks) == set(peripheral),
        "finite-ends": len(ends) < get_budget(),
        "gf-end-bound": len(gf_ends) <= bound,
    }
    return {
        "basepoint": {
            "brick": basepoint[1],
            "level": sz.frac_str(basepoint[0][0]),
        },
        "boundary": sorted(c.kind for c in comps),
        "ends": sorted((x.kind, x.brick_id, x.side) for x in ends),
        "gf-end-bound": bound,
        "checks": checks,
        "pass": all(checks.values()),
        "assumed": [
            "hyperbolization of the finite approximants",
            "quasi-Fuchsian approximation",
            "strong convergence",
        ],
    }
