"""Metric descriptors on blocks, tubes, and geometrically finite bricks.

Blocks carry a fixed product-like metric: unit distance between fronts
and boundary annuli isometric to S^1(eps1) x [0,1].  Each torus-interface
tube gets a meridian coefficient omega = t + i*h read off the tiling of
its boundary torus by unit annuli, and the tube filtration M[k] keeps
the tubes with |omega| >= k.  All comparisons are exact: |omega| is never
extracted, only |omega|^2 compared with k^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import blocks as bl
from . import bricks as bk
from . import surfaces as sf
from .errors import MissingFNData, NotTorusInterface

# eps1 stands for a positive constant below the three-dimensional
# Margulis constant; lengths are stored as multiples of it.
EPS1 = Fraction(1, 10)

TWIST_CONVENTION = "right-handed twisting counts positive"
TUBE_FORMULA_NOTE = "own closed form: core length 2*pi*eps1/|omega|^2"


@dataclass(frozen=True)
class BlockMetricDescriptor:
    block: str
    eps1: Fraction = EPS1
    front_distance: int = 1
    boundary_annulus: str = "S1(eps1)x[0,1]"


@dataclass(frozen=True)
class MeridianCoefficient:
    tube: str
    re: int
    im: int

    def __post_init__(self):
        if self.im < 1:
            raise ValueError("meridian coefficient needs positive height")

    def abs2(self) -> int:
        return self.re * self.re + self.im * self.im


@dataclass(frozen=True)
class Filtration:
    k: int
    tubes: tuple  # tube ids with |omega| >= k
    released: tuple  # tube ids of 𝒱[0] minus 𝒱[k], reattached to M[k]
    coefficients: tuple  # pairs (tube id, MeridianCoefficient)


@dataclass(frozen=True)
class TubeMetricDescriptor:
    tube: str
    core_length_eps1_pi: Fraction  # core length = this * pi * eps1
    radius: float
    note: str = TUBE_FORMULA_NOTE

    def core_length(self) -> float:
        return float(self.core_length_eps1_pi) * math.pi * float(EPS1)


@dataclass(frozen=True)
class GFBrickMetricDescriptor:
    brick: str
    thin_cylinders: tuple  # FN curves shorter than eps1
    pants_count: int
    flare_form: str = "tau(B)e^{2r}+dr^2"
    bilipschitz: str = "front identification uniformly bi-Lipschitz"


# ---------------------------------------------------------------------------
# block metrics


def block_metric(block: bl.Block) -> BlockMetricDescriptor:
    return BlockMetricDescriptor(block=block.blid)


# ---------------------------------------------------------------------------
# meridian coefficients


def _annulus_incidence(core: sf.Curve, y) -> int:
    """Number of vertical boundary annuli a block over domain y
    contributes to the tube around the core."""
    if y is None:
        return 0
    if y.kind == "full":
        return 2
    if y.kind == "annulus":
        return 0
    if bk.curve_in_domain(y, core):
        return 2
    if any(b == core for b in y.boundary):
        full = sf.full_surface(y.ambient)
        sides = [
            d
            for d in sf.component_domains(full, sf.Simplex.of(full, core))
            if d.kind == "proper"
        ]
        return 2 if len(sides) == 1 else 1
    return 0


def _overlaps(a, b) -> bool:
    return a[0] < b[1] and b[0] < a[1]


def boundary_torus_geometry(
    v: bl.Tube, d: bl.BlockDecomposition
) -> MeridianCoefficient:
    """Meridian coefficient of a torus-interface tube: the height counts
    the unit annuli tiling the boundary torus, the twist the annulus
    geodesic attached to the core."""
    if v.interface != "torus":
        raise NotTorusInterface(f"tube {v.tid} meets the blocks in an annulus")
    annuli = 0
    for block in d.blocks:
        if not _overlaps(block.interval, v.band):
            continue
        annuli += _annulus_incidence(v.core, block.support)
    return MeridianCoefficient(tube=v.tid, re=v.twist, im=annuli // 2 + 1)


# ---------------------------------------------------------------------------
# filtration


def filtration(d: bl.BlockDecomposition, k: int) -> Filtration:
    if k < 0:
        raise ValueError("filtration level must be non-negative")
    coefficients = []
    kept = []
    released = []
    for tid in d.torus_tubes:
        v = d.tubes.tube(tid)
        omega = boundary_torus_geometry(v, d)
        coefficients.append((tid, omega))
        if omega.abs2() >= k * k:
            kept.append(tid)
        else:
            released.append(tid)
    return Filtration(
        k=k,
        tubes=tuple(kept),
        released=tuple(released),
        coefficients=tuple(coefficients),
    )


# ---------------------------------------------------------------------------
# tube metrics


def tube_metric(omega: MeridianCoefficient) -> TubeMetricDescriptor:
    """Hyperbolic tube data matching the Euclidean boundary torus."""
    abs2 = omega.abs2()
    core = Fraction(2, abs2)
    # radius from the standard tube area pi * core_length * sinh(2r),
    # matched against the boundary torus area eps1^2 * im(omega)
    sinh2r = float(EPS1) * omega.im * abs2 / (2 * math.pi**2)
    radius = math.asinh(sinh2r) / 2
    return TubeMetricDescriptor(
        tube=omega.tube, core_length_eps1_pi=core, radius=radius
    )


# ---------------------------------------------------------------------------
# geometrically finite bricks


def gf_metric_descriptor(label: bk.EndLabel) -> GFBrickMetricDescriptor:
    if label.kind != "geometrically-finite":
        raise MissingFNData(
            f"label on {label.brick_id} carries no Fenchel-Nielsen record"
        )
    if not label.conformal:
        raise MissingFNData(
            f"geometrically finite label on {label.brick_id} has no curves"
        )
    thin = tuple(
        c for c, length, _ in label.conformal if Fraction(length) < EPS1
    )
    base = label.conformal[0][0].domain.ambient
    pants = 2 * base.genus - 2 + base.punctures
    return GFBrickMetricDescriptor(
        brick=label.brick_id, thin_cylinders=thin, pants_count=pants
    )


# ---------------------------------------------------------------------------
# report


def metric_report(d: bl.BlockDecomposition, ks=(0,)) -> dict:
    """Per-block descriptors, exact meridian coefficients, and filtration
    membership tables for the requested levels."""
    doc = {
        "convention": TWIST_CONVENTION,
        "tube-formula": TUBE_FORMULA_NOTE,
        "eps1": f"{EPS1.numerator}/{EPS1.denominator}",
        "blocks": [
            {
                "id": b.blid,
                "type": b.btype,
                "front-distance": 1,
                "boundary-annulus": "S1(eps1)x[0,1]",
            }
            for b in d.blocks
        ],
        "tubes": [],
        "filtrations": {},
    }
    for tid in d.torus_tubes:
        omega = boundary_torus_geometry(d.tubes.tube(tid), d)
        metric = tube_metric(omega)
        doc["tubes"].append(
            {
                "id": tid,
                "re": omega.re,
                "im": omega.im,
                "abs2": omega.abs2(),
                "core-length-eps1-pi": "{}/{}".format(
                    metric.core_length_eps1_pi.numerator,
                    metric.core_length_eps1_pi.denominator,
                ),
            }
        )
    for k in ks:
        f = filtration(d, k)
        doc["filtrations"][str(k)] = {
            "kept": list(f.tubes),
            "released": list(f.released),
        }
    return doc
