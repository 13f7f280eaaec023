import math

import pytest

from brickforge import charts
from brickforge import surfaces as sf
from brickforge.errors import CertificateError, DomainError
from brickforge.farey import Slope, enumerate_slopes, farey_bfs_distance


def torus():
    return sf.full_surface(sf.TORUS_1_1)


def sphere():
    return sf.full_surface(sf.SPHERE_0_4)


def twice_punctured():
    return sf.full_surface(sf.TORUS_1_2)


def slope_certificate(domain, bound):
    return sf.DistanceCertificate(
        [sf.Curve(domain, sf.FareySlope(s)) for s in enumerate_slopes(bound)]
    )


class TestSurface:
    def test_complexity(self):
        assert sf.complexity(sf.Surface(1, 1)) == 4
        assert sf.complexity(sf.Surface(0, 3)) == 3
        assert sf.complexity(sf.Surface(1, 2)) == 5

    def test_invariants(self):
        with pytest.raises(ValueError):
            sf.Surface(0, 2)
        with pytest.raises(ValueError):
            sf.Surface(1, 0)


class TestIntersection:
    def test_torus_values(self):
        d = torus()
        assert sf.intersection_number(sf.slope_curve(d, 0, 1), sf.slope_curve(d, 1, 0)) == 1
        assert sf.intersection_number(sf.slope_curve(d, 2, 3), sf.slope_curve(d, 2, 3)) == 0

    def test_sphere_doubles(self):
        d = sphere()
        assert sf.intersection_number(sf.slope_curve(d, 0, 1), sf.slope_curve(d, 1, 0)) == 2

    def test_domain_mismatch(self):
        with pytest.raises(DomainError):
            sf.intersection_number(
                sf.slope_curve(torus(), 0, 1), sf.slope_curve(sphere(), 1, 0)
            )

    def test_flat_curves(self):
        d = twice_punctured()
        v0 = sf.line_class(d, 0, 1, 0)
        h = sf.line_class(d, 1, 0)
        assert sf.intersection_number(v0, h) == 1

    def test_annulus_arcs(self):
        d = twice_punctured()
        core = sf.line_class(d, 0, 1, 0)
        ann = [
            y for y in sf.component_domains(d, sf.Simplex.of(d, core)) if y.kind == "annulus"
        ][0]
        a3 = sf.arc_curve(ann, 3)
        a5 = sf.arc_curve(ann, 5)
        assert sf.intersection_number(a3, a5) == 1
        assert sf.are_adjacent(a3, sf.arc_curve(ann, 4))
        assert not sf.are_adjacent(a3, a5)
        with pytest.raises(ValueError):
            sf.are_adjacent(a3, sf.arc_curve(ann, 3))


class TestAdjacency:
    def test_torus(self):
        d = torus()
        assert sf.are_adjacent(sf.slope_curve(d, 0, 1), sf.slope_curve(d, 1, 1))
        assert sf.are_adjacent(sf.slope_curve(d, 0, 1), sf.slope_curve(d, 1, 2))

    def test_torus_non_adjacent(self):
        d = torus()
        assert not sf.are_adjacent(sf.slope_curve(d, 0, 1), sf.slope_curve(d, 2, 1))

    def test_flat_disjointness_rule(self):
        d = twice_punctured()
        v0 = sf.line_class(d, 0, 1, 0)
        v1 = sf.line_class(d, 0, 1, 1)
        h = sf.line_class(d, 1, 0)
        assert sf.are_adjacent(v0, v1)
        assert not sf.are_adjacent(v0, h)


class TestFareyGeodesic:
    def test_edge(self):
        d = torus()
        path = sf.farey_geodesic(sf.slope_curve(d, 0, 1), sf.slope_curve(d, 1, 0))
        assert len(path) == 2

    def test_point(self):
        d = torus()
        path = sf.farey_geodesic(sf.slope_curve(d, 0, 1), sf.slope_curve(d, 0, 1))
        assert len(path) == 1

    def test_length_matches_oracle(self):
        d = torus()
        u, w = sf.slope_curve(d, 0, 1), sf.slope_curve(d, 3, 5)
        path = sf.farey_geodesic(u, w)
        assert len(path) - 1 == farey_bfs_distance(Slope(0, 1), Slope(3, 5), 10)

    def test_round_trip_tightness(self):
        d = torus()
        cert = slope_certificate(d, 8)
        path = sf.farey_geodesic(sf.slope_curve(d, -1, 3), sf.slope_curve(d, 5, 2))
        assert sf.is_tight_sequence(path, cert)


class TestTightSequences:
    def test_single_simplex(self):
        d = torus()
        assert sf.is_tight_sequence([sf.Simplex.of(d, sf.slope_curve(d, 0, 1))])

    def test_backtracking_rejected(self):
        d = torus()
        seq = [
            sf.Simplex.of(d, sf.slope_curve(d, 0, 1)),
            sf.Simplex.of(d, sf.slope_curve(d, 1, 0)),
            sf.Simplex.of(d, sf.slope_curve(d, 0, 1)),
        ]
        assert not sf.is_tight_sequence(seq, slope_certificate(d, 4))

    def test_certificate_coverage_enforced(self):
        d = torus()
        seq = [
            sf.Simplex.of(d, sf.slope_curve(d, 0, 1)),
            sf.Simplex.of(d, sf.slope_curve(d, 99, 100)),
        ]
        with pytest.raises(CertificateError):
            sf.is_tight_sequence(seq, slope_certificate(d, 4))

    def test_flat_tight_triple(self):
        d = twice_punctured()
        # the outer pair fills a one-holed torus whose boundary is exactly
        # the middle vertex, so the triple is tight
        v0 = sf.line_class(d, 0, 1, 0)
        h = sf.line_class(d, 1, 0)
        mid = sf.slot_class(d, (0, 0), (-1, 0))
        cert = sf.DistanceCertificate([v0, h, mid, sf.line_class(d, 0, 1, 1)])
        seq = [sf.Simplex.of(d, v0), sf.Simplex.of(d, mid), sf.Simplex.of(d, h)]
        assert sf.is_tight_sequence(seq, cert)

    def test_flat_tight_triple_through_strip_wall(self):
        d = twice_punctured()
        # v1 and the corridor curve both live in the strip bounded by v0
        # and fill it, so v0 is the tight middle vertex
        v0 = sf.line_class(d, 0, 1, 0)
        v1 = sf.line_class(d, 0, 1, 1)
        a1 = sf.slot_class(d, (1, 0), (2, 1))
        cert = sf.DistanceCertificate([v0, v1, a1, sf.line_class(d, 1, 0)])
        seq = [sf.Simplex.of(d, v1), sf.Simplex.of(d, v0), sf.Simplex.of(d, a1)]
        assert sf.is_tight_sequence(seq, cert)

    def test_flat_non_tight_triple(self):
        d = twice_punctured()
        # v0 and h cross, so the middle-to-endpoint distance is wrong
        v0 = sf.line_class(d, 0, 1, 0)
        v1 = sf.line_class(d, 0, 1, 1)
        h = sf.line_class(d, 1, 0)
        mid = sf.slot_class(d, (0, 0), (-1, 0))
        cert = sf.DistanceCertificate([v0, v1, h, mid])
        seq = [sf.Simplex.of(d, v1), sf.Simplex.of(d, v0), sf.Simplex.of(d, h)]
        assert not sf.is_tight_sequence(seq, cert)

    def test_consequence_property(self):
        d = torus()
        path = sf.farey_geodesic(sf.slope_curve(d, 0, 1), sf.slope_curve(d, 8, 5))
        probes = [sf.Curve(d, sf.FareySlope(s)) for s in enumerate_slopes(6)]
        assert sf.tightness_consequence_holds(path, probes)


class TestSubsurfaceBoundary:
    def test_single_curve_dedups(self):
        d = twice_punctured()
        v0 = sf.line_class(d, 0, 1, 0)
        sb = sf.subsurface_boundary(sf.Simplex.of(d, v0), sf.Simplex.of(d, v0))
        assert set(sb.curves) == {v0}

    def test_disjoint_pair(self):
        d = twice_punctured()
        v0 = sf.line_class(d, 0, 1, 0)
        v1 = sf.line_class(d, 0, 1, 1)
        sb = sf.subsurface_boundary(sf.Simplex.of(d, v0), sf.Simplex.of(d, v1))
        assert set(sb.curves) == {v0, v1}

    def test_crossing_pair_gives_separating_curve(self):
        d = twice_punctured()
        v0 = sf.line_class(d, 0, 1, 0)
        h = sf.line_class(d, 1, 0)
        sb = sf.subsurface_boundary(sf.Simplex.of(d, v0), sf.Simplex.of(d, h))
        assert len(sb.curves) == 1 and not sb.filling
        (c,) = sb.curves
        assert c == sf.slot_class(d, (0, 0), (-1, 0))

    def test_filling_pair(self):
        d = twice_punctured()
        d1 = sf.line_class(d, 1, 1)
        d2 = sf.line_class(d, 1, -1)
        sb = sf.subsurface_boundary(sf.Simplex.of(d, d1), sf.Simplex.of(d, d2))
        assert sb.filling and sb.is_empty()


class TestComponentDomains:
    def test_empty_simplex(self):
        d = torus()
        assert sf.component_domains(d, sf.Simplex(d, frozenset())) == [d]

    def test_torus_cut(self):
        d = torus()
        doms = sf.component_domains(d, sf.Simplex.of(d, sf.slope_curve(d, 0, 1)))
        kinds = sorted(y.kind for y in doms)
        assert kinds == ["annulus", "proper"]
        assert [y.ttype for y in doms if y.kind == "proper"] == [(0, 3)]

    def test_nonseparating_cut(self):
        d = twice_punctured()
        v0 = sf.line_class(d, 0, 1, 0)
        doms = sf.component_domains(d, sf.Simplex.of(d, v0))
        proper = [y for y in doms if y.kind == "proper"]
        assert len(proper) == 1 and proper[0].ttype == (0, 4)
        assert isinstance(proper[0].chart, charts.StripChart)
        assert sum(1 for y in doms if y.kind == "annulus") == 1

    def test_separating_cut(self):
        d = twice_punctured()
        s0 = sf.slot_class(d, (0, 0), (1, 0))
        doms = sf.component_domains(d, sf.Simplex.of(d, s0))
        ttypes = sorted(y.ttype for y in doms if y.kind == "proper")
        assert ttypes == [(0, 3), (1, 1)]

    def test_pants_decomposition_cut(self):
        d = twice_punctured()
        v0 = sf.line_class(d, 0, 1, 0)
        v1 = sf.line_class(d, 0, 1, 1)
        doms = sf.component_domains(d, sf.Simplex.of(d, v0, v1))
        assert sorted(y.kind for y in doms) == ["annulus", "annulus", "proper", "proper"]
        for y in doms:
            if y.kind == "proper":
                assert y.ttype == (0, 3)

    def test_euler_characteristic_bookkeeping(self):
        d = twice_punctured()
        for simplex in (
            sf.Simplex.of(d, sf.line_class(d, 0, 1, 0)),
            sf.Simplex.of(d, sf.slot_class(d, (0, 0), (1, 0))),
        ):
            doms = sf.component_domains(d, simplex)
            chi = sum(
                2 - 2 * y.ttype[0] - y.ttype[1] for y in doms if y.kind == "proper"
            )
            assert chi == sf.TORUS_1_2.euler()


class TestRestrictMarking:
    def test_disjoint_marking_restricts_to_empty(self):
        d = twice_punctured()
        v0 = sf.line_class(d, 0, 1, 0)
        v1 = sf.line_class(d, 0, 1, 1)
        doms = sf.component_domains(d, sf.Simplex.of(d, v0))
        ann = [y for y in doms if y.kind == "annulus"][0]
        m = sf.Marking(sf.Simplex.of(d, v1))
        assert sf.restrict_marking(m, ann) is None

    def test_annulus_restriction_uses_twist(self):
        d = twice_punctured()
        v0 = sf.line_class(d, 0, 1, 0)
        h = sf.line_class(d, 1, 0)
        doms = sf.component_domains(d, sf.Simplex.of(d, v0))
        ann = [y for y in doms if y.kind == "annulus"][0]
        m = sf.Marking(sf.Simplex.of(d, v0), transversals=((v0, h),), twists=((v0, 2),))
        r = sf.restrict_marking(m, ann)
        assert r is not None
        (arc,) = r.base.curves
        assert arc.rep.twist == 2

    def test_strip_restriction_projects(self):
        d = twice_punctured()
        v0 = sf.line_class(d, 0, 1, 0)
        h = sf.line_class(d, 1, 0)
        doms = sf.component_domains(d, sf.Simplex.of(d, v0))
        strip = [y for y in doms if y.kind == "proper"][0]
        m = sf.Marking(sf.Simplex.of(d, v0), transversals=((v0, h),))
        r = sf.restrict_marking(m, strip)
        assert r is not None
        slopes = sorted(str(c.rep.slope) for c in r.base.curves)
        assert slopes == ["0/1"]

    def test_torus_side_restriction(self):
        d = twice_punctured()
        s0 = sf.slot_class(d, (0, 0), (1, 0))
        v0 = sf.line_class(d, 0, 1, 0)
        doms = sf.component_domains(d, sf.Simplex.of(d, s0))
        side = [y for y in doms if y.ttype == (1, 1)][0]
        m = sf.Marking(sf.Simplex.of(d, s0), transversals=((s0, v0),))
        r = sf.restrict_marking(m, side)
        assert r is not None
        slopes = [str(c.rep.slope) for c in r.base.curves]
        assert slopes == ["0/1"]

    def test_pants_never_carries_curves(self):
        d = twice_punctured()
        s0 = sf.slot_class(d, (0, 0), (1, 0))
        doms = sf.component_domains(d, sf.Simplex.of(d, s0))
        pants = [y for y in doms if y.ttype == (0, 3)][0]
        m = sf.Marking(sf.Simplex.of(d, s0))
        assert sf.restrict_marking(m, pants) is None


class TestChartConsistency:
    def test_strip_slopes_match_ambient_intersections(self):
        strip = charts.StripChart(0)
        for s1 in (Slope(0, 1), Slope(2, 1), Slope(1, 0)):
            for s2 in (Slope(0, 1), Slope(-2, 1)):
                c1 = charts.AMBIENT.curve(strip.realize(s1))
                c2 = charts.AMBIENT.curve(strip.realize(s2))
                from brickforge import flatcurves as fc
                from brickforge.farey import slope_intersection

                assert fc.flat_intersection(c1, c2) == slope_intersection(
                    s1, s2, doubled=True
                )

    def test_torus_side_fan_is_farey(self):
        side = charts.TorusSideChart(1, 0)
        from brickforge import flatcurves as fc
        from brickforge.farey import slope_intersection

        slopes = [Slope(1, 0), Slope(0, 1), Slope(1, 1), Slope(-1, 1)]
        built = {s: charts.AMBIENT.curve(side.realize(s)) for s in slopes}
        sigma = charts.AMBIENT.curve(side.sigma_desc())
        for s, c in built.items():
            assert fc.flat_intersection(c, sigma) == 0
        for i, s1 in enumerate(slopes):
            for s2 in slopes[i + 1 :]:
                assert fc.flat_intersection(built[s1], built[s2]) == slope_intersection(
                    s1, s2
                )

    def test_projection_of_transversals(self):
        from brickforge import flatcurves as fc

        strip = charts.StripChart(0)
        assert charts.project_to_chart(strip, fc.line_curve(1, 0)) == [Slope(0, 1)]
        assert charts.project_to_chart(strip, fc.line_curve(1, 1)) == [Slope(2, 1)]
        side = charts.TorusSideChart(1, 0)
        assert charts.project_to_chart(side, fc.line_curve(0, 1, 0)) == [Slope(0, 1)]
