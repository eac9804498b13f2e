import math

import numpy as np
import pytest

from helirod.errors import GeometryError
from helirod.geometry import (
    PRESETS,
    ReferenceConfig,
    RobotGeometry,
    effective_area,
    linear_mass_density,
    load_geometry,
    neutral_axis_length,
    neutral_axis_offset,
    preset,
    reference_config,
    second_moments,
    section_properties,
)

from oracles import notch_period_volume, sector_quadrature

# Frozen from the quadrature oracle at production resolution (800 x 6000
# midpoint cells); see oracles.sector_quadrature.
ORACLE_P1 = dict(A=0.0929400917, r_na=0.4651412631, I_x=4.5258057293e-3, I_y=2.7548871772e-4)
ORACLE_P3 = dict(A=0.1445195453, r_na=0.8129506998, I_x=2.1431724770e-2, I_y=1.0144954140e-3)


def full_annulus(r_in=1.0, r_out=2.0):
    return RobotGeometry(r_in=r_in, r_out=r_out, w=0.4, d=0.2, L=75.4, r_t=0.05,
                         psi=2.0 * math.pi)


class TestEffectiveArea:
    def test_full_annulus(self):
        assert effective_area(full_annulus()) == pytest.approx(3.0 * math.pi, rel=1e-12)

    def test_vanishing_sector(self):
        g = RobotGeometry(r_in=1.0, r_out=2.0, w=0.4, d=0.2, L=75.4, r_t=0.05, psi=1e-12)
        assert effective_area(g) < 1e-11

    def test_prototype1_matches_oracle(self, proto1):
        assert effective_area(proto1) == pytest.approx(ORACLE_P1["A"], rel=1e-6)


class TestNeutralAxisOffset:
    def test_full_annulus_centered(self):
        assert abs(neutral_axis_offset(full_annulus())) < 1e-12

    def test_prototype1(self, proto1):
        assert neutral_axis_offset(proto1) == pytest.approx(ORACLE_P1["r_na"], rel=1e-6)

    def test_prototype3(self):
        assert neutral_axis_offset(preset("prototype3")) == pytest.approx(
            ORACLE_P3["r_na"], rel=1e-6
        )


class TestSecondMoments:
    def test_full_annulus(self):
        ix, iy, iz = second_moments(full_annulus())
        expected = math.pi * 15.0 / 4.0
        assert ix == pytest.approx(expected, rel=1e-12)
        assert iy == pytest.approx(expected, rel=1e-12)
        assert iz == ix + iy

    def test_prototype1_matches_oracle(self, proto1):
        ix, iy, _ = second_moments(proto1)
        assert ix == pytest.approx(ORACLE_P1["I_x"], rel=1e-6)
        assert iy == pytest.approx(ORACLE_P1["I_y"], rel=1e-6)

    def test_polar_is_exact_sum(self):
        for name in PRESETS:
            ix, iy, iz = second_moments(preset(name))
            assert iz == ix + iy  # exact float identity by construction


class TestLinearMassDensity:
    def test_no_notch_limit(self, proto1):
        g = proto1.replace(w=1e-9)
        plain = g.rho * math.pi * (g.r_out**2 - g.r_in**2) * 1e-6
        assert linear_mass_density(g) == pytest.approx(plain, rel=1e-8)

    def test_full_psi_removes_nothing(self, proto1):
        g = proto1.replace(psi=2.0 * math.pi, w=0.123, d=0.456)
        plain = g.rho * math.pi * (g.r_out**2 - g.r_in**2) * 1e-6
        assert linear_mass_density(g) == pytest.approx(plain, rel=1e-12)

    def test_prototype1_value(self, proto1):
        # hand evaluation, cross-checked against the volumetric oracle below
        assert linear_mass_density(proto1) == pytest.approx(1.16268e-3, rel=1e-5)

    def test_volumetric_oracle(self, proto1):
        g = proto1
        vol = notch_period_volume(g.r_in, g.r_out, g.psi, g.w, g.d)
        lam = g.rho * vol / (g.d + g.w) * 1e-6
        assert linear_mass_density(g) == pytest.approx(lam, rel=1e-3)


class TestNeutralAxisLength:
    def test_centered_helix_degenerates(self):
        g = full_annulus()
        assert neutral_axis_length(g) == pytest.approx(g.L, rel=1e-15)

    def test_prototype1(self, proto1):
        expected = math.hypot(75.4, 2.0 * math.pi * ORACLE_P1["r_na"])
        assert neutral_axis_length(proto1) == pytest.approx(expected, rel=1e-6)
        assert neutral_axis_length(proto1) == pytest.approx(75.45662, abs=1e-4)

    def test_zero_length_rejected(self, proto1):
        with pytest.raises(GeometryError, match="L"):
            proto1.replace(L=0.0)


class TestReferenceConfig:
    def test_start(self, proto1, props1):
        p, R, v, u = reference_config(proto1, 0.0)
        assert np.allclose(p, [-props1.r_na, 0.0, 0.0])
        assert np.allclose(R, np.eye(3))

    def test_full_turn(self, proto1, props1):
        p, R, v, u = reference_config(proto1, props1.L_na)
        assert np.allclose(p, [-props1.r_na, 0.0, proto1.L], atol=1e-12)
        assert np.allclose(R, np.eye(3), atol=1e-12)

    def test_unit_speed(self, proto1, props1, ref1):
        h = 1e-5
        for s in (0.0, 10.0, 42.0, props1.L_na - h):
            dp = (ref1.p_star(s + h) - ref1.p_star(s)) / h
            assert np.linalg.norm(dp) == pytest.approx(1.0, abs=1e-6)
        assert np.linalg.norm(ref1.v_star) == pytest.approx(1.0, rel=1e-14)

    def test_position_rate_consistent(self, ref1):
        # dp*/ds must equal R*(s) v* (second-order finite difference)
        h = 1e-4
        for s in (5.0, 30.0, 60.0):
            dp = (ref1.p_star(s + h) - ref1.p_star(s - h)) / (2 * h)
            assert np.allclose(dp, ref1.R_star(s) @ ref1.v_star, atol=1e-7)

    def test_orientation_rate_consistent(self, ref1):
        h = 1e-4
        u = ref1.u_star
        hat_u = np.array([[0, -u[2], u[1]], [u[2], 0, -u[0]], [-u[1], u[0], 0]])
        for s in (5.0, 30.0, 60.0):
            dR = (ref1.R_star(s + h) - ref1.R_star(s - h)) / (2 * h)
            assert np.allclose(dR, ref1.R_star(s) @ hat_u, atol=1e-7)

    def test_out_of_range(self, proto1, props1):
        with pytest.raises(GeometryError, match="arc length"):
            reference_config(proto1, -1.0)
        with pytest.raises(GeometryError, match="arc length"):
            reference_config(proto1, props1.L_na + 1.0)


class TestFullPsiCollapse:
    def test_all_notch_corrections_vanish(self, proto1):
        g = proto1.replace(psi=2.0 * math.pi)
        props = section_properties(g)
        assert abs(props.r_na) < 1e-12
        assert props.L_na == pytest.approx(g.L, rel=1e-15)
        assert props.I_x == pytest.approx(props.I_y, rel=1e-9)
        plain = g.rho * math.pi * (g.r_out**2 - g.r_in**2) * 1e-6
        assert props.linear_density == pytest.approx(plain, rel=1e-12)


class TestClosedFormsAgainstOracle:
    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_presets(self, name):
        g = preset(name)
        area, cx, ix, iy = sector_quadrature(g.r_in, g.r_out, g.psi, nr=400, ntheta=3000)
        assert effective_area(g) == pytest.approx(area, rel=1e-6)
        assert neutral_axis_offset(g) == pytest.approx(cx, rel=1e-6)
        ix_cf, iy_cf, _ = second_moments(g)
        assert ix_cf == pytest.approx(ix, rel=2e-6)
        assert iy_cf == pytest.approx(iy, rel=3e-6)

    def test_random_geometries(self, rng):
        for _ in range(12):
            r_in = rng.uniform(0.3, 1.2)
            g = RobotGeometry(
                r_in=r_in,
                r_out=r_in + rng.uniform(0.05, 0.6),
                w=rng.uniform(0.1, 0.8),
                d=rng.uniform(0.1, 0.8),
                L=rng.uniform(20.0, 120.0),
                r_t=0.5 * r_in,
                psi=rng.uniform(0.3, 2.0 * math.pi),
            )
            area, cx, ix, iy = sector_quadrature(g.r_in, g.r_out, g.psi, nr=300, ntheta=2400)
            assert effective_area(g) == pytest.approx(area, rel=1e-5)
            assert neutral_axis_offset(g) == pytest.approx(cx, rel=1e-5)
            ix_cf, iy_cf, iz_cf = second_moments(g)
            assert ix_cf == pytest.approx(ix, rel=1e-4)
            assert iy_cf == pytest.approx(iy, rel=1e-3, abs=1e-12)
            assert iy_cf >= 0.0
            assert neutral_axis_length(g) >= g.L


class TestValidation:
    @pytest.mark.parametrize(
        "field,value,msg",
        [
            ("r_in", -0.1, "r_in"),
            ("r_out", 0.3, "r_in < r_out"),
            ("psi", 0.0, "psi"),
            ("psi", 7.0, "psi"),
            ("w", 0.0, "w"),
            ("d", -1.0, "d"),
            ("L", 0.0, "L"),
            ("r_t", 0.5, "r_t"),
            ("rho", 0.0, "rho"),
            ("E", -5.0, "E"),
            ("G", 0.0, "G"),
        ],
    )
    def test_bounds_named(self, proto1, field, value, msg):
        with pytest.raises(GeometryError, match=msg):
            proto1.replace(**{field: value})


class TestConfigLoading:
    def test_from_dict(self, proto1):
        doc = {"r_in": 0.457, "r_out": 0.572, "w": 0.4, "d": 0.2, "L": 75.4,
               "r_t": 0.05, "psi": proto1.psi}
        g = load_geometry(doc)
        assert g == proto1

    def test_from_json_string(self):
        g = load_geometry('{"preset": "prototype2"}')
        assert g == preset("prototype2")

    def test_preset_with_override(self):
        g = load_geometry({"preset": "prototype1", "L": 80.0})
        assert g.L == 80.0
        assert g.r_in == preset("prototype1").r_in

    def test_from_file(self, tmp_path):
        path = tmp_path / "geom.json"
        path.write_text('{"preset": "prototype3"}')
        assert load_geometry(str(path)) == preset("prototype3")

    def test_unknown_field(self):
        with pytest.raises(GeometryError, match="unknown"):
            load_geometry({"preset": "prototype1", "bogus": 1.0})

    def test_missing_fields(self):
        with pytest.raises(GeometryError, match="missing"):
            load_geometry({"r_in": 0.4})

    def test_unknown_preset(self):
        with pytest.raises(GeometryError, match="prototype"):
            preset("prototype9")
