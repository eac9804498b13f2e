"""Cross-section and reference-configuration quantities of the notched tube.

The robot is a nitinol tube with helical unidirectional notches. In every
cross-section the uncut material forms an annular sector spanning an angle
``psi``; that sector is the load-carrying backbone. Because the notch
pattern completes one full turn over the tube length, the centroid of the
sector (the neutral axis) traces a helix of radius ``r_na`` around the
tube's central axis.

All lengths are millimeters, forces newtons, moduli N/mm^2 (MPa). The one
exception is mass density, which stays in kg/m^3 and is converted where
the gravity load is assembled (see :mod:`helirod.statics`).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import GeometryError

__all__ = [
    "RobotGeometry",
    "SectionProperties",
    "ReferenceConfig",
    "effective_area",
    "neutral_axis_offset",
    "second_moments",
    "linear_mass_density",
    "neutral_axis_length",
    "reference_config",
    "section_properties",
    "preset",
    "PRESETS",
    "load_geometry",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RobotGeometry:
    """Raw design parameters of a notched tube prototype.

    Attributes:
        r_in: inner tube radius (mm).
        r_out: outer tube radius (mm).
        w: notch width along the tube axis (mm).
        d: uncut spacing between notches along the tube axis (mm).
        L: tube length (mm).
        r_t: actuation tendon radius (mm).
        psi: arc angle of the uncut sector in each cross-section (rad).
        rho: material mass density (kg/m^3).
        E: elastic modulus (N/mm^2).
        G: shear modulus (N/mm^2).
    """

    r_in: float
    r_out: float
    w: float
    d: float
    L: float
    r_t: float
    psi: float
    rho: float = 6255.0
    E: float = 75000.0
    G: float = 25000.0

    def __post_init__(self):
        checks = [
            (0.0 < self.r_in, "r_in must satisfy 0 < r_in"),
            (self.r_in < self.r_out, "radii must satisfy r_in < r_out"),
            (0.0 < self.psi <= TWO_PI, "psi must satisfy 0 < psi <= 2*pi"),
            (self.w > 0.0, "notch width w must be > 0"),
            (self.d > 0.0, "notch spacing d must be > 0"),
            (self.L > 0.0, "tube length L must be > 0"),
            (0.0 < self.r_t < self.r_in, "tendon radius must satisfy 0 < r_t < r_in"),
            (self.rho > 0.0, "mass density rho must be > 0"),
            (self.E > 0.0, "elastic modulus E must be > 0"),
            (self.G > 0.0, "shear modulus G must be > 0"),
        ]
        for ok, msg in checks:
            if not ok:
                raise GeometryError(msg)

    def replace(self, **kwargs) -> "RobotGeometry":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class SectionProperties:
    """Derived cross-section quantities, constant along the tube.

    ``I_x`` and ``I_y`` are the centroidal second moments of area of the
    uncut sector: ``I_x`` integrates the squared perpendicular offset
    (bending about the local x axis), ``I_y`` the squared offset along the
    sector's symmetry direction after shifting to the centroid via the
    parallel axis theorem. ``I_z = I_x + I_y`` is the polar moment.

    ``linear_density`` is in kg/m; everything else in mm-based units.
    """

    A: float
    r_na: float
    I_x: float
    I_y: float
    I_z: float
    linear_density: float
    L: float
    L_na: float
    r_tendon_x: float
    E: float
    G: float

    @property
    def r_tendon(self) -> np.ndarray:
        """Local tendon offset: opposite the uncut sector, against the inner wall."""
        return np.array([self.r_tendon_x, 0.0, 0.0])


def effective_area(geom: RobotGeometry) -> float:
    """Area of the uncut annular sector: psi*(r_out^2 - r_in^2)/2 (mm^2)."""
    return geom.psi * (geom.r_out**2 - geom.r_in**2) / 2.0


def neutral_axis_offset(geom: RobotGeometry) -> float:
    """Centroid offset of the sector from the tube's central axis (mm).

    (4/3) * sin(psi/2) * (r_out^3 - r_in^3) / (psi * (r_out^2 - r_in^2))
    """
    num = (4.0 / 3.0) * math.sin(geom.psi / 2.0) * (geom.r_out**3 - geom.r_in**3)
    return num / (geom.psi * (geom.r_out**2 - geom.r_in**2))


def second_moments(geom: RobotGeometry) -> tuple[float, float, float]:
    """Centroidal second moments of area (I_x, I_y, I_z) of the sector (mm^4).

    With the local x axis along the sector's symmetry direction:

        I_x = (psi - sin(psi)) * (r_out^4 - r_in^4) / 8
        I_y = (psi + sin(psi)) * (r_out^4 - r_in^4) / 8 - A * r_na^2
        I_z = I_x + I_y

    The parallel-axis correction applies to I_y only, because the centroid
    is offset along x. I_y >= 0 always holds for valid geometry (it is the
    area-weighted variance of the x coordinate); a negative value can only
    come from corrupted inputs.
    """
    dr4 = geom.r_out**4 - geom.r_in**4
    a = effective_area(geom)
    r_na = neutral_axis_offset(geom)
    i_x = (geom.psi - math.sin(geom.psi)) * dr4 / 8.0
    i_y = (geom.psi + math.sin(geom.psi)) * dr4 / 8.0 - a * r_na**2
    if i_y < 0.0:
        raise GeometryError(
            f"internal consistency error: I_y = {i_y!r} < 0 for a valid geometry"
        )
    return i_x, i_y, i_x + i_y


def linear_mass_density(geom: RobotGeometry) -> float:
    """Linear mass density of the notched tube (kg/m).

    One notch period of length d+w contains a full ring of width d plus
    the sector-only portion of width w:

        lambda = rho * (pi*d + psi*w/2) * (r_out^2 - r_in^2) / (d + w)

    rho is kg/m^3 and the section factor mm^2, so a 1e-6 factor converts
    the result to kg/m.
    """
    section = (math.pi * geom.d + geom.psi * geom.w / 2.0) * (geom.r_out**2 - geom.r_in**2)
    return geom.rho * section / (geom.d + geom.w) * 1e-6


def neutral_axis_length(geom: RobotGeometry) -> float:
    """Arc length of the helical neutral axis: sqrt(L^2 + (2*pi*r_na)^2) (mm)."""
    return math.hypot(geom.L, TWO_PI * neutral_axis_offset(geom))


def section_properties(geom: RobotGeometry) -> SectionProperties:
    """Bundle all derived cross-section quantities for a geometry."""
    a = effective_area(geom)
    r_na = neutral_axis_offset(geom)
    i_x, i_y, i_z = second_moments(geom)
    return SectionProperties(
        A=a,
        r_na=r_na,
        I_x=i_x,
        I_y=i_y,
        I_z=i_z,
        linear_density=linear_mass_density(geom),
        L=geom.L,
        L_na=neutral_axis_length(geom),
        r_tendon_x=r_na + geom.r_in - geom.r_t,
        E=geom.E,
        G=geom.G,
    )


@dataclass(frozen=True)
class ReferenceConfig:
    """Unloaded (zero-tension) configuration of the neutral axis.

    The neutral axis is a unit-speed helix of radius r_na and height L over
    one full turn, parametrized by its own arc length s in [0, L_na]. The
    material frame rotates about the global Z axis at the same rate, so the
    local rates v_star (dimensionless) and u_star (1/mm) are constant.
    """

    r_na: float
    L: float
    L_na: float
    v_star: np.ndarray = field(repr=False, default=None)
    u_star: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        v = np.array([0.0, -TWO_PI * self.r_na / self.L_na, self.L / self.L_na])
        u = np.array([0.0, 0.0, TWO_PI / self.L_na])
        object.__setattr__(self, "v_star", v)
        object.__setattr__(self, "u_star", u)

    @classmethod
    def from_geometry(cls, geom: RobotGeometry) -> "ReferenceConfig":
        return cls(
            r_na=neutral_axis_offset(geom),
            L=geom.L,
            L_na=neutral_axis_length(geom),
        )

    def p_star(self, s: float) -> np.ndarray:
        """Helix position at arc length s (global frame, mm)."""
        ang = TWO_PI * s / self.L_na
        return np.array(
            [
                -self.r_na * math.cos(ang),
                -self.r_na * math.sin(ang),
                self.L * s / self.L_na,
            ]
        )

    def R_star(self, s: float) -> np.ndarray:
        """Material orientation at arc length s: rotation about global Z."""
        ang = TWO_PI * s / self.L_na
        c, si = math.cos(ang), math.sin(ang)
        return np.array([[c, -si, 0.0], [si, c, 0.0], [0.0, 0.0, 1.0]])


def reference_config(
    geom: RobotGeometry, s: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate (p_star, R_star, v_star, u_star) at arc length s in [0, L_na]."""
    ref = ReferenceConfig.from_geometry(geom)
    if not 0.0 <= s <= ref.L_na * (1.0 + 1e-12):
        raise GeometryError(f"arc length s={s!r} outside [0, L_na={ref.L_na!r}]")
    return ref.p_star(s), ref.R_star(s), ref.v_star.copy(), ref.u_star.copy()


# Manufactured prototype parameter sets. 1/2 and 3/4 share dimensions and
# differ only in the sector angle psi (i.e. notch depth / compliance).
PRESETS: dict[str, RobotGeometry] = {
    "prototype1": RobotGeometry(
        r_in=0.457, r_out=0.572, w=0.4, d=0.2, L=75.4, r_t=0.05, psi=math.radians(90.0)
    ),
    "prototype2": RobotGeometry(
        r_in=0.457, r_out=0.572, w=0.4, d=0.2, L=75.4, r_t=0.05, psi=math.radians(107.0)
    ),
    "prototype3": RobotGeometry(
        r_in=0.851, r_out=0.953, w=0.5, d=0.3, L=63.27, r_t=0.1, psi=math.radians(90.0)
    ),
    "prototype4": RobotGeometry(
        r_in=0.851, r_out=0.953, w=0.5, d=0.3, L=63.27, r_t=0.1, psi=math.radians(126.0)
    ),
}


def preset(name: str) -> RobotGeometry:
    """Look up a named prototype geometry."""
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise GeometryError(f"unknown preset {name!r} (known: {known})") from None


def load_geometry(source) -> RobotGeometry:
    """Build a geometry from a JSON file path, a JSON string, or a dict.

    The document maps field names to numbers, e.g.
    ``{"r_in": 0.457, "r_out": 0.572, "w": 0.4, "d": 0.2, "L": 75.4,
    "r_t": 0.05, "psi": 1.5708}``. rho/E/G fall back to nitinol defaults.
    A ``{"preset": "prototype1"}`` document selects a preset, optionally
    overridden by explicit fields.
    """
    if isinstance(source, dict):
        doc = dict(source)
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            doc = json.loads(text)
        else:
            with open(text, encoding="utf-8") as fh:
                doc = json.load(fh)
    if not isinstance(doc, dict):
        raise GeometryError("geometry document must be a JSON object")
    base = {}
    if "preset" in doc:
        base = asdict(preset(doc.pop("preset")))
    known = set(RobotGeometry.__dataclass_fields__)
    unknown = set(doc) - known
    if unknown:
        raise GeometryError(f"unknown geometry fields: {sorted(unknown)}")
    base.update({k: float(v) for k, v in doc.items()})
    missing = {f for f in ("r_in", "r_out", "w", "d", "L", "r_t", "psi")} - set(base)
    if missing:
        raise GeometryError(f"missing geometry fields: {sorted(missing)}")
    return RobotGeometry(**base)
