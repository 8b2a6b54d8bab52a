"""
Ambient magnetic field produced by rail return currents.

Rails and laboratory cables are treated as thin line conductors in vacuum.
All field values are RMS; peak amplitudes appear only where a name says
``_peak``.
"""

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from harvestr.errors import DomainError

if TYPE_CHECKING:
    from harvestr.models.geometry import LabLoopGeometry, RailSiteGeometry

MU_0 = 4e-7 * math.pi  # H/m

# Scandinavian / Central-European traction supply
RAILWAY_HZ = 50 / 3


@dataclass(frozen=True)
class SourceCurrent:
    """
    RMS rail return current.

    Args:
        i_rms (float): Total current in amperes RMS
        frequency (float): Supply frequency in hertz
    """

    i_rms: float
    frequency: float = RAILWAY_HZ

    def __post_init__(self):
        if not self.i_rms >= 0:
            raise DomainError(f"Current must be non-negative, got {self.i_rms} A")
        if not self.frequency > 0:
            raise DomainError(f"Frequency must be positive, got {self.frequency} Hz")

    @property
    def omega(self):
        return 2 * math.pi * self.frequency

    def scaled(self, factor):
        """Return the same source with its current multiplied by ``factor``."""
        return SourceCurrent(self.i_rms * factor, self.frequency)


@dataclass(frozen=True)
class FieldStrength:
    """Vertical (harvester axis) field strength in A/m RMS."""

    h_rms: float

    def __post_init__(self):
        if not self.h_rms >= 0:
            raise DomainError(f"Field strength must be non-negative, got {self.h_rms}")

    @property
    def b_rms(self):
        """Free-air flux density in tesla RMS."""
        return MU_0 * self.h_rms


def rms_to_peak(value):
    return value * math.sqrt(2)


def peak_to_rms(value_peak):
    return value_peak / math.sqrt(2)


def _require_positive(name, value):
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value}")


def effective_radius(r_n, d_rr):
    """
    Single-conductor equivalent distance of a two-rail track.

    Args:
        r_n (float): Distance from the nearest rail to the coil axis in metres
        d_rr (float): Rail-to-rail separation in metres

    Returns:
        float: Effective radius r_e in metres, within [r_n, 2*r_n)
    """
    _require_positive("r_n", r_n)
    if not d_rr >= 0:
        raise DomainError(f"d_rr must be non-negative, got {d_rr}")
    return 2 * r_n * (r_n + d_rr) / (2 * r_n + d_rr)


def line_conductor_field(i, r):
    """Field magnitude I/(2*pi*r) of an infinite straight conductor."""
    _require_positive("r", r)
    return i / (2 * math.pi * r)


def field_two_rail(src, geom: "RailSiteGeometry"):
    """
    Field beside a two-rail track, outside the region between the rails.

    Both rail contributions are parallel and additive there. With an even
    current split this reduces to I/(2*pi*r_e).

    Args:
        src (SourceCurrent): Total return current
        geom (RailSiteGeometry): Site geometry

    Returns:
        FieldStrength: Field at the harvester
    """
    near = geom.current_split * src.i_rms
    far = (1 - geom.current_split) * src.i_rms
    if geom.current_split == 0.5:
        h = line_conductor_field(src.i_rms, effective_radius(geom.r_n, geom.d_rr))
    else:
        h = line_conductor_field(near, geom.r_n) + line_conductor_field(
            far, geom.r_n + geom.d_rr
        )
    return FieldStrength(h)


def plane_field(src, geom: "RailSiteGeometry", x):
    """
    Signed vertical field on the rail plane at horizontal position ``x``.

    ``x`` is measured from the near rail centre, positive away from the
    track; ``-d_rr < x < 0`` lies between the rails where the two
    contributions oppose each other. Rail centres themselves are singular.

    Returns:
        float: Signed field strength in A/m RMS
    """
    near_r = abs(x)
    far_r = abs(x + geom.d_rr)
    if near_r == 0 or far_r == 0:
        raise DomainError(f"Position {x} m coincides with a rail centre")
    near = geom.current_split * src.i_rms / (2 * math.pi * x)
    far = (1 - geom.current_split) * src.i_rms / (2 * math.pi * (x + geom.d_rr))
    return near + far


def segment_correction(r, a):
    """Finite-length factor a/sqrt(4r^2 + a^2) applied to the infinite-wire term."""
    _require_positive("r", r)
    _require_positive("a", a)
    return a / math.sqrt(4 * r**2 + a**2)


def field_finite_segment(src, r, a):
    """
    Field on the perpendicular bisector of a straight conductor of length ``a``.

    Args:
        src (SourceCurrent): Conductor current
        r (float): Distance from the conductor in metres
        a (float): Conductor length in metres

    Returns:
        FieldStrength: Field at distance ``r``
    """
    return FieldStrength(line_conductor_field(src.i_rms, r) * segment_correction(r, a))


def field_lab_loop(src, loop: "LabLoopGeometry"):
    """
    Field of a rectangular laboratory loop seen from outside its near side.

    The far side, ``b`` metres further away, carries the return current and
    subtracts. The short sides are taken to cancel.
    """
    near = field_finite_segment(src, loop.r, loop.a).h_rms
    far = field_finite_segment(src, loop.r + loop.b, loop.a).h_rms
    return FieldStrength(max(near - far, 0.0))
