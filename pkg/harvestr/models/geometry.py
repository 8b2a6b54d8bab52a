"""
Conductor geometries that produce the harvester's applied field.
"""

import abc
import dataclasses
from dataclasses import dataclass

from harvestr.errors import DomainError, ValidationError
from harvestr.models import magnetics


class FieldGeometry(abc.ABC):
    """Abstract base class for all conductor geometries."""

    kind = None

    @property
    @abc.abstractmethod
    def distance(self):
        """
        Harvester distance from the nearest conductor.

        Returns:
            float: Distance in metres
        """
        pass

    @abc.abstractmethod
    def at(self, distance):
        """
        Copy of this geometry with the harvester moved to ``distance``.

        Args:
            distance (float): New distance in metres

        Returns:
            FieldGeometry: Geometry of the same kind
        """
        pass

    @abc.abstractmethod
    def field(self, src):
        """
        Applied field for a given source current.

        Args:
            src (SourceCurrent): Source current

        Returns:
            FieldStrength: Field at the harvester
        """
        pass


@dataclass(frozen=True)
class RailSiteGeometry(FieldGeometry):
    """
    Harvester placed beside a two-rail track, outside the rails.

    Args:
        r_n (float): Nearest-rail to coil-axis distance in metres
        d_rr (float): Rail-to-rail separation in metres
        current_split (float): Fraction of the return current in the near rail
    """

    r_n: float
    d_rr: float = 1.435
    current_split: float = 0.5

    kind = "two_rail"

    def __post_init__(self):
        if not self.r_n > 0:
            raise DomainError(
                f"r_n must be positive (inter-rail region is not modelled), got {self.r_n}"
            )
        if not self.d_rr >= 0:
            raise DomainError(f"d_rr must be non-negative, got {self.d_rr}")
        if not 0 <= self.current_split <= 1:
            raise DomainError(
                f"current_split must lie in [0, 1], got {self.current_split}"
            )

    @property
    def distance(self):
        return self.r_n

    @property
    def r_e(self):
        return magnetics.effective_radius(self.r_n, self.d_rr)

    def at(self, distance):
        return dataclasses.replace(self, r_n=distance)

    def field(self, src):
        return magnetics.field_two_rail(src, self)


@dataclass(frozen=True)
class LabLoopGeometry(FieldGeometry):
    """
    Rectangular current loop used to emulate a rail on the bench.

    Args:
        r (float): Coil distance from the near conductor in metres
        a (float): Conductor length in metres
        b (float): Near-to-far side separation in metres
    """

    r: float
    a: float = 1.2
    b: float = 3.0

    kind = "lab_loop"

    def __post_init__(self):
        for name in ("r", "a", "b"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"Lab loop {name} must be positive, got {value}")

    @property
    def distance(self):
        return self.r

    def at(self, distance):
        return dataclasses.replace(self, r=distance)

    def field(self, src):
        return magnetics.field_lab_loop(src, self)


def make_geometry(kind, distance, **kwargs):
    """
    Build a geometry by name.

    Args:
        kind (str): 'two_rail' or 'lab_loop'
        distance (float): Harvester distance in metres
        **kwargs: Remaining geometry fields

    Returns:
        FieldGeometry: The requested geometry

    Raises:
        ValidationError: If the geometry kind is not recognized
    """
    if kind == "two_rail":
        return RailSiteGeometry(r_n=distance, **kwargs)
    elif kind == "lab_loop":
        return LabLoopGeometry(r=distance, **kwargs)
    else:
        raise ValidationError(
            f"Unknown geometry: {kind}. Choose from 'two_rail' or 'lab_loop'."
        )
