"""
Dumbbell-core induction coil model.

Covers the linear-response chain from applied field to harvested power:
effective permeability of an open core, core flux density, open-circuit
voltage (Faraday's law, magnitude only) and the power dissipated in a
resistive load. Eddy current and hysteresis figures are diagnostics and
are never subtracted from the predicted power.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from harvestr.errors import DomainError
from harvestr.models.magnetics import MU_0, FieldStrength

DEFAULT_LOSS_TANGENT_THRESHOLD = 1e-3


@dataclass(frozen=True)
class CoreMaterial:
    """
    Magnetic core material.

    Args:
        mu_r (float): Relative permeability
        resistivity (float): Resistivity in ohm-metres
        loss_tangent (float): Upper bound of the magnetic loss tangent
        name (str): Material name
    """

    mu_r: float
    resistivity: float
    loss_tangent: float = 0.0
    name: str = ""

    def __post_init__(self):
        if not self.mu_r >= 1:
            raise DomainError(f"mu_r must be at least 1, got {self.mu_r}")
        if not self.resistivity > 0:
            raise DomainError(f"Resistivity must be positive, got {self.resistivity}")
        if not self.loss_tangent >= 0:
            raise DomainError(
                f"Loss tangent must be non-negative, got {self.loss_tangent}"
            )


@dataclass(frozen=True)
class CoilSpec:
    """
    Harvester coil wound on a ferrite rod core.

    Args:
        name (str): Short identifier used in tables, e.g. 'coil-a'
        turns (int): Number of windings N
        area (float): Mean enclosed core area in square metres
        resistance (float): Winding resistance in ohms
        inductance (float): Winding inductance in henries (not used by the
            matched-load model, which assumes compensated reactance)
        material (CoreMaterial): Core material
        mu_e (float): Effective permeability of the core
        rod_diameter (float): Diameter of a single core rod in metres
        rods (int): Number of rods in the core
    """

    name: str
    turns: int
    area: float
    resistance: float
    inductance: float
    material: CoreMaterial
    mu_e: float
    rod_diameter: float = 8e-3
    rods: int = 1

    def __post_init__(self):
        if not self.turns >= 1:
            raise DomainError(f"Coil needs at least one turn, got {self.turns}")
        if not self.area > 0:
            raise DomainError(f"Core area must be positive, got {self.area}")
        if not self.resistance > 0:
            raise DomainError(f"Coil resistance must be positive, got {self.resistance}")
        if not 1 <= self.mu_e <= self.material.mu_r:
            raise DomainError(
                f"mu_e must lie in [1, {self.material.mu_r}], got {self.mu_e}"
            )

    @property
    def n_d(self):
        """Demagnetisation factor implied by mu_e and the material mu_r."""
        return demag_factor(self.material.mu_r, self.mu_e)


@dataclass(frozen=True)
class DemagState:
    """
    Linear-response state of an open core in a uniform applied field.

    Args:
        n_d (float): Demagnetisation factor
        magnetisation (float): Core magnetisation M_c in A/m
        h_core (float): Field inside the core H_c in A/m
        b_core (float): Core flux density in tesla
    """

    n_d: float
    magnetisation: float
    h_core: float
    b_core: float


class HysteresisCheck(NamedTuple):
    negligible: bool
    bound: float


def _check_demag(mu_r, n_d):
    if not mu_r >= 1:
        raise DomainError(f"mu_r must be at least 1, got {mu_r}")
    if not 0 <= n_d <= 1:
        raise DomainError(f"n_d must lie in [0, 1], got {n_d}")


def effective_permeability(mu_r, n_d):
    """
    Effective permeability of an open core.

    Args:
        mu_r (float): Relative permeability of the material
        n_d (float): Demagnetisation factor in [0, 1]

    Returns:
        float: mu_e in [1, mu_r]
    """
    _check_demag(mu_r, n_d)
    return mu_r / (1 + n_d * (mu_r - 1))


def demag_factor(mu_r, mu_e):
    """
    Demagnetisation factor that yields ``mu_e`` for a material of ``mu_r``.

    Inverse of :func:`effective_permeability`.
    """
    if not mu_r > 1:
        raise DomainError(f"mu_r must exceed 1 to invert mu_e, got {mu_r}")
    if not 1 <= mu_e <= mu_r:
        raise DomainError(f"mu_e must lie in [1, {mu_r}], got {mu_e}")
    return (mu_r / mu_e - 1) / (mu_r - 1)


def demag_state(h_applied, mu_r, n_d):
    """
    Solve H_c = H_0 - N_d * M_c together with M_c = (mu_r - 1) * H_c.

    Args:
        h_applied (float): Applied field H_0 in A/m
        mu_r (float): Relative permeability of the material
        n_d (float): Demagnetisation factor

    Returns:
        DemagState: Core field, magnetisation and flux density
    """
    _check_demag(mu_r, n_d)
    chi = mu_r - 1
    h_core = h_applied / (1 + n_d * chi)
    magnetisation = chi * h_core
    b_core = MU_0 * (h_core + magnetisation)
    return DemagState(n_d=n_d, magnetisation=magnetisation, h_core=h_core, b_core=b_core)


def core_flux_density(mu_e, h0: FieldStrength):
    """Core flux density mu_e * mu_0 * H_0 in tesla RMS."""
    return mu_e * MU_0 * h0.h_rms


def open_circuit_voltage(coil: CoilSpec, h0: FieldStrength, frequency):
    """
    Magnitude of the induced open-circuit voltage.

    The 90 degree phase lead is not represented.

    Args:
        coil (CoilSpec): Harvester coil
        h0 (FieldStrength): Applied field
        frequency (float): Field frequency in hertz

    Returns:
        float: Open-circuit voltage in volts RMS
    """
    if not frequency > 0:
        raise DomainError(f"Frequency must be positive, got {frequency} Hz")
    omega = 2 * math.pi * frequency
    return coil.turns * coil.area * core_flux_density(coil.mu_e, h0) * omega


def load_power(v_oc, r_coil, r_load):
    """
    Power in a resistive load with the coil reactance compensated.

    Args:
        v_oc (float): Open-circuit voltage in volts RMS
        r_coil (float): Coil resistance in ohms
        r_load (float): Load resistance in ohms

    Returns:
        float: Load power in watts
    """
    if not r_coil > 0 or not r_load > 0:
        raise DomainError(
            f"Resistances must be positive, got r_coil={r_coil}, r_load={r_load}"
        )
    return v_oc**2 * r_load / (r_coil + r_load) ** 2


def matched_load_power(coil: CoilSpec, h0: FieldStrength, frequency):
    """
    Power dissipated in an impedance-matched load, |V_oc|^2 / (4R).

    Returns:
        float: Power in watts
    """
    v_oc = open_circuit_voltage(coil, h0, frequency)
    return v_oc**2 / (4 * coil.resistance)


def matched_load_power_closed_form(coil: CoilSpec, i_rms, frequency, r_e):
    """(N A mu_e mu_0 f I)^2 / (4 R r_e^2) for a two-rail field."""
    numerator = coil.turns * coil.area * coil.mu_e * MU_0 * frequency * i_rms
    return numerator**2 / (4 * coil.resistance * r_e**2)


def noise_floor_power(coil: CoilSpec, v_noise_rms):
    """
    Apparent matched-load power of an interference voltage.

    Bench measurements pick up a few hundred millivolts from surrounding
    equipment; this is the offset it adds to derived power figures.
    """
    return v_noise_rms**2 / (4 * coil.resistance)


def coil_figure_of_merit(coil: CoilSpec):
    """(N A mu_e)^2 / R; ranks coils for any fixed field and frequency."""
    return (coil.turns * coil.area * coil.mu_e) ** 2 / coil.resistance


def eddy_loss(b_peak, rod_diameter, frequency, resistivity):
    """
    Empirical eddy current loss of a conducting cylinder.

    Returns the raw value of pi^2 B_p^2 d^2 f^2 / (16 rho). Read as a loss
    per unit volume (W/m^3) although the source model does not state units.

    Args:
        b_peak (float): Peak flux density in tesla
        rod_diameter (float): Cylinder diameter in metres
        frequency (float): Frequency in hertz
        resistivity (float): Material resistivity in ohm-metres
    """
    if not resistivity > 0:
        raise DomainError(f"Resistivity must be positive, got {resistivity}")
    for name, value in (
        ("b_peak", b_peak),
        ("rod_diameter", rod_diameter),
        ("frequency", frequency),
    ):
        if not value >= 0:
            raise DomainError(f"{name} must be non-negative, got {value}")
    return math.pi**2 * b_peak**2 * rod_diameter**2 * frequency**2 / (16 * resistivity)


def hysteresis_negligible(
    material: CoreMaterial, threshold=DEFAULT_LOSS_TANGENT_THRESHOLD
):
    """
    Conservative check that the core responds linearly and in phase.

    Returns:
        HysteresisCheck: Whether the loss tangent is below ``threshold``,
            and the threshold used
    """
    return HysteresisCheck(material.loss_tangent < threshold, threshold)
