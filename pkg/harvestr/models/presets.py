"""
Named coil and core material presets.
"""

from harvestr.errors import ConfigError
from harvestr.models.harvester import CoilSpec, CoreMaterial

# Ferroxcube 4B1 NiZn ferrite rods
FERRITE_4B1 = CoreMaterial(
    mu_r=250, resistivity=1e5, loss_tangent=90e-6, name="4B1"
)

COIL_PRESETS = {
    # seven 8 mm rods between steel end disks
    "coil-a": CoilSpec(
        name="coil-a",
        turns=80000,
        area=590e-6,
        resistance=17.2e3,
        inductance=1000,
        material=FERRITE_4B1,
        mu_e=23.5,
        rod_diameter=8e-3,
        rods=7,
    ),
    # three rods, roughly half the inductance and resistance
    "coil-b": CoilSpec(
        name="coil-b",
        turns=62000,
        area=334e-6,
        resistance=9.2e3,
        inductance=500,
        material=FERRITE_4B1,
        mu_e=31.3,
        rod_diameter=8e-3,
        rods=3,
    ),
}


def get_coil(name):
    """
    Get a coil preset by name.

    Args:
        name (str): Preset name ('coil-a' or 'coil-b')

    Returns:
        CoilSpec: The preset coil

    Raises:
        ConfigError: If the preset name is not recognized
    """
    try:
        return COIL_PRESETS[name.strip().lower()]
    except KeyError:
        raise ConfigError(
            f"Unknown coil preset: {name}. Choose from "
            + ", ".join(f"'{key}'" for key in COIL_PRESETS)
            + "."
        ) from None

