"""Field and harvester models package."""

# Import key names for easier access
from harvestr.models.magnetics import (
    MU_0,
    RAILWAY_HZ,
    FieldStrength,
    SourceCurrent,
    effective_radius,
    field_finite_segment,
    field_lab_loop,
    field_two_rail,
)
from harvestr.models.geometry import FieldGeometry, LabLoopGeometry, RailSiteGeometry
from harvestr.models.harvester import (
    CoilSpec,
    CoreMaterial,
    matched_load_power,
    open_circuit_voltage,
)
from harvestr.models.presets import COIL_PRESETS, get_coil
