"""
Flat ``key = value`` configuration documents.

A document is a sequence of bracketed sections holding ``key = value``
lines. Keys before the first header belong to the top-level section.
``[event]`` may repeat; every other section appears at most once. Units
live in key suffixes (``_m``, ``_hz``, ``_a``, ``_ohm``, ``_s``, ``_j``).
Numbers may be decimals or simple fractions such as ``50/3``; lists are
comma separated.

Example::

    coil = coil-a

    [site]
    i_a = 100
    f_hz = 50/3
    r_n_m = 0.5
    d_rr_m = 1.435

    [event]
    label = freight-1
    start_s = 3600
    segments = 540:127.5
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from harvestr.errors import ConfigError

logger = logging.getLogger(__name__)

TOP_LEVEL = ""

ALLOWED_KEYS = {
    TOP_LEVEL: {"coil", "geometry"},
    "site": {"i_a", "f_hz", "r_n_m", "d_rr_m", "current_split"},
    "coil": {
        "preset",
        "name",
        "turns",
        "area_m2",
        "resistance_ohm",
        "inductance_h",
        "mu_e",
        "mu_r",
        "resistivity_ohm_m",
        "loss_tangent",
        "rod_diameter_m",
        "rods",
    },
    "lab_loop": {"r_m", "a_m", "b_m"},
    "timetable": {"period_s"},
    "event": {"label", "start_s", "segments", "attenuation"},
    "budget": {"daily_j", "active_w", "sleep_w", "duty_cycle"},
    "trace": {"r_load_ohm", "coil", "site", "kind"},
    "sweep": {"coils", "f_hz", "r_m", "i_a", "geometry"},
    "optimize": {
        "coils",
        "f_hz",
        "i_a",
        "min_distance_m",
        "max_distance_m",
        "objective",
        "geometry",
    },
}

REPEATABLE_SECTIONS = {"event"}


@dataclass
class ConfigDocument:
    """
    Parsed configuration: ordered (section name, {key: raw value}) pairs.

    Values are kept as the text written in the file so that dumping and
    re-parsing yields an equal document.
    """

    sections: list = field(default_factory=list)
    source: str = field(default="<config>", compare=False)

    def section(self, name):
        """Values of the single section ``name``, or an empty dict."""
        for section_name, values in self.sections:
            if section_name == name:
                return values
        return {}

    def sections_named(self, name):
        return [values for section_name, values in self.sections if section_name == name]

    def has(self, name):
        return any(section_name == name for section_name, _ in self.sections)

    def set(self, name, key, value):
        """Set ``key`` in section ``name``, creating the section if needed."""
        if key not in ALLOWED_KEYS.get(name, ()):
            raise ConfigError(f"Unknown key '{key}' in section [{name}]")
        for section_name, values in self.sections:
            if section_name == name:
                values[key] = str(value)
                return
        if name == TOP_LEVEL:
            self.sections.insert(0, (name, {key: str(value)}))
        else:
            self.sections.append((name, {key: str(value)}))

    def dump(self):
        """
        Render the document in the configuration grammar.

        Returns:
            str: Text that parses back to an equal document
        """
        lines = []
        for name, values in self.sections:
            if name != TOP_LEVEL:
                if lines:
                    lines.append("")
                lines.append(f"[{name}]")
            for key, value in values.items():
                lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


def parse_config(text, source="<config>"):
    """
    Parse configuration text.

    Args:
        text (str): Document text
        source (str): Name used in error messages

    Returns:
        ConfigDocument: The parsed document

    Raises:
        ConfigError: On syntax errors, unknown sections or keys, and
            duplicated keys or sections
    """
    doc = ConfigDocument(source=source)
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = f"{source}:{lineno}"
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"{where}: malformed section header {line!r}")
            name = line[1:-1].strip()
            if name not in ALLOWED_KEYS or name == TOP_LEVEL:
                raise ConfigError(f"{where}: unknown section [{name}]")
            if name not in REPEATABLE_SECTIONS and doc.has(name):
                raise ConfigError(f"{where}: section [{name}] appears twice")
            current = {}
            doc.sections.append((name, current))
            continue
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        name = doc.sections[-1][0] if current is not None else TOP_LEVEL
        if current is None:
            current = {}
            doc.sections.append((TOP_LEVEL, current))
        if key not in ALLOWED_KEYS[name]:
            label = "top level" if name == TOP_LEVEL else f"section [{name}]"
            raise ConfigError(f"{where}: unknown key '{key}' at {label}")
        if key in current:
            raise ConfigError(f"{where}: key '{key}' given twice")
        if not value:
            raise ConfigError(f"{where}: key '{key}' has no value")
        current[key] = value
    logger.debug("Parsed %d sections from %s", len(doc.sections), source)
    return doc


def load_config(path):
    """Read and parse a configuration file."""
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"Could not read config {path}: {e}") from e
    return parse_config(text, source=str(path))


def parse_number(text, key="value"):
    """
    Parse a decimal or fraction (``50/3``) into a float.

    Raises:
        ConfigError: If ``text`` is not a finite number
    """
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError, OverflowError):
        raise ConfigError(f"'{key}' must be a number, got {text!r}") from None


def parse_list(text, key="value"):
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_number_list(text, key="value"):
    values = [parse_number(item, key) for item in parse_list(text, key)]
    if not values:
        raise ConfigError(f"'{key}' must list at least one number")
    return values


def _number(values, key, default=None):
    if key not in values:
        if default is None:
            raise ConfigError(f"Missing required key '{key}'")
        return default
    return parse_number(values[key], key)


def _numbers(values, key, default):
    if key not in values:
        return default
    return tuple(parse_number_list(values[key], key))


def _integer(values, key, default=None):
    value = _number(values, key, default)
    if not float(value).is_integer():
        raise ConfigError(f"'{key}' must be a whole number, got {values[key]!r}")
    return int(value)


def build_coil(doc):
    """
    Coil described by a document.

    Resolution order: the ``[coil]`` section
    (a ``preset`` plus any overriding fields), then the top-level
    ``coil = <preset>`` reference.

    Returns:
        CoilSpec: The configured coil
    """
    from harvestr.models.harvester import CoilSpec, CoreMaterial
    from harvestr.models.presets import FERRITE_4B1, get_coil

    values = doc.section("coil")
    preset = values.get("preset") or doc.section(TOP_LEVEL).get("coil")
    explicit = {key for key in values if key != "preset"}
    if not explicit:
        if not preset:
            raise ConfigError("No coil configured; set 'coil = coil-a' or a [coil] section")
        return get_coil(preset)

    if preset:
        base = get_coil(preset)
    else:
        required = {"turns", "area_m2", "resistance_ohm", "mu_e"} - explicit
        if required:
            raise ConfigError(f"[coil] is missing {', '.join(sorted(required))}")
        base = None

    material = base.material if base else FERRITE_4B1
    if {"mu_r", "resistivity_ohm_m", "loss_tangent"} & explicit:
        material = CoreMaterial(
            mu_r=_number(values, "mu_r", material.mu_r),
            resistivity=_number(values, "resistivity_ohm_m", material.resistivity),
            loss_tangent=_number(values, "loss_tangent", material.loss_tangent),
            name=material.name if "mu_r" not in explicit else "",
        )
    fields = {
        "name": values.get("name", base.name if base else "custom"),
        "turns": _integer(values, "turns", base.turns if base else None),
        "area": _number(values, "area_m2", base.area if base else None),
        "resistance": _number(values, "resistance_ohm", base.resistance if base else None),
        "inductance": _number(values, "inductance_h", base.inductance if base else 0.0),
        "mu_e": _number(values, "mu_e", base.mu_e if base else None),
        "rod_diameter": _number(
            values, "rod_diameter_m", base.rod_diameter if base else 8e-3
        ),
        "rods": _integer(values, "rods", base.rods if base else 1),
        "material": material,
    }
    return CoilSpec(**fields)


def build_source(doc):
    """Source current from ``i_a`` and ``f_hz`` of ``[site]``."""
    from harvestr.models.magnetics import RAILWAY_HZ, SourceCurrent

    values = doc.section("site")
    return SourceCurrent(
        i_rms=_number(values, "i_a", 100.0),
        frequency=_number(values, "f_hz", RAILWAY_HZ),
    )


def build_rail_geometry(doc):
    """Two-rail geometry from ``[site]``."""
    from harvestr.models.geometry import RailSiteGeometry

    values = doc.section("site")
    return RailSiteGeometry(
        r_n=_number(values, "r_n_m", 0.5),
        d_rr=_number(values, "d_rr_m", 1.435),
        current_split=_number(values, "current_split", 0.5),
    )


def build_lab_loop(doc):
    """Bench loop geometry from ``[lab_loop]``."""
    from harvestr.models.geometry import LabLoopGeometry

    values = doc.section("lab_loop")
    return LabLoopGeometry(
        r=_number(values, "r_m", 0.25),
        a=_number(values, "a_m", 1.2),
        b=_number(values, "b_m", 3.0),
    )


def geometry_kind(doc):
    """Harvester geometry named by the top-level ``geometry`` key."""
    kind = doc.section(TOP_LEVEL).get("geometry", "two_rail")
    if kind not in ("two_rail", "lab_loop"):
        raise ConfigError(f"Unknown geometry: {kind}. Choose from 'two_rail' or 'lab_loop'.")
    return kind


def distance_key(doc):
    """(section, key) holding the harvester distance of the configured geometry."""
    if geometry_kind(doc) == "lab_loop":
        return "lab_loop", "r_m"
    return "site", "r_n_m"


def build_geometry(doc):
    """
    Harvester geometry: ``[site]`` beside the track by default, or the bench
    loop of ``[lab_loop]`` when the top level sets ``geometry = lab_loop``.

    Returns:
        FieldGeometry: The configured geometry
    """
    if geometry_kind(doc) == "lab_loop":
        return build_lab_loop(doc)
    return build_rail_geometry(doc)


def coil_catalog(doc):
    """
    Coils known to a document: the presets plus the configured coil, if any.

    Returns:
        dict: Coil name to CoilSpec
    """
    from harvestr.models.presets import COIL_PRESETS

    coils = dict(COIL_PRESETS)
    if doc.has("coil") or "coil" in doc.section(TOP_LEVEL):
        coil = build_coil(doc)
        coils[coil.name] = coil
    return coils


def build_site(doc, coil=None):
    """
    Harvester installation from the configured geometry and coil.

    Returns:
        SiteConfig: Site configuration
    """
    from harvestr.analysis.scenario import SiteConfig

    source = build_source(doc)
    return SiteConfig(
        geometry=build_geometry(doc),
        coil=coil if coil is not None else build_coil(doc),
        frequency=source.frequency,
    )


def parse_segments(text, label=""):
    """Parse ``duration_s:i_a`` pairs separated by commas."""
    segments = []
    for item in parse_list(text, "segments"):
        if ":" not in item:
            raise ConfigError(
                f"Event '{label}' segment {item!r} must look like 'duration_s:i_a'"
            )
        duration, current = item.split(":", 1)
        segments.append((parse_number(duration, "segments"), parse_number(current, "segments")))
    if not segments:
        raise ConfigError(f"Event '{label}' has no segments")
    return tuple(segments)


def build_timetable(doc):
    """
    Timetable from ``[timetable]`` and every ``[event]`` section.

    Returns:
        Timetable: Sorted, validated train passes
    """
    from harvestr.analysis.scenario import SECONDS_PER_DAY, Timetable, TrainPassEvent

    events = []
    for index, values in enumerate(doc.sections_named("event"), start=1):
        label = values.get("label", f"event-{index}")
        if "segments" not in values:
            raise ConfigError(f"Event '{label}' has no segments")
        events.append(
            TrainPassEvent(
                label=label,
                start=_number(values, "start_s", 0.0),
                segments=parse_segments(values["segments"], label),
                attenuation=_number(values, "attenuation", 1.0),
            )
        )
    period = _number(doc.section("timetable"), "period_s", SECONDS_PER_DAY)
    return Timetable(events=tuple(events), period=period)


def build_budget(doc):
    """Node budget from ``[budget]``: ``daily_j`` or active/sleep power and duty cycle."""
    from harvestr.analysis.scenario import NodeBudget

    values = doc.section("budget")
    if "daily_j" in values:
        return NodeBudget(daily_requirement=_number(values, "daily_j"))
    if {"active_w", "sleep_w", "duty_cycle"} <= set(values):
        return NodeBudget.from_duty_cycle(
            _number(values, "active_w"),
            _number(values, "sleep_w"),
            _number(values, "duty_cycle"),
        )
    raise ConfigError("[budget] needs 'daily_j' or 'active_w', 'sleep_w' and 'duty_cycle'")


def _geometry_params(doc, kind):
    if kind == "lab_loop":
        loop = build_lab_loop(doc)
        return {"a": loop.a, "b": loop.b}
    if kind == "two_rail":
        geom = build_rail_geometry(doc)
        return {"d_rr": geom.d_rr, "current_split": geom.current_split}
    raise ConfigError(f"Unknown geometry: {kind}. Choose from 'two_rail' or 'lab_loop'.")


def _coils(values, doc):
    from harvestr.models.presets import get_coil

    if "coils" in values:
        return tuple(get_coil(name) for name in parse_list(values["coils"], "coils"))
    return (build_coil(doc),)


def build_sweep_spec(doc):
    """
    Sweep grid from ``[sweep]``.

    Returns:
        SweepSpec: Sweep over coils, frequencies, distances and currents
    """
    from harvestr.analysis.datasets import LAB_DISTANCES
    from harvestr.analysis.optimize import SweepSpec
    from harvestr.models.magnetics import RAILWAY_HZ

    values = doc.section("sweep")
    kind = values.get("geometry", "lab_loop")
    return SweepSpec(
        coils=_coils(values, doc),
        frequencies=_numbers(values, "f_hz", (RAILWAY_HZ,)),
        distances=_numbers(values, "r_m", LAB_DISTANCES),
        currents=_numbers(values, "i_a", None),
        geometry=kind,
        geometry_params=_geometry_params(doc, kind),
    )


def build_optimize_spec(doc):
    """
    Placement problem from ``[optimize]``; the timetable is attached when the
    objective is ``daily_energy``.

    Returns:
        OptimizeSpec: Optimisation problem
    """
    from harvestr.analysis.optimize import OptimizeSpec
    from harvestr.models.magnetics import RAILWAY_HZ

    values = doc.section("optimize")
    kind = values.get("geometry", "two_rail")
    objective = values.get("objective", "power")
    min_distance = _number(values, "min_distance_m", 0.5)
    return OptimizeSpec(
        coils=_coils(values, doc),
        min_distance=min_distance,
        max_distance=_number(values, "max_distance_m", max(min_distance, 2.0)),
        frequencies=_numbers(values, "f_hz", (RAILWAY_HZ,)),
        currents=_numbers(values, "i_a", (100.0,)),
        objective=objective,
        geometry=kind,
        geometry_params=_geometry_params(doc, kind),
        timetable=build_timetable(doc) if objective == "daily_energy" else None,
    )


def trace_metadata(doc):
    """
    Trace sidecar metadata from ``[trace]``.

    Returns:
        dict: r_load, coil_label, site_label and kind for :func:`read_trace`
    """
    values = doc.section("trace")
    if "r_load_ohm" not in values:
        raise ConfigError("[trace] needs 'r_load_ohm'")
    return {
        "r_load": _number(values, "r_load_ohm"),
        "coil_label": values.get("coil", ""),
        "site_label": values.get("site", ""),
        "kind": values.get("kind", "waveform"),
    }
