"""
Timetable-driven energy budgets for a trackside harvester.

Each train pass is a piecewise-constant current draw. Energy per segment is
the matched-load power for that current times the segment duration; pass
energies are summed over a timetable period and extrapolated to one day.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Tuple

from harvestr.errors import DomainError, ValidationError
from harvestr.models.geometry import FieldGeometry
from harvestr.models.harvester import CoilSpec, matched_load_power
from harvestr.models.magnetics import RAILWAY_HZ, SourceCurrent

logger = logging.getLogger(__name__)

SECONDS_PER_DAY = 86400.0
REPORT_COLUMNS = [
    "row",
    "label",
    "start_s",
    "duration_s",
    "energy_j",
    "daily_total_j",
    "margin",
]


class Segment(NamedTuple):
    duration: float
    i_rms: float


@dataclass(frozen=True)
class TrainPassEvent:
    """
    Current drawn by one train while it is between the harvester and the
    feeding substation.

    Args:
        label (str): Train identifier
        start (float): Start time in seconds from the period origin
        segments (tuple): Ordered (duration_s, i_rms) pairs
        attenuation (float): Fraction of the drawn current that returns
            through the rails at the site (ground leakage takes the rest)
    """

    label: str
    start: float
    segments: Tuple[Segment, ...]
    attenuation: float = 1.0

    def __post_init__(self):
        segments = tuple(Segment(float(d), float(i)) for d, i in self.segments)
        object.__setattr__(self, "segments", segments)
        if not self.start >= 0:
            raise ValidationError(f"Event '{self.label}' starts before 0: {self.start}")
        if not segments:
            raise ValidationError(f"Event '{self.label}' has no current segments")
        for seg in segments:
            if not seg.duration > 0:
                raise ValidationError(
                    f"Event '{self.label}' has a non-positive duration {seg.duration} s"
                )
            if not seg.i_rms >= 0:
                raise ValidationError(
                    f"Event '{self.label}' has a negative current {seg.i_rms} A"
                )
        if not 0 <= self.attenuation <= 1:
            raise ValidationError(
                f"Event '{self.label}' attenuation must lie in [0, 1], "
                f"got {self.attenuation}"
            )

    @property
    def duration(self):
        return sum(seg.duration for seg in self.segments)

    @property
    def end(self):
        return self.start + self.duration


@dataclass(frozen=True)
class Timetable:
    """
    Train passes within one repeating period.

    Events are kept sorted by start time; overlapping events or events that
    run past the period are rejected.
    """

    events: Tuple[TrainPassEvent, ...] = ()
    period: float = SECONDS_PER_DAY

    def __post_init__(self):
        if not self.period > 0:
            raise ValidationError(f"Timetable period must be positive, got {self.period}")
        events = tuple(sorted(self.events, key=lambda ev: (ev.start, ev.label)))
        object.__setattr__(self, "events", events)
        for prev, nxt in zip(events, events[1:]):
            if nxt.start < prev.end:
                raise ValidationError(
                    f"Events '{prev.label}' and '{nxt.label}' overlap "
                    f"({prev.end} s > {nxt.start} s)"
                )
        if events and events[-1].end > self.period:
            raise ValidationError(
                f"Event '{events[-1].label}' ends at {events[-1].end} s, "
                f"after the {self.period} s period"
            )


@dataclass(frozen=True)
class SiteConfig:
    """Harvester installation: field geometry, supply frequency and coil."""

    geometry: FieldGeometry
    coil: CoilSpec
    frequency: float = RAILWAY_HZ


@dataclass(frozen=True)
class NodeBudget:
    """Daily energy requirement of the powered sensor node, in joules."""

    daily_requirement: float

    def __post_init__(self):
        if not self.daily_requirement >= 0:
            raise DomainError(
                f"Daily requirement must be non-negative, got {self.daily_requirement}"
            )

    @classmethod
    def from_duty_cycle(cls, active_w, sleep_w, duty_cycle):
        """
        Budget of a node that is active for ``duty_cycle`` of the time.

        Args:
            active_w (float): Active power in watts
            sleep_w (float): Sleep power in watts
            duty_cycle (float): Active fraction in [0, 1]
        """
        if not 0 <= duty_cycle <= 1:
            raise DomainError(f"Duty cycle must lie in [0, 1], got {duty_cycle}")
        mean_power = duty_cycle * active_w + (1 - duty_cycle) * sleep_w
        return cls(mean_power * SECONDS_PER_DAY)


@dataclass(frozen=True)
class EnergyReport:
    per_event: Tuple[Tuple[str, float], ...]
    daily_total: float
    margin: float
    period: float = SECONDS_PER_DAY
    events: Tuple[TrainPassEvent, ...] = field(default=(), repr=False)

    @property
    def period_total(self):
        return sum(energy for _, energy in self.per_event)

    def to_frame(self):
        """
        Per-event energies followed by one ``total`` row.

        Each event row carries its energy over the period, its share of the
        daily total and its share of the margin, so the event rows sum to
        the ``total`` row column by column.

        Returns:
            pd.DataFrame: Columns row, label, start_s, duration_s, energy_j,
                daily_total_j, margin
        """
        import pandas as pd

        scale = SECONDS_PER_DAY / self.period
        share = self.margin / self.daily_total if self.daily_total > 0 else 0.0
        rows = []
        for ev, (_, energy) in zip(self.events, self.per_event):
            daily = energy * scale
            rows.append(
                ("event", ev.label, ev.start, ev.duration, energy, daily, daily * share)
            )
        rows.append(
            ("total", "", 0.0, self.period, self.period_total, self.daily_total, self.margin)
        )
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def _segment_power(site: SiteConfig, i_rms):
    src = SourceCurrent(i_rms, site.frequency)
    return matched_load_power(site.coil, site.geometry.field(src), site.frequency)


def simulate_pass(site: SiteConfig, event: TrainPassEvent):
    """
    Energy harvested during one train pass.

    Args:
        site (SiteConfig): Harvester installation
        event (TrainPassEvent): Train pass

    Returns:
        float: Energy in joules
    """
    energy = 0.0
    for seg in event.segments:
        energy += _segment_power(site, seg.i_rms * event.attenuation) * seg.duration
    logger.debug("Pass '%s' at %s s harvests %.6g J", event.label, event.start, energy)
    return energy


def current_for_energy(site: SiteConfig, duration, joules):
    """
    Constant current that harvests ``joules`` over ``duration`` seconds.

    Useful when only the harvested energy of a pass is known and its current
    profile is not.

    Returns:
        float: Current in amperes RMS
    """
    if not duration > 0:
        raise DomainError(f"Duration must be positive, got {duration}")
    if not joules >= 0:
        raise DomainError(f"Target energy must be non-negative, got {joules}")
    k = _segment_power(site, 1.0)
    return math.sqrt(joules / (k * duration))


def feasibility_margin(harvest, budget: NodeBudget):
    """
    Ratio of harvested to required daily energy.

    Raises:
        DomainError: If the budget requires no energy
    """
    if not budget.daily_requirement > 0:
        raise DomainError("Node budget must be positive to compute a margin")
    return harvest / budget.daily_requirement


def simulate_period(site: SiteConfig, timetable: Timetable, budget: NodeBudget):
    """
    Harvest over one timetable period, extrapolated to a day.

    Args:
        site (SiteConfig): Harvester installation
        timetable (Timetable): Train passes in the period
        budget (NodeBudget): Node energy requirement

    Returns:
        EnergyReport: Per-event energies, daily total and margin
    """
    per_event = tuple((ev.label, simulate_pass(site, ev)) for ev in timetable.events)
    period_total = 0.0
    for _, energy in per_event:
        period_total += energy
    daily_total = period_total * SECONDS_PER_DAY / timetable.period
    margin = feasibility_margin(daily_total, budget)
    logger.info(
        "%d passes harvest %.6g J per day (margin %.3g)",
        len(per_event),
        daily_total,
        margin,
    )
    return EnergyReport(
        per_event=per_event,
        daily_total=daily_total,
        margin=margin,
        period=timetable.period,
        events=timetable.events,
    )
