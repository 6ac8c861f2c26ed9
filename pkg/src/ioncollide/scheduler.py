"""Merge/split schedules for a linear array of single-ion traps.

Only neighbouring traps can merge. A gate between distant qubits walks one
qubit's state next to the other with SWAPs (each a doubled sqrt(SWAP) hold),
applies sqrt(SWAP), and walks it back. Schedules carry logical time only.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import SameTrapError, ScheduleError, UnknownQubitError

MERGE, HOLD, SPLIT = "MERGE", "HOLD", "SPLIT"
SQRT_SWAP, SWAP = "sqrt_swap", "swap"
_UNITS = {SQRT_SWAP: 1, SWAP: 2}
_QUANT_TOL = 1e-9


@dataclass(frozen=True)
class TrapArray:
    n_traps: int
    trap_length_L: float
    occupancy: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "occupancy", tuple(self.occupancy))
        if self.n_traps < 2:
            raise ValueError("an array needs at least two traps")
        if len(self.occupancy) != self.n_traps:
            raise ValueError("each trap must hold exactly one ion")
        if len(set(self.occupancy)) != self.n_traps:
            raise ValueError("qubit labels must be unique")

    @classmethod
    def labelled(cls, n_traps: int, trap_length_L: float = 0.0, prefix: str = "q"):
        return cls(n_traps, trap_length_L, tuple(f"{prefix}{i}" for i in range(n_traps)))

    def position(self, label: str) -> int:
        try:
            return self.occupancy.index(label)
        except ValueError:
            raise UnknownQubitError(f"qubit {label!r} is not in the array") from None


@dataclass(frozen=True)
class ScheduleEvent:
    kind: str
    trap_i: int
    trap_j: int
    t_start: float
    t_end: float
    gate: str | None = None

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class MergeSchedule:
    events: tuple[ScheduleEvent, ...]
    total_time: float
    half_period: float
    gate_time: float
    # R_theta byproducts per logical qubit, in multiples of theta
    phase_byproducts: dict = field(default_factory=dict, compare=False)

    def intervals(self):
        return [e for e in self.events if e.kind == HOLD]

    def hold_time(self) -> float:
        return sum(e.duration for e in self.intervals())


def quantized_gate_time(gate_time_tg: float, omega_z: float) -> tuple[float, float]:
    """Round t_g up to a whole number of collision half-periods pi/omega_z."""
    if not gate_time_tg > 0 or not omega_z > 0:
        raise ValueError("gate time and omega_z must be positive")
    half = math.pi / omega_z
    k = max(1, math.ceil(gate_time_tg / half * (1 - _QUANT_TOL)))
    return k * half, half


def swap_chain(lo: int, hi: int) -> list[tuple[int, int, str]]:
    """Trap-pair operations moving the state at ``lo`` next to ``hi`` and back."""
    out = [(k, k + 1, SWAP) for k in range(lo, hi - 1)]
    back = [(k, k + 1, SWAP) for k in reversed(range(lo, hi - 1))]
    return out + [(hi - 1, hi, SQRT_SWAP)] + back


def route_remote_gate(array: TrapArray, qubit_a: str, qubit_b: str,
                      gate_time_tg: float, omega_z: float) -> MergeSchedule:
    """Serial schedule applying sqrt(SWAP) between ``qubit_a`` and ``qubit_b``."""
    if qubit_a == qubit_b:
        raise SameTrapError(f"qubits {qubit_a!r} and {qubit_b!r} share a trap")
    i, j = array.position(qubit_a), array.position(qubit_b)
    tq, half = quantized_gate_time(gate_time_tg, omega_z)

    occupancy = list(array.occupancy)
    byproducts = Counter()
    events = []
    t = 0.0
    for a, b, gate in swap_chain(min(i, j), max(i, j)):
        dur = _UNITS[gate] * tq
        events.append(ScheduleEvent(MERGE, a, b, t, t, gate))
        events.append(ScheduleEvent(HOLD, a, b, t, t + dur, gate))
        events.append(ScheduleEvent(SPLIT, a, b, t + dur, t + dur, gate))
        for label in (occupancy[a], occupancy[b]):
            byproducts[label] += _UNITS[gate]
        if gate == SWAP:
            occupancy[a], occupancy[b] = occupancy[b], occupancy[a]
        t += dur
    return MergeSchedule(tuple(events), t, half, tq, dict(byproducts))


# --- validation -------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    event_index: int | None = None


def simulate_schedule(array: TrapArray, schedule: MergeSchedule):
    """Apply the schedule's SWAP semantics to the labels.

    Returns the final occupancy and the list of label pairs that went
    through a sqrt(SWAP) hold.
    """
    occ = list(array.occupancy)
    interactions = []
    for ev in schedule.events:
        if ev.kind != HOLD:
            continue
        a, b = ev.trap_i, ev.trap_j
        if ev.gate == SWAP:
            occ[a], occ[b] = occ[b], occ[a]
        elif ev.gate == SQRT_SWAP:
            interactions.append(frozenset((occ[a], occ[b])))
    return tuple(occ), interactions


def _is_multiple(value, unit):
    k = value / unit
    return abs(k - round(k)) <= _QUANT_TOL * max(1.0, abs(k)) and round(k) >= 1


def validate_schedule(array: TrapArray, schedule: MergeSchedule) -> list[Violation]:
    """Check a schedule; an empty list means it is valid.

    Disjoint pairs may be merged at the same time; a trap may not be in two
    open merges at once.
    """
    out: list[Violation] = []
    open_pairs: dict[tuple[int, int], int] = {}
    busy: dict[int, tuple[int, int]] = {}
    last_t = -math.inf

    for idx, ev in enumerate(schedule.events):
        pair = (ev.trap_i, ev.trap_j)
        if not (0 <= ev.trap_i < array.n_traps and 0 <= ev.trap_j < array.n_traps):
            out.append(Violation("topology", f"trap pair {pair} outside the array", idx))
            continue
        if abs(ev.trap_i - ev.trap_j) != 1:
            out.append(Violation("topology", f"traps {pair} are not neighbours", idx))
            continue
        if ev.t_end < ev.t_start:
            out.append(Violation("ordering", f"event ends before it starts at t={ev.t_start:g}", idx))
        if ev.t_start < last_t - _QUANT_TOL * max(1.0, abs(last_t)):
            out.append(Violation("ordering", f"event at t={ev.t_start:g} is out of time order", idx))
        last_t = max(last_t, ev.t_start)
        key = tuple(sorted(pair))

        if ev.kind == MERGE:
            clash = [tr for tr in key if tr in busy]
            if key in open_pairs:
                out.append(Violation("nesting", f"pair {key} merged twice without a split", idx))
            elif clash:
                out.append(Violation(
                    "exclusivity",
                    f"trap {clash[0]} is already merged with pair {busy[clash[0]]}", idx))
            else:
                open_pairs[key] = idx
                for tr in key:
                    busy[tr] = key
        elif ev.kind == HOLD:
            if key not in open_pairs:
                out.append(Violation("nesting", f"hold on pair {key} that is not merged", idx))
            if ev.gate not in _UNITS:
                out.append(Violation("gate", f"unknown gate kind {ev.gate!r}", idx))
            if not _is_multiple(ev.duration, schedule.half_period):
                out.append(Violation(
                    "quantization",
                    f"hold of {ev.duration / schedule.half_period:.6g} half-periods", idx))
            elif ev.gate in _UNITS and schedule.gate_time > 0:
                expected = _UNITS[ev.gate] * schedule.gate_time
                if not math.isclose(ev.duration, expected, rel_tol=_QUANT_TOL):
                    out.append(Violation(
                        "quantization",
                        f"{ev.gate} hold lasts {ev.duration:g} s, expected {expected:g} s", idx))
        elif ev.kind == SPLIT:
            if key not in open_pairs:
                out.append(Violation("nesting", f"split of pair {key} that is not merged", idx))
            else:
                del open_pairs[key]
                for tr in key:
                    busy.pop(tr, None)
        else:
            out.append(Violation("kind", f"unknown event kind {ev.kind!r}", idx))

    for key, idx in open_pairs.items():
        out.append(Violation("nesting", f"pair {key} is never split", idx))

    if not out:
        final, _ = simulate_schedule(array, schedule)
        if final != array.occupancy:
            out.append(Violation("occupancy", f"final occupancy {final} differs from initial"))
    return out


# --- text format --------------------------------------------------------------------

def schedule_to_text(schedule: MergeSchedule, array: TrapArray | None = None) -> str:
    """Line-oriented export: ``t_start  t_end  KIND  trap_i  trap_j  gate``.

    Header comments carry the timing units and, if given, the array so the
    file can be validated on its own.
    """
    lines = [f"# half_period={schedule.half_period!r} gate_time={schedule.gate_time!r} "
             f"total_time={schedule.total_time!r}"]
    if array is not None:
        lines.append(f"# n_traps={array.n_traps} trap_length_L={array.trap_length_L!r} "
                     f"occupancy={','.join(array.occupancy)}")
    for label, n in sorted(schedule.phase_byproducts.items()):
        lines.append(f"# phase {label} theta*{n}")
    for ev in schedule.events:
        lines.append(f"{ev.t_start!r}  {ev.t_end!r}  {ev.kind}  {ev.trap_i}  {ev.trap_j}  {ev.gate or '-'}")
    return "\n".join(lines) + "\n"


def _header_fields(line):
    return dict(tok.split("=", 1) for tok in line[1:].split() if "=" in tok)


def schedule_from_text(text: str) -> tuple[MergeSchedule, TrapArray | None]:
    meta: dict[str, str] = {}
    phases = {}
    events = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "phase" and len(parts) == 3:
                phases[parts[1]] = int(parts[2].split("*")[1])
            else:
                meta.update(_header_fields(line))
            continue
        cols = line.split()
        if len(cols) != 6:
            raise ScheduleError(f"line {lineno}: expected 6 columns, got {len(cols)}")
        t0, t1, kind, ti, tj, gate = cols
        events.append(ScheduleEvent(kind, int(ti), int(tj), float(t0), float(t1),
                                    None if gate == "-" else gate))
    try:
        half = float(meta["half_period"])
    except KeyError:
        raise ScheduleError("schedule header lacks half_period") from None
    gate_time = float(meta.get("gate_time", 0.0))
    total = float(meta.get("total_time", max((e.t_end for e in events), default=0.0)))
    array = None
    if "occupancy" in meta:
        occ = tuple(meta["occupancy"].split(","))
        array = TrapArray(int(meta.get("n_traps", len(occ))),
                          float(meta.get("trap_length_L", 0.0)), occ)
    return MergeSchedule(tuple(events), total, half, gate_time, phases), array
