"""Deterministic N-body dynamics under the modified Newton-Coulomb law.

Each pair (i, j) interacts through the coupling A_ij of
:func:`thetamix.potential.coupling_unprimed`; A > 0 pushes the pair apart.
Inertia is the intrinsic mass m_i. Integration is kick-drift-kick leapfrog.

Inside the loop the state is plain CGS doubles (numpy arrays). Pairs are
always visited in the same (i < j) order and each pair force is applied
with equal and opposite sign, so runs are bitwise reproducible and total
momentum is conserved up to round-off.

Optional Plummer softening eps replaces r by sqrt(r^2 + eps^2) in the
potential; the force is its exact gradient, so energy checks stay valid.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterator, Sequence, TextIO

import numpy as np

from .constants import DerivedConstants, PhysicalConstants, derive_sigma
from .potential import ParticleSpecies, coupling_unprimed, coupling_unprimed_raw
from .units import ENERGY, LENGTH, TIME, Quantity

__all__ = [
    "NBodyError",
    "SystemState",
    "IntegratorConfig",
    "EnergyReport",
    "KeplerOrbit",
    "CSV_HEADER",
    "coupling_matrix",
    "pairwise_accel",
    "step_leapfrog",
    "total_energy",
    "kepler_reference",
    "circular_pair_state",
    "iterate",
    "simulate",
    "load_run_config",
]

CSV_HEADER = (
    "step,t_s,particle,x_cm,y_cm,z_cm,vx_cm_s,vy_cm_s,vz_cm_s,ke_erg,pe_erg,etot_erg"
).split(",")


class NBodyError(ValueError):
    pass


@dataclass(frozen=True)
class SystemState:
    """Time, species, and (N, 3) position/velocity arrays in cm and cm/s."""

    t: float
    species: tuple[ParticleSpecies, ...]
    pos: np.ndarray
    vel: np.ndarray

    def __post_init__(self):
        n = len(self.species)
        try:
            pos = np.array(self.pos, dtype=float).reshape(n, 3)
            vel = np.array(self.vel, dtype=float).reshape(n, 3)
        except ValueError:
            raise NBodyError(f"expected {n} positions and velocities of length 3") from None
        if not (np.isfinite(pos).all() and np.isfinite(vel).all()):
            raise NBodyError("non-finite position or velocity")
        for sp in self.species:
            if sp.m.value <= 0:
                raise NBodyError(f"particle {sp.label!r}: dynamics needs positive mass")
        object.__setattr__(self, "species", tuple(self.species))
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "vel", vel)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self) -> int:
        return len(self.species)

    @property
    def time(self) -> Quantity:
        return Quantity(self.t, TIME)

    @property
    def masses(self) -> np.ndarray:
        return np.array([sp.m.value for sp in self.species])

    def momentum(self) -> np.ndarray:
        return (self.masses[:, None] * self.vel).sum(axis=0)


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    steps: int
    output_every: int = 1
    theta: float = 0.0
    softening: float = 0.0

    def __post_init__(self):
        if isinstance(self.dt, Quantity):
            object.__setattr__(self, "dt", self.dt.require(TIME, "dt").value)
        if isinstance(self.softening, Quantity):
            object.__setattr__(self, "softening", self.softening.require(LENGTH, "softening").value)
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise NBodyError(f"dt must be positive, got {self.dt}")
        if int(self.steps) != self.steps or self.steps < 0:
            raise NBodyError(f"steps must be a non-negative integer, got {self.steps}")
        if int(self.output_every) != self.output_every or self.output_every < 1:
            raise NBodyError(f"output_every must be a positive integer, got {self.output_every}")
        if not (math.isfinite(self.softening) and self.softening >= 0):
            raise NBodyError(f"softening must be >= 0, got {self.softening}")
        if not math.isfinite(self.theta):
            raise NBodyError("theta must be finite")


@dataclass(frozen=True)
class EnergyReport:
    kinetic: Quantity
    potential: Quantity
    total: Quantity


@dataclass(frozen=True)
class KeplerOrbit:
    period: Quantity
    speed: Quantity


def coupling_matrix(
    species: Sequence[ParticleSpecies], sigma: float, k_newton: float
) -> list[list[float]]:
    """Symmetric table of A_ij in erg cm (diagonal left at zero)."""
    n = len(species)
    A = [[0.0] * n for _ in range(n)]
    for i in range(n):
        mi, ei = species[i].m.value, species[i].e.value
        for j in range(i + 1, n):
            a = coupling_unprimed_raw(mi, ei, species[j].m.value, species[j].e.value, sigma, k_newton)
            A[i][j] = A[j][i] = a
    return A


def _couplings_for(state, cfg, dc, pc) -> list[list[float]]:
    sigma = derive_sigma(dc, pc, cfg.theta).value
    return coupling_matrix(state.species, sigma, pc.k_newton.value)


def _accel(pos: np.ndarray, inv_m: Sequence[float], A, eps2: float, labels) -> np.ndarray:
    n = len(pos)
    acc = np.zeros((n, 3))
    for i in range(n):
        for j in range(i + 1, n):
            d = pos[i] - pos[j]
            r2 = float(d @ d) + eps2
            if r2 == 0.0:
                raise NBodyError(f"coincident particles {labels[i]!r} and {labels[j]!r}")
            f = (A[i][j] / (r2 * math.sqrt(r2))) * d
            acc[i] += f * inv_m[i]
            acc[j] -= f * inv_m[j]
    return acc


def _potential(pos: np.ndarray, A, eps2: float) -> float:
    n = len(pos)
    pe = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d = pos[i] - pos[j]
            pe += A[i][j] / math.sqrt(float(d @ d) + eps2)
    return pe


def _labels(state):
    return [sp.label for sp in state.species]


def pairwise_accel(
    state: SystemState,
    cfg: IntegratorConfig,
    dc: DerivedConstants,
    pc: PhysicalConstants,
    couplings=None,
) -> np.ndarray:
    """(N, 3) accelerations in cm/s^2."""
    A = couplings if couplings is not None else _couplings_for(state, cfg, dc, pc)
    return _accel(state.pos, 1.0 / state.masses, A, cfg.softening**2, _labels(state))


def _kdk(pos, vel, acc, dt, inv_m, A, eps2, labels):
    vel = vel + (0.5 * dt) * acc
    pos = pos + dt * vel
    acc = _accel(pos, inv_m, A, eps2, labels)
    vel = vel + (0.5 * dt) * acc
    return pos, vel, acc


def step_leapfrog(
    state: SystemState,
    cfg: IntegratorConfig,
    dc: DerivedConstants,
    pc: PhysicalConstants,
    dt: float | None = None,
    couplings=None,
) -> SystemState:
    """One kick-drift-kick step. ``dt`` overrides ``cfg.dt`` and may be negative (time reversal)."""
    dt = cfg.dt if dt is None else float(dt)
    A = couplings if couplings is not None else _couplings_for(state, cfg, dc, pc)
    inv_m = 1.0 / state.masses
    eps2 = cfg.softening**2
    labels = _labels(state)
    acc = _accel(state.pos, inv_m, A, eps2, labels)
    pos, vel, _ = _kdk(state.pos, state.vel, acc, dt, inv_m, A, eps2, labels)
    return replace(state, t=state.t + dt, pos=pos, vel=vel)


def total_energy(
    state: SystemState,
    cfg: IntegratorConfig,
    dc: DerivedConstants,
    pc: PhysicalConstants,
    couplings=None,
) -> EnergyReport:
    A = couplings if couplings is not None else _couplings_for(state, cfg, dc, pc)
    ke = 0.5 * float(np.sum(state.masses * np.einsum("ij,ij->i", state.vel, state.vel)))
    pe = _potential(state.pos, A, cfg.softening**2)
    return EnergyReport(Quantity(ke, ENERGY), Quantity(pe, ENERGY), Quantity(ke + pe, ENERGY))


def kepler_reference(
    m1: Quantity,
    e1: Quantity,
    m2: Quantity,
    e2: Quantity,
    sigma: Quantity,
    r_circ: Quantity,
    pc: PhysicalConstants,
) -> KeplerOrbit:
    """Circular relative orbit for a bound pair: v = sqrt(|A| / (mu r)), T = 2 pi r / v."""
    p1 = ParticleSpecies("1", m1, e1)
    p2 = ParticleSpecies("2", m2, e2)
    A = coupling_unprimed(p1, p2, sigma, pc).A
    if A.value >= 0:
        raise NBodyError("unbound pair: coupling is not attractive")
    r_circ.require(LENGTH, "r_circ")
    if r_circ.value <= 0:
        raise NBodyError("non-positive separation")
    mu = m1 * m2 / (m1 + m2)
    speed = (abs(A) / (mu * r_circ)) ** 0.5
    period = 2.0 * math.pi * r_circ / speed
    return KeplerOrbit(period.require(TIME, "period"), speed.require(LENGTH / TIME, "speed"))


def circular_pair_state(
    p1: ParticleSpecies,
    p2: ParticleSpecies,
    r_circ: float,
    sigma: float,
    pc: PhysicalConstants,
) -> SystemState:
    """Two particles on a circular orbit in the x-y plane, centre of mass at rest at the origin."""
    orbit = kepler_reference(
        p1.m, p1.e, p2.m, p2.e, Quantity(sigma, p1.e.dim / p1.m.dim), Quantity(r_circ, LENGTH), pc
    )
    m1, m2 = p1.m.value, p2.m.value
    M = m1 + m2
    v = orbit.speed.value
    pos = [[m2 / M * r_circ, 0.0, 0.0], [-m1 / M * r_circ, 0.0, 0.0]]
    vel = [[0.0, m2 / M * v, 0.0], [0.0, -m1 / M * v, 0.0]]
    return SystemState(0.0, (p1, p2), pos, vel)


def iterate(
    initial: SystemState,
    cfg: IntegratorConfig,
    dc: DerivedConstants,
    pc: PhysicalConstants,
    couplings=None,
) -> Iterator[tuple[int, SystemState]]:
    """Yield ``(step, state)`` for step 0 and every ``output_every`` steps after it.

    The final step is always yielded, even when it is not a multiple of
    ``output_every``.
    """
    A = couplings if couplings is not None else _couplings_for(initial, cfg, dc, pc)
    inv_m = 1.0 / initial.masses
    eps2 = cfg.softening**2
    labels = _labels(initial)
    pos, vel, t = initial.pos, initial.vel, initial.t
    acc = _accel(pos, inv_m, A, eps2, labels)
    yield 0, initial
    for step in range(1, cfg.steps + 1):
        pos, vel, acc = _kdk(pos, vel, acc, cfg.dt, inv_m, A, eps2, labels)
        # t from the step count avoids accumulating dt round-off
        t = initial.t + step * cfg.dt
        if step % cfg.output_every == 0 or step == cfg.steps:
            yield step, replace(initial, t=t, pos=pos, vel=vel)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _write_snapshot(writer, step, state, cfg, dc, pc, A):
    en = total_energy(state, cfg, dc, pc, couplings=A)
    ke, pe, et = _fmt(en.kinetic.value), _fmt(en.potential.value), _fmt(en.total.value)
    for sp, x, v in zip(state.species, state.pos, state.vel):
        writer.writerow(
            [step, _fmt(state.t), sp.label, *map(_fmt, x), *map(_fmt, v), ke, pe, et]
        )


def simulate(
    initial: SystemState,
    cfg: IntegratorConfig,
    dc: DerivedConstants,
    pc: PhysicalConstants,
    sink: TextIO | None = None,
    couplings=None,
) -> SystemState:
    """Run ``cfg.steps`` leapfrog steps, writing CSV snapshots to ``sink``.

    On failure the rows written so far are kept, an ``ERROR`` trailer row is
    appended and flushed, and the exception propagates.
    """
    A = couplings if couplings is not None else _couplings_for(initial, cfg, dc, pc)
    writer = csv.writer(sink, lineterminator="\n") if sink is not None else None
    if writer is not None:
        writer.writerow(CSV_HEADER)
    state, step = initial, 0
    try:
        for step, state in iterate(initial, cfg, dc, pc, couplings=A):
            if writer is not None:
                _write_snapshot(writer, step, state, cfg, dc, pc, A)
    except Exception as exc:
        if writer is not None:
            writer.writerow([step, _fmt(state.t), f"ERROR: {exc}"] + [""] * (len(CSV_HEADER) - 3))
            sink.flush()
        raise
    if sink is not None:
        sink.flush()
    return state


def load_run_config(path: str | Path) -> tuple[SystemState, IntegratorConfig]:
    """Parse the simulation JSON (dt_s, steps, output_every, theta, softening_cm, particles)."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        cfg = IntegratorConfig(
            dt=float(data["dt_s"]),
            steps=int(data["steps"]),
            output_every=int(data.get("output_every", 1)),
            theta=float(data.get("theta", 0.0)),
            softening=float(data.get("softening_cm", 0.0)),
        )
        species, pos, vel = [], [], []
        for i, p in enumerate(data["particles"]):
            species.append(ParticleSpecies.cgs(p.get("label", f"p{i}"), float(p["m_g"]), float(p.get("e_statC", 0.0))))
            pos.append([float(x) for x in p["pos_cm"]])
            vel.append([float(x) for x in p.get("vel_cm_s", [0.0, 0.0, 0.0])])
    except KeyError as exc:
        raise NBodyError(f"{path}: missing field {exc}") from None
    labels = [sp.label for sp in species]
    if len(set(labels)) != len(labels):
        raise NBodyError(f"{path}: particle labels must be unique")
    return SystemState(0.0, tuple(species), pos, vel), cfg
