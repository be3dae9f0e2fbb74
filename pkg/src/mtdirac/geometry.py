"""Configuration-space geometry for two pointlike particles on a line.

A configuration is a pair of spacetime points (t1, z1), (t2, z2) with
metric signature (+, -), so the pair interval is

    I = (t1 - t2)**2 - (z1 - z2)**2.

The dynamics lives on the space-like configurations I < 0, split by the
spatial order of the particles into the open half Omega1 (z1 < z2) and
Omega2 (z1 > z2).  The coincidence set (t1 = t2, z1 = z2) and the
light-like boundary I = 0 separate the two halves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Region(Enum):
    OMEGA1 = "Omega1"
    OMEGA2 = "Omega2"
    COINCIDENCE = "Coincidence"
    LIGHTLIKE = "LightLike"
    TIMELIKE = "TimeLike"


class DomainError(ValueError):
    """Raised when an operation is asked for a configuration outside its domain."""


@dataclass(frozen=True)
class Configuration:
    """One configuration (t1, z1, t2, z2) of the two-particle system."""

    t1: float
    z1: float
    t2: float
    z2: float

    def __post_init__(self) -> None:
        for name in ("t1", "z1", "t2", "z2"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"non-finite coordinate {name}={v!r}")

    def swapped(self) -> "Configuration":
        """The configuration with particle labels exchanged."""
        return Configuration(self.t2, self.z2, self.t1, self.z1)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.t1, self.z1, self.t2, self.z2)


@dataclass(frozen=True)
class RelativeCoordinates:
    """Relative/total coordinates z = z1-z2, Z = z1+z2, tau = t1-t2, T = t1+t2."""

    z: float
    Z: float
    tau: float
    T: float


def interval(c: Configuration) -> float:
    """Pair interval (t1-t2)^2 - (z1-z2)^2; negative iff space-like."""
    return (c.t1 - c.t2) ** 2 - (c.z1 - c.z2) ** 2


def interval_arrays(t1, z1, t2, z2) -> np.ndarray:
    dt = np.asarray(t1, dtype=float) - np.asarray(t2, dtype=float)
    dz = np.asarray(z1, dtype=float) - np.asarray(z2, dtype=float)
    return dt * dt - dz * dz


def classify(c: Configuration, tol: float = 0.0) -> Region:
    """Classify a configuration by causal type and particle order.

    With tol > 0 the comparisons are relative to the coordinate scale
    s = max(1, max|coordinate|): coincidence means |t1-t2| <= tol*s and
    |z1-z2| <= tol*s, light-like means |interval| <= tol*s^2.  The default
    tol = 0 keeps exact floating-point comparisons.
    """
    if tol < 0:
        raise ValueError("tol must be >= 0")
    s = max(1.0, abs(c.t1), abs(c.z1), abs(c.t2), abs(c.z2))
    dt = c.t1 - c.t2
    dz = c.z1 - c.z2
    if abs(dt) <= tol * s and abs(dz) <= tol * s:
        return Region.COINCIDENCE
    iv = dt * dt - dz * dz
    if abs(iv) <= tol * s * s:
        return Region.LIGHTLIKE
    if iv > 0:
        return Region.TIMELIKE
    return Region.OMEGA1 if dz < 0 else Region.OMEGA2


def region_masks(t1, z1, t2, z2) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized exact classification into (in_omega1, in_omega2, not_spacelike)."""
    dt = np.asarray(t1, dtype=float) - np.asarray(t2, dtype=float)
    dz = np.asarray(z1, dtype=float) - np.asarray(z2, dtype=float)
    spacelike = dt * dt - dz * dz < 0.0
    m1 = spacelike & (dz < 0.0)
    m2 = spacelike & (dz > 0.0)
    return m1, m2, ~spacelike


def to_relative(c: Configuration) -> RelativeCoordinates:
    return RelativeCoordinates(
        z=c.z1 - c.z2, Z=c.z1 + c.z2, tau=c.t1 - c.t2, T=c.t1 + c.t2
    )


def from_relative(r: RelativeCoordinates) -> Configuration:
    return Configuration(
        t1=0.5 * (r.T + r.tau),
        z1=0.5 * (r.Z + r.z),
        t2=0.5 * (r.T - r.tau),
        z2=0.5 * (r.Z - r.z),
    )


def spacelike_margin(c: Configuration) -> float:
    """Euclidean distance from c to the nearest branch or domain boundary.

    The relevant walls are the two light-like planes |z1-z2| = |t1-t2| and
    the two characteristic seams z1 - t1 = z2 + t2 and z1 + t1 = z2 - t2
    where the closed-form solution switches branch.  Finite-difference
    probes must keep their whole stencil strictly inside one branch.
    """
    dz = c.z1 - c.z2
    dt = c.t1 - c.t2
    walls = (
        abs(dz - dt),
        abs(dz + dt),
        abs((c.z1 - c.t1) - (c.z2 + c.t2)),
        abs((c.z1 + c.t1) - (c.z2 - c.t2)),
    )
    return 0.5 * min(walls)


def sample_spacelike(
    rng: np.random.Generator,
    n: int,
    t_span: tuple[float, float],
    z_span: tuple[float, float],
    margin: float = 0.0,
    region: Region | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Draw n configurations uniformly from a box, keeping space-like ones.

    Optionally restrict to one of Omega1/Omega2 and to points at least
    `margin` away from the branch seams and the light-like boundary.
    Rejection sampling; raises RuntimeError if acceptance is hopeless.
    """
    if region not in (None, Region.OMEGA1, Region.OMEGA2):
        raise ValueError("region must be None, OMEGA1 or OMEGA2")
    out = [np.empty(0)] * 4
    got = 0
    attempts = 0
    chunks: list[np.ndarray] = []
    while got < n:
        attempts += 1
        if attempts > 200:
            raise RuntimeError("rejection sampling failed; box too tight")
        m = max(4 * (n - got), 256)
        t1 = rng.uniform(*t_span, m)
        t2 = rng.uniform(*t_span, m)
        z1 = rng.uniform(*z_span, m)
        z2 = rng.uniform(*z_span, m)
        m1, m2, _ = region_masks(t1, z1, t2, z2)
        keep = m1 | m2
        if region is Region.OMEGA1:
            keep = m1
        elif region is Region.OMEGA2:
            keep = m2
        if margin > 0.0:
            dz = z1 - z2
            dt = t1 - t2
            walls = np.minimum(
                np.minimum(np.abs(dz - dt), np.abs(dz + dt)),
                np.minimum(
                    np.abs((z1 - t1) - (z2 + t2)), np.abs((z1 + t1) - (z2 - t2))
                ),
            )
            keep &= 0.5 * walls > margin
        chunks.append(np.stack([t1[keep], z1[keep], t2[keep], z2[keep]]))
        got += int(keep.sum())
    cat = np.concatenate(chunks, axis=1)[:, :n]
    out = (cat[0], cat[1], cat[2], cat[3])
    return out
