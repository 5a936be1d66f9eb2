"""Phases of a charge carried around a Dirac monopole.

A charge looping around a monopole of strength ``n_q`` (``e g = n_q / 2`` in
``hbar = c = 1``) picks up ``n_q * Omega / 2`` where ``Omega`` is the solid
angle of the loop seen from the monopole. The phase generally depends on the
loop's shape; it is topological only when the loop lies in a plane that
contains the monopole, where ``Omega = 2 pi w`` for in-plane winding ``w``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ApexOnPath
from .geometry import (
    ClosedPath3D,
    ClosedPath2D,
    in_plane_coordinates,
    loop_normal,
    segment_distances,
    solid_angle,
    winding_number,
)


@dataclass(frozen=True, eq=False)
class MonopoleConfig:
    position: np.ndarray
    n_q: int = 1

    def __post_init__(self):
        p = np.array(self.position, dtype=float).reshape(3)
        if not np.all(np.isfinite(p)):
            raise ValueError("monopole position must be finite")
        if int(self.n_q) != self.n_q or self.n_q < 1:
            raise ValueError("charge quantum n_q must be a positive integer")
        p.setflags(write=False)
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "n_q", int(self.n_q))

    def to_json(self) -> str:
        return json.dumps({"position": self.position.tolist(), "n_q": self.n_q})

    @classmethod
    def from_json(cls, text: str) -> "MonopoleConfig":
        data = json.loads(text)
        return cls(data["position"], data.get("n_q", 1))


def monopole_phase(path: ClosedPath3D, cfg: MonopoleConfig, pole=None) -> float:
    return cfg.n_q * solid_angle(path, cfg.position, pole=pole) / 2.0


@dataclass(frozen=True)
class Topological:
    winding: int


@dataclass(frozen=True)
class Holonomic:
    pass


def certify_topological(path: ClosedPath3D, cfg: MonopoleConfig, tol: float | None = None):
    """``Topological(w)`` for a planar loop whose plane holds the monopole, else ``Holonomic()``.

    The plane is the least-variance plane of the vertices, oriented along the
    loop normal so ``w`` matches the sign used by :func:`solid_angle`.
    ``tol`` defaults to ``1e-9`` times the bounding-box diagonal.
    """
    v = path.vertices
    if segment_distances(cfg.position, path).min() <= 1e-9:
        raise ApexOnPath("monopole lies on the path")
    centre = v.mean(axis=0)
    if tol is None:
        tol = 1e-9 * np.linalg.norm(np.ptp(v, axis=0))
    _, _, vt = np.linalg.svd(v - centre)
    normal = vt[-1]
    if np.abs((v - centre) @ normal).max() > tol:
        return Holonomic()
    if abs((cfg.position - centre) @ normal) > tol:
        return Holonomic()
    if normal @ loop_normal(path) < 0:
        normal = -normal
    flat = ClosedPath2D(in_plane_coordinates(v, centre, normal))
    w = winding_number(flat, in_plane_coordinates(cfg.position, centre, normal))
    return Topological(w)
