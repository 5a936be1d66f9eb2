"""Winding numbers and solid angles of closed polyline loops.

Paths are stored as ``(N, d)`` float arrays. Traversal runs vertex ``i`` to
vertex ``i + 1`` and closes implicitly from the last vertex back to the first.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ApexOnPath, PointOnPath

DEFAULT_TOL = 1e-9
_WINDING_RESIDUAL = 1e-6


def _as_points(vertices, dim: int) -> np.ndarray:
    arr = np.array(vertices, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ValueError(f"expected an (N, {dim}) array of vertices, got shape {arr.shape}")
    if arr.shape[0] < 3:
        raise ValueError(f"a closed path needs at least 3 vertices, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("path vertices must be finite")
    steps = np.roll(arr, -1, axis=0) - arr
    if np.any(np.all(steps == 0.0, axis=1)):
        raise ValueError("consecutive path vertices must be distinct")
    arr.setflags(write=False)
    return arr


def _as_point(point, dim: int) -> np.ndarray:
    p = np.asarray(point, dtype=float).reshape(-1)
    if p.shape != (dim,):
        raise ValueError(f"expected a {dim}-vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


@dataclass(frozen=True, eq=False)
class _ClosedPath:
    vertices: np.ndarray
    _dim = 0

    def __post_init__(self):
        object.__setattr__(self, "vertices", _as_points(self.vertices, self._dim))

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return type(self) is type(other) and np.array_equal(self.vertices, other.vertices)

    @property
    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        """Start and end points of every segment, closing segment included."""
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def reversed(self):
        """Same loop traversed backwards from the same base vertex."""
        v = self.vertices
        return type(self)(np.concatenate([v[:1], v[:0:-1]]))

    def concat(self, other):
        """Traverse ``self`` then ``other``; both must start at the same base point."""
        if not np.allclose(self.vertices[0], other.vertices[0], rtol=0, atol=1e-12):
            raise ValueError("loops must share their base vertex to be concatenated")
        return type(self)(np.concatenate([self.vertices, other.vertices]))

    def translated(self, offset):
        return type(self)(self.vertices + np.asarray(offset, dtype=float))

    def to_json(self) -> str:
        return json.dumps(self.vertices.tolist())

    @classmethod
    def from_json(cls, text: str):
        return cls(json.loads(text))


class ClosedPath2D(_ClosedPath):
    _dim = 2


class ClosedPath3D(_ClosedPath):
    _dim = 3


def segment_distances(points, path: _ClosedPath) -> np.ndarray:
    """Distance from each point to each path segment, shape ``(M, N)``."""
    pts = np.asarray(points, dtype=float).reshape(-1, path.vertices.shape[1])
    a, b = path.segments
    ab = b - a
    ap = pts[:, None, :] - a[None, :, :]
    t = np.einsum("mnd,nd->mn", ap, ab) / np.einsum("nd,nd->n", ab, ab)
    t = np.clip(t, 0.0, 1.0)
    closest = a[None, :, :] + t[..., None] * ab[None, :, :]
    return np.linalg.norm(pts[:, None, :] - closest, axis=-1)


def _winding_sums(path: ClosedPath2D, pts: np.ndarray) -> np.ndarray:
    rel = path.vertices[None, :, :] - pts[:, None, :]
    nxt = np.roll(rel, -1, axis=1)
    cross = rel[..., 0] * nxt[..., 1] - rel[..., 1] * nxt[..., 0]
    dot = np.einsum("mnd,mnd->mn", rel, nxt)
    return np.arctan2(cross, dot).sum(axis=1) / (2.0 * math.pi)


def winding_vector(path: ClosedPath2D, punctures: Sequence, tol: float = DEFAULT_TOL) -> list[int]:
    """Winding number of ``path`` around each puncture (counterclockwise positive)."""
    if len(punctures) == 0:
        return []
    pts = np.asarray(punctures, dtype=float).reshape(-1, 2)
    dist = segment_distances(pts, path)
    close = np.nonzero(dist.min(axis=1) <= tol)[0]
    if close.size:
        i = int(close[0])
        raise PointOnPath(f"puncture {i} at {pts[i].tolist()} lies on the path", index=i)
    turns = _winding_sums(path, pts)
    rounded = np.rint(turns)
    residual = np.abs(turns - rounded).max()
    # a clean angle sum lands on an integer up to rounding noise
    assert residual < _WINDING_RESIDUAL, f"winding residual {residual} too large"
    return [int(w) for w in rounded]


def winding_number(path: ClosedPath2D, point, tol: float = DEFAULT_TOL) -> int:
    """Signed number of counterclockwise turns ``path`` makes around ``point``.

    Raises :class:`PointOnPath` if the point is within ``tol`` of the path.
    """
    p = _as_point(point, 2)
    try:
        return winding_vector(path, [p], tol)[0]
    except PointOnPath as exc:
        raise PointOnPath(str(exc)) from None


def path_clearance(path: _ClosedPath, obstacles: Sequence, min_dist: float) -> bool:
    if min_dist <= 0:
        raise ValueError("min_dist must be positive")
    if len(obstacles) == 0:
        return True
    return bool(segment_distances(obstacles, path).min() > min_dist)


def loop_normal(path: ClosedPath3D) -> np.ndarray:
    """Unit normal of the loop's vector area (right-hand rule).

    Loops whose vector area vanishes (a symmetric figure-eight, say) fall back
    to the least-variance axis of the vertex cloud with a fixed sign.
    """
    v = path.vertices
    area = 0.5 * np.cross(v, np.roll(v, -1, axis=0)).sum(axis=0)
    scale = np.ptp(v, axis=0).max() ** 2
    norm = np.linalg.norm(area)
    if norm > 1e-12 * scale:
        return area / norm
    _, _, vt = np.linalg.svd(v - v.mean(axis=0))
    n = vt[-1]
    k = int(np.argmax(np.abs(n)))
    return n if n[k] > 0 else -n


def plane_basis(normal) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal ``u, v`` spanning the plane with ``u x v == normal``."""
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    seed = np.eye(3)[int(np.argmin(np.abs(n)))]
    u = np.cross(seed, n)
    u /= np.linalg.norm(u)
    return u, np.cross(n, u)


def solid_angle(path: ClosedPath3D, apex, tol: float = DEFAULT_TOL, pole=None) -> float:
    """Signed solid angle subtended by ``path`` as seen from ``apex``.

    The loop is fanned into spherical triangles that share a common pole
    direction and each triangle is evaluated with the Van Oosterom-Strandberg
    formula. The pole defaults to the loop's own normal, so the branch cut
    (the direction opposite the pole) sits behind the loop. With that choice a
    counterclockwise circle at polar angle ``t`` gives ``2*pi*(1 - cos t)`` for
    every ``t`` in ``(0, pi)``, and a planar loop whose plane contains the
    apex gives exactly ``2*pi`` times its in-plane winding number.

    Loops concatenated at a shared base point are additive when the same
    explicit ``pole`` is passed for all of them.
    """
    q = _as_point(apex, 3)
    if segment_distances(q, path).min() <= tol:
        raise ApexOnPath(f"apex {q.tolist()} lies on the path")
    p = loop_normal(path) if pole is None else _as_point(pole, 3)
    p = p / np.linalg.norm(p)

    r2 = path.vertices - q
    r3 = np.roll(r2, -1, axis=0)
    n2 = np.linalg.norm(r2, axis=1)
    n3 = np.linalg.norm(r3, axis=1)
    cross = np.cross(r2, r3)
    num = cross @ p
    den = n2 * n3 + (r2 @ p) * n3 + (r3 @ p) * n2 + np.einsum("ij,ij->i", r2, r3)
    omega = 2.0 * np.arctan2(num, den)
    # zero-area triangles (edge seen end-on) contribute nothing
    degenerate = np.linalg.norm(cross, axis=1) <= 1e-15 * n2 * n3
    omega[degenerate] = 0.0
    return float(omega.sum())


def in_plane_coordinates(points, origin, normal) -> np.ndarray:
    u, v = plane_basis(normal)
    rel = np.asarray(points, dtype=float) - np.asarray(origin, dtype=float)
    return np.stack([rel @ u, rel @ v], axis=-1)
