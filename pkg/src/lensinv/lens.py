"""Bipyramid pre-triangulation of L(p, q) and its equivariant realization in R^3.

Edge classes are ordered ``a, b_0, ..., b_{p-1}, c``; tetrahedron ``i`` has
local vertices ``(C_0, C_1, B_{i+1}, B_i)``.  The copies ``B_j`` and ``C_j`` of
the two vertex classes sit on regular p-gons around the z axis; the
generator of the fundamental group acts as rotation by ``2 pi k / p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .defect import FaceGluing, MetricData, PreComplex, Tetrahedron
from .errors import DegenerateRealization, InvalidLensParams
from .tetgeom import oriented_volume

# realize() rejects |V_i| below this fraction of |R/6|; the sampler is stricter
VOLUME_TOL = 1e-12
SAMPLER_VOLUME_TOL = 0.05
SAMPLER_COS_TOL = 0.05
MAX_RESAMPLES = 1000

VERTEX_B, VERTEX_C = 0, 1


@dataclass(frozen=True)
class LensParams:
    p: int
    q: int
    k: int

    def __post_init__(self):
        validate_pq(self.p, self.q)
        if not 1 <= self.k <= self.p // 2:
            raise InvalidLensParams(f"k must lie in 1..{self.p // 2}, got {self.k}")
        if math.gcd(self.p, self.k) != 1:
            raise InvalidLensParams(f"gcd(p, k) must be 1, got p={self.p}, k={self.k}")


@dataclass(frozen=True)
class RealizationParams:
    rho: float
    sigma: float
    s: float
    alpha: float

    def __post_init__(self):
        if not (self.rho > 0 and self.sigma > 0):
            raise InvalidLensParams("rho and sigma must be positive")
        if not all(math.isfinite(x) for x in (self.rho, self.sigma, self.s, self.alpha)):
            raise InvalidLensParams("realization parameters must be finite")

    def scaled(self, factor: float) -> "RealizationParams":
        return RealizationParams(self.rho * factor, self.sigma * factor, self.s * factor, self.alpha)


def validate_pq(p: int, q: int) -> None:
    if not isinstance(p, (int, np.integer)) or not isinstance(q, (int, np.integer)):
        raise InvalidLensParams("p and q must be integers")
    if p < 3:
        raise InvalidLensParams(f"p must be at least 3, got {p}")
    if not 0 < q < p:
        raise InvalidLensParams(f"q must satisfy 0 < q < p, got q={q}")
    if math.gcd(p, q) != 1:
        raise InvalidLensParams(f"gcd(p, q) must be 1, got p={p}, q={q}")


def admissible_k(p: int) -> list[int]:
    return [k for k in range(1, p // 2 + 1) if math.gcd(p, k) == 1]


def edge_names(p: int) -> tuple[str, ...]:
    return ("a",) + tuple(f"b{j}" for j in range(p)) + ("c",)


def edge_a(p: int) -> int:
    return 0


def edge_b(p: int, j: int) -> int:
    return 1 + j % p


def edge_c(p: int) -> int:
    return p + 1


def build_lens_complex(p: int, q: int) -> PreComplex:
    """Bipyramid over a p-gon split into p tetrahedra around ``C_0 C_1``.

    Face ``B_i C_0 B_{i+1}`` is glued to ``B_{i+q} C_1 B_{i+q+1}``; the inner
    faces ``C_0 C_1 B_{i+1}`` are shared by consecutive tetrahedra.
    """
    validate_pq(p, q)
    tets = []
    for i in range(p):
        edges = (
            edge_c(p),               # C0 C1
            edge_b(p, i + 1),        # C0 B_{i+1}
            edge_b(p, i),            # C0 B_i
            edge_b(p, i + 1 - q),    # C1 B_{i+1} = C0 B_{i+1-q}
            edge_b(p, i - q),        # C1 B_i
            edge_a(p),               # B_{i+1} B_i
        )
        tets.append(Tetrahedron((VERTEX_C, VERTEX_C, VERTEX_B, VERTEX_B), edges))
    gluings = []
    for i in range(p):
        gluings.append(FaceGluing((i, (0, 1, 2)), ((i + 1) % p, (0, 1, 3))))
    for i in range(p):
        # (B_i, C_0, B_{i+1}) in tet i  ->  (B_{i+q}, C_1, B_{i+q+1}) in tet i+q
        gluings.append(FaceGluing((i, (3, 0, 2)), ((i + q) % p, (3, 1, 2))))
    return PreComplex(
        vertex_count=2,
        edge_classes=edge_names(p),
        tetrahedra=tuple(tets),
        gluings=tuple(gluings),
    )


def r_factor(lp: LensParams, rp: RealizationParams) -> float:
    return (
        4.0 * rp.rho * rp.sigma * rp.s
        * math.sin(math.pi * lp.k / lp.p) * math.sin(math.pi * lp.q * lp.k / lp.p)
    )


def signed_volumes_closed_form(lp: LensParams, rp: RealizationParams) -> np.ndarray:
    i = np.arange(lp.p)
    return r_factor(lp, rp) / 6.0 * np.sin(rp.alpha + math.pi * lp.k * (lp.q - 1 - 2 * i) / lp.p)


def _cylindrical(r, phi, z):
    return np.stack([r * np.cos(phi), r * np.sin(phi), np.broadcast_to(z, np.shape(phi))], axis=-1)


def vertex_coordinates(lp: LensParams, rp: RealizationParams) -> tuple[np.ndarray, np.ndarray]:
    j = np.arange(lp.p)
    b = _cylindrical(rp.rho, 2 * math.pi * j * lp.k / lp.p, 0.0)
    c = _cylindrical(rp.sigma, rp.alpha + 2 * math.pi * lp.q * j * lp.k / lp.p, rp.s)
    return b, c


def edge_lengths(lp: LensParams, rp: RealizationParams) -> np.ndarray:
    """Closed-form lengths in edge-class order ``a, b_0..b_{p-1}, c``."""
    p, q, k = lp.p, lp.q, lp.k
    j = np.arange(p)
    la = 2 * rp.rho * abs(math.sin(math.pi * k / p))
    lc = 2 * rp.sigma * abs(math.sin(math.pi * q * k / p))
    lb2 = (rp.rho**2 + rp.sigma**2 + rp.s**2
           - 2 * rp.rho * rp.sigma * np.cos(rp.alpha - 2 * math.pi * j * k / p))
    return np.concatenate([[la], np.sqrt(lb2), [lc]])


def length_derivatives(lp: LensParams, rp: RealizationParams) -> np.ndarray:
    """Analytic ``d l_e / d(rho, sigma, s, alpha)``, shape ``(p + 2, 4)``."""
    p, q, k = lp.p, lp.q, lp.k
    lengths = edge_lengths(lp, rp)
    out = np.zeros((p + 2, 4))
    out[0, 0] = 2 * abs(math.sin(math.pi * k / p))
    out[p + 1, 1] = 2 * abs(math.sin(math.pi * q * k / p))
    j = np.arange(p)
    phase = rp.alpha - 2 * math.pi * j * k / p
    lb = lengths[1:p + 1]
    out[1:p + 1, 0] = (rp.rho - rp.sigma * np.cos(phase)) / lb
    out[1:p + 1, 1] = (rp.sigma - rp.rho * np.cos(phase)) / lb
    out[1:p + 1, 2] = rp.s / lb
    out[1:p + 1, 3] = rp.rho * rp.sigma * np.sin(phase) / lb
    return out


def edge_partition(p: int) -> tuple[list[int], list[int]]:
    """``(C_bar, C)`` as edge-class indices: ``[a, b_0, b_{p-1}, c]`` and ``b_1..b_{p-2}``."""
    if p < 3:
        raise InvalidLensParams(f"p must be at least 3, got {p}")
    cbar = [edge_a(p), edge_b(p, 0), edge_b(p, p - 1), edge_c(p)]
    inner = [edge_b(p, j) for j in range(1, p - 1)]
    return cbar, inner


@dataclass(frozen=True)
class LensRealization:
    lens: LensParams
    params: RealizationParams
    complex: PreComplex
    metric: MetricData
    b_points: np.ndarray
    c_points: np.ndarray
    volumes: np.ndarray
    r: float

    @property
    def lengths(self) -> np.ndarray:
        return np.asarray(self.metric.lengths)

    def tetrahedron_points(self, i: int) -> np.ndarray:
        p = self.lens.p
        return np.array([self.c_points[0], self.c_points[1],
                         self.b_points[(i + 1) % p], self.b_points[i % p]])

    def to_dict(self) -> dict:
        return {
            "p": self.lens.p,
            "q": self.lens.q,
            "k": self.lens.k,
            "rho": self.params.rho,
            "sigma": self.params.sigma,
            "s": self.params.s,
            "alpha": self.params.alpha,
            "R": self.r,
            "B": self.b_points.tolist(),
            "C": self.c_points.tolist(),
            "edges": list(self.complex.edge_classes),
            "lengths": list(self.metric.lengths),
            "signs": list(self.metric.signs),
            "volumes": self.volumes.tolist(),
        }


def realize(lp: LensParams, rp: RealizationParams) -> LensRealization:
    """Place the vertex copies, read off lengths, signs and signed volumes."""
    p = lp.p
    b, c = vertex_coordinates(lp, rp)
    r = r_factor(lp, rp)
    volumes = np.array([
        oriented_volume(c[0], c[1], b[(i + 1) % p], b[i]) for i in range(p)
    ])
    floor = VOLUME_TOL * abs(r) / 6.0
    if abs(r) == 0.0 or np.min(np.abs(volumes)) <= floor:
        raise DegenerateRealization(
            f"flat tetrahedron in realization of L({p},{lp.q}) k={lp.k} at {rp}"
        )
    cx = build_lens_complex(p, lp.q)
    signs = tuple(1 if v > 0 else -1 for v in volumes)
    metric = MetricData(tuple(edge_lengths(lp, rp)), signs)
    return LensRealization(lp, rp, cx, metric, b, c, volumes, r)


def is_generic(lp: LensParams, rp: RealizationParams) -> bool:
    r6 = abs(r_factor(lp, rp)) / 6.0
    v = signed_volumes_closed_form(lp, rp)
    cos = math.cos(rp.alpha + math.pi * lp.k / lp.p)
    return bool(np.min(np.abs(v)) >= SAMPLER_VOLUME_TOL * r6 and abs(cos) >= SAMPLER_COS_TOL)


def sample_params(lp: LensParams, rng: np.random.Generator) -> RealizationParams:
    """Random generic parameters.

    ``rho, sigma, s`` are uniform on [0.5, 2].  Every V_i vanishes exactly
    when alpha is a multiple of pi/p, so alpha is drawn inside one of the 2p
    open windows between consecutive zeros; draws too close to a zero of some
    V_i or of ``cos(alpha + pi k / p)`` are rejected.
    """
    for _ in range(MAX_RESAMPLES):
        rho, sigma, s = rng.uniform(0.5, 2.0, size=3)
        window = int(rng.integers(0, 2 * lp.p))
        alpha = (window + rng.uniform(0.0, 1.0)) * math.pi / lp.p
        rp = RealizationParams(float(rho), float(sigma), float(s), float(alpha))
        if is_generic(lp, rp):
            return rp
    raise DegenerateRealization(f"no generic parameters found for {lp} after {MAX_RESAMPLES} draws")


def reference_params(
    lp: LensParams, rho: float = 3.0, sigma: float = 3.0, s: float = 4.0
) -> RealizationParams:
    """Deterministic generic parameters: alpha at the centre of the first
    generic window between zeros of the V_i.

    At these sizes every tetrahedron is thick enough for a central finite
    difference with step 1e-6 to resolve the defect Jacobian.
    """
    for window in range(2 * lp.p):
        rp = RealizationParams(rho, sigma, s, (window + 0.5) * math.pi / lp.p)
        if is_generic(lp, rp):
            return rp
    raise DegenerateRealization(f"no generic window for {lp}")
