"""Boundary sampling, winding-number containment and the subordination test.

The open-disk statement "for all z in U" is checked on a ladder of circles
``|z| = r`` with ``r <= r_max``.  The image ``h(U)`` of a dominant is
represented by the closed curve ``h(rho e^{it})`` at the envelope radius
``rho = (1 + r_max) / 2``, which lies strictly between the probe ladder and the
unit circle.  By the Schwarz lemma ``g = h o w`` maps ``|z| <= r`` into
``h(|z| <= r)``, so a true subordination never fails against the envelope.

A ``Holds`` verdict is a numerical certificate, not a proof.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    DegenerateDerivative,
    MissingDerivative,
    PointTooCloseToCurve,
    QNotVanishingAtOrigin,
    SubordlabError,
)
from .zoo import AnalyticMap


class Status(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ProbeConfig:
    radii: tuple = (0.5, 0.9, 0.99, 0.999)
    n_theta: int = 4096
    tol: float = 1e-9
    order: int = 24

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if not radii:
            raise ValueError("at least one probe radius is required")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError(f"radii must be strictly increasing: {radii}")
        if not (0.0 < radii[0] and radii[-1] < 1.0):
            raise ValueError(f"radii must lie in (0, 1): {radii}")
        if int(self.n_theta) < 64:
            raise ValueError("n_theta must be at least 64")
        object.__setattr__(self, "n_theta", int(self.n_theta))
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if int(self.order) < 1:
            raise ValueError("order must be at least 1")

    @property
    def r_max(self) -> float:
        return self.radii[-1]

    @property
    def envelope_radius(self) -> float:
        return 0.5 * (1.0 + self.r_max)

    def as_dict(self) -> dict:
        return {"r_max": self.r_max, "n_theta": self.n_theta, "tol": self.tol,
                "order": self.order}


def thetas(n: int) -> np.ndarray:
    """``2 pi k / n``; symmetric under ``theta -> -theta`` modulo ``2 pi``."""
    return 2.0 * np.pi * np.arange(n) / n


def circle(r: float, n: int) -> np.ndarray:
    return r * np.exp(1j * thetas(n))


def boundary_min_re(g: Callable, r: float, n: int) -> float:
    """Minimum of ``Re g`` over ``n`` equispaced points of ``|z| = r``."""
    return float(np.min(np.real(g(circle(r, n)))))


@dataclass(frozen=True)
class ProbeMinimum:
    value: float
    z: complex
    per_radius: dict


def min_re_on_probes(fn: Callable, cfg: ProbeConfig, radii: Sequence[float] | None = None,
                     n: int | None = None) -> ProbeMinimum:
    n = n or cfg.n_theta
    best, best_z, per = math.inf, 0j, {}
    for r in radii or cfg.radii:
        z = circle(r, n)
        vals = np.real(fn(z))
        k = int(np.argmin(vals))
        per[r] = float(vals[k])
        if vals[k] < best:
            best, best_z = float(vals[k]), complex(z[k])
    return ProbeMinimum(best, best_z, per)


# -- polygon geometry ---------------------------------------------------------

def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = np.abs(ab) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.real((p - a) * np.conj(ab)) / denom
    t = np.where(denom > 0, np.clip(t, 0.0, 1.0), 0.0)
    return np.abs(p - (a + t * ab))


def winding_number(curve: Sequence[complex], w: complex, tol: float = 1e-9) -> int:
    """Winding number of the closed polygon ``curve`` about ``w``.

    Sums the principal argument increments of ``(c_{k+1} - w)/(c_k - w)``; each
    increment is below ``pi`` in magnitude whenever ``w`` is off the polygon.
    """
    c = np.asarray(curve, dtype=complex)
    w = complex(w)
    nxt = np.roll(c, -1)
    if np.min(_segment_distance(np.full(c.shape, w), c, nxt)) <= tol:
        raise PointTooCloseToCurve(f"point {w} is within {tol:g} of the curve")
    total = np.sum(np.angle((nxt - w) / (c - w)))
    return int(round(total / (2.0 * np.pi)))


class CurveIndex:
    """A closed polygon prepared for bulk winding and distance queries."""

    def __init__(self, vertices: np.ndarray):
        v = np.asarray(vertices, dtype=complex)
        if v.size < 3:
            raise ValueError("a closed curve needs at least three vertices")
        self.v = v
        self.nxt = np.roll(v, -1)
        self._tree = cKDTree(np.column_stack([v.real, v.imag]))
        self.seg_len = np.abs(self.nxt - v)

    def winding(self, pts: np.ndarray) -> np.ndarray:
        """Signed crossing count per point (Sunday's rule), sweep over sorted y."""
        pts = np.asarray(pts, dtype=complex).ravel()
        order = np.argsort(pts.imag, kind="stable")
        ys = pts.imag[order]
        x0, y0 = self.v.real, self.v.imag
        x1, y1 = self.nxt.real, self.nxt.imag
        lo = np.minimum(y0, y1)
        hi = np.maximum(y0, y1)
        start = np.searchsorted(ys, lo, side="left")
        stop = np.searchsorted(ys, hi, side="left")
        counts = stop - start
        wind = np.zeros(pts.size)
        edges = np.nonzero(counts)[0]
        if edges.size == 0:
            return wind.astype(int)
        # process edges in chunks to bound the pair arrays
        budget = 4_000_000
        csum = np.cumsum(counts[edges])
        begin = 0
        while begin < edges.size:
            base = csum[begin - 1] if begin else 0
            end = int(np.searchsorted(csum, base + budget, side="right"))
            end = max(end, begin + 1)
            e = edges[begin:end]
            cnt = counts[e]
            e_rep = np.repeat(e, cnt)
            offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
            pos = np.repeat(start[e], cnt) + offs
            pidx = order[pos]
            px, py = pts.real[pidx], pts.imag[pidx]
            isl = ((x1[e_rep] - x0[e_rep]) * (py - y0[e_rep])
                   - (px - x0[e_rep]) * (y1[e_rep] - y0[e_rep]))
            up = y1[e_rep] > y0[e_rep]
            contrib = np.where(up & (isl > 0), 1.0, 0.0) - np.where(~up & (isl < 0), 1.0, 0.0)
            wind += np.bincount(pidx, weights=contrib, minlength=pts.size)
            begin = end
        return np.rint(wind).astype(int)

    def distance(self, pts: np.ndarray, k: int = 12) -> np.ndarray:
        """Distance from each point to the polygon (segments near the nearest vertices)."""
        pts = np.asarray(pts, dtype=complex).ravel()
        k = min(k, self.v.size)
        _, idx = self._tree.query(np.column_stack([pts.real, pts.imag]), k=k)
        idx = np.atleast_2d(idx).reshape(pts.size, k)
        cand = np.concatenate([idx, (idx - 1) % self.v.size], axis=1)
        d = _segment_distance(pts[:, None], self.v[cand], self.nxt[cand])
        return np.min(d, axis=1)

    def inner_distance(self, pts: np.ndarray, budget: int = 2_000_000) -> np.ndarray:
        """Distances accurate wherever they can matter for the minimum.

        A tree over ``pts`` queried from the vertices bounds the smallest gap
        by ``M``.  A point at distance ``m <= M`` from segment ``i`` lies within
        ``M + L_i`` of its first vertex, so only those point-segment pairs are
        evaluated; points outside every such ball get ``inf``.  Falls back to
        :meth:`distance` when the pair count exceeds ``budget``.
        """
        pts = np.asarray(pts, dtype=complex).ravel()
        tree = cKDTree(np.column_stack([pts.real, pts.imag]))
        vxy = np.column_stack([self.v.real, self.v.imag])
        d, _ = tree.query(vxy, k=1)
        radius = float(np.min(d)) + self.seg_len + 1e-12
        # vertices whose nearest sample is already beyond their radius see nothing
        keep = np.nonzero(d <= radius)[0]
        counts = np.asarray(tree.query_ball_point(vxy[keep], radius[keep], return_length=True))
        if int(np.sum(counts)) > budget:
            return self.distance(pts)
        lists = tree.query_ball_point(vxy[keep], radius[keep])
        seg = np.repeat(keep, counts)
        pidx = np.fromiter(itertools.chain.from_iterable(lists), dtype=np.intp, count=seg.size)
        dd = _segment_distance(pts[pidx], self.v[seg], self.nxt[seg])
        out = np.full(pts.size, np.inf)
        np.minimum.at(out, pidx, dd)
        return out


def sample_curve(h: Callable, r: float, n: int, max_factor: int = 8,
                 passes: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Sample ``h(r e^{it})`` and bisect segments much longer than typical."""
    t = thetas(n)
    vals = np.asarray(h(r * np.exp(1j * t)), dtype=complex)
    cap = max_factor * n
    for _ in range(passes):
        seg = np.abs(np.roll(vals, -1) - vals)
        thresh = 4.0 * float(np.median(seg))
        long = np.nonzero(seg > thresh)[0] if thresh > 0 else np.array([], int)
        if long.size == 0 or t.size + long.size > cap:
            break
        t_next = np.roll(t, -1)
        t_next[-1] += 2 * np.pi
        mids = 0.5 * (t[long] + t_next[long])
        new_vals = np.asarray(h(r * np.exp(1j * mids)), dtype=complex)
        t = np.concatenate([t, mids])
        vals = np.concatenate([vals, new_vals])
        o = np.argsort(t, kind="stable")
        t, vals = t[o], vals[o]
    return t, vals


# -- containment -------------------------------------------------------------

@dataclass(frozen=True)
class Containment:
    contained: Optional[bool]
    margin: float
    winding: Optional[int]


def image_contains(h: AnalyticMap, w: complex, cfg: ProbeConfig = ProbeConfig()) -> Containment:
    """Is ``w`` inside the curve ``h(rho e^{it})``?  ``None`` when within ``tol``."""
    _, vals = sample_curve(h, cfg.envelope_radius, cfg.n_theta)
    idx = CurveIndex(vals)
    pt = np.array([complex(w)])
    margin = float(idx.distance(pt)[0])
    if margin <= cfg.tol:
        return Containment(None, margin, None)
    wind = int(idx.winding(pt)[0])
    return Containment(wind >= 1, margin, wind)


@dataclass
class SubordinationVerdict:
    status: Status
    margin: float
    probe: ProbeConfig
    witness: Optional[tuple] = None
    reason: str = ""
    per_radius: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status is Status.FAILS and self.witness is None:
            raise ValueError("a Fails verdict needs a witness")

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS


def subordination_check(g: AnalyticMap, h: AnalyticMap, cfg: ProbeConfig = ProbeConfig(),
                        h_univalent: Optional[bool] = None) -> SubordinationVerdict:
    """Numerical test of ``g < h`` via ``g(0) = h(0)`` and image containment.

    ``h_univalent`` lets callers pass a certificate they already hold; when
    ``None`` the univalence of ``h`` is checked here.  Without univalence a
    containment failure still refutes the subordination, but containment alone
    only gives ``Inconclusive``.
    """
    tol = cfg.tol
    try:
        g0, h0 = complex(g(0.0)), complex(h(0.0))
    except (SubordlabError, ArithmeticError) as exc:
        return SubordinationVerdict(Status.INCONCLUSIVE, math.nan, cfg,
                                    reason=f"evaluation at 0 failed: {exc}")
    gap = abs(g0 - h0)
    if not math.isfinite(gap):
        return SubordinationVerdict(Status.INCONCLUSIVE, math.nan, cfg,
                                    reason="non-finite value at 0")
    if gap > tol:
        return SubordinationVerdict(Status.FAILS, -gap, cfg, witness=(0j, g0),
                                    reason="g(0) != h(0)")

    uni_reason = ""
    if h_univalent is None:
        uni = univalence_check(h, cfg)
        h_univalent = uni.certified
        uni_reason = f"univalence of h: {uni.status}"

    try:
        _, hv = sample_curve(h, cfg.envelope_radius, cfg.n_theta)
    except (SubordlabError, ArithmeticError) as exc:
        return SubordinationVerdict(Status.INCONCLUSIVE, math.nan, cfg,
                                    reason=f"sampling h failed: {exc}")
    if not np.all(np.isfinite(hv)):
        return SubordinationVerdict(Status.INCONCLUSIVE, math.nan, cfg,
                                    reason="h is not finite on the envelope circle")
    index = CurveIndex(hv)

    margin = math.inf
    per = {}
    close = False
    for r in cfg.radii:
        z = circle(r, cfg.n_theta)
        try:
            w = np.asarray(g(z), dtype=complex)
        except (SubordlabError, ArithmeticError) as exc:
            return SubordinationVerdict(Status.INCONCLUSIVE, math.nan, cfg,
                                        reason=f"evaluating g at r={r} failed: {exc}",
                                        per_radius=per)
        if not np.all(np.isfinite(w)):
            return SubordinationVerdict(Status.INCONCLUSIVE, math.nan, cfg,
                                        reason=f"g is not finite at r={r}", per_radius=per)
        inside = index.winding(w) >= 1
        outside = np.nonzero(~inside)[0]
        if outside.size:
            d_out = index.distance(w[outside])
            per[r] = -float(np.max(d_out))
            margin = min(margin, per[r])
            bad = outside[d_out > tol]
            if bad.size:
                k = int(bad[0])
                return SubordinationVerdict(Status.FAILS, margin, cfg,
                                            witness=(complex(z[k]), complex(w[k])),
                                            reason=f"g(z) outside h(U) at r={r}",
                                            per_radius=per)
            close = True
            continue
        d_in = index.inner_distance(w)
        per[r] = float(np.min(d_in))
        margin = min(margin, per[r])
        close = close or bool(np.any(d_in <= tol))

    if close or margin <= tol:
        return SubordinationVerdict(Status.INCONCLUSIVE, margin, cfg,
                                    reason="containment margin within tolerance",
                                    per_radius=per)
    if not h_univalent:
        return SubordinationVerdict(Status.INCONCLUSIVE, margin, cfg,
                                    reason=uni_reason or "h not certified univalent",
                                    per_radius=per)
    return SubordinationVerdict(Status.HOLDS, margin, cfg, per_radius=per)


# -- univalence ---------------------------------------------------------------

class Univalence(str, enum.Enum):
    CERTIFIED = "Certified"
    CERTIFIED_NUMERICALLY = "CertifiedNumerically"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class UnivalenceResult:
    status: Univalence
    witness: Optional[tuple] = None
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.status in (Univalence.CERTIFIED, Univalence.CERTIFIED_NUMERICALLY)


def _analytic_certificate(h: AnalyticMap) -> Optional[UnivalenceResult]:
    fam, prm = h.family, h.params
    if fam == "moebius":
        return UnivalenceResult(Univalence.CERTIFIED, reason="Moebius map with A != B")
    if fam in ("binomial_power", "spiral_power") and prm.get("royster"):
        return UnivalenceResult(Univalence.CERTIFIED,
                                reason="exponent in the Royster region")
    if fam == "exp_line":
        return UnivalenceResult(Univalence.CERTIFIED, reason="exp(Cz) with |C| < pi")
    if fam == "koebe":
        return UnivalenceResult(Univalence.CERTIFIED, reason="Koebe function")
    if fam == "pvalent" and prm.get("p") == 1 and not prm.get("tail"):
        return UnivalenceResult(Univalence.CERTIFIED, reason="identity map")
    if fam == "polynomial":
        c = np.trim_zeros(np.array(prm["coeffs"], dtype=complex), "b")
        if c.size == 2 and c[1] != 0:
            return UnivalenceResult(Univalence.CERTIFIED, reason="affine map")
    return None


def _derivative(h: AnalyticMap, z):
    try:
        return h.d1(z)
    except MissingDerivative:
        step = 1e-6
        return (h(z + step) - h(z - step)) / (2 * step)


def _refine_collision(h: AnalyticMap, r: float, t1: float, t2: float, tol: float,
                      iters: int = 60) -> Optional[tuple]:
    """Newton on ``h(r e^{i t1}) = h(r e^{i t2})`` over the two angles."""
    for _ in range(iters):
        z1, z2 = r * np.exp(1j * t1), r * np.exp(1j * t2)
        f = complex(h(z1)) - complex(h(z2))
        if abs(f) < 0.01 * tol:
            break
        j1 = complex(1j * z1 * _derivative(h, z1))
        j2 = complex(-1j * z2 * _derivative(h, z2))
        jac = np.array([[j1.real, j2.real], [j1.imag, j2.imag]])
        try:
            step = np.linalg.solve(jac, [-f.real, -f.imag])
        except np.linalg.LinAlgError:
            return None
        t1, t2 = t1 + step[0], t2 + step[1]
        if not (np.isfinite(t1) and np.isfinite(t2)):
            return None
    z1, z2 = r * np.exp(1j * t1), r * np.exp(1j * t2)
    if abs(complex(h(z1)) - complex(h(z2))) < tol and abs(z1 - z2) > 10 * tol:
        return complex(z1), complex(z2)
    return None


def _segment_crossings(v: np.ndarray, block: int = 512):
    """Yield ``(i, j, s, t)`` for properly crossing non-adjacent edges ``i < j``."""
    a, b = v, np.roll(v, -1)
    m = v.size
    d = b - a

    def cross(u, w):
        return u.real * w.imag - u.imag * w.real

    for s0 in range(0, m, block):
        i = np.arange(s0, min(s0 + block, m))[:, None]
        j = np.arange(m)[None, :]
        ai, di = a[i], d[i]
        aj, dj = a[j], d[j]
        den = cross(di, dj)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = cross(aj - ai, dj) / den
            t = cross(aj - ai, di) / den
        ok = ((j > i + 1) & ~((i == 0) & (j == m - 1)) & (den != 0)
              & (s > 0) & (s < 1) & (t > 0) & (t < 1))
        ii, jj = np.nonzero(ok)
        for p, q in zip(ii, jj):
            yield int(i[p, 0]), int(j[0, q]), float(s[p, q]), float(t[p, q])


def univalence_check(h: AnalyticMap, cfg: ProbeConfig = ProbeConfig(),
                     use_certificates: bool = True, max_pairs: int = 64) -> UnivalenceResult:
    """Certify, refute or give up on univalence of ``h`` in the disk.

    Zoo families with known univalence get analytic certificates.  Otherwise
    sample collisions and boundary self-intersections are searched at
    ``r_max``; a crossing is refined by Newton into an explicit pair
    ``z1 != z2`` with ``h(z1) = h(z2)``.  A simple boundary curve certifies
    univalence on ``|z| <= r_max`` (Darboux).
    """
    if use_certificates:
        cert = _analytic_certificate(h)
        if cert is not None:
            return cert
    tol = cfg.tol
    n = min(cfg.n_theta, 2048)
    r = cfg.r_max
    try:
        t, vals = sample_curve(h, r, n, max_factor=4)
    except (SubordlabError, ArithmeticError) as exc:
        return UnivalenceResult(Univalence.UNKNOWN, reason=f"sampling failed: {exc}")
    if not np.all(np.isfinite(vals)):
        return UnivalenceResult(Univalence.UNKNOWN, reason="non-finite boundary values")
    z = r * np.exp(1j * t)

    # coinciding samples (covers constants and z^p)
    tree = cKDTree(np.column_stack([vals.real, vals.imag]))
    for i, j in sorted(tree.query_pairs(tol)):
        if abs(z[i] - z[j]) > 10 * tol:
            return UnivalenceResult(Univalence.REFUTED, (complex(z[i]), complex(z[j])),
                                    "coinciding samples")

    found = False
    for k, (i, j, s, u) in enumerate(_segment_crossings(vals)):
        if k >= max_pairs:
            break
        found = True
        ti = t[i] + s * ((t[(i + 1) % t.size] - t[i]) % (2 * np.pi))
        tj = t[j] + u * ((t[(j + 1) % t.size] - t[j]) % (2 * np.pi))
        pair = _refine_collision(h, r, ti, tj, tol)
        if pair is not None:
            return UnivalenceResult(Univalence.REFUTED, pair,
                                    f"boundary self-intersection at r={r}")
    if found:
        return UnivalenceResult(Univalence.UNKNOWN,
                                reason="boundary crossings found but not refined")
    return UnivalenceResult(Univalence.CERTIFIED_NUMERICALLY,
                            reason=f"boundary curve at r={r} is simple")


# -- starlike / convex ---------------------------------------------------------

def starlike_margin(Q: AnalyticMap, cfg: ProbeConfig = ProbeConfig()) -> ProbeMinimum:
    """Minimum of ``Re(z Q'(z) / Q(z))`` over the probes."""
    if abs(complex(Q(0.0))) > cfg.tol:
        raise QNotVanishingAtOrigin(f"Q(0) = {complex(Q(0.0))} is not zero")
    if abs(complex(Q.d1(0.0))) <= cfg.tol:
        raise DegenerateDerivative("Q'(0) vanishes")
    return min_re_on_probes(lambda z: z * Q.d1(z) / Q(z), cfg)


def starlike_check(Q: AnalyticMap, cfg: ProbeConfig = ProbeConfig()) -> bool:
    return starlike_margin(Q, cfg).value > cfg.tol


def convex_margin(q: AnalyticMap, cfg: ProbeConfig = ProbeConfig()) -> ProbeMinimum:
    """Minimum of ``Re(1 + z q''(z) / q'(z))`` over the probes."""
    if abs(complex(q.d1(0.0))) <= cfg.tol:
        raise DegenerateDerivative("q'(0) vanishes")
    return min_re_on_probes(lambda z: 1 + z * q.d2(z) / q.d1(z), cfg)


def convex_check(q: AnalyticMap, cfg: ProbeConfig = ProbeConfig()) -> bool:
    return convex_margin(q, cfg).value > cfg.tol
