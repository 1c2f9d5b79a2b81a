"""Stokes geometry on the u-plane: emanating directions, curve tracing,
degeneration detection, a closed-form phase primitive, and diagram
serialization (SVG / JSON).

Curves are integral curves of Im int sqrt(q) du = 0, traced with the
unit-speed field conj(sqrt q)/|sqrt q| (so Re of the integral increases
monotonically), a continuation sign chained along the curve, and a steering
correction that keeps the accumulated imaginary part pinned to zero.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgebraError,
    BranchPoint,
    D6Chart,
    D7Chart,
    Parameters,
    delta,
)
from .numerics import Jet

__all__ = [
    "TraceError",
    "BranchCutError",
    "TraceOptions",
    "TracedCurve",
    "DegenerationRecord",
    "StokesDiagram",
    "emanation_directions",
    "trace_curve",
    "stokes_diagram",
    "detect_degenerations",
    "phi_primitive",
    "render",
]

EPS_TRACE = 1e-6
EPS_DEG = 1e-4


class TraceError(RuntimeError):
    """Curve integration failed (step underflow near an unexpected
    singularity); carries the partial polyline."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BranchCutError(AlgebraError):
    """A logarithm in the closed-form primitive hit its branch point."""


@dataclass
class TraceOptions:
    """Tuning knobs of the tracer; defaults reproduce the reference
    pictures."""

    step_factor: float = 0.08        # step = factor * distance to specials
    max_step: float = 0.25
    min_step: float = 1e-9
    capture_radius: float = 1e-3     # scaled by the local pole size
    tp_radius: float = 1e-3          # scaled, for hitting another turning point
    escape_factor: float = 1e3
    arc_budget_factor: float = 200.0
    closure_cosine: float = 0.99


@dataclass
class TracedCurve:
    origin: str                      # "tp0".."tp2" | "simple_pole"
    ray: int
    points: np.ndarray               # complex u-samples
    terminus: str
    phi_end: complex = 0j            # accumulated int sqrt(q) du
    im_drift: float = 0.0            # worst |Im| of the accumulated integral
    arc_length: float = 0.0

    def t_points(self, chart) -> np.ndarray:
        return np.array([complex(chart.t_of_u(u)) for u in self.points])


@dataclass
class DegenerationRecord:
    kind: str                        # "triangle" | "loop"
    participants: list
    diagnostic: float


@dataclass
class StokesDiagram:
    equation: str                    # "d6" | "d7"
    parameters: object               # Parameters or complex
    chart: object
    curves: list = field(default_factory=list)
    degenerations: list = field(default_factory=list)

    @property
    def turning_points_u(self):
        return self.chart.turning_points_u

    @property
    def simple_pole_u(self):
        return self.chart.simple_pole_u

    @property
    def double_poles_u(self):
        return self.chart.double_poles_u

    def to_dict(self) -> dict:
        if self.equation == "d6":
            p = self.parameters
            params = {"c_inf": [p.c_inf.real, p.c_inf.imag],
                      "c_0": [p.c_0.real, p.c_0.imag]}
        else:
            c = complex(self.parameters)
            params = {"c": [c.real, c.imag]}
        return {
            "parameters": params,
            "turning_points_u": [[u.real, u.imag] for u in self.turning_points_u],
            "curves": [{
                "origin": c.origin,
                "ray": c.ray,
                "points": [[u.real, u.imag] for u in c.points],
                "terminus": c.terminus,
            } for c in self.curves],
            "degenerations": [{
                "kind": d.kind,
                "participants": d.participants,
                "diagnostic": d.diagnostic,
            } for d in self.degenerations],
        }


# ---------------------------------------------------------------------------
# Emanating directions
# ---------------------------------------------------------------------------

def _chart_of(params):
    if isinstance(params, Parameters):
        return D6Chart(params)
    return D7Chart(complex(params))


def emanation_directions(origin: complex, params) -> list:
    """Unit directions of the Stokes rays at a turning point (five, from the
    local (5/2)-power primitive) or at the simple pole over t = 0 (one, from
    the local (1/2)-power primitive)."""
    chart = params if hasattr(params, "turning_points_u") else _chart_of(params)
    origin = complex(origin)
    scale = max([1.0] + [abs(s) for s in chart.singular_points()])
    for u_tp in chart.turning_points_u:
        if abs(origin - u_tp) < 1e-9 * scale:
            lead = chart.q_leading(u_tp, 4, 3)     # q ~ lead (u - u_tp)^3
            base = -cmath.phase(lead) / 5.0
            return [cmath.exp(1j * (base + 2 * math.pi * k / 5)) for k in range(5)]
    if abs(origin - chart.simple_pole_u) < 1e-9 * scale:
        # q ~ res/(u - u_sp): evaluate (u - u_sp) q(u) at +/- eps and average
        # to cancel the linear term of the analytic part.
        sp = chart.simple_pole_u
        eps = 1e-5 * scale
        res = (eps * chart.q(sp + eps) - eps * chart.q(sp - eps)) / 2
        return [cmath.exp(-1j * cmath.phase(res))]
    raise AlgebraError(f"{origin} is neither a turning point nor the simple pole")


# ---------------------------------------------------------------------------
# Curve tracing
# ---------------------------------------------------------------------------

def _sqrt_q(chart, u: complex, ref: complex) -> complex:
    """Branch of sqrt(q(u)) closest in direction to ref (continuation)."""
    v = cmath.sqrt(chart.q(u))
    if abs(v - ref) > abs(v + ref):
        v = -v
    return v


def _nearest_special_distance(chart, u: complex, exclude=()) -> float:
    best = math.inf
    for s in chart.singular_points():
        if any(abs(s - e) < 1e-12 * (1 + abs(e)) for e in exclude):
            continue
        best = min(best, abs(u - s))
    return best


_GL4 = (
    (-0.8611363115940526, 0.34785484513745385),
    (-0.3399810435848563, 0.6521451548625461),
    (0.3399810435848563, 0.6521451548625461),
    (0.8611363115940526, 0.34785484513745385),
)


def trace_curve(origin: complex, ray: int, params, opts: TraceOptions | None = None,
                chart=None) -> TracedCurve:
    """Trace one Stokes curve from a turning point (rays 0-4) or the simple
    pole (ray 0), following Im int sqrt(q) du = 0 with Re increasing."""
    opts = opts or TraceOptions()
    if chart is None:
        chart = params if hasattr(params, "turning_points_u") else _chart_of(params)
    origin = complex(origin)
    scale = max([1.0] + [abs(s) for s in chart.singular_points()])

    origin_label = None
    for k, u_tp in enumerate(chart.turning_points_u):
        if abs(origin - u_tp) < 1e-9 * scale:
            origin_label = f"tp{k}"
    if origin_label is None and abs(origin - chart.simple_pole_u) < 1e-9 * scale:
        origin_label = "simple_pole"
    if origin_label is None:
        raise AlgebraError(f"{origin} is not a trace origin")
    directions = emanation_directions(origin, chart)
    if not 0 <= ray < len(directions):
        raise AlgebraError(f"ray {ray} out of range for {origin_label}")
    direction = directions[ray]

    if isinstance(chart, D6Chart):
        cp, cm = chart.p.c_p, chart.p.c_m
        escape = opts.escape_factor * max(1.0, abs(cm / cp))
        budget = opts.arc_budget_factor * max(1.0, abs(cp))
    else:
        escape = opts.escape_factor
        budget = opts.arc_budget_factor * max(1.0, abs(chart.c))

    # Step off the origin along the ray; the steering correction then pulls
    # the polyline onto the exact level set.
    h0 = 1e-4 * max(1e-3, _nearest_special_distance(chart, origin, exclude=(origin,)))
    u = origin + h0 * direction
    sq = cmath.sqrt(chart.q(u))
    if abs(sq.conjugate() / abs(sq) - direction) > abs(sq.conjugate() / abs(sq) + direction):
        sq = -sq
    phi = 0j            # accumulated integral of sqrt(q) du from the first point
    points = [origin, u]
    arc = abs(u - origin)
    arcs = [0.0, arc]   # cumulative arc length at each polyline point
    im_worst = 0.0
    terminus = None
    # Capture checks at the origin itself stay off until the curve has left
    # its neighborhood (else the first step "terminates" immediately).
    leave_radius = 3 * max(opts.tp_radius, opts.capture_radius) * scale
    left_origin = False

    def field_at(v: complex, ref: complex) -> tuple:
        s = _sqrt_q(chart, v, ref)
        return s.conjugate() / abs(s), s

    step_shrink = 0
    while terminus is None:
        d_near = _nearest_special_distance(chart, u, exclude=())
        h = min(opts.max_step * scale, opts.step_factor * max(d_near, 1e-12))
        h /= 2 ** step_shrink
        if h < opts.min_step * scale:
            raise TraceError(f"step underflow at u={u:.6g}", partial=points)

        # RK4 on the unit-speed field, with sign continuation via sq.
        try:
            k1, s1 = field_at(u, sq)
            k2, s2 = field_at(u + 0.5 * h * k1, s1)
            k3, s3 = field_at(u + 0.5 * h * k2, s2)
            k4, s4 = field_at(u + h * k3, s3)
        except ZeroDivisionError:
            raise TraceError(f"vanishing q at u={u:.6g}", partial=points) from None
        u_next = u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        # Gauss-Legendre accumulation of int sqrt(q) du over the chord;
        # exact saddle connections need the primitive accurate well below
        # the turning-point capture scale.
        half = (u_next - u) / 2
        mid = (u + u_next) / 2
        ref = s1
        dphi = 0j
        for x, w in _GL4:
            ref = _sqrt_q(chart, mid + half * x, ref)
            dphi += w * ref
        dphi *= half
        sq_next = _sqrt_q(chart, u_next, ref)

        # Steering: cancel the imaginary drift with a small normal shift.
        drift = (phi + dphi).imag
        denom = abs(sq_next)
        if denom > 0 and abs(drift) > 0:
            shift = -1j * (sq_next.conjugate() / denom) * (drift / denom)
            if abs(shift) < 0.2 * h:
                u_corr = u_next + shift
                sq_corr = _sqrt_q(chart, u_corr, sq_next)
                dphi_corr = dphi + (u_corr - u_next) / 2 * (sq_next + sq_corr)
                u_next, sq_next, dphi = u_corr, sq_corr, dphi_corr

        new_im = abs((phi + dphi).imag)
        if new_im > EPS_TRACE * (1 + arc + h) and step_shrink < 20:
            step_shrink += 1
            continue
        step_shrink = max(0, step_shrink - 1)

        phi += dphi
        arc += abs(u_next - u)
        u, sq = u_next, sq_next
        points.append(u)
        arcs.append(arc)
        im_worst = max(im_worst, abs(phi.imag))

        # --- terminus checks -------------------------------------------
        if not left_origin and abs(u - origin) > leave_radius:
            left_origin = True
        # Far outside every special point the field is a constant direction
        # (q tends to its leading coefficient), so the fate is sealed well
        # before the hard escape radius.
        far_out = abs(u) > 25 * scale and (u.real * k1.real + u.imag * k1.imag) > 0
        if abs(u) > escape or far_out:
            terminus = "escaped" if isinstance(chart, D7Chart) else "inf12"
            break
        captured = False
        for label, pole in chart.double_poles_u.items():
            if abs(u - pole) < opts.capture_radius * max(1.0, abs(pole)):
                terminus = label
                captured = True
        if captured:
            break
        sp_is_origin = abs(chart.simple_pole_u - origin) < 1e-12 * scale
        if (left_origin or not sp_is_origin) and \
                abs(u - chart.simple_pole_u) < opts.capture_radius * \
                max(1.0, abs(chart.simple_pole_u)):
            terminus = "simple_pole"
            break
        if isinstance(chart, D6Chart) and abs(u) < opts.capture_radius:
            terminus = "inf34"
            break
        for k, u_tp in enumerate(chart.turning_points_u):
            tp_is_origin = abs(u_tp - origin) < 1e-12 * scale
            if (left_origin or not tp_is_origin) and \
                    abs(u - u_tp) < opts.tp_radius * scale:
                terminus = f"turning_point:{k}"
                break
        if terminus:
            break
        if arc > budget:
            terminus = "spiral"
            break
        # Closure: revisiting an early portion of the polyline going the
        # same way.  Candidates must be arc-separated (a curve lingering
        # near a pole leaves many recent points close by), the revisit must
        # land on the earlier segment itself (perpendicular distance at the
        # integration-accuracy scale, far below any spiral's arm gap), and
        # the intervening sub-path must have turned through a full loop.
        if arc > 20 * opts.capture_radius * scale and len(points) > 20:
            pts = np.asarray(points)
            arcs_a = np.asarray(arcs)
            sep = arcs_a[:-1] < arc - 20 * opts.capture_radius * scale
            idx = np.nonzero(sep)[0]
            if idx.size:
                a = pts[idx]
                seg = pts[idx + 1] - a
                L2 = np.abs(seg) ** 2
                tpar = np.clip(((u - a) * np.conj(seg)).real /
                               np.maximum(L2, 1e-300), 0.0, 1.0)
                d = np.abs(u - (a + tpar * seg))
                jrel = int(np.argmin(d))
                if d[jrel] < 1e-5 * scale * (1 + arc):
                    j = int(idx[jrel])
                    seg_dir = seg[jrel]
                    step_dir = points[-1] - points[-2]
                    dirs = np.diff(pts[j:])
                    dirs = dirs[np.abs(dirs) > 0]
                    turning = abs(float(np.sum(np.angle(dirs[1:] / dirs[:-1]))))
                    cosine = (step_dir / abs(step_dir) *
                              (seg_dir / abs(seg_dir)).conjugate()).real
                    if cosine > opts.closure_cosine and turning > 1.5 * math.pi:
                        terminus = "closed"
                        break

    return TracedCurve(origin_label, ray, np.array(points), terminus,
                       phi_end=phi, im_drift=im_worst, arc_length=arc)


# ---------------------------------------------------------------------------
# Full diagram and degenerations
# ---------------------------------------------------------------------------

def stokes_diagram(params, opts: TraceOptions | None = None) -> StokesDiagram:
    """Trace every Stokes curve (five per turning point plus one from the
    simple pole) and detect degenerations."""
    chart = _chart_of(params)
    equation = "d6" if isinstance(chart, D6Chart) else "d7"
    curves = []
    for u_tp in chart.turning_points_u:
        for ray in range(5):
            curves.append(trace_curve(u_tp, ray, params, opts, chart=chart))
    curves.append(trace_curve(chart.simple_pole_u, 0, params, opts, chart=chart))
    diagram = StokesDiagram(equation, params, chart, curves)
    diagram.degenerations = detect_degenerations(diagram, params)
    return diagram


def _winding_number(points: np.ndarray, center: complex) -> float:
    rel = points - center
    angles = np.angle(rel[1:] / rel[:-1])
    return float(np.sum(angles) / (2 * math.pi))


def detect_degenerations(diagram: StokesDiagram, params=None) -> list:
    """Triangle records (all three turning-point pairs connected) and loop
    records (a curve from a turning point back to itself, or closed, winding
    once around exactly one double pole whose residue is close to purely
    imaginary)."""
    chart = diagram.chart
    tps = list(chart.turning_points_u)
    records = []

    # Pairwise turning-point connections.
    connected = {}
    for c in diagram.curves:
        if not c.origin.startswith("tp") or not c.terminus.startswith("turning_point:"):
            continue
        i = int(c.origin[2:])
        j = int(c.terminus.split(":")[1])
        if i == j:
            continue
        pair = tuple(sorted((i, j)))
        d = abs(c.phi_end.imag)
        if pair not in connected or d < connected[pair]:
            connected[pair] = d
    if len(tps) == 3 and len(connected) == 3:
        records.append(DegenerationRecord(
            "triangle", [list(p) for p in sorted(connected)],
            max(connected.values())))

    # Loops around a double pole.
    residues = chart.residue_closed_forms()
    names = {"d6": {"zero_cinf": "double_cinf", "zero_c0": "double_c0"},
             "d7": {"zero_c": "zero_c"}}[diagram.equation]
    for c in diagram.curves:
        self_loop = (c.origin.startswith("tp") and
                     c.terminus == f"turning_point:{c.origin[2:]}")
        if not (self_loop or c.terminus == "closed"):
            continue
        hits = []
        for label, pole in chart.double_poles_u.items():
            w = _winding_number(c.points, pole)
            if abs(abs(w) - 1) < 0.2:
                hits.append((label, pole))
        if len(hits) != 1:
            continue
        label, pole = hits[0]
        res = residues[names[label]] if diagram.equation == "d6" else residues["zero_c"]
        defect = abs(res.real) / abs(res)
        if defect < EPS_DEG:
            rec = DegenerationRecord("loop", [c.origin, label], defect)
            if not any(r.kind == "loop" and r.participants[1] == label
                       for r in records):
                records.append(rec)
    return records


# ---------------------------------------------------------------------------
# Closed-form phase primitive
# ---------------------------------------------------------------------------

def phi_primitive(b: BranchPoint, p: Parameters) -> complex:
    """Closed-form primitive of the leading Riccati slot along a branch:
    its t-derivative is R_{-1}.  Uses principal logarithms; continuity along
    a path is the caller's concern (evaluate pointwise and chain)."""
    t, lam = complex(b.t), complex(b.lambda0)
    r = b.sign * cmath.sqrt(delta(b, p))
    ci, c0 = p.c_inf, p.c_0
    a1 = 2 * lam - ci + t * r
    a2 = 2 * lam - ci - t * r
    b1 = 2 * t * t - c0 * t * lam + t * t * lam * r
    b2 = 2 * t * t - c0 * t * lam - t * t * lam * r
    amax = max(abs(a1), abs(a2), abs(b1), abs(b2), 1.0)
    if min(abs(a1), abs(a2)) < 1e-14 * amax or min(abs(b1), abs(b2)) < 1e-14 * amax:
        raise BranchCutError("logarithm argument vanishes in the phase primitive")
    return 0.5 * (4 * t * r - ci * cmath.log(a1 / a2) - c0 * cmath.log(b1 / b2))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render(diagram: StokesDiagram, format: str = "svg") -> bytes:
    """Serialize: deterministic JSON (schema fixed) or an 800x800 SVG with
    curves, x = turning points, filled dots = double poles, triangle = the
    simple pole."""
    if format == "json":
        return json.dumps(diagram.to_dict(), indent=1, sort_keys=True).encode()
    if format != "svg":
        raise ValueError(f"unknown format {format!r}")

    chart = diagram.chart
    tps = list(chart.turning_points_u)
    centroid = sum(tps) / len(tps)
    specials = chart.singular_points()
    span = max([abs(s - centroid) for s in specials] + [1e-3]) * 2.8
    half = 400.0

    def to_px(u: complex):
        return (half + (u.real - centroid.real) / span * 2 * half,
                half - (u.imag - centroid.imag) / span * 2 * half)

    parts = ['<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" '
             'viewBox="0 0 800 800">',
             '<rect width="800" height="800" fill="white"/>']
    for c in diagram.curves:
        pts = [to_px(u) for u in c.points if abs(u - centroid) < 1.2 * span]
        if len(pts) < 2:
            continue
        path = "M " + " L ".join(f"{x:.2f} {y:.2f}" for x, y in pts)
        parts.append(f'<path d="{path}" fill="none" stroke="black" stroke-width="1"/>')
    for u in tps:
        x, y = to_px(u)
        parts.append(f'<path d="M {x-5:.2f} {y-5:.2f} L {x+5:.2f} {y+5:.2f} '
                     f'M {x-5:.2f} {y+5:.2f} L {x+5:.2f} {y-5:.2f}" '
                     'stroke="red" stroke-width="2"/>')
    for u in chart.double_poles_u.values():
        x, y = to_px(u)
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="blue"/>')
    x, y = to_px(chart.simple_pole_u)
    parts.append(f'<path d="M {x:.2f} {y-6:.2f} L {x-5:.2f} {y+4:.2f} '
                 f'L {x+5:.2f} {y+4:.2f} Z" fill="green"/>')
    parts.append("</svg>")
    return "\n".join(parts).encode()
