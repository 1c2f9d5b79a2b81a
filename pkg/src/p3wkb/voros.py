"""Voros coefficients of the distinguished endpoints: closed forms built
from two Bernoulli-coefficient series, difference equations under the
eta^-1 parameter shifts, and an independent numerical contour oracle.

Closed forms use two model series in a single variable z (standing for
c eta with the relevant parameter combination substituted):

    F(z) = sum_{n>=1} (2^{1-2n} - 1) / (2n(2n-1)) B_{2n} z^{1-2n}
    G(z) = sum_{n>=1} B_{2n} / (2n(2n-1)) z^{1-2n}

Every supported endpoint's Voros series is a signed integer combination of
F and G evaluated at c_p, c_m, c_inf, c_0 (or c for the degenerate family).

The numerical oracle integrates slot 2n-1 of the Riccati series along a
dumbbell contour in the u-plane: a circle around a turning point, resolved
mode-by-mode through an FFT (each half-odd Puiseux mode has an elementary
primitive, so the circle plus the escaping leg can be assembled without
cancellation), plus a numerically integrated leg to the endpoint.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import BranchPoint, D6Chart, D7Chart, Parameters
from .numerics import Jet, LaurentAtInfinity, bernoulli
from .series import D7Model, riccati_solution, zero_param_solution

__all__ = [
    "PathError",
    "EndpointSpec",
    "parse_endpoint",
    "f_coefficient",
    "g_coefficient",
    "f_series",
    "g_series",
    "voros_symbolic",
    "voros_closed_form",
    "f_difference_rhs",
    "g_difference_rhs",
    "verify_difference_equation",
    "reconstruct_from_difference",
    "shift_decomposition",
    "voros_increment",
    "voros_increment_printed",
    "increments_match",
    "cycle_symbolic",
]


class PathError(RuntimeError):
    """A contour for the numerical oracle could not be validated."""


# ---------------------------------------------------------------------------
# Endpoint specifications
# ---------------------------------------------------------------------------

_D6_TARGETS = ("inf1", "inf2", "inf3", "inf4", "zero_cinf", "zero_c0")
_D7_TARGETS = ("inf1", "inf2", "inf3", "zero_c")


@dataclass(frozen=True)
class EndpointSpec:
    """An endpoint of the Voros integral: equation family, target branch
    label, and the +/- square-root convention."""

    equation: str   # "d6" | "d7"
    target: str
    sign: int = +1

    def __post_init__(self):
        if self.equation not in ("d6", "d7"):
            raise ValueError(f"unknown equation family {self.equation!r}")
        allowed = _D6_TARGETS if self.equation == "d6" else _D7_TARGETS
        if self.target not in allowed:
            raise ValueError(f"unknown target {self.target!r} for {self.equation}")
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")

    def __str__(self):
        return f"{self.equation}:{self.target}:{'+' if self.sign > 0 else '-'}"


def parse_endpoint(text: str) -> EndpointSpec:
    """Parse 'd6:inf3:+' style endpoint descriptions."""
    parts = text.strip().split(":")
    if len(parts) != 3 or parts[2] not in ("+", "-"):
        raise ValueError(f"endpoint must look like 'd6:inf3:+', got {text!r}")
    return EndpointSpec(parts[0], parts[1], +1 if parts[2] == "+" else -1)


# ---------------------------------------------------------------------------
# The two model series
# ---------------------------------------------------------------------------

def f_coefficient(n: int) -> Fraction:
    """Coefficient of z^(1-2n) in F."""
    if n < 1:
        raise ValueError("n >= 1")
    return (Fraction(2) ** (1 - 2 * n) - 1) / (2 * n * (2 * n - 1)) * bernoulli(2 * n)


def g_coefficient(n: int) -> Fraction:
    """Coefficient of z^(1-2n) in G."""
    if n < 1:
        raise ValueError("n >= 1")
    return bernoulli(2 * n) / (2 * n * (2 * n - 1))


def f_series(depth: int = 21) -> LaurentAtInfinity:
    coeffs = {1 - 2 * n: f_coefficient(n) for n in range(1, depth // 2 + 2)
              if 2 * n - 1 <= depth}
    return LaurentAtInfinity(coeffs, depth)


def g_series(depth: int = 21) -> LaurentAtInfinity:
    coeffs = {1 - 2 * n: g_coefficient(n) for n in range(1, depth // 2 + 2)
              if 2 * n - 1 <= depth}
    return LaurentAtInfinity(coeffs, depth)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def voros_symbolic(spec: EndpointSpec) -> dict:
    """The endpoint's Voros series as {variable: (integer multiple, kind)}
    with kind "F" or "G"; the spec's sign is already folded in.

    Variables are "c_p", "c_m", "c_inf", "c_0" for the two-parameter family
    and "c" for the degenerate one."""
    s = spec.sign
    if spec.equation == "d7":
        if spec.target == "zero_c":
            return {"c": (-3 * s, "G")}
        return {}
    table = {
        "inf1": {"c_p": (s, "F")},
        "inf2": {"c_p": (s, "F")},
        "inf3": {"c_m": (s, "F")},
        "inf4": {"c_m": (s, "F")},
        "zero_cinf": {"c_p": (s, "F"), "c_m": (s, "F"), "c_inf": (-3 * s, "G")},
        "zero_c0": {"c_p": (s, "F"), "c_m": (-s, "F"), "c_0": (-3 * s, "G")},
    }
    return table[spec.target]


def cycle_symbolic() -> dict:
    """The loop-cycle Voros coefficient (difference of the two infinity
    families), used by the shift lemmas."""
    return {"c_m": (1, "F")}


def _variable_value(var: str, params) -> complex:
    if var == "c":
        return complex(params)
    p: Parameters = params
    return {"c_p": p.c_p, "c_m": p.c_m, "c_inf": p.c_inf, "c_0": p.c_0}[var]


def voros_closed_form(spec: EndpointSpec, params, n_max: int = 6) -> dict:
    """{n: W_n} with W = sum_n W_n eta^(1-2n): the closed-form coefficient
    values at the given parameters."""
    sym = voros_symbolic(spec)
    out = {}
    for n in range(1, n_max + 1):
        acc = 0j
        for var, (mult, kind) in sym.items():
            coeff = f_coefficient(n) if kind == "F" else g_coefficient(n)
            acc += mult * complex(coeff) * _variable_value(var, params) ** (1 - 2 * n)
        out[n] = acc
    return out


# ---------------------------------------------------------------------------
# Difference equations
# ---------------------------------------------------------------------------

def _times_z_plus(a: Fraction, L: LaurentAtInfinity) -> LaurentAtInfinity:
    """(z + a) * L; the shift up by one power costs one order of depth."""
    zL = LaurentAtInfinity({p + 1: c for p, c in L.coeffs.items()}, L.depth - 1)
    return zL + L * a


def f_difference_rhs(depth: int = 21) -> LaurentAtInfinity:
    """1 - (z+1) log(1 + 1/z) + log(1 + 1/(2z))."""
    one = LaurentAtInfinity.monomial(0, Fraction(1), depth)
    return one - _times_z_plus(Fraction(1), LaurentAtInfinity.log1p_over_z(Fraction(1), depth + 1)) \
        + LaurentAtInfinity.log1p_over_z(Fraction(1, 2), depth)


def g_difference_rhs(depth: int = 21) -> LaurentAtInfinity:
    """1 - (z + 1/2) log(1 + 1/z)."""
    one = LaurentAtInfinity.monomial(0, Fraction(1), depth)
    return one - _times_z_plus(Fraction(1, 2), LaurentAtInfinity.log1p_over_z(Fraction(1), depth + 1))


def _g_decrement_rhs(depth: int = 21) -> LaurentAtInfinity:
    """G(z-1) - G(z) = -1 - (z - 1/2) log(1 - 1/z)."""
    one = LaurentAtInfinity.monomial(0, Fraction(1), depth)
    return -one - _times_z_plus(Fraction(-1, 2), LaurentAtInfinity.log1p_over_z(Fraction(-1), depth + 1))


def verify_difference_equation(kind: str, depth: int = 21):
    """Check the exact difference equation for the model series:

        F(z+1) - F(z) = 1 - (z+1) log(1+1/z) + log(1+1/(2z))
        G(z+1) - G(z) = 1 - (z+1/2) log(1+1/z)

    Returns (ok, first_mismatch_power_or_None)."""
    if kind == "F":
        lhs = f_series(depth).shift(1) - f_series(depth)
        rhs = f_difference_rhs(depth)
    elif kind == "G":
        lhs = g_series(depth).shift(1) - g_series(depth)
        rhs = g_difference_rhs(depth)
    else:
        raise ValueError("kind must be 'F' or 'G'")
    mismatch = lhs.first_mismatch(rhs)
    return mismatch is None, mismatch


def reconstruct_from_difference(rhs: LaurentAtInfinity, depth: int = 21) -> LaurentAtInfinity:
    """The unique inverse-power series Phi = sum_{m>=1} a_m z^-m with
    Phi(z+1) - Phi(z) = rhs, built order by order (the triangular system
    that makes the solution unique)."""
    if rhs.coefficient(0) != 0 or rhs.coefficient(1) != 0:
        raise ValueError("difference of a decaying series has no z^0 or z^1 part")
    if rhs.coefficient(-1) != 0:
        raise ValueError("difference of a decaying series has no z^-1 part")
    if rhs.depth < depth + 1:
        raise ValueError(f"need rhs known through z^-{depth + 1} to solve to z^-{depth}")
    a: dict[int, Fraction] = {}
    # coefficient of z^-k in Phi(z+1) - Phi(z): sum over m < k of
    # a_m * binom(-m, k-m); the m = k-1 term has factor -(k-1).
    for k in range(2, depth + 2):
        acc = Fraction(0)
        for m in range(1, k - 1):
            j = k - m
            binom = Fraction(1)
            for i in range(j):
                binom *= Fraction(-m - i, i + 1)
            acc += a.get(m, Fraction(0)) * binom
        target = rhs.coefficient(-k)
        a[k - 1] = (target - acc) / (-(k - 1))
    return LaurentAtInfinity({-m: v for m, v in a.items() if v != 0}, depth)


# ---------------------------------------------------------------------------
# Shift lemmas for the endpoint Voros series
# ---------------------------------------------------------------------------

def shift_decomposition(which: int, equation: str = "d6") -> dict:
    """Integer shifts of each closed-form variable under the eta^-1
    parameter shift: which=1 moves (c_inf, c_0) by (+1, +1) in units of
    eta^-1, which=2 by (+1, -1); the degenerate family moves c by +1."""
    if equation == "d7":
        return {"c": 1}
    if which == 1:
        return {"c_inf": 1, "c_0": 1, "c_p": 1, "c_m": 0}
    if which == 2:
        return {"c_inf": 1, "c_0": -1, "c_p": 0, "c_m": 1}
    raise ValueError("which must be 1 or 2")


def _trim(L: LaurentAtInfinity, depth: int) -> LaurentAtInfinity:
    return LaurentAtInfinity({p: c for p, c in L.coeffs.items() if p >= -depth}, depth)


def _series_increment(kind: str, delta: int, depth: int) -> LaurentAtInfinity:
    base = f_series(depth + 2) if kind == "F" else g_series(depth + 2)
    return _trim(base.shift(delta) - base, depth)


def voros_increment(symbolic: dict, which: int, equation: str = "d6",
                    depth: int = 21) -> dict:
    """W(shifted parameters) - W as {variable: Laurent}, computed from the
    model series and their shifts.  Each entry is a difference of decaying
    series, so its constant term is exactly zero."""
    shifts = shift_decomposition(which, equation)
    parts = {}
    for var, (mult, kind) in symbolic.items():
        delta = shifts.get(var, 0)
        if delta == 0:
            continue
        parts[var] = _trim(_series_increment(kind, delta, depth) * Fraction(mult), depth)
    return parts


def _printed_block(depth: int, *, a_log: Fraction, z_coeff: Fraction) -> LaurentAtInfinity:
    """(z + z_coeff) log(1 + a_log/z), expanded at infinity with its
    constant term kept: building block for the literal right-hand sides."""
    return _trim(_times_z_plus(z_coeff,
                               LaurentAtInfinity.log1p_over_z(a_log, depth + 1)), depth)


def voros_increment_printed(endpoint_key: str, which: int, depth: int = 21):
    """The literal right-hand sides of the shift lemmas, as
    (bare constant, {variable: Laurent including its expansion constant});
    covers the loop cycle, the four infinity endpoints, and the t=0
    endpoints, in the '+' sign convention (the '-' version is the
    negative).  Total constant terms cancel, matching the decaying
    left-hand side."""
    F_var = _printed_block(depth, a_log=Fraction(1), z_coeff=Fraction(1)) * Fraction(-1) \
        + LaurentAtInfinity.log1p_over_z(Fraction(1, 2), depth)
    F_var = _trim(F_var, depth)   # -(z+1) log(1+1/z) + log(1+1/(2z))
    G_up3 = _printed_block(depth, a_log=Fraction(1), z_coeff=Fraction(1, 2)) * Fraction(3)
    G_dn3 = _printed_block(depth, a_log=Fraction(-1), z_coeff=Fraction(-1, 2)) * Fraction(3)

    if endpoint_key == "cycle":
        if which == 1:
            return Fraction(0), {}
        return Fraction(1), {"c_m": F_var}
    if endpoint_key in ("inf1", "inf2"):
        if which == 1:
            return Fraction(1), {"c_p": F_var}
        return Fraction(0), {}
    if endpoint_key in ("inf3", "inf4"):
        if which == 1:
            return Fraction(0), {}
        return Fraction(1), {"c_m": F_var}
    if endpoint_key == "zero_cinf":
        # -2 - (z+1) log(1+1/z) + log(1+1/(2z)) at c_p (or c_m for the
        # second shift), plus 3 (z+1/2) log(1+1/z) at c_inf.
        var = "c_p" if which == 1 else "c_m"
        return Fraction(-2), {var: F_var, "c_inf": G_up3}
    if endpoint_key == "zero_c0":
        if which == 1:
            return Fraction(-2), {"c_p": F_var, "c_0": G_up3}
        # +2 + (z+1) log(1+1/z) - log(1+1/(2z)) at c_m,
        # plus 3 (z-1/2) log(1-1/z) at c_0 (the downward shift).
        return Fraction(2), {"c_m": _trim(F_var * Fraction(-1), depth), "c_0": G_dn3}
    if endpoint_key == "zero_c":
        # degenerate family: -3 (G(z+1) - G(z)) = -3 + 3 (z+1/2) log(1+1/z)
        return Fraction(-3), {"c": G_up3}
    raise ValueError(f"no printed lemma for {endpoint_key!r}")


def increments_match(computed: dict, printed) -> tuple[bool, str]:
    """Compare a computed increment against a printed right-hand side.
    Per-variable decaying parts must agree exactly, and the printed bare
    constant must cancel the expansion constants of its log blocks."""
    bare, printed_parts = printed
    if set(computed) != set(printed_parts):
        return False, f"variables differ: {sorted(computed)} vs {sorted(printed_parts)}"
    total_const = Fraction(bare)
    for var, block in printed_parts.items():
        total_const += block.coefficient(0)
        decaying = LaurentAtInfinity(
            {p: c for p, c in block.coeffs.items() if p != 0}, block.depth)
        mm = computed[var].first_mismatch(decaying)
        if mm is not None:
            return False, f"{var}: first mismatch at power {mm}"
    if total_const != 0:
        return False, f"constants do not cancel: total {total_const}"
    return True, "ok"


# ---------------------------------------------------------------------------
# Numerical contour oracle
# ---------------------------------------------------------------------------
#
# The Voros coefficient W_n is half the integral of slot 2n-1 of the Riccati
# series along a path that runs from the endpoint to a turning point, once
# around it, and back on the other sheet.  In the u-chart this is a dumbbell:
# a leg from a staging point P on a circle around the turning point out to the
# endpoint, plus the circle itself.  Near the turning point the integrand has
# a convergent half-odd-power Puiseux expansion, so the circle part is
# resolved mode by mode with an FFT over the double cover (two full turns):
# each mode has an elementary primitive, which sidesteps the catastrophic
# cancellation a naive contour integral suffers from the high-order pole.
#
#   rho_n(u) = R_{2n-1}(t(u)) dt/du = sum_j a_j (u - u_tp)^{s_j},
#   s_j half-odd,   W_n = orient * [ sum_j c_j (P - u_tp)/(s_j + 1) + leg ],
#
# where c_j = a_j (P - u_tp)^{s_j} is exactly the j-th FFT bin of the samples
# on the circle (two turns, 2 s_j mod M), and leg integrates rho_n from P to
# the endpoint on the branch fixed at P.  Integer-power bins must vanish;
# their size is a built-in consistency check on the branch tracking.

# Global sign: the mode/leg assembly above computes the contour in one fixed
# orientation; the labelled convention runs it the other way.  The constant is
# a single convention factor for every endpoint and both equation families;
# its value is pinned by the degenerate-family closed form (see tests).
_ORIENTATION = +1.0
_CIRCLE_SAMPLES = 512
_RADIUS_FACTOR = 0.3
_GL_NODES = 16

_oracle_cache: dict = {}


@dataclass
class OracleResult:
    """Contour-integral values of the Voros coefficients at one endpoint."""

    endpoint: EndpointSpec
    values: dict                  # n -> W_n for the endpoint's sign
    label_sign: int               # sign label the raw contour integrated to
    turning_point_u: complex
    diagnostics: dict = field(default_factory=dict)


def _chart_for(spec: EndpointSpec, params):
    if spec.equation == "d7":
        return D7Chart(complex(params))
    return D6Chart(params)


def _target_of(chart, spec: EndpointSpec):
    """('point', u*) for finite u targets, ('w', None) for u = infinity."""
    if spec.equation == "d7":
        if spec.target == "zero_c":
            return "point", chart.double_poles_u["zero_c"]
        return "w", None
    if spec.target in ("inf1", "inf2"):
        return "w", None
    if spec.target in ("inf3", "inf4"):
        return "point", 0j
    return "point", chart.double_poles_u[spec.target]


def _gl_segment(a: complex, b: complex, n_panels: int):
    """Gauss-Legendre nodes and complex weights for a straight segment,
    ordered from a to b."""
    x, w = np.polynomial.legendre.leggauss(_GL_NODES)
    nodes, weights = [], []
    for k in range(n_panels):
        lo = a + (b - a) * (k / n_panels)
        hi = a + (b - a) * ((k + 1) / n_panels)
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        nodes.append(mid + half * x)
        weights.append(half * w.astype(complex))
    return np.concatenate(nodes), np.concatenate(weights)


def _avoid_obstacles(a: complex, b: complex, obstacles: list) -> list:
    """Waypoints from a to b; straight unless a segment passes too close to
    an obstacle (u, clearance), in which case a perpendicular detour is
    inserted."""
    pts = [a, b]
    for _ in range(6):
        out = [pts[0]]
        changed = False
        for p0, p1 in zip(pts, pts[1:]):
            seg = p1 - p0
            L2 = abs(seg) ** 2
            worst = None
            for o, clr in obstacles:
                if L2 == 0:
                    continue
                s = ((o - p0) / seg).real * 0 + ((o - p0).real * seg.real +
                                                 (o - p0).imag * seg.imag) / L2
                if not 0.02 < s < 0.98:
                    continue
                foot = p0 + s * seg
                dist = abs(o - foot)
                if dist < clr and (worst is None or dist / clr < worst[0]):
                    worst = (dist / clr, o, clr, foot)
            if worst is not None:
                _, o, clr, foot = worst
                away = (foot - o)
                if abs(away) < 1e-14 * (1 + abs(o)):
                    away = seg * 1j   # obstacle on the line: step off sideways
                way = o + away / abs(away) * (1.6 * clr)
                out += [way, p1]
                changed = True
            else:
                out.append(p1)
        pts = out
        if not changed:
            break
    return pts


def _chain_signs(values: np.ndarray, start: complex | None = None) -> np.ndarray:
    """Sign chain continuing a square root along an ordered node list: each
    sign makes the value closest to its (signed) predecessor."""
    signs = np.ones(len(values))
    prev = values[0] if start is None else start
    for k, v in enumerate(values):
        if abs(v - prev) > abs(v + prev):
            signs[k] = -1.0
        prev = signs[k] * v
    return signs


def _leg_waypoints(chart, spec: EndpointSpec, u_tp: complex, P: complex):
    """(u-chart waypoints, w-chart waypoints) for the leg from P to the
    endpoint; the w list is empty for finite targets."""
    kind, u_star = _target_of(chart, spec)
    specials = [s for s in chart.singular_points()]
    scale = max([1.0] + [abs(s) for s in specials])

    def clearance(o):
        others = [s for s in specials + [u_tp] if abs(s - o) > 1e-12 * scale]
        d = min(abs(s - o) for s in others) if others else scale
        return 0.3 * d

    if kind == "point":
        obstacles = [(o, clearance(o)) for o in specials
                     if abs(o - u_star) > 1e-12 * scale and abs(o - u_tp) > 1e-12 * scale]
        return _avoid_obstacles(P, u_star, obstacles), []

    # Target u = infinity: ray out to a large radius, then w = 1/u to zero.
    R_big = 12.0 * scale
    best = None
    for m in range(24):
        theta = 2 * math.pi * m / 24
        end = u_tp + R_big * cmath.exp(1j * theta)
        seg = end - P
        score = min(
            (abs((o - P) - (((o - P).real * seg.real + (o - P).imag * seg.imag)
                            / abs(seg) ** 2) * seg)
             if 0 < ((o - P).real * seg.real + (o - P).imag * seg.imag) / abs(seg) ** 2 < 1
             else min(abs(o - P), abs(o - end)))
            for o in specials)
        if best is None or score > best[0]:
            best = (score, end)
    u_big = best[1]
    obstacles = [(o, clearance(o)) for o in specials if abs(o - u_tp) > 1e-12 * scale]
    u_pts = _avoid_obstacles(P, u_big, obstacles)
    w_obstacles = [(1 / o, clearance(o) / abs(o) ** 2) for o in specials if abs(o) > 1e-9]
    w_pts = _avoid_obstacles(1 / u_big, 0j, w_obstacles)
    return u_pts, w_pts


def _leg_quadrature(chart, u_pts: list, w_pts: list, rho: float, panel_scale: int):
    """Gauss-Legendre data for the leg, as two groups: ((u positions,
    dt/du, weights) for the u-chart part, (u positions, dt/dw, weights) for
    the w = 1/u part).  Node order runs from the staging point toward the
    endpoint within each group."""
    parts = []
    for pts, in_w in ((u_pts, False), (w_pts, True)):
        us, jacs, wts = [], [], []
        for a, b in zip(pts, pts[1:]):
            L = abs(b - a)
            ref = rho if not in_w else max(abs(a), abs(b), 1e-3)
            n_p = max(4, min(48, int(math.ceil(3.0 * L / ref))))
            n_p = max(4, int(math.ceil(n_p * panel_scale)))
            nodes, weights = _gl_segment(a, b, n_p)
            if in_w:
                jet = [chart.t_of_u(1 / Jet.variable(complex(wv), 1)) for wv in nodes]
                us.append(np.array([1 / complex(wv) for wv in nodes]))
                jacs.append(np.array([j.coeffs[1] for j in jet]))
            else:
                jet = [chart.t_of_u(Jet.variable(complex(uv), 1)) for uv in nodes]
                us.append(nodes)
                jacs.append(np.array([j.coeffs[1] for j in jet]))
            wts.append(weights)
        if us:
            parts.append((np.concatenate(us), np.concatenate(jacs), np.concatenate(wts)))
        else:
            parts.append((np.array([]), np.array([]), np.array([])))
    return parts[0], parts[1]


def _batched_r_slots(chart, spec: EndpointSpec, us: np.ndarray, n_max: int,
                     rescale: bool = False):
    """Slot values R_{-1}, R_1, ..., R_{2 n_max - 1} (principal square-root
    branch per node) plus t and lambda_0 arrays for u-chart positions.

    With ``rescale`` the computation runs at scaled parameters r*c and
    scaled t (r^2 t for the two-parameter family, r^3 t for the degenerate
    one, with lambda_0 scaling by r and r^2 respectively) and converts the
    slots back through the exact weight R_k -> r^(k+p) R_k.  This keeps
    |Delta| in range on the t -> infinity branches, where it decays like
    1/t although no turning point is near."""
    ts = np.array([complex(chart.t_of_u(u)) for u in us])
    lams = np.array([complex(chart.lambda0_of_u(u)) for u in us])
    N = 2 * n_max
    p_t = 3 if spec.equation == "d7" else 2
    r = float(np.max(np.abs(ts))) ** (-1.0 / p_t) if rescale else 1.0
    ts_eval = ts * r ** p_t
    lams_eval = lams * r ** (p_t - 1)
    branch = BranchPoint(ts_eval, lams_eval)
    if spec.equation == "d7":
        zp = zero_param_solution(ts_eval, branch, N=N, K=N + 4,
                                 model=D7Model(chart.c * r))
    else:
        p_scaled = Parameters(chart.p.c_inf * r, chart.p.c_0 * r)
        zp = zero_param_solution(ts_eval, branch, p_scaled, N=N, K=N + 4)
    ric = riccati_solution(zp, +1)
    slots = {k: np.asarray(ric.R.slot(-k).value()) * r ** (k + p_t)
             for k in range(-1, 2 * n_max, 2)}
    return ts, lams, slots


def _anchor_label(spec: EndpointSpec, chart, t_end, lam_end, r_end) -> int:
    """Which +/- convention the continued branch at the endpoint matches."""
    if spec.equation == "d7":
        if spec.target == "zero_c":
            a, ref = t_end * r_end, chart.c
        else:
            return +1          # both conventions give the same (vanishing) W
    elif spec.target == "zero_cinf":
        a, ref = t_end * r_end, chart.p.c_inf
    elif spec.target == "zero_c0":
        a, ref = t_end * r_end, chart.p.c_0
    elif spec.target in ("inf3", "inf4"):
        a, ref = lam_end * r_end, -2.0
    else:
        a, ref = lam_end * r_end, 2.0
    return +1 if abs(a - ref) <= abs(a + ref) else -1


def _select_turning_point(chart, spec: EndpointSpec) -> complex:
    """The turning point adjacent to the endpoint: nearest in the u-chart
    (for u = infinity endpoints the one whose escape direction is cleanest,
    which for the symmetric triple is the same as picking any; use the one
    of maximal real part for determinism)."""
    kind, u_star = _target_of(chart, spec)
    tps = list(chart.turning_points_u)
    if kind == "point":
        return min(tps, key=lambda v: abs(v - u_star))
    return max(tps, key=lambda v: (v.real, v.imag))


def voros_numeric_oracle(spec: EndpointSpec, params, n_max: int = 2, *,
                         samples: int = _CIRCLE_SAMPLES,
                         tp_override: complex | None = None) -> OracleResult:
    """Contour-integral evaluation of W_1..W_{n_max} at an endpoint,
    independent of the closed forms: Riccati slots are integrated along a
    dumbbell around the adjacent turning point with FFT mode extraction on
    the circle.  Raises PathError when a consistency check fails."""
    key = (str(spec), complex(params.c_inf) if spec.equation == "d6" else complex(params),
           complex(params.c_0) if spec.equation == "d6" else 0j, n_max, samples,
           tp_override)
    if key in _oracle_cache:
        return _oracle_cache[key]

    chart = _chart_for(spec, params)
    u_tp = tp_override if tp_override is not None else _select_turning_point(chart, spec)
    specials = chart.singular_points()
    scale = max([1.0] + [abs(s) for s in specials])
    others = [s for s in specials if abs(s - u_tp) > 1e-9 * scale]
    d = min(abs(s - u_tp) for s in others)
    rho = _RADIUS_FACTOR * d

    kind, u_star = _target_of(chart, spec)
    theta_P = cmath.phase(u_star - u_tp) if kind == "point" else 0.0
    M = samples
    thetas = theta_P + 4 * math.pi * np.arange(M) / M
    circle = u_tp + rho * np.exp(1j * thetas)
    P = circle[0]

    u_pts, w_pts = _leg_waypoints(chart, spec, u_tp, P)
    fine_u, fine_w = _leg_quadrature(chart, u_pts, w_pts, rho, 1)
    coarse_u, coarse_w = _leg_quadrature(chart, u_pts, w_pts, rho, 2)   # doubled

    # The u-chart group (moderate |t|) and the w-chart group (t -> infinity,
    # evaluated at rescaled parameters) get separate batched solves.
    group_u = np.concatenate([circle, fine_u[0], coarse_u[0]])
    ts, lams, slots = _batched_r_slots(chart, spec, group_u, n_max)
    nC, nFu = M, len(fine_u[0])
    has_w = len(fine_w[0]) > 0
    if has_w:
        group_w = np.concatenate([fine_w[0], coarse_w[0]])
        ts_w, lams_w, slots_w = _batched_r_slots(chart, spec, group_w, n_max,
                                                 rescale=True)
        nFw = len(fine_w[0])

    sqrtD = slots[-1]          # R_{-1} values, principal branch per node
    sig_circle = _chain_signs(sqrtD[:nC])
    if abs(sig_circle[-1] * sqrtD[nC - 1] - (-1) * sig_circle[0] * sqrtD[0]) < \
       abs(sig_circle[-1] * sqrtD[nC - 1] - sig_circle[0] * sqrtD[0]):
        # After two full turns the chain must close on itself.
        raise PathError("square-root branch failed to close after two turns")

    def _leg_chain(u_vals, w_vals):
        seq = np.concatenate([[sqrtD[0]], u_vals, w_vals])
        return _chain_signs(seq, start=sqrtD[0])[1:]

    if has_w:
        sig_fine = _leg_chain(sqrtD[nC:nC + nFu], slots_w[-1][:nFw])
        sig_coarse = _leg_chain(sqrtD[nC + nFu:], slots_w[-1][nFw:])
    else:
        sig_fine = _leg_chain(sqrtD[nC:nC + nFu], np.array([]))
        sig_coarse = _leg_chain(sqrtD[nC + nFu:], np.array([]))

    # dt/du on the circle (for rho_n = R dt/du) via one-jets.
    jac_circle = np.array([chart.dt_du(u) for u in circle])

    freqs = np.fft.fftfreq(M, d=1.0 / M)       # signed integer bins
    odd = (np.abs(freqs) % 2).astype(int) == 1
    even = ~odd & (np.abs(freqs) > 0)

    values, diags = {}, {}
    for n in range(1, n_max + 1):
        r = slots[2 * n - 1]
        f_circle = sig_circle * r[:nC] * jac_circle
        chat = np.fft.fft(f_circle) / M
        amp = np.max(np.abs(chat))
        even_ratio = float(np.max(np.abs(chat[even])) / amp) if amp > 0 else 0.0
        if even_ratio > 1e-6:
            raise PathError(f"integer-power modes present (ratio {even_ratio:.2e}): "
                            "branch tracking inconsistent on the circle")
        tail = np.abs(freqs) > 0.4 * M
        tail_ratio = float(np.max(np.abs(chat[tail])) / amp) if amp > 0 else 0.0
        mode_sum = np.sum(chat[odd] * (P - u_tp) / (freqs[odd] / 2 + 1))

        nCu = len(coarse_u[0])
        leg_fine = np.sum(fine_u[2] * sig_fine[:nFu] * r[nC:nC + nFu] * fine_u[1])
        leg_coarse = np.sum(coarse_u[2] * sig_coarse[:nCu] * r[nC + nFu:] * coarse_u[1])
        if has_w:
            rw = slots_w[2 * n - 1]
            leg_fine += np.sum(fine_w[2] * sig_fine[nFu:] * rw[:nFw] * fine_w[1])
            leg_coarse += np.sum(coarse_w[2] * sig_coarse[nCu:] * rw[nFw:] * coarse_w[1])
        leg_err = abs(leg_fine - leg_coarse) / max(abs(leg_fine), 1e-30)
        if leg_err > 1e-6 and abs(leg_fine - leg_coarse) > 1e-9 * max(1.0, abs(mode_sum)):
            raise PathError(f"leg quadrature not converged (rel {leg_err:.2e})")

        values[n] = _ORIENTATION * (mode_sum + leg_fine)
        diags[n] = {"even_ratio": even_ratio, "tail_ratio": tail_ratio,
                    "leg_rel_err": leg_err, "mode_sum": mode_sum, "leg": leg_fine}

    if has_w:
        t_end, lam_end = ts_w[nFw - 1], lams_w[nFw - 1]
        r_end = sig_fine[-1] * slots_w[-1][nFw - 1]
    else:
        t_end, lam_end = ts[nC + nFu - 1], lams[nC + nFu - 1]
        r_end = sig_fine[-1] * sqrtD[nC + nFu - 1]
    label = _anchor_label(spec, chart, t_end, lam_end, r_end)
    if label != spec.sign:
        values = {n: -v for n, v in values.items()}
    result = OracleResult(spec, values, label, u_tp, diags)
    _oracle_cache[key] = result
    return result
