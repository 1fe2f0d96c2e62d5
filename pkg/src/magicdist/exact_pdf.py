"""Closed-form single-qubit densities under the Haar measure.

For one qubit the 2-alpha moment of the Bloch vector,
N_alpha = sum_j |n_j|^(2 alpha), has density P(n) supported on
[3^(1-alpha), 1] with a logarithmic divergence at n_c = 2^(1-alpha),
the saddle value of N_alpha on the sphere.  At alpha = 2 the density has
the explicit integral representation

    P(n) = (4/pi) * Integral dx / sqrt((1-x^2)^4 - (3(1-x^2)^2 + 4x^4 - 4n)^2)

taken over [x-, x+] for n in [1/3, 1/2) and over [0, y-) u (y+, x+] for
n in (1/2, 1], where x+-^2 = (1 +- sqrt(6n-2))/3 and
y+-^2 = (1 +- sqrt(2n-1))/2.  The radicand factorizes as
-48 (x^2-x-^2)(x^2-x+^2)(x^2-y-^2)(x^2-y+^2), which this module uses to
evaluate the inverse-square-root endpoints stably; the substitution
x = lo + (hi-lo) sin^2 t then removes them entirely and an adaptive rule
finishes the job.  Near n = 1/2 the density behaves like
-3/(sqrt(2) pi) * ln|n - 1/2| + b with b fitted once from regular points.

Densities of the stabilizer purity and the entropy follow by the change of
variables P_Xi(xi) = 2 P(2 xi - 1) and
P_M(m) = 2(alpha-1) e^((1-alpha)m) P(2 e^((1-alpha)m) - 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import InvalidOrder, InvalidSpectrum, SingularPoint
from .bessel import j0
from .statevec import BlochVector

DIVERGENCE_SLOPE_N2 = 3.0 / (math.sqrt(2.0) * math.pi)  # 0.675237...
N2_SUPPORT = (1.0 / 3.0, 1.0)
SINGULAR_GUARD = 1e-9
_TOL_RANGE = (1e-12, 1e-4)


def n_critical(alpha: float) -> float:
    """Saddle value of N_alpha, where the density diverges (one qubit)."""
    return 2.0 ** (1.0 - alpha)


def xi_critical(alpha: float) -> float:
    return (1.0 + n_critical(alpha)) / 2.0


def m_critical(alpha: float) -> float:
    return math.log(xi_critical(alpha)) / (1.0 - alpha)


def support_for(variable: str, alpha: float = 2.0) -> tuple[float, float]:
    """Closed support of the named single-qubit density."""
    lo_n = 3.0 ** (1.0 - alpha)
    v = variable.lower()
    if v == "n":
        return (lo_n, 1.0)
    if v == "xi":
        return ((1.0 + lo_n) / 2.0, 1.0)
    if v == "m":
        return (0.0, math.log((1.0 + lo_n) / 2.0) / (1.0 - alpha))
    raise ValueError(f"unknown variable {variable!r}")


@dataclass(frozen=True)
class Roots2:
    """Roots in [0, 1] of the alpha=2 radicand; x- exists for n <= 1/2 and
    the y pair for n > 1/2."""

    x_minus: float | None
    x_plus: float
    y_minus: float | None = None
    y_plus: float | None = None


def _root_squares(n: float):
    """Squared roots in cancellation-free form.

    x-^2 = (1 - 2n)/(1 + s) with s = sqrt(6n - 2) (negative above n = 1/2),
    y-^2 = (1 - n)/(1 + t) with t = sqrt(2n - 1), and the gap
    x+^2 - y+^2 = (n - 1)^2 / ((n + t)(2s + 3t + 1)) stays accurate even as
    both squares approach 1.
    """
    s = math.sqrt(6.0 * n - 2.0)
    x_m2 = (1.0 - 2.0 * n) / (1.0 + s)
    x_p2 = (1.0 + s) / 3.0
    if n <= 0.5:
        return s, x_m2, x_p2, None, None, None
    t = math.sqrt(2.0 * n - 1.0)
    y_m2 = (1.0 - n) / (1.0 + t)
    y_p2 = (1.0 + t) / 2.0
    gap_xy2 = (n - 1.0) ** 2 / ((n + t) * (2.0 * s + 3.0 * t + 1.0))
    return s, x_m2, x_p2, y_m2, y_p2, gap_xy2


def roots_n2(n: float) -> Roots2:
    if not N2_SUPPORT[0] <= n <= N2_SUPPORT[1]:
        raise ValueError(f"n={n!r} outside the support {N2_SUPPORT}")
    _, x_m2, x_p2, y_m2, y_p2, _ = _root_squares(n)
    if n > 0.5:
        return Roots2(None, math.sqrt(x_p2), math.sqrt(y_m2), math.sqrt(y_p2))
    return Roots2(math.sqrt(max(x_m2, 0.0)), math.sqrt(x_p2))


def _segment(lo: float, span: float, rest, left_root: bool, right_root: bool,
             tol: float, split: float | None = None) -> float:
    """Integrate 1/sqrt(R) over [lo, lo+span] where
    R(x) = (x - lo)^pL (lo + span - x)^pR rest(x, x - lo, lo + span - x).

    The substitution x = lo + span sin^2 t supplies the endpoint factors
    exactly (x - lo = span sin^2 t, hi - x = span cos^2 t), so the
    transformed integrand is smooth wherever ``rest`` is positive.
    """
    if span <= 0.0:
        return 0.0
    if left_root and right_root and span < 1e-13 * max(abs(lo), 1.0):
        # sliver between two coalescing roots: exact limit pi / sqrt(rest)
        mid = lo + span / 2.0
        return math.pi / math.sqrt(rest(mid, span / 2.0, span / 2.0))

    def g(t: float) -> float:
        st, ct = math.sin(t), math.cos(t)
        dl = span * st * st
        dr = span * ct * ct
        f = rest(lo + dl, dl, dr)
        if f <= 0.0:
            return 0.0
        num = 2.0
        if not left_root:
            num *= st * math.sqrt(span)
        if not right_root:
            num *= ct * math.sqrt(span)
        return num / math.sqrt(f)

    if split is not None and 0.0 < (split - lo) < span:
        t_split = math.asin(min(math.sqrt((split - lo) / span), 1.0))
        a, _ = quad(g, 0.0, t_split, epsabs=tol / 2, epsrel=1e-11, limit=300)
        b, _ = quad(g, t_split, math.pi / 2, epsabs=tol / 2, epsrel=1e-11, limit=300)
        return a + b
    val, _ = quad(g, 0.0, math.pi / 2, epsabs=tol, epsrel=1e-11, limit=300)
    return val


@lru_cache(maxsize=4)
def n2_log_intercept() -> float:
    """Offset b of the local model P(n) ~ -slope*ln|n - 1/2| + b, fitted once."""
    samples = []
    for eps in (1e-4, 1e-5):
        for side in (1.0, -1.0):
            p = pdf_n2_exact(0.5 + side * eps, tol=1e-11)
            samples.append(p + DIVERGENCE_SLOPE_N2 * math.log(eps))
    return float(np.mean(samples))


def pdf_n2_exact(n: float, tol: float = 1e-10) -> float:
    """Exact density of N_2 under the Haar measure, absolute error <= tol.

    Returns 0 outside [1/3, 1]; raises SingularPoint within 1e-9 of the
    divergent abscissa n = 1/2, carrying the fitted logarithmic model.
    """
    if not _TOL_RANGE[0] <= tol <= _TOL_RANGE[1]:
        raise ValueError(f"tol must lie in {_TOL_RANGE}, got {tol!r}")
    if not N2_SUPPORT[0] <= n <= N2_SUPPORT[1]:
        return 0.0
    if abs(n - 0.5) <= SINGULAR_GUARD:
        # the fit points sit at 1e-4 and 1e-5, well outside this guard
        raise SingularPoint(0.5, DIVERGENCE_SLOPE_N2, n2_log_intercept())
    _, x_m2, x_p2, y_m2, y_p2, gap_xy2 = _root_squares(n)
    scaled = tol * math.pi / 4.0
    if n < 0.5:
        x_m = math.sqrt(max(x_m2, 0.0))
        x_p = math.sqrt(x_p2)

        def rest_a(x, dl, dr):
            # R = (x-x-)(x+-x) * 48 (x+x-)(x+x+) ((u-1/2)^2 + (1-2n)/4)
            u = x * x
            quad_y = (u - 0.5) ** 2 + (1.0 - 2.0 * n) / 4.0
            return 48.0 * (x + x_m) * (x + x_p) * quad_y

        hint = 1.0 / math.sqrt(2.0) if n > 0.375 else None
        total = _segment(x_m, x_p - x_m, rest_a, True, True, scaled, split=hint)
    else:
        x_p = math.sqrt(x_p2)
        y_m = math.sqrt(y_m2)
        y_p = math.sqrt(y_p2)
        y_gap = (y_p2 - y_m2) / (y_p + y_m)
        span_b = gap_xy2 / (x_p + y_p)

        def rest_low(x, dl, dr):
            # over [0, y-]: R = (y- - x) * 48 (u-x-^2)(x+^2-u)(x+y-)(y+-x)(x+y+)
            u = x * x
            return (
                48.0 * (u - x_m2) * (x_p2 - u) * (x + y_m) * (y_gap + dr) * (x + y_p)
            )

        def rest_high(x, dl, dr):
            # over [y+, x+]: R = (x-y+)(x+-x) * 48 (u-x-^2)(x+x+)(u-y-^2)(x+y+)
            u_minus_ym2 = (dl + y_gap) * (x + y_m)
            return 48.0 * (x * x - x_m2) * (x + x_p) * u_minus_ym2 * (x + y_p)

        total = _segment(0.0, y_m, rest_low, False, True, scaled / 2) + _segment(
            y_p, span_b, rest_high, True, True, scaled / 2
        )
    return 4.0 / math.pi * total


def pdf_xi(alpha: float, xi: float, tol: float = 1e-10) -> float:
    """Density of the stabilizer purity; exact evaluation needs alpha = 2."""
    if alpha != 2:
        raise NotImplementedError("closed-form purity density is available at alpha = 2 only")
    lo, hi = support_for("xi", alpha)
    if not lo <= xi <= hi:
        return 0.0
    try:
        inner_tol = min(max(tol / 2.0, _TOL_RANGE[0]), _TOL_RANGE[1])
        return 2.0 * pdf_n2_exact(2.0 * xi - 1.0, tol=inner_tol)
    except SingularPoint as sp:
        slope = 2.0 * sp.log_slope
        intercept = 2.0 * (sp.log_intercept - sp.log_slope * math.log(2.0))
        raise SingularPoint(xi_critical(alpha), slope, intercept) from None


def pdf_m(alpha: float, m: float, tol: float = 1e-10) -> float:
    """Density of the stabilizer Renyi entropy (nats); alpha = 2 only."""
    if alpha != 2:
        raise NotImplementedError("closed-form entropy density is available at alpha = 2 only")
    lo, hi = support_for("m", alpha)
    if not lo <= m <= hi:
        return 0.0
    jac = 2.0 * (alpha - 1.0) * math.exp((1.0 - alpha) * m)
    try:
        inner_tol = min(max(tol / jac, _TOL_RANGE[0]), _TOL_RANGE[1])
        return jac * pdf_n2_exact(2.0 * math.exp((1.0 - alpha) * m) - 1.0, tol=inner_tol)
    except SingularPoint as sp:
        # |n - n_c| = 2 e^{-m_c} (alpha-1) |m - m_c| to leading order
        mc = m_critical(alpha)
        scale = 2.0 * math.exp((1.0 - alpha) * mc) * (alpha - 1.0)
        slope = scale * sp.log_slope
        intercept = scale * (sp.log_intercept - sp.log_slope * math.log(scale))
        raise SingularPoint(mc, slope, intercept) from None


def pdf_coherence(c: float) -> float:
    """Density of the l1 coherence of a Haar-random qubit: c / sqrt(1 - c^2)."""
    if c == 1.0:
        raise SingularPoint(1.0)
    if not 0.0 <= c < 1.0:
        return 0.0
    return c / math.sqrt(1.0 - c * c)


def pdf_observable(a: float, a1: float, a2: float) -> float:
    """Density of <A> for a Haar-random qubit: uniform on [a1, a2]."""
    if a1 >= a2:
        raise InvalidSpectrum(f"need a1 < a2, got {a1!r} >= {a2!r}")
    return 1.0 / (a2 - a1) if a1 <= a <= a2 else 0.0


def mean_sre_exact(tol: float = 1e-8) -> float:
    """Exact Haar mean of the order-2 stabilizer entropy for one qubit, nats.

    Integral over [0, 1] of
    log(16 / (7x^4 - 6x^2 + 4 sqrt(3x^8 - 5x^6 + 8x^4 - 5x^2 + 3) + 7)),
    which evaluates to 0.2289211... nats (0.3302633... when expressed in
    bits).  Cross-checked against direct Monte Carlo and against the
    integral of m times the exact entropy density.
    """
    if not _TOL_RANGE[0] <= tol <= _TOL_RANGE[1]:
        raise ValueError(f"tol must lie in {_TOL_RANGE}, got {tol!r}")

    def f(x: float) -> float:
        u = x * x
        inner = 3 * u**4 - 5 * u**3 + 8 * u**2 - 5 * u + 3
        return math.log(16.0 / (7 * u * u - 6 * u + 4 * math.sqrt(inner) + 7))

    val, _ = quad(f, 0.0, 1.0, epsabs=tol, epsrel=1e-12, limit=200)
    return val


def characteristic_function_n2(k: float, tol: float = 1e-10) -> complex:
    """E[exp(i k N_2)] for one Haar qubit.

    chi(k) = (1/2) Integral_0^pi d(theta) sin(theta)
             exp[i k cos^4(theta) + i k (3/4) sin^4(theta)] J0(k sin^4(theta)/4),
    evaluated after the substitution x = cos(theta) (even integrand).
    """
    if abs(k) > 1e4:
        raise ValueError("characteristic function supported for |k| <= 1e4")

    def re_im(x: float) -> complex:
        s2 = 1.0 - x * x
        phase = k * (x**4 + 0.75 * s2 * s2)
        return complex(math.cos(phase), math.sin(phase)) * j0(k * s2 * s2 / 4.0)

    limit = int(min(200 + 4 * abs(k), 8000))
    re, _ = quad(lambda x: re_im(x).real, 0.0, 1.0, epsabs=tol, epsrel=1e-11, limit=limit)
    im, _ = quad(lambda x: re_im(x).imag, 0.0, 1.0, epsabs=tol, epsrel=1e-11, limit=limit)
    return complex(re, im)


# ---------------------------------------------------------------------------
# Critical-point classification.


@dataclass(frozen=True)
class CriticalPoint:
    bloch: BlochVector
    class_label: str  # "C1_max", "C2_saddle" or "C3_min"
    value: float
    multiplicity: int
    grad_norm: float


def _signs(k: int):
    for bits in range(2**k):
        yield tuple(1.0 if bits & (1 << j) else -1.0 for j in range(k))


def _moment(vec: np.ndarray, alpha: float) -> float:
    return float(np.sum(np.abs(vec) ** (2.0 * alpha)))


def _projected_gradient(vec: np.ndarray, alpha: float) -> np.ndarray:
    g = 2.0 * alpha * np.sign(vec) * np.abs(vec) ** (2.0 * alpha - 1.0)
    return g - np.dot(g, vec) * vec


def _tangent_hessian_eigs(vec: np.ndarray, alpha: float) -> np.ndarray:
    """Eigenvalues of the constrained Hessian on the tangent plane."""
    diag = 2.0 * alpha * (2.0 * alpha - 1.0) * np.abs(vec) ** (2.0 * alpha - 2.0)
    g = 2.0 * alpha * np.sign(vec) * np.abs(vec) ** (2.0 * alpha - 1.0)
    lagr = np.diag(diag) - np.dot(g, vec) * np.eye(3)
    # orthonormal tangent basis via Gram-Schmidt on the coordinate axes
    basis = []
    for e in np.eye(3):
        t = e - np.dot(e, vec) * vec
        for prev in basis:
            t = t - np.dot(t, prev) * prev
        nrm = np.linalg.norm(t)
        if nrm > 1e-8:
            basis.append(t / nrm)
        if len(basis) == 2:
            break
    t_mat = np.array(basis)
    return np.linalg.eigvalsh(t_mat @ lagr @ t_mat.T)


def critical_points(alpha: float) -> list[CriticalPoint]:
    """The 26 critical Bloch vectors of N_alpha with verified classification.

    Six coordinate vectors (maxima, value 1), twelve two-equal-component
    vectors (saddles, value 2^(1-alpha)) and eight diagonal vectors
    (minima, value 3^(1-alpha)).  Each point is checked numerically:
    projected gradient below 1e-10 and tangent Hessian signature matching
    its class.
    """
    if alpha <= 1:
        raise InvalidOrder(f"need alpha > 1, got {alpha}")
    vectors: list[tuple[np.ndarray, str, int]] = []
    for axis in range(3):
        for s in (1.0, -1.0):
            v = np.zeros(3)
            v[axis] = s
            vectors.append((v, "C1_max", 6))
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for pair in ((0, 1), (0, 2), (1, 2)):
        for s0, s1 in _signs(2):
            v = np.zeros(3)
            v[pair[0]] = s0 * inv_sqrt2
            v[pair[1]] = s1 * inv_sqrt2
            vectors.append((v, "C2_saddle", 12))
    inv_sqrt3 = 1.0 / math.sqrt(3.0)
    for s in _signs(3):
        vectors.append((np.array(s) * inv_sqrt3, "C3_min", 8))

    out = []
    for vec, label, mult in vectors:
        grad = float(np.linalg.norm(_projected_gradient(vec, alpha)))
        eigs = _tangent_hessian_eigs(vec, alpha)
        pos = int(np.sum(eigs > 1e-8))
        neg = int(np.sum(eigs < -1e-8))
        if neg == 2 and pos == 0:
            seen = "C1_max"
        elif pos == 2 and neg == 0:
            seen = "C3_min"
        elif pos == 1 and neg == 1:
            seen = "C2_saddle"
        else:
            seen = "degenerate"
        if seen != label or grad > 1e-10:
            raise ArithmeticError(
                f"classification failed at {vec}: grad={grad!r}, eigs={eigs!r}"
            )
        out.append(
            CriticalPoint(
                bloch=BlochVector(*vec),
                class_label=label,
                value=_moment(vec, alpha),
                multiplicity=mult,
                grad_norm=grad,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Curve tabulation.


@dataclass(frozen=True)
class PdfCurve:
    """Tabulated density with its support and divergent abscissas."""

    variable: str
    alpha: float
    abscissas: np.ndarray
    densities: np.ndarray
    support: tuple[float, float]
    singular_points: tuple[float, ...] = ()

    def __post_init__(self):
        x = np.asarray(self.abscissas, dtype=float)
        y = np.asarray(self.densities, dtype=float)
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "abscissas", x)
        object.__setattr__(self, "densities", y)
        if x.shape != y.shape:
            raise ValueError("abscissas and densities must have equal length")
        if np.any(np.diff(x) <= 0):
            raise ValueError("abscissas must be strictly increasing")
        if np.any(y < 0):
            raise ValueError("densities must be non-negative")

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.abscissas, self.densities])

    def _blocks(self):
        """Split tabulation at the gaps that straddle singular points."""
        cuts = [0]
        for c in self.singular_points:
            right = int(np.searchsorted(self.abscissas, c))
            if 0 < right < self.abscissas.size:
                cuts.append(right)
        cuts.append(self.abscissas.size)
        return [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]

    def _gap_model(self, c: float, lo_idx: int, hi_idx: int, n_fit: int = 6):
        """Fit density ~ -s ln|x-c| + b from the points flanking the gap."""
        xs, ys = [], []
        for sel in (slice(max(lo_idx - n_fit, 0), lo_idx), slice(hi_idx, hi_idx + n_fit)):
            xs.append(self.abscissas[sel])
            ys.append(self.densities[sel])
        t = -np.log(np.abs(np.concatenate(xs) - c))
        y = np.concatenate(ys)
        slope, intercept = np.polyfit(t, y, 1)
        return float(slope), float(intercept)

    def integral(self) -> float:
        """Trapezoid over the tabulation plus the modeled singular gaps."""
        total = 0.0
        blocks = self._blocks()
        for lo, hi in blocks:
            total += float(np.trapezoid(self.densities[lo:hi], self.abscissas[lo:hi]))
        for c in self.singular_points:
            right = int(np.searchsorted(self.abscissas, c))
            if not 0 < right < self.abscissas.size:
                continue
            g_lo = c - self.abscissas[right - 1]
            g_hi = self.abscissas[right] - c
            slope, intercept = self._gap_model(c, right, right)
            for g in (g_lo, g_hi):
                if g > 0:
                    total += g * (intercept + slope * (1.0 - math.log(g)))
        return total


def _refined_grid(lo: float, hi: float, singulars, num_points: int, guard: float) -> np.ndarray:
    """Uniform base grid plus log-spaced wings approaching each singularity."""
    base = np.linspace(lo, hi, num_points)
    pieces = [base]
    for c in singulars:
        span = min(c - lo, hi - c, 0.1)
        wings = np.geomspace(guard, span, num_points // 8)
        pieces.append(c - wings)
        pieces.append(c + wings)
    grid = np.unique(np.concatenate(pieces))
    grid = grid[(grid >= lo) & (grid <= hi)]
    keep = np.ones(grid.size, dtype=bool)
    for c in singulars:
        keep &= np.abs(grid - c) >= guard * 0.999
    grid = grid[keep]
    # the closed forms evaluate to 0 exactly on the support edges (empty
    # integration interval); nudge inward so the step value is tabulated
    edge = 1e-9 * (hi - lo)
    grid[0] = max(grid[0], lo + edge)
    grid[-1] = min(grid[-1], hi - edge)
    return grid


def tabulate_pdf(
    variable: str,
    alpha: float = 2.0,
    num_points: int = 600,
    tol: float = 1e-9,
    guard: float = 1e-5,
) -> PdfCurve:
    """Tabulated exact density of N, Xi or M at alpha = 2.

    The grid refines logarithmically into the divergence from both sides
    down to ``guard``; the open interval around the singular abscissa is
    left to the logarithmic model (see ``PdfCurve.integral``).
    """
    v = variable.lower()
    if v not in ("n", "xi", "m"):
        raise ValueError(f"unknown variable {variable!r}")
    if alpha != 2:
        raise NotImplementedError("exact tabulation is available at alpha = 2 only")
    lo, hi = support_for(v, alpha)
    c = {"n": n_critical, "xi": xi_critical, "m": m_critical}[v](alpha)
    evaluate = {
        "n": lambda x: pdf_n2_exact(x, tol=tol),
        "xi": lambda x: pdf_xi(alpha, x, tol=tol),
        "m": lambda x: pdf_m(alpha, x, tol=tol),
    }[v]
    grid = _refined_grid(lo, hi, [c], num_points, guard)
    dens = np.array([evaluate(x) for x in grid])
    return PdfCurve(
        variable=v,
        alpha=float(alpha),
        abscissas=grid,
        densities=dens,
        support=(lo, hi),
        singular_points=(c,),
    )
