"""Haar-sampling harness: empirical densities of the scalar measures,
divergence fits and goodness-of-fit against the exact curves.

Sampling is deterministic for a given seed regardless of worker count:
samples are produced in fixed chunks of 4096, chunk i drawing from the
Philox stream (seed, stream_id=i).  Histogram merging is plain integer
addition, so any parallel schedule reproduces the serial result bit for
bit.
"""
from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    InsufficientData,
    InvalidEdges,
    InvalidOrder,
    ResourceLimit,
    SupportMismatch,
    SupportViolation,
)
from .exact_pdf import PdfCurve, support_for
from .pauli_spectrum import pauli_moment_batch, weyl_moment_batch
from .statevec import SeededRng, haar_block

CHUNK_SIZE = 4096

MEASURES = ("n", "xi", "m", "mlin", "coherence", "observable")

_ALIASES = {
    "n": "n", "n_alpha": "n",
    "xi": "xi", "xi_alpha": "xi",
    "m": "m", "m_alpha": "m",
    "mlin": "mlin", "m_lin": "mlin",
    "coherence": "coherence",
    "observable": "observable", "observableexpectation": "observable",
}


def canonical_measure(name: str) -> str:
    key = name.strip().lower()
    if key not in _ALIASES:
        raise ValueError(f"unknown measure {name!r}; expected one of {MEASURES}")
    return _ALIASES[key]


def _check_guards(q: int, n_sites: int):
    if q == 2:
        if n_sites > 10:
            raise ResourceLimit(f"qubit sampler guard: n_sites <= 10, got {n_sites}")
    elif 3 <= q <= 16:
        if n_sites != 1:
            raise ResourceLimit("qudit sampler is single-site only")
    else:
        raise ResourceLimit(f"local dimension {q} outside the supported range 2..16")


def _measure_chunk(states, measure, alpha, q, n_sites, observable):
    d = q**n_sites
    if measure == "coherence":
        t = np.sum(np.abs(states), axis=1)
        return np.maximum(t * t - 1.0, 0.0)
    if measure == "observable":
        vals = np.einsum("bi,ij,bj->b", states.conj(), observable, states)
        return vals.real
    if q == 2 and n_sites == 1:
        a0, a1 = states[:, 0], states[:, 1]
        z = np.conj(a0) * a1
        comp_sq = np.empty((states.shape[0], 3))
        comp_sq[:, 0] = (2 * z.real) ** 2
        comp_sq[:, 1] = (2 * z.imag) ** 2
        comp_sq[:, 2] = (a0.real**2 + a0.imag**2 - a1.real**2 - a1.imag**2) ** 2
        # exact normalization of the Bloch vector keeps N inside its support
        comp_sq /= np.sum(comp_sq, axis=1, keepdims=True)
        if float(alpha).is_integer() and 1 <= int(alpha) <= 8:
            acc = comp_sq.copy()
            for _ in range(int(alpha) - 1):
                acc *= comp_sq
            n_vals = acc.sum(axis=1)
        else:
            n_vals = np.sum(comp_sq**alpha, axis=1)
        np.clip(n_vals, 3.0 ** (1.0 - alpha), 1.0, out=n_vals)
    elif q == 2:
        n_vals = pauli_moment_batch(states, alpha)
    else:
        n_vals = weyl_moment_batch(states, alpha)
    if measure == "n":
        return n_vals
    xi = (1.0 + n_vals) / d
    if measure == "xi":
        return xi
    if measure == "mlin":
        return 1.0 - xi
    return np.log(xi) / (1.0 - alpha)


def _default_observable(d: int, observable):
    if observable is not None:
        return np.asarray(observable, dtype=np.complex128)
    if d == 2:
        return np.diag([1.0 + 0j, -1.0 + 0j])
    raise ValueError("an explicit observable is required for d > 2")


def sample_measure(measure, alpha, q, n_sites, n_samples, seed, observable=None):
    """Yield chunks of measure values, 4096 samples per stream.

    The concatenated output is a deterministic function of
    (measure, alpha, q, n_sites, n_samples, seed) alone.
    """
    measure = canonical_measure(measure)
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    if measure in ("n", "xi", "m", "mlin") and alpha <= 1:
        raise InvalidOrder(f"need alpha > 1, got {alpha}")
    _check_guards(q, n_sites)
    d = q**n_sites
    obs = _default_observable(d, observable) if measure == "observable" else None
    produced = 0
    chunk_idx = 0
    while produced < n_samples:
        m = min(CHUNK_SIZE, n_samples - produced)
        states = haar_block(d, SeededRng(seed, chunk_idx), m)
        yield _measure_chunk(states, measure, alpha, q, n_sites, obs)
        produced += m
        chunk_idx += 1


def sample_array(measure, alpha, q, n_sites, n_samples, seed, observable=None) -> np.ndarray:
    """Materialize ``sample_measure`` into one array (mind the memory)."""
    return np.concatenate(
        list(sample_measure(measure, alpha, q, n_sites, n_samples, seed, observable))
    )


@dataclass(frozen=True)
class Histogram:
    """Exact integer binning: bins are [e_i, e_{i+1}), the last one closed."""

    edges: np.ndarray
    counts: np.ndarray
    total_samples: int
    seed: int = 0
    measure_tag: str = ""
    n_below: int = 0
    n_above: int = 0

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=float)
        c = np.asarray(self.counts, dtype=np.int64)
        e.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "counts", c)
        if e.ndim != 1 or e.size < 2 or np.any(np.diff(e) <= 0):
            raise InvalidEdges("edges must be a strictly increasing 1-D sequence")
        if c.size != e.size - 1:
            raise InvalidEdges(f"need {e.size - 1} counts for {e.size} edges, got {c.size}")

    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def density(self) -> np.ndarray:
        return self.counts / (self.total_samples * self.widths())


def _bin_chunk(values: np.ndarray, edges: np.ndarray, nbins: int):
    idx = np.searchsorted(edges, values, side="right") - 1
    idx[values == edges[-1]] = nbins - 1
    below = int(np.count_nonzero(values < edges[0]))
    above = int(np.count_nonzero(values > edges[-1]))
    in_range = idx[(idx >= 0) & (idx < nbins) & (values <= edges[-1])]
    return np.bincount(in_range, minlength=nbins).astype(np.int64), below, above


def build_histogram(samples, edges, seed: int = 0, measure_tag: str = "") -> Histogram:
    """Bin a sample array or a stream of sample chunks."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise InvalidEdges("edges must be a strictly increasing 1-D sequence")
    nbins = edges.size - 1
    counts = np.zeros(nbins, dtype=np.int64)
    below = above = 0
    total = 0
    if isinstance(samples, np.ndarray):
        samples = [samples]
    for chunk in samples:
        chunk = np.asarray(chunk, dtype=float)
        c, b, a = _bin_chunk(chunk, edges, nbins)
        counts += c
        below += b
        above += a
        total += chunk.size
    return Histogram(edges, counts, total, seed=seed, measure_tag=measure_tag,
                     n_below=below, n_above=above)


def _chunk_plan(n_samples: int):
    n_chunks = (n_samples + CHUNK_SIZE - 1) // CHUNK_SIZE
    for i in range(n_chunks):
        yield i, min(CHUNK_SIZE, n_samples - i * CHUNK_SIZE)


def histogram_measure(
    measure,
    alpha,
    q,
    n_sites,
    n_samples,
    seed,
    edges,
    observable=None,
    threads: int = 1,
    strict_support: bool | None = None,
) -> Histogram:
    """Sample and bin in one pass, optionally across a thread pool.

    The result is identical for every thread count.  With
    ``strict_support`` (default: automatic for N/Xi/M on one qubit when the
    edges span the full support) any out-of-range sample raises, since the
    support of those measures is exact rather than statistical.
    """
    measure = canonical_measure(measure)
    if measure in ("n", "xi", "m", "mlin") and alpha <= 1:
        raise InvalidOrder(f"need alpha > 1, got {alpha}")
    _check_guards(q, n_sites)
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise InvalidEdges("edges must be a strictly increasing 1-D sequence")
    d = q**n_sites
    obs = _default_observable(d, observable) if measure == "observable" else None
    nbins = edges.size - 1

    def work(item):
        idx, m = item
        states = haar_block(d, SeededRng(seed, idx), m)
        vals = _measure_chunk(states, measure, alpha, q, n_sites, obs)
        return _bin_chunk(vals, edges, nbins)

    counts = np.zeros(nbins, dtype=np.int64)
    below = above = 0
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(work, _chunk_plan(n_samples))
            for c, b, a in results:
                counts += c
                below += b
                above += a
    else:
        for item in _chunk_plan(n_samples):
            c, b, a = work(item)
            counts += c
            below += b
            above += a

    if strict_support is None:
        if measure in ("n", "xi", "m", "mlin") and q == 2 and n_sites == 1:
            lo, hi = support_for(measure if measure != "mlin" else "xi", alpha)
            if measure == "mlin":
                lo, hi = 1.0 - hi, 1.0 - lo
            strict_support = edges[0] <= lo + 1e-12 and edges[-1] >= hi - 1e-12
        else:
            strict_support = False
    if below or above:
        if strict_support:
            raise SupportViolation(
                f"{below + above} samples escaped an exact support; this is a bug"
            )
        warnings.warn(f"{below + above} samples fell outside the histogram range")

    tag = f"{measure}_alpha{alpha:g}/q{q}/n{n_sites}"
    return Histogram(edges, counts, int(n_samples), seed=int(seed), measure_tag=tag,
                     n_below=below, n_above=above)


def measure_mean(measure, alpha, q, n_sites, n_samples, seed, observable=None):
    """(mean, standard error) of a measure, deterministically accumulated."""
    total = 0.0
    total_sq = 0.0
    count = 0
    for chunk in sample_measure(measure, alpha, q, n_sites, n_samples, seed, observable):
        total += float(np.sum(chunk))
        total_sq += float(np.sum(chunk * chunk))
        count += chunk.size
    mean = total / count
    var = max(total_sq / count - mean * mean, 0.0)
    return mean, np.sqrt(var / count)


# ---------------------------------------------------------------------------
# Divergence fitting.


@dataclass(frozen=True)
class DivergenceFit:
    """OLS of density against -ln|x - center| inside an epsilon window."""

    center: float
    side: str  # "left", "right" or "both"
    slope: float
    intercept: float
    window: tuple[float, float]
    r_squared: float
    n_points: int


def _fit_points(source, center, window, side):
    eps_min, eps_max = window
    if not 0.0 < eps_min < eps_max:
        raise ValueError(f"need 0 < eps_min < eps_max, got {window!r}")
    if isinstance(source, Histogram):
        x = source.centers()
        y = source.density()
        keep = source.counts > 0
    elif isinstance(source, PdfCurve):
        x = source.abscissas
        y = source.densities
        keep = np.ones(x.size, dtype=bool)
    else:
        raise TypeError("expected Histogram or PdfCurve")
    delta = x - center
    keep &= (np.abs(delta) > eps_min) & (np.abs(delta) < eps_max)
    if side == "left":
        keep &= delta < 0
    elif side == "right":
        keep &= delta > 0
    elif side != "both":
        raise ValueError(f"side must be left/right/both, got {side!r}")
    return x[keep], y[keep]


def fit_log_divergence(source, center: float, window, side: str = "both") -> DivergenceFit:
    """Least-squares logarithmic-divergence fit on a histogram or curve."""
    x, y = _fit_points(source, center, window, side)
    if x.size < 6:
        raise InsufficientData(
            f"only {x.size} populated bins inside the window; need at least 6"
        )
    t = -np.log(np.abs(x - center))
    slope, intercept = np.polyfit(t, y, 1)
    resid = y - (slope * t + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 0.0
    return DivergenceFit(
        center=float(center),
        side=side,
        slope=float(slope),
        intercept=float(intercept),
        window=(float(window[0]), float(window[1])),
        r_squared=r2,
        n_points=int(x.size),
    )


def bootstrap_slope_ci(
    hist: Histogram,
    center: float,
    window,
    side: str = "both",
    n_boot: int = 100,
    seed: int = 7,
    level: float = 0.95,
):
    """Percentile bootstrap CI for the fitted slope (Poisson-resampled bins)."""
    g = SeededRng(seed, 0).generator()
    slopes = []
    for _ in range(n_boot):
        counts = g.poisson(hist.counts.astype(float))
        resampled = Histogram(
            hist.edges, counts, hist.total_samples, seed=hist.seed,
            measure_tag=hist.measure_tag,
        )
        try:
            slopes.append(fit_log_divergence(resampled, center, window, side).slope)
        except InsufficientData:
            continue
    if len(slopes) < max(10, n_boot // 2):
        raise InsufficientData("too many bootstrap resamples lost their bins")
    tail = (1.0 - level) / 2.0
    lo, hi = np.quantile(slopes, [tail, 1.0 - tail])
    return float(lo), float(hi)


def scan_divergence_center(hist: Histogram, candidates, window, side: str = "both"):
    """Fit at every candidate center; return (best_center, best_fit, all fits)."""
    fits = []
    for c in np.asarray(candidates, dtype=float):
        try:
            fits.append(fit_log_divergence(hist, float(c), window, side))
        except InsufficientData:
            continue
    if not fits:
        raise InsufficientData("no candidate center had enough populated bins")
    best = max(fits, key=lambda f: f.r_squared)
    return best.center, best, fits


# ---------------------------------------------------------------------------
# Goodness of fit.


@dataclass(frozen=True)
class GofReport:
    max_sigma_deviation: float
    bins_tested: int
    bins_beyond_4sigma: int
    worst_bin_center: float


def gof_compare(hist: Histogram, exact: PdfCurve, exclude_radius: float) -> GofReport:
    """Poisson z-scores of observed counts against the exact curve.

    Bins within ``exclude_radius`` of a singular abscissa are skipped; the
    expected count per bin comes from the trapezoid integral of the
    tabulated curve across the bin.
    """
    lo, hi = exact.support
    if hist.edges[0] < lo - 1e-9 or hist.edges[-1] > hi + 1e-9:
        raise SupportMismatch(
            f"histogram range [{hist.edges[0]}, {hist.edges[-1]}] exceeds "
            f"curve support [{lo}, {hi}]"
        )
    x, y = exact.abscissas, exact.densities
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))])
    cum_at = np.interp(hist.edges, x, cum)
    expected = hist.total_samples * np.diff(cum_at)

    centers = hist.centers()
    keep = expected > 0
    for c in exact.singular_points:
        keep &= (hist.edges[:-1] > c + exclude_radius) | (hist.edges[1:] < c - exclude_radius)
    z = np.abs(hist.counts[keep] - expected[keep]) / np.sqrt(expected[keep])
    if z.size == 0:
        raise InsufficientData("no bins left to test after exclusions")
    worst = int(np.argmax(z))
    return GofReport(
        max_sigma_deviation=float(z[worst]),
        bins_tested=int(z.size),
        bins_beyond_4sigma=int(np.count_nonzero(z > 4.0)),
        worst_bin_center=float(centers[keep][worst]),
    )
