import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magicdist import (
    Histogram,
    InsufficientData,
    InvalidEdges,
    ResourceLimit,
    SupportMismatch,
    build_histogram,
    bootstrap_slope_ci,
    fit_log_divergence,
    gof_compare,
    histogram_measure,
    measure_mean,
    sample_array,
    sample_measure,
    scan_divergence_center,
    tabulate_pdf,
    SeededRng,
)
from magicdist.montecarlo import CHUNK_SIZE, canonical_measure


class TestCanonicalMeasure:
    def test_aliases(self):
        assert canonical_measure("N_alpha") == "n"
        assert canonical_measure("Xi") == "xi"
        assert canonical_measure("M_ALPHA") == "m"
        assert canonical_measure("ObservableExpectation") == "observable"

    def test_unknown(self):
        with pytest.raises(ValueError):
            canonical_measure("entropy")


class TestSampling:
    def test_deterministic(self):
        a = sample_array("n", 2.0, 2, 1, 10_000, seed=5)
        b = sample_array("n", 2.0, 2, 1, 10_000, seed=5)
        assert np.array_equal(a, b)

    def test_chunks_are_stream_addressed(self):
        # a shorter run reproduces the prefix of a longer one
        long = sample_array("m", 2.0, 2, 1, 2 * CHUNK_SIZE + 17, seed=9)
        short = sample_array("m", 2.0, 2, 1, CHUNK_SIZE, seed=9)
        assert np.array_equal(long[:CHUNK_SIZE], short)

    def test_chunk_shapes(self):
        chunks = list(sample_measure("n", 2.0, 2, 1, CHUNK_SIZE + 5, seed=1))
        assert [c.size for c in chunks] == [CHUNK_SIZE, 5]

    def test_support_single_qubit(self):
        vals = sample_array("n", 2.0, 2, 1, 50_000, seed=3)
        assert vals.min() >= 1.0 / 3.0
        assert vals.max() <= 1.0

    def test_support_alpha3(self):
        vals = sample_array("n", 3.0, 2, 1, 50_000, seed=4)
        assert vals.min() >= 3.0 ** (1 - 3.0)
        assert vals.max() <= 1.0

    def test_m_mean_quick(self):
        mean, se = measure_mean("m", 2.0, 2, 1, 200_000, seed=6)
        assert abs(mean - 0.2289211) < 4 * se

    def test_multi_qubit_matches_spectrum_path(self):
        from magicdist import PureState, magic_report, pauli_spectrum_fast
        from magicdist.statevec import haar_block

        vals = sample_array("m", 2.0, 2, 3, 8, seed=2)
        states = haar_block(8, SeededRng(2, 0), 8)
        for i in range(8):
            spec = pauli_spectrum_fast(PureState(states[i], 2, 3))
            assert vals[i] == pytest.approx(magic_report(spec, 2.0).m_alpha, abs=1e-12)

    def test_qudit_matches_spectrum_path(self):
        from magicdist import PureState, magic_report, weyl_spectrum
        from magicdist.statevec import haar_block

        vals = sample_array("xi", 2.0, 3, 1, 8, seed=2)
        states = haar_block(3, SeededRng(2, 0), 8)
        for i in range(8):
            spec = weyl_spectrum(PureState(states[i], 3, 1))
            assert vals[i] == pytest.approx(magic_report(spec, 2.0).xi_alpha, abs=1e-12)

    def test_observable_default_z_uniform(self):
        from scipy.stats import kstest

        vals = sample_array("observable", 2.0, 2, 1, 500_000, seed=8)
        stat = kstest(vals, "uniform", args=(-1.0, 2.0)).statistic
        assert stat < 1.628 / np.sqrt(vals.size)

    def test_coherence_range(self):
        vals = sample_array("coherence", 2.0, 2, 1, 20_000, seed=9)
        assert vals.min() >= 0.0
        assert vals.max() <= 1.0 + 1e-12

    def test_resource_guards(self):
        with pytest.raises(ResourceLimit):
            next(sample_measure("n", 2.0, 2, 11, 10, seed=0))
        with pytest.raises(ResourceLimit):
            next(sample_measure("n", 2.0, 17, 1, 10, seed=0))
        with pytest.raises(ResourceLimit):
            next(sample_measure("n", 2.0, 3, 2, 10, seed=0))

    def test_alpha_guard(self):
        from magicdist import InvalidOrder

        with pytest.raises(InvalidOrder):
            next(sample_measure("m", 1.0, 2, 1, 10, seed=0))
        with pytest.raises(InvalidOrder):
            histogram_measure("n", 0.5, 2, 1, 10, 0, [0.0, 1.0])

    def test_mlin_support_and_strict_binning(self):
        vals = sample_array("mlin", 2.0, 2, 1, 30_000, seed=21)
        assert vals.min() >= 0.0
        assert vals.max() <= 1.0 / 3.0 + 1e-12
        edges = np.linspace(0.0, 1.0 / 3.0, 101)
        h = histogram_measure("mlin", 2.0, 2, 1, 30_000, 21, edges)
        assert h.n_below == 0 and h.n_above == 0
        assert h.counts.sum() == 30_000


class TestBuildHistogram:
    def test_basic_counts(self):
        h = build_histogram(np.array([0.4, 0.5, 0.6]), [0.35, 0.55, 0.75])
        assert h.counts.tolist() == [2, 1]

    def test_empty_stream(self):
        h = build_histogram(iter([]), [0.0, 1.0, 2.0])
        assert h.counts.tolist() == [0, 0]
        assert h.total_samples == 0

    def test_last_bin_closed(self):
        h = build_histogram(np.array([1.0, 2.0]), [0.0, 1.0, 2.0])
        assert h.counts.tolist() == [0, 2]
        assert h.n_above == 0

    def test_out_of_range_tallied(self):
        h = build_histogram(np.array([-1.0, 0.5, 9.0]), [0.0, 1.0])
        assert h.counts.tolist() == [1]
        assert (h.n_below, h.n_above) == (1, 1)

    def test_bad_edges(self):
        with pytest.raises(InvalidEdges):
            build_histogram(np.array([1.0]), [0.0, 0.0, 1.0])

    @given(
        samples=st.lists(st.floats(-5, 5), max_size=300),
        cuts=st.lists(st.floats(-4, 4), min_size=2, max_size=12),
    )
    @settings(max_examples=150, deadline=None)
    def test_matches_numpy_histogram(self, samples, cuts):
        edges = np.unique(np.asarray(cuts))
        if edges.size < 2:
            return
        data = np.asarray(samples)
        h = build_histogram(data, edges)
        ref, _ = np.histogram(data, bins=edges)
        assert np.array_equal(h.counts, ref)
        assert h.counts.sum() + h.n_below + h.n_above == data.size

    def test_density_integrates_to_fraction_in_range(self):
        data = np.array([0.1, 0.2, 0.3, 5.0])
        h = build_histogram(data, [0.0, 0.25, 0.5])
        integral = float(np.sum(h.density() * h.widths()))
        assert integral == pytest.approx(3 / 4)


class TestHistogramMeasure:
    def test_thread_count_invariance(self):
        edges = np.linspace(1 / 3, 1.0, 101)
        h1 = histogram_measure("n", 2.0, 2, 1, 30_000, 12, edges, threads=1)
        h4 = histogram_measure("n", 2.0, 2, 1, 30_000, 12, edges, threads=4)
        assert np.array_equal(h1.counts, h4.counts)
        assert h1.measure_tag == h4.measure_tag

    def test_exact_support_containment(self):
        edges = np.linspace(1 / 3, 1.0, 201)
        h = histogram_measure("n", 2.0, 2, 1, 200_000, 13, edges)
        assert h.n_below == 0 and h.n_above == 0
        assert h.counts.sum() == 200_000

    def test_windowed_histogram_warns_not_raises(self):
        edges = np.linspace(0.45, 0.55, 21)
        with pytest.warns(UserWarning):
            h = histogram_measure("n", 2.0, 2, 1, 20_000, 14, edges)
        assert h.counts.sum() + h.n_below + h.n_above == 20_000

    def test_peak_bin_near_nc(self):
        edges = np.linspace(1 / 3, 1.0, 501)
        h = histogram_measure("n", 2.0, 2, 1, 500_000, 15, edges)
        peak = h.centers()[int(np.argmax(h.density()))]
        assert abs(peak - 0.5) < 2.5 / 500  # within a couple of bin widths


def synthetic_log_histogram(center=0.5, slope=0.675, intercept=0.115, total=10**7):
    """Histogram whose bin means follow -slope ln|x-c| + intercept exactly."""
    wings = np.geomspace(1e-5, 2e-2, 40)
    edges = np.unique(np.concatenate([center - wings, center + wings]))
    centers = 0.5 * (edges[:-1] + edges[1:])
    with np.errstate(divide="ignore"):
        dens = -slope * np.log(np.abs(centers - center)) + intercept
    middle = int(np.argmin(np.abs(centers - center)))
    # bin straddling the center: mean of the model over [-eps, eps]
    dens[middle] = slope * (1.0 - np.log(wings[0])) + intercept
    counts = np.rint(dens * np.diff(edges) * total).astype(np.int64)
    return Histogram(edges, counts, total)


class TestDivergenceFit:
    def test_recovers_synthetic_slope(self):
        h = synthetic_log_histogram()
        fit = fit_log_divergence(h, 0.5, (1e-5, 2e-2))
        assert fit.slope == pytest.approx(0.675, rel=1e-3)
        assert fit.intercept == pytest.approx(0.115, abs=2e-3)
        assert fit.r_squared > 0.9999

    def test_sides(self):
        h = synthetic_log_histogram()
        left = fit_log_divergence(h, 0.5, (1e-5, 2e-2), side="left")
        right = fit_log_divergence(h, 0.5, (1e-5, 2e-2), side="right")
        assert left.slope == pytest.approx(right.slope, rel=1e-2)

    def test_insufficient_data(self):
        h = synthetic_log_histogram()
        with pytest.raises(InsufficientData):
            fit_log_divergence(h, 0.5, (1e-5, 1.5e-5))

    def test_smooth_density_fits_flat(self):
        vals = sample_array("coherence", 2.0, 2, 1, 300_000, seed=20)
        edges = np.linspace(0.3, 0.7, 80)
        h = build_histogram(vals, edges)
        fit = fit_log_divergence(h, 0.5, (2e-3, 0.19))
        assert abs(fit.slope) < 0.15
        assert fit.r_squared < 0.5

    def test_center_scan_finds_synthetic_center(self):
        h = synthetic_log_histogram(center=0.5)
        candidates = 0.5 + np.linspace(-0.003, 0.003, 13)
        best, fit, fits = scan_divergence_center(h, candidates, (1e-4, 1.5e-2))
        assert best == pytest.approx(0.5, abs=1e-4)
        assert fit.r_squared >= max(f.r_squared for f in fits) - 1e-12

    def test_bootstrap_ci_brackets_slope(self):
        h = synthetic_log_histogram()
        fit = fit_log_divergence(h, 0.5, (1e-4, 2e-2))
        lo, hi = bootstrap_slope_ci(h, 0.5, (1e-4, 2e-2), n_boot=60, seed=3)
        assert lo < fit.slope < hi
        assert hi - lo < 0.05


@pytest.fixture(scope="module")
def curve():
    return tabulate_pdf("n", num_points=700, tol=1e-9, guard=1e-6)


class TestGoodnessOfFit:

    def test_self_consistency_inverse_cdf(self, curve):
        # draw from the exact curve itself; deviations must look Poisson
        x, y = curve.abscissas, curve.densities
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))])
        cdf /= cdf[-1]
        u = SeededRng(33).generator().random(2_000_000)
        samples = np.interp(u, cdf, x)
        edges = np.linspace(1 / 3, 1.0, 301)
        h = build_histogram(samples, edges)
        report = gof_compare(h, curve, exclude_radius=2e-3)
        assert report.bins_beyond_4sigma <= max(1, report.bins_tested // 100)
        assert report.max_sigma_deviation < 6.0

    def test_haar_samples_match_exact(self, curve):
        edges = np.linspace(1 / 3, 1.0, 301)
        h = histogram_measure("n", 2.0, 2, 1, 2_000_000, 34, edges)
        report = gof_compare(h, curve, exclude_radius=2e-3)
        assert report.bins_beyond_4sigma == 0

    def test_support_mismatch(self, curve):
        h = build_histogram(np.array([0.5]), [0.0, 2.0])
        with pytest.raises(SupportMismatch):
            gof_compare(h, curve, exclude_radius=1e-3)

    def test_estimator_consistency(self, curve):
        # z-scores at regular grid points stay O(1) as the sample grows
        probe_points = [0.37, 0.40, 0.43, 0.58, 0.64, 0.70, 0.78, 0.84, 0.90, 0.96]
        x, y = curve.abscissas, curve.densities
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))])
        for n_samples, seed in ((200_000, 35), (3_200_000, 36)):
            edges = np.linspace(1 / 3, 1.0, 201)
            h = histogram_measure("n", 2.0, 2, 1, n_samples, seed, edges)
            dens = h.density()
            widths = h.widths()
            for p in probe_points:
                i = min(int((p - 1 / 3) / widths[0]), dens.size - 1)
                lo_c, hi_c = np.interp([h.edges[i], h.edges[i + 1]], x, cum)
                expected = (hi_c - lo_c) / widths[i]
                sigma = np.sqrt(expected / (n_samples * widths[i]))
                assert abs(dens[i] - expected) < 5 * sigma


class TestQuditHistograms:
    def test_qutrit_density_stable_under_refinement(self):
        # no divergence: the maximal density is stable when bins double
        h1 = histogram_measure("n", 2.0, 3, 1, 200_000, 40, np.linspace(0.0, 2.0, 101))
        h2 = histogram_measure("n", 2.0, 3, 1, 400_000, 41, np.linspace(0.0, 2.0, 201))
        m1 = h1.density().max()
        m2 = h2.density().max()
        assert abs(m2 - m1) / m1 < 0.10
