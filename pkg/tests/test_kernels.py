"""Kernel correctness and compiled/pure parity."""

import numpy as np
import pytest

from probdistort import _kernels_py

try:
    from probdistort import _ckernels
except ImportError:  # pragma: no cover - extension did not build
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels unavailable")


def _random_case(rng, n, with_zeros=False):
    w = rng.exponential(size=n) + 0.1
    lw = np.log(w / w.sum())
    p = rng.exponential(size=n)
    if with_zeros and n > 2:
        p[rng.choice(n, size=n // 3, replace=False)] = 0.0
    p /= p.sum()
    return lw, p


class TestPowerApply:
    def test_matches_direct_formula(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            lw, p = _random_case(rng, 5)
            power = rng.uniform(0.2, 4.0)
            out = _kernels_py.power_apply(lw, power, p)
            direct = np.exp(lw) * p**power
            np.testing.assert_allclose(out, direct / direct.sum(), atol=1e-14)

    def test_zeros_stay_zero(self):
        rng = np.random.default_rng(1)
        lw, p = _random_case(rng, 6, with_zeros=True)
        out = _kernels_py.power_apply(lw, 2.5, p)
        np.testing.assert_array_equal(out == 0.0, p == 0.0)
        assert out.sum() == pytest.approx(1.0, abs=1e-12)

    def test_extreme_power_stays_finite(self):
        lw = np.log(np.array([0.5, 0.3, 0.2]))
        p = np.array([0.9, 0.05, 0.05])
        out = _kernels_py.power_apply(lw, 50.0, p)
        assert np.all(np.isfinite(out))
        assert out.sum() == pytest.approx(1.0, abs=1e-12)


class TestPowerIterate:
    def test_matches_repeated_application(self):
        rng = np.random.default_rng(2)
        for power in (0.3, 0.9, 1.0, 1.7, 3.0):
            lw, p = _random_case(rng, 4)
            rolled = p.copy()
            for n in range(1, 31):
                rolled = _kernels_py.power_apply(lw, power, rolled)
                closed = _kernels_py.power_iterate(lw, power, p, n)
                np.testing.assert_allclose(closed, rolled, atol=1e-9)

    def test_zero_steps_is_input(self):
        rng = np.random.default_rng(3)
        lw, p = _random_case(rng, 4)
        np.testing.assert_array_equal(_kernels_py.power_iterate(lw, 2.0, p, 0), p)


class TestMirrorAscent:
    def test_reaches_stationary_point(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            u = rng.normal(size=n)
            scale = rng.uniform(0.1, 5.0)
            power = rng.uniform(0.2, 3.0)
            prior = rng.exponential(size=n)
            prior /= prior.sum()
            q, _, residual = _kernels_py.mirror_ascent(u, scale, power, prior, 500, 1e-10)
            assert residual < 1e-10
            target = np.exp(scale * u) * prior**power
            np.testing.assert_allclose(q, target / target.sum(), atol=1e-9)


@needs_ext
class TestCompiledParity:
    """The compiled kernels must agree with the pure path to float accuracy."""

    def test_power_apply(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            lw, p = _random_case(rng, n, with_zeros=bool(rng.integers(2)))
            power = rng.uniform(0.1, 10.0)
            np.testing.assert_allclose(
                _ckernels.power_apply(lw, power, p),
                _kernels_py.power_apply(lw, power, p),
                atol=1e-14,
            )

    def test_power_iterate(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            n = int(rng.integers(2, 7))
            lw, p = _random_case(rng, n)
            power = rng.uniform(0.3, 3.0)
            steps = int(rng.integers(0, 25))
            np.testing.assert_allclose(
                _ckernels.power_iterate(lw, power, p, steps),
                _kernels_py.power_iterate(lw, power, p, steps),
                atol=1e-13,
            )

    def test_mirror_ascent(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            u = rng.normal(size=n)
            scale = rng.uniform(0.1, 5.0)
            power = rng.uniform(0.2, 3.0)
            prior = rng.exponential(size=n)
            prior /= prior.sum()
            qc, _, _ = _ckernels.mirror_ascent(u, scale, power, prior, 500, 1e-10)
            qp, _, _ = _kernels_py.mirror_ascent(u, scale, power, prior, 500, 1e-10)
            np.testing.assert_allclose(qc, qp, atol=1e-12)

    def test_read_only_inputs_accepted(self):
        lw = np.log(np.array([0.5, 0.5]))
        p = np.array([0.4, 0.6])
        lw.flags.writeable = False
        p.flags.writeable = False
        out = _ckernels.power_apply(lw, 2.0, p)
        assert out.sum() == pytest.approx(1.0, abs=1e-12)
