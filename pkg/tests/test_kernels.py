"""Compiled kernels vs the pure-Python fallback: bit-for-bit agreement."""
import os
import subprocess
import sys

import numpy as np
import pytest

from ceilingwkb import _kernels
from ceilingwkb._kernels import fallback

RNG = np.random.default_rng(20240815)

needs_ext = pytest.mark.skipif(not _kernels.HAS_EXTENSION,
                               reason="compiled extension not available")


class TestBackendSelection:
    def test_bits_exported(self):
        assert (_kernels.TYPE_I_BIT, _kernels.TYPE_II_BIT,
                _kernels.TYPE_III_BIT, _kernels.BOUNCE_BIT) == (1, 2, 4, 8)

    def test_force_fallback_env(self):
        code = ("import ceilingwkb._kernels as k; "
                "print(k.HAS_EXTENSION)")
        env = dict(os.environ, CEILINGWKB_FORCE_FALLBACK="1")
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        assert out.stdout.strip() == "False"


@needs_ext
class TestAgreement:
    def test_shoot_position(self):
        from ceilingwkb._kernels import _core
        for _ in range(200):
            y = RNG.uniform(0.0, 8.0)
            x = RNG.uniform(0.0, 8.0)
            t = RNG.uniform(0.05, 5.0)
            a = _core.shoot_position_scalar(y, x, t)
            b = fallback.shoot_position_scalar(y, x, t)
            assert len(a) == len(b)
            for (ra, fa), (rb, fb) in zip(sorted(a), sorted(b)):
                assert ra == pytest.approx(rb, abs=1e-10)
                assert fa == fb

    def test_shoot_momentum(self):
        from ceilingwkb._kernels import _core
        for _ in range(200):
            p = RNG.uniform(-8.0, 4.0)
            x = RNG.uniform(0.0, 8.0)
            t = RNG.uniform(0.05, 5.0)
            a = _core.shoot_momentum_scalar(p, x, t)
            b = fallback.shoot_momentum_scalar(p, x, t)
            assert len(a) == len(b)
            for (ra, fa), (rb, fb) in zip(sorted(a), sorted(b)):
                assert ra == pytest.approx(rb, abs=1e-10)
                assert fa == fb

    def test_position_bitmask_grid(self):
        from ceilingwkb._kernels import _core
        n = 400
        ys = RNG.uniform(0.05, 6.0, n)
        xs = RNG.uniform(0.05, 6.0, n)
        ts = RNG.uniform(0.1, 5.0, n)
        a = _core.position_bitmask_grid(ys, xs, ts, n_scan=256)
        b = fallback.position_bitmask_grid(ys, xs, ts, n_scan=256)
        assert np.array_equal(np.asarray(a), np.asarray(b))

    def test_momentum_bitmask_grid(self):
        from ceilingwkb._kernels import _core
        n = 400
        ps = RNG.uniform(-6.0, 3.0, n)
        xs = RNG.uniform(0.05, 6.0, n)
        ts = RNG.uniform(0.1, 5.0, n)
        a = _core.momentum_bitmask_grid(ps, xs, ts, n_scan=256)
        b = fallback.momentum_bitmask_grid(ps, xs, ts, n_scan=256)
        assert np.array_equal(np.asarray(a), np.asarray(b))


class TestPropagateArrival:
    def test_free_flight(self):
        # p0 >= 0 never touches the ceiling: arrival is the free parabola
        arrival, bounced = _kernels.propagate_arrival(2.0, 1.0, 3.0)
        assert arrival == pytest.approx(3.0 ** 2 + 2.0 * 1.0 * 3.0 + 2.0)
        assert not bounced

    def test_reflected_flight(self):
        # y0 = 0, p0 = -1: immediate bounce never happens (b = -p0 = 1)
        y0, p0, t = 4.0, -3.0, 3.0
        arrival, bounced = _kernels.propagate_arrival(y0, p0, t)
        b = -p0 - np.sqrt(p0 * p0 - y0)
        assert bounced
        assert arrival == pytest.approx((t - b) ** 2 - 2.0 * (p0 + b) * (t - b))

    def test_array_broadcast(self):
        y0 = np.array([1.0, 4.0])
        p0 = np.array([0.5, -3.0])
        arrival, bounced = _kernels.propagate_arrival(y0, p0, 2.0)
        for i in range(2):
            ai, bi = _kernels.propagate_arrival(float(y0[i]), float(p0[i]), 2.0)
            assert arrival[i] == pytest.approx(ai)
            assert bool(bounced[i]) == bool(bi)
