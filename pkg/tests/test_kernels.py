import numpy as np
import pytest

from taaf import catalog, kernels
from taaf.engine import TaafNode, TaafParams, taaf_eval

GRID = np.array([-5.0 + 10.0 * (k / 200.0) for k in range(201)])

BACKENDS = kernels.available_backends()


def scalar_reference(fid, grid):
    fv, fd = catalog.bind(fid)
    return (np.array([fv(z) for z in grid]), np.array([fd(z) for z in grid]))


class TestBackendSelection:
    def test_python_backend_always_available(self):
        assert "python" in BACKENDS

    def test_default_prefers_compiled(self):
        import os

        if os.environ.get("TAAF_KERNELS"):
            pytest.skip("backend forced by the environment")
        if "compiled" in BACKENDS:
            assert kernels.BACKEND == "compiled"

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            kernels.eval_values("relu", None, GRID, backend="gpu")


@pytest.mark.parametrize("backend", BACKENDS)
class TestAgainstScalarReference:
    def test_values_and_derivs_match(self, backend):
        for fid in catalog.ids():
            ref_v, ref_d = scalar_reference(fid, GRID)
            got_v = kernels.eval_values(fid, None, GRID, backend=backend)
            got_d = kernels.eval_derivs(fid, None, GRID, backend=backend)
            if backend == "compiled":
                # mirrors the scalar code op-for-op: bitwise identical
                assert np.array_equal(got_v, ref_v), fid
                assert np.array_equal(got_d, ref_d), fid
            else:
                # numpy's vectorized transcendentals may differ by a ulp,
                # which cancellation (e.g. 1 - tanh^2) amplifies; hence
                # the small absolute floor
                np.testing.assert_allclose(got_v, ref_v, rtol=5e-14, atol=1e-15,
                                           err_msg=fid)
                np.testing.assert_allclose(got_d, ref_d, rtol=5e-14, atol=1e-15,
                                           err_msg=fid)

    def test_fixed_params_forwarded(self, backend):
        got = kernels.eval_values("lrelu", {"slope": 0.2}, GRID, backend=backend)
        ref = np.array([catalog.value("lrelu", {"slope": 0.2}, z) for z in GRID])
        np.testing.assert_allclose(got, ref, rtol=1e-15, atol=0)

    def test_taaf_buffer_matches_engine(self, backend):
        node = TaafNode(TaafParams(2.0, 3.0, 0.5, -1.0), "logistic_sigmoid")
        got = kernels.taaf_values(2.0, 3.0, 0.5, -1.0, "logistic_sigmoid", None,
                                  GRID, backend=backend)
        ref = np.array([taaf_eval(node, z) for z in GRID])
        np.testing.assert_allclose(got, ref, rtol=1e-15, atol=0)

    def test_checksum_deterministic(self, backend):
        buf = np.random.default_rng(5).uniform(-4, 4, 10_000)
        c1 = kernels.checksum("gelu_erf", None, buf, backend=backend)
        c2 = kernels.checksum("gelu_erf", None, buf, backend=backend)
        assert c1 == c2

    def test_saturating_inputs_stay_finite(self, backend):
        big = np.array([-1000.0, -750.0, 750.0, 1000.0])
        for fid in catalog.ids():
            out = kernels.eval_values(fid, None, big, backend=backend)
            assert np.all(np.isfinite(out)), fid


class TestExactMirroring:
    def test_cross_backend_checksums_close(self):
        if len(BACKENDS) < 2:
            pytest.skip("single backend")
        buf = np.random.default_rng(7).uniform(-4, 4, 100_000)
        sums = [kernels.checksum("silu", None, buf, backend=b) for b in BACKENDS]
        assert abs(sums[0] - sums[1]) <= 1e-10 * max(1.0, abs(sums[0]))
