import numpy as np
import pytest

import gausscomp as gc
from gausscomp import kernels

from conftest import normalized
from oracles import brute_force_draw


def _have_numba():
    try:
        import numba  # noqa: F401
        return True
    except ImportError:
        return False


def _setups():
    rng = np.random.default_rng(101)
    vset_g = gc.build_set(rng.normal(size=(3, 4)))
    vset_u = normalized(vset_g)
    return [
        (vset_u, gc.make_params(vset_u, gc.Variant.SPHERICAL, m=4, beta=1.5, s=1)),
        (vset_u, gc.make_params(vset_u, gc.Variant.SPHERICAL, m=4, beta=1.5, s=-1)),
        (vset_g, gc.make_params(vset_g, gc.Variant.GENERAL, m=4, beta=0.8, s=1)),
        (vset_g, gc.make_params(vset_g, gc.Variant.GENERAL, m=4, beta=0.8, s=-1)),
        (vset_g, gc.make_params(vset_g, gc.Variant.LIFTED, m=4, beta=0.8, s=1, c3=0.1)),
        (vset_g, gc.make_params(vset_g, gc.Variant.LIFTED, m=4, beta=0.8, s=-1, c3=2.0)),
    ]


class TestAgainstBruteForce:
    def test_all_functionals_match_plain_python(self):
        # Independent oracle: direct summation, explicit loops, no shifts.
        plan = gc.SeedPlan(55, 50)
        for vset, params in _setups():
            batch = gc.generate_draws(plan, vset, params.m)
            for t in (0.15, 0.5, 0.85):
                out, bad = kernels.evaluate(batch, vset, params, t, kernels.COLUMNS)
                assert not bad.any()
                for r in range(plan.replications):
                    ref = brute_force_draw(
                        batch.u1[r], batch.u2[r], batch.u3[r], float(batch.u4[r]),
                        t, params.betas, vset.norms, vset.gram_unit,
                        params.beta, params.s, params.c3 or 0.0,
                        params.variant.code, vset.n,
                    )
                    got = [out[name][r] for name in kernels.COLUMNS]
                    np.testing.assert_allclose(got, ref, rtol=1e-10, atol=1e-12)


class TestFiniteDifferenceOracle:
    def test_standard_derivative_matches_per_draw_finite_differences(self):
        # The per-draw functional is smooth in t wherever B > 0, so a central
        # difference of the psi column is an independent oracle for the
        # standard-route column, draw by draw.
        plan = gc.SeedPlan(66, 40)
        h = 1e-6
        for vset, params in _setups():
            batch = gc.generate_draws(plan, vset, params.m)
            for t in (0.3, 0.7):
                up, _ = kernels.evaluate(batch, vset, params, t + h, ("psi",))
                dn, _ = kernels.evaluate(batch, vset, params, t - h, ("psi",))
                mid, _ = kernels.evaluate(batch, vset, params, t, ("dpsi_standard",))
                fd = (up["psi"] - dn["psi"]) / (2 * h)
                np.testing.assert_allclose(mid["dpsi_standard"], fd, rtol=1e-4, atol=1e-7)


class TestExactSigns:
    def test_computed_route_sign_is_exact_per_draw(self):
        plan = gc.SeedPlan(77, 2000)
        for vset, params in _setups():
            batch = gc.generate_draws(plan, vset, params.m)
            for t in (0.0, 0.4, 1.0):
                out, _ = kernels.evaluate(batch, vset, params, t, ("dpsi_computed",))
                vals = out["dpsi_computed"]
                c3 = params.c3
                if params.variant is gc.Variant.LIFTED and (c3 > 1 or c3 < 0):
                    assert np.all(vals >= 0.0)
                else:
                    assert np.all(vals <= 0.0)

    def test_lifted_boundary_exponent_is_identically_zero(self, x_plus):
        params = gc.make_params(x_plus, gc.Variant.LIFTED, m=5, beta=0.5, s=1, c3=1.0)
        batch = gc.generate_draws(gc.SeedPlan(3, 500), x_plus, 5)
        out, _ = kernels.evaluate(batch, x_plus, params, 0.5, ("dpsi_computed",))
        np.testing.assert_array_equal(out["dpsi_computed"], 0.0)

    def test_single_element_set_is_identically_zero(self, one_vector_set):
        params = gc.make_params(one_vector_set, gc.Variant.SPHERICAL, m=5, beta=2.0, s=1)
        batch = gc.generate_draws(gc.SeedPlan(4, 500), one_vector_set, 5)
        out, _ = kernels.evaluate(batch, one_vector_set, params, 0.5, ("dpsi_computed",))
        np.testing.assert_array_equal(out["dpsi_computed"], 0.0)


class TestZeroNormDraws:
    def test_zero_u2_at_t0_is_flagged_and_nan(self, x_plus):
        params = gc.make_params(x_plus, gc.Variant.SPHERICAL, m=5, beta=1.0, s=1)
        rng = np.random.default_rng(8)
        batch = gc.DrawBatch(
            u1=rng.normal(size=(3, 10, 5)),
            u2=np.vstack([rng.normal(size=5), np.zeros(5), rng.normal(size=5)]),
            u3=rng.normal(size=(3, 10)),
            u4=rng.normal(size=3),
        )
        out, bad = kernels.evaluate(batch, x_plus, params, 0.0, ("psi", "dpsi_computed"))
        np.testing.assert_array_equal(bad, [False, True, False])
        assert np.isnan(out["psi"][1]) and np.isfinite(out["psi"][0])

    def test_skip_budget_enforced(self, x_plus):
        params = gc.make_params(x_plus, gc.Variant.SPHERICAL, m=5, beta=1.0, s=1)
        rng = np.random.default_rng(9)
        batch = gc.DrawBatch(
            u1=rng.normal(size=(4, 10, 5)),
            u2=np.vstack([np.zeros(5)] * 2 + [rng.normal(size=(2, 5))]),
            u3=rng.normal(size=(4, 10)),
            u4=rng.normal(size=4),
        )
        with pytest.raises(gc.SkipBudgetError):
            gc.evaluate_grid(x_plus, params, gc.SeedPlan(1, 4), [0.0], ("psi",), draws=batch)


@pytest.mark.skipif(not _have_numba(), reason="numba not installed")
class TestBackends:
    def test_backends_agree(self):
        plan = gc.SeedPlan(88, 3000)
        for vset, params in _setups():
            batch = gc.generate_draws(plan, vset, params.m)
            prev = kernels.active_backend()
            try:
                kernels.set_backend("numpy")
                ref, _ = kernels.evaluate(batch, vset, params, 0.55, kernels.COLUMNS)
                kernels.set_backend("numba")
                acc, _ = kernels.evaluate(batch, vset, params, 0.55, kernels.COLUMNS)
            finally:
                kernels.set_backend(prev)
            for name in kernels.COLUMNS:
                np.testing.assert_allclose(acc[name], ref[name], rtol=1e-9, atol=1e-12)

    def test_thread_count_does_not_change_bits(self, x_plus):
        import numba

        prev = kernels.active_backend()
        try:
            kernels.set_backend("numba")
            params = gc.make_params(x_plus, gc.Variant.SPHERICAL, m=5, beta=3.0, s=1)
            batch = gc.generate_draws(gc.SeedPlan(12, 5000), x_plus, 5)
            numba.set_num_threads(1)
            one, _ = kernels.evaluate(batch, x_plus, params, 0.5, kernels.COLUMNS)
            numba.set_num_threads(min(4, numba.config.NUMBA_NUM_THREADS))
            four, _ = kernels.evaluate(batch, x_plus, params, 0.5, kernels.COLUMNS)
        finally:
            kernels.set_backend(prev)
        for name in kernels.COLUMNS:
            np.testing.assert_array_equal(one[name], four[name])

    def test_unknown_backend_rejected(self):
        with pytest.raises(gc.ValidationError):
            kernels.set_backend("fortran")
