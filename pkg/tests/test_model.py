import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gausscomp as gc
from conftest import fuzzed_sets


class TestBuildSet:
    def test_identity_matrix(self):
        vset = gc.build_set(np.eye(2))
        assert vset.l == 2 and vset.n == 2
        assert vset.unit_flag
        np.testing.assert_array_equal(vset.gram_unit, np.eye(2))

    def test_x_plus_unit_and_gram_range(self, x_plus):
        assert x_plus.unit_flag
        off = x_plus.gram_unit[~np.eye(10, dtype=bool)]
        assert np.all(off > -1.0) and np.all(off < 1.0)

    def test_x_minus_norm_from_printed_entries(self, x_minus):
        assert not x_minus.unit_flag
        col = gc.fixtures.X_MINUS_PRINTED[:, 0]
        expected = np.sqrt(np.sum(col**2))
        assert x_minus.norms[0] == expected

    def test_zero_column_rejected(self):
        m = np.eye(3)
        m[:, 1] = 0.0
        with pytest.raises(gc.DegenerateDirectionError):
            gc.build_set(m)

    def test_non_finite_rejected(self):
        m = np.eye(2)
        m[0, 0] = np.nan
        with pytest.raises(gc.ValidationError):
            gc.build_set(m)
        with pytest.raises(gc.ValidationError):
            gc.build_set(np.ones((2, 2)) * np.inf)

    def test_bad_shapes_rejected(self):
        with pytest.raises(gc.ValidationError):
            gc.build_set(np.ones(3))
        with pytest.raises(gc.ValidationError):
            gc.build_set(np.ones((0, 2)))

    def test_gram_psd_and_kappa_nonnegative_on_fuzzed_sets(self):
        for vset in fuzzed_sets():
            eigs = np.linalg.eigvalsh(vset.gram_unit)
            assert eigs.min() > -1e-10
            assert vset.kappa.min() >= 0.0
            assert np.all(np.diag(vset.kappa) == 0.0)
            np.testing.assert_array_equal(vset.kappa, vset.kappa.T)

    @given(st.integers(2, 6), st.integers(1, 7), st.integers(0, 2**31 - 1))
    @settings(max_examples=40, deadline=None)
    def test_invariants_hold_for_random_matrices(self, n, l, seed):
        rng = np.random.default_rng(seed)
        vset = gc.build_set(rng.normal(size=(n, l)) + 0.1)
        assert np.all(vset.norms > 0)
        assert np.all(np.abs(vset.gram_unit) <= 1.0)
        assert np.all(np.diag(vset.gram_unit) == 1.0)
        assert vset.kappa.min() >= 0.0


class TestSetFiles:
    def test_round_trip_is_exact(self, tmp_path, x_minus):
        path = tmp_path / "set.txt"
        gc.save_set(x_minus, path, header="round trip")
        back = gc.load_set(path)
        np.testing.assert_array_equal(back.vectors, x_minus.vectors)
        np.testing.assert_array_equal(back.norms, x_minus.norms)
        np.testing.assert_array_equal(back.gram_unit, x_minus.gram_unit)

    def test_comments_and_garbage(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("# a comment\n1 0\n0 1\n")
        assert gc.load_set(path).unit_flag
        path.write_text("1 zebra\n0 1\n")
        with pytest.raises(gc.ValidationError):
            gc.load_set(path)


def _params(vset, variant=gc.Variant.SPHERICAL, beta=0.5, s=1, c3=None, m=2):
    return gc.make_params(vset, variant, m=m, beta=beta, s=s, c3=c3)


def _draw(rng, l, m):
    return gc.ReplicationDraw(
        u1=rng.normal(size=(l, m)),
        u2=rng.normal(size=m),
        u3=rng.normal(size=l),
        u4=float(rng.normal()),
    )


class TestInterpolationState:
    def test_single_element_softmax(self, one_vector_set):
        params = _params(one_vector_set, m=5)
        rng = np.random.default_rng(0)
        for t in (0.0, 0.3, 1.0):
            st_ = gc.interpolation_state(_draw(rng, 1, 5), one_vector_set, params, t)
            np.testing.assert_array_equal(st_.w, [1.0])

    def test_t_zero_kills_u1(self, x_plus):
        params = _params(x_plus, m=5)
        rng = np.random.default_rng(1)
        draw = _draw(rng, 10, 5)
        st_ = gc.interpolation_state(draw, x_plus, params, 0.0)
        assert np.all(st_.B == st_.B[0])
        assert abs(st_.B[0] - np.linalg.norm(draw.u2)) < 1e-12

    def test_logz_matches_naive_summation_at_low_beta(self):
        # Direct summation oracle: safe because beta is small.
        rng = np.random.default_rng(2)
        vset = gc.build_set(rng.normal(size=(2, 2)))
        params = _params(vset, gc.Variant.GENERAL, beta=0.5)
        for k in range(25):
            draw = _draw(rng, 2, 2)
            st_ = gc.interpolation_state(draw, vset, params, 0.4)
            naive = np.log(np.sum(np.exp(st_.logA)))
            assert abs(st_.logZ - naive) < 1e-12

    def test_weights_sum_to_one_and_shift_invariant(self, x_plus):
        params = _params(x_plus, beta=3.0, m=5)
        rng = np.random.default_rng(3)
        st_ = gc.interpolation_state(_draw(rng, 10, 5), x_plus, params, 0.6)
        assert abs(st_.w.sum() - 1.0) < 1e-12
        shifted = st_.logA + 123.456
        w2 = np.exp(shifted - shifted.max())
        w2 /= w2.sum()
        np.testing.assert_allclose(st_.w, w2, atol=1e-12)

    def test_exponent_at_t1_matches_raw_matrix_recomputation(self, x_plus):
        # Rebuild G and h from the documented stream layout and recompute the
        # t=1 exponent without the projected shortcut, 100 draws.
        params = gc.make_params(x_plus, gc.Variant.GENERAL, m=5, beta=2.0, s=-1)
        plan = gc.SeedPlan(99, 100)
        batch = gc.generate_draws(plan, x_plus, 5)
        directions = x_plus.vectors / x_plus.norms
        for r in range(plan.replications):
            z = gc.replication_stream(plan, r).normals(5 * 5 + 5 + 5 + 1)
            G = z[:25].reshape(5, 5)
            u4 = z[-1]
            st_ = gc.interpolation_state(batch.draw(r), x_plus, params, 1.0)
            expected = params.betas * (params.s * np.linalg.norm(G @ directions, axis=0) + u4)
            np.testing.assert_allclose(st_.logA, expected, atol=1e-12)

    def test_domain_error(self, x_plus):
        params = _params(x_plus, m=5)
        with pytest.raises(gc.ValidationError):
            gc.interpolation_state(_draw(np.random.default_rng(0), 10, 5), x_plus, params, 1.2)


class TestMixedOverlap:
    def test_diagonal_is_one(self):
        rng = np.random.default_rng(5)
        draw = _draw(rng, 4, 3)
        for i in range(4):
            assert abs(gc.mixed_overlap(draw, 0.37, i, i) - 1.0) < 1e-12

    def test_t_zero_all_pairs_coincide(self):
        draw = _draw(np.random.default_rng(6), 4, 3)
        for i in range(4):
            for p in range(4):
                assert gc.mixed_overlap(draw, 0.0, i, p) == 1.0

    def test_cauchy_schwarz_bound_over_many_draws(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            draw = _draw(rng, 3, 2)
            t = float(rng.uniform())
            assert abs(gc.mixed_overlap(draw, t, 0, 2)) <= 1.0

    def test_zero_norm_raises_skip_signal(self):
        draw = gc.ReplicationDraw(
            u1=np.zeros((2, 3)), u2=np.zeros(3), u3=np.zeros(2), u4=0.0
        )
        with pytest.raises(gc.ReplicationSkip):
            gc.mixed_overlap(draw, 0.5, 0, 1)


class TestMakeParams:
    def test_spherical_requires_unit_set(self, x_minus):
        with pytest.raises(gc.VariantMismatchError):
            gc.make_params(x_minus, gc.Variant.SPHERICAL, m=5, beta=1.0, s=1)

    def test_betas_scale_with_norms(self, x_minus):
        params = gc.make_params(x_minus, gc.Variant.GENERAL, m=5, beta=3.0, s=1)
        np.testing.assert_array_equal(params.betas, 3.0 * x_minus.norms)

    def test_validation(self, x_plus):
        with pytest.raises(gc.ValidationError):
            gc.make_params(x_plus, gc.Variant.SPHERICAL, m=5, beta=-1.0, s=1)
        with pytest.raises(gc.ValidationError):
            gc.make_params(x_plus, gc.Variant.SPHERICAL, m=5, beta=1.0, s=0)
        with pytest.raises(gc.ValidationError):
            gc.make_params(x_plus, gc.Variant.LIFTED, m=5, beta=1.0, s=1)  # no c3
        with pytest.raises(gc.ValidationError):
            gc.make_params(x_plus, gc.Variant.SPHERICAL, m=5, beta=1.0, s=1, c3=0.1)

    def test_check_set_catches_mismatch(self, x_plus, x_minus):
        params = gc.make_params(x_plus, gc.Variant.SPHERICAL, m=5, beta=1.0, s=1)
        with pytest.raises(gc.VariantMismatchError):
            params.check_set(x_minus)
