import numpy as np
import pytest

import gausscomp as gc
from gausscomp.fixtures import X_MINUS_PRINTED, X_PLUS_PRINTED


class TestFixtureSets:
    def test_printed_plus_columns_are_unit_to_print_precision(self):
        norms = np.linalg.norm(X_PLUS_PRINTED, axis=0)
        assert np.max(np.abs(norms - 1.0)) < 1e-3

    def test_x_plus_is_renormalized_exactly(self, x_plus):
        assert x_plus.unit_flag
        assert np.max(np.abs(x_plus.norms - 1.0)) <= 1e-12

    def test_x_minus_keeps_printed_values(self, x_minus):
        np.testing.assert_array_equal(x_minus.vectors, X_MINUS_PRINTED)
        assert not x_minus.unit_flag

    def test_gram_entry_matches_printed_dot_product(self, x_plus):
        a = X_PLUS_PRINTED[:, 0] / np.linalg.norm(X_PLUS_PRINTED[:, 0])
        b = X_PLUS_PRINTED[:, 1] / np.linalg.norm(X_PLUS_PRINTED[:, 1])
        assert abs(x_plus.gram_unit[0, 1] - a @ b) < 1e-12

    def test_round_trip_through_text_format(self, tmp_path, x_plus):
        path = tmp_path / "xp.txt"
        gc.save_set(x_plus, path)
        back = gc.load_set(path)
        np.testing.assert_array_equal(back.vectors, x_plus.vectors)

    def test_unknown_fixture(self):
        with pytest.raises(gc.ValidationError):
            gc.fixture("x_zero")


class TestReferenceTables:
    def test_ids_and_shapes(self):
        ids = gc.table_ids()
        assert len(ids) == 10
        for tid in ids:
            table = gc.reference(tid)
            np.testing.assert_allclose(table.ts, np.arange(1, 10) * 0.1)
            for name, col in table.columns.items():
                assert col.shape == (9,)
                assert table.tolerances[name] > 0

    def test_spot_values(self):
        t1 = gc.reference("table1")
        assert t1.columns["psi_direct"][0] == 1.6787
        assert t1.columns["dpsi_standard"][4] == -0.1610
        t4 = gc.reference("table4")
        assert t4.columns["lim"][4] == -0.3585
        t7 = gc.reference("table7")
        assert t7.columns["psi_direct"][0] == 3.1846
        assert t7.columns["psi_direct_adj"][0] == 1.6597
        t10 = gc.reference("table10")
        assert t10.c3s == 1.0 and t10.beta == 10.0 and t10.c3 == 0.1

    def test_adjusted_columns_are_consistent_with_the_transform(self):
        # The printed value/adjusted pairs should satisfy the adjusted-value
        # map to print precision.
        for tid in ("table7", "table8", "table9", "table10"):
            table = gc.reference(tid)
            for base in ("psi_int_standard", "psi_int_computed", "psi_direct"):
                vals = table.columns[base]
                adj = table.columns[base + "_adj"]
                recomputed = [
                    gc.adjusted_value(v, table.beta, table.c3, 5) for v in vals
                ]
                np.testing.assert_allclose(adj, recomputed, atol=1.5e-4)

    def test_sample_counts_follow_the_source_runs(self):
        assert gc.reference("table1").samples == 30000
        assert gc.reference("table3").samples == 30000
        assert gc.reference("table5").samples == 50000
        assert gc.reference("table9").samples == 50000

    def test_unknown_table(self):
        with pytest.raises(gc.ValidationError):
            gc.reference("table99")
