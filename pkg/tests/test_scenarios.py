import csv
import io
import json

import numpy as np
import pytest

from cheshire_mzi.scenarios import (
    CSV_COLUMNS,
    ExperimentConfig,
    Method,
    SweepTable,
    flip_check,
    measure_one,
    run_delayed_choice,
    run_grin_snarl,
    run_original_cheshire,
    sweep,
)
from cheshire_mzi.weak import weak_value_analytic
from cheshire_mzi.optics import postselector, prepare_original
from cheshire_mzi.operators import SIGMA_X

import oracles

TAGS = ("xL", "xR", "zL", "zR")


def row_values(row):
    return np.array(row.values(), dtype=complex)


class TestOriginal:
    def test_analytic(self):
        rep = run_original_cheshire()
        got = [rep[t] for t in ("piL", "piR", "xL", "xR")]
        np.testing.assert_allclose(got, [1, 0, 0, 1], atol=1e-15)

    def test_meter(self):
        rep = run_original_cheshire(Method.METER_EXACT, g=1e-3)
        for tag, want in zip(("piL", "piR", "xL", "xR"), (1, 0, 0, 1)):
            assert abs(rep[tag] - want) < 5e-3

    def test_completeness(self):
        rep = run_original_cheshire()
        assert rep["piL"] + rep["piR"] == 1


class TestGrinSnarl:
    def test_analytic(self):
        rep = run_grin_snarl()
        np.testing.assert_allclose([rep[t] for t in TAGS], [0, 1, 1, 0], atol=1e-15)

    def test_arm_sum_is_total_sigma_x(self):
        rep = run_grin_snarl()
        total = weak_value_analytic(SIGMA_X, prepare_original(), postselector("original")).value
        assert rep["xL"] + rep["xR"] == pytest.approx(total, abs=1e-15)

    def test_meter(self):
        rep = run_grin_snarl(Method.METER_EXACT, g=1e-3)
        for tag, want in zip(TAGS, (0, 1, 1, 0)):
            assert abs(rep[tag] - want) < 5e-3


class TestDelayedChoice:
    def test_theta_pi(self):
        row = run_delayed_choice(ExperimentConfig(np.pi, 0.0))
        np.testing.assert_allclose(row_values(row), [1, 0, 0, -1], atol=1e-15)
        assert row.prob == pytest.approx(0.25)

    def test_zero_setting(self):
        row = run_delayed_choice(ExperimentConfig(0.0, 0.0))
        np.testing.assert_allclose(row_values(row), [0, 1, 1, 0], atol=1e-15)

    def test_half_pi_both(self):
        # D = (1 + i)/sqrt2 in all four closed forms
        expected = [(1 - 1j) / 2, (1 + 1j) / 2, (1 - 1j) / 2, -(1 + 1j) / 2]
        formula = [oracles.formula_delayed(t, np.pi / 2, np.pi / 2) for t in TAGS]
        pre, post = oracles.delayed_pair(np.pi / 2, np.pi / 2)
        matrix = [oracles.quotient(oracles.RAW_OBSERVABLES[t], pre, post) for t in TAGS]
        np.testing.assert_allclose(formula, expected, atol=1e-15)
        np.testing.assert_allclose(matrix, expected, atol=1e-15)
        row = run_delayed_choice(ExperimentConfig(np.pi / 2, np.pi / 2))
        np.testing.assert_allclose(row_values(row), expected, atol=1e-14)

    def test_pole_flagged(self):
        row = run_delayed_choice(ExperimentConfig(np.pi / 2, np.pi))
        assert row.diverged and row.flag == "diverged"
        assert row.values() == (None, None, None, None)
        assert np.isfinite(row.prob)

    def test_meter_row(self):
        row = run_delayed_choice(ExperimentConfig(np.pi, 0.3, g=1e-3, method="meter"))
        assert abs(row.zR + 1) < 5e-3
        assert row.method is Method.METER_EXACT

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(g=0.5)
        with pytest.raises(ValueError):
            ExperimentConfig(theta=float("inf"))


class TestFlipCheck:
    def test_default(self):
        rep = flip_check()
        assert rep.flipped
        assert rep.arms_a == {"x": "R", "z": "L"}
        assert rep.arms_b == {"x": "L", "z": "R"}
        assert rep.sigma_z_right_b == pytest.approx(-1, abs=1e-15)

    def test_degenerate(self):
        assert not flip_check((0.0, 0.0), (0.0, 0.0))

    def test_meter(self):
        assert flip_check(method="meter", g=1e-3)

    def test_sampled(self):
        rep = flip_check(method="sample", g=1e-2, shots=10**6, seed=17)
        assert rep.flipped and rep.estimates_consistent


class TestSweep:
    def test_three_by_three(self):
        table = sweep([0, np.pi / 2, np.pi], [0, np.pi / 2, np.pi])
        assert len(table) == 9
        row = next(r for r in table if r.theta == np.pi and r.phi == 0)
        np.testing.assert_allclose(row_values(row), [1, 0, 0, -1], atol=1e-15)
        assert [r.diverged for r in table].count(True) == 1

    def test_single_point(self):
        (row,) = sweep([0.0], [0.0])
        np.testing.assert_allclose(row_values(row), [0, 1, 1, 0], atol=1e-15)

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            sweep([], [0.0])

    def test_full_grid_dual_oracle(self):
        grid = np.linspace(0, 2 * np.pi, 13)
        table = sweep(grid, grid)
        assert len(table) == 169
        for row in table:
            if row.diverged:
                continue
            pre, post = oracles.delayed_pair(row.theta, row.phi)
            for tag, v in zip(TAGS, row.values()):
                assert abs(v - oracles.formula_delayed(tag, row.theta, row.phi)) < 1e-12
                assert abs(v - oracles.quotient(oracles.RAW_OBSERVABLES[tag], pre, post)) < 1e-12

    def test_row_invariants(self):
        rng = np.random.default_rng(5)
        table = sweep(rng.uniform(0, 4 * np.pi, 9), rng.uniform(0, 2 * np.pi, 9))
        for row in table:
            c, s, e = np.cos(row.theta / 2), np.sin(row.theta / 2), np.exp(1j * row.phi)
            D = c + s * e
            assert row.prob == pytest.approx(abs(D) ** 2 / 4, abs=1e-15)
            assert 0 <= row.prob <= 1
            assert row.zL + row.zR == pytest.approx((c - e * s) / D, abs=1e-12)
            assert row.xL + row.xR == pytest.approx((s + c * e) / D, abs=1e-12)

    def test_periodicity(self):
        a = sweep([0.3, 2.1], [0.7, 5.0])
        b = sweep([0.3 + 4 * np.pi, 2.1 + 4 * np.pi], [0.7 + 2 * np.pi, 5.0 + 2 * np.pi])
        for ra, rb in zip(a, b):
            np.testing.assert_allclose(row_values(ra), row_values(rb), atol=1e-12)

    def test_parallel_order_and_determinism(self):
        grid = np.linspace(0, np.pi, 4)
        serial = sweep(grid, grid, "sample", g=1e-2, shots=2000, seed=3)
        threaded = sweep(grid, grid, "sample", g=1e-2, shots=2000, seed=3, max_workers=4)
        assert serial.to_csv() == threaded.to_csv()

    def test_sampled_rows_converge(self):
        table = sweep([0.0, np.pi, 2.0], [0.0, 1.0], "sample", g=1e-2, shots=10**5, seed=8)
        for row in table:
            for tag, v in zip(TAGS, row.values()):
                ref = oracles.formula_delayed(tag, row.theta, row.phi)
                assert abs(v - ref) < 4 * row.stderr[tag]


class TestSerialization:
    def test_csv_columns_and_nulls(self):
        table = sweep([np.pi / 2], [0.0, np.pi])
        rows = list(csv.reader(io.StringIO(table.to_csv())))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert rows[2][-1] == "diverged" and rows[2][2] == ""
        assert float(rows[1][2]) == pytest.approx(0.5)

    def test_json_validates(self):
        jsonschema = pytest.importorskip("jsonschema")
        from importlib.resources import files

        schema = json.loads(files("cheshire_mzi").joinpath("schemas/sweep_row.schema.json").read_text())
        table = sweep([np.pi / 2, np.pi], [0.0, np.pi])
        records = json.loads(table.to_json())
        for rec in records:
            jsonschema.validate(rec, schema)
            assert list(rec) == list(CSV_COLUMNS)

    def test_table_is_list(self):
        assert isinstance(sweep([0.0], [0.0]), SweepTable)


def test_measure_one_original_pair():
    res = measure_one("piL", ExperimentConfig(), "original", "original")
    assert res.value == pytest.approx(1)
    assert res.prob == pytest.approx(0.25)
