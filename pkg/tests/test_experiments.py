import math

import numpy as np
import pytest

from probe_resonance.analytic3 import ThreeLevelParams, p_numeric3
from probe_resonance.errors import UnreachableTargetError, ValidationError
from probe_resonance.experiments import (
    ALPHA_STEP,
    FIG5_D,
    FIG5_E_PRIME,
    P_TOLERANCE,
    TABLE1_D,
    alpha_search,
    figure_dataset,
    success_probability,
    table1,
    write_figure,
    write_table1,
)


@pytest.fixture(scope="module")
def table():
    return table1()


class TestAlphaSearch:
    def test_large_overlap_needs_no_coupling_reduction(self):
        r = alpha_search(0.4, 20.0, 0.99)
        assert r.alpha == 0.0
        assert r.t_run == pytest.approx(math.pi / 0.8)

    def test_lower_target_at_d01(self):
        r = alpha_search(0.1, 20.0, 0.94)
        assert r.alpha == 0.0
        assert abs(r.t_run - 15) <= 1

    @pytest.mark.parametrize("d", [0.01, 0.05, 0.2])
    @pytest.mark.parametrize("target", [0.9, 0.99])
    def test_result_is_smallest_passing_alpha(self, d, target):
        r = alpha_search(d, 20.0, target)
        assert r.alpha >= 0
        assert r.achieved_p >= target - P_TOLERANCE
        assert r.achieved_p == pytest.approx(success_probability(d, 20.0, r.alpha), abs=1e-15)
        if r.alpha > 0:
            below = success_probability(d, 20.0, round(r.alpha - ALPHA_STEP, 10))
            assert below < target - P_TOLERANCE

    def test_strict_mode(self):
        r = alpha_search(0.2, 20.0, 0.99, tolerance=0.0)
        assert r.achieved_p >= 0.99

    def test_envelope_mode_not_worse(self):
        fixed = alpha_search(0.05, 20.0, 0.99)
        env = alpha_search(0.05, 20.0, 0.99, max_over_t=True)
        assert env.mode == "envelope"
        assert env.alpha <= fixed.alpha

    def test_matches_three_level_oracle(self):
        p = ThreeLevelParams.from_alpha(0.05, 20.0, 0.48)
        assert success_probability(0.05, 20.0, 0.48) == pytest.approx(p_numeric3(p, p.runtime()), abs=1e-12)

    def test_unreachable(self):
        with pytest.raises(UnreachableTargetError) as err:
            # excited manifold degenerate with the hub
            alpha_search(0.3, 0.5, 0.9)
        assert 0 <= err.value.best_p < 0.9

    @pytest.mark.parametrize("d,target", [(0.0, 0.9), (1.0, 0.9), (0.1, 1.0), (0.1, 0.0)])
    def test_invalid(self, d, target):
        with pytest.raises(ValidationError):
            alpha_search(d, 20.0, target)


class TestTable1:
    def test_shape(self, table):
        assert [r["d"] for r in table] == list(TABLE1_D)
        for r in table:
            assert r["inv_d2"] == pytest.approx(1 / r["d"] ** 2)

    def test_runtime_between_linear_and_quadratic(self, table):
        for r in table:
            assert 1 / r["d"] <= r["t"] <= r["inv_d2"]

    def test_alpha_non_increasing_in_d(self, table):
        alphas = [r["alpha"] for r in table]
        assert all(a >= b for a, b in zip(alphas, alphas[1:]))

    def test_thread_independent(self, table):
        assert table1(threads=3) == table


class TestFigures:
    @pytest.mark.parametrize("fid", ["2a", "2b", "3", "4"])
    def test_probabilities_self_consistent(self, fid):
        data = figure_dataset(fid)
        header, rows = data["header"], data["rows"]
        p = np.array([r[header.index("p")] for r in rows])
        assert np.all((p >= 0) & (p <= 1))
        rng = np.random.default_rng(0)
        for i in rng.choice(len(rows), 20, replace=False):
            row = dict(zip(header, rows[i]))
            d = row.get("d", 0.01)
            alpha = row.get("alpha", {"2a": 1.0, "2b": 0.0}.get(fid))
            e = row.get("e_prime", 5.0)
            params = ThreeLevelParams.from_alpha(d, e, alpha)
            t = row.get("t", params.runtime())
            assert row["p"] == pytest.approx(p_numeric3(params, t), abs=1e-10)

    def test_fig2_grid(self):
        rows = figure_dataset("2a")["rows"]
        assert len(rows) == 81 * 201

    def test_fig3_large_gap_alpha_one_near_unity(self):
        rows = [r for r in figure_dataset("3")["rows"] if r[0] == 1.0]
        assert rows[-1][1] == 20.0
        assert rows[-1][2] > 0.99

    def test_fig4_caption_value_first(self):
        rows = figure_dataset("4")["rows"]
        assert rows[0][0] == 0.1
        assert {r[0] for r in rows} == {0.1, 0.01}

    def test_fig5_reaches_zero(self):
        rows = figure_dataset("5", threads=2)["rows"]
        assert len(rows) == len(FIG5_D) * len(FIG5_E_PRIME)
        at20 = [r for r in rows if r[0] == 20.0]
        assert at20[-1][2] == 0.0
        for r in rows:
            assert r[4] >= 0.9 - P_TOLERANCE

    def test_unknown(self):
        with pytest.raises(ValidationError):
            figure_dataset("6")


def test_csv_output(tmp_path):
    a = write_table1(tmp_path / "a")
    b = write_table1(tmp_path / "b", threads=4)
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "d,alpha,t,inv_d2,achieved_p"
    assert lines[1].startswith("0.01,")
    f = write_figure("3", tmp_path)
    assert f.name == "fig3.csv"
    assert f.read_text().splitlines()[0] == "alpha,e_prime,p"
