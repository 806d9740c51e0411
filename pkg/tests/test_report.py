import csv
import io

import pytest

from helpers import load_sample_corpus
from ugc_bench import report as R
from ugc_bench.bootstrap import BootstrapResult
from ugc_bench.corpus import corpus_stats
from ugc_bench.lm import DivergenceReport
from ugc_bench.metrics import MetricScore, RatioReport


def score(v):
    return MetricScore(metric="bleu-intl", value=v, components={})


def rr(noisy, normalized, label="", ci=None):
    und = normalized == 0.0
    return RatioReport(label=label, metric="bleu-intl", noisy=score(noisy),
                       normalized=score(normalized),
                       ratio=None if und else noisy / normalized,
                       undefined=und, ci=ci)


class TestCellRendering:
    def test_ratio_cell_pinned_format(self):
        assert R.Cell(value=0.75, score=27.7).render() == "0.75 (27.7)"

    def test_rounding_not_truncation(self):
        assert R.Cell(value=0.756, score=27.75).render() == "0.76 (27.8)"
        assert R.Cell(value=0.999, score=99.99).render() == "1.00 (100.0)"

    def test_ci_half_width_three_decimals(self):
        cell = R.Cell(value=0.75, score=27.7, ci=(26.4, 29.1))
        assert cell.render() == "0.75 (27.7) ±1.350"

    def test_undefined_cell(self):
        assert R.Cell(value=None).render() == "n/a"

    def test_count_cell_thousands_separator(self):
        assert R.Cell(value=1306.0, kind=R.KIND_COUNT).render() == "1,306"
        assert R.Cell(value=89.0, kind=R.KIND_COUNT).render() == "89"

    def test_divergence_decimals(self):
        assert R.Cell(value=0.0061, kind=R.KIND_DIVERGENCE, decimals=3).render() == "0.006"
        assert R.Cell(value=214.907, kind=R.KIND_DIVERGENCE, decimals=2).render() == "214.91"

    def test_value_only(self):
        assert R.Cell(value=0.96).render() == "0.96"


class TestRatioTable:
    def test_one_cell(self):
        table = R.ratio_table("t", ["sys"], ["casing"], [[rr(27.7, 36.9)]])
        assert table.cells[0][0].render() == "0.75 (27.7)"

    def test_identity_grid(self):
        table = R.ratio_table("t", ["s"], ["c1", "c2"],
                              [[rr(40.0, 40.0), rr(12.3, 12.3)]])
        for cell in table.cells[0]:
            assert cell.render().startswith("1.00 (")

    def test_shape_3x13(self):
        grid = [[rr(10.0 + i, 20.0) for i in range(13)] for _ in range(3)]
        table = R.ratio_table("t", ["a", "b", "c"], [f"c{i}" for i in range(13)], grid)
        assert len(table.col_labels) == 13
        assert sum(len(row) for row in table.cells) == 39

    def test_undefined_renders_na(self):
        table = R.ratio_table("t", ["s"], ["c"], [[rr(5.0, 0.0)]])
        assert table.cells[0][0].render() == "n/a"

    def test_ci_carried(self):
        ci = BootstrapResult(point=0.75, lower=0.70, upper=0.80,
                             level=0.95, b=100, seed=0)
        table = R.ratio_table("t", ["s"], ["c"], [[rr(30.0, 40.0, ci=ci)]])
        assert table.cells[0][0].render() == "0.75 (30.0) ±0.050"

    def test_ragged_grid_rejected(self):
        with pytest.raises(ValueError):
            R.ratio_table("t", ["a", "b"], ["c"], [[rr(1.0, 2.0)]])
        with pytest.raises(ValueError):
            R.ratio_table("t", ["a"], ["c1", "c2"], [[rr(1.0, 2.0)]])


class TestPerNTable:
    def test_count_header_row(self):
        grid = [[rr(20.0, 25.0), rr(18.0, 25.0), rr(15.0, 25.0), rr(12.0, 25.0)]]
        table = R.per_n_table("t", ["sys"], ["1", "2", "3", "4..7"], grid,
                              sizes=[1306, 1776, 1439, 1089])
        assert table.row_labels[0] == "# sents."
        rendered = [c.render() for c in table.cells[0]]
        assert rendered == ["1,306", "1,776", "1,439", "1,089"]

    def test_ratio_rows_follow(self):
        grid = [[rr(24.0, 25.0), rr(22.25, 25.0), rr(21.5, 25.0), rr(21.0, 25.0)]]
        table = R.per_n_table("t", ["sys"], ["1", "2", "3", "4..7"], grid,
                              sizes=[4, 4, 4, 4])
        ratios = [c.render().split()[0] for c in table.cells[1]]
        assert ratios == ["0.96", "0.89", "0.86", "0.84"]

    def test_single_bin(self):
        table = R.per_n_table("t", ["s"], ["1"], [[rr(1.0, 2.0)]], sizes=[7])
        assert len(table.col_labels) == 1
        assert len(table.cells) == 2

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            R.per_n_table("t", ["s"], ["1", "2"], [[rr(1.0, 2.0), rr(1.0, 2.0)]],
                          sizes=[5])


class TestDivergenceTable:
    def reports(self):
        return [
            DivergenceReport(label="in-domain", kl3=0.0061, oov_pct=1.247,
                             ppl=214.905, lm_order=3, alpha=1e-3),
            DivergenceReport(label="ugc", kl3=1.2345, oov_pct=9.876,
                             ppl=1553.118, lm_order=3, alpha=1e-3),
        ]

    def test_rows_and_columns(self):
        table = R.divergence_table("t", self.reports())
        assert table.row_labels == ("3-gram KL-div", "%OOV", "PPL")
        assert table.col_labels == ("in-domain", "ugc")

    def test_per_row_rounding(self):
        table = R.divergence_table("t", self.reports())
        assert table.cells[0][0].render() == "0.006"
        assert table.cells[1][0].render() == "1.25"
        assert table.cells[2][0].render() == "214.91"
        assert table.cells[2][1].render() == "1553.12"

    def test_single_report(self):
        table = R.divergence_table("t", self.reports()[:1])
        assert len(table.col_labels) == 1
        assert len(table.cells) == 3


class TestDistributionData:
    def test_thirteen_rows_in_code_order(self):
        stats = corpus_stats(load_sample_corpus())
        rows = R.distribution_data(stats)
        assert len(rows) == 13
        assert [r["code"] for r in rows] == list(range(1, 14))
        assert all(isinstance(r["label"], str) and r["label"] for r in rows)

    def test_modes_differ_on_multicode_spans(self):
        stats = corpus_stats(load_sample_corpus())
        per_code = {r["code"]: r["count"] for r in R.distribution_data(stats, "per-code")}
        per_span = {r["code"]: r["count"] for r in R.distribution_data(stats, "per-span")}
        assert sum(per_code.values()) >= sum(per_span.values())
        assert sum(per_span.values()) == stats.span_count

    def test_unknown_mode(self):
        stats = corpus_stats(load_sample_corpus())
        with pytest.raises(ValueError):
            R.distribution_data(stats, "per-word")


class TestRendering:
    def table(self):
        ci = BootstrapResult(point=0.8, lower=0.74, upper=0.86,
                             level=0.95, b=50, seed=1)
        grid = [[rr(30.0, 40.0, ci=ci), rr(5.0, 0.0)],
                [rr(22.0, 22.0), rr(9.99, 20.0)]]
        return R.ratio_table("systems", ["tx", "s2s"], ["emoji", "casing"], grid)

    def test_markdown_shape(self):
        text = R.render_markdown(self.table())
        lines = text.strip().split("\n")
        assert lines[0] == "| systems | emoji | casing |"
        assert lines[1] == "| --- | --- | --- |"
        assert len(lines) == 4
        assert "0.75 (30.0) ±0.060" in lines[2]
        assert "n/a" in lines[2]

    def test_csv_parses_rfc4180(self):
        text = R.render_csv(self.table())
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["systems", "emoji", "casing"]
        assert rows[1][0] == "tx"
        assert rows[2][2] == "0.50 (10.0)"

    def test_csv_and_markdown_same_cells(self):
        table = self.table()
        md = R.render_markdown(table)
        cs = R.render_csv(table)
        md_cells = [ln.strip("|").split(" | ") for ln in md.strip().split("\n")]
        md_cells = [[c.strip() for c in row] for i, row in enumerate(md_cells) if i != 1]
        csv_cells = list(csv.reader(io.StringIO(cs)))
        assert md_cells == csv_cells

    def test_json_round_trip_exact(self):
        table = self.table()
        back = R.parse_json(R.render_json(table))
        assert back == table

    def test_json_full_precision(self):
        grid = [[rr(1.0 / 3.0 * 30, 30.0)]]
        table = R.ratio_table("t", ["s"], ["c"], grid)
        back = R.parse_json(R.render_json(table))
        assert back.cells[0][0].value == table.cells[0][0].value

    def test_render_dispatch(self):
        table = self.table()
        assert R.render(table, "md") == R.render_markdown(table)
        assert R.render(table, "markdown") == R.render_markdown(table)
        assert R.render(table, "csv") == R.render_csv(table)
        assert R.render(table, "json") == R.render_json(table)
        with pytest.raises(ValueError):
            R.render(table, "html")
