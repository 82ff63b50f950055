import re
from collections import Counter

from wallpaper_aux.report import FILENAMES, emit_report, render_csv, render_markdown, render_svg
from wallpaper_aux.study import Dataset, all_tables, bundled_dataset, frequency_histogram


def _inputs():
    k, c = bundled_dataset("korner"), bundled_dataset("comparative")
    return {"korner": all_tables(k), "comparative": all_tables(c)}, frequency_histogram(k, c), (k, c)


def test_markdown_shows_printed_precision():
    tables, freq, _ = _inputs()
    md = render_markdown(tables, freq)
    assert "-0.8142" in md
    assert "| 4*2 | 4 | -0.901, -0.81, -0.966, -0.315 | -0.748 |" in md


def test_empty_table_is_marked():
    tables = {"empty": all_tables(Dataset(()))}
    md = render_markdown(tables, frequency_histogram())
    assert "(no records)" in md


def test_re_run_is_byte_identical(tmp_path):
    tables, freq, _ = _inputs()
    a = [p.read_bytes() for p in emit_report(tables, freq, tmp_path / "a")]
    tables2, freq2, _ = _inputs()
    b = [p.read_bytes() for p in emit_report(tables2, freq2, tmp_path / "b")]
    assert a == b
    assert sorted(p.name for p in (tmp_path / "a").iterdir()) == sorted(FILENAMES.values())


def test_csv_rows_cover_every_bucket():
    tables, freq, _ = _inputs()
    lines = render_csv(tables, freq).splitlines()
    assert lines[0] == "dataset,table,bucket,n,values,mean"
    n_buckets = sum(len(r.buckets) for t in tables.values() for r in t.values())
    assert len(lines) == 1 + n_buckets + len(freq.nonzero())
    assert "comparative,chirality,achiral,10," in "\n".join(lines)


def test_svg_has_one_bar_per_nonzero_group():
    tables, freq, (k, c) = _inputs()
    svg = render_svg(freq)
    bars = re.findall(r'<rect class="bar" data-group="([^"]+)" data-count="(\d+)"', svg)
    tally = Counter(r.group.value for r in list(k) + list(c))
    assert {g: int(n) for g, n in bars} == dict(tally)
    assert len(bars) == len(tally)


def test_only_requested_formats(tmp_path):
    tables, freq, _ = _inputs()
    written = emit_report(tables, freq, tmp_path, formats=("svg",))
    assert [p.name for p in written] == ["frequency.svg"]
