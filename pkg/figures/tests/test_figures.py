import shutil
import subprocess

import pytest

from figures import FigureSpec, FigureError, MissingColumn, Table, build_figure, render
from figures.cli import main


def sweep_spec(csv_dir, tmp_path, second=None, **kwargs):
    paths = (csv_dir / "sweep.csv",)
    if second is not None:
        paths += (second,)
    return FigureSpec(
        kind="sweep", csv_paths=paths, out_path=tmp_path / "out.svg", **kwargs
    )


def series(ax, suffix):
    return [l for l in ax.get_lines() if str(l.get_label()).endswith(suffix)]


class TestFigureSpec:
    def test_unknown_kind(self, csv_dir, tmp_path):
        with pytest.raises(FigureError, match="sweep"):
            FigureSpec(
                kind="scatter",
                csv_paths=(csv_dir / "sweep.csv",),
                out_path=tmp_path / "out.svg",
            )

    def test_trace_takes_exactly_one_csv(self, csv_dir, tmp_path):
        with pytest.raises(FigureError, match="exactly one"):
            FigureSpec(
                kind="trace",
                csv_paths=(csv_dir / "trace.csv", csv_dir / "trace.csv"),
                out_path=tmp_path / "out.svg",
            )

    def test_missing_column_is_named(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("parameter,observable\r\n1.0,P_1\r\n")
        with pytest.raises(MissingColumn) as info:
            FigureSpec(kind="sweep", csv_paths=(bad,), out_path=tmp_path / "o.svg")
        assert info.value.column == "P_gaia"
        assert "P_gaia" in str(info.value)
        assert "bad.csv" in str(info.value)

    def test_trace_needs_probability_columns(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("time\r\n1.0\r\n")
        with pytest.raises(MissingColumn) as info:
            FigureSpec(kind="trace", csv_paths=(bad,), out_path=tmp_path / "o.svg")
        assert info.value.column == "P_1"

    def test_overlay_rejects_foreign_table(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("row,col,S_re,S_im,prob\r\n1,1,1.0,0.0,1.0\r\n")
        with pytest.raises(MissingColumn):
            FigureSpec(kind="overlay", csv_paths=(bad,), out_path=tmp_path / "o.svg")

    def test_second_sweep_table_must_hold_zeros(self, csv_dir, tmp_path):
        with pytest.raises(MissingColumn) as info:
            sweep_spec(csv_dir, tmp_path, second=csv_dir / "trace.csv")
        assert info.value.column == "kind"

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            FigureSpec(
                kind="trace",
                csv_paths=(tmp_path / "absent.csv",),
                out_path=tmp_path / "o.svg",
            )


class TestSweepFigure:
    def test_marker_convention(self, csv_dir, tmp_path):
        ax = build_figure(sweep_spec(csv_dir, tmp_path)).axes[0]
        gaia = series(ax, " GAIA")
        oracle = series(ax, " oracle")
        assert len(gaia) == len(oracle) == 16
        for line in gaia:
            assert line.get_linestyle() == "None"
            assert line.get_markerfacecolor() == "none"
        for line in oracle:
            assert line.get_linestyle() == "-"
            assert line.get_markerfacecolor() != "none"

    def test_gaia_shares_color_with_its_oracle(self, csv_dir, tmp_path):
        ax = build_figure(sweep_spec(csv_dir, tmp_path)).axes[0]
        colors = {}
        for line in ax.get_lines():
            label = str(line.get_label())
            name, _, kind = label.rpartition(" ")
            colors.setdefault(name, {})[kind] = line.get_color()
        for name, pair in colors.items():
            assert pair["GAIA"] == pair["oracle"], name

    def test_red_region_shaded_from_status(self, csv_dir, tmp_path):
        # the x=12 point sits below the validity boundary
        ax = build_figure(sweep_spec(csv_dir, tmp_path)).axes[0]
        assert len(ax.patches) == 1
        patch = ax.patches[0]
        assert patch.get_x() <= 12.0 <= patch.get_x() + patch.get_width()
        assert 16.0 > patch.get_x() + patch.get_width()

    def test_red_boundary_override(self, csv_dir, tmp_path):
        ax = build_figure(
            sweep_spec(csv_dir, tmp_path, red_boundary=1.0)
        ).axes[0]
        assert not ax.patches
        ax = build_figure(
            sweep_spec(csv_dir, tmp_path, red_boundary=1e9)
        ).axes[0]
        assert len(ax.patches) == 1
        patch = ax.patches[0]
        assert patch.get_x() == 12.0
        assert patch.get_width() == 8.0

    def test_zero_markers_from_second_table(self, csv_dir, tmp_path):
        zeros = Table(csv_dir / "zeros.csv")
        ax = build_figure(
            sweep_spec(csv_dir, tmp_path, second=csv_dir / "zeros.csv")
        ).axes[0]
        vlines = [
            l
            for l in ax.get_lines()
            if len(l.get_xdata()) == 2 and l.get_xdata()[0] == l.get_xdata()[1]
        ]
        assert len(vlines) == len(zeros.rows) > 0
        drawn = sorted(float(l.get_xdata()[0]) for l in vlines)
        assert drawn == sorted(zeros.floats("value"))
        labels = [str(l.get_label()) for l in vlines]
        assert labels.count("predicted zero") == 1

    def test_single_row_table(self, csv_dir, tmp_path):
        lines = (csv_dir / "sweep.csv").read_text().splitlines(True)[:2]
        single = tmp_path / "single.csv"
        single.write_text("".join(lines))
        spec = FigureSpec(
            kind="sweep", csv_paths=(single,), out_path=tmp_path / "single.svg"
        )
        ax = build_figure(spec).axes[0]
        points = [l for l in ax.get_lines()]
        assert len(points) == 2
        for line in points:
            assert len(line.get_xdata()) == 1
        render(spec)
        assert spec.out_path.exists()

    def test_axis_labels(self, csv_dir, tmp_path):
        ax = build_figure(
            sweep_spec(csv_dir, tmp_path, xlabel="drive span", ylabel="P")
        ).axes[0]
        assert ax.get_xlabel() == "drive span"
        assert ax.get_ylabel() == "P"
        ax = build_figure(sweep_spec(csv_dir, tmp_path)).axes[0]
        assert ax.get_xlabel() == "parameter"
        assert ax.get_ylabel() == "probability"


class TestTraceFigure:
    def test_one_labeled_curve_per_level(self, csv_dir, tmp_path):
        table = Table(csv_dir / "trace.csv")
        spec = FigureSpec(
            kind="trace",
            csv_paths=(csv_dir / "trace.csv",),
            out_path=tmp_path / "trace.svg",
        )
        ax = build_figure(spec).axes[0]
        lines = ax.get_lines()
        assert [str(l.get_label()) for l in lines] == ["P_1", "P_2"]
        for line in lines:
            assert len(line.get_xdata()) == len(table.rows)


class TestOverlayFigure:
    def test_points_over_curves(self, csv_dir, tmp_path):
        spec = FigureSpec(
            kind="overlay",
            csv_paths=(csv_dir / "ctrace.csv",),
            out_path=tmp_path / "overlay.svg",
        )
        assert spec.roles == ("compare",)
        ax = build_figure(spec).axes[0]
        gaia = series(ax, " GAIA")
        oracle = series(ax, " oracle")
        assert len(gaia) == len(oracle) == 2
        for open_line, closed_line in zip(gaia, oracle):
            assert list(open_line.get_xdata()) == list(closed_line.get_xdata())
        assert ax.get_xlabel() == "time"

    def test_trace_curves_under_comparison(self, csv_dir, tmp_path):
        spec = FigureSpec(
            kind="overlay",
            csv_paths=(csv_dir / "trace.csv", csv_dir / "ctrace.csv"),
            out_path=tmp_path / "overlay.svg",
        )
        assert spec.roles == ("trace", "compare")
        ax = build_figure(spec).axes[0]
        assert len(ax.get_lines()) == 6


class TestRenderOutput:
    def test_svg_reruns_are_byte_identical(self, csv_dir, tmp_path):
        first = sweep_spec(csv_dir, tmp_path, second=csv_dir / "zeros.csv")
        render(first)
        once = first.out_path.read_bytes()
        render(first)
        assert first.out_path.read_bytes() == once
        other = FigureSpec(
            kind="sweep",
            csv_paths=(csv_dir / "sweep.csv", csv_dir / "zeros.csv"),
            out_path=tmp_path / "again.svg",
        )
        render(other)
        assert other.out_path.read_bytes() == once

    def test_png_output(self, csv_dir, tmp_path):
        spec = FigureSpec(
            kind="trace",
            csv_paths=(csv_dir / "trace.csv",),
            out_path=tmp_path / "trace.png",
        )
        render(spec)
        assert spec.out_path.read_bytes()[:4] == b"\x89PNG"


class TestCli:
    def test_sweep_roundtrip(self, csv_dir, tmp_path):
        out = tmp_path / "fig.svg"
        code = main(
            ["sweep", "--csv", str(csv_dir / "sweep.csv"),
             "--csv", str(csv_dir / "zeros.csv"), "--out", str(out)]
        )
        assert code == 0
        assert out.read_bytes().lstrip().startswith(b"<?xml")

    def test_missing_column_exit(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("parameter,observable\r\n1.0,P_1\r\n")
        code = main(["sweep", "--csv", str(bad), "--out", str(tmp_path / "o.svg")])
        assert code == 2
        err = capsys.readouterr().err
        assert "P_gaia" in err and "missing" in err

    def test_missing_file_exit(self, tmp_path, capsys):
        code = main(
            ["trace", "--csv", str(tmp_path / "absent.csv"),
             "--out", str(tmp_path / "o.svg")]
        )
        assert code == 2
        assert "absent.csv" in capsys.readouterr().err

    def test_trace_rejects_second_csv(self, csv_dir, tmp_path, capsys):
        code = main(
            ["trace", "--csv", str(csv_dir / "trace.csv"),
             "--csv", str(csv_dir / "trace.csv"), "--out", str(tmp_path / "o.svg")]
        )
        assert code == 2
        assert "exactly one" in capsys.readouterr().err

    def test_unknown_kind_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["scatter", "--csv", "x.csv", "--out", "o.svg"])
        assert info.value.code == 2

    def test_console_script(self, csv_dir, tmp_path):
        binary = shutil.which("figures")
        assert binary, "console script not installed"
        out = tmp_path / "trace.svg"
        done = subprocess.run(
            [binary, "trace", "--csv", str(csv_dir / "trace.csv"),
             "--out", str(out)],
            capture_output=True, text=True,
        )
        assert done.returncode == 0, done.stderr
        assert out.exists()
