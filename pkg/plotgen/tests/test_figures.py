import warnings

import pytest

from plotgen import (
    FigureKind,
    FigureSpec,
    PlotgenError,
    load_rows,
    missing_columns,
    render,
    zero_crossing,
)

HEADER = (
    "distance_km,T,xi_tot,chi_line_conv,chi_het_conv,chi_tot_conv,K_conv,"
    "chi_line_tr,chi_het_tr,chi_tot_tr,K_tr,K_pia,eve_frac_pia,K_voa,eve_frac_voa"
)


def synthetic_csv(tmp_path, name="sweep.csv", with_pia2=True, voa_positive=True):
    """Hand-built rows following the sweep schema; crossings at 38/60/50/45/40 km."""
    columns = HEADER.split(",")
    if with_pia2:
        columns += ["K_pia2", "eve_frac_pia2"]
    lines = [",".join(columns)]
    for i in range(0, 81, 2):
        d = float(i)
        row = {c: "" for c in columns}
        row["distance_km"] = repr(d)
        row["T"] = repr(10 ** (-0.02 * d))
        row["xi_tot"] = repr(0.08)
        row["K_conv"] = repr(0.1 * (1 - d / 38.0))
        row["K_tr"] = repr(0.1 * (1 - d / 60.0))
        row["K_pia"] = repr(0.1 * (1 - d / 50.0))
        if with_pia2:
            row["K_pia2"] = repr(0.1 * (1 - d / 45.0))
        row["K_voa"] = repr(0.1 * (1 - d / 40.0) if voa_positive else -0.01)
        lines.append(",".join(row[c] for c in columns))
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return path


class TestLoadRows:
    def test_parses_empty_cells_as_none(self, tmp_path):
        path = tmp_path / "t.csv"
        path.write_text("distance_km,K_tr\n0.0,0.5\n1.0,\n")
        header, rows = load_rows(path)
        assert header == ["distance_km", "K_tr"]
        assert rows[0]["K_tr"] == 0.5
        assert rows[1]["K_tr"] is None

    def test_missing_file(self, tmp_path):
        with pytest.raises(PlotgenError, match="not found"):
            load_rows(tmp_path / "nope.csv")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(PlotgenError, match="empty"):
            load_rows(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text(HEADER + "\n")
        with pytest.raises(PlotgenError, match="no data rows"):
            load_rows(path)


class TestZeroCrossing:
    def test_interpolates(self):
        rows = [
            {"distance_km": 0.0, "K_tr": 0.2},
            {"distance_km": 10.0, "K_tr": 0.1},
            {"distance_km": 20.0, "K_tr": -0.1},
        ]
        assert zero_crossing(rows, "K_tr") == pytest.approx(15.0)

    def test_none_when_always_positive(self):
        rows = [{"distance_km": float(d), "K_tr": 0.1} for d in range(5)]
        assert zero_crossing(rows, "K_tr") is None

    def test_none_when_never_positive(self):
        rows = [{"distance_km": float(d), "K_tr": -0.1} for d in range(5)]
        assert zero_crossing(rows, "K_tr") is None

    def test_skips_empty_cells(self):
        rows = [
            {"distance_km": 0.0, "K_tr": 0.1},
            {"distance_km": 5.0, "K_tr": None},
            {"distance_km": 10.0, "K_tr": -0.1},
        ]
        assert zero_crossing(rows, "K_tr") == pytest.approx(5.0)


class TestRender:
    def test_fig3_svg_and_png(self, tmp_path):
        csv_path = synthetic_csv(tmp_path)
        for suffix in ("svg", "png"):
            out = tmp_path / f"fig3.{suffix}"
            got = render(FigureSpec(csv_path, FigureKind.FIG3, out))
            assert got == str(out)
            assert out.stat().st_size > 1000

    def test_fig5_with_shading(self, tmp_path):
        csv_path = synthetic_csv(tmp_path)
        out = tmp_path / "fig5.svg"
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            render(FigureSpec(csv_path, FigureKind.FIG5, out))
        assert "#ffe4c4" in out.read_text()  # bisque fill

    def test_missing_columns_named(self, tmp_path):
        path = tmp_path / "convonly.csv"
        path.write_text("distance_km,K_conv\n0.0,0.1\n10.0,-0.1\n")
        with pytest.raises(PlotgenError) as exc:
            render(FigureSpec(path, FigureKind.FIG3, tmp_path / "x.svg"))
        message = str(exc.value)
        for column in ("K_tr", "K_pia", "K_pia2"):
            assert column in message

    def test_missing_columns_helper(self):
        assert missing_columns(["distance_km", "K_conv"], FigureKind.FIG5) == [
            "K_tr",
            "K_voa",
        ]

    def test_no_positive_range_warns_without_shading(self, tmp_path):
        csv_path = synthetic_csv(tmp_path, voa_positive=False)
        out = tmp_path / "fig5.svg"
        with pytest.warns(UserWarning):
            render(FigureSpec(csv_path, FigureKind.FIG5, out))
        assert out.exists()
        assert "#ffe4c4" not in out.read_text()

    def test_deterministic_bytes(self, tmp_path):
        csv_path = synthetic_csv(tmp_path)
        for suffix in ("svg", "png"):
            out_a = tmp_path / f"a.{suffix}"
            out_b = tmp_path / f"b.{suffix}"
            render(FigureSpec(csv_path, FigureKind.FIG3, out_a))
            render(FigureSpec(csv_path, FigureKind.FIG3, out_b))
            assert out_a.read_bytes() == out_b.read_bytes(), suffix

    def test_axis_ranges_applied(self, tmp_path):
        csv_path = synthetic_csv(tmp_path)
        out = tmp_path / "ranged.svg"
        render(
            FigureSpec(csv_path, FigureKind.FIG3, out, x_range=(0, 50), y_range=(1e-4, 1))
        )
        assert out.exists()

    def test_bad_extension_rejected(self, tmp_path):
        csv_path = synthetic_csv(tmp_path)
        with pytest.raises(PlotgenError, match="svg or .png"):
            render(FigureSpec(csv_path, FigureKind.FIG3, tmp_path / "fig.pdf"))
