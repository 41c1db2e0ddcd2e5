"""Figure scripts render fixture CSVs and reject corrupted schemas."""
import subprocess
import sys
from pathlib import Path

import pytest

PLOTS = Path(__file__).resolve().parent.parent

BOUNDS_CSV = """n,gamma_alpha_n,gamma_half_n,gamma_floor_half_plus1
1,2.9802324608141534e-08,2.9802323275873759e-08,5.9604648328104516e-08
2,5.9604653657176198e-08,5.9604648328104516e-08,1.1920930376163766e-07
3,8.9406987147105026e-08,8.9406975156692429e-08,1.1920930376163766e-07
"""

HIST_CSV = """algo,metric,bin_left,bin_right,count
cplx_new,sigma_err,-inf,-2.0000000000000000e+00,3
cplx_new,sigma_err,-2.0000000000000000e+00,0.0000000000000000e+00,55
cplx_new,sigma_err,0.0000000000000000e+00,2.0000000000000000e+00,42
cplx_new,sigma_err,2.0000000000000000e+00,inf,0
cplx_39,sigma_err,-inf,-2.0000000000000000e+00,1
cplx_39,sigma_err,-2.0000000000000000e+00,0.0000000000000000e+00,60
cplx_39,sigma_err,0.0000000000000000e+00,2.0000000000000000e+00,39
cplx_39,sigma_err,2.0000000000000000e+00,inf,0
input,input_theta,0.0000000000000000e+00,3.1415926535897931e+00,50
input,input_theta,3.1415926535897931e+00,6.2831853071795862e+00,50
"""

EMPTY_HIST_CSV = "algo,metric,bin_left,bin_right,count\n"

HEATMAP_CSV = """log2_f,log2_g,sigma_err_avg
-2.0000000000000000e+00,-2.0000000000000000e+00,1.0000000000000001e-01
-2.0000000000000000e+00,2.0000000000000000e+00,-2.0000000000000001e-01
2.0000000000000000e+00,-2.0000000000000000e+00,3.0000000000000004e-01
2.0000000000000000e+00,2.0000000000000000e+00,-5.0000000000000003e-02
"""

ACCUM_HIST_CSV = """algo,metric,bin_left,bin_right,count
cplx_new,prod_sigma_err,-inf,-3.0000000000000000e+02,0
cplx_new,prod_sigma_err,-3.0000000000000000e+02,-1.0000000000000000e+02,40
cplx_new,prod_sigma_err,-1.0000000000000000e+02,1.0000000000000000e+02,120
cplx_new,prod_sigma_err,1.0000000000000000e+02,3.0000000000000000e+02,40
cplx_new,prod_sigma_err,3.0000000000000000e+02,inf,0
"""

FORECAST_CSV = """algo,mu_x,sigma_x,M,forecast_avg_err,forecast_std_err
cplx_new,9.9999999321379970e-01,3.7796626958648219e-08,10000,-1.1385003e+02,6.3420000e+01
"""


def run_script(name, *args):
    return subprocess.run([sys.executable, str(PLOTS / name), *args],
                          capture_output=True, text=True)


def corrupt_header(text):
    lines = text.splitlines()
    lines[0] = lines[0].replace(",", ";", 1)
    return "\n".join(lines) + "\n"


CASES = [
    ("plot_bounds.py", "bounds.csv", BOUNDS_CSV, []),
    ("plot_histograms.py", "hist.csv", HIST_CSV, ["--metric", "sigma_err"]),
    ("plot_heatmap.py", "heatmap.csv", HEATMAP_CSV, []),
    ("plot_accumulation.py", "accum_hist.csv", ACCUM_HIST_CSV, []),
]


@pytest.mark.parametrize("script,fname,content,extra",
                         CASES, ids=[c[0] for c in CASES])
class TestRenderAndReject:
    def test_renders_fixture(self, tmp_path, script, fname, content, extra):
        src = tmp_path / fname
        src.write_text(content)
        out = tmp_path / "fig.png"
        res = run_script(script, "--in", str(src), *extra, "--out", str(out))
        assert res.returncode == 0, res.stderr
        assert out.exists() and out.stat().st_size > 1000

    def test_rejects_corrupted_schema(self, tmp_path, script, fname,
                                      content, extra):
        src = tmp_path / fname
        src.write_text(corrupt_header(content))
        out = tmp_path / "fig.png"
        res = run_script(script, "--in", str(src), *extra, "--out", str(out))
        assert res.returncode != 0
        assert "does not match schema" in res.stderr
        assert not out.exists()


class TestSpecialCases:
    def test_empty_but_valid_histogram_renders_blank(self, tmp_path):
        src = tmp_path / "empty.csv"
        src.write_text(EMPTY_HIST_CSV)
        out = tmp_path / "fig.png"
        res = run_script("plot_histograms.py", "--in", str(src),
                         "--out", str(out))
        assert res.returncode == 0, res.stderr
        assert out.exists() and out.stat().st_size > 0

    def test_input_distribution_family(self, tmp_path):
        src = tmp_path / "hist.csv"
        src.write_text(HIST_CSV)
        out = tmp_path / "fig.png"
        res = run_script("plot_histograms.py", "--in", str(src),
                         "--metric", "input_theta", "--out", str(out))
        assert res.returncode == 0, res.stderr
        assert out.exists() and out.stat().st_size > 1000

    def test_accumulation_with_forecast_overlay(self, tmp_path):
        hist = tmp_path / "hist.csv"
        hist.write_text(ACCUM_HIST_CSV)
        fc = tmp_path / "forecast.csv"
        fc.write_text(FORECAST_CSV)
        out = tmp_path / "fig.png"
        res = run_script("plot_accumulation.py", "--in", str(hist),
                         "--forecast", str(fc), "--out", str(out))
        assert res.returncode == 0, res.stderr
        assert out.exists() and out.stat().st_size > 1000

    def test_corrupted_forecast_rejected(self, tmp_path):
        hist = tmp_path / "hist.csv"
        hist.write_text(ACCUM_HIST_CSV)
        fc = tmp_path / "forecast.csv"
        fc.write_text(corrupt_header(FORECAST_CSV))
        out = tmp_path / "fig.png"
        res = run_script("plot_accumulation.py", "--in", str(hist),
                         "--forecast", str(fc), "--out", str(out))
        assert res.returncode != 0
        assert "does not match schema" in res.stderr

    def test_missing_file_fails(self, tmp_path):
        res = run_script("plot_bounds.py", "--in",
                         str(tmp_path / "nope.csv"), "--out",
                         str(tmp_path / "fig.png"))
        assert res.returncode != 0
