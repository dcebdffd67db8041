import xml.etree.ElementTree as ET

from ep_lab.plot import gnuplot_files, sweep_svg
from ep_lab.scenario import preset
from ep_lab.sweep import COLUMNS, run_sweep

NS = "{http://www.w3.org/2000/svg}"


def test_svg_has_three_titled_panels():
    root = ET.fromstring(sweep_svg(run_sweep(preset("fig1_left").with_count(51))).encode())
    titles = [t.text for t in root.iter(NS + "text") if t.get("font-size") == "13"]
    assert len(titles) == 3
    assert titles[0] == "Energies"
    assert len(list(root.iter(NS + "path"))) >= 8


def test_svg_is_deterministic():
    res = run_sweep(preset("fig2_left").with_count(31))
    assert sweep_svg(res) == sweep_svg(res)


def test_gnuplot_pair():
    data, script = gnuplot_files(run_sweep(preset("fig2_left").with_count(3)), "x.dat")
    lines = data.splitlines()
    assert lines[0] == "# " + " ".join(COLUMNS)
    assert [ln.split()[12] for ln in lines[1:]] == ["0", "1", "0"]
    assert "'x.dat'" in script and "multiplot layout 3,1" in script
