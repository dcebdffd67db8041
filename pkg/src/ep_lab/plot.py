"""Plain SVG and gnuplot rendering of sweep results."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .sweep import SweepResult

WIDTH = 720
PANEL_H = 230
LEFT, RIGHT, TOP, BOTTOM = 80, 20, 28, 36

BRANCH_COLORS = ("#1f77b4", "#d62728")
MIX_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _range(values: list[np.ndarray]) -> tuple[float, float]:
    lo = min(float(np.min(v)) for v in values)
    hi = max(float(np.max(v)) for v in values)
    if hi - lo < 1e-12 * max(1.0, abs(hi)):
        pad = max(1e-3, 0.05 * abs(hi))
        return lo - pad, hi + pad
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


class _Panel:
    def __init__(self, top: float, x: np.ndarray, series: list[np.ndarray], title: str, ylabel: str):
        self.y0 = top
        self.x0, self.x1 = float(x[0]), float(x[-1])
        self.lo, self.hi = _range(series)
        self.title, self.ylabel = title, ylabel
        self.w = WIDTH - LEFT - RIGHT
        self.h = PANEL_H - TOP - BOTTOM

    def px(self, x):
        return LEFT + (np.asarray(x) - self.x0) / (self.x1 - self.x0) * self.w

    def py(self, y):
        return self.y0 + TOP + (self.hi - np.asarray(y)) / (self.hi - self.lo) * self.h

    def frame(self) -> list[str]:
        top = self.y0 + TOP
        out = [
            f'<rect x="{LEFT}" y="{_fmt(top)}" width="{self.w}" height="{self.h}" '
            'fill="none" stroke="#000" stroke-width="1"/>',
            f'<text x="{LEFT}" y="{_fmt(top - 8)}" font-size="13">{escape(self.title)}</text>',
            f'<text x="14" y="{_fmt(top + self.h / 2)}" font-size="12" '
            f'transform="rotate(-90 14 {_fmt(top + self.h / 2)})" text-anchor="middle">{escape(self.ylabel)}</text>',
        ]
        for t in _ticks(self.x0, self.x1):
            x = float(self.px(t))
            out.append(f'<line x1="{_fmt(x)}" y1="{_fmt(top + self.h)}" x2="{_fmt(x)}" y2="{_fmt(top + self.h + 5)}" stroke="#000"/>')
            out.append(f'<text x="{_fmt(x)}" y="{_fmt(top + self.h + 18)}" font-size="10" text-anchor="middle">{t:.4g}</text>')
        for t in _ticks(self.lo, self.hi):
            y = float(self.py(t))
            out.append(f'<line x1="{LEFT - 5}" y1="{_fmt(y)}" x2="{LEFT}" y2="{_fmt(y)}" stroke="#000"/>')
            out.append(f'<text x="{LEFT - 8}" y="{_fmt(y + 3)}" font-size="10" text-anchor="end">{t:.4g}</text>')
        return out

    def line(self, x, y, color: str, dashed: bool = False, label: str | None = None, slot: int = 0) -> list[str]:
        xs, ys = self.px(x), self.py(y)
        d = "M" + " L".join(f"{_fmt(a)} {_fmt(b)}" for a, b in zip(xs, ys))
        dash = ' stroke-dasharray="5 4"' if dashed else ""
        out = [f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.4"{dash}/>']
        if label:
            lx = LEFT + self.w - 90
            ly = self.y0 + TOP + 14 + 14 * slot
            out.append(f'<line x1="{lx}" y1="{_fmt(ly - 4)}" x2="{lx + 18}" y2="{_fmt(ly - 4)}" stroke="{color}"{dash}/>')
            out.append(f'<text x="{lx + 22}" y="{_fmt(ly)}" font-size="10">{escape(label)}</text>')
        return out


def sweep_svg(result: SweepResult) -> str:
    """Three stacked panels: E_i with bare e_i dashed, Gamma_i/2, |b_ij|^2."""
    cols = result.columns()
    a = cols["a"]
    height = 3 * PANEL_H + 20
    body: list[str] = []

    energy = _Panel(0, a, [cols["E1"], cols["E2"], cols["e1_bare"], cols["e2_bare"]], "Energies", "E_i")
    body += energy.frame()
    body += energy.line(a, cols["e1_bare"], "#888", dashed=True, label="e_1(a)", slot=2)
    body += energy.line(a, cols["e2_bare"], "#bbb", dashed=True, label="e_2(a)", slot=3)
    body += energy.line(a, cols["E1"], BRANCH_COLORS[0], label="E_1", slot=0)
    body += energy.line(a, cols["E2"], BRANCH_COLORS[1], label="E_2", slot=1)

    widths = _Panel(PANEL_H, a, [cols["G1_half"], cols["G2_half"]], "Widths", "Gamma_i/2")
    body += widths.frame()
    body += widths.line(a, cols["G1_half"], BRANCH_COLORS[0], label="Gamma_1/2", slot=0)
    body += widths.line(a, cols["G2_half"], BRANCH_COLORS[1], label="Gamma_2/2", slot=1)

    names = ("b11sq", "b12sq", "b21sq", "b22sq")
    mix = _Panel(2 * PANEL_H, a, [cols[k] for k in names], "Mixing coefficients", "|b_ij|^2")
    body += mix.frame()
    for k, (name, color) in enumerate(zip(names, MIX_COLORS)):
        label = f"|b_{name[1]}{name[2]}|^2"
        body += mix.line(a, cols[name], color, label=label, slot=k)

    if np.any(result.defect):
        for x in a[result.defect]:
            for panel in (energy, widths, mix):
                px = _fmt(float(panel.px(x)))
                body.append(
                    f'<line x1="{px}" y1="{_fmt(panel.y0 + TOP)}" x2="{px}" '
                    f'y2="{_fmt(panel.y0 + PANEL_H - BOTTOM)}" stroke="#999" stroke-dasharray="1 3"/>'
                )

    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">\n'
        f"<title>{escape(result.config.name)}</title>\n"
        f'<rect width="{WIDTH}" height="{height}" fill="#fff"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def gnuplot_files(result: SweepResult, data_name: str = "sweep.dat") -> tuple[str, str]:
    cols = result.columns()
    names = list(cols)
    lines = ["# " + " ".join(names)]
    for row in zip(*(cols[k] for k in names)):
        cells = (str(int(v)) if k == "defect" else f"{float(v) + 0.0:.11e}" for k, v in zip(names, row))
        lines.append(" ".join(cells))
    data = "\n".join(lines) + "\n"
    c = {k: i + 1 for i, k in enumerate(names)}
    script = f"""set terminal svg size {WIDTH},{3 * PANEL_H} enhanced
set output 'plot.svg'
set multiplot layout 3,1 title '{result.config.name}'
set xlabel 'a'
set ylabel 'E_i'
plot '{data_name}' u 1:{c['E1']} w l t 'E_1', '' u 1:{c['E2']} w l t 'E_2', \\
     '' u 1:{c['e1_bare']} w l dt 2 t 'e_1', '' u 1:{c['e2_bare']} w l dt 2 t 'e_2'
set ylabel 'Gamma_i/2'
plot '{data_name}' u 1:{c['G1_half']} w l t 'Gamma_1/2', '' u 1:{c['G2_half']} w l t 'Gamma_2/2'
set ylabel '|b_{{ij}}|^2'
plot '{data_name}' u 1:{c['b11sq']} w l t '|b_{{11}}|^2', '' u 1:{c['b12sq']} w l t '|b_{{12}}|^2', \\
     '' u 1:{c['b21sq']} w l t '|b_{{21}}|^2', '' u 1:{c['b22sq']} w l t '|b_{{22}}|^2'
unset multiplot
"""
    return data, script
