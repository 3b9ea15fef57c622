# -*- coding: utf-8 -*-
"""
Risk curve figures.

The figure is built with plotly; ``figure_to_svg`` writes its line traces out
as a standalone SVG document (log-scale y axis, polylines, legend) so no
rendering engine is needed to save it.
"""

import math
from html import escape

import numpy as np
import pandas as pd
import plotly.graph_objects as go
from plotly.colors import qualitative


# Set the default theme for all charts
template = 'seaborn'
palette = qualitative.Plotly


def create_risk_curve_chart(risk: pd.DataFrame, title: str) -> go.Figure:
   """
   Line chart of squared risk against test input, one line per criterion.

   Parameters
   ----------
   risk : pd.DataFrame
       Columns criterion, x, risk (as in the univariate ``RiskReport.risk``).
   title : str
       Chart title.

   Returns
   -------
   go.Figure
       Figure with a logarithmic y axis.
   """
   fig = go.Figure()
   for i, (criterion, group) in enumerate(risk.groupby('criterion', sort=False)):
       fig.add_trace(go.Scatter(
           x=group['x'].to_numpy(),
           y=group['risk'].to_numpy(),
           mode='lines',
           name=criterion,
           line=dict(color=palette[i % len(palette)]),
       ))
   fig.update_layout(
       title=title,
       xaxis_title='x',
       yaxis_title='squared risk',
       yaxis_type='log',
       hovermode='x unified',
       height=480,
       template=template,
   )
   return fig


def _log_ticks(lo: float, hi: float) -> list[float]:
   first, last = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
   return [10.0**p for p in range(first, last + 1)]


def figure_to_svg(fig: go.Figure, width: int = 720, height: int = 480) -> str:
   """
   Serialise the line traces of a risk curve figure as an SVG document.

   Non-positive y values are clipped to the smallest positive value in the
   figure so they stay on the log axis.

   Parameters
   ----------
   fig : go.Figure
       Figure from ``create_risk_curve_chart``.
   width, height : int
       Canvas size in pixels.

   Returns
   -------
   str
       The SVG document.
   """
   traces = [t for t in fig.data if t.type == 'scatter']
   if not traces:
       raise ValueError('the figure has no line traces to draw')
   xs = np.concatenate([np.asarray(t.x, dtype=float) for t in traces])
   ys = np.concatenate([np.asarray(t.y, dtype=float) for t in traces])
   positive = ys[np.isfinite(ys) & (ys > 0)]
   floor = positive.min() if positive.size else 1e-12
   ticks = _log_ticks(floor, max(positive.max() if positive.size else 1.0, floor * 10))

   left, right, top, bottom = 70, 150, 40, 50
   plot_w, plot_h = width - left - right, height - top - bottom
   x_lo, x_hi = float(xs.min()), float(xs.max())
   if x_hi == x_lo:
       x_hi = x_lo + 1.0
   log_lo, log_hi = math.log10(ticks[0]), math.log10(ticks[-1])

   def px(x):
       return left + (x - x_lo) / (x_hi - x_lo) * plot_w

   def py(y):
       return top + (log_hi - math.log10(max(y, floor))) / (log_hi - log_lo) * plot_h

   title = fig.layout.title.text or ''
   out = [
       f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
       f'viewBox="0 0 {width} {height}">',
       f'<rect width="{width}" height="{height}" fill="white"/>',
       f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-family="sans-serif" '
       f'font-size="15">{escape(title)}</text>',
       f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>',
   ]
   for tick in ticks:
       y = py(tick)
       out.append(
           f'<line x1="{left}" y1="{y:.2f}" x2="{left + plot_w}" y2="{y:.2f}" stroke="#dddddd"/>'
       )
       out.append(
           f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end" font-family="sans-serif" '
           f'font-size="11">1e{int(round(math.log10(tick)))}</text>'
       )
   for x in np.linspace(x_lo, x_hi, 5):
       out.append(
           f'<text x="{px(x):.2f}" y="{top + plot_h + 18}" text-anchor="middle" '
           f'font-family="sans-serif" font-size="11">{x:g}</text>'
       )
   out.append(
       f'<text x="{left + plot_w / 2:.1f}" y="{height - 10}" text-anchor="middle" '
       f'font-family="sans-serif" font-size="12">{escape(fig.layout.xaxis.title.text or "")}</text>'
   )
   out.append(
       f'<text x="16" y="{top + plot_h / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
       f'font-size="12" transform="rotate(-90 16 {top + plot_h / 2:.1f})">'
       f'{escape(fig.layout.yaxis.title.text or "")}</text>'
   )
   for i, trace in enumerate(traces):
       color = trace.line.color or palette[i % len(palette)]
       points = ' '.join(
           f'{px(x):.2f},{py(y):.2f}'
           for x, y in zip(np.asarray(trace.x, dtype=float), np.asarray(trace.y, dtype=float))
           if np.isfinite(y)
       )
       out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
       ly = top + 14 + 18 * i
       lx = left + plot_w + 12
       out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
       out.append(
           f'<text x="{lx + 26}" y="{ly + 4}" font-family="sans-serif" font-size="11">'
           f'{escape(str(trace.name))}</text>'
       )
   out.append('</svg>')
   return '\n'.join(out) + '\n'
