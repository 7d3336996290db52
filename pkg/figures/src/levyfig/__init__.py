"""Render the eight-panel scaled spectral histogram figure.

Input is the CSV + JSON manifest written by ``levyspec figure1``; this
package reads those files verbatim and never imports the producer.
"""

from .figure import FigureError, PanelSpec, build_figure, load_manifest, render

__all__ = ["FigureError", "PanelSpec", "build_figure", "load_manifest", "render"]
