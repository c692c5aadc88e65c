# SPDX-License-Identifier: Apache-2.0
# Copyright (c) 2026 The disorder-stop Authors


"""SVG rendering of solved boundaries."""

import logging
import pathlib
from typing import Sequence, Tuple

import matplotlib
from matplotlib.figure import Figure

from disorderstop.model import Boundary


logger = logging.getLogger(__name__)

# Element id of the i-th curve in the emitted SVG
CURVE_ID = "boundary-{index}"

_SVG_PARAMS = {
    "svg.hashsalt": "disorder-stop",
    "svg.fonttype": "none",
}


def plot_boundaries(
    curves: Sequence[Tuple[str, Boundary]], file_path: pathlib.Path
) -> None:
    """Draw one step curve a(t) per boundary and save the figure as SVG.

    Curves are drawn as left-continuous steps, the same rule the solver uses
    between nodes. Output is byte-stable for identical input.
    """
    with matplotlib.rc_context(_SVG_PARAMS):
        fig = Figure(figsize=(6.4, 4.8))
        ax = fig.subplots()
        for index, (label, boundary) in enumerate(curves):
            ax.plot(
                boundary.grid,
                boundary.values,
                drawstyle="steps-post",
                label=label,
                gid=CURVE_ID.format(index=index),
            )
        ax.set_xlabel("t")
        ax.set_ylabel("a(t)")
        ax.set_title("Optimal stopping boundary")
        if len(curves) > 1:
            ax.legend()
        file_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(file_path, format="svg", metadata={"Date": None})
    logger.debug(f"Wrote {len(curves)} curve(s) to {file_path}")
