"""
Plot-ready artifacts of an experiment run: a CSV of risk reductions and a JSON sidecar with the run settings.
"""

import json
import logging
import typing as t

import numpy as np
import pandas as pd
from smart_open import open

from poshrink.experiments.runner import ExperimentResult, ReductionRow

logger = logging.getLogger(__name__)

PLOT_COLUMNS = ["Lambda", "prior", "reduction", "se", "log_reduction"]
FLOAT_FORMAT = "%.10g"


def plot_frame(table: t.Sequence[ReductionRow]) -> pd.DataFrame:
    """
    :param table: Reduction rows.

    :return: Frame sorted by ``(Lambda, prior)``; ``log_reduction`` is the natural log, NaN for non-positive values.
    """
    frame = pd.DataFrame([row.dict(include={"Lambda", "prior", "reduction", "se"}) for row in table])
    if frame.empty:
        return pd.DataFrame(columns=PLOT_COLUMNS)
    reduction = frame["reduction"].to_numpy(dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        frame["log_reduction"] = np.where(reduction > 0, np.log(np.where(reduction > 0, reduction, 1.0)), np.nan)
    frame = frame.sort_values(["Lambda", "prior"], kind="mergesort").reset_index(drop=True)
    return frame[PLOT_COLUMNS]


def emit_plot_data(table: t.Sequence[ReductionRow], path: str) -> None:
    """
    Write reduction rows as CSV with header ``Lambda,prior,reduction,se,log_reduction``.

    :param table: Reduction rows, possibly empty.
    :param path: Local path or URL understood by ``smart_open``.
    """
    frame = plot_frame(table)
    with open(path, "w") as f:
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")


def write_sidecar(result: ExperimentResult, path: str) -> None:
    """
    Write settings, absolute risks and sensitivity rows of a run as JSON with sorted keys.
    """
    payload = {
        "settings": result.settings.dict(),
        "minimax_lower": result.minimax_lower,
        "risks": [row.dict() for row in result.risks],
        "sensitivity": [row.dict() for row in result.sensitivity],
    }
    with open(path, "w") as f:
        f.write(json.dumps(payload, sort_keys=True, indent=2))
        f.write("\n")


def write_experiment(result: ExperimentResult, out_dir: str) -> t.Tuple[str, str]:
    """
    Write ``experiment_<id>.csv`` and ``experiment_<id>.json`` into ``out_dir``.

    :return: The two paths.
    """
    stem = f"{out_dir.rstrip('/')}/experiment_{result.settings.experiment}"
    emit_plot_data(result.rows, f"{stem}.csv")
    write_sidecar(result, f"{stem}.json")
    return f"{stem}.csv", f"{stem}.json"
