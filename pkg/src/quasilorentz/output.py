"""Text formats: survival CSV, run summaries and the run manifest."""

import json
import os
from dataclasses import dataclass, field as dc_field

import numpy as np

from .stats import SurvivalCurve

CSV_HEADER = "T,survival,count_ge"


def format_float(x):
    return f"{x:.15g}"


def curve_to_csv(curve):
    lines = [CSV_HEADER]
    for t, s, c in zip(curve.thresholds, curve.survival, curve.count_ge):
        lines.append(f"{format_float(t)},{format_float(s)},{int(c)}")
    return "\n".join(lines) + "\n"


def curve_from_csv(text, n, epsilon, field_tag, censor_limit):
    """Parse a survival CSV; survival is recomputed exactly as ``count_ge / n``."""
    rows = text.strip("\n").split("\n")
    if rows[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {rows[0]!r}")
    t, c = [], []
    for row in rows[1:]:
        a, _, cnt = row.split(",")
        t.append(float(a))
        c.append(int(cnt))
    count_ge = np.array(c, dtype=np.int64)
    return SurvivalCurve(
        thresholds=np.array(t, dtype=np.float64),
        survival=count_ge / n,
        count_ge=count_ge,
        n=int(n),
        epsilon=float(epsilon),
        field_tag=field_tag,
        censor_limit=float(censor_limit),
    )


def run_summary(result, curve, fit, extra_fits=()):
    cfg = result.config
    out = dict(result.field.describe())
    out.update(
        {
            "epsilon": cfg.epsilon,
            "n": cfg.n_trajectories,
            "seed": cfg.seed,
            "censored": result.censored,
            "max_steps": cfg.max_steps,
            "censor_limit": curve.censor_limit,
        }
    )
    if fit is not None:
        out["fit"] = fit.to_dict()
    if extra_fits:
        out["fits"] = {f.model: f.to_dict() for f in extra_fits}
    return out


def load_curve(csv_path, summary):
    """Read back a curve written alongside ``summary`` (a dict or JSON path)."""
    if not isinstance(summary, dict):
        with open(summary, encoding="utf-8") as fh:
            summary = json.load(fh)
    with open(csv_path, encoding="utf-8") as fh:
        text = fh.read()
    return curve_from_csv(text, summary["n"], summary["epsilon"], summary["field"], summary["censor_limit"])


def dumps_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


@dataclass
class RunManifest:
    config: dict
    fields: list
    output_dir: str
    emitted_files: list = dc_field(default_factory=list)
    wall_time: float = 0.0

    def to_dict(self):
        return {
            "config": self.config,
            "fields": self.fields,
            "output_dir": self.output_dir,
            "emitted_files": [list(e) for e in self.emitted_files],
            "wall_time": self.wall_time,
        }


class AtomicWriter:
    """Stage files next to their targets and publish them all at once.

    Nothing is visible under the final names until :meth:`commit`; on error
    the staged files are removed.
    """

    def __init__(self, directory):
        self.directory = directory
        self._staged = []

    def __enter__(self):
        os.makedirs(self.directory, exist_ok=True)
        return self

    def write(self, name, text):
        final = os.path.join(self.directory, name)
        tmp = os.path.join(self.directory, f".{name}.partial")
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        self._staged.append((tmp, final))
        return final

    def commit(self):
        for tmp, final in self._staged:
            os.replace(tmp, final)
        self._staged = []

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            for tmp, _ in self._staged:
                try:
                    os.remove(tmp)
                except OSError:
                    pass
            self._staged = []
        else:
            self.commit()
        return False
