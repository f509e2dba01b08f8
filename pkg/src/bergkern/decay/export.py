"""
Decay Export
============

Machine-readable outputs of a decay run. Floats are written with repr() so the files are
byte-identical for identical inputs.

    report JSON      DecayReport.to_dict() plus optional extra sections
    samples CSV      z_re, z_im, w_re, w_im, d_phi, d_tau, log_norm_kernel, kernel_err
    plot data        two whitespace-separated columns: d_phi log_norm_kernel
"""

import csv
import io
from pathlib import Path
from typing import Any, Iterable, Optional, Union

from ..utils.files import atomic_write_text, dumps_json
from .models import CSV_COLUMNS, DecayReport, SamplePair


def _fmt(value: float) -> str:
    return repr(float(value))


def samples_to_csv(samples: Iterable[SamplePair]) -> str:
    """CSV text with a header row."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for sample in samples:
        row = sample.to_row()
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buffer.getvalue()


def plot_data(samples: Iterable[SamplePair]) -> str:
    """'# d_phi log_norm_kernel' header, then one pair per line."""
    lines = ["# d_phi log_norm_kernel"]
    lines += [f"{_fmt(s.d_phi)} {_fmt(s.log_norm_kernel)}" for s in samples]
    return "\n".join(lines) + "\n"


def report_payload(report: DecayReport, extra: Optional[dict[str, Any]] = None) -> dict[str, Any]:
    payload = report.to_dict()
    if extra:
        payload.update(extra)
    return payload


def write_decay_outputs(
    out_dir: Union[str, Path],
    report: DecayReport,
    samples: Iterable[SamplePair],
    extra: Optional[dict[str, Any]] = None,
    prefix: str = "decay",
) -> dict[str, Path]:
    """
    Write <prefix>-report.json, <prefix>-samples.csv and <prefix>-plot.dat atomically.

    Returns:
        Mapping of artifact kind to path
    """
    out_dir = Path(out_dir)
    samples = list(samples)
    return {
        "report": atomic_write_text(out_dir / f"{prefix}-report.json", dumps_json(report_payload(report, extra))),
        "samples": atomic_write_text(out_dir / f"{prefix}-samples.csv", samples_to_csv(samples)),
        "plot": atomic_write_text(out_dir / f"{prefix}-plot.dat", plot_data(samples)),
    }
