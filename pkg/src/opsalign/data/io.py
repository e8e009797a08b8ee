"""CSV ingestion and emission for unit recordings.

Schema: a UTF-8 CSV with a mandatory header row, '.' decimal separator,
one row per timestep, columns "unit_id,cycle,<18 channel names>" in the
order of series.CHANNELS (altitude first). Rows of one unit must be
contiguous and time-ordered. Fault onset and end-of-life cycles per unit
come from a JSON sidecar (default: <csv path> + ".meta.json").
"""

import csv
import json
from pathlib import Path

import numpy as np

from .series import CHANNELS, MultivariateSeries


class SchemaError(ValueError):
    """CSV does not follow the documented column schema."""


def meta_path_for(csv_path):
    return Path(str(csv_path) + ".meta.json")


def load_csv(path, metadata_path=None):
    """Parse one CSV into a list of MultivariateSeries, one per unit."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        expected = ["unit_id", "cycle"] + CHANNELS
        missing = [c for c in expected if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(repr(m) for m in missing)}")
        col = {name: header.index(name) for name in expected}

        units = {}
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < len(header):
                raise SchemaError(f"{path}: row {row_no} has {len(row)} fields, expected {len(header)}")
            unit = row[col["unit_id"]]
            rec = units.setdefault(unit, {"cycle": [], "values": []})
            try:
                rec["cycle"].append(int(float(row[col["cycle"]])))
            except ValueError:
                raise SchemaError(f"{path}: row {row_no}, column 'cycle': non-numeric value {row[col['cycle']]!r}") from None
            vals = []
            for name in CHANNELS:
                cell = row[col[name]]
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise SchemaError(f"{path}: row {row_no}, column {name!r}: non-numeric value {cell!r}") from None
            rec["values"].append(vals)

    if not units:
        raise SchemaError(f"{path}: no data rows")

    meta = {}
    metadata_path = Path(metadata_path) if metadata_path else meta_path_for(path)
    if metadata_path.exists():
        meta = json.loads(metadata_path.read_text())

    out = []
    for unit_id, rec in units.items():
        unit_meta = meta.get("units", {}).get(unit_id, {})
        out.append(MultivariateSeries(
            unit_id=unit_id,
            values=np.asarray(rec["values"], dtype=np.float64).T,
            sample_rate_hz=float(meta.get("sample_rate_hz", 1.0)),
            cycle_index=np.asarray(rec["cycle"], dtype=np.int64),
            fault_onset_cycle=unit_meta.get("fault_onset_cycle"),
            eol_cycle=unit_meta.get("eol_cycle"),
        ))
    return out


def write_csv(path, series_list, metadata=None):
    """Emit series to the schema CSV plus the JSON sidecar."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["unit_id", "cycle"] + CHANNELS)
        for series in series_list:
            for t in range(series.n_timesteps):
                writer.writerow(
                    [series.unit_id, int(series.cycle_index[t])]
                    + [repr(float(v)) for v in series.values[:, t]]
                )
    meta = {"sample_rate_hz": series_list[0].sample_rate_hz if series_list else 1.0, "units": {}}
    for series in series_list:
        entry = {}
        if series.fault_onset_cycle is not None:
            entry["fault_onset_cycle"] = int(series.fault_onset_cycle)
        if series.eol_cycle is not None:
            entry["eol_cycle"] = int(series.eol_cycle)
        meta["units"][series.unit_id] = entry
    if metadata:
        meta.update(metadata)
    meta_path_for(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path
