"""JSON and CSV serialisation (schema ``vrkit/1``).

Documents are dumped with sorted keys and shortest round-trip float reprs,
so parsing a document and dumping the parsed object again reproduces the
same bytes.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math

import numpy as np

from .loewner import (DiscreteMeasure, Exponent, MeasurePath, MeasurePiece, Slit, SlitPiece,
                      ThunderReport, Trajectory)
from .regions import BoundaryPiece, Region

SCHEMA = "vrkit/1"


class SchemaError(ValueError):
    pass


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def loads(text: str) -> dict:
    doc = json.loads(text)
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise SchemaError(f"not a {SCHEMA} document")
    return doc


def _c(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _z(pair) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise SchemaError(f"expected [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def _num(x):
    # infinite horizons are stored as null
    return None if x is None or math.isinf(x) else float(x)


def _plain(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    if isinstance(v, complex):
        return _c(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return v


# ---------------------------------------------------------------------------
# drivings

def driving_to_json(d) -> dict:
    if isinstance(d, Slit):
        return {"type": "slit", "pieces": [
            {"t_start": p.t_start, "t_end": _num(p.t_end), "value": p.value,
             **({"end_value": p.end_value} if p.end_value is not None else {})}
            for p in d.pieces]}
    if isinstance(d, MeasurePath):
        return {"type": "measure_path", "pieces": [
            {"t_start": p.t_start, "t_end": _num(p.t_end),
             "atoms": [[float(u), float(lam)] for u, lam in zip(p.measure.positions, p.measure.weights)]}
            for p in d.pieces]}
    if isinstance(d, Exponent):
        return {"type": "exponent", "x": d.x, "z0": _c(d.z0)}
    raise TypeError(f"cannot serialise driving {type(d).__name__}")


def _t_end(v):
    return math.inf if v is None else float(v)


def driving_from_json(data: dict):
    kind = data.get("type")
    try:
        if kind == "slit":
            return Slit(tuple(SlitPiece(float(p["t_start"]), _t_end(p["t_end"]), float(p["value"]),
                                        None if p.get("end_value") is None else float(p["end_value"]))
                              for p in data["pieces"]))
        if kind == "measure_path":
            pieces = []
            for p in data["pieces"]:
                atoms = np.asarray(p["atoms"], dtype=float).reshape(-1, 2)
                meas = DiscreteMeasure(tuple(atoms[:, 0]), tuple(atoms[:, 1]), domain="halfline")
                pieces.append(MeasurePiece(float(p["t_start"]), _t_end(p["t_end"]), meas))
            return MeasurePath(tuple(pieces))
        if kind == "exponent":
            return Exponent(float(data["x"]), _z(data["z0"]))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed driving: {exc}") from exc
    raise SchemaError(f"unknown driving type {kind!r}")


# ---------------------------------------------------------------------------
# trajectories

def trajectory_to_json(traj: Trajectory, thunder: ThunderReport | None = None,
                       param: str = "t") -> dict:
    doc = {
        "schema": SCHEMA,
        "type": "trajectory",
        "param": param,
        "z0": _c(traj.z0),
        "samples": [[float(t), float(w.real), float(w.imag)] for t, w in zip(traj.t, traj.w)],
        "driving": driving_to_json(traj.driving),
    }
    if thunder is not None:
        doc["thunder"] = {"max_lower_violation": thunder.max_lower_violation,
                          "min_upper_slack": _num(thunder.min_upper_slack),
                          "n_samples": thunder.n_samples, "upper_strict": thunder.upper_strict}
    return doc


def trajectory_from_json(doc: dict):
    """Returns ``(trajectory, thunder report or None, param)``."""
    if doc.get("type") != "trajectory":
        raise SchemaError("not a trajectory document")
    s = np.asarray(doc["samples"], dtype=float).reshape(-1, 3)
    traj = Trajectory(s[:, 0], s[:, 1] + 1j * s[:, 2], driving_from_json(doc["driving"]), _z(doc["z0"]))
    th = doc.get("thunder")
    report = None
    if th is not None:
        slack = th["min_upper_slack"]
        report = ThunderReport(float(th["max_lower_violation"]), math.inf if slack is None else float(slack),
                               int(th["n_samples"]))
    return traj, report, doc.get("param", "t")


# ---------------------------------------------------------------------------
# regions

def region_to_json(region: Region) -> dict:
    return {
        "schema": SCHEMA,
        "type": "region",
        "kind": region.kind,
        "z0": _c(region.z0),
        "closed": bool(region.closed),
        "mode": region.mode,
        "params": _plain(region.params),
        "pieces": [{"name": p.name, "included": bool(p.included),
                    "vertices": [_c(v) for v in p.vertices]} for p in region.pieces],
        "points": [{"name": n, "value": _c(v), "included": bool(i)} for n, v, i in region.points],
    }


def region_from_json(doc: dict) -> Region:
    """Rebuild a region from its boundary data.  The result classifies by
    winding number against the stored polylines."""
    if doc.get("type") != "region":
        raise SchemaError("not a region document")
    try:
        pieces = tuple(BoundaryPiece(p["name"], np.array([_z(v) for v in p["vertices"]], dtype=complex),
                                     bool(p["included"])) for p in doc["pieces"])
        points = tuple((q["name"], _z(q["value"]), bool(q["included"])) for q in doc["points"])
        return Region(doc["kind"], _z(doc["z0"]), pieces, closed=bool(doc["closed"]),
                      params=dict(doc["params"]), points=points, mode=doc["mode"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed region: {exc}") from exc


# ---------------------------------------------------------------------------
# curves

def curve_to_json(kind: str, z0: complex, t, w, params=None) -> dict:
    return {"schema": SCHEMA, "type": "curve", "kind": kind, "z0": _c(z0), "params": _plain(params or {}),
            "samples": [[float(a), float(b.real), float(b.imag)] for a, b in zip(np.ravel(t), np.ravel(w))]}


def curve_to_csv(t, w) -> str:
    buf = _io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["t", "re", "im"])
    for a, b in zip(np.ravel(t), np.ravel(w)):
        out.writerow([repr(float(a)), repr(float(b.real)), repr(float(b.imag))])
    return buf.getvalue()


def curve_from_csv(text: str):
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows or rows[0] != ["t", "re", "im"]:
        raise SchemaError("CSV header must be t,re,im")
    a = np.array(rows[1:], dtype=float).reshape(-1, 3)
    return a[:, 0], a[:, 1] + 1j * a[:, 2]


def report_to_json(report) -> dict:
    return {"schema": SCHEMA, "type": "verify_report", **_plain(report.to_json())}
