"""Dataset, model, points and report files.

Formats are deliberately plain: datasets are CSV tables with one header
record, everything else is schema-versioned JSON.  All floating-point values
are written with ``repr`` (shortest round-trip), so save followed by load is
bit-exact.
"""

import csv
import json

import numpy as np
import scipy.linalg as spla

from .errors import DimensionMismatch, ParseError, UnstableModel
from .loewner import TangentialData
from .lti import ComplexROM, Domain, StateSpaceModel
from .sampling import FrequencyResponseData, ImpulseResponseData

DATASET_KINDS = ("frd", "ird")


# ---------------------------------------------------------------------------
# CSV datasets

def save_dataset(path, dataset):
    """Write a dataset as CSV: one header record, then (grid, out, in, re, im) rows."""
    if isinstance(dataset, FrequencyResponseData):
        kind, grid = "frd", dataset.omegas
    elif isinstance(dataset, ImpulseResponseData):
        kind, grid = "ird", dataset.times
    else:
        raise TypeError(f"cannot save {type(dataset).__name__} as a dataset")
    values = dataset.values
    count, p, m = values.shape
    spacing = float(grid[1] - grid[0]) if count > 1 else 0.0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([kind, dataset.domain.value, p, m, count, repr(spacing)])
        for k in range(count):
            g = repr(float(grid[k]))
            for i in range(p):
                for j in range(m):
                    v = values[k, i, j]
                    writer.writerow([g, i, j, repr(float(v.real)), repr(float(np.imag(v)))])


def _parse_header(row, path):
    if len(row) != 6:
        raise ParseError("header must have 6 fields: kind,domain,p,m,count,spacing",
                         path=path, line=1)
    kind = row[0].strip()
    if kind not in DATASET_KINDS:
        raise ParseError(f"unknown dataset kind {kind!r}", path=path, line=1)
    try:
        domain = Domain(row[1].strip())
        p, m, count = int(row[2]), int(row[3]), int(row[4])
        spacing = float(row[5])
    except ValueError as exc:
        raise ParseError(f"bad header field: {exc}", path=path, line=1) from exc
    return kind, domain, p, m, count, spacing


def load_dataset(path):
    """Load a CSV dataset, checking full grid x p x m coverage."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", path=path, line=1) from None
        kind, domain, p, m, count, spacing = _parse_header(header, path)
        grid_index = {}
        grid = []
        values = np.full((count, p, m), np.nan + 0j, dtype=complex)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise ParseError("data rows need 5 fields: grid,out,in,re,im",
                                 path=path, line=lineno)
            try:
                g = float(row[0])
                i, j = int(row[1]), int(row[2])
                re, im = float(row[3]), float(row[4])
            except ValueError as exc:
                raise ParseError(f"bad field: {exc}", path=path, line=lineno) from exc
            if not (0 <= i < p and 0 <= j < m):
                raise ParseError(f"output/input index ({i},{j}) out of range",
                                 path=path, line=lineno)
            if kind == "ird" and im != 0.0:
                raise ParseError("impulse-response data must have zero imaginary part",
                                 path=path, line=lineno)
            if g not in grid_index:
                if len(grid) >= count:
                    raise ParseError("more grid points than declared in header",
                                     path=path, line=lineno)
                grid_index[g] = len(grid)
                grid.append(g)
            k = grid_index[g]
            if not np.isnan(values[k, i, j].real):
                raise ParseError(f"duplicate entry for grid point {g} ({i},{j})",
                                 path=path, line=lineno)
            values[k, i, j] = re + 1j * im
    if len(grid) != count:
        raise DimensionMismatch(
            f"{path}: found {len(grid)} grid points, header declares {count}")
    if np.isnan(values.real).any():
        raise DimensionMismatch(f"{path}: incomplete grid x output x input coverage")
    grid = np.asarray(grid)
    order = np.argsort(grid)
    grid, values = grid[order], values[order]
    if count > 1:
        actual = float(grid[1] - grid[0])
        if spacing != 0.0 and abs(actual - spacing) > 1e-9 * max(abs(spacing), 1.0):
            raise DimensionMismatch(
                f"{path}: header spacing {spacing} does not match grid spacing {actual}")
    if kind == "frd":
        return FrequencyResponseData(omegas=grid, values=values, domain=domain)
    return ImpulseResponseData(times=grid, values=values.real, domain=domain)


def load_frd(path):
    data = load_dataset(path)
    if not isinstance(data, FrequencyResponseData):
        raise ParseError("expected frequency-response data", path=path, line=1)
    return data


def load_ird(path):
    data = load_dataset(path)
    if not isinstance(data, ImpulseResponseData):
        raise ParseError("expected impulse-response data", path=path, line=1)
    return data


# ---------------------------------------------------------------------------
# JSON helpers

def _complex_out(arr):
    arr = np.asarray(arr)
    return {"re": arr.real.tolist(), "im": arr.imag.tolist()}


def _complex_in(obj, path, what):
    try:
        return np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad complex field {what}: {exc}", path=path) from exc


def _load_json(path, expected_format):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), path=path, line=exc.lineno) from exc
    if not isinstance(doc, dict) or doc.get("format") != expected_format:
        raise ParseError(f"not a {expected_format} document", path=path, line=1)
    return doc


def _dump_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


# ---------------------------------------------------------------------------
# models

def save_model(path, model):
    """Write a real model or a complex reduced realization as JSON."""
    if isinstance(model, StateSpaceModel):
        doc = {
            "format": "qlf-model", "version": 1, "domain": model.domain.value,
            "n": model.order, "m": model.num_inputs, "p": model.num_outputs,
            "A": model.A.tolist(), "B": model.B.tolist(), "C": model.C.tolist(),
        }
    elif isinstance(model, ComplexROM):
        doc = {
            "format": "qlf-rom", "version": 1, "domain": model.domain.value,
            "r": model.order, "m": model.num_inputs, "p": model.num_outputs,
            "A": _complex_out(model.A), "B": _complex_out(model.B), "C": _complex_out(model.C),
        }
    else:
        raise TypeError(f"cannot save {type(model).__name__}")
    _dump_json(path, doc)


def load_model(path):
    """Load either model flavour; returns StateSpaceModel or ComplexROM."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), path=path, line=exc.lineno) from exc
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if fmt == "qlf-model":
        order_key, cls = "n", StateSpaceModel
    elif fmt == "qlf-rom":
        order_key, cls = "r", ComplexROM
    else:
        raise ParseError("not a qlf model/rom document", path=path, line=1)
    try:
        domain = Domain(doc["domain"])
        n, m, p = int(doc[order_key]), int(doc["m"]), int(doc["p"])
        if fmt == "qlf-model":
            A = np.asarray(doc["A"], dtype=float)
            B = np.asarray(doc["B"], dtype=float)
            C = np.asarray(doc["C"], dtype=float)
        else:
            A = _complex_in(doc["A"], path, "A")
            B = _complex_in(doc["B"], path, "B")
            C = _complex_in(doc["C"], path, "C")
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad model document: {exc}", path=path) from exc
    if A.shape != (n, n) or B.shape != (n, m) or C.shape != (p, n):
        raise DimensionMismatch(
            f"{path}: declared dimensions ({n},{m},{p}) do not match arrays "
            f"{A.shape}/{B.shape}/{C.shape}")
    return cls(A=A, B=B, C=C, domain=domain)


# ---------------------------------------------------------------------------
# tangential data and samples

def save_points(path, data):
    doc = {
        "format": "qlf-points", "version": 1, "domain": data.domain.value,
        "hermite": bool(data.hermite),
        "sigma": _complex_out(data.sigma), "mu": _complex_out(data.mu),
        "b": _complex_out(data.b), "c": _complex_out(data.c),
    }
    _dump_json(path, doc)


def load_points(path):
    doc = _load_json(path, "qlf-points")
    try:
        domain = Domain(doc["domain"])
        hermite = bool(doc["hermite"])
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad points document: {exc}", path=path) from exc
    return TangentialData(
        sigma=_complex_in(doc["sigma"], path, "sigma"),
        mu=_complex_in(doc["mu"], path, "mu"),
        b=_complex_in(doc["b"], path, "b"),
        c=_complex_in(doc["c"], path, "c"),
        hermite=hermite, domain=domain,
    )


def save_samples(path, samples):
    doc = {
        "format": "qlf-samples", "version": 1,
        "r": samples.r,
        "right": _complex_out(samples.right),
        "left": _complex_out(samples.left),
        "hermite_diag": None if samples.hermite_diag is None else _complex_out(samples.hermite_diag),
    }
    _dump_json(path, doc)


def save_report(path, report):
    """Write a run report; the dict must already be JSON-serializable."""
    doc = {"format": "qlf-report", "version": 1}
    doc.update(report)
    _dump_json(path, doc)


# ---------------------------------------------------------------------------
# dataset synthesis from a truth model

def _stacked_resolvent_values(model, points_on_axis):
    n, m = model.order, model.num_inputs
    M = points_on_axis[:, None, None] * np.eye(n) - model.A
    sol = np.linalg.solve(M, np.broadcast_to(model.B, (len(points_on_axis), n, m)))
    return model.C @ sol


def synthesize_frd(model, start, stop, count):
    """Tabulate the frequency response on a uniform grid."""
    if not model.is_stable():
        raise UnstableModel("refusing to synthesize data from an unstable model")
    if count < 2:
        raise DimensionMismatch("need at least two grid points")
    omegas = np.linspace(start, stop, count)
    if model.domain is Domain.CONTINUOUS:
        values = _stacked_resolvent_values(model, 1j * omegas)
    else:
        if stop > np.pi * (1 + 1e-12):
            raise DimensionMismatch("discrete-time frequency grids live in [0, pi]")
        values = _stacked_resolvent_values(model, np.exp(1j * omegas))
    return FrequencyResponseData(omegas=omegas, values=values, domain=model.domain)


def synthesize_ird(model, stop, count):
    """Tabulate the impulse response: h(t) on [0, stop] or h(k) for k < count."""
    if not model.is_stable():
        raise UnstableModel("refusing to synthesize data from an unstable model")
    if count < 2:
        raise DimensionMismatch("need at least two grid points")
    n = model.order
    values = np.empty((count, model.num_outputs, model.num_inputs))
    if model.domain is Domain.CONTINUOUS:
        times = np.linspace(0.0, stop, count)
        step = spla.expm(model.A * float(times[1] - times[0]))
    else:
        times = np.arange(count, dtype=float)
        step = model.A
    M = model.B.copy()
    for k in range(count):
        values[k] = model.C @ M
        M = step @ M
    return ImpulseResponseData(times=times, values=values, domain=model.domain)


def synthesize_dataset(model, kind, start, stop, count):
    if kind == "frd":
        return synthesize_frd(model, start, stop, count)
    if kind == "ird":
        if model.domain is Domain.CONTINUOUS and start != 0.0:
            raise DimensionMismatch("impulse-response grids must start at t = 0")
        return synthesize_ird(model, stop, count)
    raise ValueError(f"unknown dataset kind {kind!r}")
