"""CSV ingestion, ground-truth sidecars, and report serialization.

Floats written to CSV use shortest round-trip precision (``repr``), so a
parse of the emitted file reproduces every value bit-exactly.  Reports are
emitted as a JSON tree with all reals in 17-significant-digit scientific
notation, which also round-trips exactly and keeps the output
byte-deterministic.
"""

from __future__ import annotations

import json

import numpy as np

from .geometry import Dataset, LineParams


def write_dataset_csv(path, d: Dataset) -> None:
    with open(path, "w") as fh:
        fh.write("x,y\n")
        for x, y in zip(d.x, d.y):
            fh.write(f"{float(x)!r},{float(y)!r}\n")


def read_dataset_csv(path) -> Dataset:
    """Parse a two-column CSV; the "x,y" header is optional.

    Malformed rows raise ValueError with the offending line number.
    """
    xs, ys = [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            if lineno == 1 and text.lower().replace(" ", "") == "x,y":
                continue
            parts = text.split(",")
            if len(parts) != 2:
                raise ValueError(f"{path}: line {lineno}: expected two columns")
            try:
                xs.append(float(parts[0]))
                ys.append(float(parts[1]))
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: could not parse point {text!r}"
                ) from None
    return Dataset(np.array(xs, dtype=np.float64), np.array(ys, dtype=np.float64))


def write_truth_sidecar(path, line: LineParams, d: Dataset, outlier_mask) -> None:
    """Same CSV dialect plus a line-parameter header comment and outlier flags."""
    with open(path, "w") as fh:
        fh.write(f"# line a={float(line.a)!r} b={float(line.b)!r} c={float(line.c)!r}\n")
        fh.write("x,y,outlier\n")
        for x, y, o in zip(d.x, d.y, outlier_mask):
            fh.write(f"{float(x)!r},{float(y)!r},{int(o)}\n")


def read_truth_sidecar(path):
    """Returns (line, dataset, outlier mask) from a sidecar file."""
    line = None
    xs, ys, mask = [], [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text:
                continue
            if text.startswith("#"):
                if text.startswith("# line "):
                    fields = dict(
                        tok.split("=", 1) for tok in text[len("# line ") :].split()
                    )
                    line = LineParams(
                        float(fields["a"]), float(fields["b"]), float(fields["c"])
                    )
                continue
            if text.lower().replace(" ", "") == "x,y,outlier":
                continue
            parts = text.split(",")
            if len(parts) != 3:
                raise ValueError(f"{path}: line {lineno}: expected three columns")
            xs.append(float(parts[0]))
            ys.append(float(parts[1]))
            mask.append(bool(int(parts[2])))
    if line is None:
        raise ValueError(f"{path}: missing '# line' header")
    d = Dataset(np.array(xs, dtype=np.float64), np.array(ys, dtype=np.float64))
    return line, d, np.array(mask, dtype=bool)


def _render(value, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f'{pad}  {json.dumps(str(k))}: {_render(v, indent + 1)}'
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}  {_render(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.16e}"
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize {type(value)!r}")


def dumps_tree(tree: dict) -> str:
    """Serialize a report tree to JSON text with 17-digit reals."""
    return _render(tree, 0) + "\n"


def loads_tree(text: str) -> dict:
    return json.loads(text)
