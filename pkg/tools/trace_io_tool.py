"""
Trace IO Tool.
CSV emission of ψ traces and replayable lemma instance files.
"""
import csv
import os
from fractions import Fraction
from typing import Dict, IO, List, Optional

import mpmath

from core.errors import InputError
from core.lattice import Lattice
from core.minima import LatticePoint
from core.scale import ScaleValue
from tools.exponent_tool import DPS, Trace
from tools.lemma_tool import LemmaInstance

HEADER = ["u", "s", "p", "lambda", "psi", "event"]
EXACT_HEADER = ["lambda_q", "lambda_rho", "lambda_k"]
DIGITS = 15


def _decimal(value) -> str:
    return mpmath.nstr(value, DIGITS, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


def write_trace_csv(trace: Trace, stream: IO[str], exact: bool = False) -> int:
    """
    Write one row per (sample, p) in u order and return the number of rows.

    Decimals carry 15 significant digits. With `exact`, λ = lambda_q·lambda_rho^(1/lambda_k)
    follows in lowest terms.
    """
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(HEADER + (EXACT_HEADER if exact else []))
    rows = 0
    with mpmath.workdps(DPS):
        for sample in trace.samples:
            u = sample.u.to_decimal(DIGITS)
            s = _decimal(sample.s)
            for p, (lam, psi) in enumerate(zip(sample.lambdas, sample.psis), start=1):
                row = [u, s, p, lam.to_decimal(DIGITS), _decimal(psi), int(sample.event)]
                if exact:
                    canonical = lam.canonical
                    row += [str(canonical.coefficient), str(canonical.radicand), canonical.degree]
                writer.writerow(row)
                rows += 1
    return rows


def read_trace_csv(stream: IO[str]) -> List[Dict[str, object]]:
    """Parse rows written by write_trace_csv; exact columns become a ScaleValue under `lambda_exact`."""
    reader = csv.DictReader(stream)
    if reader.fieldnames is None or reader.fieldnames[:len(HEADER)] != HEADER:
        raise InputError(f"trace CSV must start with header {','.join(HEADER)}")
    rows = []
    for record in reader:
        row: Dict[str, object] = {
            "u": Fraction(record["u"]),
            "s": Fraction(record["s"]),
            "p": int(record["p"]),
            "lambda": Fraction(record["lambda"]),
            "psi": Fraction(record["psi"]),
            "event": record["event"] == "1",
        }
        if record.get("lambda_q"):
            row["lambda_exact"] = ScaleValue(
                Fraction(record["lambda_q"]), Fraction(record["lambda_rho"]), int(record["lambda_k"])
            )
        rows.append(row)
    return rows


def output_path(path: Optional[str], directory: Optional[str] = None) -> Optional[str]:
    """Resolve a relative output path against `directory` or MINIMA_LAB_OUTPUT_DIR."""
    if path is None or path == "-" or os.path.isabs(path):
        return path
    directory = directory or os.getenv("MINIMA_LAB_OUTPUT_DIR")
    return os.path.join(directory, path) if directory else path


# Lemma replay files

def dumps_instance(instance: LemmaInstance) -> str:
    """`key = value` lines with exact rationals; basis rows are separated by `|`."""
    lines = [
        f"seed = {instance.seed}",
        f"d = {instance.dimension}",
        "basis = " + " | ".join(" ".join(str(x) for x in row) for row in instance.lattice.basis),
        "half_widths = " + " ".join(str(h) for h in instance.half_widths),
        f"lambda = {instance.lam}",
        f"p = {instance.p}",
        "v = " + " ".join(str(a) for a in instance.v.coefficients),
    ]
    return "\n".join(lines) + "\n"


def loads_instance(text: str) -> LemmaInstance:
    fields: Dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"malformed replay line: {line!r}")
        fields[key.strip()] = value.strip()
    try:
        d = int(fields["d"])
        rows = [[Fraction(x) for x in row.split()] for row in fields["basis"].split("|")]
        half_widths = tuple(Fraction(x) for x in fields["half_widths"].split())
        lam = Fraction(fields["lambda"])
        p = int(fields["p"])
        coefficients = [int(a) for a in fields["v"].split()]
    except (KeyError, ValueError) as e:
        raise InputError(f"malformed replay file: {e}") from e
    if len(rows) != d or len(half_widths) != d or len(coefficients) != d:
        raise InputError(f"replay file fields must all have dimension {d}")
    lattice = Lattice.from_basis(rows, "replay", require_unimodular=False)
    v = LatticePoint.from_coefficients(lattice, coefficients)
    return LemmaInstance(lattice, half_widths, lam, p, v, fields.get("seed", ""))


def dump_instance(instance: LemmaInstance, directory: Optional[str] = None) -> str:
    """Write a replay file named after the instance seed and return its path."""
    directory = directory or os.getenv("MINIMA_LAB_OUTPUT_DIR") or "."
    os.makedirs(directory, exist_ok=True)
    name = "lemma-" + "".join(c if c.isalnum() else "-" for c in instance.seed or "instance") + ".txt"
    path = os.path.join(directory, name)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_instance(instance))
    return path


def load_instance(path: str) -> LemmaInstance:
    try:
        with open(path, encoding="utf-8") as handle:
            return loads_instance(handle.read())
    except OSError as e:
        raise InputError(f"cannot read replay file {path}: {e}") from e
