"""
Distribution grids and their CSV / JSON encodings.

CSV: '# key=value' header lines, then a 'p,x,value' table with x varying
fastest ('p,x,dsum,ssum,hyper,asc' for --form all).
JSON: {"meta": {...}, "p": [...], "x": [...], "values": [[row per p]]}
plus "forms" for --form all.
"""
import csv
import io
import itertools
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from src.cli import APP_VERSION_LABEL
from src.core.errors import DomainError
from src.oscillator.model import ModelParams, as_state
from src.phasespace.husimi import husimi
from src.phasespace.moments import mean_momentum
from src.phasespace.wigner import CLOSED_FORMS, WignerForm, wigner
from src.quadrature.oracles import husimi_oracle

log = logging.getLogger(__name__)

DISTRIBUTIONS = ("wigner", "husimi")
FORM_CHOICES = tuple(form.value for form in WignerForm) + ("all",)
HUSIMI_FORMS = ("dsum", "integral")


@dataclass(frozen=True)
class GridSpec:
    """Uniform closed grid over [p_min, p_max] x [x_min, x_max]"""
    p_min: float
    p_max: float
    x_min: float
    x_max: float
    n_p: int
    n_x: int

    def __post_init__(self):
        for low, high, name in ((self.p_min, self.p_max, "p"), (self.x_min, self.x_max, "x")):
            if not (math.isfinite(low) and math.isfinite(high)) or low >= high:
                raise DomainError(f"grid needs {name}min < {name}max, got [{low}, {high}]")
        for count, name in ((self.n_p, "np"), (self.n_x, "nx")):
            if isinstance(count, bool) or int(count) != count or count < 2:
                raise DomainError(f"--{name} must be an integer >= 2, got {count!r}")
        object.__setattr__(self, "n_p", int(self.n_p))
        object.__setattr__(self, "n_x", int(self.n_x))

    @property
    def p_axis(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.n_p)

    @property
    def x_axis(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_x)

    def contains_p(self, p: float) -> bool:
        return self.p_min <= p <= self.p_max


@dataclass
class GridOutput:
    """Value matrix (one row per p) with provenance metadata"""
    meta: Dict[str, Any]
    p: List[float]
    x: List[float]
    values: np.ndarray
    forms: Optional[Dict[str, np.ndarray]] = field(default=None)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.p), len(self.x)):
            raise DomainError(
                f"value matrix shape {self.values.shape} does not match axes ({len(self.p)}, {len(self.x)})"
            )

    # --------------------------
    # JSON
    # --------------------------

    def to_json(self) -> str:
        document = {
            "meta": self.meta,
            "p": [float(v) for v in self.p],
            "x": [float(v) for v in self.x],
            "values": self.values.tolist(),
        }
        if self.forms:
            document["forms"] = {name: matrix.tolist() for name, matrix in self.forms.items()}
        return json.dumps(document, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "GridOutput":
        document = json.loads(text)
        forms = document.get("forms")
        return cls(
            meta=document["meta"],
            p=document["p"],
            x=document["x"],
            values=np.array(document["values"], dtype=float),
            forms={k: np.array(v, dtype=float) for k, v in forms.items()} if forms else None,
        )

    # --------------------------
    # CSV
    # --------------------------

    def to_csv(self) -> str:
        out = io.StringIO()
        for key, value in self.meta.items():
            out.write(f"# {key}={_format_meta(key, value)}\n")
        columns = list(self.forms) if self.forms else ["value"]
        matrices = [self.forms[c] for c in columns] if self.forms else [self.values]
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["p", "x"] + columns)
        for i, j in itertools.product(range(len(self.p)), range(len(self.x))):
            writer.writerow([repr(float(self.p[i])), repr(float(self.x[j]))]
                            + [repr(float(matrix[i, j])) for matrix in matrices])
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "GridOutput":
        meta: Dict[str, Any] = {}
        lines = text.splitlines()
        body_start = len(lines)
        for index, line in enumerate(lines):
            if not line.startswith("#"):
                body_start = index
                break
            key, _, value = line[1:].strip().partition("=")
            meta[key] = _parse_meta(key, value)
        reader = csv.DictReader(line for line in lines[body_start:] if line.strip())
        if not reader.fieldnames or reader.fieldnames[:2] != ["p", "x"] or len(reader.fieldnames) < 3:
            raise DomainError(f"CSV table header must start with 'p,x' and name a value column, "
                              f"got {reader.fieldnames}")
        columns = reader.fieldnames[2:]
        try:
            rows = [{name: float(row[name]) for name in reader.fieldnames} for row in reader]
        except (TypeError, ValueError) as e:
            raise DomainError(f"CSV table holds a malformed row: {e}") from e
        p_axis = _unique_in_order(r["p"] for r in rows)
        x_axis = _unique_in_order(r["x"] for r in rows)
        shape = (len(p_axis), len(x_axis))
        if len(rows) != shape[0] * shape[1]:
            raise DomainError(f"CSV holds {len(rows)} rows, expected {shape[0] * shape[1]}")
        matrices = {
            name: np.array([r[name] for r in rows], dtype=float).reshape(shape)
            for name in columns
        }
        if columns == ["value"]:
            return cls(meta, p_axis, x_axis, matrices["value"])
        reference = str(meta.get("form_reference", columns[0]))
        return cls(meta, p_axis, x_axis, matrices[reference], forms=matrices)


def _format_meta(key: str, value: Any) -> str:
    if key == "q" and isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_meta(key: str, text: str) -> Any:
    if key == "q":
        return float(text)
    for convert in (int, float):
        try:
            return convert(text)
        except ValueError:
            continue
    return text


def _unique_in_order(values) -> List[float]:
    seen, ordered = set(), []
    for value in values:
        if value not in seen:
            seen.add(value)
            ordered.append(value)
    return ordered


# ============================================================================
# Evaluation
# ============================================================================

def _point_function(dist: str, form: str, n: int, params: ModelParams) -> Callable[[float, float], float]:
    if dist == "husimi":
        if form == "dsum":
            return lambda p, x: husimi(n, (p, x), params)
        return lambda p, x: husimi_oracle(n, (p, x), params)
    wigner_form = WignerForm(form)
    return lambda p, x: wigner(n, (p, x), params, wigner_form)


def _evaluate_matrix(f: Callable[[float, float], float], p_axis: np.ndarray, x_axis: np.ndarray,
                     workers: int) -> np.ndarray:
    def row(i: int) -> List[float]:
        p = float(p_axis[i])
        return [f(p, float(x)) for x in x_axis]

    values = np.empty((len(p_axis), len(x_axis)), dtype=float)
    if workers <= 1:
        for i in range(len(p_axis)):
            values[i, :] = row(i)
        return values
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves row order
        for i, computed in enumerate(pool.map(row, range(len(p_axis)))):
            values[i, :] = computed
    return values


def max_pairwise_deviation(forms: Dict[str, np.ndarray]) -> float:
    """Largest |A - B| over all pairs, relative to the grid max |value|"""
    scale = max(float(np.max(np.abs(m))) for m in forms.values())
    if scale == 0.0:
        scale = 1.0
    deviation = 0.0
    for a, b in itertools.combinations(forms.values(), 2):
        deviation = max(deviation, float(np.max(np.abs(a - b))))
    return deviation / scale


def evaluate_grid(spec: GridSpec, state, params: ModelParams, dist: str = "wigner",
                  form: str = "dsum", workers: int = 1) -> GridOutput:
    """
    Evaluate a distribution over the grid.

    Args:
        spec: Grid window and resolution
        state: Photon number or QuantumState
        params: Model parameters
        dist: "wigner" or "husimi"
        form: A WignerForm value or "all" (Wigner only); the Husimi function
            takes "dsum" (closed form) or "integral"
        workers: Threads evaluating grid rows

    Returns:
        GridOutput; rows are written in p order whatever the worker count
    """
    n = as_state(state).n
    if dist not in DISTRIBUTIONS:
        raise DomainError(f"unknown distribution {dist!r}")
    if form not in FORM_CHOICES:
        raise DomainError(f"unknown form {form!r}")
    if dist == "husimi" and form not in HUSIMI_FORMS:
        raise DomainError(f"the Husimi function has forms {', '.join(HUSIMI_FORMS)}, got {form!r}")

    p_bar = mean_momentum(n, params)
    if not spec.contains_p(p_bar):
        log.warning(f"Peak at p = {p_bar:g} lies outside [{spec.p_min:g}, {spec.p_max:g}]; "
                    f"try --pmin {p_bar - 6.0:g} --pmax {p_bar + 6.0:g}")

    p_axis, x_axis = spec.p_axis, spec.x_axis
    meta: Dict[str, Any] = {
        "version": APP_VERSION_LABEL,
        "distribution": dist,
        "form": form,
        "n": n,
    }
    meta.update(params.describe())
    meta.update({"pmin": spec.p_min, "pmax": spec.p_max, "xmin": spec.x_min, "xmax": spec.x_max,
                 "np": spec.n_p, "nx": spec.n_x})

    log.info(f"Evaluating {dist} ({form}) for n={n}, h={params.h:g} on {spec.n_p}x{spec.n_x} points")
    if form != "all":
        f = _point_function(dist, form, n, params)
        return GridOutput(meta, p_axis.tolist(), x_axis.tolist(), _evaluate_matrix(f, p_axis, x_axis, workers))

    forms = {
        closed.value: _evaluate_matrix(_point_function(dist, closed.value, n, params), p_axis, x_axis, workers)
        for closed in CLOSED_FORMS
    }
    meta["form_reference"] = WignerForm.DOUBLE_SUM.value
    meta["max_pairwise_deviation"] = max_pairwise_deviation(forms)
    log.info(f"Max pairwise deviation between closed forms: {meta['max_pairwise_deviation']:.3e}")
    return GridOutput(meta, p_axis.tolist(), x_axis.tolist(), forms[WignerForm.DOUBLE_SUM.value], forms=forms)
