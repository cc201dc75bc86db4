"""JSON schemas for series, tuples, representation specs, and models.

Complex scalars travel as [re, im] pairs, matrices as row-major nested
lists of those pairs (plain numbers are accepted on input for real
entries), and matrix tuples as {"d", "n", "matrices"}. Parsers validate
eagerly and raise SchemaError naming the JSON path of the offending
field, so CLI users see "$.terms[3].word" instead of a traceback from
three layers down. Serializers always emit the strict two-component
form; non-finite floats become null.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .herglotz import HerglotzModel
from .matcore import MatrixTuple, SchemaError
from .nevanlinna import RepresentationSpec
from .series import FreeSeries, require_real_free


def _fail(path: str, message: str):
    raise SchemaError(f"{path}: {message}")


def _load(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _get(obj: dict, key: str, path: str, required: bool = True):
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        if required:
            _fail(path, f"missing required key {key!r}")
        return None
    return obj[key]


def _as_number(x, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        _fail(path, f"expected a number, got {type(x).__name__}")
    if not math.isfinite(x):
        _fail(path, "number must be finite")
    return float(x)


def _as_int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        _fail(path, f"expected an integer, got {type(x).__name__}")
    return x


def _as_complex(x, path: str) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(_as_number(x, path), 0.0)
    if isinstance(x, list) and len(x) == 2:
        return complex(_as_number(x[0], path + "[0]"), _as_number(x[1], path + "[1]"))
    _fail(path, "expected a number or an [re, im] pair")


def _as_matrix(obj, path: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        _fail(path, "expected a non-empty list of rows")
    rows = []
    width = None
    for r, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            _fail(f"{path}[{r}]", "expected a non-empty row")
        if width is None:
            width = len(row)
        elif len(row) != width:
            _fail(f"{path}[{r}]", f"row length {len(row)} differs from {width}")
        rows.append([_as_complex(x, f"{path}[{r}][{c}]") for c, x in enumerate(row)])
    return np.array(rows, dtype=np.complex128)


def _as_vector(obj, path: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        _fail(path, "expected a non-empty list")
    return np.array([_as_complex(x, f"{path}[{i}]") for i, x in enumerate(obj)])


def parse_series(path: str) -> FreeSeries:
    data = _load(path)
    d = _as_int(_get(data, "d", "$"), "$.d")
    degree = _as_int(_get(data, "degree", "$"), "$.degree")
    real_free = bool(data.get("real_free", False))
    decay = data.get("decay_rate")
    if decay is not None:
        decay = _as_number(decay, "$.decay_rate")
    terms = _get(data, "terms", "$")
    if not isinstance(terms, list):
        _fail("$.terms", "expected a list")
    coeffs: dict[tuple[int, ...], complex] = {}
    for t, term in enumerate(terms):
        tpath = f"$.terms[{t}]"
        raw = _get(term, "word", tpath)
        if not isinstance(raw, list):
            _fail(tpath + ".word", "expected a list of letters")
        word = tuple(_as_int(x, f"{tpath}.word[{i}]") for i, x in enumerate(raw))
        for i, letter in enumerate(word):
            if not 1 <= letter <= d:
                _fail(f"{tpath}.word[{i}]", f"letter {letter} outside 1..{d}")
        if word in coeffs:
            _fail(tpath + ".word", f"duplicate word {list(word)}")
        re = _as_number(_get(term, "re", tpath), tpath + ".re")
        im = _as_number(term.get("im", 0.0), tpath + ".im")
        coeffs[word] = complex(re, im)
    try:
        f = FreeSeries(d=d, degree=degree, coeffs=coeffs, real_free=real_free, decay_rate=decay)
        if real_free:
            require_real_free(f, path)
    except ValueError as exc:
        raise SchemaError(f"$: {exc}") from exc
    return f


def parse_tuple(path: str) -> MatrixTuple:
    data = _load(path)
    d = _as_int(_get(data, "d", "$"), "$.d")
    n = _as_int(_get(data, "n", "$"), "$.n")
    mats = _get(data, "matrices", "$")
    if not isinstance(mats, list) or len(mats) != d:
        _fail("$.matrices", f"expected a list of {d} matrices")
    parsed = []
    for i, M in enumerate(mats):
        A = _as_matrix(M, f"$.matrices[{i}]")
        if A.shape != (n, n):
            _fail(f"$.matrices[{i}]", f"expected shape {n}x{n}, got {A.shape[0]}x{A.shape[1]}")
        parsed.append(A)
    try:
        return MatrixTuple(tuple(parsed))
    except ValueError as exc:
        raise SchemaError(f"$: {exc}") from exc


def parse_matrix(path: str) -> np.ndarray:
    """A bare matrix file (used for interpolation targets)."""
    return _as_matrix(_load(path), "$")


def parse_spec(path: str) -> RepresentationSpec | HerglotzModel:
    """Dispatch on keys: "kind" means representation, "U" means model."""
    data = _load(path)
    if not isinstance(data, dict):
        _fail("$", "expected an object")
    if "kind" in data:
        return _parse_representation(data)
    if "U" in data:
        return _parse_model(data)
    _fail("$", 'expected a representation (key "kind") or a Herglotz model (key "U")')


def _parse_representation(data: dict) -> RepresentationSpec:
    kind = _as_int(_get(data, "kind", "$"), "$.kind")
    m = _as_int(_get(data, "m", "$"), "$.m")
    a = _as_number(data.get("a", 0.0), "$.a")
    A = _as_matrix(_get(data, "A", "$"), "$.A")
    v = _as_vector(_get(data, "v", "$"), "$.v")
    Y = data.get("Y")
    P = data.get("P")
    dimN = data.get("dimN")
    if Y is not None:
        if not isinstance(Y, list):
            _fail("$.Y", "expected a list of matrices")
        Y = tuple(_as_matrix(M, f"$.Y[{i}]") for i, M in enumerate(Y))
    if P is not None:
        if not isinstance(P, list):
            _fail("$.P", "expected a list of matrices")
        P = tuple(_as_matrix(M, f"$.P[{i}]") for i, M in enumerate(P))
    if dimN is not None:
        dimN = _as_int(dimN, "$.dimN")
    try:
        return RepresentationSpec(kind=kind, a=a, m=m, A=A, v=v, Y=Y, P=P, dimN=dimN)
    except ValueError as exc:
        raise SchemaError(f"$: {exc}") from exc


def _parse_model(data: dict) -> HerglotzModel:
    d = _as_int(_get(data, "d", "$"), "$.d")
    m = _as_int(_get(data, "m", "$"), "$.m")
    U = _as_matrix(_get(data, "U", "$"), "$.U")
    v = _as_vector(_get(data, "v", "$"), "$.v")
    a = _as_number(data.get("a", 0.0), "$.a")
    try:
        return HerglotzModel(d=d, m=m, U=U, v=v, a=a)
    except ValueError as exc:
        raise SchemaError(f"$: {exc}") from exc


def complex_to_json(z: complex) -> list[float] | None:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return None
    return [z.real, z.imag]


def float_to_json(x: float | None) -> float | None:
    if x is None or not math.isfinite(x):
        return None
    return float(x)


def matrix_to_json(M: np.ndarray) -> list:
    M = np.asarray(M)
    return [[complex_to_json(M[i, j]) for j in range(M.shape[1])] for i in range(M.shape[0])]


def vector_to_json(v: np.ndarray) -> list:
    return [complex_to_json(x) for x in np.asarray(v).reshape(-1)]


def tuple_to_json(X: MatrixTuple) -> dict:
    return {"d": X.d, "n": X.n, "matrices": [matrix_to_json(M) for M in X.mats]}


def series_to_json(f: FreeSeries) -> dict:
    terms = [
        {"word": list(w), "re": float(c.real), "im": float(c.imag)}
        for w, c in sorted(f.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))
    ]
    return {
        "d": f.d,
        "degree": f.degree,
        "real_free": f.real_free,
        "decay_rate": float_to_json(f.decay_rate),
        "terms": terms,
    }


def dump_report(report: dict) -> str:
    """Canonical byte-stable rendering: sorted keys, two-space indent."""
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"
