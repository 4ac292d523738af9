"""Model files (JSON), distribution dumps (CSV) and moment dumps (JSON)."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from urnlab.errors import InvalidArgumentError, InvalidDimensionError, ModelFileError, UrnError
from urnlab.exact import ExactDistribution, MomentState
from urnlab.model import (
    ReplacementMatrix,
    Scheme,
    UrnModel,
    build_linear_unordered,
    build_m1_embedding,
    embed_unordered_to_ordered,
)


def rational_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def _require(data: dict, key: str) -> Any:
    if key not in data:
        raise ModelFileError(f"model file is missing {key!r}")
    return data[key]


def model_from_dict(data: dict) -> UrnModel:
    """Build a model from the JSON structure.

    Either ``rows`` (full table) or ``reduced`` (an ``r x r`` matrix of a
    linear model) must be present.  Ordered schemes expand ``reduced`` by
    embedding the unordered expansion, or with ``"expansion": "m1"`` by the
    single-draw embedding.
    """
    if not isinstance(data, dict):
        raise ModelFileError("model file must contain a JSON object")
    try:
        r = int(_require(data, "colors"))
        m = int(_require(data, "sample_size"))
        scheme = Scheme(_require(data, "scheme"))
        initial = [int(x) for x in _require(data, "initial")]
        if "rows" in data:
            rows: dict[tuple[int, ...], tuple[int, ...]] = {}
            for row in data["rows"]:
                index = tuple(int(x) for x in row["index"])
                if index in rows:
                    raise ModelFileError(f"duplicate row index {list(index)}")
                rows[index] = tuple(int(x) for x in row["add"])
            matrix = ReplacementMatrix(r, m, scheme, rows)
        elif "reduced" in data:
            A = [[int(x) for x in row] for row in data["reduced"]]
            if len(A) != r:
                raise ModelFileError(f"reduced matrix has {len(A)} rows, expected {r}")
            if not scheme.ordered:
                matrix = build_linear_unordered(A, m, scheme)
            elif data.get("expansion", "symmetric") == "m1":
                matrix = build_m1_embedding(A, m, scheme)
            else:
                matrix = embed_unordered_to_ordered(build_linear_unordered(A, m, scheme.as_unordered))
        else:
            raise ModelFileError("model file needs 'rows' or 'reduced'")
        return UrnModel(matrix, tuple(initial))
    except ModelFileError:
        raise
    except (InvalidArgumentError, InvalidDimensionError) as exc:
        raise ModelFileError(str(exc)) from exc
    except UrnError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFileError(f"malformed model file: {exc!r}") from exc


def model_to_dict(model: UrnModel) -> dict:
    mat = model.matrix
    return {
        "colors": mat.r,
        "sample_size": mat.m,
        "scheme": str(mat.scheme),
        "initial": list(model.initial),
        "rows": [{"index": list(k), "add": list(a)} for k, a in mat.rows.items()],
    }


def load_model(path: str | Path) -> UrnModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
        data = json.loads(text)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFileError(f"cannot read model file {path}: {exc}") from exc
    return model_from_dict(data)


def dump_model(model: UrnModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


# --------------------------------------------------------------------- #
# bundled fixtures
# --------------------------------------------------------------------- #


def bundled_model_names() -> list[str]:
    root = resources.files("urnlab") / "models"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_model_path(name: str) -> Path:
    return Path(str(resources.files("urnlab") / "models" / f"{name}.json"))


def load_bundled(name: str) -> UrnModel:
    return load_model(bundled_model_path(name))


# --------------------------------------------------------------------- #
# dumps
# --------------------------------------------------------------------- #


def distribution_csv(dists: Iterable[ExactDistribution], r: int) -> str:
    """CSV with columns ``step, x1..xr, prob_num, prob_den``; rows sorted by composition."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", *[f"x{i}" for i in range(1, r + 1)], "prob_num", "prob_den"])
    for dist in dists:
        for x, p in dist.sorted_items():
            writer.writerow([dist.step, *x, p.numerator, p.denominator])
    return buf.getvalue()


def read_distribution_csv(text: str) -> dict[int, dict[tuple[int, ...], Fraction]]:
    out: dict[int, dict[tuple[int, ...], Fraction]] = {}
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    r = len(header) - 3
    for row in reader:
        step = int(row[0])
        x = tuple(int(v) for v in row[1 : 1 + r])
        out.setdefault(step, {})[x] = Fraction(int(row[-2]), int(row[-1]))
    return out


def _matrix_strs(M: Sequence[Sequence[Fraction]] | None) -> list[list[str]] | None:
    if M is None:
        return None
    return [[rational_str(x) for x in row] for row in M]


def moment_dict(state: MomentState) -> dict:
    out: dict[str, Any] = {"step": state.step, "mu": [rational_str(x) for x in state.mu]}
    if state.sigma is not None:
        out["sigma"] = _matrix_strs(state.sigma)
    return out


def moment_from_dict(data: dict) -> MomentState:
    sigma = data.get("sigma")
    return MomentState(
        int(data["step"]),
        [parse_rational(x) for x in data["mu"]],
        None if sigma is None else [[parse_rational(x) for x in row] for row in sigma],
    )


def moments_csv(states: dict[str, list[MomentState]]) -> str:
    """Long-format CSV: ``method, step, quantity, i, j, value`` with ``p/q`` values."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["method", "step", "quantity", "i", "j", "value"])
    for method, traj in states.items():
        for st in traj:
            for i, v in enumerate(st.mu, 1):
                writer.writerow([method, st.step, "mu", i, "", rational_str(v)])
            if st.sigma is not None:
                for i, row in enumerate(st.sigma, 1):
                    for j, v in enumerate(row, 1):
                        writer.writerow([method, st.step, "sigma", i, j, rational_str(v)])
    return buf.getvalue()
