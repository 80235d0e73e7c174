"""JSON interchange for lattices, embeddings, forms and reports.

Exact integers are emitted as JSON numbers only inside the 53-bit safe
range; anything larger becomes a decimal string, and readers accept both.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

from .discform import FiniteQuadraticForm
from .intmat import IntMatrix
from .lattice import Embedding, GramLattice
from .verify import VerificationReport

JSON_SAFE_MAX = 2**53 - 1


def encode_int(x: int) -> Any:
    return x if abs(x) <= JSON_SAFE_MAX else str(x)


def decode_int(x: Any) -> int:
    if isinstance(x, bool):
        raise ValueError("expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return int(x, 10)
    raise ValueError(f"expected an integer or decimal string, got {x!r}")


def matrix_to_obj(m: IntMatrix) -> list[list[Any]]:
    return [[encode_int(x) for x in m.row(i)] for i in range(m.rows)]


def matrix_from_obj(obj: Any, width: Optional[int] = None) -> IntMatrix:
    rows = [[decode_int(x) for x in row] for row in obj]
    if not rows:
        return IntMatrix(0, width or 0, ())
    return IntMatrix.from_rows(rows)


def lattice_to_obj(l: GramLattice) -> dict:
    out: dict[str, Any] = {"gram": matrix_to_obj(l.gram)}
    if l.label is not None:
        out["label"] = l.label
    return out


def lattice_from_obj(obj: dict, allow_odd: bool = False) -> GramLattice:
    return GramLattice(
        matrix_from_obj(obj["gram"]), label=obj.get("label"), allow_odd=allow_odd
    )


def embedding_to_obj(e: Embedding) -> dict:
    out = lattice_to_obj(e.ambient)
    out["basis"] = matrix_to_obj(e.basis)
    return out


def embedding_from_obj(obj: dict) -> Embedding:
    ambient = lattice_from_obj(obj)
    return Embedding(ambient, matrix_from_obj(obj["basis"], width=ambient.rank))


def fraction_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(s: str) -> Fraction:
    return Fraction(s)


def fqf_to_obj(a: FiniteQuadraticForm) -> dict:
    return {
        "factors": [encode_int(d) for d in a.factors],
        "q": [[fraction_to_str(x) for x in row] for row in a.q],
    }


def fqf_from_obj(obj: dict) -> FiniteQuadraticForm:
    return FiniteQuadraticForm(
        tuple(decode_int(d) for d in obj["factors"]),
        tuple(tuple(fraction_from_str(x) for x in row) for row in obj["q"]),
    )


def _jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return encode_int(value)
    if isinstance(value, Fraction):
        return fraction_to_str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def report_to_obj(r: VerificationReport) -> dict:
    return {
        "claim_id": r.claim_id,
        "claim": r.claim_text,
        "verdict": r.verdict,
        "values": [
            {"name": cv.name, "value": _jsonable(cv.value), "op": cv.op}
            for cv in r.computed_values
        ],
        "assumed_facts": list(r.assumed_facts),
        "markers": list(r.markers),
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
