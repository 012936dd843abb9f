"""
JSON and CSV reading and writing.

Models expose ``to_dict()``; this module turns those dictionaries into
canonical compact JSON and parses input documents back into models. Parse
errors raise :class:`~padicskew.errors.ConfigError` naming the offending field.

CSV reports start with ``#``-prefixed metadata lines such as ``# kind = mixing``.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from padicskew.dynamics.skew import SkewProduct
from padicskew.errors import ConfigError
from padicskew.models.exchange import FiberMap, IntervalExchange
from padicskew.models.padic import PAdicPermutation, PAdicSet
from padicskew.models.stepfn import (
    StepFunctionX,
    StepFunctionZ,
    half_fiber_indicator,
    rectangle_indicator,
)
from padicskew.utils.rational import parse_rational

PathLike = Union[str, Path]


def dumps(obj: Any) -> str:
    """Canonical compact JSON with keys in insertion order."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _field(data: Any, key: str, where: str) -> Any:
    if not isinstance(data, dict):
        raise ConfigError(f"Field '{where}': expected an object, got {type(data).__name__}")
    if key not in data:
        raise ConfigError(f"Field '{where}.{key}' is missing")
    return data[key]


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"Field '{where}': expected an integer, got {value!r}")
    return value


def _ints(value: Any, where: str) -> list[int]:
    if not isinstance(value, list):
        raise ConfigError(f"Field '{where}': expected a list of integers")
    return [_int(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _wrap(where: str, build, *args):
    try:
        return build(*args)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"Field '{where}': {exc}") from exc


def permutation_from_dict(data: dict, where: str = "permutation") -> PAdicPermutation:
    """Parse ``{"p": int, "rank": int, "perm": [...]}``."""
    p = _int(_field(data, "p", where), f"{where}.p")
    rank = _int(_field(data, "rank", where), f"{where}.rank")
    perm = _ints(_field(data, "perm", where), f"{where}.perm")
    return _wrap(where, PAdicPermutation, p, rank, tuple(perm))


def fiber_map_from_json(p: int, rank: int, item: Any, where: str = "fiber") -> FiberMap:
    """Parse a fiber map: a permutation list, ``{"rotation": "a/b"}`` or ``{"pieces": [...]}``."""
    if isinstance(item, list):
        return _wrap(where, PAdicPermutation, p, rank, tuple(_ints(item, where)))
    if isinstance(item, dict) and "rotation" in item:
        alpha = parse_rational(str(item["rotation"]), f"{where}.rotation")
        return IntervalExchange.rotation(alpha)
    if isinstance(item, dict) and "pieces" in item:
        pieces = []
        for i, piece in enumerate(item["pieces"]):
            if not isinstance(piece, list) or len(piece) != 3:
                raise ConfigError(f"Field '{where}.pieces[{i}]': expected [start, end, shift]")
            pieces.append(
                tuple(parse_rational(str(v), f"{where}.pieces[{i}]") for v in piece)
            )
        return _wrap(where, IntervalExchange.from_pieces, pieces)
    raise ConfigError(f"Field '{where}': expected a permutation list, rotation or pieces")


def skew_from_dict(data: dict, where: str = "transformation") -> SkewProduct:
    """Parse the skew-product JSON produced by :meth:`SkewProduct.to_dict`."""
    p = _int(_field(data, "p", where), f"{where}.p")
    base_data = _field(data, "base", where)
    if not isinstance(base_data, dict):
        raise ConfigError(f"Field '{where}.base': expected an object")
    base = permutation_from_dict({"p": p, **base_data}, f"{where}.base")
    fibers = _field(data, "fibers", where)
    rank = _int(_field(fibers, "rank", f"{where}.fibers"), f"{where}.fibers.rank")
    assignment = _ints(
        _field(fibers, "assignment", f"{where}.fibers"), f"{where}.fibers.assignment"
    )
    raw_maps = _field(fibers, "maps", f"{where}.fibers")
    if not isinstance(raw_maps, list):
        raise ConfigError(f"Field '{where}.fibers.maps': expected a list")
    maps = tuple(
        fiber_map_from_json(p, rank, item, f"{where}.fibers.maps[{i}]")
        for i, item in enumerate(raw_maps)
    )
    return _wrap(where, SkewProduct, base, tuple(assignment), maps)


def stepfn_from_dict(
    data: dict, where: str = "function"
) -> Union[StepFunctionX, StepFunctionZ]:
    """Parse ``{"p", "rank", "values"}``; a matrix of values gives a function on Z."""
    p = _int(_field(data, "p", where), f"{where}.p")
    rank = _int(_field(data, "rank", where), f"{where}.rank")
    values = _field(data, "values", where)
    if not isinstance(values, list) or not values:
        raise ConfigError(f"Field '{where}.values': expected a non-empty list")
    if isinstance(values[0], list):
        parsed = [
            [parse_rational(str(v), f"{where}.values[{i}][{j}]") for j, v in enumerate(row)]
            for i, row in enumerate(values)
        ]
        return _wrap(where, StepFunctionZ, p, rank, parsed)
    parsed_x = [parse_rational(str(v), f"{where}.values[{i}]") for i, v in enumerate(values)]
    return _wrap(where, StepFunctionX, p, rank, parsed_x)


def function_from_spec(p: int, item: Any, where: str = "f") -> StepFunctionZ:
    """Parse a test function on Z: ``"half_fiber"``, a rectangle, or step-function JSON."""
    if item == "half_fiber":
        return _wrap(where, half_fiber_indicator, p)
    if isinstance(item, dict) and "rectangle" in item:
        rect = item["rectangle"]
        rank = _int(_field(rect, "rank", f"{where}.rectangle"), f"{where}.rectangle.rank")
        base = _ints(_field(rect, "base", f"{where}.rectangle"), f"{where}.rectangle.base")
        fiber = _ints(_field(rect, "fiber", f"{where}.rectangle"), f"{where}.rectangle.fiber")
        return _wrap(
            where,
            lambda: rectangle_indicator(PAdicSet.of(p, rank, base), PAdicSet.of(p, rank, fiber)),
        )
    function = stepfn_from_dict(item, where)
    if not isinstance(function, StepFunctionZ):
        raise ConfigError(f"Field '{where}': expected a function on Z (a matrix of values)")
    return function


def parse_json(text: str, where: str = "input") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"Field '{where}': invalid JSON ({exc.msg} at line {exc.lineno})"
        ) from exc


def read_json(path: PathLike) -> Any:
    """Read and parse a JSON document."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return parse_json(f.read(), str(path))
    except OSError as exc:
        raise ConfigError(f"Field 'input': cannot read {path}: {exc.strerror}") from exc


def read_skew(path: PathLike) -> SkewProduct:
    """Read a skew-product document."""
    return skew_from_dict(read_json(path))


def write_json(obj: Any, path: Optional[PathLike] = None) -> str:
    """Serialize ``obj`` canonically; write it to ``path`` when given."""
    text = dumps(obj) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    return text


def format_csv(
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    metadata: Optional[dict[str, Any]] = None,
) -> str:
    """Render rows as CSV preceded by ``# key = value`` metadata lines."""
    buffer = io.StringIO()
    for key, value in (metadata or {}).items():
        buffer.write(f"# {key} = {value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buffer.getvalue()


def write_text(text: str, path: Optional[PathLike] = None) -> str:
    if path is not None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    return text
