"""Versioned JSON instance files and deterministic CSV reports.

Loaders reject malformed files with a one-line diagnostic naming the file,
the offending field, and the expected shape. Report writers emit a comment
header (version, subcommand, seed, config hash) followed by plain CSV; given
the same configuration they produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from typing import IO, Any, Iterable, Sequence

import numpy as np

from .game import OneWayGame, validate

FORMAT_VERSION = 1
TOOL_VERSION = "0.1.0"


class InstanceFormatError(ValueError):
    """Malformed instance file; formats as a single diagnostic line."""

    def __init__(self, path: str, field: str, expected: str):
        self.path = path
        self.field = field
        self.expected = expected
        super().__init__(f"{path}: field '{field}': expected {expected}")


def _require(data: dict, field: str, path: str, expected: str) -> Any:
    if field not in data:
        raise InstanceFormatError(path, field, expected + " (missing)")
    return data[field]


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise InstanceFormatError(path, "<file>", "an existing file") from None
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(path, "<file>", f"valid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise InstanceFormatError(path, "<file>", "a JSON object")
    return data


def _check_version(data: dict, path: str) -> None:
    version = _require(data, "version", path, f"integer {FORMAT_VERSION}")
    if version != FORMAT_VERSION:
        raise InstanceFormatError(path, "version", f"{FORMAT_VERSION}, got {version!r}")


def _id_list(data: dict, field: str, path: str) -> list[str]:
    raw = _require(data, field, path, "a non-empty list of identifiers")
    if not isinstance(raw, list) or not raw or not all(isinstance(x, str) for x in raw):
        raise InstanceFormatError(path, field, "a non-empty list of strings")
    return raw


def _typed_prior(data: dict, field: str, path: str) -> tuple[list[str], list[float]]:
    raw = _require(data, field, path, 'a list of {"id": str, "prob": number}')
    if not isinstance(raw, list) or not raw:
        raise InstanceFormatError(path, field, 'a non-empty list of {"id", "prob"} objects')
    ids, probs = [], []
    for k, entry in enumerate(raw):
        if not isinstance(entry, dict) or "id" not in entry or "prob" not in entry:
            raise InstanceFormatError(path, f"{field}[{k}]", 'an object with "id" and "prob"')
        ids.append(str(entry["id"]))
        try:
            probs.append(float(entry["prob"]))
        except (TypeError, ValueError):
            raise InstanceFormatError(path, f"{field}[{k}].prob", "a number") from None
    return ids, probs


def _rect(raw: Any, dims: Sequence[tuple[str, int]], field: str, path: str) -> np.ndarray:
    """Convert nested lists to an array, naming the first axis that mismatches."""

    def walk(node: Any, depth: int, index: str) -> None:
        axis, size = dims[depth]
        if not isinstance(node, list):
            raise InstanceFormatError(path, field + index, f"a list along axis {axis}")
        if len(node) != size:
            raise InstanceFormatError(
                path, field + index, f"length {size} along axis {axis}, got {len(node)}"
            )
        if depth + 1 < len(dims):
            for k, child in enumerate(node):
                walk(child, depth + 1, f"{index}[{k}]")
        else:
            for k, cell in enumerate(node):
                if not isinstance(cell, (int, float)) or isinstance(cell, bool):
                    raise InstanceFormatError(path, f"{field}{index}[{k}]", "a number")

    walk(raw, 0, "")
    return np.array(raw, dtype=np.float64)


def load_game(path: str) -> OneWayGame:
    """Load a one-way game instance file (format version 1)."""
    data = _load_json(path)
    _check_version(data, path)
    actions_a = _id_list(data, "actions_A", path)
    actions_b = _id_list(data, "actions_B", path)
    types_a, prior_a = _typed_prior(data, "types_A", path)
    types_b, prior_b = _typed_prior(data, "types_B", path)
    payoff_a = _rect(
        _require(data, "payoff_A", path, "a types_A x actions_A table"),
        [("types_A", len(types_a)), ("actions_A", len(actions_a))],
        "payoff_A",
        path,
    )
    payoff_b = _rect(
        _require(data, "payoff_B", path, "a types_B x actions_A x actions_B table"),
        [("types_B", len(types_b)), ("actions_A", len(actions_a)), ("actions_B", len(actions_b))],
        "payoff_B",
        path,
    )
    game = OneWayGame(
        actions_a=tuple(actions_a),
        actions_b=tuple(actions_b),
        types_a=tuple(types_a),
        types_b=tuple(types_b),
        prior_a=np.asarray(prior_a),
        prior_b=np.asarray(prior_b),
        payoff_a=payoff_a,
        payoff_b=payoff_b,
    )
    errors = validate(game)
    if errors:
        raise InstanceFormatError(path, "<instance>", "a valid game: " + "; ".join(errors))
    return game


def game_to_dict(game: OneWayGame) -> dict:
    return {
        "version": FORMAT_VERSION,
        "actions_A": list(game.actions_a),
        "actions_B": list(game.actions_b),
        "types_A": [
            {"id": t, "prob": float(p)} for t, p in zip(game.types_a, game.prior_a)
        ],
        "types_B": [
            {"id": t, "prob": float(p)} for t, p in zip(game.types_b, game.prior_b)
        ],
        "payoff_A": game.payoff_a.tolist(),
        "payoff_B": game.payoff_b.tolist(),
    }


def save_game(game: OneWayGame, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(game_to_dict(game), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_schedule_file(path: str) -> tuple[str, tuple[float, ...], tuple[float, ...]]:
    """Read a posted transfer schedule: {"action", "gammas", "probs"}."""
    data = _load_json(path)
    action = _require(data, "action", path, "an A action identifier")
    gammas = _require(data, "gammas", path, "a list of numbers")
    probs = _require(data, "probs", path, "a list of numbers")
    for field, raw in (("gammas", gammas), ("probs", probs)):
        if not isinstance(raw, list) or not raw or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw
        ):
            raise InstanceFormatError(path, field, "a non-empty list of numbers")
    if len(gammas) != len(probs):
        raise InstanceFormatError(path, "probs", f"length {len(gammas)} to match gammas")
    return str(action), tuple(float(g) for g in gammas), tuple(float(p) for p in probs)


def load_bilateral(path: str) -> "BilateralTradeInstance":
    from .bilateral import BilateralTradeInstance

    data = _load_json(path)
    out = []
    for side in ("seller", "buyer"):
        block = _require(data, side, path, 'an object {"values", "probs"}')
        if not isinstance(block, dict):
            raise InstanceFormatError(path, side, 'an object {"values", "probs"}')
        values = block.get("values")
        probs = block.get("probs")
        for field, raw in ((f"{side}.values", values), (f"{side}.probs", probs)):
            if not isinstance(raw, list) or not raw or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw
            ):
                raise InstanceFormatError(path, field, "a non-empty list of numbers")
        if len(values) != len(probs):
            raise InstanceFormatError(path, f"{side}.probs", f"length {len(values)} to match values")
        out.append((values, probs))
    try:
        return BilateralTradeInstance(
            seller_values=out[0][0],
            seller_probs=out[0][1],
            buyer_values=out[1][0],
            buyer_probs=out[1][1],
        )
    except ValueError as exc:
        raise InstanceFormatError(path, "<instance>", f"a valid trade instance: {exc}") from None


def config_hash(config: dict) -> str:
    """Stable hash of a run configuration (sorted-key canonical JSON)."""
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def format_cell(value: Any) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_report(
    fh: IO[str],
    subcommand: str,
    config: dict,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
) -> None:
    """Write one report: comment header block, then CSV."""
    fh.write(f"# oneway v{TOOL_VERSION}\n")
    fh.write(f"# subcommand: {subcommand}\n")
    fh.write(f"# seed: {config.get('seed', 'none')}\n")
    fh.write(f"# config: {json.dumps(config, sort_keys=True, separators=(',', ':'))}\n")
    fh.write(f"# config-sha256: {config_hash(config)}\n")
    fh.write(",".join(columns) + "\n")
    for row in rows:
        fh.write(",".join(format_cell(v) for v in row) + "\n")
