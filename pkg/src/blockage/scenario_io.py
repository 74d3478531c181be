"""Scenario files (TOML with explicit units) and sweep CSV emission.

A scenario file looks like::

    [scenario]
    w_d = "2 cm"
    alpha = "2 cm"
    alpha_b = "1 cm"
    r = "1 cm"

    [outage]            # optional
    snr_db = 10         # or p_s = "1 W" and n_o = "100 mW"
    r_th = 2

    [support]           # optional
    a2 = "3 cm"

    [quadrature]        # optional
    abs_tol = 1e-10
    rel_tol = 1e-10
    max_subdivisions = 200

    [monte_carlo]       # optional
    samples = 1000000
    seed = 42

Lengths take an ``m``, ``cm`` or ``mm`` suffix; powers take ``W``, ``mW``,
``dBW`` or ``dBm``. Everything is converted to meters and watts on load.
"""

from __future__ import annotations

import csv
import re
import sys
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ScenarioFileError
from .exact import QuadratureConfig
from .geometry import LinkScenario, validate_scenario
from .oracles import McConfig
from .outage import OutageParams

LENGTH_UNITS = {"m": 1.0, "cm": 1e-2, "mm": 1e-3}
_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]*)\s*$")

_SECTIONS = {
    "scenario": {"w_d", "alpha", "alpha_b", "r"},
    "outage": {"p_s", "n_o", "snr_db", "r_th"},
    "support": {"a2"},
    "quadrature": {"abs_tol", "rel_tol", "max_subdivisions"},
    "monte_carlo": {"samples", "seed"},
}


def _split_quantity(text: str, what: str) -> tuple[float, str]:
    match = _QUANTITY.match(text)
    if not match:
        raise ScenarioFileError(f"{what}: cannot parse quantity {text!r}")
    return float(match.group(1)), match.group(2)


def parse_length(value: Any, what: str = "length", default_unit: str | None = None) -> float:
    """Convert ``"2 cm"``-style input to meters.

    Bare numbers are accepted only when ``default_unit`` is given.
    """
    if isinstance(value, bool):
        raise ScenarioFileError(f"{what}: expected a length, got {value!r}")
    if isinstance(value, (int, float)):
        if default_unit is None:
            raise ScenarioFileError(f"{what}: needs an explicit unit (m, cm or mm), got bare number {value!r}")
        number, unit = float(value), default_unit
    elif isinstance(value, str):
        number, unit = _split_quantity(value, what)
        unit = unit or default_unit or ""
    else:
        raise ScenarioFileError(f"{what}: expected a length, got {value!r}")
    if unit not in LENGTH_UNITS:
        raise ScenarioFileError(f"{what}: unknown length unit {unit!r} (use m, cm or mm)")
    return number * LENGTH_UNITS[unit]


def parse_power(value: Any, what: str = "power") -> float:
    """Convert ``"100 mW"`` / ``"20 dBm"`` / ``"1 W"`` to watts."""
    if not isinstance(value, str):
        raise ScenarioFileError(f"{what}: needs an explicit unit (W, mW, dBW or dBm), got {value!r}")
    number, unit = _split_quantity(value, what)
    if unit == "W":
        return number
    if unit == "mW":
        return number * 1e-3
    if unit == "dBW":
        return 10.0 ** (number / 10.0)
    if unit == "dBm":
        return 10.0 ** (number / 10.0) * 1e-3
    raise ScenarioFileError(f"{what}: unknown power unit {unit!r} (use W, mW, dBW or dBm)")


def _number(table: Mapping[str, Any], key: str, where: str) -> float:
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioFileError(f"[{where}] {key}: expected a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class ScenarioFile:
    scenario: LinkScenario
    outage: OutageParams | None = None
    a2: float | None = None
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    mc: McConfig = field(default_factory=McConfig)


_LINE = re.compile(r"line (\d+)")


def parse_scenario_text(text: str) -> ScenarioFile:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = _LINE.search(str(exc))
        raise ScenarioFileError(f"malformed scenario file: {exc}", line=int(match.group(1)) if match else None) from exc
    return scenario_from_mapping(doc)


def load_scenario(path: str | Path) -> ScenarioFile:
    """Read and validate a scenario file. ``FileNotFoundError`` propagates."""
    return parse_scenario_text(Path(path).read_text(encoding="utf-8"))


def scenario_from_mapping(doc: Mapping[str, Any]) -> ScenarioFile:
    unknown = set(doc) - set(_SECTIONS)
    if unknown:
        raise ScenarioFileError(f"unknown section(s): {', '.join(sorted(unknown))}")
    for name, table in doc.items():
        if not isinstance(table, Mapping):
            raise ScenarioFileError(f"{name!r} must be a [section]")
        extra = set(table) - _SECTIONS[name]
        if extra:
            raise ScenarioFileError(f"unknown key(s) in [{name}]: {', '.join(sorted(extra))}")

    if "scenario" not in doc:
        raise ScenarioFileError("missing required section [scenario]")
    sc = doc["scenario"]
    for key in ("w_d", "alpha", "alpha_b"):
        if key not in sc:
            raise ScenarioFileError(f"missing required key [scenario] {key}")
    scenario = validate_scenario(
        LinkScenario(
            w_d=parse_length(sc["w_d"], "w_d"),
            alpha=parse_length(sc["alpha"], "alpha"),
            alpha_b=parse_length(sc["alpha_b"], "alpha_b"),
            r=parse_length(sc.get("r", "0 m"), "r"),
        )
    )

    outage = None
    if "outage" in doc:
        ot = doc["outage"]
        if "r_th" not in ot:
            raise ScenarioFileError("missing required key [outage] r_th")
        r_th = _number(ot, "r_th", "outage")
        if "snr_db" in ot:
            if "p_s" in ot:
                raise ScenarioFileError("[outage] give either snr_db or p_s, not both")
            n_o = parse_power(ot.get("n_o", "1 W"), "n_o")
            outage = OutageParams.from_snr_db(_number(ot, "snr_db", "outage"), r_th, n_o=n_o)
        else:
            for key in ("p_s", "n_o"):
                if key not in ot:
                    raise ScenarioFileError(f"missing required key [outage] {key} (or give snr_db)")
            outage = OutageParams(parse_power(ot["p_s"], "p_s"), parse_power(ot["n_o"], "n_o"), r_th)

    a2 = parse_length(doc["support"]["a2"], "a2") if "a2" in doc.get("support", {}) else None

    qt = doc.get("quadrature", {})
    quadrature = QuadratureConfig(
        abs_tol=_number(qt, "abs_tol", "quadrature") if "abs_tol" in qt else 1e-10,
        rel_tol=_number(qt, "rel_tol", "quadrature") if "rel_tol" in qt else 1e-10,
        max_subdivisions=int(_number(qt, "max_subdivisions", "quadrature")) if "max_subdivisions" in qt else 200,
    )
    mt = doc.get("monte_carlo", {})
    mc = McConfig(
        samples=int(_number(mt, "samples", "monte_carlo")) if "samples" in mt else 1_000_000,
        seed=int(_number(mt, "seed", "monte_carlo")) if "seed" in mt else 42,
    )
    return ScenarioFile(scenario, outage, a2, quadrature, mc)


def format_float(x: float) -> str:
    """Shortest decimal string that round-trips to the same double."""
    return repr(float(x))


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[float]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) for v in row])


def read_csv(path: str | Path) -> tuple[list[str], list[list[float]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, rows

