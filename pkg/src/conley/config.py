"""Run configuration files.

A config is flat ``key = value`` text, one key per line, with dotted
sections.  ``#`` starts a comment.  Example::

    system.name = north_south
    system.delta = 0.05
    grid.cells = 256
    ladder.values = 4h, 2h          # multiples of the cell size h, or plain numbers
    ladder.identity_floor = false
    outputs = json, dot, pgm, csv
    out_dir = out/north_south
    seed = 42

Recognised keys:

``system.name``
    ``logistic``, ``rotation``, ``doubling``, ``tent``, ``north_south``, or
    a synthetic relation ``empty``, ``identity``, ``full``.
``system.<param>``
    map parameters (``r``, ``alpha``, ``mu``, ``delta``).
``system.lipschitz_bound``
    optional override of the default bound.
``grid.domain``
    ``unit_interval`` or ``unit_circle``; defaults to the system's domain and
    is required for synthetic relations.
``grid.cells``
    cells per axis (>= 2).
``ladder.values``, ``ladder.identity_floor``
    the fattening radii and whether to append the identity rung.
``omega.closure_dilation``
    ``none`` (default) or ``one-cell``.
``outputs``, ``out_dir``, ``seed``
    what to write, where, and the recorded seed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .discretization import SYSTEMS, EpsilonLadder, GridSpec, SystemSpec
from .limits import CLOSURE_DILATIONS

__all__ = ["ConfigError", "RunConfig", "SYNTHETIC", "OUTPUT_KINDS", "parse_config", "load_config"]

SYNTHETIC = ("empty", "identity", "full")
OUTPUT_KINDS = ("json", "dot", "pgm", "csv")

_LINE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*)\s*=\s*(.*?)\s*$")
_TOP_KEYS = {"outputs", "out_dir", "seed"}
_SECTION_KEYS = {
    "grid": {"domain", "cells", "cells_per_axis"},
    "ladder": {"values", "identity_floor"},
    "omega": {"closure_dilation"},
}


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<config>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class RunConfig:
    system: SystemSpec | str
    grid: GridSpec
    ladder: EpsilonLadder
    outputs: frozenset[str] = frozenset(OUTPUT_KINDS)
    out_dir: Path = Path("conley_out")
    seed: int | None = None
    closure_dilation: str = "none"
    ladder_text: tuple[str, ...] = field(default=(), compare=False)

    @property
    def system_name(self) -> str:
        return self.system if isinstance(self.system, str) else self.system.name

    def system_dict(self) -> dict:
        if isinstance(self.system, str):
            return {"name": self.system, "params": {}, "lipschitz_bound": None}
        return {
            "name": self.system.name,
            "params": dict(self.system.params),
            "lipschitz_bound": self.system.lipschitz_bound,
        }


def _bool(text: str) -> bool:
    t = text.lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _rung(text: str, h: float) -> float:
    t = text.strip()
    if t.endswith("h"):
        mult = t[:-1].strip()
        return (float(mult) if mult else 1.0) * h
    return float(t)


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ConfigError(f"cannot parse line {raw.strip()!r}; expected 'key = value'", lineno, source)
        key, value = m.group(1), m.group(2)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first set on line {entries[key][1]})", lineno, source)
        section, _, name = key.partition(".")
        if not name:
            if key not in _TOP_KEYS:
                raise ConfigError(f"unknown key {key!r}", lineno, source)
        elif section != "system" and (section not in _SECTION_KEYS or name not in _SECTION_KEYS[section]):
            raise ConfigError(f"unknown key {key!r}", lineno, source)
        entries[key] = (value, lineno)

    def get(key, default=None, required=False):
        if key in entries:
            return entries[key]
        if required:
            raise ConfigError(f"missing required key {key!r}", None, source)
        return (default, None)

    if not any(k.startswith("system.") for k in entries):
        raise ConfigError("missing required key 'system'", None, source)
    name, name_line = get("system.name", required=True)

    system: SystemSpec | str
    if name in SYNTHETIC:
        extra = [k for k in entries if k.startswith("system.") and k != "system.name"]
        if extra:
            raise ConfigError(f"synthetic system {name!r} takes no parameters", entries[extra[0]][1], source)
        system = name
        default_domain = None
    elif name in SYSTEMS:
        params = {}
        lip = None
        for key, (value, lineno) in entries.items():
            if not key.startswith("system.") or key == "system.name":
                continue
            try:
                v = float(value)
            except ValueError:
                raise ConfigError(f"{key} must be a number, got {value!r}", lineno, source) from None
            if key == "system.lipschitz_bound":
                lip = v
            elif key[len("system.") :] in SYSTEMS[name].params:
                params[key[len("system.") :]] = v
            else:
                raise ConfigError(f"system {name!r} has no parameter {key[len('system.'):]!r}", lineno, source)
        try:
            system = SystemSpec(name, params, lip)
        except ValueError as exc:
            raise ConfigError(str(exc), name_line, source) from None
        default_domain = system.domain
    else:
        known = sorted(SYSTEMS) + list(SYNTHETIC)
        raise ConfigError(f"unknown system {name!r}; expected one of {known}", name_line, source)

    domain, dom_line = get("grid.domain", default_domain)
    if domain is None:
        raise ConfigError("missing required key 'grid.domain'", None, source)
    if not isinstance(system, str) and domain != system.domain:
        raise ConfigError(f"system {name!r} lives on {system.domain}, not {domain}", dom_line, source)
    if "grid.cells" in entries and "grid.cells_per_axis" in entries:
        raise ConfigError("set only one of grid.cells and grid.cells_per_axis", entries["grid.cells"][1], source)
    cells, cells_line = entries.get("grid.cells_per_axis") or get("grid.cells", required=True)
    try:
        grid = GridSpec(domain, int(cells))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad grid: {exc}", cells_line or dom_line, source) from None

    values, ladder_line = get("ladder.values", required=True)
    floor_text, floor_line = get("ladder.identity_floor", "false")
    try:
        floor = _bool(floor_text)
    except ValueError as exc:
        raise ConfigError(str(exc), floor_line, source) from None
    texts = tuple(t.strip() for t in values.split(",") if t.strip())
    try:
        ladder = EpsilonLadder(tuple(_rung(t, grid.cell_size) for t in texts), floor)
    except ValueError as exc:
        raise ConfigError(f"bad ladder: {exc}", ladder_line, source) from None

    dil, dil_line = get("omega.closure_dilation", "none")
    if dil not in CLOSURE_DILATIONS:
        raise ConfigError(f"closure_dilation must be one of {CLOSURE_DILATIONS}", dil_line, source)

    out_text, out_line = get("outputs", ",".join(OUTPUT_KINDS))
    outputs = frozenset(t.strip() for t in out_text.split(",") if t.strip())
    if not outputs:
        raise ConfigError("outputs must name at least one of " + ", ".join(OUTPUT_KINDS), out_line, source)
    bad = sorted(outputs - set(OUTPUT_KINDS))
    if bad:
        raise ConfigError(f"unknown output kind(s) {bad}", out_line, source)

    out_dir, _ = get("out_dir", "conley_out")
    seed_text, seed_line = get("seed")
    try:
        seed = int(seed_text) if seed_text is not None else None
    except ValueError:
        raise ConfigError(f"seed must be an integer, got {seed_text!r}", seed_line, source) from None

    return RunConfig(
        system=system,
        grid=grid,
        ladder=ladder,
        outputs=outputs,
        out_dir=Path(out_dir),
        seed=seed,
        closure_dilation=dil,
        ladder_text=texts,
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, str(path)) from None
    return parse_config(text, source=str(path))
