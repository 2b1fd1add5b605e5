"""Experiment configuration: ``key=value`` files with command-line overrides.

Complex values are written ``mag@phase`` or ``re+imi``; numeric fields accept
small arithmetic expressions such as ``1/sqrt(2)`` or ``pi/7``.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Iterable

COMMANDS = ("simulate", "spectrum", "asymptotic", "scattering", "equivalence", "average")


class ConfigError(ValueError):
    """Invalid configuration; ``where`` names the file line or field."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt, "cos": math.cos, "sin": math.sin}


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        v = _eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval(node.left), _eval(node.right))
    if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS and len(node.args) == 1):
        return _FUNCS[node.func.id](_eval(node.args[0]))
    raise ValueError("unsupported expression")


def parse_real(text: str) -> float:
    try:
        return float(_eval(ast.parse(text.strip(), mode="eval")))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValueError(f"not a real number: {text!r}") from exc


def parse_complex(text: str) -> complex:
    s = text.strip()
    if "@" in s:
        mag, phase = s.split("@", 1)
        return parse_real(mag) * complex(math.cos(parse_real(phase)), math.sin(parse_real(phase)))
    if s.endswith(("i", "j")):
        try:
            return complex(s[:-1].replace(" ", "") + "j")
        except ValueError as exc:
            raise ValueError(f"not a complex number: {text!r}") from exc
    return complex(parse_real(s))


def format_complex(z: complex) -> str:
    sign = "+" if z.imag >= 0 or math.isnan(z.imag) else ""
    return f"{z.real!r}{sign}{z.imag!r}i"


def _parse_int(text: str) -> int:
    v = parse_real(text)
    if v != int(v):
        raise ValueError(f"not an integer: {text!r}")
    return int(v)


def _parse_opt_int(text: str):
    return None if text.strip() in ("", "auto", "none") else _parse_int(text)


def _parse_opt_complex(text: str):
    return None if text.strip() in ("", "auto", "none") else parse_complex(text)


def _parse_list(parse):
    def inner(text: str) -> tuple:
        return tuple(parse(item) for item in text.split(",") if item.strip()) if text.strip() else ()
    return inner


def _fmt(v) -> str:
    if v is None:
        return "auto"
    if isinstance(v, complex):
        return format_complex(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        return ",".join(_fmt(x) for x in v)
    return str(v)


@dataclass(frozen=True)
class ExperimentConfig:
    command: str = "simulate"
    n: int | None = None
    steps: int = 50
    t: complex = complex(1 / math.sqrt(2))
    r: complex | None = None
    phi: float = 0.0
    phi_placement: str = "even"
    geometry: str = "line"
    start: str = "0,1"
    measure: str = "edge"
    m: int = 50000
    mode: str = "fixed"
    j: int = 0
    alpha: float = 0.0
    tau: int = 1000
    window: int = 10
    barrier_t: tuple = ()
    barrier_r: tuple = ()
    barrier_phi: tuple = ()
    theta_points: int = 256
    trials: int = 20
    seed: int = 0

    @property
    def reflection(self) -> complex:
        """``r``, defaulting to the real nonnegative ``sqrt(1 - |t|^2)``."""
        if self.r is not None:
            return self.r
        return complex(math.sqrt(max(1 - abs(self.t) ** 2, 0.0)))

    def to_pairs(self) -> list[tuple[str, str]]:
        return [(f.name, _fmt(getattr(self, f.name))) for f in fields(self)]

    def validate(self) -> "ExperimentConfig":
        def bad(key, msg):
            raise ConfigError(key, msg)

        if self.command not in COMMANDS:
            bad("command", f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.geometry not in ("line", "ring"):
            bad("geometry", "must be 'line' or 'ring'")
        if self.measure not in ("edge", "vertex"):
            bad("measure", "must be 'edge' or 'vertex'")
        if self.mode not in ("fixed", "scaled"):
            bad("mode", "must be 'fixed' or 'scaled'")
        if self.phi_placement not in ("even", "none"):
            bad("phi_placement", "must be 'even' or 'none'")
        if abs(abs(self.t) ** 2 + abs(self.reflection) ** 2 - 1) > 1e-10:
            bad("t", "|t|^2 + |r|^2 must equal 1 within 1e-10")
        if not math.isfinite(self.phi):
            bad("phi", "must be finite")
        for key in ("steps", "m", "tau", "theta_points", "trials"):
            if getattr(self, key) < (0 if key == "steps" else 1):
                bad(key, "out of range")
        if self.window < 0 or self.window >= self.tau:
            bad("window", "must satisfy 0 <= window < tau")
        if self.n is not None and self.n < 3:
            bad("n", "rings need at least 3 vertices")
        if self.start != "uniform":
            try:
                a, b = (int(x) for x in self.start.split(","))
            except ValueError:
                bad("start", "expected 'a,b' (a directed edge) or 'uniform'")
            if abs(a - b) != 1:
                bad("start", "the start edge must join neighbouring vertices")
        lens = {len(self.barrier_t), len(self.barrier_r), len(self.barrier_phi)} - {0}
        if len(lens) > 1 or (len(self.barrier_r) and len(self.barrier_r) != len(self.barrier_t)):
            bad("barrier_t", "barrier_t, barrier_r and barrier_phi need equal lengths")
        if self.command == "asymptotic":
            if not 0 < abs(self.t) < 1:
                bad("t", "asymptotics need 0 < |t| < 1")
            if self.alpha < 0:
                bad("alpha", "must be nonnegative")
        if self.command == "scattering" and not self.barrier_t:
            bad("barrier_t", "scattering needs a nonempty barrier")
        return self


_PARSERS = {
    "command": str.strip, "n": _parse_opt_int, "steps": _parse_int, "t": parse_complex,
    "r": _parse_opt_complex, "phi": parse_real, "phi_placement": str.strip,
    "geometry": str.strip, "start": lambda s: s.replace(" ", ""), "measure": str.strip,
    "m": _parse_int, "mode": str.strip, "j": _parse_int, "alpha": parse_real,
    "tau": _parse_int, "window": _parse_int, "barrier_t": _parse_list(parse_complex),
    "barrier_r": _parse_list(parse_complex), "barrier_phi": _parse_list(parse_real),
    "theta_points": _parse_int, "trials": _parse_int, "seed": _parse_int,
}


def apply_pairs(config: ExperimentConfig, pairs: Iterable[tuple[str, str, str]]) -> ExperimentConfig:
    """Apply ``(where, key, value)`` triples, reporting ``where`` on failure."""
    updates = {}
    for where, key, value in pairs:
        key = key.strip()
        if key not in _PARSERS:
            raise ConfigError(where, f"unknown key {key!r}")
        try:
            updates[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(where, f"{key}: {exc}") from None
    return replace(config, **updates)


def _split(line: str, where: str) -> tuple[str, str]:
    if "=" not in line:
        raise ConfigError(where, f"expected key=value, got {line!r}")
    key, value = line.split("=", 1)
    return key.strip(), value.strip()


def parse_config_text(text: str, source: str = "<config>") -> list[tuple[str, str, str]]:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            where = f"{source}:{lineno}"
            pairs.append((where, *_split(line, where)))
    return pairs


def load_config(
    command: str, path: str | Path | None = None, overrides: Iterable[str] = ()
) -> ExperimentConfig:
    pairs = [("command", "command", command)]
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(str(path), f"cannot read config: {exc}") from None
        pairs += parse_config_text(text, str(path))
    for item in overrides:
        where = f"--set {item}"
        pairs.append((where, *_split(item, where)))
    return apply_pairs(ExperimentConfig(), pairs).validate()


def config_from_metadata(meta: Iterable[tuple[str, str]]) -> ExperimentConfig:
    """Rebuild a config from ``config.*`` entries of a CSV metadata block."""
    pairs = [(f"metadata {k}", k[len("config."):], v) for k, v in meta if k.startswith("config.")]
    return apply_pairs(ExperimentConfig(), pairs)
