"""Run configuration: a line-oriented ``key = value`` format with ``[section]`` headers.

    scenario = interval

    [window]
    lambda1 = 5
    lambda2 = 45
    delta = 0.5

Comments start with ``#`` or ``;``.  Complex numbers are written ``a+bi``
(``2i``, ``-1.5-0.25i`` and plain reals are accepted too), lists are comma
separated.  Every key is validated against the schema below; unknown keys,
repeated keys and malformed values are reported with their line number.
"""
from __future__ import annotations

import dataclasses
import hashlib
import math
import re
from dataclasses import dataclass, field

from .errors import ConfigError

SCENARIOS = ("interval", "schrod1d", "disc", "maslov", "pencil", "count")
POTENTIALS = ("zero", "constant", "polynomial", "table")


@dataclass(frozen=True)
class Window:
    lambda1: float | None = None
    lambda2: float | None = None
    delta: float = 0.5
    grid_step: float = 0.25
    samples: int = 41


@dataclass(frozen=True)
class ContourSpec:
    initial_samples: int = 64
    max_refine_depth: int = 20


@dataclass(frozen=True)
class ProblemSpec:
    """Scalar potential ``q(x)`` times the ``n x n`` identity, with scalar Robin couplings."""

    n: int = 1
    potential: str = "zero"
    value: float = 0.0
    coefficients: tuple = ()
    xs: tuple = ()
    values: tuple = ()
    theta_plus: complex = 1j
    theta_minus: complex = 1j
    shift: float = 0.0


@dataclass(frozen=True)
class IntervalSpec:
    """Robin matrix of the unit interval, row major."""

    t11: complex = 1j
    t12: complex = 0j
    t21: complex = 0j
    t22: complex = 1j


@dataclass(frozen=True)
class DiscSpec:
    mu: complex = 1.0
    mu_hat: complex = 2.0
    gamma: float = 1.0
    max_mode: int = 200
    lam: complex | None = None
    p: int = 2
    tail_tol: float = 1e-2
    coefficients: tuple = ()


@dataclass(frozen=True)
class PencilSpec:
    builtin: str | None = None
    lambda0: complex = 0j
    radius: float = 0.5
    max_len: int = 16


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    window: Window = field(default_factory=Window)
    contour: ContourSpec = field(default_factory=ContourSpec)
    problem: ProblemSpec = field(default_factory=ProblemSpec)
    reference: ProblemSpec | None = None
    interval: IntervalSpec = field(default_factory=IntervalSpec)
    disc: DiscSpec = field(default_factory=DiscSpec)
    pencil: PencilSpec = field(default_factory=PencilSpec)


# section -> (dataclass, {key: (field name, kind)})
_SCHEMA = {
    "window": (Window, {
        "lambda1": ("lambda1", "float"), "lambda2": ("lambda2", "float"), "delta": ("delta", "float"),
        "grid_step": ("grid_step", "float"), "samples": ("samples", "int"),
    }),
    "contour": (ContourSpec, {
        "samples": ("initial_samples", "int"), "max_refine_depth": ("max_refine_depth", "int"),
    }),
    "problem": (ProblemSpec, {
        "n": ("n", "int"), "potential": ("potential", "str"), "value": ("value", "float"),
        "coefficients": ("coefficients", "floats"), "xs": ("xs", "floats"), "values": ("values", "floats"),
        "theta_plus": ("theta_plus", "complex"), "theta_minus": ("theta_minus", "complex"),
        "shift": ("shift", "float"),
    }),
    "interval": (IntervalSpec, {k: (k, "complex") for k in ("t11", "t12", "t21", "t22")}),
    "disc": (DiscSpec, {
        "mu": ("mu", "complex"), "mu_hat": ("mu_hat", "complex"), "gamma": ("gamma", "float"),
        "max_mode": ("max_mode", "int"), "lambda": ("lam", "complex"), "p": ("p", "int"),
        "tail_tol": ("tail_tol", "float"), "coefficients": ("coefficients", "floats"),
    }),
    "pencil": (PencilSpec, {
        "builtin": ("builtin", "str"), "lambda0": ("lambda0", "complex"), "radius": ("radius", "float"),
        "max_len": ("max_len", "int"),
    }),
}
_SCHEMA["reference"] = (ProblemSpec, _SCHEMA["problem"][1])


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    if "j" in s or "J" in s:
        raise ValueError(f"not a complex number: {text!r} (write the imaginary unit as i)")
    if s.endswith("i"):
        s = s[:-1] + "j"
        if s in ("j", "+j", "-j") or s[-2] in "+-":
            s = s[:-1] + "1j"
    try:
        return complex(s)
    except ValueError:
        raise ValueError(f"not a complex number: {text!r}") from None


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def _convert(kind: str, raw: str):
    if kind == "float":
        v = float(raw)
        if not math.isfinite(v):
            raise ValueError("value must be finite")
        return v
    if kind == "int":
        if not re.fullmatch(r"[+-]?\d+", raw.strip()):
            raise ValueError(f"not an integer: {raw!r}")
        return int(raw)
    if kind == "complex":
        v = parse_complex(raw)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError("value must be finite")
        return v
    if kind == "floats":
        parts = [s for s in (x.strip() for x in raw.split(",")) if s]
        return tuple(_convert("float", s) for s in parts)
    return raw.strip()


def parse_config(text: str, scenario: str | None = None) -> RunConfig:
    """Parse and validate; ``scenario`` fills in a missing ``scenario`` key."""
    values: dict[str, dict[str, object]] = {}
    lines: dict[tuple[str, str], int] = {}
    top: dict[str, object] = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            m = re.fullmatch(r"\[\s*([a-z_]+)\s*\]", line)
            if not m:
                raise ConfigError(f"malformed section header {raw.strip()!r}", lineno)
            section = m.group(1)
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]", lineno)
            if section in values:
                raise ConfigError(f"section [{section}] repeated", lineno)
            values[section] = {}
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, val = (s.strip() for s in line.partition("="))
        if section is None:
            if key != "scenario":
                raise ConfigError(f"unknown top-level key {key!r}", lineno)
            if key in top:
                raise ConfigError(f"key {key!r} repeated", lineno)
            top[key] = val
            lines[("", key)] = lineno
            continue
        schema = _SCHEMA[section][1]
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} in [{section}]", lineno)
        name, kind = schema[key]
        if name in values[section]:
            raise ConfigError(f"key {key!r} repeated in [{section}]", lineno)
        try:
            values[section][name] = _convert(kind, val)
        except ValueError as exc:
            raise ConfigError(f"[{section}] {key}: {exc}", lineno) from None
        lines[(section, name)] = lineno

    name = top.get("scenario", scenario)
    if name is None:
        raise ConfigError("missing required key 'scenario'")
    if scenario is not None and name != scenario:
        raise ConfigError(f"config is for scenario {name!r}, not {scenario!r}", lines.get(("", "scenario")))
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}", lines.get(("", "scenario")))

    parts = {sec: _SCHEMA[sec][0](**vals) for sec, vals in values.items()}
    cfg = RunConfig(scenario=name, **parts)
    _validate(cfg, lines)
    return cfg


def _validate(cfg: RunConfig, lines: dict) -> None:
    def fail(section, name, message):
        raise ConfigError(message, lines.get((section, name)))

    w = cfg.window
    needs_window = cfg.scenario in ("interval", "schrod1d", "maslov", "count")
    if needs_window:
        for key in ("lambda1", "lambda2"):
            if getattr(w, key) is None:
                fail("window", key, f"scenario {cfg.scenario} requires [window] {key}")
        if not w.lambda1 < w.lambda2:
            fail("window", "lambda2", "lambda1 must be smaller than lambda2")
    if w.delta <= 0:
        fail("window", "delta", "delta must be positive")
    if w.grid_step <= 0:
        fail("window", "grid_step", "grid_step must be positive")
    if w.samples < 2:
        fail("window", "samples", "samples must be at least 2")
    if cfg.contour.initial_samples < 8:
        fail("contour", "initial_samples", "contour samples must be at least 8")
    if cfg.contour.max_refine_depth < 0:
        fail("contour", "max_refine_depth", "max_refine_depth must be non-negative")

    for sec in ("problem", "reference"):
        spec = getattr(cfg, sec)
        if spec is None:
            continue
        if spec.n < 1:
            fail(sec, "n", "n must be at least 1")
        if spec.potential not in POTENTIALS:
            fail(sec, "potential", f"potential must be one of {', '.join(POTENTIALS)}")
        if spec.potential == "polynomial" and not spec.coefficients:
            fail(sec, "coefficients", "polynomial potential needs coefficients")
        if spec.potential == "table":
            if len(spec.xs) < 2 or len(spec.xs) != len(spec.values):
                fail(sec, "xs", "table potential needs matching xs and values (at least 2)")
            if any(b <= a for a, b in zip(spec.xs, spec.xs[1:])):
                fail(sec, "xs", "xs must be strictly increasing")

    d = cfg.disc
    if cfg.scenario == "disc" and d.lam is None:
        fail("disc", "lam", "scenario disc requires [disc] lambda")
    if not 1 <= d.p <= 8:
        fail("disc", "p", f"p must lie in [1, 8], got {d.p}")
    if d.max_mode < 8:
        fail("disc", "max_mode", "max_mode must be at least 8")
    if d.tail_tol <= 0:
        fail("disc", "tail_tol", "tail_tol must be positive")

    pc = cfg.pencil
    if cfg.scenario == "pencil" and pc.builtin is None:
        fail("pencil", "builtin", "scenario pencil requires [pencil] builtin")
    if pc.radius <= 0:
        fail("pencil", "radius", "radius must be positive")
    if pc.max_len < 1:
        fail("pencil", "max_len", "max_len must be at least 1")


def _format(kind: str, value) -> str:
    if kind == "complex":
        return format_complex(value)
    if kind == "floats":
        return ", ".join(repr(float(v)) for v in value)
    if kind == "float":
        return repr(float(value))
    return str(value)


def serialize(cfg: RunConfig) -> str:
    """Canonical text form; ``parse_config(serialize(c)) == c``.

    Only values that differ from the defaults are written.
    """
    out = [f"scenario = {cfg.scenario}"]
    for section, (cls, schema) in _SCHEMA.items():
        obj = getattr(cfg, section)
        if obj is None:
            continue
        default = cls()
        rows = []
        for key, (name, kind) in schema.items():
            v = getattr(obj, name)
            if v is None or v == getattr(default, name):
                continue
            rows.append(f"{key} = {_format(kind, v)}")
        if rows or (section == "reference"):
            out.append("")
            out.append(f"[{section}]")
            out.extend(rows)
    return "\n".join(out) + "\n"


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(serialize(cfg).encode()).hexdigest()


def replace(cfg: RunConfig, **changes) -> RunConfig:
    return dataclasses.replace(cfg, **changes)
