"""Scenario configuration for the command-line front end.

A scenario is a YAML document::

    state: bell:psi-            # w:N | phased-w:N | werner:N:FILE | [d1, d2, d3]
    field:
      direction: [2, 1, 1]      # normalized on load; or  theta: 0.3927, phi: 0
    spectrum:
      model: lorentzian         # lorentzian | gaussian | box | tabulated
      omega0: 0.0
      gamma: 1.0
    time:                       # every key optional
      start: 0.0
      stop: 10.0
      count: 101
      spacing: linear           # linear | log; default log for box noise
    outputs: [concurrence, keff, trace_distance, state_dump]
    mode: double_sum            # or kraus
    state_dump_file: states.json

Unknown keys are rejected. Relative file paths resolve against the
directory of the config file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from collective_dephasing.dephasing import MODES
from collective_dephasing.linalg import direction_from_angles
from collective_dephasing.spectra import Box, Gaussian, Lorentzian, load_tabulated
from collective_dephasing.states import (
    bell_diagonal_from_d,
    bell_state,
    phased_w_state,
    w_state,
    werner_state,
)

OUTPUTS = ("concurrence", "keff", "trace_distance", "state_dump")
SPECTRUM_PARAMS = {
    "lorentzian": ("omega0", "gamma"),
    "gaussian": ("omega0", "sigma"),
    "box": ("omega0",),
    "tabulated": ("file",),
}
LINEAR_DEFAULTS = {"start": 0.0, "stop": 10.0, "count": 101}
LOG_DEFAULTS = {"start": 1e-2, "stop": 1e3, "count": 101}


class ConfigError(ValueError):
    pass


def _require_keys(section: str, mapping, allowed, required=()):
    if not isinstance(mapping, dict):
        raise ConfigError(f"{section}: expected a mapping, got {type(mapping).__name__}")
    unknown = sorted(set(mapping) - set(allowed))
    if unknown:
        raise ConfigError(f"{section}: unknown key(s) {unknown}; allowed: {sorted(allowed)}")
    missing = [k for k in required if k not in mapping]
    if missing:
        raise ConfigError(f"{section}: missing key(s) {missing}")


def _real(section, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{section}: expected a finite number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class TimeGrid:
    start: float
    stop: float
    count: int
    spacing: str

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class ScenarioConfig:
    state: str | tuple[float, float, float]
    spectrum: tuple[str, tuple]
    time: TimeGrid
    direction: tuple[float, float, float] | None = None
    theta: float | None = None
    phi: float = 0.0
    outputs: tuple[str, ...] = ("trace_distance",)
    mode: str = "double_sum"
    state_dump_file: str | None = None
    base_dir: Path = field(default=Path("."), compare=False)

    @property
    def n_qubits(self) -> int:
        if not isinstance(self.state, str) or self.state.startswith("bell:"):
            return 2
        return int(self.state.split(":")[1])

    def field_direction(self) -> np.ndarray:
        if self.direction is not None:
            v = np.array(self.direction, dtype=float)
            return v / np.linalg.norm(v)
        return direction_from_angles(self.theta, self.phi)

    def spectral_model(self):
        name, params = self.spectrum
        if name == "lorentzian":
            return Lorentzian(*params)
        if name == "gaussian":
            return Gaussian(*params)
        if name == "box":
            return Box(*params)
        return load_tabulated(self.base_dir / params[0])

    def initial_state(self) -> np.ndarray:
        if not isinstance(self.state, str):
            return bell_diagonal_from_d(self.state)
        kind, _, rest = self.state.partition(":")
        if kind == "bell":
            return bell_state(rest)
        n, _, path = rest.partition(":")
        if kind == "w":
            return w_state(int(n))
        if kind == "phased-w":
            return phased_w_state(int(n))
        return werner_state(int(n), load_werner_coefficients(self.base_dir / path, int(n)))

    def to_mapping(self) -> dict:
        out = {"state": self.state if isinstance(self.state, str) else list(self.state)}
        if self.direction is not None:
            out["field"] = {"direction": list(self.direction)}
        else:
            out["field"] = {"theta": self.theta, "phi": self.phi}
        name, params = self.spectrum
        out["spectrum"] = {"model": name, **dict(zip(SPECTRUM_PARAMS[name], params))}
        out["time"] = {
            "start": self.time.start,
            "stop": self.time.stop,
            "count": self.time.count,
            "spacing": self.time.spacing,
        }
        out["outputs"] = list(self.outputs)
        out["mode"] = self.mode
        if self.state_dump_file is not None:
            out["state_dump_file"] = self.state_dump_file
        return out

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_mapping(), sort_keys=False)

    def validate(self) -> None:
        """Build every referenced object once so physics errors surface at load time."""
        try:
            self.initial_state()
            self.spectral_model()
        except (ValueError, OSError) as exc:
            raise ConfigError(str(exc)) from None


def _parse_state(value):
    if isinstance(value, list):
        if len(value) != 3:
            raise ConfigError("state: a raw d-vector needs exactly 3 components")
        return tuple(_real("state", x) for x in value)
    if not isinstance(value, str):
        raise ConfigError(f"state: expected a preset string or d-vector, got {value!r}")
    kind, _, rest = value.partition(":")
    if kind == "bell":
        return value
    if kind in ("w", "phased-w", "werner"):
        n, _, path = rest.partition(":")
        if not n.isdigit() or int(n) < 2:
            raise ConfigError(f"state: {value!r} needs an integer qubit count >= 2")
        if kind == "werner" and not path:
            raise ConfigError(f"state: {value!r} needs a coefficient file, e.g. werner:3:coeffs.txt")
        if kind != "werner" and path:
            raise ConfigError(f"state: unexpected suffix in {value!r}")
        return value
    raise ConfigError(f"state: unknown preset {value!r}")


def _parse_field(value):
    _require_keys("field", value, ("direction", "theta", "phi"))
    if "direction" in value:
        if "theta" in value or "phi" in value:
            raise ConfigError("field: give either direction or theta/phi, not both")
        vec = value["direction"]
        if not isinstance(vec, list) or len(vec) != 3:
            raise ConfigError("field.direction: expected 3 components")
        vec = tuple(_real("field.direction", x) for x in vec)
        if np.linalg.norm(vec) == 0:
            raise ConfigError("field.direction: zero vector")
        return {"direction": vec}
    if "theta" not in value:
        raise ConfigError("field: need direction or theta")
    return {"theta": _real("field.theta", value["theta"]), "phi": _real("field.phi", value.get("phi", 0.0))}


def _parse_spectrum(value):
    if not isinstance(value, dict) or "model" not in value:
        raise ConfigError("spectrum: expected a mapping with a 'model' key")
    name = value["model"]
    if name not in SPECTRUM_PARAMS:
        raise ConfigError(f"spectrum.model: unknown model {name!r}; expected one of {sorted(SPECTRUM_PARAMS)}")
    keys = SPECTRUM_PARAMS[name]
    _require_keys(f"spectrum ({name})", value, ("model", *keys), required=keys)
    if name == "tabulated":
        return name, (str(value["file"]),)
    return name, tuple(_real(f"spectrum.{k}", value[k]) for k in keys)


def _parse_time(value, model_name):
    value = {} if value is None else value
    _require_keys("time", value, ("start", "stop", "count", "spacing"))
    spacing = value.get("spacing", "log" if model_name == "box" else "linear")
    if spacing not in ("linear", "log"):
        raise ConfigError(f"time.spacing: expected linear or log, got {spacing!r}")
    defaults = LOG_DEFAULTS if spacing == "log" else LINEAR_DEFAULTS
    start = _real("time.start", value.get("start", defaults["start"]))
    stop = _real("time.stop", value.get("stop", defaults["stop"]))
    count = value.get("count", defaults["count"])
    if isinstance(count, bool) or not isinstance(count, int):
        raise ConfigError(f"time.count: expected an integer, got {count!r}")
    if count < 1:
        raise ConfigError("time.count: the time grid is empty")
    if start < 0 or stop < start:
        raise ConfigError(f"time: need 0 <= start <= stop, got start={start}, stop={stop}")
    if spacing == "log" and start <= 0:
        raise ConfigError("time.start: log spacing needs start > 0")
    return TimeGrid(start, stop, count, spacing)


def parse_config(mapping, base_dir=".") -> ScenarioConfig:
    _require_keys(
        "config",
        mapping,
        ("state", "field", "spectrum", "time", "outputs", "mode", "state_dump_file"),
        required=("state", "field", "spectrum"),
    )
    state = _parse_state(mapping["state"])
    fld = _parse_field(mapping["field"])
    spectrum = _parse_spectrum(mapping["spectrum"])
    time = _parse_time(mapping.get("time"), spectrum[0])
    outputs = mapping.get("outputs", ["trace_distance"])
    if not isinstance(outputs, list) or not outputs:
        raise ConfigError("outputs: expected a non-empty list")
    bad = [o for o in outputs if o not in OUTPUTS]
    if bad:
        raise ConfigError(f"outputs: unknown output(s) {bad}; expected from {list(OUTPUTS)}")
    if len(set(outputs)) != len(outputs):
        raise ConfigError("outputs: duplicate entries")
    mode = mapping.get("mode", "double_sum")
    if mode not in MODES:
        raise ConfigError(f"mode: expected one of {list(MODES)}, got {mode!r}")
    dump_file = mapping.get("state_dump_file")
    if "state_dump" in outputs and dump_file is None:
        raise ConfigError("outputs: state_dump needs state_dump_file")
    cfg = ScenarioConfig(
        state=state,
        spectrum=spectrum,
        time=time,
        direction=fld.get("direction"),
        theta=fld.get("theta"),
        phi=fld.get("phi", 0.0),
        outputs=tuple(outputs),
        mode=mode,
        state_dump_file=None if dump_file is None else str(dump_file),
        base_dir=Path(base_dir),
    )
    if "concurrence" in cfg.outputs and cfg.n_qubits != 2:
        raise ConfigError(f"outputs: concurrence needs a two-qubit state, got {cfg.n_qubits} qubits")
    return cfg


def loads(text: str, base_dir=".") -> ScenarioConfig:
    try:
        mapping = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    return parse_config(mapping, base_dir=base_dir)


def load(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return loads(text, base_dir=path.parent)


def load_werner_coefficients(path, n_qubits: int) -> dict:
    """Read ``N`` permutation entries (0-based) plus a coefficient per line."""
    path = Path(path)
    coeffs = {}
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            cols = text.split()
            if len(cols) != n_qubits + 1:
                raise ConfigError(f"{path}:{lineno}: expected {n_qubits} permutation entries and a coefficient")
            try:
                perm = tuple(int(c) for c in cols[:-1])
                coeffs[perm] = coeffs.get(perm, 0.0) + float(cols[-1])
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: cannot parse {text!r}") from None
            if sorted(perm) != list(range(n_qubits)):
                raise ConfigError(f"{path}:{lineno}: {perm} is not a permutation of range({n_qubits})")
    return coeffs
