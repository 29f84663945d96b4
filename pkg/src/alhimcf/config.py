"""Run configuration: a flat sectioned ``key = value`` text format.

Example::

    [ambient]
    n = 3
    epsilon = 0
    [initial]
    mode = grid
    s0 = 1.0
    M = 64
    mode 1 0 0.1 0.0
    mode 0 1 0.05 0.0
    [solver]
    t_end = 12
    record_dt = 0.1
    [output]
    trace = trace.csv

A ``mode k_1 ... k_(n-1) amp_cos amp_sin`` line adds one Fourier mode to
the initial height.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .hypersurface import GraphState, torus_graph
from .solver import FlowConfig
from .warped import AmbientModel

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config"]


class ConfigError(ValueError):
    def __init__(self, msg, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


_KEYS = {
    "ambient": {"n": int, "epsilon": int, "theta": float, "genus": int},
    "initial": {"mode": str, "s0": float, "M": int},
    "solver": {"safety": float, "t_end": float, "record_dt": float, "rescale": "bool", "min_H": float},
    "output": {"trace": str},
}


def _to_bool(text):
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass
class RunConfig:
    ambient: AmbientModel
    mode: str
    s0: float
    M: Optional[int]
    modes: List[Tuple[Tuple[int, ...], float, float]]
    solver: FlowConfig
    output: Dict[str, str] = field(default_factory=dict)

    def initial_state(self) -> GraphState:
        if self.mode == "symmetric":
            return GraphState(self.ambient, self.s0)
        return torus_graph(self.ambient, self.M, self.s0, self.modes)

    def resolved(self) -> str:
        a, s = self.ambient, self.solver
        parts = [
            f"[ambient] n={a.n} epsilon={a.epsilon} theta={a.theta!r}" + (f" genus={a.genus}" if a.genus else ""),
            f"[initial] mode={self.mode} s0={self.s0!r}" + (f" M={self.M}" if self.M else ""),
        ]
        for k, ac, as_ in self.modes:
            parts.append("[initial] mode " + " ".join(str(x) for x in k) + f" {ac!r} {as_!r}")
        parts.append(
            f"[solver] safety={s.safety!r} t_end={s.t_end!r} record_dt={s.record_dt!r} "
            f"rescale={s.rescale} min_H={s.min_H!r}"
        )
        if self.output:
            parts.append("[output] " + " ".join(f"{k}={v}" for k, v in sorted(self.output.items())))
        return "\n".join(parts)


def parse_config(text: str) -> RunConfig:
    values: Dict[str, Dict[str, object]] = {k: {} for k in _KEYS}
    lines_of: Dict[Tuple[str, str], int] = {}
    modes_raw: List[Tuple[int, List[str]]] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _KEYS:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if section is None:
            raise ConfigError("entry before any section", lineno)
        if "=" not in line:
            words = line.split()
            if section == "initial" and words[0] == "mode":
                modes_raw.append((lineno, words[1:]))
                continue
            raise ConfigError(f"expected key = value, got {line!r}", lineno)
        key, val = (x.strip() for x in line.split("=", 1))
        kind = _KEYS[section].get(key)
        if kind is None:
            raise ConfigError(f"unknown key {key!r} in [{section}]", lineno)
        try:
            values[section][key] = _to_bool(val) if kind == "bool" else kind(val)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}", lineno) from None
        lines_of[(section, key)] = lineno

    def need(sec, key):
        if key not in values[sec]:
            raise ConfigError(f"missing [{sec}] {key}")
        return values[sec][key]

    amb_vals = values["ambient"]
    try:
        ambient = AmbientModel(need("ambient", "n"), need("ambient", "epsilon"),
                               amb_vals.get("theta"), amb_vals.get("genus"))
    except ValueError as exc:
        raise ConfigError(str(exc), lines_of.get(("ambient", "n"))) from None

    ini = values["initial"]
    mode = ini.get("mode", "grid")
    if mode not in ("grid", "symmetric"):
        raise ConfigError(f"mode must be grid or symmetric, got {mode!r}", lines_of.get(("initial", "mode")))
    s0 = need("initial", "s0")
    M = ini.get("M")
    d = ambient.n - 1
    modes = []
    for lineno, words in modes_raw:
        if len(words) != d + 2:
            raise ConfigError(f"mode line needs {d} wave numbers and 2 amplitudes", lineno)
        try:
            k = tuple(int(w) for w in words[:d])
            ac, as_ = float(words[d]), float(words[d + 1])
        except ValueError as exc:
            raise ConfigError(f"bad mode line: {exc}", lineno) from None
        modes.append((k, ac, as_))
    if mode == "grid":
        if M is None:
            raise ConfigError("grid mode needs [initial] M")
        if ambient.epsilon != 0:
            raise ConfigError("grid mode requires epsilon = 0", lines_of.get(("ambient", "epsilon")))
        if M < 8 or M % 2:
            raise ConfigError("M must be even and >= 8", lines_of.get(("initial", "M")))
    elif modes:
        raise ConfigError("symmetric mode takes no Fourier modes", modes_raw[0][0])
    if mode == "symmetric" and ambient.epsilon == -1 and not s0 > 0.6931471805599453:
        raise ConfigError("eps = -1 needs s0 > log 2", lines_of.get(("initial", "s0")))

    sol = values["solver"]
    try:
        solver = FlowConfig(
            t_end=need("solver", "t_end"),
            record_dt=need("solver", "record_dt"),
            safety=sol.get("safety", 0.4),
            rescale=sol.get("rescale"),
            min_H=sol.get("min_H", 1e-8),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(ambient, mode, s0, M, modes, solver, dict(values["output"]))


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read())
