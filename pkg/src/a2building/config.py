"""Run configuration: one strict JSON schema shared by every subcommand.

Unknown keys are errors so that published runs stay reproducible; the
canonical config hash is embedded in every report.
"""

import hashlib
import json
from fractions import Fraction

from .errors import ConfigError
from .isometry import GroupElement
from .lattices import Vertex, standard_vertex, vertex_normal_form
from .walks import MeasureSpec, measure_spec

_SCHEMA_VERSION = 1

_COMMAND_FIELDS = {
    "proportion": {"n_grid": list, "trials": int, "seed": int},
    "drift": {"n": int, "trials": int, "seed": int},
    "converge": {"n_max": int, "trials": int, "seed": int},
    "opposite": {"n": int, "trials": int, "seed": int},
    "boundary": {"n": int, "trials": int, "seed": int, "depth": int},
    "pair": {"seed": int, "budget": int},
    "free_cert": {
        "word_depth": int,
        "power": (int, type(None)),
        "margin": (int, type(None)),
        "sampling_trials": int,
        "sampling_seed": int,
        "g1": list,
        "g2": list,
    },
    "fixed_point": {"radius": (int, type(None)), "word_depth": int},
    "classify": {"elements": list},
}

_OPTIONAL_DEFAULTS = {
    "free_cert": {
        "power": None,
        "margin": None,
        "sampling_trials": 1000,
        "sampling_seed": 0,
    },
    "fixed_point": {"radius": None, "word_depth": 2},
}

_TOP_KEYS = {"schema_version", "prime", "generators", "weights", "basepoint"} | set(
    _COMMAND_FIELDS
)


def config_hash(raw: dict) -> str:
    canon = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _require(cond, path, message):
    if not cond:
        raise ConfigError(path, message)


def _parse_matrix(data, p, path):
    _require(isinstance(data, list) and len(data) == 3, path, "expected a 3x3 matrix")
    for i, row in enumerate(data):
        _require(
            isinstance(row, list) and len(row) == 3, f"{path}[{i}]", "expected 3 entries"
        )
        for j, e in enumerate(row):
            _require(
                isinstance(e, (str, int)), f"{path}[{i}][{j}]", "entries are strings"
            )
    try:
        return GroupElement.from_matrix(data, p)
    except Exception as exc:
        raise ConfigError(path, f"bad matrix: {exc}") from None


class RunConfig:
    """Validated configuration; exposes typed accessors per command."""

    def __init__(self, raw: dict):
        _require(isinstance(raw, dict), "config", "top level must be an object")
        for key in raw:
            _require(key in _TOP_KEYS, f"config.{key}", "unknown key")
        _require(
            raw.get("schema_version") == _SCHEMA_VERSION,
            "config.schema_version",
            f"must be {_SCHEMA_VERSION}",
        )
        _require("prime" in raw, "config.prime", "missing")
        p = raw["prime"]
        _require(isinstance(p, int) and p >= 2, "config.prime", "prime >= 2 required")
        _require(_is_prime(p), "config.prime", f"{p} is not prime")
        self.raw = raw
        self.prime = p
        self.hash = config_hash(raw)
        self.generators = tuple(
            _parse_matrix(mat, p, f"config.generators[{i}]")
            for i, mat in enumerate(raw.get("generators", []))
        )
        weights = raw.get("weights")
        if weights is None and self.generators:
            self.weights = tuple(
                Fraction(1, len(self.generators)) for _ in self.generators
            )
        elif weights is not None:
            _require(
                isinstance(weights, list) and len(weights) == len(self.generators),
                "config.weights",
                "one weight per generator",
            )
            try:
                self.weights = tuple(Fraction(str(w)) for w in weights)
            except ValueError as exc:
                raise ConfigError("config.weights", str(exc)) from None
        else:
            self.weights = ()
        if "basepoint" in raw:
            try:
                self.basepoint = vertex_normal_form(raw["basepoint"], p)
            except Exception as exc:
                raise ConfigError("config.basepoint", str(exc)) from None
        else:
            self.basepoint = standard_vertex(p)
        self.sections = {}
        for name, fields in _COMMAND_FIELDS.items():
            if name not in raw:
                continue
            section = raw[name]
            path = f"config.{name}"
            _require(isinstance(section, dict), path, "expected an object")
            merged = dict(_OPTIONAL_DEFAULTS.get(name, {}))
            for key, value in section.items():
                _require(key in fields, f"{path}.{key}", "unknown key")
                expect = fields[key]
                if not isinstance(expect, tuple):
                    expect = (expect,)
                _require(
                    isinstance(value, expect) and not isinstance(value, bool),
                    f"{path}.{key}",
                    f"expected {'/'.join(t.__name__ for t in expect)}",
                )
                merged[key] = value
            for key in fields:
                if key in ("power", "margin"):
                    continue
                _require(key in merged, f"{path}.{key}", "missing required key")
            self.sections[name] = merged

    def section(self, name, seed_override=None):
        if name not in self.sections:
            raise ConfigError(f"config.{name}", "section missing for this command")
        data = dict(self.sections[name])
        if seed_override is not None and "seed" in _COMMAND_FIELDS[name]:
            data["seed"] = int(seed_override)
        return data

    def spec(self) -> MeasureSpec:
        if not self.generators:
            raise ConfigError("config.generators", "no generators given")
        return measure_spec(list(zip(self.generators, self.weights)))

    def element(self, data, path) -> GroupElement:
        return _parse_matrix(data, self.prime, path)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return RunConfig(raw)
