"""Experiment configuration (INI text) and run records."""

from __future__ import annotations

import configparser
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import __version__
from .counting import Chart
from .lattice import ApproximationProfile, PowerLaw
from .polynomial import SparsePolynomial, parse_polynomial


class ConfigError(ValueError):
    """Invalid configuration; the CLI maps it to exit code 2."""


def _split(text: str, sep: str = ";") -> List[str]:
    return [t.strip() for t in text.split(sep) if t.strip()]


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def _fstr(x: Fraction) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class ExperimentConfig:
    variables: Tuple[str, ...] = ("x",)
    components: Tuple[str, ...] = ("x^2 + 2",)
    domain: Tuple[Tuple[Fraction, Fraction], ...] = ((Fraction(0), Fraction(1)),)
    n: int = 2
    m: int = 1
    psi: Tuple[str, ...] = ("1, -1/2", "1, -1/2")
    phi: Tuple[str, ...] = ("1, 1",)
    eps: Tuple[Fraction, ...] = (Fraction(1),)
    Q: Tuple[int, ...] = (16, 32, 64)
    gamma: Fraction = Fraction(1, 2)
    c: Tuple[Fraction, ...] = (Fraction(1), Fraction(4), Fraction(16))
    seed: int = 0
    samples: int = 100
    delta0: Fraction = Fraction(1, 4)
    cF: Fraction = Fraction(1, 100)
    maps: int = 100
    resolution: int = 512

    # -- validation --------------------------------------------------------
    def validate(self) -> "ExperimentConfig":
        d = len(self.variables)
        if d < 1:
            raise ConfigError("at least one variable is required")
        if not self.n > self.m >= d - 1 >= 0:
            raise ConfigError(f"need n > m >= d-1 >= 0, got n={self.n}, m={self.m}, d={d}")
        if len(self.components) != self.m + 1 - d:
            raise ConfigError(f"need m+1-d = {self.m + 1 - d} chart components, got {len(self.components)}")
        if len(self.domain) != d or any(lo >= hi for lo, hi in self.domain):
            raise ConfigError("domain must give one nonempty interval per variable")
        if not self.Q or any(q < 1 for q in self.Q):
            raise ConfigError("Q schedule must be a nonempty list of positive integers")
        if self.gamma <= 0 or any(c <= 0 for c in self.c) or not self.c:
            raise ConfigError("gamma and every c must be positive")
        if not self.eps or any(e <= 0 for e in self.eps):
            raise ConfigError("eps values must be positive")
        if self.samples < 1 or self.maps < 1 or self.resolution < 2:
            raise ConfigError("samples, maps and resolution must be positive")
        if self.delta0 <= 0 or self.cF <= 0:
            raise ConfigError("delta0 and cF must be positive")
        self.chart()
        for e in self.eps:
            self.profile(e)
        return self

    # -- derived objects ---------------------------------------------------
    def chart(self) -> Chart:
        try:
            comps = tuple(parse_polynomial(c, self.variables) for c in self.components)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return Chart(len(self.variables), comps)

    def full_map(self, point: Sequence[Fraction]) -> List[Fraction]:
        """``(x_0..x_{d-1}, f_d(x), .., f_m(x))``."""
        return list(point) + [p.evaluate(point) for p in self.chart().components]

    def _law(self, text: str, eps: Fraction) -> PowerLaw:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2:
            raise ConfigError(f"power law must be 'coeff, exponent', got {text!r}")
        try:
            coeff = parse_polynomial(parts[0], ["eps"]).evaluate([eps])
            return PowerLaw(coeff, _frac(parts[1]))
        except ValueError as exc:
            raise ConfigError(f"bad power law {text!r}: {exc}") from exc

    def profile(self, eps: Fraction = Fraction(1)) -> ApproximationProfile:
        try:
            return ApproximationProfile(self.n, self.m, len(self.variables),
                                        tuple(self._law(t, eps) for t in self.psi),
                                        tuple(self._law(t, eps) for t in self.phi))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    # -- serialization -----------------------------------------------------
    def semantic(self) -> Dict[str, object]:
        d = asdict(self)
        out = {}
        for k, v in d.items():
            out[k] = json.loads(json.dumps(v, default=str))
        return out

    def hash(self) -> str:
        blob = json.dumps(self.semantic(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_ini(self) -> str:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        cp["manifold"] = {
            "variables": ", ".join(self.variables),
            "components": "; ".join(self.components),
            "domain": "; ".join(f"{_fstr(a)}, {_fstr(b)}" for a, b in self.domain),
        }
        cp["profile"] = {
            "n": str(self.n), "m": str(self.m),
            "psi": "; ".join(self.psi), "phi": "; ".join(self.phi),
            "eps": ", ".join(_fstr(e) for e in self.eps),
        }
        cp["experiment"] = {
            "Q": ", ".join(map(str, self.Q)), "gamma": _fstr(self.gamma),
            "c": ", ".join(_fstr(c) for c in self.c), "seed": str(self.seed),
            "samples": str(self.samples),
        }
        cp["tailor"] = {"delta0": _fstr(self.delta0), "cF": _fstr(self.cF)}
        cp["goodness"] = {"maps": str(self.maps), "resolution": str(self.resolution)}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    @classmethod
    def from_ini(cls, text: str) -> "ExperimentConfig":
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"malformed config: {exc}") from exc
        base = cls()
        kw: Dict[str, object] = {}

        def get(section, key):
            if cp.has_section(section) and cp.has_option(section, key):
                return cp.get(section, key)
            return None

        try:
            if (v := get("manifold", "variables")) is not None:
                kw["variables"] = tuple(_split(v, ","))
            if (v := get("manifold", "components")) is not None:
                kw["components"] = tuple(_split(v))
            if (v := get("manifold", "domain")) is not None:
                dom = []
                for part in _split(v):
                    lo, hi = _split(part, ",")
                    dom.append((_frac(lo), _frac(hi)))
                kw["domain"] = tuple(dom)
            for key in ("n", "m"):
                if (v := get("profile", key)) is not None:
                    kw[key] = int(v)
            for key in ("psi", "phi"):
                if (v := get("profile", key)) is not None:
                    kw[key] = tuple(_split(v))
            if (v := get("profile", "eps")) is not None:
                kw["eps"] = tuple(_frac(t) for t in _split(v, ","))
            if (v := get("experiment", "Q")) is not None:
                kw["Q"] = tuple(int(t) for t in _split(v, ","))
            if (v := get("experiment", "gamma")) is not None:
                kw["gamma"] = _frac(v)
            if (v := get("experiment", "c")) is not None:
                kw["c"] = tuple(_frac(t) for t in _split(v, ","))
            for key in ("seed", "samples"):
                if (v := get("experiment", key)) is not None:
                    kw[key] = int(v)
            for key in ("delta0", "cF"):
                if (v := get("tailor", key)) is not None:
                    kw[key] = _frac(v)
            for key in ("maps", "resolution"):
                if (v := get("goodness", key)) is not None:
                    kw[key] = int(v)
        except (ValueError, TypeError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc
        return cls(**{**asdict(base), **kw}).validate()

    def replace(self, **changes) -> "ExperimentConfig":
        return ExperimentConfig(**{**asdict(self), **changes})


@dataclass
class RunRecord:
    config_hash: str
    tool_version: str = __version__
    command: str = ""
    seed: int = 0
    wall_ms: float = 0.0
    outputs: List[str] = field(default_factory=list)
    rng: str = "numpy Philox"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)
