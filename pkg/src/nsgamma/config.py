"""Run configuration: ``key = value`` text files with ``#`` comments."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .dynamics import FragmentParams, NarrowResonanceWarning
from .shape import Polarizability, kappa_from_d0
from .spectrum import MODES, ConfigError, GridSpec
from .units import DomainError, Energy, Length, Time, damping_from_lifetime


@dataclass(frozen=True)
class RunConfig:
    fragment: str = "140Xe"
    hw2_mev: float = 2.2
    hw3_mev: float = 2.8
    beta2_0: float = 0.7
    beta3_0: float = 0.7
    tau_diss_s: float | None = 1e-19
    gamma2_mev: float | None = None
    gamma3_mev: float | None = None
    d0_fm: float | None = 5.0
    kappa_fm: float | None = None
    beta0: float = 0.0
    hw_max_mev: float | None = None
    points: int = 2001
    refine: bool = True
    mode: str = "exact"

    def __post_init__(self):
        if self.tau_diss_s is not None and (self.gamma2_mev is not None or self.gamma3_mev is not None):
            raise ConfigError("tau_diss_s: give either tau_diss_s or gamma2_mev/gamma3_mev, not both")
        if self.tau_diss_s is None and (self.gamma2_mev is None or self.gamma3_mev is None):
            missing = "gamma2_mev" if self.gamma2_mev is None else "gamma3_mev"
            raise ConfigError(f"{missing}: both widths are needed when tau_diss_s is absent")
        if (self.d0_fm is None) == (self.kappa_fm is None):
            raise ConfigError("d0_fm: give exactly one of d0_fm or kappa_fm")
        if self.mode not in MODES:
            raise ConfigError(f"mode: expected one of {MODES}, got {self.mode!r}")
        for name in ("hw2_mev", "hw3_mev"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name}: must be positive")
        if self.tau_diss_s is not None and not self.tau_diss_s > 0.0:
            raise ConfigError("tau_diss_s: must be positive")
        if self.tau_diss_s is None and not (self.gamma2_mev + self.gamma3_mev) > 0.0:
            raise ConfigError("gamma2_mev: total width gamma2_mev + gamma3_mev must be positive")
        if self.gamma2_mev is not None and (self.gamma2_mev < 0.0 or self.gamma3_mev < 0.0):
            raise ConfigError("gamma2_mev: widths must be non-negative")
        if self.d0_fm is not None and not self.d0_fm > 0.0:
            raise ConfigError("d0_fm: must be positive")
        if self.kappa_fm is not None and not self.kappa_fm > 0.0:
            raise ConfigError("kappa_fm: must be positive")
        if self.points < 2:
            raise ConfigError("points: need at least 2")

    # -- parsing

    @classmethod
    def from_text(cls, text: str) -> RunConfig:
        raw: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            if key in raw:
                raise ConfigError(f"{key}: given twice")
            raw[key] = value
        return cls.from_mapping(raw)

    @classmethod
    def from_file(cls, path) -> RunConfig:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"config: cannot read {path}: {exc}") from exc
        return cls.from_text(text)

    @classmethod
    def from_mapping(cls, raw: dict[str, str]) -> RunConfig:
        types = {f.name: f.type for f in fields(cls)}
        unknown = sorted(set(raw) - set(types))
        if unknown:
            raise ConfigError(f"{unknown[0]}: unknown key")
        kwargs = {}
        # an explicit width pair or kappa displaces the built-in defaults
        if "gamma2_mev" in raw or "gamma3_mev" in raw:
            kwargs["tau_diss_s"] = None
        if "kappa_fm" in raw:
            kwargs["d0_fm"] = None
        for key, value in raw.items():
            kwargs[key] = _parse_value(key, types[key], value)
        return cls(**kwargs)

    def with_overrides(self, **changes) -> RunConfig:
        if "tau_diss_s" in changes:
            changes.setdefault("gamma2_mev", None)
            changes.setdefault("gamma3_mev", None)
        if "d0_fm" in changes:
            changes.setdefault("kappa_fm", None)
        return replace(self, **changes)

    def echo_lines(self) -> list[str]:
        """``key = value`` lines that parse back to this exact config."""
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, bool):
                s = "true" if v else "false"
            elif isinstance(v, float):
                s = repr(v)
            else:
                s = str(v)
            out.append(f"{f.name} = {s}")
        return out

    # -- resolution

    def to_params(self) -> FragmentParams:
        try:
            if self.tau_diss_s is not None:
                g = damping_from_lifetime(Time(self.tau_diss_s)).mev
                g2, g3 = 0.5 * g, 0.5 * g
            else:
                g2, g3 = self.gamma2_mev, self.gamma3_mev
            if self.kappa_fm is not None:
                kappa = Polarizability(Length(self.kappa_fm))
            elif self.beta2_0 * self.beta3_0 != 0.0:
                kappa = kappa_from_d0(Length(self.d0_fm), self.beta2_0, self.beta3_0)
            else:
                # the dipole vanishes identically; any positive kappa will do
                kappa = Polarizability(Length(self.d0_fm))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NarrowResonanceWarning)
                return FragmentParams(
                    Energy(self.hw2_mev), Energy(self.hw3_mev), self.beta2_0, self.beta3_0,
                    Energy(g2), Energy(g3), kappa,
                )
        except DomainError as exc:
            raise ConfigError(f"config: {exc}") from exc

    def grid_spec(self) -> GridSpec:
        return GridSpec(hw_max=self.hw_max_mev, points=self.points, refine=self.refine)


def _parse_value(key: str, typ: str, value: str):
    try:
        if "bool" in typ:
            low = value.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(value)
        if "int" in typ:
            return int(value)
        if "float" in typ:
            x = float(value)
            if not math.isfinite(x):
                raise ValueError(value)
            return x
        return value
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r}") from None
