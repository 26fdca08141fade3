"""YAML run configuration: parsing, validation and canonical serialization.

Units in the document: powers in watts, densities in BS/m^2 (a number or a
``"1/x"`` string), distances in meters, angles in degrees, antenna gains and
SNR thresholds in dB.  Noise power is linear and defaults to 1, so a
threshold T then reads directly as T*N.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

import yaml

from .coverage import Alignment, PdfMode
from .errors import ConfigError, DomainError
from .mcsim import SimConfig, SimKind
from .netmodel import (
    AntennaPattern,
    BlockageModel,
    ChannelModel,
    NetworkConfig,
    TierConfig,
    db_to_linear,
)

DEG = math.pi / 180.0

DEFAULTS: Dict[str, Any] = {
    "tiers": [
        {"power_w": 1.0, "density": "1/200"},
        {"power_w": 5.0, "density": "1/500"},
    ],
    "antenna": {"mode": "explicit", "beamwidth_deg": 20.0, "main_gain_db": 10.0, "side_gain_db": -10.0},
    "ue_antenna": None,
    "blockage": {"los_fraction": 0.117, "los_radius_m": 200.0},
    "channel": {"alpha_los": 2.0, "alpha_nlos": 4.0, "fading_rate": 1.0, "noise": 1.0},
    "steering_sigma_deg": 4.0,
    "coverage": {
        "thresholds_db": [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
        "mode": "paper-literal",
        "alignment": "with-errors",
    },
    "mc": {"kind": "branch-mirror", "trials": 100000, "seed": 0, "window_radius_m": "auto", "workers": 1},
    "sweep": {
        "thresholds_db": [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
        "alignments": ["perfect", "with-errors"],
        "beamwidths_deg": [5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 55.0, 60.0],
        "threshold_db": 10.0,
        "beamwidth_range_deg": [5.0, 60.0],
    },
    "output": "-",
}

_TIER_KEYS = {"power_w", "density", "beamwidth_deg"}
_REPLACED = {"antenna", "ue_antenna"}
_ANTENNA_KEYS = {"mode", "beamwidth_deg", "main_gain_db", "side_gain_db", "sidelobe_db"}


@dataclass(frozen=True)
class RunConfig:
    network: NetworkConfig
    thresholds_db: Tuple[float, ...]
    mode: PdfMode
    alignment: Alignment
    sim: SimConfig
    sweep_thresholds_db: Tuple[float, ...]
    sweep_alignments: Tuple[Alignment, ...]
    sweep_beamwidths_deg: Tuple[float, ...]
    sweep_threshold_db: float
    beamwidth_range_deg: Tuple[float, float]
    output: str
    document: Dict[str, Any]


def _check_keys(section: Dict[str, Any], allowed, where: str):
    if not isinstance(section, dict):
        raise ConfigError("expected a mapping", field=where)
    for key in section:
        if key not in allowed:
            path = f"{where}.{key}" if where else str(key)
            raise ConfigError(f"unknown key {key!r}", field=path)


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", field=where)
    return float(value)


def _density(value, where: str) -> float:
    if isinstance(value, str):
        try:
            return float(Fraction(value.replace(" ", "")))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot read density {value!r}; use a number or '1/x'", field=where) from None
    return _number(value, where)


def _number_list(value, where: str) -> Tuple[float, ...]:
    if not isinstance(value, list) or not value:
        raise ConfigError("expected a non-empty list of numbers", field=where)
    return tuple(_number(v, f"{where}[{i}]") for i, v in enumerate(value))


def _enum(cls, value, where: str):
    try:
        return cls(value)
    except ValueError:
        choices = ", ".join(m.value for m in cls)
        raise ConfigError(f"expected one of {choices}, got {value!r}", field=where) from None


def _merge(defaults: Dict[str, Any], doc: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(defaults)
    for key, value in doc.items():
        # antenna sections are replaced wholesale: the two modes take different keys
        if key not in _REPLACED and isinstance(merged.get(key), dict) and isinstance(value, dict):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _antenna(section, where: str) -> AntennaPattern:
    _check_keys(section, _ANTENNA_KEYS, where)
    mode = section.get("mode", "explicit")
    width = _number(section.get("beamwidth_deg"), f"{where}.beamwidth_deg") * DEG
    try:
        if mode == "derived":
            if "main_gain_db" in section or "side_gain_db" in section:
                raise ConfigError("derived mode takes sidelobe_db, not explicit gains", field=where)
            level = db_to_linear(_number(section.get("sidelobe_db"), f"{where}.sidelobe_db"))
            return AntennaPattern.derived(width, level)
        if mode == "explicit":
            if "sidelobe_db" in section:
                raise ConfigError("explicit mode takes main_gain_db/side_gain_db, not sidelobe_db", field=where)
            main = db_to_linear(_number(section.get("main_gain_db"), f"{where}.main_gain_db"))
            side = db_to_linear(_number(section.get("side_gain_db"), f"{where}.side_gain_db"))
            return AntennaPattern.explicit(width, main, side)
    except DomainError as exc:
        raise ConfigError(str(exc), field=where) from None
    raise ConfigError(f"mode must be 'derived' or 'explicit', got {mode!r}", field=f"{where}.mode")


def _load_yaml(text: str):
    try:
        doc = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark else None
        column = mark.column + 1 if mark else None
        raise ConfigError(f"syntax error: {exc.problem or exc}", line=line, column=column) from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"syntax error: {exc}") from None
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a mapping")
    return doc


def parse_config(text: str) -> RunConfig:
    doc = _load_yaml(text)
    _check_keys(doc, DEFAULTS.keys(), "")
    return build_run_config(_merge(DEFAULTS, doc))


def build_run_config(doc: Dict[str, Any]) -> RunConfig:
    for name in ("blockage", "channel", "coverage", "mc", "sweep"):
        _check_keys(doc[name], DEFAULTS[name].keys(), name)

    tiers_doc = doc["tiers"]
    if not isinstance(tiers_doc, list) or not tiers_doc:
        raise ConfigError("expected a non-empty list of tiers", field="tiers")
    tiers = []
    for i, t in enumerate(tiers_doc):
        where = f"tiers[{i}]"
        _check_keys(t, _TIER_KEYS, where)
        if "power_w" not in t or "density" not in t:
            raise ConfigError("tier needs power_w and density", field=where)
        bw = t.get("beamwidth_deg")
        try:
            tiers.append(
                TierConfig(
                    power=_number(t["power_w"], f"{where}.power_w"),
                    density=_density(t["density"], f"{where}.density"),
                    beamwidth=None if bw is None else _number(bw, f"{where}.beamwidth_deg") * DEG,
                )
            )
        except DomainError as exc:
            raise ConfigError(str(exc), field=where) from None

    if doc.get("antenna") is None:
        raise ConfigError("antenna section is required", field="antenna")
    bs = _antenna(doc["antenna"], "antenna")
    ue = bs if doc.get("ue_antenna") is None else _antenna(doc["ue_antenna"], "ue_antenna")

    blk, ch = doc["blockage"], doc["channel"]
    try:
        blockage = BlockageModel(
            _number(blk["los_fraction"], "blockage.los_fraction"),
            _number(blk["los_radius_m"], "blockage.los_radius_m"),
        )
    except DomainError as exc:
        raise ConfigError(str(exc), field="blockage") from None
    try:
        channel = ChannelModel(
            alpha_los=_number(ch["alpha_los"], "channel.alpha_los"),
            alpha_nlos=_number(ch["alpha_nlos"], "channel.alpha_nlos"),
            fading_rate=_number(ch["fading_rate"], "channel.fading_rate"),
            noise=_number(ch["noise"], "channel.noise"),
        )
    except DomainError as exc:
        raise ConfigError(str(exc), field="channel") from None
    try:
        network = NetworkConfig(
            tiers=tuple(tiers),
            bs_pattern=bs,
            ue_pattern=ue,
            blockage=blockage,
            channel=channel,
            steering_sigma=_number(doc["steering_sigma_deg"], "steering_sigma_deg") * DEG,
        )
    except DomainError as exc:
        raise ConfigError(str(exc), field="network") from None

    cov = doc["coverage"]
    mc = doc["mc"]
    window = mc["window_radius_m"]
    if window == "auto" or window is None:
        window = None
    else:
        window = _number(window, "mc.window_radius_m")
    for key in ("trials", "seed", "workers"):
        if isinstance(mc[key], bool) or not isinstance(mc[key], int):
            raise ConfigError(f"expected an integer, got {mc[key]!r}", field=f"mc.{key}")
    try:
        sim = SimConfig(
            network=network,
            trials=mc["trials"],
            seed=mc["seed"],
            window_radius=window,
            kind=_enum(SimKind, mc["kind"], "mc.kind"),
            alignment=_enum(Alignment, cov["alignment"], "coverage.alignment"),
            workers=mc["workers"],
        )
    except DomainError as exc:
        raise ConfigError(str(exc), field="mc") from None

    sw = doc["sweep"]
    if not isinstance(sw["alignments"], list) or not sw["alignments"]:
        raise ConfigError("expected a non-empty list", field="sweep.alignments")
    rng = _number_list(sw["beamwidth_range_deg"], "sweep.beamwidth_range_deg")
    if len(rng) != 2 or not 0.0 < rng[0] <= rng[1] < 360.0:
        raise ConfigError("expected [lo, hi] with 0 < lo <= hi < 360", field="sweep.beamwidth_range_deg")
    if not isinstance(doc["output"], str):
        raise ConfigError("expected a path string", field="output")

    return RunConfig(
        network=network,
        thresholds_db=_number_list(cov["thresholds_db"], "coverage.thresholds_db"),
        mode=_enum(PdfMode, cov["mode"], "coverage.mode"),
        alignment=_enum(Alignment, cov["alignment"], "coverage.alignment"),
        sim=sim,
        sweep_thresholds_db=_number_list(sw["thresholds_db"], "sweep.thresholds_db"),
        sweep_alignments=tuple(
            _enum(Alignment, a, f"sweep.alignments[{i}]") for i, a in enumerate(sw["alignments"])
        ),
        sweep_beamwidths_deg=_number_list(sw["beamwidths_deg"], "sweep.beamwidths_deg"),
        sweep_threshold_db=_number(sw["threshold_db"], "sweep.threshold_db"),
        beamwidth_range_deg=(rng[0], rng[1]),
        output=doc["output"],
        document=doc,
    )


def dump_config(run: RunConfig) -> str:
    """Canonical YAML for ``run``; parsing it again yields an equal RunConfig."""
    return yaml.safe_dump(run.document, sort_keys=True, default_flow_style=False)


def load_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return parse_config("")
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
