"""Command-line interface.

Subcommands: fit, predict, crossval, auth, simulate, energy,
profile {init, update, show}.  Options resolve as flags over a JSON
config file over defaults, and every output document embeds the resolved
configuration and seed, so identical invocations produce byte-identical
files.

Exit codes: 0 success, 1 input error, 2 computation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .dataio import load_csv, make_cv_splits
from .energy import (
    DutyCycleSchedule,
    default_power_profiles,
    duty_schedule,
    estimate_energy,
    load_power_profiles,
)
from .evaluation import cv_rows_to_csv, cv_summary, run_cv
from .exceptions import CycleAuthError, ParseError
from .features import ActivityWindow
from .fitting import FitConfig, fit
from .model import TimeSeries, model_from_json, model_to_dict, model_to_json, predict
from .policy import PolicyConfig, RiskLevel, policy_step
from .profile import (
    ActivityProfile,
    AuthConfig,
    Verdict,
    accept_and_update,
    authenticate,
    enroll,
    profile_from_json,
    profile_to_json,
    sample_window,
)

DEFAULTS = {
    "seed": 0,
    "level": 0.8,
    "te_threshold": 0.7,
    "escalation_floor": 0.4,
    "horizon": 300,
    "n_sims": 1000,
    "trend": "linear",
    "n_changepoints": 10,
    "auto_order": 8,
    "window_length": 100,
    "train_len": 500,
    "block": 100,
    "n_blocks": 5,
    "sensor": "BMA220",
    "frame_length": 60.0,
    "initial_risk": "regular",
}

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_COMPUTE = 2


class _InputStage(Exception):
    """Wraps an error raised while reading inputs (exit code 1)."""

    def __init__(self, cause):
        super().__init__(str(cause))
        self.cause = cause


def _resolve_config(args) -> dict:
    config = dict(DEFAULTS)
    path = getattr(args, "config", None)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise _InputStage(exc) from exc
        if not isinstance(loaded, dict):
            raise _InputStage(ValueError("config file must hold a JSON object"))
        config.update(loaded)
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            config[key] = flag
    return config


def _canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _fit_config(config: dict) -> FitConfig:
    return FitConfig(
        trend=config["trend"],
        n_changepoints=int(config["n_changepoints"]),
        auto_period=True,
        auto_order=int(config["auto_order"]),
        level=float(config["level"]),
        seed=int(config["seed"]),
    )


def _auth_config(config: dict) -> AuthConfig:
    return AuthConfig(
        te_threshold=float(config["te_threshold"]),
        escalation_floor=float(config["escalation_floor"]),
        level=float(config["level"]),
        n_sims=int(config["n_sims"]),
        seed=int(config["seed"]),
        window_length=int(config["window_length"]),
    )


def _load_recordings(path):
    try:
        return load_csv(path)
    except (OSError, ParseError) as exc:
        raise _InputStage(exc) from exc


def _select_recording(recordings, activity):
    matches = [r for r in recordings if r.label == activity]
    if not matches:
        raise _InputStage(ValueError(f"no recording labelled {activity!r} in input"))
    return matches[0]


def _window_from_recording(rec) -> ActivityWindow:
    t = rec.t
    return ActivityWindow(
        label=rec.label,
        x=TimeSeries(t=t, y=rec.ax),
        y=TimeSeries(t=t, y=rec.ay),
        z=TimeSeries(t=t, y=rec.az),
    )


def _load_profile(path) -> ActivityProfile:
    try:
        return profile_from_json(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise _InputStage(exc) from exc


def _sensor_profile(config: dict, path=None):
    table = default_power_profiles()
    if path:
        try:
            table.update(load_power_profiles(path))
        except (OSError, json.JSONDecodeError) as exc:
            raise _InputStage(exc) from exc
    name = config["sensor"]
    if name not in table:
        raise _InputStage(ValueError(f"unknown sensor {name!r}; known: {sorted(table)}"))
    return table[name]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_fit(args) -> int:
    config = _resolve_config(args)
    rec = _select_recording(_load_recordings(args.input), args.activity)
    out_dir = Path(args.out)
    fit_config = _fit_config(config)

    files = {}
    for axis in ("x", "y", "z"):
        model = fit(TimeSeries(t=rec.t, y=rec.axis(axis)), fit_config)
        name = f"{args.activity}_{axis}.model.json"
        _write_text(out_dir / name, model_to_json(model) + "\n")
        files[axis] = name
    summary = {
        "activity": args.activity,
        "subject_id": rec.subject_id,
        "n_samples": len(rec),
        "model_files": files,
        "config": config,
    }
    _write_text(out_dir / f"{args.activity}.fit.json", _canonical_json(summary))
    print(f"fit {args.activity}: {len(rec)} samples -> {out_dir}")
    return EXIT_OK


def cmd_predict(args) -> int:
    config = _resolve_config(args)
    try:
        model = model_from_json(Path(args.model).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise _InputStage(exc) from exc
    band = predict(
        model,
        int(config["horizon"]),
        level=float(config["level"]),
        n_sims=int(config["n_sims"]),
        seed=int(config["seed"]),
    )
    doc = {
        "t": band.t.tolist(),
        "yhat": band.yhat.tolist(),
        "lower": band.lower.tolist(),
        "upper": band.upper.tolist(),
        "level": band.level,
        "config": config,
    }
    _write_text(args.out, _canonical_json(doc))
    print(f"predicted {len(band)} steps -> {args.out}")
    return EXIT_OK


def cmd_crossval(args) -> int:
    config = _resolve_config(args)
    rec = _select_recording(_load_recordings(args.input), args.activity)
    try:
        split = make_cv_splits(
            rec,
            train_len=int(config["train_len"]),
            block=int(config["block"]),
            n_blocks=int(config["n_blocks"]),
        )
    except CycleAuthError as exc:
        raise _InputStage(exc) from exc
    rows = run_cv(
        rec,
        split,
        _fit_config(config),
        level=float(config["level"]),
        n_sims=int(config["n_sims"]),
        seed=int(config["seed"]),
    )
    out_dir = Path(args.out)
    _write_text(out_dir / f"{args.activity}.cv.csv", cv_rows_to_csv(rows))
    summary = {
        "activity": args.activity,
        "per_axis": cv_summary(rows),
        "config": config,
    }
    _write_text(out_dir / f"{args.activity}.cv.json", _canonical_json(summary))
    worst = max(v["mse"] for v in cv_summary(rows).values())
    print(f"crossval {args.activity}: worst-axis mean MSE {worst:.4f} -> {out_dir}")
    return EXIT_OK


def _decision_doc(decision, config) -> dict:
    return {
        "verdict": decision.verdict.value,
        "coverage_ratio": decision.coverage_ratio,
        "te_threshold": decision.te_threshold,
        "evidence": decision.evidence,
        "config": config,
    }


def cmd_auth(args) -> int:
    config = _resolve_config(args)
    profile = _load_profile(args.profile)
    rec = _load_recordings(args.window)
    if len(rec) != 1:
        raise _InputStage(ValueError("window CSV must hold exactly one recording"))
    window = _window_from_recording(rec[0])
    decision = authenticate(window, profile, _auth_config(config))
    doc = _decision_doc(decision, config)
    if args.out:
        _write_text(args.out, _canonical_json(doc))
    print(f"verdict: {decision.verdict.value} (min coverage {decision.coverage_ratio:.3f})")
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = _resolve_config(args)
    profile = _load_profile(args.profile)
    try:
        scenario = json.loads(Path(args.scenario).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise _InputStage(exc) from exc
    if isinstance(scenario, list):
        steps = scenario
        scenario_meta = {}
    elif isinstance(scenario, dict) and isinstance(scenario.get("steps"), list):
        steps = scenario["steps"]
        scenario_meta = {k: v for k, v in scenario.items() if k != "steps"}
    else:
        raise _InputStage(ValueError("scenario must be a JSON list or {'steps': [...]}"))
    for i, step in enumerate(steps):
        if not isinstance(step, dict) or "kind" not in step or "timestamp" not in step:
            raise _InputStage(ValueError(f"step {i} needs 'kind' and 'timestamp'"))
        if step["kind"] not in ("owner", "impostor", "idle"):
            raise _InputStage(ValueError(f"step {i}: unknown kind {step['kind']!r}"))

    auth_config = _auth_config(config)
    sensor = _sensor_profile(config, getattr(args, "power_profiles", None))
    policy = PolicyConfig(frame_length=float(config["frame_length"]))
    risk = RiskLevel[str(scenario_meta.get("initial_risk", config["initial_risk"])).upper()]
    default_label = sorted(profile.entries)[0] if profile.entries else None

    log = []
    accepts = 0
    auth_steps = 0
    total_charge = 0.0
    currents = []
    for i, step in enumerate(steps):
        kind = step["kind"]
        risk_before = risk
        decision = None
        if kind == "idle":
            schedule, risk = policy_step(risk, None, idle_context=True, config=policy)
        else:
            label = step.get("label", default_label)
            if label not in profile.entries:
                raise _InputStage(ValueError(f"step {i}: no profile entry for {label!r}"))
            entry = profile.entries[label]
            amplitude = float(
                step.get("amplitude_scale", 2.5 if kind == "impostor" else 1.0)
            )
            noise = float(step.get("noise_scale", 1.0))
            window = sample_window(
                entry.axis_models,
                entry.normalization,
                label,
                int(step.get("window_length", config["window_length"])),
                seed=int(config["seed"]) * 99991 + i,
                noise_scale=noise,
                amplitude_scale=amplitude,
            )
            decision = authenticate(window, profile, auth_config)
            auth_steps += 1
            accepts += decision.verdict is Verdict.ACCEPT
            schedule, risk = policy_step(risk, decision, idle_context=False, config=policy)
        average, charge = estimate_energy(schedule, sensor)
        total_charge += charge
        currents.append(average)
        log.append(
            {
                "timestamp": step["timestamp"],
                "kind": kind,
                "verdict": decision.verdict.value if decision else None,
                "coverage_ratio": decision.coverage_ratio if decision else None,
                "risk_before": risk_before.name.lower(),
                "risk_after": risk.name.lower(),
                "average_current_ua": average,
                "charge_uas": charge,
            }
        )
    totals = {
        "steps": len(steps),
        "auth_steps": auth_steps,
        "accepts": accepts,
        "accept_rate": (accepts / auth_steps) if auth_steps else 0.0,
        "mean_average_current_ua": float(np.mean(currents)) if currents else 0.0,
        "total_charge_uas": total_charge,
        "final_risk": risk.name.lower(),
    }
    doc = {"log": log, "totals": totals, "sensor": sensor.name, "config": config}
    _write_text(args.out, _canonical_json(doc))
    print(
        f"simulated {len(steps)} steps: accept rate {totals['accept_rate']:.2f}, "
        f"mean current {totals['mean_average_current_ua']:.1f} uA -> {args.out}"
    )
    return EXIT_OK


def cmd_energy(args) -> int:
    config = _resolve_config(args)
    sensor = _sensor_profile(config, getattr(args, "power_profiles", None))
    if args.schedule:
        try:
            doc = json.loads(Path(args.schedule).read_text(encoding="utf-8"))
            schedule = DutyCycleSchedule(
                frame_length=float(doc["frame_length"]),
                segments=tuple((seg[0], seg[1]) for seg in doc["segments"]),
            )
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise _InputStage(exc) from exc
    else:
        if args.duty is None:
            raise _InputStage(ValueError("need either --duty or --schedule"))
        schedule = duty_schedule(float(args.duty), frame_length=float(config["frame_length"]))
    average, charge = estimate_energy(schedule, sensor)
    doc = {
        "sensor": sensor.name,
        "average_current_ua": average,
        "charge_uas": charge,
        "frame_length_s": schedule.frame_length,
        "segments": [list(seg) for seg in schedule.segments],
        "config": config,
    }
    if args.out:
        _write_text(args.out, _canonical_json(doc))
    print(f"{sensor.name}: average {average:.6g} uA, charge {charge:.6g} uA*s")
    return EXIT_OK


def cmd_profile_init(args) -> int:
    config = _resolve_config(args)
    recordings = _load_recordings(args.input)
    if not recordings:
        raise _InputStage(ValueError("input CSV holds no recordings"))
    user = args.user or recordings[0].subject_id
    profile = ActivityProfile(user_id=user)
    auth_config = _auth_config(config)
    for rec in recordings:
        profile = enroll(
            profile, rec.label, rec.t, rec.ax, rec.ay, rec.az, auth_config,
            fit_config=_fit_config(config),
        )
    _write_text(args.out, profile_to_json(profile) + "\n")
    print(f"profile {user}: enrolled {profile.labels()} -> {args.out}")
    return EXIT_OK


def cmd_profile_update(args) -> int:
    config = _resolve_config(args)
    profile = _load_profile(args.profile)
    rec = _load_recordings(args.window)
    if len(rec) != 1:
        raise _InputStage(ValueError("window CSV must hold exactly one recording"))
    window = _window_from_recording(rec[0])
    auth_config = _auth_config(config)
    decision = authenticate(window, profile, auth_config)
    out = args.out or args.profile
    if decision.verdict is Verdict.ACCEPT:
        profile = accept_and_update(window, profile, decision, auth_config)
        _write_text(out, profile_to_json(profile) + "\n")
        print(f"accepted; profile updated -> {out}")
    else:
        print(f"not updated: verdict {decision.verdict.value}")
    if args.decision_out:
        _write_text(args.decision_out, _canonical_json(_decision_doc(decision, config)))
    return EXIT_OK


def cmd_profile_show(args) -> int:
    profile = _load_profile(args.profile)
    doc = {"user_id": profile.user_id, "activities": {}}
    for label in profile.labels():
        entry = profile.entries[label]
        doc["activities"][label] = {
            "observation_count": entry.observation_count,
            "buffer_samples": int(len(entry.buffer_t)),
            "noise_sigma": {
                axis: entry.axis_models[axis].noise_sigma for axis in ("x", "y", "z")
            },
            "singularity_windows": {
                axis: len(entry.singularities[axis]) for axis in ("x", "y", "z")
            },
        }
    print(json.dumps(doc, sort_keys=True, indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(parser) -> None:
    parser.add_argument("--config", help="JSON config file merged under flags")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--level", type=float, default=None)
    parser.add_argument("--te-threshold", dest="te_threshold", type=float, default=None)
    parser.add_argument("--horizon", type=int, default=None)
    parser.add_argument("--n-sims", dest="n_sims", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cycleauth",
        description="Additive activity forecasting and continuous authentication",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit per-axis models from a CSV recording")
    p.add_argument("--input", required=True)
    p.add_argument("--activity", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trend", default=None)
    p.add_argument("--n-changepoints", dest="n_changepoints", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="forecast from a fitted model JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("crossval", help="rolling-origin cross-validation")
    p.add_argument("--input", required=True)
    p.add_argument("--activity", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--train-len", dest="train_len", type=int, default=None)
    p.add_argument("--block", type=int, default=None)
    p.add_argument("--n-blocks", dest="n_blocks", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("auth", help="decide one window against a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--window", required=True)
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_auth)

    p = sub.add_parser("simulate", help="replay a scenario with energy accounting")
    p.add_argument("--profile", required=True)
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--sensor", default=None)
    p.add_argument("--power-profiles", dest="power_profiles", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("energy", help="duty-cycle energy arithmetic")
    p.add_argument("--sensor", default=None)
    p.add_argument("--duty", type=float, default=None)
    p.add_argument("--schedule", default=None)
    p.add_argument("--power-profiles", dest="power_profiles", default=None)
    p.add_argument("--out", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("profile", help="manage activity profiles")
    psub = p.add_subparsers(dest="profile_command", required=True)

    q = psub.add_parser("init", help="enroll activities from a CSV recording")
    q.add_argument("--input", required=True)
    q.add_argument("--user", default=None)
    q.add_argument("--out", required=True)
    _add_common(q)
    q.set_defaults(func=cmd_profile_init)

    q = psub.add_parser("update", help="authenticate a window and fold it in")
    q.add_argument("--profile", required=True)
    q.add_argument("--window", required=True)
    q.add_argument("--out", default=None)
    q.add_argument("--decision-out", dest="decision_out", default=None)
    _add_common(q)
    q.set_defaults(func=cmd_profile_update)

    q = psub.add_parser("show", help="print a profile summary")
    q.add_argument("--profile", required=True)
    q.set_defaults(func=cmd_profile_show)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputStage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CycleAuthError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
