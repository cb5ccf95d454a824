"""Batch front door: subcommands, config handling, CSV/JSON persistence.

Every run is driven by an effective RunConfig (defaults overlaid with the
optional --config JSON file), writes deterministic CSV (fixed column order,
17-significant-digit scientific floats, '#' metadata headers), and finishes
with a RunRecord JSON whose manifest carries sha256 hashes of every emitted
file.  Exit codes: 0 success, 2 config error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import classical, oracle, packets, soft_ceiling, wkb_momentum, wkb_position
from .classical import PathClass
from .errors import CeilingWkbError, ConfigError, SchemaError

VERSION = "1.0.0"


# ---------------------------------------------------------------------------
# Formatting and persistence


def fmt(v) -> str:
    """17 significant digits, scientific: enough to round-trip a float64."""
    v = float(v)
    return f"{v:.16e}"


def _grid(spec, name):
    try:
        start, stop, step = (float(s) for s in spec)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"grid {name!r} must be [start, stop, step]") from exc
    if step <= 0.0 or stop < start:
        raise SchemaError(f"grid {name!r} must have step > 0 and stop >= start")
    n = int(round((stop - start) / step))
    return start + step * np.arange(n + 1)


def _branch_label(tags) -> str:
    order = [PathClass.TYPE_I, PathClass.TYPE_II, PathClass.TYPE_III,
             PathClass.BOUNCE, PathClass.CRITICAL, PathClass.FORBIDDEN]
    return "|".join(str(b) for b in order if b in tags)


class Emitter:
    """Collects output files and writes the RunRecord manifest."""

    def __init__(self, out_dir: Path, config: dict):
        self.out_dir = out_dir
        self.config = config
        self.files = []
        out_dir.mkdir(parents=True, exist_ok=True)

    def write_csv(self, name: str, header_cols, rows, meta=None):
        lines = [f"# ceilingwkb {VERSION}", f"# subcommand: {self.config['subcommand']}"]
        for key in sorted(meta or {}):
            lines.append(f"# {key}: {meta[key]}")
        lines.append(",".join(header_cols))
        lines.extend(",".join(row) for row in rows)
        path = self.out_dir / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        self.files.append(path)
        return path

    def finish(self, started: float) -> Path:
        manifest = {}
        for path in self.files:
            manifest[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()
        record = {
            "config": self.config,
            "version": VERSION,
            "wall_clock_s": time.time() - started,
            "manifest": manifest,
        }
        path = self.out_dir / "run_record.json"
        path.write_text(json.dumps(record, indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")
        return path


# ---------------------------------------------------------------------------
# Subcommands


def cmd_classify(config: dict, emitter: Emitter):
    mode = config["mode"]
    xs = _grid(config["x"], "x")
    ts = _grid(config["t"], "t")
    rows = []
    if mode == "position":
        ys = _grid(config["y"], "y")
        header = ["y", "x", "t", "branches", "b", "critical_distance"]
        for t in ts:
            for x in xs:
                for y in ys:
                    cls = classical.classify_position_paths(y, x, t)
                    if PathClass.BOUNCE in cls:
                        b = classical.bounce_time_position(y, x, t)
                    elif PathClass.CRITICAL in cls:
                        b = t - np.sqrt(x)  # degenerate graze time
                    else:
                        b = float("nan")
                    rows.append([fmt(y), fmt(x), fmt(t), _branch_label(cls),
                                 fmt(b), fmt(cls.critical_distance)])
    elif mode == "momentum":
        ps = _grid(config["p"], "p")
        header = ["p", "x", "t", "branches", "b", "critical_distance"]
        for t in ts:
            for x in xs:
                for p in ps:
                    cls = classical.classify_momentum_paths(p, x, t)
                    if PathClass.BOUNCE in cls or PathClass.CRITICAL in cls:
                        b = classical.bounce_time_momentum_closed_form(p, x, t)
                    else:
                        b = float("nan")
                    rows.append([fmt(p), fmt(x), fmt(t), _branch_label(cls),
                                 fmt(b), fmt(cls.critical_distance)])
    else:
        raise SchemaError(f"classify mode must be position or momentum, got {mode!r}")
    emitter.write_csv("classify.csv", header, rows, meta={"mode": mode})


def cmd_propagate(config: dict, emitter: Emitter):
    mode = config["mode"]
    xs = _grid(config["x"], "x")
    ts = _grid(config["t"], "t")
    rows = []
    if mode == "position":
        ys = _grid(config["y"], "y")
        header = ["y", "x", "t", "re_direct", "im_direct", "re_bounce", "im_bounce",
                  "re_dirichlet", "im_dirichlet", "re_free", "im_free", "flag"]
        for t in ts:
            for x in xs:
                for y in ys:
                    d = wkb_position.propagator_direct_y(y, x, t)
                    b = wkb_position.propagator_bounce_y(y, x, t)
                    c = wkb_position.propagator_dirichlet_y(y, x, t)
                    free = oracle.free_propagator(y, x, t)
                    rows.append([fmt(y), fmt(x), fmt(t),
                                 fmt(d.value.real), fmt(d.value.imag),
                                 fmt(b.value.real), fmt(b.value.imag),
                                 fmt(c.value.real), fmt(c.value.imag),
                                 fmt(free.real), fmt(free.imag), c.flag.value])
    elif mode == "momentum":
        ps = _grid(config["p"], "p")
        header = ["p", "x", "t", "re_direct", "im_direct", "re_bounce", "im_bounce",
                  "re_dirichlet", "im_dirichlet", "flag"]
        for t in ts:
            for x in xs:
                for p in ps:
                    d = wkb_momentum.propagator_direct_p(p, x, t)
                    b = wkb_momentum.propagator_bounce_p(p, x, t)
                    c = wkb_momentum.propagator_dirichlet_p(p, x, t)
                    rows.append([fmt(p), fmt(x), fmt(t),
                                 fmt(d.value.real), fmt(d.value.imag),
                                 fmt(b.value.real), fmt(b.value.imag),
                                 fmt(c.value.real), fmt(c.value.imag), c.flag.value])
    else:
        raise SchemaError(f"propagate mode must be position or momentum, got {mode!r}")
    emitter.write_csv("propagate.csv", header, rows, meta={"mode": mode})


def cmd_packet_evolve(config: dict, emitter: Emitter):
    x = float(config["x"])
    t = float(config["t"])
    gamma = float(config["gamma"])
    pbar = float(config["pbar"])
    ybars = _grid(config["ybar"], "ybar")
    qconf = packets.QuadratureConfig(
        atol=float(config.get("atol", 1e-10)),
        rtol=float(config.get("rtol", 1e-8)),
        max_subdivisions=int(config.get("max_subdivisions", 4000)),
        truncation_k=float(config.get("truncation_k", 6.0)))
    header = ["ybar",
              "re_pos_direct", "im_pos_direct", "re_pos_bounce", "im_pos_bounce",
              "re_pos_total", "im_pos_total",
              "re_mom_direct", "im_mom_direct", "re_mom_bounce", "im_mom_bounce",
              "re_mom_total", "im_mom_total", "rel_disagreement"]
    rows = []
    for ybar in ybars:
        packet = packets.GaussianPacket(float(ybar), pbar, gamma)
        pos = packets.evolve_position(packet, x, t, qconf)
        mom = packets.evolve_momentum(packet, x, t, qconf)
        scale = max(abs(pos.total), abs(mom.total), 1e-300)
        rows.append([fmt(ybar),
                     fmt(pos.direct_contribution.real), fmt(pos.direct_contribution.imag),
                     fmt(pos.bounce_contribution.real), fmt(pos.bounce_contribution.imag),
                     fmt(pos.total.real), fmt(pos.total.imag),
                     fmt(mom.direct_contribution.real), fmt(mom.direct_contribution.imag),
                     fmt(mom.bounce_contribution.real), fmt(mom.bounce_contribution.imag),
                     fmt(mom.total.real), fmt(mom.total.imag),
                     fmt(abs(pos.total - mom.total) / scale)])
    meta = {"x": fmt(x), "t": fmt(t), "gamma": fmt(gamma), "pbar": fmt(pbar)}
    emitter.write_csv("packet_evolve.csv", header, rows, meta=meta)


def cmd_caustic_sweep(config: dict, emitter: Emitter):
    n_list = [int(n) for n in config.get("n_list", [6, 30])]
    family_rows, envelope_rows = [], []
    for n in n_list:
        sconf = soft_ceiling.SoftPotentialConfig(
            n=n,
            p0_grid=tuple(config.get("p0_grid",
                                     soft_ceiling.SoftPotentialConfig().p0_grid)),
            t_max=float(config.get("t_max", 3.0)),
            sample_step=float(config.get("sample_step", 0.01)))
        family = soft_ceiling.sweep_family(sconf)
        for i, p0 in enumerate(family.p0_grid):
            flagged = "1" if family.unstable[i] else "0"
            for j, tau in enumerate(family.tau):
                q = family.q[i, j]
                if np.isnan(q):
                    break  # truncated: post-floor return, artifact of the model
                family_rows.append([str(n), fmt(p0), fmt(tau), fmt(q),
                                    fmt(family.p[i, j]), flagged])
        curve = soft_ceiling.detect_envelope(family)
        for tt, xx in curve.points:
            envelope_rows.append([str(n), fmt(tt), fmt(xx),
                                  fmt(soft_ceiling.hard_wall_critical_path(tt))])
    emitter.write_csv("family.csv", ["n", "p0", "tau", "q", "p", "unstable"],
                      family_rows)
    emitter.write_csv("envelope.csv", ["n", "t", "x", "x_critical_path"],
                      envelope_rows)


def cmd_residual_check(config: dict, emitter: Emitter):
    y = float(config.get("y", 4.0))
    x = float(config.get("x", 2.0))
    t = float(config.get("t", 1.0))
    h = float(config.get("h", 1e-3))
    rows = []

    def u_free(xx, tt):
        return oracle.free_propagator(y, xx, tt)

    def u_direct(xx, tt):
        return wkb_position.propagator_direct_y(y, xx, tt).value

    def u_bounce(xx, tt):
        return wkb_position.propagator_bounce_y(y, xx, tt).value

    for label, handle in (("free", u_free), ("direct", u_direct), ("bounce", u_bounce)):
        rows.append([label, fmt(oracle.schrodinger_residual(handle, x, t, h=h))])
    report = oracle.image_method_falsifiers(y, x, t, h=h)
    rows.append(["image_boundary_trap", fmt(report.boundary_residual)])
    rows.append(["image_equation_trap", fmt(report.equation_residual)])
    rows.append(["fd_baseline", fmt(report.fd_baseline)])
    meta = {"y": fmt(y), "x": fmt(x), "t": fmt(t), "h": fmt(h)}
    emitter.write_csv("residuals.csv", ["quantity", "value"], rows, meta=meta)


_SUBCOMMANDS = {
    "classify": (cmd_classify, {"mode": "position", "y": [0.25, 12.0, 0.25],
                                "x": [4.0, 4.0, 1.0], "t": [5.0, 5.0, 1.0]}),
    "propagate": (cmd_propagate, {"mode": "position", "y": [0.5, 10.0, 0.5],
                                  "x": [4.0, 4.0, 1.0], "t": [5.0, 5.0, 1.0]}),
    "packet-evolve": (cmd_packet_evolve, {"x": 4.0, "t": 5.0, "gamma": 2.0,
                                          "pbar": -6.0, "ybar": [4.0, 15.0, 0.25]}),
    "caustic-sweep": (cmd_caustic_sweep, {"n_list": [6, 30]}),
    "residual-check": (cmd_residual_check, {"y": 4.0, "x": 2.0, "t": 1.0, "h": 1e-3}),
}


# ---------------------------------------------------------------------------
# Entry point


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ceilingwkb",
        description="Semiclassical propagators for a particle under a ceiling "
                    "in a uniform field.")
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--threads", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.time()
    try:
        handler, defaults = _SUBCOMMANDS[args.subcommand]
        config = dict(defaults)
        config.update(_load_config(args.config))
        config["subcommand"] = args.subcommand
        config["threads"] = args.threads
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
    except (ConfigError, SchemaError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    emitter = Emitter(Path(args.out), config)
    try:
        handler(config, emitter)
    except (ConfigError, SchemaError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CeilingWkbError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    emitter.finish(started)
    return 0


if __name__ == "__main__":
    sys.exit(main())
