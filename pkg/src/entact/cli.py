"""Command-line driver: sweep orchestration and plot-ready dataset emission.

Commands: activate, certify, discord-match, witness, tomo-demo, net-verify.
Exit codes: 0 success, 2 config error, 3 certification failed in --strict
mode, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .qcore import BellKind, DensityMatrix, chi_q, fidelity, werner_mix
from .protocol import WaveplateSetting, premeasurement
from .measures import (
    OptimizerError,
    discord_bell_diagonal,
    discord_numeric,
    negativity,
    negativity_of_quantumness,
    negativity_theory,
)
from .epsnet import (
    NetRecord,
    NetSpec,
    bloch_vector,
    cap_radius,
    default_net,
    sphere_scan,
    verify_covering,
    verify_packing,
)
from .witnesses import expect, w2, w3
from .tomo import mc_errorbar, pauli_settings, reconstruct, simulate_counts

SCHEMA_LINE = "# schema=1"
DEFAULT_Q = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    q_values: tuple = DEFAULT_Q
    noise: str = "ideal"  # "ideal" or "werner:<v>"
    exposure: float = 1e4
    seed: int = 1
    grid_step: float = math.pi / 180
    output_dir: str = "out"
    mc_reps: int = 0  # 0 = exact values, no tomography loop
    net: NetSpec = field(default_factory=default_net)

    def validate(self):
        if not self.q_values:
            raise ConfigError("q_values must be nonempty")
        if any(not 0 <= q <= 1 for q in self.q_values):
            raise ConfigError("q values must lie in [0, 1]")
        if self.exposure <= 0:
            raise ConfigError("exposure must be positive")
        if self.grid_step <= 0:
            raise ConfigError("grid_step must be positive")
        self.werner_visibility()  # parses/validates the noise string

    def werner_visibility(self):
        """None in ideal mode, otherwise the visibility v of werner:<v>."""
        if self.noise == "ideal":
            return None
        if self.noise.startswith("werner:"):
            v = float(self.noise.split(":", 1)[1])
            if not 0 <= v <= 1:
                raise ConfigError("werner visibility must be in [0, 1]")
            return v
        raise ConfigError(f"unknown noise model {self.noise!r}")

    def input_state(self, q: float) -> DensityMatrix:
        v = self.werner_visibility()
        if v is None:
            return chi_q(q)
        m = (
            q * werner_mix(BellKind.PSI_PLUS, v).mat
            + 0.5 * (1 - q) * (werner_mix(BellKind.PHI_PLUS, v).mat
                               + werner_mix(BellKind.PSI_MINUS, v).mat)
        )
        return DensityMatrix(m, (2, 2))

    def hash(self) -> str:
        payload = asdict(self)
        payload["net"] = {"thetas": list(self.net.thetas), "phis": list(self.net.phis)}
        blob = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


def load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}")
        if "q_values" in raw:
            cfg.q_values = tuple(float(q) for q in raw["q_values"])
        for key in ("noise", "output_dir"):
            if key in raw:
                setattr(cfg, key, raw[key])
        for key in ("exposure", "grid_step"):
            if key in raw:
                setattr(cfg, key, float(raw[key]))
        for key in ("seed", "mc_reps"):
            if key in raw:
                setattr(cfg, key, int(raw[key]))
        if "net" in raw:
            cfg.net = NetSpec(tuple(raw["net"]["thetas"]), tuple(raw["net"]["phis"]))
    # flags override file fields
    for attr, flag in [("noise", "noise"), ("output_dir", "out")]:
        v = getattr(args, flag.replace("-", "_"), None)
        if v is not None:
            setattr(cfg, attr, v)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "exposure", None) is not None:
        cfg.exposure = args.exposure
    if getattr(args, "grid_step", None) is not None:
        cfg.grid_step = args.grid_step
    if getattr(args, "mc_reps", None) is not None:
        cfg.mc_reps = args.mc_reps
    cfg.validate()
    return cfg


def parse_angle(text: str) -> float:
    """Angle given in degrees ('15') or as a fraction of pi ('1/12 pi', '0.25pi')."""
    t = text.strip().lower()
    if t.endswith("pi"):
        frac = t[:-2].strip().rstrip("*").strip()
        if not frac:
            return math.pi
        if "/" in frac:
            num, den = frac.split("/")
            return float(num) / float(den) * math.pi
        return float(frac) * math.pi
    return math.radians(float(text))


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _write_csv(path: Path, header: str, rows, cfg: ExperimentConfig):
    path.parent.mkdir(parents=True, exist_ok=True)
    tag = cfg.hash()
    with open(path, "w") as fh:
        fh.write(SCHEMA_LINE + "\n")
        fh.write(header + ",cfg_hash,seed\n")
        for row in rows:
            fh.write(",".join(_fmt(x) if isinstance(x, float) else str(x) for x in row)
                     + f",{tag},{cfg.seed}\n")


def _noisy_records(cfg: ExperimentConfig, q: float):
    chi = cfg.input_state(q)
    records = []
    for s in cfg.net.settings():
        state = premeasurement(chi, s)
        records.append(NetRecord(s, bloch_vector(s), negativity(state, [0, 1]), state))
    return chi, records


def cmd_activate(cfg: ExperimentConfig) -> int:
    out = Path(cfg.output_dir)
    for q in cfg.q_values:
        chi = cfg.input_state(q)
        rows = []
        for s in cfg.net.settings():
            state = premeasurement(chi, s)
            theory = negativity_theory(q, s)
            if cfg.mc_reps > 0:
                mean, std = mc_errorbar(state, cfg.exposure, cfg.mc_reps, cfg.seed,
                                        "negativity")
                value, err = mean, std
            else:
                value, err = negativity(state, [0, 1]), 0.0
            rows.append((q, s.theta, s.phi, theory, value, err))
        _write_csv(out / f"activate_q{q:.2f}.csv",
                   "q,theta_rad,phi_rad,n_theory,n_value,n_std", rows, cfg)
    _write_manifest(out, cfg, "activate")
    return 0


def cmd_certify(cfg: ExperimentConfig, strict: bool = False) -> int:
    out = Path(cfg.output_dir)
    verdicts = {}
    for q in cfg.q_values:
        chi, records = _noisy_records(cfg, q)
        min_low, argmin, rows = sphere_scan(q, cfg.net, cfg.grid_step, records=records)
        verdicts[q] = min_low
        _write_csv(out / f"certify_q{q:.2f}.csv",
                   "q,theta_rad,phi_rad,n_theory,n_low1,n_low2,n_low",
                   [(q, *r) for r in rows], cfg)
        print(f"q={q}: min_low={min_low:.6f} at (theta={argmin.theta:.6f}, "
              f"phi={argmin.phi:.6f}) -> {'certified' if min_low > 0 else 'not certified'}")
    _write_manifest(out, cfg, "certify", {str(q): v for q, v in verdicts.items()})
    if strict and any(v <= 0 for q, v in verdicts.items() if q > 0):
        return 3
    return 0


def cmd_discord_match(cfg: ExperimentConfig) -> int:
    out = Path(cfg.output_dir)
    rows = []
    for q in cfg.q_values:
        chi, records = _noisy_records(cfg, q)
        min_net = min(r.negativity_measured for r in records)
        d_closed = discord_bell_diagonal(chi)
        status = "ok"
        try:
            d_num = discord_numeric(chi, seed=cfg.seed).value
            qn = negativity_of_quantumness(chi).value
        except OptimizerError as e:
            d_num, qn, status = float("nan"), float("nan"), f"optimizer-failed:{e}"
        rows.append((q, d_closed, d_num, min_net, qn, status))
    _write_csv(out / "discord_match.csv",
               "q,d_closed,d_numeric,min_net_negativity,q_n,status", rows, cfg)
    _write_manifest(out, cfg, "discord-match")
    return 0


def cmd_witness(cfg: ExperimentConfig) -> int:
    out = Path(cfg.output_dir)
    rows = []
    worst_setting = WaveplateSetting(math.pi / 4, 0.0)
    for q in cfg.q_values:
        chi = cfg.input_state(q)
        rho = premeasurement(chi, worst_setting)
        rows.append((q, expect(w2(), chi), expect(w3(), rho), 0.5 - q))
    _write_csv(out / "witness.csv", "q,w2_expect,w3_expect,theory", rows, cfg)
    _write_manifest(out, cfg, "witness")
    return 0


def cmd_tomo_demo(cfg: ExperimentConfig, q: float, theta: float, phi: float,
                  exact: bool = False) -> int:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    s = WaveplateSetting(theta, phi)
    truth = premeasurement(cfg.input_state(q), s)
    if exact:
        from .tomo import pauli_expectations_exact, reconstruct_from_expectations

        recon = reconstruct_from_expectations(pauli_expectations_exact(truth), 3)
    else:
        tables = simulate_counts(truth, pauli_settings(3), cfg.exposure, cfg.seed)
        recon = reconstruct(tables)
    f = fidelity(recon, truth)
    (out / "tomo_truth.json").write_text(truth.to_json())
    (out / "tomo_reconstructed.json").write_text(recon.to_json())
    print(f"q={q} theta={s.theta:.6f} phi={s.phi:.6f} exposure={cfg.exposure:g} "
          f"fidelity={f:.6f}")
    _write_manifest(out, cfg, "tomo-demo", {"fidelity": f})
    return 0


def cmd_net_verify(cfg: ExperimentConfig, epsilon: float = 0.5,
                   resolution: int = 10_000) -> int:
    covered, gap = verify_covering(cfg.net, epsilon, resolution)
    packed, dmin = verify_packing(cfg.net, epsilon)
    print(f"epsilon={epsilon}: covering={'pass' if covered else 'FAIL'} "
          f"(worst gap {gap:.6f}), packing={'pass' if packed else 'FAIL'} "
          f"(min pairwise {dmin:.6f})")
    print(f"cap base radius a_eps = {cap_radius(epsilon):.6f}, "
          f"a_eps/2 = {cap_radius(epsilon / 2):.6f}")
    print(f"net is an epsilon-net at epsilon={epsilon}: "
          f"{'yes' if covered and packed else 'no'}")
    return 0


def _write_manifest(out: Path, cfg: ExperimentConfig, command: str, extra=None):
    out.mkdir(parents=True, exist_ok=True)
    payload = asdict(cfg)
    payload["net"] = {"thetas": list(cfg.net.thetas), "phis": list(cfg.net.phis)}
    manifest = {"command": command, "config": payload, "cfg_hash": cfg.hash()}
    if extra:
        manifest["results"] = extra
    (out / f"manifest_{command.replace('-', '_')}.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True)
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entact", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--noise", help="ideal | werner:<v>")
        sp.add_argument("--exposure", type=float)
        sp.add_argument("--grid-step", dest="grid_step", type=float)
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--mc-reps", dest="mc_reps", type=int)

    for name in ("activate", "certify", "discord-match", "witness"):
        sp = sub.add_parser(name)
        common(sp)
        if name == "certify":
            sp.add_argument("--strict", action="store_true",
                            help="exit 3 when any q > 0 fails to certify")

    sp = sub.add_parser("tomo-demo")
    common(sp)
    sp.add_argument("--q", type=float, default=0.2)
    sp.add_argument("--theta", default="1/12 pi",
                    help="degrees or a pi fraction like '1/12 pi'")
    sp.add_argument("--phi", default="1/6 pi")
    sp.add_argument("--exact", action="store_true",
                    help="use exact expectation values instead of counts")

    sp = sub.add_parser("net-verify")
    common(sp)
    sp.add_argument("--epsilon", type=float, default=0.5)
    sp.add_argument("--resolution", type=int, default=10_000)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    try:
        if args.command == "activate":
            return cmd_activate(cfg)
        if args.command == "certify":
            return cmd_certify(cfg, strict=args.strict)
        if args.command == "discord-match":
            return cmd_discord_match(cfg)
        if args.command == "witness":
            return cmd_witness(cfg)
        if args.command == "tomo-demo":
            return cmd_tomo_demo(cfg, args.q, parse_angle(args.theta),
                                 parse_angle(args.phi), exact=args.exact)
        if args.command == "net-verify":
            return cmd_net_verify(cfg, args.epsilon, args.resolution)
    except OptimizerError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return 4
    except OSError as e:
        print(f"I/O failure: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
