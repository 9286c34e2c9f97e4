"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage error,
3 a resource bound (orbit ceiling or degree-3 rank bound) was exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import verify
from .charmap import dynkin_index_group, fundamental_indices
from .gammafilt import SCHEMA_VERSION, RankBoundError, gamma2_torsion, gamma3_torsion
from .rootsys import (DEFAULT_ORBIT_CEILING, InvalidTypeError, OrbitCeilingError, RootDatum, dominant_representative,
                      fundamental_group, invariant_form_q, long_roots, orbit_array, parse_type, roots, seed_orbit,
                      short_roots, weyl_group_order)
from .symtrunc import format_polynomial

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
ENV_PREFIX = "GAMMATORSION_"


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    type_spec: str | None = None
    output_format: str = "plain"
    orbit_ceiling: int = DEFAULT_ORBIT_CEILING
    cache_dir: Path | None = None
    degree: int = 2
    threads: int = 1
    suite: str | None = None
    weight: tuple[int, ...] | None = None


# ---------------------------------------------------------------- orbit cache

def _canonical(orbit) -> str:
    return json.dumps([[int(x) for x in row] for row in orbit], separators=(",", ":"))


class OrbitCache:
    """Orbits on disk, one JSON file per (type, dominant weight).

    Each file stores the sorted orbit and a sha256 of its canonical serialization.
    A file that fails the checksum or does not parse is recomputed and overwritten.
    """

    def __init__(self, root: Path):
        self.root = Path(root)

    def path(self, d: RootDatum, dom: Sequence[int]) -> Path:
        return self.root / d.name / ("_".join(str(x) for x in dom) + ".json")

    def load(self, d: RootDatum, lam: Sequence[int]):
        dom = dominant_representative(d, lam)
        p = self.path(d, dom)
        if not p.exists():
            return None
        try:
            data = json.loads(p.read_text())
            orbit = data["orbit"]
            ok = (data.get("schema_version") == SCHEMA_VERSION and data["type"] == d.name
                  and tuple(data["dominant"]) == dom and data["size"] == len(orbit)
                  and data["sha256"] == hashlib.sha256(_canonical(orbit).encode()).hexdigest())
        except (ValueError, KeyError, TypeError):
            ok = False
        if not ok:
            warnings.warn(f"corrupt orbit cache entry {p}; recomputing", RuntimeWarning, stacklevel=2)
            return None
        return orbit

    def store(self, d: RootDatum, lam: Sequence[int], orbit) -> Path:
        dom = dominant_representative(d, lam)
        p = self.path(d, dom)
        p.parent.mkdir(parents=True, exist_ok=True)
        body = _canonical(orbit)
        data = {"schema_version": SCHEMA_VERSION, "type": d.name, "dominant": list(dom), "size": len(orbit),
                "sha256": hashlib.sha256(body.encode()).hexdigest(), "orbit": json.loads(body)}
        tmp = p.with_suffix(".tmp")
        tmp.write_text(json.dumps(data, separators=(",", ":")))
        tmp.replace(p)
        return p

    def fetch(self, d: RootDatum, lam: Sequence[int], ceiling: int):
        """Orbit array for ``lam``, seeding the in-process memo from disk when possible."""
        cached = self.load(d, lam)
        if cached is not None:
            try:
                seed_orbit(d, lam, cached)
            except ValueError:
                warnings.warn(f"orbit cache entry for {d.name} {tuple(lam)} is inconsistent; recomputing",
                              RuntimeWarning, stacklevel=2)
                cached = None
        arr = orbit_array(d, lam, ceiling)
        if cached is None:
            self.store(d, lam, arr)
        return arr


def _warm_fundamental(cfg: CliConfig, d: RootDatum) -> None:
    if cfg.cache_dir is None:
        return
    cache = OrbitCache(cfg.cache_dir)
    for i in range(d.rank):
        cache.fetch(d, d.fundamental_weight(i), cfg.orbit_ceiling)


# ---------------------------------------------------------------- commands

def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _fg_string(invariant_factors) -> str:
    return " + ".join(f"Z/{k}" for k in invariant_factors) or "0"


def cmd_info(cfg: CliConfig, d: RootDatum) -> tuple[int, str]:
    _warm_fundamental(cfg, d)
    fg = fundamental_group(d)
    q = invariant_form_q(d)
    n_long, n_short = len(long_roots(d)), len(short_roots(d))
    idx = fundamental_indices(d, cfg.orbit_ceiling, cfg.threads)
    ng = dynkin_index_group(d, cfg.orbit_ceiling, cfg.threads)
    if cfg.output_format == "json":
        return EXIT_OK, _dump({
            "schema_version": SCHEMA_VERSION, "command": "info", "type": d.name, "rank": d.rank,
            "cartan": [list(r) for r in d.cartan], "coroot_norm": list(d.coroot_norm),
            "roots": {"total": len(roots(d)), "long": n_long, "short": n_short},
            "weyl_group_order": weyl_group_order(d),
            "fundamental_group": {"invariant_factors": list(fg.invariant_factors), "order": fg.order,
                                  "images": [list(x) for x in fg.images]},
            "q": format_polynomial(q), "fundamental_indices": idx, "dynkin_index": ng})
    lines = [f"type {d.name} (rank {d.rank})", "Cartan matrix <alpha_j, alpha_i^vee>:"]
    lines += ["  " + " ".join(f"{x:3d}" for x in row) for row in d.cartan]
    lines.append(f"roots: {len(roots(d))} ({n_long} long, {n_short} short); |W| = {weyl_group_order(d)}")
    lines.append(f"Lambda/Lambda_r = {_fg_string(fg.invariant_factors)} (order {fg.order})")
    if fg.invariant_factors:
        lines += [f"  w{i + 1} -> {', '.join(map(str, img))}" for i, img in enumerate(fg.images)]
    lines.append(f"q = {format_polynomial(q)}")
    lines.append(f"N(W w_i) = {idx}")
    lines.append(f"N(G) = {ng}")
    return EXIT_OK, "\n".join(lines)


def cmd_torsion(cfg: CliConfig, d: RootDatum) -> tuple[int, str]:
    _warm_fundamental(cfg, d)
    if cfg.degree == 2:
        rep = gamma2_torsion(d, cfg.orbit_ceiling, cfg.threads)
    else:
        rep = gamma3_torsion(d, cfg.orbit_ceiling, cfg.threads)
    if cfg.output_format == "json":
        return EXIT_OK, _dump(rep.to_json())
    k = rep.degree
    lines = [f"type {d.name}: gamma^{k}/gamma^{k + 1} modulo I' = {rep.group}",
             f"torsion: {rep.torsion}"]
    if k == 3:
        lines.append(f"2 * torsion: {rep.doubled()}")
    if rep.theta_order is not None:
        lines.append(f"order of theta: {rep.theta_order}")
    lines += [f"  {g}" for g in rep.generators]
    return EXIT_OK, "\n".join(lines)


def cmd_verify(cfg: CliConfig) -> tuple[int, str]:
    checks = verify.run_suite(cfg.suite, cfg.orbit_ceiling, cfg.threads)
    ok = all(c.passed for c in checks)
    code = EXIT_OK if ok else EXIT_CHECK_FAILED
    if cfg.output_format == "json":
        return code, _dump({"schema_version": SCHEMA_VERSION, "command": "verify", "suite": cfg.suite,
                            "passed": ok, "checks": [c.to_json() for c in checks]})
    failed = sum(not c.passed for c in checks)
    lines = [c.line() for c in checks]
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return code, "\n".join(lines)


def cmd_orbit(cfg: CliConfig, d: RootDatum) -> tuple[int, str]:
    lam = cfg.weight
    if len(lam) != d.rank:
        raise UsageError(f"weight has {len(lam)} coordinates but {d.name} has rank {d.rank}")
    if cfg.cache_dir is not None:
        arr = OrbitCache(cfg.cache_dir).fetch(d, lam, cfg.orbit_ceiling)
    else:
        arr = orbit_array(d, lam, cfg.orbit_ceiling)
    rows = [[int(x) for x in r] for r in arr]
    if cfg.output_format == "json":
        return EXIT_OK, _dump({"schema_version": SCHEMA_VERSION, "command": "orbit", "type": d.name,
                               "weight": list(lam), "dominant": list(dominant_representative(d, lam)),
                               "size": len(rows), "orbit": rows})
    lines = [f"W({', '.join(map(str, lam))}) in {d.name}: {len(rows)} weights"]
    lines += ["  (" + ", ".join(map(str, r)) + ")" for r in rows]
    return EXIT_OK, "\n".join(lines)


# ---------------------------------------------------------------- parsing

def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {s}")
    return v


def _weight(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in s.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"weight must be comma-separated integers: {s!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["plain", "json"], default=None, dest="output_format")
    common.add_argument("--orbit-ceiling", type=_positive_int, default=None)
    common.add_argument("--cache-dir", type=Path, default=None)
    common.add_argument("--threads", type=_positive_int, default=None)

    parser = argparse.ArgumentParser(prog="gammatorsion", description=(
        "Exact gamma-filtration torsion, Dynkin indices and invariant forms for split simple groups."),
        epilog=f"Environment: {ENV_PREFIX}FORMAT, {ENV_PREFIX}ORBIT_CEILING, {ENV_PREFIX}CACHE_DIR, "
               f"{ENV_PREFIX}THREADS, {ENV_PREFIX}DEGREE (command-line flags take precedence).")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("info", parents=[common], help="Cartan matrix, roots, center, q and N(G)")
    p.add_argument("type_spec", metavar="TYPE")
    p = sub.add_parser("torsion", parents=[common], help="torsion of gamma^2/gamma^3 or gamma^3/gamma^4")
    p.add_argument("type_spec", metavar="TYPE")
    p.add_argument("--degree", type=int, choices=[2, 3], default=None)
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=list(verify.SUITES) + ["all"])
    p = sub.add_parser("orbit", parents=[common], help="print a Weyl orbit")
    p.add_argument("type_spec", metavar="TYPE")
    p.add_argument("weight", type=_weight, metavar="WEIGHT", help="coordinates in the w basis, e.g. 1,0,0")
    return parser


def _env(name: str):
    v = os.environ.get(ENV_PREFIX + name)
    return v if v not in (None, "") else None


def resolve_config(ns: argparse.Namespace) -> CliConfig:
    """Merge parsed flags with environment variables; flags win."""
    def pick(flag, env_name, convert, default):
        if flag is not None:
            return flag
        raw = _env(env_name)
        if raw is None:
            return default
        try:
            return convert(raw)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"bad value for {ENV_PREFIX}{env_name}: {exc}")

    def fmt(s):
        if s not in ("plain", "json"):
            raise ValueError(f"expected plain or json, got {s!r}")
        return s

    def deg(s):
        if int(s) not in (2, 3):
            raise ValueError(f"expected 2 or 3, got {s!r}")
        return int(s)

    return CliConfig(
        command=ns.command,
        type_spec=getattr(ns, "type_spec", None),
        output_format=pick(ns.output_format, "FORMAT", fmt, "plain"),
        orbit_ceiling=pick(ns.orbit_ceiling, "ORBIT_CEILING", _positive_int, DEFAULT_ORBIT_CEILING),
        cache_dir=pick(ns.cache_dir, "CACHE_DIR", Path, None),
        degree=pick(getattr(ns, "degree", None), "DEGREE", deg, 2),
        threads=pick(ns.threads, "THREADS", _positive_int, 1),
        suite=getattr(ns, "suite", None),
        weight=getattr(ns, "weight", None),
    )


def _error(cfg_format: str, kind: str, message: str, code: int) -> int:
    if cfg_format == "json":
        print(_dump({"schema_version": SCHEMA_VERSION, "error": {"kind": kind, "message": message,
                                                                 "exit_code": code}}))
    print(f"error: {message}", file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = ns.output_format or _env("FORMAT") or "plain"
    try:
        cfg = resolve_config(ns)
        d = parse_type(cfg.type_spec) if cfg.type_spec is not None else None
        if cfg.command == "info":
            code, text = cmd_info(cfg, d)
        elif cfg.command == "torsion":
            code, text = cmd_torsion(cfg, d)
        elif cfg.command == "verify":
            code, text = cmd_verify(cfg)
        else:
            code, text = cmd_orbit(cfg, d)
    except (UsageError, InvalidTypeError) as exc:
        return _error(fmt, "usage", str(exc), EXIT_USAGE)
    except OrbitCeilingError as exc:
        return _error(fmt, "orbit_ceiling", str(exc), EXIT_RESOURCE)
    except RankBoundError as exc:
        return _error(fmt, "rank_bound", str(exc), EXIT_RESOURCE)
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
