"""Command-line front end: ``rcpt run|preset|list-presets|validate``.

Exit codes: 0 success, 2 configuration error, 3 solver error (at least one
grid point failed; the remaining points are still written).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .errors import ConfigError
from .scenarios import PRESETS, grid_points, load_config, preset, resolve, run_scenario

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


def _out_dir(arg, name: str) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get("RCPT_OUT_DIR", "rcpt-out")) / name


def _execute(raw: dict, out, workers) -> int:
    resolved = resolve(raw)
    target = _out_dir(out, resolved["name"])
    manifest = run_scenario(resolved, target, workers)
    print(f"wrote {len(manifest['files'])} files and manifest.json to {target} "
          f"({len(manifest['points'])} points, {manifest['wall_time_s']:.1f} s)")
    if manifest["failures"]:
        print(f"{manifest['failures']} point(s) failed:", file=sys.stderr)
        for p in manifest["points"]:
            for rep, r in p["results"].items():
                if r["status"] != "ok":
                    print(f"  [{p['index']}] {rep} {p['sweep']}: {r['status']}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rcpt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("run", help="run a TOML scenario (or re-run a manifest.json)")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (default $RCPT_OUT_DIR/<name>)")
    p.add_argument("--workers", type=int, help="parallel worker processes (0 = all cores)")

    p = sub.add_parser("preset", help="run a built-in figure preset")
    p.add_argument("name")
    p.add_argument("--out", help="output directory (default $RCPT_OUT_DIR/<name>)")
    p.add_argument("--workers", type=int, help="parallel worker processes (0 = all cores)")

    sub.add_parser("list-presets", help="list the built-in presets")

    p = sub.add_parser("validate", help="check a scenario without running it")
    p.add_argument("config")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.verb == "list-presets":
            for name, cfg in PRESETS.items():
                swept = ", ".join(s["parameter"] for s in cfg.get("sweep", []))
                print(f"{name:22s} model={cfg['model']:6s} sweep: {swept}")
            return EXIT_OK
        if args.verb == "validate":
            resolved = resolve(load_config(args.config))
            print(f"ok: model {resolved['model']}, {len(grid_points(resolved))} grid points, "
                  f"representations {', '.join(resolved['representations'])}")
            return EXIT_OK
        if args.verb == "preset":
            return _execute(preset(args.name), args.out, args.workers)
        return _execute(load_config(args.config), args.out, args.workers)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
