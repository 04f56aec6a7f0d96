"""Command-line experiment runner.

Subcommands:
  run <spec-file> [--seed N] [--out PATH] [--threads N]   execute a sweep
  validate <spec-file>                                    check a spec file
  presets list                                            show bundled presets
"""

import argparse
import sys
from importlib import resources

from .config import load_spec
from .errors import RisD2DError
from .experiment import run_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="risd2d",
                                     description="Reflected-link rate experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment sweep")
    run_p.add_argument("spec_file")
    run_p.add_argument("--seed", type=int, default=None,
                       help="override all sampler/optimizer seeds")
    run_p.add_argument("--out", default=None, help="CSV output path")
    run_p.add_argument("--threads", type=int, default=1,
                       help="axis points evaluated in parallel")

    val_p = sub.add_parser("validate", help="validate a spec file")
    val_p.add_argument("spec_file")

    pre_p = sub.add_parser("presets", help="bundled experiment presets")
    pre_p.add_argument("action", choices=["list"])
    return parser


def preset_files():
    root = resources.files("risd2d") / "presets"
    return sorted(p for p in root.iterdir() if p.name.endswith(".yaml"))


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            spec = load_spec(args.spec_file)
            print(f"OK: {args.spec_file} ({len(spec.values)} axis points, "
                  f"{len(spec.methods)} methods)")
            return 0
        if args.command == "run":
            spec = load_spec(args.spec_file)
            out = args.out or spec.output
            if out is None:
                print("error: no output path (set --out or `output:` in the spec)",
                      file=sys.stderr)
                return 2
            rows = run_experiment(spec, seed=args.seed, out_path=out,
                                  threads=max(1, args.threads))
            print(f"wrote {len(rows)} rows to {out}")
            return 0
        if args.command == "presets":
            for path in preset_files():
                print(path)
            return 0
    except (RisD2DError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
