#!/usr/bin/env python3
"""
Command-line interface for the K^b(proj A(r,N)) engine and verification suites.
"""

import argparse
import json
import sys
import traceback
from typing import List, Optional

from colorama import Fore, Style
from colorama import init as colorama_init

from . import catalog, homotopy, spanmorph, verify
from .cache_manager import CacheManager
from .catalog import MalformedIdError, parse_id, realize
from .complexes import InvalidComplexError, cone
from .config_yaml import DEFAULT_CONFIG_PATH, RunConfig, load_run_config
from .logger import Logger
from .pathalg import NotComposableError, PathAlgebra, center_basis, make_arn, presentation_to_json
from .pseudofunctor import (
    ECHO_LABEL,
    TrivializationError,
    all_ones,
    check_consistency,
    system_from_json,
    trivialize,
)
from .reports import (
    COMPLEX_SCHEMA,
    COMPLEX_SCHEMA_ID,
    EXIT_CODES,
    USAGE_EXIT_CODE,
    combine_verdicts,
    dumps,
    render_dim_table,
    render_reports,
    validate_payload,
)

USAGE_ERRORS = (MalformedIdError, NotComposableError, InvalidComplexError, TrivializationError, ValueError,
                OSError, json.JSONDecodeError)


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=int, help="Number of projective-injective vertices r")
    common.add_argument("--N", type=int, help="Number of vertices N")
    common.add_argument("--prime", "-p", type=int, help="Field characteristic (default 32003)")
    common.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"), help="Degree window")
    common.add_argument("--format", choices=["json", "table"], help="Output format")
    common.add_argument("--cache-dir", help="Directory for cached JSON results")
    common.add_argument("--seed", type=int, help="Random seed for sampled searches")
    common.add_argument("--samples", type=int, help="Random samples in isomorphism and exactness searches")
    common.add_argument("--workers", type=int, help="Worker threads for Hom tables")
    common.add_argument("--config", "-c", help="YAML configuration file (flags win over it)")
    common.add_argument("--progress", action="store_true", default=None, help="Show progress bars")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging and tracebacks")
    return common


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments"""
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="kstandard",
        description="Exact computations in K^b(proj A(r,N)) and window-scale verification suites",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Print a catalog complex
  python kstandard/cli_kstandard.py object X[0,2] --r 1 --N 2

  # Hom in the homotopy category
  python kstandard/cli_kstandard.py hom X[0,1] X[0,1] --r 1 --N 2

  # Run a verification suite
  python kstandard/cli_kstandard.py check spanning --window -2 2 --r 2 --N 3
  python kstandard/cli_kstandard.py check rigidity --window -2 2 --scalars 1,2,3

Exit codes: 0 pass, 1 fail, 2 undetermined, 64 usage error.
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("algebra", parents=[common], help="Presentation, path basis and centre of A(r,N)")

    p_object = sub.add_parser("object", parents=[common], help="Realize a catalog id as a complex")
    p_object.add_argument("id", help="Catalog id, e.g. X[0,2], L[0,2;a=1], Z[0;a=2,b=1]")

    p_hom = sub.add_parser("hom", parents=[common], help="Hom in K^b between two catalog objects")
    p_hom.add_argument("x", help="Domain catalog id")
    p_hom.add_argument("y", help="Codomain catalog id")

    p_cone = sub.add_parser("cone", parents=[common], help="Cone of a spanning morphism")
    p_cone.add_argument("morph", help="Morphism id, e.g. c[l=0,m=1,n=2;a=1,b=1]")

    p_check = sub.add_parser("check", parents=[common], help="Run a verification suite")
    p_check.add_argument("suite", choices=list(verify.SUITES) + ["all"])
    p_check.add_argument("--scalars", type=_int_list, help="Rigidity scalars, e.g. 1,2,3")
    p_check.add_argument("--margin", type=int, help="Spanning margin around the window")
    p_check.add_argument("--exclude-families", type=lambda s: [f for f in s.split(",") if f],
                         default=(), help="Spanning families to leave out (spanning suite only)")

    p_center = sub.add_parser("center", parents=[common], help="Window centre of the homotopy category")
    p_center.add_argument("--triangle", action="store_true",
                          help="Impose compatibility with the shift (restriction to stalks reported)")

    p_triv = sub.add_parser("trivialize", parents=[common], help="Trivialize a scalar system")
    p_triv.add_argument("scalar_file", nargs="?", help="ScalarSystem JSON file")
    p_triv.add_argument("--template", action="store_true", help="Print the all-ones system for the window")

    return parser.parse_args(argv)


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_run_config(args.config or DEFAULT_CONFIG_PATH)
    return cfg.with_overrides(
        r=args.r,
        N=args.N,
        prime=args.prime,
        window=args.window,
        format=args.format,
        cache_dir=args.cache_dir,
        seed=args.seed,
        samples=args.samples,
        workers=args.workers,
        progress=args.progress,
        scalars=getattr(args, "scalars", None),
        spanning_margin=getattr(args, "margin", None),
    )


class KStandardRunner:
    def __init__(self, cfg: RunConfig, verbose: bool = False):
        self.cfg = cfg
        self.logger = Logger(cfg.log_file, "DEBUG" if verbose else cfg.log_level)
        self.cache = CacheManager(cfg.cache_dir, cfg.schema_version)
        self.alg = PathAlgebra(make_arn(cfg.r, cfg.N), cfg.prime)

    def emit(self, payload: dict, table: str):
        print(dumps(payload) if self.cfg.format == "json" else table)

    def cmd_algebra(self) -> int:
        alg = self.alg
        center = center_basis(alg)
        payload = {
            "schema": self.cfg.schema_version,
            "presentation": presentation_to_json(alg.presentation),
            "dim": alg.basis.dim,
            "projective_dims": [alg.basis.dim_projective(v) for v in range(alg.N)],
            "center": [alg.describe_global(z) for z in center],
        }
        lines = [
            f"{Style.BRIGHT}{alg.presentation.name}{Style.RESET_ALL} over F_{alg.prime}",
            f"  dim A = {alg.basis.dim}",
            "  dim P_v: " + ", ".join(f"P{v}={d}" for v, d in enumerate(payload["projective_dims"])),
            "  forbidden: " + ", ".join(f"α{a}α{b}" for a, b in sorted(alg.presentation.forbidden)),
            f"  centre (dim {len(center)}): " + "; ".join(payload["center"]),
        ]
        self.emit(payload, "\n".join(lines))
        return 0

    def cmd_object(self, text: str) -> int:
        cid = parse_id(text)
        x = realize(self.alg, cid)
        payload = validate_payload({"schema": COMPLEX_SCHEMA_ID, "id": str(catalog.canonical(cid)), "complex": x.to_json()},
                                   COMPLEX_SCHEMA)
        self.emit(payload, f"{Style.BRIGHT}{catalog.canonical(cid)}{Style.RESET_ALL}\n{x.describe()}")
        return 0

    def cmd_hom(self, x_text: str, y_text: str) -> int:
        x_id, y_id = parse_id(x_text), parse_id(y_text)
        x, y = realize(self.alg, x_id), realize(self.alg, y_id)
        params = {"r": self.cfg.r, "N": self.cfg.N, "p": self.cfg.prime}
        key = self.cache.key("hom", params, "hom", [str(x_id), str(y_id)])
        payload = self.cache.load("hom", key)
        if payload is None:
            space = homotopy.hom_kb(self.alg, x, y)
            payload = dict(space.to_json(), schema=self.cfg.schema_version, domain=str(x_id), codomain=str(y_id),
                           basis_text=[f.describe() for f in space.basis])
            self.cache.store("hom", key, payload)
        else:
            self.logger.info(f"hom: cached {key[:12]}")
        lines = [f"Hom_K({x_id}, {y_id}): dim {payload['dim']}"]
        for i, text in enumerate(payload["basis_text"]):
            lines.append(f" basis[{i}]:")
            lines.append(text)
        self.emit(payload, "\n".join(lines))
        return 0

    def cmd_cone(self, text: str) -> int:
        mid = spanmorph.parse_morph(text)
        f = spanmorph.realize_morph(self.alg, mid)
        c, _, _ = cone(self.alg, f)
        payload = validate_payload({"schema": COMPLEX_SCHEMA_ID, "id": f"cone({mid})", "complex": c.to_json()},
                                   COMPLEX_SCHEMA)
        self.emit(payload, f"{Style.BRIGHT}cone({mid}){Style.RESET_ALL}\n{c.describe()}")
        return 0

    def run_check(self, suite: str, exclude_families=()) -> dict:
        lo, hi = self.cfg.window
        request = {"suite": suite, "exclude": sorted(exclude_families)}
        key = self.cache.key("report", self.cfg.canonical(), "check", request)
        cached = self.cache.load("report", key)
        if cached is not None:
            self.logger.info(f"{suite}: cached report {key[:12]}")
            return cached
        if suite == "spanning" and exclude_families:
            report = verify.check_spanning(self.alg, lo, hi, self.cfg.spanning_margin, exclude_families,
                                           self.cfg.progress)
        else:
            report = verify.run_suite(self.alg, suite, lo, hi, self.cfg)
        payload = report.to_json()
        self.cache.store("report", key, payload)
        return payload

    def cmd_check(self, suite: str, exclude_families=()) -> int:
        suites = list(self.cfg.suites) if suite == "all" else [suite]
        payloads = [self.run_check(name, exclude_families) for name in suites]
        if self.cfg.format == "json":
            print(dumps(payloads[0] if len(payloads) == 1 else {"schema": self.cfg.schema_version,
                                                                "reports": payloads}))
        else:
            print(render_reports(payloads))
            homdim = [p for p in payloads if p["check"] == "homdim"]
            for p in homdim:
                print(render_dim_table(p["details"]["objects"], p["details"]["dims"]))
        return EXIT_CODES[combine_verdicts(p["verdict"] for p in payloads)]

    def cmd_center(self, triangle: bool) -> int:
        return self.cmd_check("restriction" if triangle else "center")

    def cmd_trivialize(self, path: Optional[str], template: bool) -> int:
        lo, hi = self.cfg.window
        if template:
            print(dumps(all_ones(self.alg, lo, hi).to_json()))
            return 0
        if path is None:
            raise ValueError("✗ Error: trivialize needs a scalar-system file (or --template)")
        with open(path, "r", encoding="utf-8") as f:
            system = system_from_json(json.load(f))
        report = check_consistency(self.alg, system, self.cfg.relation_max_chain)
        if not report.passed:
            self.emit(report.to_json(), render_reports([report.to_json()]))
            return EXIT_CODES["fail"]
        triv = trivialize(self.alg, system, self.cfg.relation_max_chain)
        payload = triv.to_json()
        lines = [f"{Fore.GREEN}✓ trivialized{Style.RESET_ALL} ({ECHO_LABEL})",
                 f"  components: {len(triv.components)}"]
        lines += [f"  {cid}: {value}" for cid, value in sorted(triv.objects.items(), key=lambda kv: kv[0].sort_key())]
        self.emit(payload, "\n".join(lines))
        return EXIT_CODES["pass"]


def main(argv: Optional[List[str]] = None) -> int:
    """Main function"""
    colorama_init()
    try:
        args = parse_arguments(argv)
    except SystemExit as e:
        return USAGE_EXIT_CODE if e.code not in (0, None) else 0
    try:
        cfg = build_config(args)
        runner = KStandardRunner(cfg, args.verbose)
        if args.command == "algebra":
            return runner.cmd_algebra()
        if args.command == "object":
            return runner.cmd_object(args.id)
        if args.command == "hom":
            return runner.cmd_hom(args.x, args.y)
        if args.command == "cone":
            return runner.cmd_cone(args.morph)
        if args.command == "check":
            return runner.cmd_check(args.suite, tuple(args.exclude_families))
        if args.command == "center":
            return runner.cmd_center(args.triangle)
        return runner.cmd_trivialize(args.scalar_file, args.template)
    except TrivializationError as e:
        message = str(e)
        print(message if message.startswith("✗ Error:") else f"✗ Error: {message}", file=sys.stderr)
        return EXIT_CODES["fail"]
    except USAGE_ERRORS as e:
        message = str(e)
        print(message if message.startswith("✗ Error:") else f"✗ Error: {message}", file=sys.stderr)
        if args.verbose:
            traceback.print_exc()
        return USAGE_EXIT_CODE
    except KeyboardInterrupt:
        print("\nOperation cancelled by user", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
